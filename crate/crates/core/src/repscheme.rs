//! Generic matrices and the coordinate ring of `rep_n A`.
//!
//! The variable `x_{ij,k}` (entry `(i, j)` of the `k`-th generic matrix) is
//! commutative variable number `(k-1) n^2 + (i-1) n + j`, so variables are
//! ordered by `(k, i, j)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Ring};
use crate::ncpoly::{CommPoly, NCPoly, Rational};
use crate::quiver::{bundle_dim, enumerate_dimvectors, rep_dim, DimVector, Quiver};

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    d: usize,
    relations: Vec<NCPoly>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    d: usize,
    relations: Vec<String>,
}

impl Presentation {
    pub fn new(d: usize, relations: Vec<NCPoly>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("a presentation needs at least one generator".into()));
        }
        for r in &relations {
            if r.d() != d {
                return Err(Error::AlphabetMismatch { left: d, right: r.d() });
            }
        }
        Ok(Presentation { d, relations })
    }

    pub fn free(d: usize) -> Result<Self> {
        Self::new(d, Vec::new())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawPresentation =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("presentation JSON: {e}")))?;
        let rels = raw.relations.iter().map(|r| NCPoly::parse(r, raw.d)).collect::<Result<Vec<_>>>()?;
        Self::new(raw.d, rels)
    }

    pub fn to_json(&self) -> String {
        let raw = RawPresentation { d: self.d, relations: self.relations.iter().map(ToString::to_string).collect() };
        serde_json::to_string(&raw).expect("presentation serializes")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.relations
    }
}

pub fn variable_index(n: usize, i: usize, j: usize, k: usize) -> usize {
    (k - 1) * n * n + (i - 1) * n + j
}

pub fn variable_names(n: usize, d: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(d * n * n);
    for k in 1..=d {
        for i in 1..=n {
            for j in 1..=n {
                out.push(format!("x_{i}_{j}_{k}"));
            }
        }
    }
    out
}

/// The generic matrix `X_k` over `Q[x_{ij,l}]` in `d n^2` variables.
pub fn generic_matrix(n: usize, d: usize, k: usize) -> Result<Matrix<CommPoly>> {
    if k == 0 || k > d {
        return Err(Error::GeneratorOutOfRange { index: k, d });
    }
    let nv = d * n * n;
    Ok(Matrix::from_fn(n, n, |i, j| {
        CommPoly::var(nv, variable_index(n, i + 1, j + 1, k)).expect("variable in range")
    }))
}

pub fn evaluate_at_generic(f: &NCPoly, n: usize) -> Result<Matrix<CommPoly>> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    let d = f.d();
    let gens = (1..=d).map(|k| generic_matrix(n, d, k)).collect::<Result<Vec<_>>>()?;
    let one = Matrix::identity(n, &CommPoly::zero(d * n * n));
    f.eval(&gens, &one)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPoly {
    pub relation: usize,
    pub i: usize,
    pub j: usize,
    pub poly: CommPoly,
}

impl LabeledPoly {
    pub fn label(&self) -> String {
        format!("f{}_{}{}", self.relation, self.i, self.j)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationIdeal {
    pub n: usize,
    pub nvars: usize,
    pub polys: Vec<LabeledPoly>,
}

/// All entries of all relations evaluated at generic matrices, `n^2` per
/// relation (zero entries included, so labels stay aligned).
pub fn relation_ideal(p: &Presentation, n: usize) -> Result<RelationIdeal> {
    let mut polys = Vec::new();
    for (r, f) in p.relations.iter().enumerate() {
        let m = evaluate_at_generic(f, n)?;
        for i in 0..n {
            for j in 0..n {
                polys.push(LabeledPoly { relation: r + 1, i: i + 1, j: j + 1, poly: m.get(i, j).clone() });
            }
        }
    }
    Ok(RelationIdeal { n, nvars: p.d * n * n, polys })
}

fn check_point<T: Ring>(p: &Presentation, pt: &[Matrix<T>]) -> Result<usize> {
    if pt.len() != p.d {
        return Err(Error::LengthMismatch { expected: p.d, found: pt.len() });
    }
    let n = pt.first().map_or(0, Matrix::rows);
    if n == 0 || pt.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch("points need d square matrices of one positive size".into()));
    }
    Ok(n)
}

/// Whether every relation vanishes at the point; entries may come from any
/// ring, e.g. dual numbers for tangent checks.
pub fn is_representation<T: Ring>(p: &Presentation, pt: &[Matrix<T>]) -> Result<bool> {
    check_point(p, pt)?;
    let one = pt[0].one_like();
    for f in &p.relations {
        if !f.eval(pt, &one)?.is_zero_matrix() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coordinates of a rational point in the variable order of the ideal.
pub fn point_coordinates(pt: &[Matrix<Rational>]) -> Vec<Rational> {
    pt.iter().flat_map(|m| m.entries().cloned()).collect()
}

pub fn ideal_vanishes_at(ideal: &RelationIdeal, coords: &[Rational]) -> Result<bool> {
    if coords.len() != ideal.nvars {
        return Err(Error::LengthMismatch { expected: ideal.nvars, found: coords.len() });
    }
    let one = Rational::from_integer(1.into());
    for lp in &ideal.polys {
        if !lp.poly.eval(coords, &one)?.is_zero_elem() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X ↦ g X g^{-1}` on every matrix of the point.
pub fn conjugate(pt: &[Matrix<Rational>], g: &Matrix<Rational>) -> Result<Vec<Matrix<Rational>>> {
    let g_inv = g.inverse()?;
    pt.iter().map(|x| g.rat_mul(x)?.rat_mul(&g_inv)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionRecord {
    pub alpha: DimVector,
    pub rep_dim: usize,
    pub bundle_dim: usize,
}

/// One record per dimension vector `α` with `|α| = n`.
pub fn decompose_rep_quiver(q: &Quiver, n: usize) -> Result<Vec<DecompositionRecord>> {
    enumerate_dimvectors(q.vertices(), n)
        .into_iter()
        .map(|alpha| {
            Ok(DecompositionRecord { rep_dim: rep_dim(q, &alpha)?, bundle_dim: bundle_dim(n, q, &alpha)?, alpha })
        })
        .collect()
}
