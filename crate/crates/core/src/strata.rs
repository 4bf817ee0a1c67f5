//! Substrata of `iss_m`, the representations `S~` of `Q~_n`, θ-stability and
//! local quiver settings.

use num_integer::binomial;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::matrix::Matrix;
use crate::ncpoly::{rat, Rational};
use crate::quiver::{
    bundle_dim, enumerate_dimvectors, euler_form_extended, extend_quiver, rep_dim, DimVector, ExtendedQuiver, Quiver,
    QuiverRep,
};

pub type Partition = Vec<usize>;

/// Partitions of `m` in reverse lexicographic order.
pub fn partitions(m: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// Runs of equal parts, as (part, length).
fn part_groups(lambda: &[usize]) -> Vec<(usize, usize)> {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &e in lambda {
        match groups.last_mut() {
            Some((p, l)) if *p == e => *l += 1,
            _ => groups.push((e, 1)),
        }
    }
    groups
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemisimpleType {
    pub partition: Partition,
    pub dim_vectors: Vec<DimVector>,
    #[serde(skip)]
    simples: Option<Vec<QuiverRep>>,
}

impl SemisimpleType {
    pub fn new(partition: Partition, dim_vectors: Vec<DimVector>, n: usize) -> Result<Self> {
        if partition.windows(2).any(|w| w[0] < w[1]) || partition.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive and nonincreasing".into()));
        }
        if dim_vectors.len() != partition.len() {
            return Err(Error::LengthMismatch { expected: partition.len(), found: dim_vectors.len() });
        }
        for a in &dim_vectors {
            let total: usize = a.iter().sum();
            if total != n {
                return Err(Error::TotalMismatch { expected: n, found: total });
            }
        }
        Ok(SemisimpleType { partition, dim_vectors, simples: None })
    }

    /// Attach concrete simples, which must be pairwise distinct points.
    pub fn with_simples(mut self, simples: Vec<QuiverRep>) -> Result<Self> {
        if simples.len() != self.dim_vectors.len() {
            return Err(Error::LengthMismatch { expected: self.dim_vectors.len(), found: simples.len() });
        }
        for (s, a) in simples.iter().zip(&self.dim_vectors) {
            if s.dims() != a.as_slice() {
                return Err(Error::InvalidRepresentation("simple has the wrong dimension vector".into()));
            }
        }
        for (i, s) in simples.iter().enumerate() {
            if simples[..i].contains(s) {
                return Err(Error::InvalidRepresentation("simples must be distinct points".into()));
            }
        }
        self.simples = Some(simples);
        Ok(self)
    }

    pub fn simples(&self) -> Option<&[QuiverRep]> {
        self.simples.as_deref()
    }

    pub fn z(&self) -> usize {
        self.partition.len()
    }
}

/// Every `(λ, α_1..α_z)` with `|α_i| = n`; within a run of equal parts the
/// `α_i` are nondecreasing in the order of [`enumerate_dimvectors`].
pub fn enumerate_substrata(m: usize, n: usize, q: &Quiver) -> Vec<SemisimpleType> {
    let dims = enumerate_dimvectors(q.vertices(), n);
    let mut out = Vec::new();
    for lambda in partitions(m) {
        let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
        for (_, len) in part_groups(&lambda) {
            let mut next = Vec::new();
            for prefix in &choices {
                for multiset in multisets(dims.len(), len) {
                    let mut c = prefix.clone();
                    c.extend(multiset);
                    next.push(c);
                }
            }
            choices = next;
        }
        for c in choices {
            out.push(SemisimpleType {
                partition: lambda.clone(),
                dim_vectors: c.iter().map(|&i| dims[i].clone()).collect(),
                simples: None,
            });
        }
    }
    out
}

/// Nondecreasing sequences of length `len` over `0..v`.
fn multisets(v: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for s in &out {
            let start = s.last().copied().unwrap_or(0);
            for i in start..v {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// `Σ_λ Π_groups C(v + l - 1, l)` for `v` dimension vectors.
pub fn substrata_count_formula(m: usize, v: usize) -> usize {
    partitions(m)
        .iter()
        .map(|lambda| part_groups(lambda).iter().map(|&(_, l)| binomial(v + l - 1, l)).product::<usize>())
        .sum()
}

pub fn stratum_dimension(t: &SemisimpleType, n: usize, q: &Quiver) -> Result<usize> {
    t.dim_vectors.iter().map(|a| bundle_dim(n, q, a)).sum()
}

/// A representation of `Q~_n` with one-dimensional space at `v_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TildeRep {
    ext: ExtendedQuiver,
    rep: QuiverRep,
}

impl TildeRep {
    pub fn new(ext: ExtendedQuiver, rep: QuiverRep) -> Result<Self> {
        if ext.has_inverse() || **rep.quiver() != **ext.quiver() {
            return Err(Error::QuiverMismatch);
        }
        Ok(TildeRep { ext, rep })
    }

    pub fn ext(&self) -> &ExtendedQuiver {
        &self.ext
    }

    pub fn rep(&self) -> &QuiverRep {
        &self.rep
    }

    pub fn dims(&self) -> &[usize] {
        self.rep.dims()
    }
}

/// `x_{jq}` sends the `v_0` line to the standard basis vector
/// `e_{q - o_j}` of `V_j` when `o_j < q <= o_j + a_j` (`o_j = Σ_{l<j} a_l`),
/// and to zero otherwise.
pub fn build_tilde_rep(s: &QuiverRep, n: usize) -> Result<TildeRep> {
    let alpha = s.dims();
    let total: usize = alpha.iter().sum();
    if total != n {
        return Err(Error::TotalMismatch { expected: n, found: total });
    }
    let ext = extend_quiver(s.quiver(), n, false)?;
    let mut maps: Vec<Matrix<Rational>> = s.maps().to_vec();
    let mut offset = 0;
    for &a in alpha {
        for q in 1..=n {
            let mut m = Matrix::rat_zeros(a, 1);
            if q > offset && q <= offset + a {
                m.set(q - offset - 1, 0, rat(1));
            }
            maps.push(m);
        }
        offset += a;
    }
    let mut dims = vec![1];
    dims.extend_from_slice(alpha);
    let rep = QuiverRep::new(ext.quiver().clone(), dims, maps)?;
    TildeRep::new(ext, rep)
}

fn column(m: &Matrix<Rational>, v: &SparseVec<usize>) -> SparseVec<usize> {
    let mut out = SparseVec::new();
    for r in 0..m.rows() {
        let mut acc = rat(0);
        for (&c, x) in v {
            acc += m.get(r, c) * x;
        }
        if acc != rat(0) {
            out.insert(r, acc);
        }
    }
    out
}

/// Whether the smallest subrepresentation containing `V_{v_0}` is everything.
pub fn is_generated_from_v0(t: &TildeRep) -> Result<bool> {
    let dims = t.dims();
    if dims[0] != 1 {
        return Err(Error::NonUnitBaseVertex(dims[0]));
    }
    let q = t.rep.quiver();
    let mut spans: Vec<SparseEchelon<usize>> = dims.iter().map(|_| SparseEchelon::new()).collect();
    let mut basis: Vec<Vec<SparseVec<usize>>> = dims.iter().map(|_| Vec::new()).collect();
    let v0: SparseVec<usize> = [(0, rat(1))].into_iter().collect();
    spans[0].insert(v0.clone());
    basis[0].push(v0);
    let mut frontier = vec![(0usize, 0usize)];
    while let Some((vertex, idx)) = frontier.pop() {
        let v = basis[vertex][idx].clone();
        for (a, &(s, tgt)) in q.arrows().iter().enumerate() {
            if s - 1 != vertex {
                continue;
            }
            let w = column(t.rep.map(a), &v);
            if spans[tgt - 1].insert(w.clone()) {
                basis[tgt - 1].push(w);
                frontier.push((tgt - 1, basis[tgt - 1].len() - 1));
            }
        }
    }
    Ok(spans.iter().zip(dims).all(|(s, &d)| s.rank() == d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theta {
    pub weights: Vec<i64>,
}

impl Theta {
    /// `(-|α|, 1, ..., 1)`, the weight with `θ(1, α) = 0`.
    pub fn default_for(alpha: &[usize]) -> Self {
        let mut weights = vec![-(alpha.iter().sum::<usize>() as i64)];
        weights.extend(std::iter::repeat_n(1, alpha.len()));
        Theta { weights }
    }
}

pub fn theta_pairing(theta: &Theta, beta: &[i64]) -> Result<i64> {
    if theta.weights.len() != beta.len() {
        return Err(Error::LengthMismatch { expected: theta.weights.len(), found: beta.len() });
    }
    Ok(theta.weights.iter().zip(beta).map(|(a, b)| a * b).sum())
}

/// θ-stability for `dim V_{v_0} = 1`, positive θ away from `v_0` and
/// `θ(dim t) = 0`, where it is equivalent to generation from `v_0`.
pub fn check_theta_stability(t: &TildeRep, theta: &Theta) -> Result<bool> {
    let dims: Vec<i64> = t.dims().iter().map(|&d| d as i64).collect();
    if dims[0] != 1 {
        return Err(Error::NonUnitBaseVertex(dims[0] as usize));
    }
    if theta.weights.len() != dims.len() {
        return Err(Error::InvalidTheta(format!("expected {} weights, found {}", dims.len(), theta.weights.len())));
    }
    if theta.weights[1..].iter().any(|&w| w <= 0) {
        return Err(Error::InvalidTheta("weights away from v0 must be positive".into()));
    }
    if theta_pairing(theta, &dims)? != 0 {
        return Err(Error::InvalidTheta("θ must vanish on the dimension vector".into()));
    }
    is_generated_from_v0(t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalQuiverSetting {
    #[serde(skip)]
    pub gamma_quiver: Quiver,
    pub arrow_counts: Vec<Vec<usize>>,
    pub gamma: DimVector,
    pub ambient_dim: usize,
}

/// `Γ` on `w_1..w_z` with `δ_ij - χ~(α~_i, α~_j)` arrows from `w_i` to `w_j`,
/// and `γ = λ`.
pub fn local_quiver(t: &SemisimpleType, n: usize, q: &Quiver) -> Result<LocalQuiverSetting> {
    let tilde: Vec<Vec<i64>> = t
        .dim_vectors
        .iter()
        .map(|a| std::iter::once(1).chain(a.iter().map(|&x| x as i64)).collect())
        .collect();
    let z = t.z();
    let mut arrow_counts = vec![vec![0; z]; z];
    let mut arrows = Vec::new();
    for i in 0..z {
        for j in 0..z {
            let count = i64::from(i == j) - euler_form_extended(q, n, &tilde[i], &tilde[j])?;
            if count < 0 {
                return Err(Error::NegativeArrowCount { from: i + 1, to: j + 1, count });
            }
            arrow_counts[i][j] = count as usize;
            arrows.extend(std::iter::repeat_n((i + 1, j + 1), count as usize));
        }
    }
    let gamma_quiver = Quiver::new(z, arrows)?;
    let ambient_dim = rep_dim(&gamma_quiver, &t.partition)?;
    Ok(LocalQuiverSetting { gamma_quiver, arrow_counts, gamma: t.partition.clone(), ambient_dim })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberSettingReport {
    pub partition: Partition,
    pub dim_vectors: Vec<DimVector>,
    pub stratum_dim: usize,
    pub setting: LocalQuiverSetting,
    pub thetas: Vec<Theta>,
}

pub fn fiber_setting_report(t: &SemisimpleType, n: usize, q: &Quiver) -> Result<FiberSettingReport> {
    Ok(FiberSettingReport {
        partition: t.partition.clone(),
        dim_vectors: t.dim_vectors.clone(),
        stratum_dim: stratum_dimension(t, n, q)?,
        setting: local_quiver(t, n, q)?,
        thetas: t.dim_vectors.iter().map(|a| Theta::default_for(a)).collect(),
    })
}

/// Representation of `Q~_n` with the given base representation and all
/// `x`-arrows zero.
pub fn zero_tilde_rep(s: &QuiverRep, n: usize) -> Result<TildeRep> {
    let ext = extend_quiver(s.quiver(), n, false)?;
    let mut maps = s.maps().to_vec();
    for &a in s.dims() {
        maps.extend((0..n).map(|_| Matrix::rat_zeros(a, 1)));
    }
    let mut dims = vec![1];
    dims.extend_from_slice(s.dims());
    let rep = QuiverRep::new(ext.quiver().clone(), dims, maps)?;
    TildeRep::new(ext, rep)
}
