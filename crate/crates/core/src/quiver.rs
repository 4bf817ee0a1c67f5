//! Quivers, path algebras, Euler forms and the extended quiver `Q~_n`.
//!
//! Vertices are numbered from 1. Paths are written in the path-algebra
//! order: the rightmost arrow is traversed first, so `a * b` is the path
//! "b, then a" and is nonzero only when `b` ends where `a` starts.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Ring};
use crate::ncpoly::Rational;

pub type DimVector = Vec<usize>;

#[derive(Deserialize)]
struct RawQuiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawQuiver")]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

impl TryFrom<RawQuiver> for Quiver {
    type Error = Error;
    fn try_from(raw: RawQuiver) -> Result<Self> {
        Quiver::new(raw.vertices, raw.arrows)
    }
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(s, t) in &arrows {
            if s == 0 || t == 0 || s > vertices || t > vertices {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {s}->{t} leaves the vertex range 1..={vertices}"
                )));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// One vertex with `d` loops.
    pub fn loops(d: usize) -> Self {
        Quiver { vertices: 1, arrows: vec![(1, 1); d] }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("quiver JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quiver serializes")
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrows[a].0
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrows[a].1
    }

    pub fn arrow_count(&self, from: usize, to: usize) -> usize {
        self.arrows.iter().filter(|&&(s, t)| s == from && t == to).count()
    }

    fn check_len(&self, v: &[impl Sized]) -> Result<()> {
        if v.len() != self.vertices {
            return Err(Error::LengthMismatch { expected: self.vertices, found: v.len() });
        }
        Ok(())
    }

    /// All paths of length at most `max_len`, trivial paths first.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (1..=self.vertices).map(Path::trivial).collect();
        let mut frontier: Vec<Path> = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for (a, &(s, t)) in self.arrows.iter().enumerate() {
                    if s == p.end {
                        let mut arrows = vec![a];
                        arrows.extend_from_slice(&p.arrows);
                        next.push(Path { arrows, start: p.start, end: t });
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// Basis paths of `Hom(P_i, P_j)` up to the length bound: paths from
    /// `v_j` to `v_i`.
    pub fn hom_basis(&self, i: usize, j: usize, max_len: usize) -> Vec<Path> {
        self.paths_up_to(max_len).into_iter().filter(|p| p.start == j && p.end == i).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Path {
    arrows: Vec<usize>,
    start: usize,
    end: usize,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { arrows: Vec::new(), start: v, end: v }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Result<Self> {
        let &(s, t) = q
            .arrows
            .get(a)
            .ok_or_else(|| Error::InvalidQuiver(format!("no arrow with position {a}")))?;
        Ok(Path { arrows: vec![a], start: s, end: t })
    }

    /// Builds a path from arrows in written order (rightmost first).
    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        let Some(&last) = arrows.last() else {
            return Err(Error::InvalidQuiver("use Path::trivial for length zero".into()));
        };
        let first = arrows[0];
        if arrows.iter().any(|&a| a >= q.num_arrows()) {
            return Err(Error::InvalidQuiver("arrow position out of range".into()));
        }
        for w in arrows.windows(2) {
            if q.source(w[0]) != q.target(w[1]) {
                return Err(Error::InvalidQuiver(format!("arrows {} and {} do not compose", w[0], w[1])));
            }
        }
        Ok(Path { start: q.source(last), end: q.target(first), arrows })
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self * other`: traverse `other`, then `self`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        (other.end == self.start).then(|| {
            let mut arrows = self.arrows.clone();
            arrows.extend_from_slice(&other.arrows);
            Path { arrows, start: other.start, end: self.end }
        })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            return write!(f, "v{}", self.start);
        }
        let names: Vec<String> = self.arrows.iter().map(|a| format!("a{}", a + 1)).collect();
        write!(f, "{}", names.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathAlgebraElement {
    quiver: Arc<Quiver>,
    terms: BTreeMap<Path, Rational>,
}

impl PathAlgebraElement {
    pub fn zero(q: &Arc<Quiver>) -> Self {
        PathAlgebraElement { quiver: q.clone(), terms: BTreeMap::new() }
    }

    pub fn path(q: &Arc<Quiver>, p: Path, c: Rational) -> Self {
        let mut out = Self::zero(q);
        out.add_term(p, c);
        out
    }

    pub fn vertex(q: &Arc<Quiver>, v: usize) -> Result<Self> {
        if v == 0 || v > q.vertices {
            return Err(Error::InvalidQuiver(format!("no vertex {v}")));
        }
        Ok(Self::path(q, Path::trivial(v), Rational::one()))
    }

    pub fn arrow(q: &Arc<Quiver>, a: usize) -> Result<Self> {
        Ok(Self::path(q, Path::arrow(q, a)?, Rational::one()))
    }

    /// The unit `v_1 + ... + v_k`.
    pub fn one(q: &Arc<Quiver>) -> Self {
        let mut out = Self::zero(q);
        for v in 1..=q.vertices {
            out.add_term(Path::trivial(v), Rational::one());
        }
        out
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, p: Path, c: Rational) {
        let e = self.terms.entry(p.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    fn same_quiver(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.quiver, &other.quiver) && *self.quiver != *other.quiver {
            return Err(Error::QuiverMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_quiver(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.quiver);
        for (p, v) in &self.terms {
            out.add_term(p.clone(), v * c);
        }
        out
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_quiver(other)?;
        let mut out = Self::zero(&self.quiver);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    out.add_term(pq, a * b);
                }
            }
        }
        Ok(out)
    }
}

pub fn path_mul(a: &PathAlgebraElement, b: &PathAlgebraElement) -> Result<PathAlgebraElement> {
    a.checked_mul(b)
}

impl Ring for PathAlgebraElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.quiver)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.quiver)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.checked_add(other).expect("same quiver")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("same quiver")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("same quiver")
    }
    fn scale(&self, c: &Rational) -> Self {
        PathAlgebraElement::scale(self, c)
    }
}

impl fmt::Display for PathAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| if c.is_one() { p.to_string() } else { format!("{c}*{p}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Integer matrix with entry `(i, j) = δ_ij - #arrows(i -> j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerForm {
    pub matrix: Vec<Vec<i64>>,
}

impl EulerForm {
    pub fn eval(&self, alpha: &[i64], beta: &[i64]) -> Result<i64> {
        let k = self.matrix.len();
        for v in [alpha, beta] {
            if v.len() != k {
                return Err(Error::LengthMismatch { expected: k, found: v.len() });
            }
        }
        let mut s = 0;
        for i in 0..k {
            for j in 0..k {
                s += alpha[i] * self.matrix[i][j] * beta[j];
            }
        }
        Ok(s)
    }
}

pub fn euler_form(q: &Quiver) -> EulerForm {
    let k = q.vertices;
    let mut matrix = vec![vec![0i64; k]; k];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(s, t) in &q.arrows {
        matrix[s - 1][t - 1] -= 1;
    }
    EulerForm { matrix }
}

/// `χ~((a0, α), (b0, β)) = a0 b0 - n a0 Σβ + χ_Q(α, β)`.
pub fn euler_form_extended(q: &Quiver, n: usize, at: &[i64], bt: &[i64]) -> Result<i64> {
    let k = q.vertices + 1;
    for v in [at, bt] {
        if v.len() != k {
            return Err(Error::LengthMismatch { expected: k, found: v.len() });
        }
    }
    let chi = euler_form(q).eval(&at[1..], &bt[1..])?;
    Ok(at[0] * bt[0] - n as i64 * at[0] * bt[1..].iter().sum::<i64>() + chi)
}

/// `Q~_n`, optionally with the inverse arrows `y` of `Q~_{nσ}`, stored as a
/// plain quiver where `v_0` is vertex 1 and `v_i` is vertex `i + 1`.
/// Arrow positions: base arrows, then `x_{iq}`, then `y_{iq}` (both ordered
/// by `i`, then `q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedQuiver {
    base: Quiver,
    n: usize,
    with_inverse: bool,
    quiver: Arc<Quiver>,
}

pub fn extend_quiver(q: &Quiver, n: usize, with_inverse: bool) -> Result<ExtendedQuiver> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let k = q.vertices;
    let mut arrows: Vec<(usize, usize)> = q.arrows.iter().map(|&(s, t)| (s + 1, t + 1)).collect();
    for i in 1..=k {
        arrows.extend(std::iter::repeat_n((1, i + 1), n));
    }
    if with_inverse {
        for i in 1..=k {
            arrows.extend(std::iter::repeat_n((i + 1, 1), n));
        }
    }
    Ok(ExtendedQuiver {
        base: q.clone(),
        n,
        with_inverse,
        quiver: Arc::new(Quiver::new(k + 1, arrows)?),
    })
}

impl ExtendedQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_inverse(&self) -> bool {
        self.with_inverse
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn base_arrow(&self, a: usize) -> usize {
        a
    }

    /// Arrow position of `x_{iq}`, `1 <= i <= k`, `1 <= q <= n`.
    pub fn x_arrow(&self, i: usize, q: usize) -> usize {
        self.base.num_arrows() + (i - 1) * self.n + (q - 1)
    }

    pub fn y_arrow(&self, i: usize, q: usize) -> Option<usize> {
        self.with_inverse
            .then(|| self.base.num_arrows() + self.base.vertices * self.n + (i - 1) * self.n + (q - 1))
    }

    /// Vertex of the plain quiver for `v_i`, `0 <= i <= k`.
    pub fn vertex(&self, i: usize) -> usize {
        i + 1
    }

    pub fn arrow_label(&self, a: usize) -> String {
        let m = self.base.num_arrows();
        let kn = self.base.vertices * self.n;
        if a < m {
            format!("a{}", a + 1)
        } else if a < m + kn {
            let r = a - m;
            format!("x{}_{}", r / self.n + 1, r % self.n + 1)
        } else {
            let r = a - m - kn;
            format!("y{}_{}", r / self.n + 1, r % self.n + 1)
        }
    }
}

/// The matrices `M_σ`, `N_σ` and the relation families
/// `M_σ N_σ = diag(v_1..v_k)`, `N_σ M_σ = v_0 I`.
#[derive(Clone, Debug)]
pub struct LocalizationData {
    pub m_sigma: Vec<Vec<usize>>,
    pub n_sigma: Vec<Vec<usize>>,
    pub relations: Vec<(PathAlgebraElement, PathAlgebraElement)>,
    quiver: Arc<Quiver>,
}

impl LocalizationData {
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }
}

pub fn localization_data(ext: &ExtendedQuiver) -> Result<LocalizationData> {
    if !ext.with_inverse {
        return Err(Error::InvalidArgument("localization data needs the y arrows".into()));
    }
    let (k, n) = (ext.base.vertices, ext.n);
    let q = ext.quiver.clone();
    let m_sigma: Vec<Vec<usize>> = (1..=k).map(|i| (1..=n).map(|c| ext.x_arrow(i, c)).collect()).collect();
    let n_sigma: Vec<Vec<usize>> = (1..=n)
        .map(|c| (1..=k).map(|j| ext.y_arrow(j, c).expect("with inverse")).collect())
        .collect();
    let arrow = |a: usize| PathAlgebraElement::arrow(&q, a);
    let mut relations = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            let mut lhs = PathAlgebraElement::zero(&q);
            for c in 0..n {
                lhs = lhs.checked_add(&arrow(m_sigma[i - 1][c])?.checked_mul(&arrow(n_sigma[c][j - 1])?)?)?;
            }
            let rhs = if i == j { PathAlgebraElement::vertex(&q, ext.vertex(i))? } else { PathAlgebraElement::zero(&q) };
            relations.push((lhs, rhs));
        }
    }
    for p in 0..n {
        for c in 0..n {
            let mut lhs = PathAlgebraElement::zero(&q);
            for i in 0..k {
                lhs = lhs.checked_add(&arrow(n_sigma[p][i])?.checked_mul(&arrow(m_sigma[i][c])?)?)?;
            }
            let rhs = if p == c { PathAlgebraElement::vertex(&q, ext.vertex(0))? } else { PathAlgebraElement::zero(&q) };
            relations.push((lhs, rhs));
        }
    }
    Ok(LocalizationData { m_sigma, n_sigma, relations, quiver: q })
}

pub fn rep_dim(q: &Quiver, alpha: &[usize]) -> Result<usize> {
    q.check_len(alpha)?;
    Ok(q.arrows.iter().map(|&(s, t)| alpha[s - 1] * alpha[t - 1]).sum())
}

/// Dimension of `GL_n ×^{GL(α)} rep_α Q`.
pub fn bundle_dim(n: usize, q: &Quiver, alpha: &[usize]) -> Result<usize> {
    q.check_len(alpha)?;
    let total: usize = alpha.iter().sum();
    if total != n {
        return Err(Error::TotalMismatch { expected: n, found: total });
    }
    Ok(n * n - alpha.iter().map(|a| a * a).sum::<usize>() + rep_dim(q, alpha)?)
}

/// Length-`k` vectors with total `n`, lexicographically descending.
pub fn enumerate_dimvectors(k: usize, n: usize) -> Vec<DimVector> {
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<DimVector>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            go(k, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, n, &mut Vec::new(), &mut out);
    out
}

pub fn numerical_condition(e: &[usize], f: &[usize], alpha: &[usize]) -> Result<bool> {
    for v in [e, f] {
        if v.len() != alpha.len() {
            return Err(Error::LengthMismatch { expected: alpha.len(), found: v.len() });
        }
    }
    let dot = |v: &[usize]| v.iter().zip(alpha).map(|(a, b)| a * b).sum::<usize>();
    Ok(dot(e) == dot(f))
}

/// A representation over the rationals: the arrow `s -> t` acts by a
/// `dims[t] x dims[s]` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep {
    quiver: Arc<Quiver>,
    dims: DimVector,
    maps: Vec<Matrix<Rational>>,
}

impl QuiverRep {
    pub fn new(quiver: Arc<Quiver>, dims: DimVector, maps: Vec<Matrix<Rational>>) -> Result<Self> {
        quiver.check_len(&dims)?;
        if maps.len() != quiver.num_arrows() {
            return Err(Error::LengthMismatch { expected: quiver.num_arrows(), found: maps.len() });
        }
        for (a, m) in maps.iter().enumerate() {
            let (s, t) = quiver.arrows[a];
            if m.rows() != dims[t - 1] || m.cols() != dims[s - 1] {
                return Err(Error::DimensionMismatch(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a + 1,
                    dims[t - 1],
                    dims[s - 1],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(QuiverRep { quiver, dims, maps })
    }

    pub fn zero(quiver: Arc<Quiver>, dims: DimVector) -> Result<Self> {
        quiver.check_len(&dims)?;
        let maps = quiver.arrows.iter().map(|&(s, t)| Matrix::rat_zeros(dims[t - 1], dims[s - 1])).collect();
        Ok(QuiverRep { quiver, dims, maps })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix<Rational>] {
        &self.maps
    }

    pub fn map(&self, a: usize) -> &Matrix<Rational> {
        &self.maps[a]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn eval_path(&self, p: &Path) -> Result<Matrix<Rational>> {
        let mut out = Matrix::rat_identity(self.dims[p.start - 1]);
        for &a in p.arrows.iter().rev() {
            out = self.maps[a].rat_mul(&out)?;
        }
        Ok(out)
    }

    /// Action of a path-algebra element on `⊕ V_i`.
    pub fn eval(&self, e: &PathAlgebraElement) -> Result<Matrix<Rational>> {
        if *e.quiver != *self.quiver {
            return Err(Error::QuiverMismatch);
        }
        let offs: Vec<usize> = self
            .dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total = self.total_dim();
        let mut out = Matrix::rat_zeros(total, total);
        for (p, c) in &e.terms {
            let m = self.eval_path(p)?;
            let (r0, c0) = (offs[p.end - 1], offs[p.start - 1]);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let v = out.get(r0 + i, c0 + j) + c * m.get(i, j);
                    out.set(r0 + i, c0 + j, v);
                }
            }
        }
        Ok(out)
    }
}

/// Whether the representation satisfies both relation families exactly.
pub fn check_localization_point(data: &LocalizationData, rep: &QuiverRep) -> Result<bool> {
    if *rep.quiver != *data.quiver {
        return Err(Error::DimensionMismatch("representation is not on the localized quiver".into()));
    }
    for (lhs, rhs) in &data.relations {
        if rep.eval(lhs)? != rep.eval(rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The stacked matrix `M_σ(m)`: block `(i, q)` is the map of `x_{iq}`.
pub fn sigma_matrix(ext: &ExtendedQuiver, rep: &QuiverRep) -> Result<Matrix<Rational>> {
    let (k, n) = (ext.base.vertices, ext.n);
    let a0 = rep.dims[0];
    let rows: usize = rep.dims[1..].iter().sum();
    let mut m = Matrix::rat_zeros(rows, n * a0);
    let mut r0 = 0;
    for i in 1..=k {
        for c in 1..=n {
            let x = rep.map(ext.x_arrow(i, c));
            for r in 0..x.rows() {
                for s in 0..x.cols() {
                    m.set(r0 + r, (c - 1) * a0 + s, x.get(r, s).clone());
                }
            }
        }
        r0 += rep.dims[i];
    }
    Ok(m)
}

/// Extends a representation of `Q~_n` to `Q~_{nσ}` by inverting `M_σ(m)`;
/// `None` when `M_σ(m)` is not invertible.
pub fn extend_rep_with_inverse(ext: &ExtendedQuiver, rep: &QuiverRep) -> Result<Option<QuiverRep>> {
    let plain = extend_quiver(&ext.base, ext.n, false)?;
    if *rep.quiver != *plain.quiver {
        return Err(Error::DimensionMismatch("representation is not on Q~_n".into()));
    }
    let full = extend_quiver(&ext.base, ext.n, true)?;
    let m = sigma_matrix(&full, rep)?;
    if m.rows() != m.cols() {
        return Ok(None);
    }
    let inv = match m.inverse() {
        Ok(inv) => inv,
        Err(Error::SingularMatrix) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (k, n) = (ext.base.vertices, ext.n);
    let a0 = rep.dims[0];
    let mut maps = rep.maps.clone();
    for i in 1..=k {
        let c0: usize = rep.dims[1..i].iter().sum();
        for c in 1..=n {
            maps.push(inv.block((c - 1) * a0, c0, a0, rep.dims[i]));
        }
    }
    Ok(Some(QuiverRep::new(full.quiver.clone(), rep.dims.clone(), maps)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow_quiver() -> Arc<Quiver> {
        Arc::new(Quiver::new(2, vec![(1, 2)]).unwrap())
    }

    #[test]
    fn path_rules() {
        let q = arrow_quiver();
        let a = PathAlgebraElement::arrow(&q, 0).unwrap();
        let v1 = PathAlgebraElement::vertex(&q, 1).unwrap();
        let v2 = PathAlgebraElement::vertex(&q, 2).unwrap();
        assert_eq!(path_mul(&v2, &a).unwrap(), a);
        assert_eq!(path_mul(&a, &v1).unwrap(), a);
        assert!(path_mul(&v1, &a).unwrap().is_zero());
        assert!(path_mul(&a, &a).unwrap().is_zero());
        let one = PathAlgebraElement::one(&q);
        assert_eq!(path_mul(&one, &a).unwrap(), a);
        let other = Arc::new(Quiver::loops(1));
        let b = PathAlgebraElement::arrow(&other, 0).unwrap();
        assert_eq!(path_mul(&a, &b), Err(Error::QuiverMismatch));
    }

    #[test]
    fn composable_arrows() {
        let q = Arc::new(Quiver::new(3, vec![(1, 2), (2, 3)]).unwrap());
        let a1 = PathAlgebraElement::arrow(&q, 0).unwrap();
        let a2 = PathAlgebraElement::arrow(&q, 1).unwrap();
        let p = path_mul(&a2, &a1).unwrap();
        let (path, _) = p.terms().next().unwrap();
        assert_eq!((path.start(), path.end(), path.arrows()), (1, 3, &[1, 0][..]));
        assert!(path_mul(&a1, &a2).unwrap().is_zero());
        assert_eq!(q.hom_basis(3, 1, 2).len(), 1);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_form(&Quiver::loops(0)).eval(&[3], &[4]).unwrap(), 12);
        assert_eq!(euler_form(&Quiver::loops(2)).eval(&[2], &[2]).unwrap(), -4);
        assert_eq!(euler_form(&arrow_quiver()).eval(&[1, 0], &[0, 1]).unwrap(), -1);
        let q = Quiver::loops(2);
        assert_eq!(euler_form_extended(&q, 2, &[1, 2], &[1, 2]).unwrap(), -7);
        let ext = extend_quiver(&q, 2, false).unwrap();
        assert_eq!(euler_form(ext.quiver()).eval(&[1, 2], &[1, 2]).unwrap(), -7);
        assert_eq!(euler_form_extended(&q, 2, &[3, 0], &[1, 0]).unwrap(), 3);
    }

    #[test]
    fn extension_counts() {
        let q = Quiver::loops(2);
        let ext = extend_quiver(&q, 2, false).unwrap();
        assert_eq!(ext.quiver().vertices(), 2);
        assert_eq!(ext.quiver().arrow_count(1, 2), 2);
        assert_eq!(ext.quiver().arrow_count(2, 2), 2);
        let q3 = Quiver::new(3, vec![(1, 2), (2, 2)]).unwrap();
        assert_eq!(extend_quiver(&q3, 1, false).unwrap().quiver().num_arrows(), 2 + 3);
        assert_eq!(extend_quiver(&q3, 4, true).unwrap().quiver().num_arrows(), 2 + 24);
    }

    #[test]
    fn dimension_formulas() {
        let q = Quiver::loops(2);
        assert_eq!(rep_dim(&q, &[3]).unwrap(), 18);
        assert_eq!(bundle_dim(2, &q, &[2]).unwrap(), 8);
        let a = arrow_quiver();
        assert_eq!(rep_dim(&a, &[1, 1]).unwrap(), 1);
        assert_eq!(bundle_dim(2, &a, &[1, 1]).unwrap(), 3);
        assert_eq!(bundle_dim(3, &a, &[1, 1]), Err(Error::TotalMismatch { expected: 3, found: 2 }));
        assert_eq!(rep_dim(&Quiver::new(2, vec![]).unwrap(), &[2, 3]).unwrap(), 0);
    }

    #[test]
    fn dimvectors() {
        assert_eq!(enumerate_dimvectors(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(enumerate_dimvectors(1, 5), vec![vec![5]]);
        assert_eq!(enumerate_dimvectors(3, 2).len(), 6);
        assert!(!numerical_condition(&[1, 0], &[0, 1], &[2, 1]).unwrap());
        assert!(numerical_condition(&[2, 1], &[2, 1], &[4, 7]).unwrap());
    }

    #[test]
    fn scalar_localization_point() {
        let q = Quiver::loops(2);
        let ext = extend_quiver(&q, 1, true).unwrap();
        let data = localization_data(&ext).unwrap();
        assert_eq!(data.relations.len(), 2);
        let one = Matrix::from_i64(&[&[1]]);
        let two = Matrix::from_i64(&[&[2]]);
        let maps = vec![two.clone(), two.clone(), one.clone(), one.clone()];
        let rep = QuiverRep::new(ext.quiver().clone(), vec![1, 1], maps).unwrap();
        assert!(check_localization_point(&data, &rep).unwrap());
        let bad = vec![two.clone(), two.clone(), Matrix::rat_zeros(1, 1), one];
        let rep = QuiverRep::new(ext.quiver().clone(), vec![1, 1], bad).unwrap();
        assert!(!check_localization_point(&data, &rep).unwrap());
    }

    #[test]
    fn quiver_json_round_trip() {
        let q = Quiver::from_json(r#"{"vertices": 2, "arrows": [[1, 2], [2, 2]]}"#).unwrap();
        assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
        assert!(Quiver::from_json(r#"{"vertices": 1, "arrows": [[1, 2]]}"#).is_err());
    }
}
