//! Finite-dimensional associative algebras given by structure constants.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Ring;
use crate::ncpoly::{rat, Rational};

/// `e_i e_j = Σ_k mult[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseAlgebra {
    name: String,
    labels: Vec<String>,
    mult: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
}

impl BaseAlgebra {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        mult: Vec<Vec<Vec<Rational>>>,
        unit: Vec<Rational>,
    ) -> Result<Arc<Self>> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        let shaped = mult.len() == m
            && mult.iter().all(|row| row.len() == m && row.iter().all(|v| v.len() == m))
            && unit.len() == m;
        if !shaped {
            return Err(Error::InvalidAlgebra("structure constants have the wrong shape".into()));
        }
        let alg = Arc::new(BaseAlgebra { name: name.into(), labels, mult, unit });
        let basis: Vec<AlgElem> = (0..m).map(|i| AlgElem::basis(&alg, i)).collect();
        let one = AlgElem::one(&alg);
        for a in &basis {
            if one.mul_ref(a) != *a || a.mul_ref(&one) != *a {
                return Err(Error::InvalidAlgebra("unit is not two-sided".into()));
            }
            for b in &basis {
                for c in &basis {
                    if a.mul_ref(b).mul_ref(c) != a.mul_ref(&b.mul_ref(c)) {
                        return Err(Error::InvalidAlgebra("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn rationals() -> Arc<Self> {
        Self::new("Q", vec!["1".into()], vec![vec![vec![rat(1)]]], vec![rat(1)]).expect("valid")
    }

    /// `M_n(Q)` with basis `E_ij` in row-major order.
    pub fn matrix_algebra(n: usize) -> Arc<Self> {
        let m = n * n;
        let mut mult = vec![vec![vec![rat(0); m]; m]; m];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    mult[i * n + j][j * n + l][i * n + l] = rat(1);
                }
            }
        }
        let labels = (0..m).map(|e| format!("E{}{}", e / n + 1, e % n + 1)).collect();
        let unit = (0..m).map(|e| if e / n == e % n { rat(1) } else { rat(0) }).collect();
        Self::new(format!("M{n}(Q)"), labels, mult, unit).expect("valid")
    }

    /// `Q[t]/(t^k)` with basis `1, t, ..., t^{k-1}`.
    pub fn truncated_poly(k: usize) -> Arc<Self> {
        let mut mult = vec![vec![vec![rat(0); k]; k]; k];
        for i in 0..k {
            for j in 0..k - i {
                mult[i][j][i + j] = rat(1);
            }
        }
        let labels = (0..k).map(|i| if i == 0 { "1".into() } else { format!("t^{i}") }).collect();
        let mut unit = vec![rat(0); k];
        unit[0] = rat(1);
        Self::new(format!("Q[t]/(t^{k})"), labels, mult, unit).expect("valid")
    }

    pub fn dual_numbers() -> Arc<Self> {
        Self::truncated_poly(2)
    }

    /// Upper triangular 2x2 matrices, basis `E11, E12, E22`.
    pub fn upper_triangular() -> Arc<Self> {
        let mut mult = vec![vec![vec![rat(0); 3]; 3]; 3];
        mult[0][0][0] = rat(1);
        mult[0][1][1] = rat(1);
        mult[1][2][1] = rat(1);
        mult[2][2][2] = rat(1);
        let labels = vec!["E11".into(), "E12".into(), "E22".into()];
        Self::new("T2(Q)", labels, mult, vec![rat(1), rat(0), rat(1)]).expect("valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.mult[i][j] == self.mult[j][i]))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct AlgElem {
    alg: Arc<BaseAlgebra>,
    coords: Vec<Rational>,
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AlgElem {
    pub fn from_coords(alg: &Arc<BaseAlgebra>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != alg.dim() {
            return Err(Error::LengthMismatch { expected: alg.dim(), found: coords.len() });
        }
        Ok(AlgElem { alg: alg.clone(), coords })
    }

    pub fn zero(alg: &Arc<BaseAlgebra>) -> Self {
        AlgElem { alg: alg.clone(), coords: vec![rat(0); alg.dim()] }
    }

    pub fn one(alg: &Arc<BaseAlgebra>) -> Self {
        AlgElem { alg: alg.clone(), coords: alg.unit.clone() }
    }

    pub fn basis(alg: &Arc<BaseAlgebra>, i: usize) -> Self {
        let mut out = Self::zero(alg);
        out.coords[i] = rat(1);
        out
    }

    pub fn scalar(alg: &Arc<BaseAlgebra>, c: Rational) -> Self {
        Self::one(alg).scale(&c)
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(&self.alg.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("{c}*{l}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Ring for AlgElem {
    fn zero_like(&self) -> Self {
        Self::zero(&self.alg)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.alg)
    }
    fn is_zero_elem(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
    fn add_ref(&self, other: &Self) -> Self {
        AlgElem { alg: self.alg.clone(), coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        AlgElem { alg: self.alg.clone(), coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let m = self.alg.dim();
        let mut coords = vec![rat(0); m];
        for i in 0..m {
            if self.coords[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if other.coords[j].is_zero() {
                    continue;
                }
                let c = &self.coords[i] * &other.coords[j];
                for (k, s) in self.alg.mult[i][j].iter().enumerate() {
                    if !s.is_zero() {
                        coords[k] += &c * s;
                    }
                }
            }
        }
        AlgElem { alg: self.alg.clone(), coords }
    }
    fn scale(&self, c: &Rational) -> Self {
        AlgElem { alg: self.alg.clone(), coords: self.coords.iter().map(|a| a * c).collect() }
    }
}

/// A unital algebra map, given on the basis of the source.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    from: Arc<BaseAlgebra>,
    to: Arc<BaseAlgebra>,
    images: Vec<AlgElem>,
}

impl AlgebraMorphism {
    pub fn new(from: &Arc<BaseAlgebra>, to: &Arc<BaseAlgebra>, images: Vec<AlgElem>) -> Result<Self> {
        if images.len() != from.dim() || images.iter().any(|e| e.alg != *to) {
            return Err(Error::InvalidMap("images must be elements of the target, one per basis vector".into()));
        }
        let f = AlgebraMorphism { from: from.clone(), to: to.clone(), images };
        if f.apply(&AlgElem::one(from)) != AlgElem::one(to) {
            return Err(Error::InvalidMap("unit is not preserved".into()));
        }
        for i in 0..from.dim() {
            for j in 0..from.dim() {
                let (a, b) = (AlgElem::basis(from, i), AlgElem::basis(from, j));
                if f.apply(&a.mul_ref(&b)) != f.images[i].mul_ref(&f.images[j]) {
                    return Err(Error::InvalidMap("multiplication is not preserved".into()));
                }
            }
        }
        Ok(f)
    }

    pub fn from(&self) -> &Arc<BaseAlgebra> {
        &self.from
    }

    pub fn to(&self) -> &Arc<BaseAlgebra> {
        &self.to
    }

    pub fn apply(&self, x: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero(&self.to);
        for (c, img) in x.coords.iter().zip(&self.images) {
            if !c.is_zero() {
                out = out.add_ref(&img.scale(c));
            }
        }
        out
    }

    /// `Q[t]/(t^3) -> M_2(Q)`, `t ↦ E12`.
    pub fn truncated_into_matrices() -> Self {
        let (a, m) = (BaseAlgebra::truncated_poly(3), BaseAlgebra::matrix_algebra(2));
        let images = vec![AlgElem::one(&m), AlgElem::basis(&m, 1), AlgElem::zero(&m)];
        Self::new(&a, &m, images).expect("valid")
    }

    /// The inclusion of upper triangular matrices into `M_2(Q)`.
    pub fn triangular_inclusion() -> Self {
        let (a, m) = (BaseAlgebra::upper_triangular(), BaseAlgebra::matrix_algebra(2));
        let images = vec![AlgElem::basis(&m, 0), AlgElem::basis(&m, 1), AlgElem::basis(&m, 3)];
        Self::new(&a, &m, images).expect("valid")
    }

    /// `Q[t]/(t^3) -> Q[t]/(t^2)`.
    pub fn truncation_quotient() -> Self {
        let (a, b) = (BaseAlgebra::truncated_poly(3), BaseAlgebra::dual_numbers());
        let images = vec![AlgElem::one(&b), AlgElem::basis(&b, 1), AlgElem::zero(&b)];
        Self::new(&a, &b, images).expect("valid")
    }

    /// The diagonal projection of upper triangular matrices onto `Q`.
    pub fn triangular_corner() -> Self {
        let (a, q) = (BaseAlgebra::upper_triangular(), BaseAlgebra::rationals());
        let images = vec![AlgElem::one(&q), AlgElem::zero(&q), AlgElem::zero(&q)];
        Self::new(&a, &q, images).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_algebras_validate() {
        for alg in [
            BaseAlgebra::rationals(),
            BaseAlgebra::matrix_algebra(2),
            BaseAlgebra::truncated_poly(3),
            BaseAlgebra::dual_numbers(),
            BaseAlgebra::upper_triangular(),
        ] {
            assert!(alg.dim() >= 1);
        }
        assert!(BaseAlgebra::dual_numbers().is_commutative());
        assert!(!BaseAlgebra::matrix_algebra(2).is_commutative());
    }

    #[test]
    fn nilpotent_in_truncated() {
        let a = BaseAlgebra::truncated_poly(3);
        let t = AlgElem::basis(&a, 1);
        assert_eq!(t.mul_ref(&t), AlgElem::basis(&a, 2));
        assert!(t.mul_ref(&t).mul_ref(&t).is_zero_elem());
    }

    #[test]
    fn rejects_bad_constants() {
        let mult = vec![vec![vec![rat(0)]]];
        assert!(BaseAlgebra::new("bad", vec!["e".into()], mult, vec![rat(1)]).is_err());
    }

    #[test]
    fn morphisms() {
        for f in [
            AlgebraMorphism::truncated_into_matrices(),
            AlgebraMorphism::triangular_inclusion(),
            AlgebraMorphism::truncation_quotient(),
            AlgebraMorphism::triangular_corner(),
        ] {
            assert_eq!(f.apply(&AlgElem::one(f.from())), AlgElem::one(f.to()));
        }
        let m = BaseAlgebra::matrix_algebra(2);
        let a = BaseAlgebra::truncated_poly(3);
        let bad = vec![AlgElem::one(&m), AlgElem::basis(&m, 0), AlgElem::zero(&m)];
        assert!(AlgebraMorphism::new(&a, &m, bad).is_err());
    }
}
