//! Seeded random inputs for property checks and the self-test.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, BaseAlgebra};
use crate::matrix::Matrix;
use crate::ncpoly::{rat_frac, CommPoly, Exponent, NCPoly, Rational, Word};
use crate::quiver::{Quiver, QuiverRep};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut SampleRng) -> Rational {
    rat_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut SampleRng) -> Rational {
    let n = *[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
    rat_frac(n, rng.gen_range(1..=2))
}

pub fn ncpoly(rng: &mut SampleRng, d: usize, max_deg: usize, max_terms: usize) -> NCPoly {
    let mut p = NCPoly::zero(d);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let len = rng.gen_range(0..=max_deg);
        let letters = (0..len).map(|_| rng.gen_range(1..=d as u32)).collect();
        let m = NCPoly::monomial(d, Word::new(letters), nonzero_rational(rng)).expect("letters in range");
        p = &p + &m;
    }
    p
}

pub fn commpoly(rng: &mut SampleRng, nvars: usize, max_deg: u32, max_terms: usize) -> CommPoly {
    let mut p = CommPoly::zero(nvars);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut e = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_deg) {
            e[rng.gen_range(0..nvars)] += 1;
        }
        p = &p + &CommPoly::monomial(Exponent(e), nonzero_rational(rng));
    }
    p
}

pub fn rat_matrix(rng: &mut SampleRng, rows: usize, cols: usize) -> Matrix<Rational> {
    Matrix::from_fn(rows, cols, |_, _| small_rational(rng))
}

/// A product of random unipotent lower and upper triangular matrices and a
/// random nonzero diagonal, hence invertible.
pub fn invertible(rng: &mut SampleRng, n: usize) -> Matrix<Rational> {
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => small_rational(rng),
        std::cmp::Ordering::Equal => Rational::from_integer(1.into()),
        std::cmp::Ordering::Less => Rational::from_integer(0.into()),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => small_rational(rng),
        std::cmp::Ordering::Equal => nonzero_rational(rng),
        std::cmp::Ordering::Greater => Rational::from_integer(0.into()),
    });
    lower.rat_mul(&upper).expect("square")
}

pub fn alg_elem(rng: &mut SampleRng, alg: &Arc<BaseAlgebra>) -> AlgElem {
    let coords = (0..alg.dim()).map(|_| small_rational(rng)).collect();
    AlgElem::from_coords(alg, coords).expect("dimension matches")
}

pub fn quiver(rng: &mut SampleRng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let k = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_arrows);
    let arrows = (0..m).map(|_| (rng.gen_range(1..=k), rng.gen_range(1..=k))).collect();
    Quiver::new(k, arrows).expect("endpoints in range")
}

/// A dimension vector of length `k` with total `n`.
pub fn dimvector(rng: &mut SampleRng, k: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; k];
    for _ in 0..n {
        v[rng.gen_range(0..k)] += 1;
    }
    v
}

pub fn quiver_rep(rng: &mut SampleRng, q: &Arc<Quiver>, dims: Vec<usize>) -> QuiverRep {
    let maps = q.arrows().iter().map(|&(s, t)| rat_matrix(rng, dims[t - 1], dims[s - 1])).collect();
    QuiverRep::new(q.clone(), dims, maps).expect("shapes match")
}
