//! Presentations of the n-th root algebra and the correspondence between
//! maps `A -> M_n(B)` and maps `√[n]{A} -> B`.
//!
//! Generator order. Free case: `x_{ij,k}` by `(k, i, j)`, the variable order
//! of the generic matrices. Path algebra case: the vertex cycles
//! `e^{(v)}_{pq}` by `(v, p, q)`, then the arrow cycles `c^{(a)}_{pq}` by
//! `(a, p, q)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{AlgElem, AlgebraMorphism, BaseAlgebra};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Ring};
use crate::ncpoly::{rat, NCPoly, Rational, Word};
use crate::quiver::Quiver;
use crate::repscheme;
use crate::sample::{self, SampleRng};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    Free { d: usize, n: usize },
    PathAlgebra { quiver: Arc<Quiver>, n: usize },
}

impl RootKind {
    pub fn n(&self) -> usize {
        match self {
            RootKind::Free { n, .. } | RootKind::PathAlgebra { n, .. } => *n,
        }
    }

    /// Number of matrices in a map `A -> M_n(B)`: generators of the free
    /// algebra, or vertices followed by arrows.
    pub fn num_images(&self) -> usize {
        match self {
            RootKind::Free { d, .. } => *d,
            RootKind::PathAlgebra { quiver, .. } => quiver.vertices() + quiver.num_arrows(),
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if let RootKind::Free { d: 0, .. } = self {
            return Err(Error::InvalidArgument("the free algebra needs at least one generator".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootGenerator {
    X { i: usize, j: usize, k: usize },
    E { vertex: usize, p: usize, q: usize },
    C { arrow: usize, p: usize, q: usize },
}

impl fmt::Display for RootGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootGenerator::X { i, j, k } => write!(f, "x_{i}_{j}_{k}"),
            RootGenerator::E { vertex, p, q } => write!(f, "e{vertex}_{p}_{q}"),
            RootGenerator::C { arrow, p, q } => write!(f, "c{arrow}_{p}_{q}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootPresentation {
    kind: RootKind,
    generators: Vec<RootGenerator>,
    relations: Vec<NCPoly>,
}

pub fn root_presentation(kind: &RootKind) -> Result<RootPresentation> {
    kind.check()?;
    let n = kind.n();
    let mut generators = Vec::new();
    match kind {
        RootKind::Free { d, .. } => {
            for k in 1..=*d {
                for i in 1..=n {
                    for j in 1..=n {
                        generators.push(RootGenerator::X { i, j, k });
                    }
                }
            }
            Ok(RootPresentation { kind: kind.clone(), generators, relations: Vec::new() })
        }
        RootKind::PathAlgebra { quiver, .. } => {
            for vertex in 1..=quiver.vertices() {
                for p in 1..=n {
                    for q in 1..=n {
                        generators.push(RootGenerator::E { vertex, p, q });
                    }
                }
            }
            for arrow in 1..=quiver.num_arrows() {
                for p in 1..=n {
                    for q in 1..=n {
                        generators.push(RootGenerator::C { arrow, p, q });
                    }
                }
            }
            let relations = path_relations(quiver, n, generators.len())?;
            Ok(RootPresentation { kind: kind.clone(), generators, relations })
        }
    }
}

fn path_relations(quiver: &Quiver, n: usize, ngen: usize) -> Result<Vec<NCPoly>> {
    let k = quiver.vertices();
    let e = |v: usize, p: usize, q: usize| (v - 1) * n * n + (p - 1) * n + q;
    let c = |a: usize, p: usize, q: usize| k * n * n + (a - 1) * n * n + (p - 1) * n + q;
    let var = |g: usize| NCPoly::generator(ngen, g);
    let word = |g: usize, h: usize| NCPoly::monomial(ngen, Word::new(vec![g as u32, h as u32]), rat(1));
    let mut rels = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            for p in 1..=n {
                for q in 1..=n {
                    let mut f = NCPoly::zero(ngen);
                    for r in 1..=n {
                        f = &f + &word(e(i, p, r), e(j, r, q))?;
                    }
                    if i == j {
                        f = &f - &var(e(i, p, q))?;
                    }
                    rels.push(f);
                }
            }
        }
    }
    for p in 1..=n {
        for q in 1..=n {
            let mut f = NCPoly::zero(ngen);
            for i in 1..=k {
                f = &f + &var(e(i, p, q))?;
            }
            if p == q {
                f = &f - &NCPoly::one(ngen);
            }
            rels.push(f);
        }
    }
    for (idx, &(s, t)) in quiver.arrows().iter().enumerate() {
        let a = idx + 1;
        for p in 1..=n {
            for q in 1..=n {
                let mut left = NCPoly::zero(ngen);
                let mut right = NCPoly::zero(ngen);
                for r in 1..=n {
                    left = &left + &word(e(t, p, r), c(a, r, q))?;
                    right = &right + &word(c(a, p, r), e(s, r, q))?;
                }
                let ca = var(c(a, p, q))?;
                rels.push(&left - &ca);
                rels.push(&right - &ca);
            }
        }
    }
    Ok(rels)
}

impl RootPresentation {
    pub fn kind(&self) -> &RootKind {
        &self.kind
    }

    pub fn generators(&self) -> &[RootGenerator] {
        &self.generators
    }

    pub fn relations(&self) -> &[NCPoly] {
        &self.relations
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(ToString::to_string).collect()
    }

    /// Generators left after eliminating the linear relations, e.g. `Σ E = I`.
    pub fn effective_generator_count(&self) -> usize {
        let ngen = self.generators.len();
        let rows: Vec<Vec<Rational>> = self
            .relations
            .iter()
            .filter(|f| f.degree().is_some_and(|d| d <= 1))
            .map(|f| {
                let mut row = vec![rat(0); ngen];
                for (w, c) in f.terms() {
                    if let [g] = w.letters() {
                        row[*g as usize - 1] = c.clone();
                    }
                }
                row
            })
            .collect();
        if rows.is_empty() {
            return ngen;
        }
        ngen - Matrix::from_rows(rows).expect("rectangular").rank()
    }

    fn index_of(&self, g: RootGenerator) -> usize {
        self.generators.iter().position(|&h| h == g).expect("generator of this presentation")
    }
}

/// One `n x n` matrix over `B` per generator of `A` (free case) or per vertex
/// and then per arrow (path algebra case).
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgebraMap {
    kind: RootKind,
    algebra: Arc<BaseAlgebra>,
    images: Vec<Matrix<AlgElem>>,
}

impl MatrixAlgebraMap {
    pub fn new(kind: RootKind, algebra: Arc<BaseAlgebra>, images: Vec<Matrix<AlgElem>>) -> Result<Self> {
        kind.check()?;
        let n = kind.n();
        if images.len() != kind.num_images() {
            return Err(Error::LengthMismatch { expected: kind.num_images(), found: images.len() });
        }
        for m in &images {
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidMap(format!("images must be {n}x{n} matrices")));
            }
            if m.entries().any(|x| !Arc::ptr_eq(x.algebra(), &algebra) && **x.algebra() != *algebra) {
                return Err(Error::InvalidMap("entries from a different algebra".into()));
            }
        }
        if let RootKind::PathAlgebra { quiver, .. } = &kind {
            let k = quiver.vertices();
            let ident = Matrix::identity(n, &AlgElem::zero(&algebra));
            let mut sum = Matrix::zeros(n, n, &AlgElem::zero(&algebra));
            for i in 0..k {
                for j in 0..k {
                    let prod = images[i].mul_ref(&images[j]);
                    let want = if i == j { images[i].clone() } else { sum.zero_like() };
                    if prod != want {
                        return Err(Error::InvalidMap(format!(
                            "vertex images {} and {} are not orthogonal idempotents",
                            i + 1,
                            j + 1
                        )));
                    }
                }
                sum = sum.add_ref(&images[i]);
            }
            if sum != ident {
                return Err(Error::InvalidMap("vertex images do not sum to the identity".into()));
            }
            for (a, &(s, t)) in quiver.arrows().iter().enumerate() {
                let m = &images[k + a];
                if images[t - 1].mul_ref(m) != *m || m.mul_ref(&images[s - 1]) != *m {
                    return Err(Error::InvalidMap(format!("arrow {} is incompatible with its endpoints", a + 1)));
                }
            }
        }
        Ok(MatrixAlgebraMap { kind, algebra, images })
    }

    pub fn kind(&self) -> &RootKind {
        &self.kind
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        &self.algebra
    }

    pub fn images(&self) -> &[Matrix<AlgElem>] {
        &self.images
    }

    /// Postcompose with `f: B -> B'` entrywise.
    pub fn compose(&self, f: &AlgebraMorphism) -> Result<Self> {
        check_source(f, &self.algebra)?;
        let images = self.images.iter().map(|m| m.map(|x| f.apply(x))).collect();
        MatrixAlgebraMap::new(self.kind.clone(), f.to().clone(), images)
    }
}

/// One element of `B` per generator of the root presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct RootMap {
    kind: RootKind,
    algebra: Arc<BaseAlgebra>,
    images: Vec<AlgElem>,
}

impl RootMap {
    pub fn new(pres: &RootPresentation, algebra: Arc<BaseAlgebra>, images: Vec<AlgElem>) -> Result<Self> {
        if images.len() != pres.generators.len() {
            return Err(Error::LengthMismatch { expected: pres.generators.len(), found: images.len() });
        }
        if !satisfies_relations(pres, &algebra, &images)? {
            return Err(Error::InvalidMap("root presentation relations fail at the images".into()));
        }
        Ok(RootMap { kind: pres.kind.clone(), algebra, images })
    }

    pub fn kind(&self) -> &RootKind {
        &self.kind
    }

    pub fn algebra(&self) -> &Arc<BaseAlgebra> {
        &self.algebra
    }

    pub fn images(&self) -> &[AlgElem] {
        &self.images
    }

    pub fn compose(&self, pres: &RootPresentation, f: &AlgebraMorphism) -> Result<Self> {
        check_source(f, &self.algebra)?;
        RootMap::new(pres, f.to().clone(), self.images.iter().map(|x| f.apply(x)).collect())
    }
}

fn check_source(f: &AlgebraMorphism, alg: &Arc<BaseAlgebra>) -> Result<()> {
    if **f.from() != **alg {
        return Err(Error::InvalidMap("morphism source differs from the map's algebra".into()));
    }
    Ok(())
}

/// Whether every relation of the presentation vanishes at the given values.
pub fn satisfies_relations(pres: &RootPresentation, algebra: &Arc<BaseAlgebra>, values: &[AlgElem]) -> Result<bool> {
    let one = AlgElem::one(algebra);
    for f in &pres.relations {
        if !f.eval(values, &one)?.is_zero_elem() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_pres(pres: &RootPresentation, kind: &RootKind) -> Result<()> {
    if pres.kind != *kind {
        return Err(Error::InvalidMap("map and presentation have different kinds".into()));
    }
    Ok(())
}

/// `x_{ij,k} ↦ φ(x_k)_{ij}`, `e^{(v)}_{pq} ↦ φ(v)_{pq}`, `c^{(a)}_{pq} ↦ φ(a)_{pq}`.
pub fn lower(pres: &RootPresentation, phi: &MatrixAlgebraMap) -> Result<RootMap> {
    check_pres(pres, &phi.kind)?;
    let nverts = match &phi.kind {
        RootKind::Free { .. } => 0,
        RootKind::PathAlgebra { quiver, .. } => quiver.vertices(),
    };
    let images = pres
        .generators
        .iter()
        .map(|g| match *g {
            RootGenerator::X { i, j, k } => phi.images[k - 1].get(i - 1, j - 1).clone(),
            RootGenerator::E { vertex, p, q } => phi.images[vertex - 1].get(p - 1, q - 1).clone(),
            RootGenerator::C { arrow, p, q } => phi.images[nverts + arrow - 1].get(p - 1, q - 1).clone(),
        })
        .collect();
    RootMap::new(pres, phi.algebra.clone(), images)
}

/// Assemble `φ(x_k) = (ψ(x_{ij,k}))_{ij}` and the vertex and arrow matrices.
pub fn raise(pres: &RootPresentation, psi: &RootMap) -> Result<MatrixAlgebraMap> {
    check_pres(pres, &psi.kind)?;
    let n = pres.kind.n();
    let entry = |g: RootGenerator| psi.images[pres.index_of(g)].clone();
    let images = match &pres.kind {
        RootKind::Free { d, .. } => (1..=*d)
            .map(|k| Matrix::from_fn(n, n, |i, j| entry(RootGenerator::X { i: i + 1, j: j + 1, k })))
            .collect(),
        RootKind::PathAlgebra { quiver, .. } => {
            let mut out: Vec<Matrix<AlgElem>> = (1..=quiver.vertices())
                .map(|vertex| Matrix::from_fn(n, n, |p, q| entry(RootGenerator::E { vertex, p: p + 1, q: q + 1 })))
                .collect();
            out.extend((1..=quiver.num_arrows()).map(|arrow| {
                Matrix::from_fn(n, n, |p, q| entry(RootGenerator::C { arrow, p: p + 1, q: q + 1 }))
            }));
            out
        }
    };
    MatrixAlgebraMap::new(pres.kind.clone(), psi.algebra.clone(), images)
}

pub fn random_alg_matrix(rng: &mut SampleRng, alg: &Arc<BaseAlgebra>, n: usize) -> Matrix<AlgElem> {
    Matrix::from_fn(n, n, |_, _| sample::alg_elem(rng, alg))
}

/// `(I + N)^{-1} = Σ (-N)^k` for strictly lower triangular `N`.
fn unipotent_inverse(l: &Matrix<AlgElem>) -> Matrix<AlgElem> {
    let ident = l.one_like();
    let neg_nil = ident.sub_ref(l);
    let mut acc = ident.clone();
    let mut power = ident;
    for _ in 1..l.rows() {
        power = power.mul_ref(&neg_nil);
        acc = acc.add_ref(&power);
    }
    acc
}

/// A random valid map: vertex images `g D_v g^{-1}` for a random splitting of
/// the diagonal and a unipotent `g` over `B`, arrow images `E_t R E_s`.
pub fn random_matrix_map(rng: &mut SampleRng, kind: &RootKind, alg: &Arc<BaseAlgebra>) -> Result<MatrixAlgebraMap> {
    kind.check()?;
    let n = kind.n();
    let images = match kind {
        RootKind::Free { d, .. } => (0..*d).map(|_| random_alg_matrix(rng, alg, n)).collect(),
        RootKind::PathAlgebra { quiver, .. } => {
            let k = quiver.vertices();
            let z = AlgElem::zero(alg);
            let one = AlgElem::one(alg);
            let g = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Greater => sample::alg_elem(rng, alg),
                std::cmp::Ordering::Equal => one.clone(),
                std::cmp::Ordering::Less => z.clone(),
            });
            let g_inv = unipotent_inverse(&g);
            let owner: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
            let verts: Vec<Matrix<AlgElem>> = (0..k)
                .map(|v| {
                    let d = Matrix::from_fn(n, n, |i, j| if i == j && owner[i] == v { one.clone() } else { z.clone() });
                    g.mul_ref(&d).mul_ref(&g_inv)
                })
                .collect();
            let mut images = verts.clone();
            for &(s, t) in quiver.arrows() {
                let r = random_alg_matrix(rng, alg, n);
                images.push(verts[t - 1].mul_ref(&r).mul_ref(&verts[s - 1]));
            }
            images
        }
    };
    MatrixAlgebraMap::new(kind.clone(), alg.clone(), images)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianReport {
    pub kind: String,
    pub generators: usize,
    pub rep_variables: usize,
    pub checks: usize,
    pub counterexamples: Vec<String>,
}

impl AbelianReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Compare points of the abelianized root presentation with points of
/// `rep_n` over the rationals and the dual numbers.
pub fn abelianized_root_equals_rep_ring(kind: &RootKind, samples: usize, seed: u64) -> Result<AbelianReport> {
    let pres = root_presentation(kind)?;
    let n = kind.n();
    let rep_variables = kind.num_images() * n * n;
    let mut report = AbelianReport {
        kind: match kind {
            RootKind::Free { d, n } => format!("free d={d} n={n}"),
            RootKind::PathAlgebra { quiver, n } => {
                format!("path algebra k={} arrows={} n={n}", quiver.vertices(), quiver.num_arrows())
            }
        },
        generators: pres.generators.len(),
        rep_variables,
        checks: 0,
        counterexamples: Vec::new(),
    };
    if let RootKind::Free { d, .. } = kind {
        let generic = repscheme::variable_names(n, *d);
        report.checks += 1;
        if generic != pres.generator_names() || !pres.relations.is_empty() {
            report.counterexamples.push("free generators differ from the generic matrix variables".into());
        }
        return Ok(report);
    }
    let mut rng = sample::rng(seed);
    for alg in [BaseAlgebra::rationals(), BaseAlgebra::dual_numbers()] {
        for s in 0..samples {
            let phi = random_matrix_map(&mut rng, kind, &alg)?;
            report.checks += 1;
            match lower(&pres, &phi) {
                Ok(psi) => {
                    let back = raise(&pres, &psi)?;
                    if back != phi {
                        report.counterexamples.push(format!("{} sample {s}: raise(lower) differs", alg.name()));
                    }
                }
                Err(e) => report.counterexamples.push(format!("{} sample {s}: {e}", alg.name())),
            }
            let mut values = lower(&pres, &phi).map(|p| p.images).unwrap_or_default();
            if values.is_empty() {
                continue;
            }
            let g = rng.gen_range(0..values.len());
            values[g] = values[g].add_ref(&sample::alg_elem(&mut rng, &alg));
            report.checks += 1;
            let on_root = satisfies_relations(&pres, &alg, &values)?;
            let as_matrices = RootMap { kind: kind.clone(), algebra: alg.clone(), images: values };
            let on_rep = raise(&pres, &as_matrices).is_ok();
            if on_root != on_rep {
                report.counterexamples.push(format!(
                    "{} sample {s}: perturbed point satisfies root relations {on_root}, rep conditions {on_rep}",
                    alg.name()
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops(n: usize) -> RootKind {
        RootKind::PathAlgebra { quiver: Arc::new(Quiver::loops(2)), n }
    }

    #[test]
    fn presentations() {
        let free = root_presentation(&RootKind::Free { d: 2, n: 2 }).unwrap();
        assert_eq!(free.generators().len(), 8);
        assert!(free.relations().is_empty());
        assert_eq!(free.generator_names()[1], "x_1_2_1");
        for n in 1..=3 {
            let p = root_presentation(&two_loops(n)).unwrap();
            assert_eq!(p.generators().len(), 3 * n * n);
            assert_eq!(p.effective_generator_count(), 2 * n * n);
        }
        let arrow = RootKind::PathAlgebra { quiver: Arc::new(Quiver::new(2, vec![(1, 2)]).unwrap()), n: 1 };
        let p = root_presentation(&arrow).unwrap();
        assert_eq!(p.generator_names(), vec!["e1_1_1", "e2_1_1", "c1_1_1"]);
        // e1^2 - e1, e1 e2, e2 e1, e2^2 - e2, e1 + e2 - 1, e2 c - c, c e1 - c
        assert_eq!(p.relations().len(), 7);
        assert_eq!(p.relations()[4], NCPoly::parse("x1 + x2 - 1", 3).unwrap());
    }

    #[test]
    fn identity_lowering() {
        let b = BaseAlgebra::upper_triangular();
        let kind = RootKind::Free { d: 1, n: 2 };
        let pres = root_presentation(&kind).unwrap();
        let phi = MatrixAlgebraMap::new(kind, b.clone(), vec![Matrix::identity(2, &AlgElem::zero(&b))]).unwrap();
        let psi = lower(&pres, &phi).unwrap();
        let want: Vec<AlgElem> = [1, 0, 0, 1].iter().map(|&c| AlgElem::scalar(&b, rat(c))).collect();
        assert_eq!(psi.images(), want.as_slice());
        let zero = RootMap::new(&pres, b.clone(), vec![AlgElem::zero(&b); 4]).unwrap();
        assert!(raise(&pres, &zero).unwrap().images()[0].is_zero_matrix());
    }

    #[test]
    fn round_trips() {
        let mut rng = sample::rng(3);
        let kinds = [
            RootKind::Free { d: 2, n: 2 },
            two_loops(2),
            RootKind::PathAlgebra { quiver: Arc::new(Quiver::new(2, vec![(1, 2), (2, 2)]).unwrap()), n: 2 },
        ];
        for kind in &kinds {
            let pres = root_presentation(kind).unwrap();
            for alg in [BaseAlgebra::matrix_algebra(2), BaseAlgebra::truncated_poly(3), BaseAlgebra::upper_triangular()] {
                for _ in 0..5 {
                    let phi = random_matrix_map(&mut rng, kind, &alg).unwrap();
                    let psi = lower(&pres, &phi).unwrap();
                    assert_eq!(raise(&pres, &psi).unwrap(), phi);
                    assert_eq!(lower(&pres, &raise(&pres, &psi).unwrap()).unwrap(), psi);
                }
            }
        }
    }

    #[test]
    fn invalid_maps() {
        let b = BaseAlgebra::rationals();
        let kind = RootKind::PathAlgebra { quiver: Arc::new(Quiver::new(2, vec![]).unwrap()), n: 1 };
        let one = Matrix::identity(1, &AlgElem::zero(&b));
        assert!(MatrixAlgebraMap::new(kind.clone(), b.clone(), vec![one.clone(), one.clone()]).is_err());
        let pres = root_presentation(&kind).unwrap();
        assert!(RootMap::new(&pres, b.clone(), vec![AlgElem::one(&b), AlgElem::one(&b)]).is_err());
    }

    #[test]
    fn loop_quiver_matches_free() {
        let mut rng = sample::rng(11);
        let b = BaseAlgebra::matrix_algebra(2);
        let free = root_presentation(&RootKind::Free { d: 2, n: 2 }).unwrap();
        let loops = root_presentation(&two_loops(2)).unwrap();
        for _ in 0..5 {
            let values: Vec<AlgElem> = (0..8).map(|_| sample::alg_elem(&mut rng, &b)).collect();
            let psi = RootMap::new(&free, b.clone(), values.clone()).unwrap();
            let mut looped: Vec<AlgElem> =
                [1, 0, 0, 1].iter().map(|&c| AlgElem::scalar(&b, rat(c))).collect();
            looped.extend(values);
            let psi2 = RootMap::new(&loops, b.clone(), looped).unwrap();
            let phi = raise(&free, &psi).unwrap();
            let phi2 = raise(&loops, &psi2).unwrap();
            assert_eq!(&phi2.images()[1..], phi.images());
        }
    }

    #[test]
    fn abelianized_reports() {
        assert!(abelianized_root_equals_rep_ring(&RootKind::Free { d: 2, n: 2 }, 5, 0).unwrap().passed());
        let pair = RootKind::PathAlgebra { quiver: Arc::new(Quiver::new(2, vec![]).unwrap()), n: 2 };
        let r = abelianized_root_equals_rep_ring(&pair, 5, 0).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert_eq!(r.checks, 20);
        assert!(abelianized_root_equals_rep_ring(&two_loops(2), 5, 1).unwrap().passed());
    }
}
