use std::sync::Arc;

use ncformal::algebra::{AlgebraMorphism, BaseAlgebra};
use ncformal::matrix::{Matrix, Ring};
use ncformal::ncpoly::{nc_mul, rat};
use ncformal::quiver::Quiver;
use ncformal::repscheme::*;
use ncformal::rootalg::*;
use ncformal::{sample, NCPoly, Rational};
use proptest::prelude::*;
use rand::Rng;

fn random_point(rng: &mut sample::SampleRng, n: usize, d: usize) -> Vec<Matrix<Rational>> {
    (0..d).map(|_| sample::rat_matrix(rng, n, n)).collect()
}

fn diagonal_point(rng: &mut sample::SampleRng, n: usize, d: usize) -> Vec<Matrix<Rational>> {
    (0..d)
        .map(|_| {
            let diag: Vec<Rational> = (0..n).map(|_| sample::small_rational(rng)).collect();
            Matrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { rat(0) })
        })
        .collect()
}

fn kinds() -> Vec<RootKind> {
    vec![
        RootKind::Free { d: 1, n: 2 },
        RootKind::Free { d: 2, n: 2 },
        RootKind::PathAlgebra { quiver: Arc::new(Quiver::loops(2)), n: 2 },
        RootKind::PathAlgebra { quiver: Arc::new(Quiver::new(2, vec![(1, 2)]).unwrap()), n: 2 },
        RootKind::PathAlgebra { quiver: Arc::new(Quiver::new(2, vec![(1, 2), (2, 1), (2, 2)]).unwrap()), n: 2 },
    ]
}

fn morphisms() -> Vec<AlgebraMorphism> {
    vec![
        AlgebraMorphism::truncated_into_matrices(),
        AlgebraMorphism::triangular_inclusion(),
        AlgebraMorphism::truncation_quotient(),
        AlgebraMorphism::triangular_corner(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generic_matrices_specialize(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let f = sample::ncpoly(&mut rng, 2, 3, 4);
        let pt = random_point(&mut rng, n, 2);
        let coords = point_coordinates(&pt);
        let generic = evaluate_at_generic(&f, n).unwrap();
        let direct = f.eval(&pt, &Matrix::rat_identity(n)).unwrap();
        let one = rat(1);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(&generic.get(i, j).eval(&coords, &one).unwrap(), direct.get(i, j));
            }
        }
    }

    #[test]
    fn generic_evaluation_is_multiplicative(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = sample::rng(seed);
        let f = sample::ncpoly(&mut rng, 2, 2, 3);
        let g = sample::ncpoly(&mut rng, 2, 2, 3);
        let lhs = evaluate_at_generic(&nc_mul(&f, &g).unwrap(), n).unwrap();
        let rhs = evaluate_at_generic(&f, n).unwrap().try_mul(&evaluate_at_generic(&g, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ideal_cuts_out_representations(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let pres = Presentation::new(2, vec![
            NCPoly::parse("x1*x2 - x2*x1", 2).unwrap(),
            NCPoly::parse("x1*x1*x2 - x2*x1*x1", 2).unwrap(),
        ]).unwrap();
        let ideal = relation_ideal(&pres, n).unwrap();
        let diagonal = rng.gen_bool(0.5);
        let pt = if diagonal { diagonal_point(&mut rng, n, 2) } else { random_point(&mut rng, n, 2) };
        let rep = is_representation(&pres, &pt).unwrap();
        prop_assert_eq!(ideal_vanishes_at(&ideal, &point_coordinates(&pt)).unwrap(), rep);
        if diagonal {
            prop_assert!(rep);
        }
        let g = sample::invertible(&mut rng, n);
        prop_assert_eq!(is_representation(&pres, &conjugate(&pt, &g).unwrap()).unwrap(), rep);
    }

    #[test]
    fn root_correspondence_round_trips(seed in any::<u64>(), which in 0usize..5, a in 0usize..4) {
        let mut rng = sample::rng(seed);
        let kind = &kinds()[which];
        let alg = [
            BaseAlgebra::matrix_algebra(2),
            BaseAlgebra::truncated_poly(3),
            BaseAlgebra::dual_numbers(),
            BaseAlgebra::upper_triangular(),
        ][a].clone();
        let pres = root_presentation(kind).unwrap();
        let phi = random_matrix_map(&mut rng, kind, &alg).unwrap();
        let psi = lower(&pres, &phi).unwrap();
        prop_assert!(satisfies_relations(&pres, &alg, psi.images()).unwrap());
        prop_assert_eq!(&raise(&pres, &psi).unwrap(), &phi);
        prop_assert_eq!(lower(&pres, &raise(&pres, &psi).unwrap()).unwrap(), psi);
    }

    #[test]
    fn lowering_is_natural(seed in any::<u64>(), which in 0usize..5, m in 0usize..4) {
        let mut rng = sample::rng(seed);
        let kind = &kinds()[which];
        let f = &morphisms()[m];
        let pres = root_presentation(kind).unwrap();
        let phi = random_matrix_map(&mut rng, kind, f.from()).unwrap();
        let pushed = lower(&pres, &phi.compose(f).unwrap()).unwrap();
        let lowered = lower(&pres, &phi).unwrap().compose(&pres, f).unwrap();
        prop_assert_eq!(pushed, lowered);
    }
}

#[test]
fn morphisms_preserve_products() {
    let mut rng = sample::rng(5);
    for f in morphisms() {
        for _ in 0..20 {
            let x = sample::alg_elem(&mut rng, f.from());
            let y = sample::alg_elem(&mut rng, f.from());
            assert_eq!(f.apply(&x.mul_ref(&y)), f.apply(&x).mul_ref(&f.apply(&y)));
        }
    }
}

#[test]
fn free_generators_follow_rep_variables() {
    for (d, n) in [(1, 1), (2, 2), (3, 2)] {
        let pres = root_presentation(&RootKind::Free { d, n }).unwrap();
        assert_eq!(pres.generator_names(), variable_names(n, d));
        assert_eq!(pres.effective_generator_count(), d * n * n);
    }
}

#[test]
fn abelianization_matches_on_small_kinds() {
    for kind in [RootKind::Free { d: 1, n: 2 }, kinds()[3].clone()] {
        let report = abelianized_root_equals_rep_ring(&kind, 10, 1).unwrap();
        assert!(report.passed(), "{:?}", report.counterexamples);
        assert!(report.checks > 0);
    }
}

#[test]
fn decomposition_covers_all_dimension_vectors() {
    let q = Quiver::new(2, vec![(1, 2), (2, 2)]).unwrap();
    let recs = decompose_rep_quiver(&q, 3).unwrap();
    assert_eq!(recs.len(), 4);
    for r in recs {
        let want = 9 - r.alpha.iter().map(|a| a * a).sum::<usize>() + r.alpha[0] * r.alpha[1] + r.alpha[1] * r.alpha[1];
        assert_eq!(r.bundle_dim, want);
    }
}
