use std::sync::Arc;

use ncformal::matrix::Ring;
use ncformal::quiver::*;
use ncformal::sample::{self, SampleRng};
use num_integer::binomial;
use proptest::prelude::*;
use rand::Rng;

fn random_element(rng: &mut SampleRng, q: &Arc<Quiver>) -> PathAlgebraElement {
    let paths = q.paths_up_to(2);
    let mut e = PathAlgebraElement::zero(q);
    for _ in 0..rng.gen_range(1..=4) {
        let p = paths[rng.gen_range(0..paths.len())].clone();
        let t = PathAlgebraElement::path(q, p, sample::small_rational(rng));
        e = e.checked_add(&t).unwrap();
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn path_multiplication_is_associative(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let q = Arc::new(sample::quiver(&mut rng, 3, 4));
        let a = random_element(&mut rng, &q);
        let b = random_element(&mut rng, &q);
        let c = random_element(&mut rng, &q);
        let l = path_mul(&path_mul(&a, &b).unwrap(), &c).unwrap();
        let r = path_mul(&a, &path_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn vertices_are_orthogonal_idempotents(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let q = Arc::new(sample::quiver(&mut rng, 4, 4));
        let mut sum = PathAlgebraElement::zero(&q);
        for v in 1..=q.vertices() {
            let ev = PathAlgebraElement::vertex(&q, v).unwrap();
            for w in 1..=q.vertices() {
                let ew = PathAlgebraElement::vertex(&q, w).unwrap();
                let p = path_mul(&ev, &ew).unwrap();
                prop_assert_eq!(p, if v == w { ev.clone() } else { PathAlgebraElement::zero(&q) });
            }
            sum = sum.checked_add(&ev).unwrap();
        }
        let one = PathAlgebraElement::one(&q);
        prop_assert_eq!(&sum, &one);
        let a = random_element(&mut rng, &q);
        prop_assert_eq!(path_mul(&one, &a).unwrap(), a.clone());
        prop_assert_eq!(path_mul(&a, &one).unwrap(), a);
    }

    #[test]
    fn representations_are_algebra_homomorphisms(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let q = Arc::new(sample::quiver(&mut rng, 3, 4));
        let dims = (0..q.vertices()).map(|_| rng.gen_range(0..=2)).collect();
        let rep = sample::quiver_rep(&mut rng, &q, dims);
        let a = random_element(&mut rng, &q);
        let b = random_element(&mut rng, &q);
        let lhs = rep.eval(&path_mul(&a, &b).unwrap()).unwrap();
        let rhs = rep.eval(&a).unwrap().rat_mul(&rep.eval(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn extended_euler_form_matches_extended_quiver(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = sample::rng(seed);
        let q = sample::quiver(&mut rng, 3, 4);
        let ext = extend_quiver(&q, n, false).unwrap();
        let chi = euler_form(ext.quiver());
        let k = q.vertices() + 1;
        let at: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
        let bt: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
        prop_assert_eq!(euler_form_extended(&q, n, &at, &bt).unwrap(), chi.eval(&at, &bt).unwrap());
    }

    #[test]
    fn euler_form_is_dim_minus_arrows(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let q = sample::quiver(&mut rng, 4, 5);
        let a: Vec<i64> = (0..q.vertices()).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..q.vertices()).map(|_| rng.gen_range(-3..=3)).collect();
        let dot: i64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let arrows: i64 = q.arrows().iter().map(|&(s, t)| a[s - 1] * b[t - 1]).sum();
        prop_assert_eq!(euler_form(&q).eval(&a, &b).unwrap(), dot - arrows);
    }

    #[test]
    fn inverse_extension_recovers_identity(seed in any::<u64>(), n in 1usize..3) {
        let mut rng = sample::rng(seed);
        let q = Arc::new(sample::quiver(&mut rng, 2, 2));
        let plain = extend_quiver(&q, n, false).unwrap();
        let ext = extend_quiver(&q, n, true).unwrap();
        let data = localization_data(&ext).unwrap();
        let alpha = sample::dimvector(&mut rng, q.vertices(), n);
        let mut dims = vec![1];
        dims.extend(&alpha);
        let rep = sample::quiver_rep(&mut rng, plain.quiver(), dims);
        let sigma = sigma_matrix(&plain, &rep).unwrap();
        match extend_rep_with_inverse(&ext, &rep).unwrap() {
            Some(full) => prop_assert!(check_localization_point(&data, &full).unwrap()),
            None => prop_assert!(sigma.inverse().is_err()),
        }
    }
}

#[test]
fn dimvector_count_is_binomial() {
    for k in 1..=5 {
        for n in 0..=6 {
            let v = enumerate_dimvectors(k, n);
            assert_eq!(v.len(), binomial(n + k - 1, k - 1), "k={k} n={n}");
            assert!(v.iter().all(|a| a.len() == k && a.iter().sum::<usize>() == n));
            assert!(v.windows(2).all(|w| w[0] > w[1]));
        }
    }
}

#[test]
fn loop_bundle_dimension_is_d_n_squared() {
    for d in 0..=3 {
        for n in 1..=5 {
            assert_eq!(bundle_dim(n, &Quiver::loops(d), &[n]).unwrap(), d * n * n);
        }
    }
    assert!(bundle_dim(3, &Quiver::loops(1), &[2]).is_err());
}

#[test]
fn quiver_json_round_trip() {
    let mut rng = sample::rng(3);
    for _ in 0..20 {
        let q = sample::quiver(&mut rng, 4, 5);
        assert_eq!(Quiver::from_json(&q.to_json()).unwrap(), q);
    }
    assert!(Quiver::from_json(r#"{"vertices":2,"arrows":[[1,3]]}"#).is_err());
}

#[test]
fn zero_rep_evaluates_paths_to_zero() {
    let q = Arc::new(Quiver::new(2, vec![(1, 2), (2, 2)]).unwrap());
    let rep = QuiverRep::zero(q.clone(), vec![2, 1]).unwrap();
    let a = PathAlgebraElement::arrow(&q, 0).unwrap();
    assert!(rep.eval(&a).unwrap().is_zero_matrix());
    let one = rep.eval(&PathAlgebraElement::one(&q)).unwrap();
    assert_eq!(one, one.one_like());
}
