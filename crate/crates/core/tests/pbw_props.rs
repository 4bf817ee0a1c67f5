use ncformal::hallbasis::{HallBasis, LieElement};
use ncformal::ncpoly::{nc_commutator, nc_mul, NCPoly};
use ncformal::pbw::{filtration_degree, pbw_expand, pbw_normalize, truncated_mul, PBWElement, Straightener};
use ncformal::sample;
use proptest::prelude::*;

fn basis(d: usize, k: usize) -> HallBasis {
    HallBasis::new(d, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn expand_after_normalize_is_identity(seed in any::<u64>(), d in 1usize..=3) {
        let b = basis(d, 5);
        let p = sample::ncpoly(&mut sample::rng(seed), d, 5, 6);
        prop_assert_eq!(pbw_expand(&pbw_normalize(&p, &b).unwrap(), &b).unwrap(), p);
    }

    #[test]
    fn normalize_after_expand_is_identity(seed in any::<u64>()) {
        let b = basis(2, 5);
        let mut rng = sample::rng(seed);
        // random well-formed element: a normal form, rescaled termwise
        let e = pbw_normalize(&sample::ncpoly(&mut rng, 2, 5, 5), &b).unwrap();
        let mut f = PBWElement::zero(2);
        for (m, c) in e.terms() {
            f.add_term(m.clone(), c.scale(&sample::nonzero_rational(&mut rng))).unwrap();
        }
        prop_assert_eq!(pbw_normalize(&pbw_expand(&f, &b).unwrap(), &b).unwrap(), f);
    }

    #[test]
    fn truncated_product_is_truncated_full_product(seed in any::<u64>(), k in 1usize..=4) {
        let small = basis(2, 4);
        let big = basis(2, 8);
        let mut rng = sample::rng(seed);
        let p = sample::ncpoly(&mut rng, 2, 4, 4);
        let q = sample::ncpoly(&mut rng, 2, 4, 4);
        let a = pbw_normalize(&p, &big).unwrap();
        let b = pbw_normalize(&q, &big).unwrap();
        let got = truncated_mul(&a.truncate(k), &b.truncate(k), k, &small).unwrap();
        let want = pbw_normalize(&nc_mul(&p, &q).unwrap(), &big).unwrap().truncate(k);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn filtration_is_multiplicative(seed in any::<u64>()) {
        let b = basis(2, 8);
        let mut rng = sample::rng(seed);
        let p = sample::ncpoly(&mut rng, 2, 4, 3);
        let q = sample::ncpoly(&mut rng, 2, 4, 3);
        prop_assume!(!p.is_zero() && !q.is_zero());
        let pq = nc_mul(&p, &q).unwrap();
        let fp = filtration_degree(&p, &b).unwrap();
        let fq = filtration_degree(&q, &b).unwrap();
        prop_assert!(filtration_degree(&pq, &b).unwrap() >= fp + fq);
    }

    #[test]
    fn abelianization_is_the_empty_coefficient(seed in any::<u64>()) {
        let b = basis(3, 4);
        let p = sample::ncpoly(&mut sample::rng(seed), 3, 4, 5);
        let e = pbw_normalize(&p, &b).unwrap();
        prop_assert_eq!(p.abelianize(), e.coeff(&ncformal::pbw::BracketMonomial::empty()));
    }

    #[test]
    fn brackets_expand_to_commutators(i in 0usize..14, j in 0usize..14) {
        let b = basis(2, 6);
        prop_assume!(b.weight(i) + b.weight(j) <= 6);
        let br = b.bracket(i, j).unwrap();
        let want = nc_commutator(b.expand_to_words(i).unwrap(), b.expand_to_words(j).unwrap()).unwrap();
        prop_assert_eq!(b.expand_lie(&br).unwrap(), want);
    }
}

#[test]
fn bracket_is_antisymmetric() {
    let b = basis(3, 4);
    for i in 0..b.len() {
        for j in 0..b.len() {
            if b.weight(i) + b.weight(j) > 4 {
                continue;
            }
            let x = b.bracket(i, j).unwrap();
            let y = b.bracket(j, i).unwrap();
            assert!(x.add(&y).is_zero(), "[{i},{j}]");
        }
    }
    assert!(b.bracket(0, 0).unwrap().is_zero());
    assert_eq!(b.bracket_normalize(&LieElement::basis(1), &LieElement::basis(0)).unwrap(), LieElement::basis(3));
}

#[test]
fn straightener_reuse_matches_fresh_calls() {
    let b = basis(2, 5);
    let mut st = Straightener::new(&b, None);
    let mut rng = sample::rng(9);
    for _ in 0..30 {
        let p = sample::ncpoly(&mut rng, 2, 5, 4);
        assert_eq!(st.normalize(&p).unwrap(), pbw_normalize(&p, &b).unwrap());
    }
    assert!(pbw_normalize(&NCPoly::parse("x1*x2*x1*x2*x1*x2", 2).unwrap(), &b).is_err());
}
