use std::sync::Arc;

use ncformal::matrix::Matrix;
use ncformal::quiver::{bundle_dim, extend_quiver, Quiver, QuiverRep};
use ncformal::sample;
use ncformal::strata::*;
use proptest::prelude::*;
use rand::Rng;

const PARTITION_COUNTS: [usize; 10] = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30];

/// Rank of the span of all path images of the `v0` line at each vertex.
fn generated_by_paths(t: &TildeRep, max_len: usize) -> bool {
    let rep = t.rep();
    let q = rep.quiver();
    (1..=q.vertices()).all(|v| {
        let d = rep.dims()[v - 1];
        let cols: Vec<Matrix<_>> = q
            .paths_up_to(max_len)
            .into_iter()
            .filter(|p| p.start() == 1 && p.end() == v)
            .map(|p| rep.eval_path(&p).unwrap())
            .collect();
        if d == 0 {
            return true;
        }
        let m = Matrix::from_fn(d, cols.len(), |i, j| cols[j].get(i, 0).clone());
        cols.len() >= d && m.rank() == d
    })
}

fn chi_tilde(q: &Quiver, n: usize, a: &[usize], b: &[usize]) -> i64 {
    let dot: usize = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let arrows: usize = q.arrows().iter().map(|&(s, t)| a[s - 1] * b[t - 1]).sum();
    let total: usize = b.iter().sum();
    1 + dot as i64 - arrows as i64 - (n * total) as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generation_matches_path_span(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = sample::rng(seed);
        let q = sample::quiver(&mut rng, 2, 2);
        let ext = extend_quiver(&q, n, false).unwrap();
        let mut dims = vec![1];
        dims.extend(sample::dimvector(&mut rng, q.vertices(), n));
        let base = sample::quiver_rep(&mut rng, ext.quiver(), dims.clone());
        let maps = base
            .maps()
            .iter()
            .map(|m| if rng.gen_bool(0.4) { Matrix::rat_zeros(m.rows(), m.cols()) } else { m.clone() })
            .collect();
        let rep = QuiverRep::new(ext.quiver().clone(), dims.clone(), maps).unwrap();
        let t = TildeRep::new(ext, rep).unwrap();
        let gen = is_generated_from_v0(&t).unwrap();
        prop_assert_eq!(gen, generated_by_paths(&t, n + 1));
        let alpha = &dims[1..];
        let theta = Theta::default_for(alpha);
        let dv: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
        prop_assert_eq!(theta_pairing(&theta, &dv).unwrap(), 0);
        prop_assert_eq!(check_theta_stability(&t, &theta).unwrap(), gen);
    }

    #[test]
    fn built_tilde_reps_are_stable(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = sample::rng(seed);
        let q = Arc::new(sample::quiver(&mut rng, 3, 3));
        let alpha = sample::dimvector(&mut rng, q.vertices(), n);
        let s = sample::quiver_rep(&mut rng, &q, alpha.clone());
        let t = build_tilde_rep(&s, n).unwrap();
        prop_assert!(is_generated_from_v0(&t).unwrap());
        prop_assert!(check_theta_stability(&t, &Theta::default_for(&alpha)).unwrap());
        prop_assert!(!is_generated_from_v0(&zero_tilde_rep(&s, n).unwrap()).unwrap());
    }

    #[test]
    fn substrata_match_the_count_formula(seed in any::<u64>(), m in 1usize..=4, n in 1usize..=2) {
        let mut rng = sample::rng(seed);
        let q = sample::quiver(&mut rng, 3, 3);
        let all = enumerate_substrata(m, n, &q);
        let v = ncformal::quiver::enumerate_dimvectors(q.vertices(), n).len();
        prop_assert_eq!(all.len(), substrata_count_formula(m, v));
        for (i, s) in all.iter().enumerate() {
            prop_assert!(!all[..i].contains(s));
            prop_assert_eq!(s.partition.iter().sum::<usize>(), m);
        }
    }

    #[test]
    fn local_quiver_counts_come_from_the_euler_form(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = sample::rng(seed);
        let q = Quiver::loops(rng.gen_range(1..=2));
        let types = enumerate_substrata(2, n, &q);
        let t = &types[rng.gen_range(0..types.len())];
        let setting = local_quiver(t, n, &q).unwrap();
        for (i, a) in t.dim_vectors.iter().enumerate() {
            prop_assert_eq!(setting.arrow_counts[i][i], bundle_dim(n, &q, a).unwrap());
            for (j, b) in t.dim_vectors.iter().enumerate() {
                let want = i64::from(i == j) - chi_tilde(&q, n, a, b);
                prop_assert_eq!(setting.arrow_counts[i][j] as i64, want);
            }
        }
        prop_assert_eq!(&setting.gamma, &t.partition);
    }
}

#[test]
fn partitions_are_counted_correctly() {
    for (m, &c) in PARTITION_COUNTS.iter().enumerate() {
        let ps = partitions(m);
        assert_eq!(ps.len(), c, "m={m}");
        assert!(ps.iter().all(|p| p.iter().sum::<usize>() == m && p.windows(2).all(|w| w[0] >= w[1])));
    }
}

#[test]
fn invalid_thetas_are_rejected() {
    let q = Arc::new(Quiver::loops(1));
    let s = sample::quiver_rep(&mut sample::rng(1), &q, vec![2]);
    let t = build_tilde_rep(&s, 2).unwrap();
    assert!(check_theta_stability(&t, &Theta { weights: vec![-2, 1, 1] }).is_err());
    assert!(check_theta_stability(&t, &Theta { weights: vec![0, 0] }).is_err());
    assert!(check_theta_stability(&t, &Theta { weights: vec![-1, 1] }).is_err());
    assert!(check_theta_stability(&t, &Theta { weights: vec![-4, 2] }).unwrap());
}

#[test]
fn semisimple_types_validate() {
    assert!(SemisimpleType::new(vec![1, 2], vec![vec![1], vec![1]], 1).is_err());
    assert!(SemisimpleType::new(vec![2], vec![vec![2]], 1).is_err());
    let t = SemisimpleType::new(vec![2, 1], vec![vec![1], vec![1]], 1).unwrap();
    assert_eq!(t.z(), 2);
    let q = Arc::new(Quiver::loops(1));
    let a = sample::quiver_rep(&mut sample::rng(2), &q, vec![1]);
    assert!(t.clone().with_simples(vec![a.clone(), a.clone()]).is_err());
}
