mod common;

use common::positive_metric;
use proptest::prelude::*;
use psrate_core::channel::{bsc, mary_symmetric};
use psrate_core::empirical::{
    composition_sorted_rate, empirical_code_rate, monte_carlo_t_c, Composition, McConfig,
    SequencePair,
};
use psrate_core::metric::{likelihood_metric, posterior_metric, PosteriorScaling};
use psrate_core::rates::achievable_transmission_rate;
use psrate_core::{Alphabet, Dmc, Metric, Pmf};

fn pair_and_metric() -> impl Strategy<Value = (SequencePair, Metric)> {
    (2usize..=5, 2usize..=5, 1usize..=40).prop_flat_map(|(nx, ny, n)| {
        (
            proptest::collection::vec(0..nx, n),
            proptest::collection::vec(0..ny, n),
            positive_metric(nx, ny),
        )
            .prop_map(|(x, y, q)| (SequencePair::new(x, y).unwrap(), q))
    })
}

proptest! {
    #[test]
    fn rate_ignores_joint_permutation((pair, q) in pair_and_metric(), rot in 0usize..40) {
        let n = pair.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.rotate_left(rot % n);
        idx.reverse();
        let x = idx.iter().map(|&i| pair.x()[i]).collect();
        let y = idx.iter().map(|&i| pair.y()[i]).collect();
        let permuted = SequencePair::new(x, y).unwrap();
        let a = empirical_code_rate(&pair, &q).unwrap();
        let b = empirical_code_rate(&permuted, &q).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn rate_ignores_global_scaling((pair, q) in pair_and_metric(), c in 1e-3..1e3f64) {
        let scaled = Metric::from_flat(
            q.input().clone(),
            q.output().clone(),
            q.matrix().iter().map(|v| v * c).collect(),
        )
        .unwrap();
        let a = empirical_code_rate(&pair, &q).unwrap();
        let b = empirical_code_rate(&pair, &scaled).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn breakdown_recombines((pair, q) in pair_and_metric()) {
        let t = empirical_code_rate(&pair, &q).unwrap();
        let br = composition_sorted_rate(&pair, &q).unwrap();
        prop_assert!((br.recombined - t).abs() <= 1e-12);
    }
}

#[test]
fn breakdown_matches_group_by() {
    let q = likelihood_metric(&mary_symmetric(3, 0.2).unwrap()).unwrap();
    let x = vec![0, 1, 2, 2, 1, 0, 0, 2, 1, 1, 1, 0];
    let y = vec![0, 1, 2, 0, 1, 0, 2, 2, 1, 0, 1, 1];
    let pair = SequencePair::new(x.clone(), y.clone()).unwrap();
    let br = composition_sorted_rate(&pair, &q).unwrap();
    // oracle: group terms log2 q(a,b) / ((1/3) sum_c q(c,b)) by input symbol
    let term = |a: usize, b: usize| {
        let col: f64 = (0..3).map(|c| q.get(c, b)).sum();
        (q.get(a, b) / (col / 3.0)).log2()
    };
    for bucket in &br.buckets {
        let members: Vec<usize> = (0..12).filter(|&i| x[i] == bucket.symbol).collect();
        let mean = members.iter().map(|&i| term(x[i], y[i])).sum::<f64>() / members.len() as f64;
        assert_eq!(bucket.count, members.len());
        assert!((bucket.fraction - members.len() as f64 / 12.0).abs() < 1e-15);
        assert!((bucket.mean - mean).abs() < 1e-12);
    }
    assert_eq!(br.buckets.iter().map(|b| b.count).sum::<usize>(), 12);
}

#[test]
fn monte_carlo_is_unbiased_on_fixtures() {
    let cases: Vec<(Pmf, Dmc, Metric)> = {
        let b = bsc(0.11).unwrap();
        let u = Pmf::uniform(b.input().clone()).unwrap();
        let m = mary_symmetric(4, 0.2).unwrap();
        let shaped = Pmf::new(m.input().clone(), vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let asym = Dmc::new(
            Alphabet::indexed(3).unwrap(),
            Alphabet::indexed(3).unwrap(),
            vec![
                vec![0.7, 0.2, 0.1],
                vec![0.1, 0.6, 0.3],
                vec![0.25, 0.25, 0.5],
            ],
        )
        .unwrap();
        let p3 = Pmf::new(asym.input().clone(), vec![0.5, 0.3, 0.2]).unwrap();
        vec![
            (u, b.clone(), likelihood_metric(&b).unwrap()),
            (
                shaped.clone(),
                m.clone(),
                posterior_metric(&shaped, &m, PosteriorScaling::Posterior).unwrap(),
            ),
            (p3, asym.clone(), likelihood_metric(&asym).unwrap()),
        ]
    };
    for (i, (p, ch, q)) in cases.iter().enumerate() {
        let cfg = McConfig {
            n: 200,
            trials: 500,
            seed: 10 + i as u64,
            composition: Composition::Iid,
        };
        let est = monte_carlo_t_c(p, ch, q, cfg).unwrap();
        let t_c = achievable_transmission_rate(p, ch, q).unwrap().t_c;
        assert!(
            (est.mean - t_c).abs() <= 3.0 * est.std_error,
            "case {i}: {est:?} vs {t_c}"
        );
    }
}
