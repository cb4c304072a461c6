#![allow(dead_code)]

use proptest::prelude::*;
use psrate_core::{Alphabet, Dmc, Metric, Pmf};

/// Weights in `[lo, 1]` normalized to a distribution.
pub fn normalized(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

pub fn pmf_on(nx: usize, full_support: bool) -> impl Strategy<Value = Pmf> {
    let lo = if full_support { 0.01 } else { 0.0 };
    proptest::collection::vec(lo..1.0f64, nx).prop_filter_map("zero mass", move |w| {
        if w.iter().sum::<f64>() <= 1e-3 {
            return None;
        }
        Pmf::new(Alphabet::indexed(nx).unwrap(), normalized(w)).ok()
    })
}

pub fn dmc(nx: usize, ny: usize) -> impl Strategy<Value = Dmc> {
    proptest::collection::vec(proptest::collection::vec(0.0..1.0f64, ny), nx).prop_filter_map(
        "zero row",
        move |rows| {
            if rows.iter().any(|r| r.iter().sum::<f64>() <= 1e-3) {
                return None;
            }
            Dmc::new(
                Alphabet::indexed(nx).unwrap(),
                Alphabet::indexed(ny).unwrap(),
                rows.into_iter().map(normalized).collect(),
            )
            .ok()
        },
    )
}

pub fn positive_metric(nx: usize, ny: usize) -> impl Strategy<Value = Metric> {
    proptest::collection::vec(proptest::collection::vec(0.01..10.0f64, ny), nx).prop_map(
        move |rows| {
            Metric::new(
                Alphabet::indexed(nx).unwrap(),
                Alphabet::indexed(ny).unwrap(),
                rows,
            )
            .unwrap()
        },
    )
}

/// A full-support input, a channel and a positive metric on `|X| <= max_x`,
/// `|Y| <= max_y`.
pub fn triple(max_x: usize, max_y: usize) -> impl Strategy<Value = (Pmf, Dmc, Metric)> {
    (2..=max_x, 2..=max_y)
        .prop_flat_map(|(nx, ny)| (pmf_on(nx, true), dmc(nx, ny), positive_metric(nx, ny)))
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
