//! Entropy, cross-entropy and informational divergence, in bits.

use crate::math::{log2, neg_xlog2x};
use crate::{Error, Pmf, Result};

/// `H(P) = -sum_a P(a) log2 P(a)`; zero-probability symbols contribute 0.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_of(p.probs())
}

pub(crate) fn entropy_of(probs: &[f64]) -> f64 {
    probs.iter().map(|&x| neg_xlog2x(x)).sum()
}

/// Binary entropy function `H2(eps)`.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    Ok(neg_xlog2x(eps) + neg_xlog2x(1.0 - eps))
}

/// `X(p || z) = sum_{a in supp p} p(a) (-log2 z(a))`. Infinite when `z`
/// vanishes somewhere on the support of `p`.
pub fn cross_entropy(p: &Pmf, z: &Pmf) -> Result<f64> {
    p.alphabet().ensure_same(z.alphabet(), "cross-entropy")?;
    Ok(cross_entropy_of(p.probs(), z.probs()))
}

pub(crate) fn cross_entropy_of(p: &[f64], z: &[f64]) -> f64 {
    p.iter()
        .zip(z)
        .filter(|(&pa, _)| pa > 0.0)
        .map(|(&pa, &za)| -pa * log2(za))
        .sum()
}

/// `D(p || z) = sum_{a in supp p} p(a) log2(p(a)/z(a))`.
pub fn divergence(p: &Pmf, z: &Pmf) -> Result<f64> {
    p.alphabet().ensure_same(z.alphabet(), "divergence")?;
    let d: f64 = p
        .probs()
        .iter()
        .zip(z.probs())
        .filter(|(&pa, _)| pa > 0.0)
        .map(|(&pa, &za)| pa * log2(pa / za))
        .sum();
    // rounding can leave a tiny negative value when p == z
    Ok(if d < 0.0 && d > -1e-15 { 0.0 } else { d })
}

/// `D(P || uniform) = log2|X| - H(P)`.
pub fn divergence_to_uniform(p: &Pmf) -> f64 {
    log2(p.len() as f64) - entropy(p)
}
