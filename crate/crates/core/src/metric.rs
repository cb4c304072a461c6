//! Decoding metrics `q` on `X x Y` and their transformations.
//!
//! Two metrics are equivalent when, for every output `b`, they order the
//! inputs identically. Every rate in [`crate::rates`] depends on a metric
//! only through the per-output normalized view
//! `Q_{X|Y}(a|b) = q(a,b) / sum_a' q(a',b)`, so positive per-column rescaling
//! is free. [`power_transform`] and [`exp_transform`] use this to keep
//! columns representable.

use alloc::vec::Vec;

use crate::channel::{bit_marginal, labeled_input, posterior};
use crate::math::{exp, exp2, log2, powf};
use crate::{Alphabet, Dmc, Error, Pmf, Result};

/// A non-negative score matrix, row-major over `(input, output)`.
///
/// Every column has a strictly positive entry, so the normalizer
/// `sum_a q(a,b)` never vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    input: Alphabet,
    output: Alphabet,
    q: Vec<f64>,
}

impl Metric {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(Error::LengthMismatch {
                what: "metric rows",
                expected: input.len(),
                got: rows.len(),
            });
        }
        let mut q = Vec::with_capacity(input.len() * output.len());
        for row in rows {
            if row.len() != output.len() {
                return Err(Error::LengthMismatch {
                    what: "metric row",
                    expected: output.len(),
                    got: row.len(),
                });
            }
            q.extend(row);
        }
        Self::from_flat(input, output, q)
    }

    pub fn from_flat(input: Alphabet, output: Alphabet, q: Vec<f64>) -> Result<Self> {
        let ny = output.len();
        if q.len() != input.len() * ny {
            return Err(Error::LengthMismatch {
                what: "metric matrix",
                expected: input.len() * ny,
                got: q.len(),
            });
        }
        for (i, &value) in q.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidMetricEntry {
                    row: i / ny,
                    col: i % ny,
                    value,
                });
            }
        }
        for b in 0..ny {
            if !(0..input.len()).any(|a| q[a * ny + b] > 0.0) {
                return Err(Error::ZeroColumn(b));
            }
        }
        Ok(Self { input, output, q })
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn input_len(&self) -> usize {
        self.input.len()
    }

    pub fn output_len(&self) -> usize {
        self.output.len()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.q[a * self.output.len() + b]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.q
    }

    pub fn column_sum(&self, b: usize) -> f64 {
        (0..self.input.len()).map(|a| self.get(a, b)).sum()
    }

    /// `Q_{X|Y}(a|b)`, the input distribution the decoder implicitly assumes
    /// after observing `b`.
    pub fn normalized(&self, a: usize, b: usize) -> f64 {
        self.get(a, b) / self.column_sum(b)
    }

    /// `log2 q(a,b)` for all entries (row-major); zero entries map to `-inf`.
    /// Decoders sum these instead of multiplying `n` scores.
    pub fn log2_table(&self) -> Vec<f64> {
        self.q.iter().map(|&v| log2(v)).collect()
    }

    /// Inputs attaining the maximum score in column `b`.
    pub fn argmax_set(&self, b: usize) -> Vec<usize> {
        let max = (0..self.input.len())
            .map(|a| self.get(a, b))
            .fold(f64::NEG_INFINITY, f64::max);
        (0..self.input.len())
            .filter(|&a| self.get(a, b) == max)
            .collect()
    }

    /// Whether `other` scores inputs in the same order as `self` in every
    /// column (strict comparisons agree pairwise).
    pub fn is_equivalent_to(&self, other: &Metric) -> bool {
        if self.q.len() != other.q.len() || self.output.len() != other.output.len() {
            return false;
        }
        let nx = self.input.len();
        (0..self.output.len()).all(|b| {
            (0..nx).all(|a1| {
                (0..nx).all(|a2| {
                    (self.get(a1, b) > self.get(a2, b)) == (other.get(a1, b) > other.get(a2, b))
                })
            })
        })
    }

    pub(crate) fn check_compatible(&self, ch: &Dmc) -> Result<()> {
        self.input
            .ensure_same(ch.input(), "metric input vs channel input")?;
        self.output
            .ensure_same(ch.output(), "metric output vs channel output")
    }

    /// Rebuilds columns that left the normal floating-point range: each such
    /// column is recomputed in the log domain relative to its maximum.
    fn from_log_columns(
        input: Alphabet,
        output: Alphabet,
        mut q: Vec<f64>,
        log2q: impl Fn(usize) -> f64,
    ) -> Result<Self> {
        let (nx, ny) = (input.len(), output.len());
        for b in 0..ny {
            let col_max = (0..nx).map(|a| q[a * ny + b]).fold(0.0, f64::max);
            if col_max.is_finite() && col_max >= f64::MIN_POSITIVE {
                continue;
            }
            let lmax = (0..nx)
                .map(|a| log2q(a * ny + b))
                .fold(f64::NEG_INFINITY, f64::max);
            for a in 0..nx {
                q[a * ny + b] = exp2(log2q(a * ny + b) - lmax);
            }
        }
        Self::from_flat(input, output, q)
    }
}

/// How [`posterior_metric`] scales each column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PosteriorScaling {
    /// `q(a,b) = P_{X|Y}(a|b)`.
    #[default]
    Posterior,
    /// `q(a,b) = P_{X|Y}(a|b) P_Y(b) = P_X(a) p(b|a)`; equivalent.
    Joint,
}

/// The posterior metric, which makes the uncertainty equal `H(X|Y)`.
///
/// Unreachable outputs (`P_Y(b) = 0`) get an all-ones column so the metric
/// stays valid; they carry no probability.
pub fn posterior_metric(p_x: &Pmf, ch: &Dmc, scaling: PosteriorScaling) -> Result<Metric> {
    let post = posterior(p_x, ch)?;
    let (nx, ny) = (ch.input_len(), ch.output_len());
    let mut q = alloc::vec![0.0; nx * ny];
    for b in 0..ny {
        let reachable = post.is_reachable(b);
        for a in 0..nx {
            q[a * ny + b] = match (reachable, scaling) {
                (false, _) => 1.0,
                (true, PosteriorScaling::Posterior) => post.prob(a, b),
                (true, PosteriorScaling::Joint) => p_x.prob(a) * ch.prob(a, b),
            };
        }
    }
    Metric::from_flat(ch.input().clone(), ch.output().clone(), q)
}

/// `q(a,b) = p(b|a)`.
///
/// Fails with [`Error::ZeroColumn`] if some output is impossible under every
/// input.
pub fn likelihood_metric(ch: &Dmc) -> Result<Metric> {
    Metric::from_flat(
        ch.input().clone(),
        ch.output().clone(),
        ch.matrix().to_vec(),
    )
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "s",
            value: s,
        })
    }
}

/// Entrywise `q^s`, `s > 0`; order preserving.
pub fn power_transform(q: &Metric, s: f64) -> Result<Metric> {
    check_s(s)?;
    let powered = q.q.iter().map(|&v| powf(v, s)).collect();
    let logs: Vec<f64> = q.q.iter().map(|&v| s * log2(v)).collect();
    Metric::from_log_columns(q.input.clone(), q.output.clone(), powered, |i| logs[i])
}

/// Entrywise `e^{s q}`, `s > 0`; order preserving.
pub fn exp_transform(q: &Metric, s: f64) -> Result<Metric> {
    check_s(s)?;
    let raised = q.q.iter().map(|&v| exp(s * v)).collect();
    let logs: Vec<f64> =
        q.q.iter()
            .map(|&v| s * v * core::f64::consts::LOG2_E)
            .collect();
    Metric::from_log_columns(q.input.clone(), q.output.clone(), raised, |i| logs[i])
}

/// Bit-metric `q(s, b) = prod_j q_j(bit_j(s), b)` on a labeled alphabet from
/// one binary metric per level.
pub fn bit_metric_product(levels: &[Metric], target: &Alphabet) -> Result<Metric> {
    if !target.is_labeled() {
        return Err(Error::Unlabeled);
    }
    if levels.len() != target.label_bits() {
        return Err(Error::LengthMismatch {
            what: "bit levels",
            expected: target.label_bits(),
            got: levels.len(),
        });
    }
    let output = levels[0].output().clone();
    for l in levels {
        if l.input_len() != 2 {
            return Err(Error::AlphabetMismatch("level metrics must be binary"));
        }
        l.output.ensure_same(&output, "level metric outputs")?;
    }
    let ny = output.len();
    let mut q = Vec::with_capacity(target.len() * ny);
    for s in 0..target.len() {
        for b in 0..ny {
            q.push(
                levels
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l.get(target.bit(s, j), b))
                    .product(),
            );
        }
    }
    Metric::from_flat(target.clone(), output, q)
}

/// Product of per-level posterior metrics `P_{B_j|Y}`, the optimal bit-metric.
pub fn bitwise_posterior_metric(p_labels: &Pmf, ch: &Dmc) -> Result<Metric> {
    let target = labeled_input(p_labels, ch)?.clone();
    let levels = (0..target.label_bits())
        .map(|j| {
            let lvl = bit_marginal(p_labels, ch, j)?;
            posterior_metric(&lvl.pmf, &lvl.channel, PosteriorScaling::Posterior)
        })
        .collect::<Result<Vec<_>>>()?;
    bit_metric_product(&levels, &target)
}

/// A hard-decision quantizer `omega: Y -> target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    output: Alphabet,
    target: Alphabet,
    map: Vec<usize>,
}

impl Quantizer {
    pub fn new(output: Alphabet, target: Alphabet, map: Vec<usize>) -> Result<Self> {
        if map.len() != output.len() {
            return Err(Error::LengthMismatch {
                what: "quantizer map",
                expected: output.len(),
                got: map.len(),
            });
        }
        if let Some(&index) = map.iter().find(|&&t| t >= target.len()) {
            return Err(Error::SymbolOutOfRange {
                index,
                size: target.len(),
            });
        }
        Ok(Self {
            output,
            target,
            map,
        })
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    #[inline]
    pub fn decide(&self, b: usize) -> usize {
        self.map[b]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Decision region of target symbol `a`.
    pub fn region(&self, a: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&b| self.map[b] == a).collect()
    }
}

/// Hamming metric of a quantizer: `q(a,b) = 1` if `a = omega(b)`, else `0`.
pub fn hard_decision_metric(quant: &Quantizer, target: &Alphabet) -> Result<Metric> {
    quant.target.ensure_same(target, "quantizer target")?;
    let ny = quant.output.len();
    let mut q = alloc::vec![0.0; target.len() * ny];
    for b in 0..ny {
        q[quant.decide(b) * ny + b] = 1.0;
    }
    Metric::from_flat(target.clone(), quant.output.clone(), q)
}

/// MAP decision `omega(b) = argmax_a P_X(a) p(b|a)`, ties to the lowest index.
pub fn map_quantizer(p_x: &Pmf, ch: &Dmc) -> Result<Quantizer> {
    let joint = ch.joint(p_x)?;
    Ok(argmax_quantizer(
        &joint,
        ch.input().clone(),
        ch.output().clone(),
    ))
}

fn argmax_quantizer(joint: &[f64], input: Alphabet, output: Alphabet) -> Quantizer {
    let (nx, ny) = (input.len(), output.len());
    let map = (0..ny)
        .map(|b| {
            let mut best = 0;
            for a in 1..nx {
                if joint[a * ny + b] > joint[best * ny + b] {
                    best = a;
                }
            }
            best
        })
        .collect();
    Quantizer {
        output,
        target: input,
        map,
    }
}

/// Per-level MAP bit decisions `omega_j(b) = argmax_a P_{B_j}(a) p(b|B_j=a)`.
pub fn map_bit_quantizers(p_labels: &Pmf, ch: &Dmc) -> Result<Vec<Quantizer>> {
    let bits = labeled_input(p_labels, ch)?.label_bits();
    (0..bits)
        .map(|j| {
            let lvl = bit_marginal(p_labels, ch, j)?;
            map_quantizer(&lvl.pmf, &lvl.channel)
        })
        .collect()
}

/// Binary Hamming agreement count `q(s, b) = sum_j 1[bit_j(s) = omega_j(b)]`.
/// Its exponential `e^{s q}` factors into per-level `e^{s 1(.,.)}` terms.
pub fn binary_hamming_metric(quants: &[Quantizer], target: &Alphabet) -> Result<Metric> {
    if !target.is_labeled() {
        return Err(Error::Unlabeled);
    }
    if quants.len() != target.label_bits() {
        return Err(Error::LengthMismatch {
            what: "bit quantizers",
            expected: target.label_bits(),
            got: quants.len(),
        });
    }
    let output = quants[0].output.clone();
    for qz in quants {
        if qz.target.len() != 2 {
            return Err(Error::AlphabetMismatch("bit quantizers must be binary"));
        }
        qz.output.ensure_same(&output, "bit quantizer outputs")?;
    }
    let ny = output.len();
    let mut q = Vec::with_capacity(target.len() * ny);
    for s in 0..target.len() {
        for b in 0..ny {
            let agree = quants
                .iter()
                .enumerate()
                .filter(|(j, qz)| target.bit(s, *j) == qz.decide(b))
                .count();
            q.push(agree as f64);
        }
    }
    Metric::from_flat(target.clone(), output, q)
}

/// `q~(a,b) = q(a,b) P_X(a)^{1/s}`. With `q~^s` layered shaping achieves the
/// GMI of `q` at exponent `s`.
pub fn metric_switch(q: &Metric, p_x: &Pmf, s: f64) -> Result<Metric> {
    check_s(s)?;
    p_x.alphabet().ensure_same(&q.input, "metric switch")?;
    let ny = q.output.len();
    let mut out = q.q.clone();
    for a in 0..q.input.len() {
        let f = powf(p_x.prob(a), 1.0 / s);
        out[a * ny..(a + 1) * ny].iter_mut().for_each(|v| *v *= f);
    }
    let logs: Vec<f64> = (0..out.len())
        .map(|i| log2(q.q[i]) + log2(p_x.prob(i / ny)) / s)
        .collect();
    Metric::from_log_columns(q.input.clone(), q.output.clone(), out, |i| logs[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{bsc, mary_symmetric, posterior};
    use alloc::vec;

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(Alphabet::indexed(v.len()).unwrap(), v.to_vec()).unwrap()
    }

    fn argmax_sets(q: &Metric) -> Vec<Vec<usize>> {
        (0..q.output_len()).map(|b| q.argmax_set(b)).collect()
    }

    fn skewed3() -> Dmc {
        let a = Alphabet::indexed(3).unwrap();
        Dmc::new(
            a.clone(),
            a,
            vec![
                vec![0.6, 0.3, 0.1],
                vec![0.35, 0.4, 0.25],
                vec![0.1, 0.45, 0.45],
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_zero_columns_and_negative_entries() {
        let a = Alphabet::indexed(2).unwrap();
        assert_eq!(
            Metric::new(a.clone(), a.clone(), vec![vec![1.0, 0.0], vec![1.0, 0.0]]),
            Err(Error::ZeroColumn(1))
        );
        assert!(Metric::new(a.clone(), a, vec![vec![1.0, -1.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn posterior_metric_matches_posterior() {
        let ch = bsc(0.2).unwrap();
        let p = pmf(&[0.8, 0.2]);
        let q = posterior_metric(&p, &ch, PosteriorScaling::Posterior).unwrap();
        let post = posterior(&p, &ch).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(q.get(a, b), post.prob(a, b));
            }
        }
        assert!((q.get(0, 0) - 0.64 / 0.68).abs() < 1e-15);
        let joint = posterior_metric(&p, &ch, PosteriorScaling::Joint).unwrap();
        assert!(q.is_equivalent_to(&joint));
    }

    #[test]
    fn posterior_under_uniform_is_equivalent_to_likelihood() {
        let ch = skewed3();
        let u = Pmf::uniform(ch.input().clone()).unwrap();
        let post = posterior_metric(&u, &ch, PosteriorScaling::Posterior).unwrap();
        let lik = likelihood_metric(&ch).unwrap();
        assert_eq!(argmax_sets(&post), argmax_sets(&lik));
        assert!(post.is_equivalent_to(&lik));
        // columns are positive multiples of each other
        for b in 0..3 {
            let r = post.get(0, b) / lik.get(0, b);
            for a in 0..3 {
                assert!((post.get(a, b) - r * lik.get(a, b)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn noiseless_posterior_metric_is_identity_pattern() {
        let ch = mary_symmetric(3, 0.0).unwrap();
        let q = posterior_metric(&pmf(&[0.2, 0.3, 0.5]), &ch, PosteriorScaling::Posterior).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(q.get(a, b), if a == b { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn likelihood_is_channel_matrix() {
        let q = likelihood_metric(&bsc(0.3).unwrap()).unwrap();
        assert_eq!(q.matrix(), [0.7, 0.3, 0.3, 0.7]);
    }

    #[test]
    fn power_and_exp_preserve_order() {
        let q = likelihood_metric(&skewed3()).unwrap();
        assert_eq!(power_transform(&q, 1.0).unwrap(), q);
        for s in [0.01, 0.5, 2.0, 50.0, 200.0] {
            let p = power_transform(&q, s).unwrap();
            assert_eq!(argmax_sets(&p), argmax_sets(&q));
            assert!(p.is_equivalent_to(&q));
            let e = exp_transform(&q, s).unwrap();
            assert_eq!(argmax_sets(&e), argmax_sets(&q));
            assert!(e.is_equivalent_to(&q));
        }
        assert!(power_transform(&q, 0.0).is_err());
        assert!(exp_transform(&q, -1.0).is_err());
    }

    #[test]
    fn power_transform_keeps_extreme_columns_valid() {
        let a = Alphabet::indexed(2).unwrap();
        let q = Metric::new(a.clone(), a, vec![vec![1e-200, 0.5], vec![2e-200, 0.25]]).unwrap();
        let p = power_transform(&q, 3.0).unwrap();
        // column 0 underflows naively; rescaled to ratio 1:8
        assert!((p.get(1, 0) / p.get(0, 0) - 8.0).abs() < 1e-9);
        assert_eq!(p.get(0, 1), 0.125);
    }

    #[test]
    fn exp_of_hamming() {
        let ch = mary_symmetric(3, 0.2).unwrap();
        let qz = map_quantizer(&Pmf::uniform(ch.input().clone()).unwrap(), &ch).unwrap();
        let h = hard_decision_metric(&qz, ch.input()).unwrap();
        let s = 1.3;
        let e = exp_transform(&h, s).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { s.exp() } else { 1.0 };
                assert!((e.get(a, b) - expect).abs() < 1e-14);
            }
        }
        // optimal exponent makes Q_{X|Y} equal (1-eps, eps/(M-1), ...)
        let eps: f64 = 0.2;
        let s_opt = ((3.0 - 1.0) * (1.0 - eps) / eps).ln();
        let e = exp_transform(&h, s_opt).unwrap();
        for b in 0..3 {
            for a in 0..3 {
                let expect = if a == b { 1.0 - eps } else { eps / 2.0 };
                assert!((e.normalized(a, b) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hard_decision_metric_one_per_column() {
        let ch = mary_symmetric(4, 0.1).unwrap();
        let qz = map_quantizer(&Pmf::uniform(ch.input().clone()).unwrap(), &ch).unwrap();
        assert_eq!(qz.map(), [0, 1, 2, 3]);
        let h = hard_decision_metric(&qz, ch.input()).unwrap();
        for b in 0..4 {
            assert_eq!((0..4).filter(|&a| h.get(a, b) == 1.0).count(), 1);
            assert_eq!(h.column_sum(b), 1.0);
        }
        let wrong = Alphabet::indexed(5).unwrap();
        assert!(hard_decision_metric(&qz, &wrong).is_err());
    }

    #[test]
    fn map_quantizer_brute_force() {
        let ch = skewed3();
        let p = pmf(&[0.15, 0.25, 0.6]);
        let qz = map_quantizer(&p, &ch).unwrap();
        for b in 0..3 {
            let scores: Vec<f64> = (0..3).map(|a| p.prob(a) * ch.prob(a, b)).collect();
            let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let first = scores.iter().position(|&v| v == max).unwrap();
            assert_eq!(qz.decide(b), first);
        }
        // noiseless permutation channel: inverse permutation
        let a = Alphabet::indexed(3).unwrap();
        let perm = Dmc::new(
            a.clone(),
            a,
            vec![
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        let qz = map_quantizer(&pmf(&[0.3, 0.3, 0.4]), &perm).unwrap();
        assert_eq!(qz.map(), [2, 0, 1]);
        // ties go to the lowest index
        let ch = mary_symmetric(2, 0.5).unwrap();
        let qz = map_quantizer(&pmf(&[0.5, 0.5]), &ch).unwrap();
        assert_eq!(qz.map(), [0, 0]);
    }

    #[test]
    fn bit_metric_product_examples() {
        let labeled = Alphabet::indexed(4).unwrap().with_natural_labels().unwrap();
        let y = Alphabet::indexed(3).unwrap();
        let ones = Metric::new(
            Alphabet::binary(),
            y.clone(),
            vec![vec![1.0; 3], vec![1.0; 3]],
        )
        .unwrap();
        let prod = bit_metric_product(&[ones.clone(), ones.clone()], &labeled).unwrap();
        assert!(prod.matrix().iter().all(|&v| v == 1.0));
        let l1 = Metric::new(
            Alphabet::binary(),
            y.clone(),
            vec![vec![0.2, 0.5, 0.9], vec![0.8, 0.5, 0.1]],
        )
        .unwrap();
        let l2 = Metric::new(
            Alphabet::binary(),
            y,
            vec![vec![0.3, 0.6, 0.7], vec![0.7, 0.4, 0.3]],
        )
        .unwrap();
        let prod = bit_metric_product(&[l1.clone(), l2.clone()], &labeled).unwrap();
        for s in 0..4 {
            for b in 0..3 {
                assert_eq!(prod.get(s, b), l1.get(s >> 1, b) * l2.get(s & 1, b));
            }
        }
        // normalizer factorization
        for b in 0..3 {
            let lhs = prod.column_sum(b);
            let rhs = l1.column_sum(b) * l2.column_sum(b);
            assert!((lhs - rhs).abs() < 1e-15);
        }
        // single level is the level metric itself
        let one_bit = Alphabet::binary();
        assert_eq!(
            bit_metric_product(core::slice::from_ref(&l1), &one_bit)
                .unwrap()
                .matrix(),
            l1.matrix()
        );
        assert!(bit_metric_product(&[l1], &labeled).is_err());
    }

    #[test]
    fn metric_switch_examples() {
        let q = likelihood_metric(&skewed3()).unwrap();
        let u = Pmf::uniform(q.input().clone()).unwrap();
        let sw = metric_switch(&q, &u, 0.7).unwrap();
        let c = (1.0f64 / 3.0).powf(1.0 / 0.7);
        for i in 0..9 {
            assert!((sw.matrix()[i] - c * q.matrix()[i]).abs() < 1e-15);
        }
        let p = pmf(&[0.5, 0.3, 0.2]);
        let sw = metric_switch(&q, &p, 1.0).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!((sw.get(a, b) - q.get(a, b) * p.prob(a)).abs() < 1e-15);
            }
        }
        assert!(metric_switch(&q, &p, 0.0).is_err());
    }

    #[test]
    fn binary_hamming_counts_agreements() {
        let labeled = Alphabet::indexed(4).unwrap().with_natural_labels().unwrap();
        let ch = mary_symmetric(4, 0.1)
            .unwrap()
            .with_input(labeled.clone())
            .unwrap();
        let p = Pmf::uniform(labeled.clone()).unwrap();
        let qs = map_bit_quantizers(&p, &ch).unwrap();
        assert_eq!(qs[0].map(), [0, 0, 1, 1]);
        assert_eq!(qs[1].map(), [0, 1, 0, 1]);
        let h = binary_hamming_metric(&qs, &labeled).unwrap();
        assert_eq!(h.get(0, 0), 2.0);
        assert_eq!(h.get(3, 0), 0.0);
        assert_eq!(h.get(1, 0), 1.0);
    }
}
