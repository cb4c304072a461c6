//! Closed-form achievable rates for `(P_X, channel, metric)` triples.
//!
//! All expectations are exact finite sums over `X x Y` restricted to pairs
//! with positive joint probability. Clamped rates `[.]^+` are always reported
//! next to their unclamped value.

use alloc::vec::Vec;

use crate::channel::{bit_marginal, icm_mixture, labeled_input, posterior, ProductShape};
use crate::info::{binary_entropy, divergence_to_uniform, entropy};
use crate::math::{ln, log2, log2_sum_exp2};
use crate::metric::Quantizer;
use crate::{Dmc, Error, Metric, Pmf, Result};

/// Relative tolerance for the internal agreement check of the three
/// transmission-rate forms.
pub const PERSPECTIVE_TOLERANCE: f64 = 1e-9;

fn check(p_x: &Pmf, ch: &Dmc, q: &Metric) -> Result<()> {
    ch.check_input(p_x)?;
    q.check_compatible(ch)
}

/// `(joint probability, a, b)` for every pair with positive probability.
fn support_pairs<'a>(p_x: &'a Pmf, ch: &'a Dmc) -> impl Iterator<Item = (f64, usize, usize)> + 'a {
    let ny = ch.output_len();
    p_x.support().flat_map(move |a| {
        let pa = p_x.prob(a);
        (0..ny).filter_map(move |b| {
            let w = ch.prob(a, b);
            (w > 0.0).then_some((pa * w, a, b))
        })
    })
}

/// `log2 sum_a q(a,b)` per output.
fn log2_column_sums(q: &Metric) -> Vec<f64> {
    (0..q.output_len()).map(|b| log2(q.column_sum(b))).collect()
}

/// `H(X|Y)`.
pub fn conditional_entropy(p_x: &Pmf, ch: &Dmc) -> Result<f64> {
    let post = posterior(p_x, ch)?;
    Ok(support_pairs(p_x, ch)
        .map(|(j, a, b)| -j * log2(post.prob(a, b)))
        .sum())
}

/// `I(X;Y) = sum P_X(a) w(b|a) log2(w(b|a) / P_Y(b))`.
pub fn mutual_information(p_x: &Pmf, ch: &Dmc) -> Result<f64> {
    let py = ch.output_probs(p_x)?;
    let i: f64 = support_pairs(p_x, ch)
        .map(|(j, a, b)| j * log2(ch.prob(a, b) / py[b]))
        .sum();
    Ok(i.max(0.0))
}

/// The uncertainty `E[-log2 q(X,Y) / sum_a q(a,Y)]`; `+inf` when `q`
/// vanishes on a pair of positive probability.
pub fn uncertainty(p_x: &Pmf, ch: &Dmc, q: &Metric) -> Result<f64> {
    check(p_x, ch, q)?;
    let norms = log2_column_sums(q);
    Ok(support_pairs(p_x, ch)
        .map(|(j, a, b)| j * (norms[b] - log2(q.get(a, b))))
        .sum())
}

/// All rate quantities for one triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub entropy: f64,
    pub uncertainty: f64,
    /// Achievable code rate `T_c = log2|X| - uncertainty`.
    pub t_c: f64,
    pub divergence_to_uniform: f64,
    /// `[H(X) - uncertainty]^+`.
    pub r_ps: f64,
    pub r_ps_unclamped: f64,
    /// Unclamped rate from the uncertainty, divergence and output forms.
    pub perspectives: [f64; 3],
    pub clamped: bool,
}

/// Evaluates the transmission rate `R_ps(q)` three independent ways and
/// checks that they agree.
///
/// Fails with [`Error::PerspectiveMismatch`] if two finite forms differ by
/// more than [`PERSPECTIVE_TOLERANCE`] (relative to `max(1, |rate|)`).
pub fn achievable_transmission_rate(p_x: &Pmf, ch: &Dmc, q: &Metric) -> Result<RateReport> {
    check(p_x, ch, q)?;
    let nx = q.input_len() as f64;
    let log_nx = log2(nx);
    let norms = log2_column_sums(q);
    let h = entropy(p_x);
    let d = divergence_to_uniform(p_x);

    let mut u = 0.0;
    let mut large = 0.0;
    let mut out = 0.0;
    for (j, a, b) in support_pairs(p_x, ch) {
        let lq = log2(q.get(a, b));
        u += j * (norms[b] - lq);
        large += j * (lq - (norms[b] - log_nx));
        out += j * (lq - log2(p_x.prob(a)) - norms[b]);
    }
    let uncertainty_form = h - u;
    let divergence_form = large - d;
    let perspectives = [uncertainty_form, divergence_form, out];
    if uncertainty_form.is_finite() {
        let scale = uncertainty_form.abs().max(1.0);
        for &v in &perspectives[1..] {
            if !((v - uncertainty_form).abs() <= PERSPECTIVE_TOLERANCE * scale) {
                return Err(Error::PerspectiveMismatch(uncertainty_form, v));
            }
        }
    }
    let r_ps = uncertainty_form.max(0.0);
    Ok(RateReport {
        entropy: h,
        uncertainty: u,
        t_c: log_nx - u,
        divergence_to_uniform: d,
        r_ps,
        r_ps_unclamped: uncertainty_form,
        perspectives,
        clamped: !(uncertainty_form >= 0.0),
    })
}

/// An order-preserving one-parameter family of metrics derived from `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Family {
    /// `q^s`.
    #[default]
    Power,
    /// `e^{s q}`; the natural family for Hamming-type metrics, whose `{0,1}`
    /// entries make `q^s` independent of `s`.
    Exp,
}

/// `log2` of the family member at exponent `s`, row-major.
pub fn family_log2_scores(q: &Metric, family: Family, s: f64) -> Vec<f64> {
    match family {
        Family::Power => q
            .matrix()
            .iter()
            .map(|&v| {
                if v > 0.0 {
                    s * log2(v)
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect(),
        Family::Exp => q
            .matrix()
            .iter()
            .map(|&v| s * v * core::f64::consts::LOG2_E)
            .collect(),
    }
}

fn check_exponent(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "s",
            value: s,
        })
    }
}

/// Uncertainty of the family member at `s`, evaluated in the log domain.
pub fn family_uncertainty(p_x: &Pmf, ch: &Dmc, q: &Metric, family: Family, s: f64) -> Result<f64> {
    check(p_x, ch, q)?;
    check_exponent(s)?;
    let ny = q.output_len();
    let l = family_log2_scores(q, family, s);
    let norms: Vec<f64> = (0..ny)
        .map(|b| log2_sum_exp2((0..q.input_len()).map(|a| l[a * ny + b])))
        .collect();
    Ok(support_pairs(p_x, ch)
        .map(|(j, a, b)| j * (norms[b] - l[a * ny + b]))
        .sum())
}

/// Unclamped `H(X) - U(q_s)` for the family member at `s`.
pub fn family_ps_rate(p_x: &Pmf, ch: &Dmc, q: &Metric, family: Family, s: f64) -> Result<f64> {
    Ok(entropy(p_x) - family_uncertainty(p_x, ch, q, family, s)?)
}

/// The GMI integrand `E[log2 q_s(X,Y) / sum_a P_X(a) q_s(a,Y)]` at `s > 0`.
/// Its limit at `s = 0` is 0.
pub fn gmi_at(p_x: &Pmf, ch: &Dmc, q: &Metric, family: Family, s: f64) -> Result<f64> {
    check(p_x, ch, q)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    check_exponent(s)?;
    let ny = q.output_len();
    let l = family_log2_scores(q, family, s);
    let norms: Vec<f64> = (0..ny)
        .map(|b| {
            log2_sum_exp2(
                p_x.support()
                    .map(|a| log2(p_x.prob(a)) + l[a * ny + b])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok(support_pairs(p_x, ch)
        .map(|(j, a, b)| j * (l[a * ny + b] - norms[b]))
        .sum())
}

/// Search over `s` in `[s_min, s_max]`: a log-spaced grid followed by
/// golden-section refinement (in `ln s`) around the best grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSpec {
    pub s_min: f64,
    pub s_max: f64,
    pub grid_points: usize,
    /// Stop refining once the bracket is narrower than this in `ln s`
    /// (a relative tolerance on `s`).
    pub tolerance: f64,
    pub min_iterations: usize,
    pub max_iterations: usize,
}

impl Default for SearchSpec {
    fn default() -> Self {
        Self {
            s_min: 1e-3,
            s_max: 1e3,
            grid_points: 64,
            tolerance: 1e-9,
            min_iterations: 40,
            max_iterations: 200,
        }
    }
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.s_min > 0.0 && self.s_min < self.s_max && self.s_max.is_finite()) {
            return Err(Error::EmptyBracket {
                lo: self.s_min,
                hi: self.s_max,
            });
        }
        if self.grid_points < 2 {
            return Err(Error::OutOfRange {
                name: "grid_points",
                value: self.grid_points as f64,
            });
        }
        Ok(())
    }
}

/// Maximum of a function of `s` and its maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub value: f64,
    pub s: f64,
}

/// Maximizes `f(s)` over the bracket of `spec`. NaN values count as `-inf`;
/// ties on the grid keep the smallest `s`.
pub fn maximize_over_s<F>(spec: &SearchSpec, mut f: F) -> Result<Optimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let (t0, t1) = (ln(spec.s_min), ln(spec.s_max));
    let step = (t1 - t0) / (spec.grid_points - 1) as f64;
    let mut g = |t: f64| -> Result<f64> {
        let v = f(libm::exp(t))?;
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    };
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..spec.grid_points {
        let v = g(t0 + step * k as f64)?;
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let mut best_t = t0 + step * best_k as f64;
    if best == f64::NEG_INFINITY {
        return Ok(Optimum {
            value: best,
            s: libm::exp(best_t),
        });
    }
    let mut lo = t0 + step * best_k.saturating_sub(1) as f64;
    let mut hi = t0 + step * (best_k + 1).min(spec.grid_points - 1) as f64;
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    let mut iter = 0;
    while iter < spec.max_iterations && (iter < spec.min_iterations || hi - lo > spec.tolerance) {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2)?;
        }
        iter += 1;
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best {
            best = v;
            best_t = t;
        }
    }
    Ok(Optimum {
        value: best,
        s: libm::exp(best_t),
    })
}

/// Generalized mutual information `max_s E[log2 q_s / sum_a P_X(a) q_s]`.
///
/// The value is never below 0, the `s -> 0` limit; `s` is then reported as 0.
pub fn gmi(
    p_x: &Pmf,
    ch: &Dmc,
    q: &Metric,
    family: Family,
    search: &SearchSpec,
) -> Result<Optimum> {
    check(p_x, ch, q)?;
    let opt = maximize_over_s(search, |s| gmi_at(p_x, ch, q, family, s))?;
    if opt.value > 0.0 {
        Ok(opt)
    } else {
        Ok(Optimum { value: 0.0, s: 0.0 })
    }
}

/// `max_s R_ps(q_s)` over the family (unclamped value and maximizer).
pub fn optimize_ps_rate(
    p_x: &Pmf,
    ch: &Dmc,
    q: &Metric,
    family: Family,
    search: &SearchSpec,
) -> Result<Optimum> {
    check(p_x, ch, q)?;
    maximize_over_s(search, |s| family_ps_rate(p_x, ch, q, family, s))
}

/// Unclamped and clamped value of a rate expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamped {
    pub rate: f64,
    pub unclamped: f64,
}

impl Clamped {
    fn new(unclamped: f64) -> Self {
        Self {
            rate: unclamped.max(0.0),
            unclamped,
        }
    }
}

/// LM-rate `[E[log2 q^s r(X) / sum_{a in supp P_X} P_X(a) q(a,Y)^s r(a)]]^+`.
///
/// `r` is indexed by input symbol and must be positive on the support of
/// `P_X`; its values off the support are ignored.
pub fn lm_rate(p_x: &Pmf, ch: &Dmc, q: &Metric, s: f64, r: &[f64]) -> Result<Clamped> {
    check(p_x, ch, q)?;
    check_exponent(s)?;
    if r.len() != q.input_len() {
        return Err(Error::LengthMismatch {
            what: "weights r",
            expected: q.input_len(),
            got: r.len(),
        });
    }
    if let Some(a) = p_x.support().find(|&a| !(r[a] > 0.0 && r[a].is_finite())) {
        return Err(Error::NonPositiveWeight(a));
    }
    let ny = q.output_len();
    let l: Vec<f64> = family_log2_scores(q, Family::Power, s)
        .into_iter()
        .enumerate()
        .map(|(i, v)| v + log2(r[i / ny]))
        .collect();
    let norms: Vec<f64> = (0..ny)
        .map(|b| {
            log2_sum_exp2(
                p_x.support()
                    .map(|a| log2(p_x.prob(a)) + l[a * ny + b])
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let v = support_pairs(p_x, ch)
        .map(|(j, a, b)| j * (l[a * ny + b] - norms[b]))
        .sum();
    Ok(Clamped::new(v))
}

/// Bit-metric decoding rates of a labeled input.
#[derive(Debug, Clone, PartialEq)]
pub struct BmdRates {
    /// `[H(B) - sum_j H(B_j|Y)]^+`.
    pub r_bmd: Clamped,
    /// `1 - (1/m) sum_j H(B_j|Y)`, i.e. `T_c / m`.
    pub abc_rate: f64,
    pub level_conditional_entropies: Vec<f64>,
    /// `sum_j I(B_j;Y)`, present when the bit levels are independent.
    pub independent_sum: Option<f64>,
}

/// Whether `P(s) = prod_j P_{B_j}(bit_j(s))` within `1e-12`.
fn levels_independent(p_labels: &Pmf, level_pmfs: &[Pmf]) -> bool {
    let alphabet = p_labels.alphabet();
    let labeled = if alphabet.is_labeled() {
        alphabet
    } else {
        return false;
    };
    (0..labeled.len()).all(|s| {
        let prod: f64 = level_pmfs
            .iter()
            .enumerate()
            .map(|(j, p)| p.prob(labeled.bit(s, j)))
            .product();
        (prod - p_labels.prob(s)).abs() <= 1e-12
    })
}

/// BMD rate with optimal (posterior) bit metrics.
pub fn bmd_rate(p_labels: &Pmf, ch: &Dmc) -> Result<BmdRates> {
    let labeled = labeled_input(p_labels, ch)?;
    let m = labeled.label_bits();
    let p_labels = p_labels.rebind(labeled.clone())?;
    let levels = (0..m)
        .map(|j| bit_marginal(&p_labels, ch, j))
        .collect::<Result<Vec<_>>>()?;
    let hs = levels
        .iter()
        .map(|l| conditional_entropy(&l.pmf, &l.channel))
        .collect::<Result<Vec<f64>>>()?;
    let sum_h: f64 = hs.iter().sum();
    let level_pmfs: Vec<Pmf> = levels.iter().map(|l| l.pmf.clone()).collect();
    let independent_sum = if levels_independent(&p_labels, &level_pmfs) {
        Some(
            levels
                .iter()
                .map(|l| mutual_information(&l.pmf, &l.channel))
                .sum::<Result<f64>>()?,
        )
    } else {
        None
    };
    Ok(BmdRates {
        r_bmd: Clamped::new(entropy(&p_labels) - sum_h),
        abc_rate: 1.0 - sum_h / m as f64,
        level_conditional_entropies: hs,
        independent_sum,
    })
}

/// Interleaved coded modulation rate `[H(X^m) - m H(X|Y)]^+` with `(X,Y)`
/// the time-averaged scalar pair.
pub fn icm_rate(p_vec: &Pmf, ch_vec: &Dmc, shape: &ProductShape) -> Result<Clamped> {
    let (p, ch) = icm_mixture(p_vec, ch_vec, shape)?;
    let h = conditional_entropy(&p, &ch)?;
    Ok(Clamped::new(entropy(p_vec) - shape.m() as f64 * h))
}

/// Hard-decision decoding rate and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardDecision {
    pub rate: Clamped,
    /// Symbol error probability `Pr(X != omega(Y))`.
    pub eps: f64,
    /// Uncertainty of the best equivalent metric `e^{s 1}` with `s > 0`.
    pub uncertainty: f64,
    /// Optimal exponent `s`; `+inf` when `eps = 0`, 0 when no `s > 0`
    /// improves on the `s -> 0` limit.
    pub s: f64,
}

/// Uncertainty of `e^{s 1}` minimized over `s > 0` for an `M`-ary decision
/// with error probability `eps`.
fn hard_decision_uncertainty(eps: f64, m: usize) -> (f64, f64) {
    if eps == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let m1 = (m - 1) as f64;
    if eps >= m1 / m as f64 {
        // optimal s would be <= 0; the infimum over s > 0 is the s -> 0 limit
        return (log2(m as f64), 0.0);
    }
    let h = binary_entropy(eps).unwrap_or(f64::NAN) + eps * log2(m1);
    (h, ln(m1 * (1.0 - eps) / eps))
}

/// `[H(X) - H2(eps) - eps log2(|X|-1)]^+` with `eps = Pr(X != omega(Y))`.
///
/// Fails when `eps = 1` (no decision is ever correct).
pub fn hard_decision_rate(p_x: &Pmf, ch: &Dmc, quant: &Quantizer) -> Result<HardDecision> {
    ch.check_input(p_x)?;
    quant
        .output()
        .ensure_same(ch.output(), "quantizer output")?;
    quant.target().ensure_same(ch.input(), "quantizer target")?;
    let eps: f64 = support_pairs(p_x, ch)
        .filter(|&(_, a, b)| quant.decide(b) != a)
        .map(|(j, _, _)| j)
        .sum();
    let eps = eps.clamp(0.0, 1.0);
    if eps >= 1.0 {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    let (u, s) = hard_decision_uncertainty(eps, ch.input_len());
    Ok(HardDecision {
        rate: Clamped::new(entropy(p_x) - u),
        eps,
        uncertainty: u,
        s,
    })
}

/// Binary hard-decision decoding rate.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryHardDecision {
    pub rate: Clamped,
    /// Average bit error probability `(1/m) sum_j Pr(B_j != omega_j(Y))`.
    pub eps: f64,
    pub level_eps: Vec<f64>,
    /// Optimal exponent of `e^{s q^m}`.
    pub s: f64,
}

/// `[H(B) - m H2(eps)]^+` with `eps` the average bit error probability of
/// the per-level quantizers.
pub fn binary_hard_decision_rate(
    p_labels: &Pmf,
    ch: &Dmc,
    quants: &[Quantizer],
) -> Result<BinaryHardDecision> {
    let labeled = labeled_input(p_labels, ch)?;
    let m = labeled.label_bits();
    if quants.len() != m {
        return Err(Error::LengthMismatch {
            what: "bit quantizers",
            expected: m,
            got: quants.len(),
        });
    }
    for qz in quants {
        qz.output().ensure_same(ch.output(), "quantizer output")?;
        if qz.target().len() != 2 {
            return Err(Error::AlphabetMismatch("bit quantizers must be binary"));
        }
    }
    let level_eps: Vec<f64> = (0..m)
        .map(|j| {
            support_pairs(p_labels, ch)
                .filter(|&(_, s, b)| labeled.bit(s, j) != quants[j].decide(b))
                .map(|(p, _, _)| p)
                .sum::<f64>()
                .clamp(0.0, 1.0)
        })
        .collect();
    let eps = level_eps.iter().sum::<f64>() / m as f64;
    let (u, s) = hard_decision_uncertainty(eps, 2);
    Ok(BinaryHardDecision {
        rate: Clamped::new(entropy(p_labels) - m as f64 * u),
        eps,
        level_eps,
        s,
    })
}

/// Per-symbol conditional code rates
/// `g(a) = E[log2 q(a,Y) / sum_c (1/|X|) q(c,Y) | X = a]` (NaN off the support).
pub fn conditional_code_rates(p_x: &Pmf, ch: &Dmc, q: &Metric) -> Result<Vec<f64>> {
    check(p_x, ch, q)?;
    let log_nx = log2(q.input_len() as f64);
    let norms = log2_column_sums(q);
    Ok((0..q.input_len())
        .map(|a| {
            if p_x.prob(a) == 0.0 {
                return f64::NAN;
            }
            (0..q.output_len())
                .filter(|&b| ch.prob(a, b) > 0.0)
                .map(|b| ch.prob(a, b) * (log2(q.get(a, b)) - norms[b] + log_nx))
                .sum()
        })
        .collect())
}

/// Typicality-corrected code rate
/// `sum_a P_X(a) g(a) - eps_typ sum_a P_X(a) |g(a)|`, achievable for all
/// `eps_typ`-letter-typical code words.
pub fn t_c_epsilon_lower_bound(p_x: &Pmf, ch: &Dmc, q: &Metric, eps_typ: f64) -> Result<f64> {
    if !(eps_typ >= 0.0) {
        return Err(Error::OutOfRange {
            name: "eps_typ",
            value: eps_typ,
        });
    }
    let g = conditional_code_rates(p_x, ch, q)?;
    let (mut mean, mut abs) = (0.0, 0.0);
    for a in p_x.support() {
        mean += p_x.prob(a) * g[a];
        abs += p_x.prob(a) * g[a].abs();
    }
    Ok(if eps_typ == 0.0 {
        mean
    } else {
        mean - eps_typ * abs
    })
}

/// `H(X|Y)` of an `M`-ary symmetric channel with uniform input,
/// `H2(eps) + eps log2(M-1)`.
pub fn mary_symmetric_conditional_entropy(m: usize, eps: f64) -> Result<f64> {
    let h = binary_entropy(eps)?;
    Ok(if eps == 0.0 {
        h
    } else {
        h + eps * log2((m - 1) as f64)
    })
}
