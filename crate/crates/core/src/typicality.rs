//! Letter-typical sets: membership, exact size by composition counting, and
//! the encoding-failure bound of the shaping encoder.
//!
//! A sequence `x^n` is `eps`-letter-typical for `P_X` if for every letter
//! `(1 - eps) P_X(a) <= N(a|x^n)/n <= (1 + eps) P_X(a)`. Letters with
//! `P_X(a) = 0` must not occur.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::info::entropy;
use crate::math::{exp, exp2, log2};
use crate::{Error, Pmf, Result};

/// Slack on the real count bounds so that bounds which are integers in exact
/// arithmetic are not lost to rounding in `n * P_X(a) * (1 +- eps)`.
pub const COUNT_TOLERANCE: f64 = 1e-9;

/// Parameters of a letter-typical set.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalSpec {
    p_x: Pmf,
    n: usize,
    eps: f64,
}

impl TypicalSpec {
    pub fn new(p_x: Pmf, n: usize, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                value: 0.0,
            });
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::OutOfRange {
                name: "eps",
                value: eps,
            });
        }
        Ok(Self { p_x, n, eps })
    }

    pub fn p_x(&self) -> &Pmf {
        &self.p_x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Integer count bounds per letter.
    pub fn count_bounds(&self) -> CountBounds {
        let n = self.n as f64;
        let (lo, hi) = self
            .p_x
            .probs()
            .iter()
            .map(|&p| {
                let lo = libm::ceil((1.0 - self.eps) * n * p - COUNT_TOLERANCE).max(0.0);
                let hi = libm::floor((1.0 + self.eps) * n * p + COUNT_TOLERANCE).min(n);
                (lo as usize, hi as usize)
            })
            .unzip();
        CountBounds { lo, hi }
    }
}

/// Inclusive per-letter count ranges `[lo_a, hi_a]` of the typical set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountBounds {
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
}

impl CountBounds {
    /// Whether a letter-count vector lies inside the bounds.
    #[inline]
    pub fn admits(&self, counts: &[usize]) -> bool {
        counts
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&k, (&lo, &hi))| lo <= k && k <= hi)
    }

    /// Whether the sequence (symbol indices) has admissible letter counts.
    pub fn admits_sequence<T: Copy + Into<usize>>(&self, x: &[T], counts: &mut [usize]) -> bool {
        counts.iter_mut().for_each(|c| *c = 0);
        for &s in x {
            counts[s.into()] += 1;
        }
        self.admits(counts)
    }
}

/// Letter counts `N(a|x^n)`.
pub fn letter_counts(x: &[usize], alphabet_size: usize) -> Result<Vec<usize>> {
    let mut counts = alloc::vec![0usize; alphabet_size];
    for &s in x {
        if s >= alphabet_size {
            return Err(Error::SymbolOutOfRange {
                index: s,
                size: alphabet_size,
            });
        }
        counts[s] += 1;
    }
    Ok(counts)
}

/// Membership test for a sequence of symbol indices.
pub fn is_typical(x: &[usize], spec: &TypicalSpec) -> Result<bool> {
    if x.len() != spec.n {
        return Err(Error::LengthMismatch {
            what: "sequence",
            expected: spec.n,
            got: x.len(),
        });
    }
    let counts = letter_counts(x, spec.p_x.len())?;
    Ok(spec.count_bounds().admits(&counts))
}

/// Calls `f` on every count vector with `sum = n` inside `bounds`, in
/// lexicographic order.
pub fn for_each_composition<F: FnMut(&[usize])>(n: usize, bounds: &CountBounds, mut f: F) {
    let k = bounds.lo.len();
    if k == 0 {
        return;
    }
    // suffix sums of the bounds prune infeasible prefixes
    let mut min_rest = alloc::vec![0usize; k + 1];
    let mut max_rest = alloc::vec![0usize; k + 1];
    for i in (0..k).rev() {
        min_rest[i] = min_rest[i + 1] + bounds.lo[i];
        max_rest[i] = max_rest[i + 1] + bounds.hi[i];
    }
    let mut counts = alloc::vec![0usize; k];
    fn rec<F: FnMut(&[usize])>(
        i: usize,
        left: usize,
        counts: &mut [usize],
        b: &CountBounds,
        min_rest: &[usize],
        max_rest: &[usize],
        f: &mut F,
    ) {
        let k = counts.len();
        if i + 1 == k {
            if b.lo[i] <= left && left <= b.hi[i] {
                counts[i] = left;
                f(counts);
            }
            return;
        }
        for c in b.lo[i]..=b.hi[i].min(left) {
            let rest = left - c;
            if rest < min_rest[i + 1] || rest > max_rest[i + 1] {
                continue;
            }
            counts[i] = c;
            rec(i + 1, rest, counts, b, min_rest, max_rest, f);
        }
    }
    if min_rest[0] <= n && n <= max_rest[0] {
        rec(0, n, &mut counts, bounds, &min_rest, &max_rest, &mut f);
    }
}

/// Exact multinomial coefficient `n! / prod_a k_a!` with `n = sum k_a`.
pub fn multinomial(counts: &[usize]) -> BigUint {
    let mut acc = BigUint::one();
    let mut total = 0usize;
    for &k in counts {
        // acc *= C(total + k, k), built incrementally so each step is exact
        for j in 1..=k {
            acc *= BigUint::from(total + j);
            acc /= BigUint::from(j);
        }
        total += k;
    }
    acc
}

/// Exact size `|T_eps^n(P_X)|`.
pub fn typical_set_size(spec: &TypicalSpec) -> BigUint {
    let bounds = spec.count_bounds();
    let mut total = BigUint::zero();
    for_each_composition(spec.n, &bounds, |k| total += multinomial(k));
    total
}

/// `log2` of a big integer; `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return log2(x.to_u64().unwrap_or(u64::MAX) as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    log2(top as f64) + shift as f64
}

/// `(1/n) log2 |T_eps^n(P_X)|`.
pub fn rate_of_typical_set(spec: &TypicalSpec) -> f64 {
    log2_big(&typical_set_size(spec)) / spec.n as f64
}

/// Exponent `(1 - eps) H(X)` of the typical-set lower bound (without its
/// vanishing correction factor).
pub fn lemma_lower_bound_rate(spec: &TypicalSpec) -> f64 {
    (1.0 - spec.eps) * entropy(&spec.p_x)
}

/// Smallest positive letter probability, the `mu_X` of the lower bound's
/// hypothesis `0 < eps < mu_X`.
pub fn mu_x(p_x: &Pmf) -> f64 {
    p_x.min_positive()
}

/// Whether the lower bound's hypothesis `0 < eps < mu_X` holds.
pub fn lemma_applies(spec: &TypicalSpec) -> bool {
    spec.eps > 0.0 && spec.eps < mu_x(&spec.p_x)
}

/// `log2(|S_n| / |X|^n)`, the typical fraction of uniformly drawn words.
pub fn log2_typical_fraction(spec: &TypicalSpec) -> f64 {
    log2_big(&typical_set_size(spec)) - spec.n as f64 * log2(spec.p_x.len() as f64)
}

/// `exp(-(|S_n| / |X|^n) 2^{n r'})`, which bounds the probability that none
/// of `2^{n r'}` uniform code words is typical.
pub fn encoding_failure_bound(spec: &TypicalSpec, r_prime: f64) -> Result<f64> {
    if !(r_prime >= 0.0) {
        return Err(Error::OutOfRange {
            name: "r_prime",
            value: r_prime,
        });
    }
    let t = log2_typical_fraction(spec) + spec.n as f64 * r_prime;
    Ok(exp(-exp2(t)))
}

/// Exact probability `(1 - |S_n|/|X|^n)^slots` that none of `slots` uniform
/// code words is typical.
pub fn encoding_failure_probability(spec: &TypicalSpec, slots: u64) -> f64 {
    let frac = exp2(log2_typical_fraction(spec));
    if frac >= 1.0 {
        return 0.0;
    }
    exp(slots as f64 * libm::log1p(-frac))
}

/// Largest-remainder rounding of `n P_X` to integer counts summing to `n`;
/// ties go to the lowest index.
pub fn rounded_composition(p_x: &Pmf, n: usize) -> Vec<usize> {
    let nf = n as f64;
    let mut counts: Vec<usize> = p_x
        .probs()
        .iter()
        .map(|&p| libm::floor(nf * p) as usize)
        .collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).filter(|&a| p_x.prob(a) > 0.0).collect();
    let rem = |a: usize| nf * p_x.prob(a) - counts[a] as f64;
    let rems: Vec<f64> = (0..counts.len()).map(rem).collect();
    order.sort_by(|&a, &b| rems[b].total_cmp(&rems[a]).then(a.cmp(&b)));
    for &a in order.iter().cycle().take(n.saturating_sub(assigned)) {
        counts[a] += 1;
    }
    counts
}
