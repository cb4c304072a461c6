//! Empirical code rate `T^_c(x^n, y^n, q)` of observed sequence pairs and its
//! Monte-Carlo estimate.

use alloc::vec::Vec;

use crate::math::{log2, sqrt};
use crate::rates::achievable_transmission_rate;
use crate::rng::{trial_rng, ChannelSampler, SymbolSampler};
use crate::typicality::rounded_composition;
use crate::{Dmc, Error, Metric, Pmf, Result};

/// Agreement required between the two algebraic forms of `T^_c`.
pub const FORM_TOLERANCE: f64 = 1e-10;

/// An input sequence and the channel output it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePair {
    x: Vec<usize>,
    y: Vec<usize>,
}

impl SequencePair {
    pub fn new(x: Vec<usize>, y: Vec<usize>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                what: "output sequence",
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::OutOfRange {
                name: "n",
                value: 0.0,
            });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn check(&self, q: &Metric) -> Result<()> {
        for (&a, &b) in self.x.iter().zip(&self.y) {
            if a >= q.input_len() {
                return Err(Error::SymbolOutOfRange {
                    index: a,
                    size: q.input_len(),
                });
            }
            if b >= q.output_len() {
                return Err(Error::SymbolOutOfRange {
                    index: b,
                    size: q.output_len(),
                });
            }
        }
        Ok(())
    }
}

/// Per-letter terms `log2 q(a,b) - log2(sum_c q(c,b) / |X|)`, row-major.
/// `T^_c` is the average of these terms along a sequence pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeRateTable {
    ny: usize,
    terms: Vec<f64>,
}

impl CodeRateTable {
    pub fn new(q: &Metric) -> Self {
        let (nx, ny) = (q.input_len(), q.output_len());
        let log_nx = log2(nx as f64);
        let norms: Vec<f64> = (0..ny).map(|b| log2(q.column_sum(b)) - log_nx).collect();
        let terms = (0..nx * ny)
            .map(|i| log2(q.matrix()[i]) - norms[i % ny])
            .collect();
        Self { ny, terms }
    }

    #[inline]
    pub fn term(&self, a: usize, b: usize) -> f64 {
        self.terms[a * self.ny + b]
    }

    /// `T^_c` of index sequences (no bounds checks beyond slice indexing).
    pub fn rate<A, B>(&self, x: &[A], y: &[B]) -> f64
    where
        A: Copy + Into<usize>,
        B: Copy + Into<usize>,
    {
        let sum: f64 = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| self.term(a.into(), b.into()))
            .sum();
        sum / x.len() as f64
    }
}

/// `T^_c = (1/n) sum_i log2[q(x_i,y_i) / sum_a (1/|X|) q(a,y_i)]`.
///
/// Also evaluates `log2|X| - (1/n) sum_i -log2[q(x_i,y_i) / sum_a q(a,y_i)]`
/// and fails with [`Error::PerspectiveMismatch`] if the two disagree.
/// `-inf` when `q` vanishes at some `(x_i, y_i)`.
pub fn empirical_code_rate(pair: &SequencePair, q: &Metric) -> Result<f64> {
    pair.check(q)?;
    let n = pair.len() as f64;
    let log_nx = log2(q.input_len() as f64);
    let (mut direct, mut unc) = (0.0, 0.0);
    for (&a, &b) in pair.x.iter().zip(&pair.y) {
        let lq = log2(q.get(a, b));
        let ls = log2(q.column_sum(b));
        direct += lq - (ls - log_nx);
        unc += ls - lq;
    }
    let direct = direct / n;
    let via_uncertainty = log_nx - unc / n;
    if direct.is_finite()
        && !((direct - via_uncertainty).abs() <= FORM_TOLERANCE * direct.abs().max(1.0))
    {
        return Err(Error::PerspectiveMismatch(direct, via_uncertainty));
    }
    Ok(direct)
}

/// One input letter's share of `T^_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LetterBucket {
    pub symbol: usize,
    pub count: usize,
    /// `N(a|x^n) / n`.
    pub fraction: f64,
    /// Average of the per-letter terms over `{i : x_i = a}`.
    pub mean: f64,
}

/// `T^_c` sorted by input letter.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionBreakdown {
    /// Letters that occur in `x^n`, in symbol order.
    pub buckets: Vec<LetterBucket>,
    /// `sum fraction * mean`, equal to `T^_c` up to rounding.
    pub recombined: f64,
}

pub fn composition_sorted_rate(pair: &SequencePair, q: &Metric) -> Result<CompositionBreakdown> {
    pair.check(q)?;
    let table = CodeRateTable::new(q);
    let nx = q.input_len();
    let mut sums = alloc::vec![0.0; nx];
    let mut counts = alloc::vec![0usize; nx];
    for (&a, &b) in pair.x.iter().zip(&pair.y) {
        sums[a] += table.term(a, b);
        counts[a] += 1;
    }
    let n = pair.len() as f64;
    let buckets: Vec<LetterBucket> = (0..nx)
        .filter(|&a| counts[a] > 0)
        .map(|a| LetterBucket {
            symbol: a,
            count: counts[a],
            fraction: counts[a] as f64 / n,
            mean: sums[a] / counts[a] as f64,
        })
        .collect();
    let recombined = buckets.iter().map(|b| b.fraction * b.mean).sum();
    Ok(CompositionBreakdown {
        buckets,
        recombined,
    })
}

/// How input sequences are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Composition {
    /// Entries iid from `P_X`.
    #[default]
    Iid,
    /// Letter counts fixed to the largest-remainder rounding of `n P_X`.
    /// Sequences are emitted in sorted order since `T^_c` is invariant under
    /// joint permutation of `(x^n, y^n)`.
    Exact,
}

/// Monte-Carlo parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub composition: Composition,
}

/// Prepared sampler for one `T^_c` draw per trial.
#[derive(Debug, Clone)]
pub struct McSetup {
    cfg: McConfig,
    table: CodeRateTable,
    input: SymbolSampler,
    channel: ChannelSampler,
    fixed_x: Option<Vec<usize>>,
    t_c: f64,
}

impl McSetup {
    pub fn new(p_x: &Pmf, ch: &Dmc, q: &Metric, cfg: McConfig) -> Result<Self> {
        if cfg.n == 0 {
            return Err(Error::OutOfRange {
                name: "n",
                value: 0.0,
            });
        }
        if cfg.trials == 0 {
            return Err(Error::OutOfRange {
                name: "trials",
                value: 0.0,
            });
        }
        let t_c = achievable_transmission_rate(p_x, ch, q)?.t_c;
        let fixed_x = match cfg.composition {
            Composition::Iid => None,
            Composition::Exact => Some(
                rounded_composition(p_x, cfg.n)
                    .iter()
                    .enumerate()
                    .flat_map(|(a, &k)| core::iter::repeat_n(a, k))
                    .collect(),
            ),
        };
        Ok(Self {
            cfg,
            table: CodeRateTable::new(q),
            input: SymbolSampler::new(p_x)?,
            channel: ChannelSampler::new(ch)?,
            fixed_x,
            t_c,
        })
    }

    pub fn config(&self) -> &McConfig {
        &self.cfg
    }

    /// Closed-form `T_c` the estimate converges to.
    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    /// `T^_c` of trial `index`; depends only on `(seed, index)`.
    pub fn trial(&self, index: usize) -> f64 {
        let mut rng = trial_rng(self.cfg.seed, index as u64);
        let x = match &self.fixed_x {
            Some(x) => x.clone(),
            None => self.input.sample_n(&mut rng, self.cfg.n),
        };
        let y = self.channel.transmit_seq(&mut rng, &x);
        self.table.rate(&x, &y)
    }

    /// Combines per-trial values given in trial order.
    pub fn summarize(&self, samples: &[f64]) -> McEstimate {
        McEstimate::from_samples(samples, self.t_c)
    }
}

/// Sample mean of `T^_c` and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_dev: f64,
    /// `std_dev / sqrt(trials)`; `+inf` for a single trial.
    pub std_error: f64,
    pub trials: usize,
    pub t_c_closed_form: f64,
    /// `(mean - T_c) / std_error`.
    pub z_score: f64,
}

impl McEstimate {
    /// Sums in slice order, so the result does not depend on how the samples
    /// were produced.
    pub fn from_samples(samples: &[f64], t_c: f64) -> Self {
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let (std_dev, std_error) = if samples.len() > 1 {
            let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
            let sd = sqrt(var);
            (sd, sd / sqrt(k))
        } else {
            (f64::NAN, f64::INFINITY)
        };
        let diff = mean - t_c;
        let z_score = if std_error > 0.0 {
            diff / std_error
        } else if diff == 0.0 || diff.abs() <= 1e-12 * t_c.abs().max(1.0) {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        Self {
            mean,
            std_dev,
            std_error,
            trials: samples.len(),
            t_c_closed_form: t_c,
            z_score,
        }
    }
}

/// Sequential Monte-Carlo estimate of `T_c`.
pub fn monte_carlo_t_c(p_x: &Pmf, ch: &Dmc, q: &Metric, cfg: McConfig) -> Result<McEstimate> {
    let setup = McSetup::new(p_x, ch, q, cfg)?;
    let samples: Vec<f64> = (0..cfg.trials).map(|t| setup.trial(t)).collect();
    Ok(setup.summarize(&samples))
}
