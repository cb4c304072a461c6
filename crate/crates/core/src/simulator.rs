//! Exhaustive random-coding experiment for layered probabilistic shaping and
//! for the classical transceiver.
//!
//! Layered PS: a codebook of `|C|` words drawn uniformly from `X^n` is split
//! into `|U|` messages with `|V| = floor(|C| / |U|)` shaping slots each
//! (`w = u |V| + v`). The encoder sends the first typical word of message
//! `u`, or word `v = 0` if none is typical (an encoding failure). The decoder
//! maximizes `sum_i log2 q(c_i(w), y_i)` over every code word, including
//! atypical ones and the `|C| - |U||V|` words that belong to no message.
//!
//! Classical: `|U|` words drawn iid from `P_X`, one per message, no
//! encoding step.
//!
//! Decoding ties are counted as errors: `W` is decoded correctly only if it
//! is the unique maximizer, and `U` only if every maximizer belongs to
//! message `u`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::empirical::CodeRateTable;
use crate::math::{exp2, log2, sqrt};
use crate::rng::{trial_rng, uniform_index, ChannelSampler, SymbolSampler, TrialRng};
use crate::typicality::{CountBounds, TypicalSpec};
use crate::{Dmc, Error, Metric, Pmf, Result};
use rand::Rng;

/// Largest admissible `n * R_c` (about four million code words).
pub const MAX_N_RC: f64 = 22.0;

/// Largest codebook storage `|C| * n` in symbols.
pub const MAX_CODEBOOK_SYMBOLS: usize = 1 << 26;

/// Relative score tolerance under which two code words tie.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Slack when rounding `2^{nR}` down to an integer, so that exact powers of
/// two survive floating-point error.
pub const SIZE_ROUNDING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    LayeredPs,
    Classical,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::LayeredPs => "layered-ps",
            Mode::Classical => "classical",
        }
    }
}

/// Parameters of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub p_x: Pmf,
    pub ch: Dmc,
    pub q: Metric,
    pub n: usize,
    /// Code rate in bits per symbol (layered PS only).
    pub r_c: f64,
    /// Transmission rate in bits per symbol.
    pub r_tx: f64,
    pub eps_typ: f64,
    pub trials: usize,
    pub seed: u64,
    pub mode: Mode,
}

/// `floor(2^{n r})`, at least 1.
pub fn codebook_size(n: usize, r: f64) -> usize {
    let v = libm::floor(exp2(n as f64 * r) + SIZE_ROUNDING_SLACK);
    if v < 1.0 {
        1
    } else {
        v as usize
    }
}

/// Validated configuration with realized integer sizes.
#[derive(Debug, Clone)]
pub struct Plan {
    cfg: SimConfig,
    /// `|C|`.
    pub codebook_size: usize,
    /// `|U|`.
    pub messages: usize,
    /// `|V|`; 1 in classical mode.
    pub slots: usize,
    bounds: CountBounds,
    log_q: Vec<f64>,
    code_rates: CodeRateTable,
    channel: ChannelSampler,
    input: SymbolSampler,
}

fn infeasible(msg: &str) -> Error {
    Error::Infeasible(String::from(msg))
}

impl Plan {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.ch.check_input(&cfg.p_x)?;
        cfg.q.check_compatible(&cfg.ch)?;
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
        if !(cfg.r_tx >= 0.0 && cfg.r_tx.is_finite()) {
            return Err(Error::OutOfRange {
                name: "r_tx",
                value: cfg.r_tx,
            });
        }
        if cfg.p_x.len() > 256 {
            return Err(infeasible("input alphabets are limited to 256 symbols"));
        }
        let n = cfg.n as f64;
        let (codebook, messages, slots) = match cfg.mode {
            Mode::LayeredPs => {
                if !(cfg.r_c >= cfg.r_tx && cfg.r_c.is_finite()) {
                    return Err(Error::OutOfRange {
                        name: "r_c",
                        value: cfg.r_c,
                    });
                }
                if n * cfg.r_c > MAX_N_RC + SIZE_ROUNDING_SLACK {
                    return Err(infeasible("n * r_c exceeds 22"));
                }
                let c = codebook_size(cfg.n, cfg.r_c);
                let u = codebook_size(cfg.n, cfg.r_tx).min(c);
                (c, u, c / u)
            }
            Mode::Classical => {
                if n * cfg.r_tx > MAX_N_RC + SIZE_ROUNDING_SLACK {
                    return Err(infeasible("n * r_tx exceeds 22"));
                }
                let u = codebook_size(cfg.n, cfg.r_tx);
                (u, u, 1)
            }
        };
        if codebook.saturating_mul(cfg.n) > MAX_CODEBOOK_SYMBOLS {
            return Err(infeasible("codebook exceeds 2^26 stored symbols"));
        }
        let spec = TypicalSpec::new(cfg.p_x.clone(), cfg.n, cfg.eps_typ)?;
        Ok(Self {
            bounds: spec.count_bounds(),
            log_q: cfg.q.log2_table(),
            code_rates: CodeRateTable::new(&cfg.q),
            channel: ChannelSampler::new(&cfg.ch)?,
            input: SymbolSampler::new(&cfg.p_x)?,
            codebook_size: codebook,
            messages,
            slots,
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// Realized code rate `log2|C| / n`.
    pub fn realized_r_c(&self) -> f64 {
        log2(self.codebook_size as f64) / self.cfg.n as f64
    }

    /// Realized transmission rate `log2|U| / n`.
    pub fn realized_r_tx(&self) -> f64 {
        log2(self.messages as f64) / self.cfg.n as f64
    }

    /// Realized shaping rate `R' = log2|V| / n`.
    pub fn realized_r_prime(&self) -> f64 {
        log2(self.slots as f64) / self.cfg.n as f64
    }

    /// Message of code word `w`, or `None` for leftover words.
    #[inline]
    pub fn message_of(&self, w: usize) -> Option<usize> {
        let u = w / self.slots;
        (u < self.messages).then_some(u)
    }

    /// Draws the random quantities of trial `index`.
    pub fn draw_trial(&self, index: usize) -> Trial {
        let mut rng = trial_rng(self.cfg.seed, index as u64);
        let n = self.cfg.n;
        let nx = self.cfg.p_x.len();
        let mut data = alloc::vec![0u8; self.codebook_size * n];
        match self.cfg.mode {
            Mode::LayeredPs => fill_uniform(&mut rng, &mut data, nx),
            Mode::Classical => data
                .iter_mut()
                .for_each(|s| *s = self.input.sample(&mut rng) as u8),
        }
        let codebook = Codebook { n, data };
        let u = uniform_index(&mut rng, self.messages);
        let (v, encoded) = match self.cfg.mode {
            Mode::LayeredPs => {
                let mut counts = alloc::vec![0usize; nx];
                match (0..self.slots).find(|&v| {
                    self.bounds
                        .admits_sequence(codebook.word(u * self.slots + v), &mut counts)
                }) {
                    Some(v) => (v, true),
                    None => (0, false),
                }
            }
            Mode::Classical => (0, true),
        };
        let w = u * self.slots + v;
        let y: Vec<usize> = codebook
            .word(w)
            .iter()
            .map(|&a| self.channel.transmit(&mut rng, a as usize))
            .collect();
        Trial {
            index,
            codebook,
            u,
            w,
            encoded,
            y,
        }
    }

    /// Decoding scores `sum_i log2 q(c_i(w), y_i)` of every code word.
    pub fn scores(&self, trial: &Trial) -> Vec<f64> {
        let nx = self.cfg.p_x.len();
        let ny = self.cfg.q.output_len();
        // per-position lookup: table[i * nx + a] = log2 q(a, y_i)
        let table: Vec<f64> = trial
            .y
            .iter()
            .flat_map(|&b| (0..nx).map(move |a| (a, b)))
            .map(|(a, b)| self.log_q[a * ny + b])
            .collect();
        (0..self.codebook_size)
            .map(|w| {
                trial
                    .codebook
                    .word(w)
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| table[i * nx + a as usize])
                    .sum()
            })
            .collect()
    }

    /// Decodes a drawn trial.
    pub fn decode(&self, trial: &Trial) -> TrialRecord {
        let scores = self.scores(trial);
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = TIE_TOLERANCE * best.abs().max(1.0);
        let is_max = |s: f64| {
            if best == f64::NEG_INFINITY {
                true
            } else {
                s >= best - tol
            }
        };
        let mut decoded = None;
        let mut maximizers = 0usize;
        let mut others_in_message = true;
        for (w, &s) in scores.iter().enumerate() {
            if is_max(s) {
                decoded.get_or_insert(w);
                maximizers += 1;
                if self.message_of(w) != Some(trial.u) {
                    others_in_message = false;
                }
            }
        }
        let decoded = decoded.unwrap_or(0);
        let decode_error = !(maximizers == 1 && decoded == trial.w);
        let message_error = !others_in_message;
        let x = trial.codebook.word(trial.w);
        let t_hat = self.code_rates.rate(x, &trial.y);
        let n = self.cfg.n as f64;
        let bound = pairwise_bound_value(t_hat, self.realized_r_c(), n);
        TrialRecord {
            trial: trial.index,
            message: trial.u,
            index: trial.w,
            encoded: trial.encoded,
            decoded,
            maximizers,
            decode_error,
            message_error,
            t_hat,
            bound,
        }
    }

    pub fn run_trial(&self, index: usize) -> TrialRecord {
        self.decode(&self.draw_trial(index))
    }

    /// Aggregates records given in trial order.
    pub fn summarize(&self, records: &[TrialRecord]) -> SimResult {
        summarize(self, records)
    }
}

/// Fills `data` with iid uniform symbols in `0..nx`. Power-of-two sizes are
/// cut from 64-bit words; other sizes use `random_range` per symbol.
fn fill_uniform(rng: &mut TrialRng, data: &mut [u8], nx: usize) {
    if nx.is_power_of_two() {
        let bits = nx.trailing_zeros();
        if bits == 0 {
            return;
        }
        let per_word = (64 / bits) as usize;
        let mask = (nx - 1) as u64;
        for chunk in data.chunks_mut(per_word) {
            let mut w: u64 = rng.random();
            for s in chunk {
                *s = (w & mask) as u8;
                w >>= bits;
            }
        }
    } else {
        data.iter_mut()
            .for_each(|s| *s = rng.random_range(0..nx) as u8);
    }
}

/// Code words stored row-major as `u8` symbol indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    data: Vec<u8>,
}

impl Codebook {
    #[inline]
    pub fn word(&self, w: usize) -> &[u8] {
        &self.data[w * self.n..(w + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

/// Random draws of one trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub codebook: Codebook,
    /// Message `u`.
    pub u: usize,
    /// Transmitted code word index `w`.
    pub w: usize,
    pub encoded: bool,
    pub y: Vec<usize>,
}

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub message: usize,
    pub index: usize,
    pub encoded: bool,
    /// Lowest-index maximizer.
    pub decoded: usize,
    pub maximizers: usize,
    pub decode_error: bool,
    pub message_error: bool,
    /// `T^_c` of the transmitted word and the received sequence.
    pub t_hat: f64,
    /// `min(1, 2^{-n (T^_c - R_c)})`.
    pub bound: f64,
}

/// A frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frequency {
    pub count: usize,
    pub total: usize,
    pub rate: f64,
    /// `sqrt(rate (1 - rate) / total)`; NaN for an empty sample.
    pub std_error: f64,
}

impl Frequency {
    pub fn new(count: usize, total: usize) -> Self {
        if total == 0 {
            return Self {
                count,
                total,
                rate: f64::NAN,
                std_error: f64::NAN,
            };
        }
        let p = count as f64 / total as f64;
        Self {
            count,
            total,
            rate: p,
            std_error: sqrt(p * (1.0 - p) / total as f64),
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
}

impl MeanEstimate {
    pub fn of(values: &[f64]) -> Self {
        let k = values.len() as f64;
        if values.is_empty() {
            return Self {
                mean: f64::NAN,
                std_dev: f64::NAN,
                std_error: f64::NAN,
                min: f64::NAN,
                max: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / k;
        let (std_dev, std_error) = if values.len() > 1 && mean.is_finite() {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
            (sqrt(var), sqrt(var / k))
        } else {
            (f64::NAN, f64::INFINITY)
        };
        Self {
            mean,
            std_dev,
            std_error,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Aggregate outcome of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mode: Mode,
    pub n: usize,
    pub trials: usize,
    pub codebook_size: usize,
    pub messages: usize,
    pub slots: usize,
    pub r_c: f64,
    pub r_tx: f64,
    pub r_prime: f64,
    pub encoding_failure: Frequency,
    /// `Pr(W^ != W)` among trials with successful encoding.
    pub decode_error: Frequency,
    /// `Pr(U^ != U)` over all trials.
    pub message_error: Frequency,
    /// Clipped pairwise union bound averaged over successfully encoded
    /// trials.
    pub bound_2exp: MeanEstimate,
    /// `T^_c` over successfully encoded trials.
    pub t_hat: MeanEstimate,
}

pub fn summarize(plan: &Plan, records: &[TrialRecord]) -> SimResult {
    let ok: Vec<&TrialRecord> = records.iter().filter(|r| r.encoded).collect();
    let bounds: Vec<f64> = ok.iter().map(|r| r.bound).collect();
    let t_hats: Vec<f64> = ok.iter().map(|r| r.t_hat).collect();
    SimResult {
        mode: plan.cfg.mode,
        n: plan.cfg.n,
        trials: records.len(),
        codebook_size: plan.codebook_size,
        messages: plan.messages,
        slots: plan.slots,
        r_c: plan.realized_r_c(),
        r_tx: plan.realized_r_tx(),
        r_prime: plan.realized_r_prime(),
        encoding_failure: Frequency::new(records.len() - ok.len(), records.len()),
        decode_error: Frequency::new(ok.iter().filter(|r| r.decode_error).count(), ok.len()),
        message_error: Frequency::new(
            records.iter().filter(|r| r.message_error).count(),
            records.len(),
        ),
        bound_2exp: MeanEstimate::of(&bounds),
        t_hat: MeanEstimate::of(&t_hats),
    }
}

fn run(cfg: SimConfig, mode: Mode) -> Result<(SimResult, Vec<TrialRecord>)> {
    if cfg.mode != mode {
        return Err(infeasible("configuration mode does not match the runner"));
    }
    let plan = Plan::new(cfg)?;
    let records: Vec<TrialRecord> = (0..plan.cfg.trials).map(|t| plan.run_trial(t)).collect();
    Ok((plan.summarize(&records), records))
}

/// Runs the layered PS experiment sequentially.
pub fn run_layered_ps(cfg: SimConfig) -> Result<(SimResult, Vec<TrialRecord>)> {
    run(cfg, Mode::LayeredPs)
}

/// Runs the classical-transceiver experiment sequentially.
pub fn run_classical(cfg: SimConfig) -> Result<(SimResult, Vec<TrialRecord>)> {
    run(cfg, Mode::Classical)
}

fn pairwise_bound_value(t_hat: f64, r_c: f64, n: f64) -> f64 {
    let e = -n * (t_hat - r_c);
    if e >= 0.0 {
        1.0
    } else {
        exp2(e)
    }
}

/// `min(1, 2^{-n (T^_c - R_c)})`, a bound on the probability that some other
/// uniformly drawn code word scores at least as well as the sent one.
pub fn pairwise_union_bound(
    pair: &crate::empirical::SequencePair,
    q: &Metric,
    r_c: f64,
) -> Result<f64> {
    let t = crate::empirical::empirical_code_rate(pair, q)?;
    Ok(pairwise_bound_value(t, r_c, pair.len() as f64))
}
