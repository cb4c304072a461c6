//! Discrete memoryless channels in matrix form.
//!
//! A [`Dmc`] stores `w[a][b] = p(b|a)` row-major. Continuous-output channels
//! enter through [`awgn_quantized`], which integrates the Gaussian density
//! over a finite output grid.

use alloc::format;
use alloc::vec::Vec;

use crate::math::normal_interval;
use crate::{Alphabet, Error, Pmf, Result, SUM_TOLERANCE};

/// A discrete memoryless channel with row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    input: Alphabet,
    output: Alphabet,
    w: Vec<f64>,
}

impl Dmc {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(Error::LengthMismatch {
                what: "channel rows",
                expected: input.len(),
                got: rows.len(),
            });
        }
        let mut w = Vec::with_capacity(input.len() * output.len());
        for row in rows {
            if row.len() != output.len() {
                return Err(Error::LengthMismatch {
                    what: "channel row",
                    expected: output.len(),
                    got: row.len(),
                });
            }
            w.extend(row);
        }
        Self::from_flat(input, output, w)
    }

    /// Builds a channel from a row-major matrix. Rows must sum to one within
    /// `1e-9` and are renormalized.
    pub fn from_flat(input: Alphabet, output: Alphabet, mut w: Vec<f64>) -> Result<Self> {
        let ny = output.len();
        if w.len() != input.len() * ny {
            return Err(Error::LengthMismatch {
                what: "channel matrix",
                expected: input.len() * ny,
                got: w.len(),
            });
        }
        for (index, &value) in w.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        for (row, chunk) in w.chunks_mut(ny).enumerate() {
            let sum: f64 = chunk.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::RowNotNormalized { row, sum });
            }
            if sum != 1.0 {
                chunk.iter_mut().for_each(|x| *x /= sum);
            }
        }
        Ok(Self { input, output, w })
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
    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.w[a * self.output.len() + b]
    }

    pub fn row(&self, a: usize) -> &[f64] {
        let ny = self.output.len();
        &self.w[a * ny..(a + 1) * ny]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.w
    }

    /// Replaces the input alphabet by one with the same symbols (to attach
    /// labels or signal points).
    pub fn with_input(mut self, input: Alphabet) -> Result<Self> {
        self.input.ensure_same(&input, "channel input")?;
        self.input = input;
        Ok(self)
    }

    pub(crate) fn check_input(&self, p_x: &Pmf) -> Result<()> {
        p_x.alphabet()
            .ensure_same(&self.input, "input distribution vs channel input")
    }

    /// Joint distribution `P_X(a) w[a][b]`, row-major.
    pub fn joint(&self, p_x: &Pmf) -> Result<Vec<f64>> {
        self.check_input(p_x)?;
        let ny = self.output.len();
        let mut j = Vec::with_capacity(self.w.len());
        for a in 0..self.input.len() {
            let pa = p_x.prob(a);
            j.extend(self.w[a * ny..(a + 1) * ny].iter().map(|&w| pa * w));
        }
        Ok(j)
    }

    /// Output distribution `P_Y(b) = sum_a P_X(a) w[a][b]`.
    pub fn output_probs(&self, p_x: &Pmf) -> Result<Vec<f64>> {
        self.check_input(p_x)?;
        let ny = self.output.len();
        let mut py = alloc::vec![0.0; ny];
        for a in 0..self.input.len() {
            let pa = p_x.prob(a);
            if pa == 0.0 {
                continue;
            }
            for (acc, &w) in py.iter_mut().zip(self.row(a)) {
                *acc += pa * w;
            }
        }
        Ok(py)
    }
}

/// Binary symmetric channel with crossover probability `eps`.
pub fn bsc(eps: f64) -> Result<Dmc> {
    mary_symmetric(2, eps)
}

/// `M`-ary symmetric channel: correct with probability `1 - eps`, otherwise
/// uniformly one of the `M - 1` other symbols.
pub fn mary_symmetric(m: usize, eps: f64) -> Result<Dmc> {
    if m < 2 {
        return Err(Error::OutOfRange {
            name: "M",
            value: m as f64,
        });
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    let alphabet = Alphabet::indexed(m)?;
    let off = eps / (m - 1) as f64;
    let mut w = alloc::vec![off; m * m];
    for a in 0..m {
        w[a * m + a] = 1.0 - eps;
    }
    Dmc::from_flat(alphabet.clone(), alphabet, w)
}

/// Output grid for [`awgn_quantized`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Number of output cells.
    pub cells: usize,
    /// The grid spans `[min point - k sigma, max point + k sigma]`.
    pub span_sigmas: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            cells: 512,
            span_sigmas: 8.0,
        }
    }
}

impl GridSpec {
    pub const MIN_CELLS: usize = 64;
    pub const MIN_SPAN_SIGMAS: f64 = 6.0;
}

/// AWGN channel with real constellation and uniform output quantization.
///
/// The grid is split into `cells` equal cells over the span; the two edge
/// cells extend to infinity so the tails are folded in. Each entry is the
/// Gaussian probability of its cell.
pub fn awgn_quantized(constellation: &Alphabet, sigma: f64, grid: &GridSpec) -> Result<Dmc> {
    let points = constellation
        .signal_points()
        .ok_or(Error::MissingSignalPoints)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma,
        });
    }
    if grid.cells < GridSpec::MIN_CELLS {
        return Err(Error::OutOfRange {
            name: "cells",
            value: grid.cells as f64,
        });
    }
    if !(grid.span_sigmas >= GridSpec::MIN_SPAN_SIGMAS) {
        return Err(Error::OutOfRange {
            name: "span_sigmas",
            value: grid.span_sigmas,
        });
    }
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min) - grid.span_sigmas * sigma;
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max) + grid.span_sigmas * sigma;
    let width = (hi - lo) / grid.cells as f64;
    let edge = |k: usize| -> f64 {
        if k == 0 {
            f64::NEG_INFINITY
        } else if k == grid.cells {
            f64::INFINITY
        } else {
            lo + k as f64 * width
        }
    };
    let centers: Vec<f64> = (0..grid.cells)
        .map(|k| lo + (k as f64 + 0.5) * width)
        .collect();
    let output =
        Alphabet::new((0..grid.cells).map(|k| format!("y{k}")))?.with_signal_points(centers)?;

    let mut w = Vec::with_capacity(points.len() * grid.cells);
    for &x in points {
        let start = w.len();
        for k in 0..grid.cells {
            w.push(normal_interval(
                (edge(k) - x) / sigma,
                (edge(k + 1) - x) / sigma,
            ));
        }
        let row = &mut w[start..];
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= sum);
    }
    Dmc::from_flat(constellation.clone(), output, w)
}

/// Posterior `P_{X|Y}(a|b)` together with the output distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    nx: usize,
    ny: usize,
    probs: Vec<f64>,
    output: Vec<f64>,
}

impl Posterior {
    /// `P_{X|Y}(a|b)`; zero on unreachable outputs.
    #[inline]
    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.ny + b]
    }

    pub fn column(&self, b: usize) -> Vec<f64> {
        (0..self.nx).map(|a| self.prob(a, b)).collect()
    }

    /// `P_Y(b)`.
    pub fn output_prob(&self, b: usize) -> f64 {
        self.output[b]
    }

    pub fn output_probs(&self) -> &[f64] {
        &self.output
    }

    /// Outputs with `P_Y(b) = 0` never occur and are excluded from all
    /// expectations.
    pub fn is_reachable(&self, b: usize) -> bool {
        self.output[b] > 0.0
    }

    pub fn input_len(&self) -> usize {
        self.nx
    }

    pub fn output_len(&self) -> usize {
        self.ny
    }
}

/// Bayes posterior of the input given the output.
pub fn posterior(p_x: &Pmf, ch: &Dmc) -> Result<Posterior> {
    let joint = ch.joint(p_x)?;
    let (nx, ny) = (ch.input_len(), ch.output_len());
    let mut output = alloc::vec![0.0; ny];
    for a in 0..nx {
        for b in 0..ny {
            output[b] += joint[a * ny + b];
        }
    }
    let mut probs = alloc::vec![0.0; nx * ny];
    for b in 0..ny {
        if output[b] > 0.0 {
            for a in 0..nx {
                probs[a * ny + b] = joint[a * ny + b] / output[b];
            }
        }
    }
    Ok(Posterior {
        nx,
        ny,
        probs,
        output,
    })
}

/// One bit level of a labeled input: `P_{B_j}` and the channel `p_{Y|B_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BitLevel {
    pub pmf: Pmf,
    pub channel: Dmc,
}

/// Picks the labeled alphabet among the input distribution's and the
/// channel's (they must carry the same symbols).
pub(crate) fn labeled_input<'a>(p: &'a Pmf, ch: &'a Dmc) -> Result<&'a Alphabet> {
    ch.check_input(p)?;
    if p.alphabet().is_labeled() {
        Ok(p.alphabet())
    } else if ch.input().is_labeled() {
        Ok(ch.input())
    } else {
        Err(Error::Unlabeled)
    }
}

/// Marginal distribution and channel of bit level `level` (0-based, leftmost
/// label bit first).
pub fn bit_marginal(p_labels: &Pmf, ch: &Dmc, level: usize) -> Result<BitLevel> {
    let labeled = labeled_input(p_labels, ch)?;
    let bits = labeled.label_bits();
    if level >= bits {
        return Err(Error::LevelOutOfRange { level, bits });
    }
    let ny = ch.output_len();
    let mut pb = [0.0f64; 2];
    let mut rows = [alloc::vec![0.0; ny], alloc::vec![0.0; ny]];
    for s in 0..labeled.len() {
        let bit = labeled.bit(s, level);
        let ps = p_labels.prob(s);
        pb[bit] += ps;
        if ps > 0.0 {
            for (acc, &w) in rows[bit].iter_mut().zip(ch.row(s)) {
                *acc += ps * w;
            }
        }
    }
    if pb[0] == 0.0 || pb[1] == 0.0 {
        return Err(Error::DegenerateLevel(level));
    }
    let [r0, r1] = rows;
    let mut w = Vec::with_capacity(2 * ny);
    w.extend(r0.into_iter().map(|v| v / pb[0]));
    w.extend(r1.into_iter().map(|v| v / pb[1]));
    let total = pb[0] + pb[1];
    let pmf = Pmf::new(
        Alphabet::binary(),
        alloc::vec![pb[0] / total, pb[1] / total],
    )?;
    let channel = Dmc::from_flat(Alphabet::binary(), ch.output().clone(), w)?;
    Ok(BitLevel { pmf, channel })
}

/// Describes a vector channel on `X^m -> Y^m` whose alphabets are the
/// lexicographic products of scalar alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductShape {
    scalar_input: Alphabet,
    scalar_output: Alphabet,
    m: usize,
    input: Alphabet,
    output: Alphabet,
}

impl ProductShape {
    pub fn new(scalar_input: Alphabet, scalar_output: Alphabet, m: usize) -> Result<Self> {
        let input = scalar_input.power(m)?;
        let output = scalar_output.power(m)?;
        Ok(Self {
            scalar_input,
            scalar_output,
            m,
            input,
            output,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn scalar_input(&self) -> &Alphabet {
        &self.scalar_input
    }

    pub fn scalar_output(&self) -> &Alphabet {
        &self.scalar_output
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    /// Component `pos` of a product index over an alphabet of size `k`.
    #[inline]
    pub fn digit(index: usize, k: usize, m: usize, pos: usize) -> usize {
        (index / k.pow((m - 1 - pos) as u32)) % k
    }

    fn check(&self, p_vec: &Pmf, ch_vec: &Dmc) -> Result<()> {
        if !p_vec.alphabet().same_symbols(&self.input)
            || !ch_vec.input().same_symbols(&self.input)
            || !ch_vec.output().same_symbols(&self.output)
        {
            return Err(Error::NotProduct(self.m));
        }
        Ok(())
    }
}

/// Memoryless vector channel `W(y|x) = prod_i w_i(y_i|x_i)` for channels on
/// common alphabets.
pub fn product_channel(channels: &[Dmc]) -> Result<(Dmc, ProductShape)> {
    let first = channels.first().ok_or(Error::EmptyAlphabet)?;
    for c in channels {
        c.input()
            .ensure_same(first.input(), "product channel inputs")?;
        c.output()
            .ensure_same(first.output(), "product channel outputs")?;
    }
    let m = channels.len();
    let shape = ProductShape::new(first.input().clone(), first.output().clone(), m)?;
    let (kx, ky) = (first.input_len(), first.output_len());
    let (nx, ny) = (shape.input.len(), shape.output.len());
    let mut w = Vec::with_capacity(nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            let mut p = 1.0;
            for (pos, c) in channels.iter().enumerate() {
                p *= c.prob(
                    ProductShape::digit(x, kx, m, pos),
                    ProductShape::digit(y, ky, m, pos),
                );
            }
            w.push(p);
        }
    }
    let ch = Dmc::from_flat(shape.input.clone(), shape.output.clone(), w)?;
    Ok((ch, shape))
}

/// Accumulates `sum_{x: x_pos = a} P(x) sum_{y: y_pos = b} W(y|x)` into `acc`.
fn accumulate_position(
    p_vec: &Pmf,
    ch_vec: &Dmc,
    shape: &ProductShape,
    pos: usize,
    acc: &mut [f64],
) {
    let (kx, ky, m) = (shape.scalar_input.len(), shape.scalar_output.len(), shape.m);
    for x in 0..ch_vec.input_len() {
        let px = p_vec.prob(x);
        if px == 0.0 {
            continue;
        }
        let a = ProductShape::digit(x, kx, m, pos);
        for (y, &w) in ch_vec.row(x).iter().enumerate() {
            if w > 0.0 {
                acc[a * ky + ProductShape::digit(y, ky, m, pos)] += px * w;
            }
        }
    }
}

fn pair_from_joint(joint: &[f64], input: &Alphabet, output: &Alphabet) -> Result<(Pmf, Dmc)> {
    let ny = output.len();
    let px: Vec<f64> = joint.chunks(ny).map(|r| r.iter().sum()).collect();
    let mut w = Vec::with_capacity(joint.len());
    for (row, &pa) in joint.chunks(ny).zip(&px) {
        if pa > 0.0 {
            w.extend(row.iter().map(|&v| v / pa));
        } else {
            // never used: this input has probability zero
            w.extend(core::iter::repeat_n(1.0 / ny as f64, ny));
        }
    }
    let pmf = Pmf::new(input.clone(), px)?;
    let ch = Dmc::from_flat(input.clone(), output.clone(), w)?;
    Ok((pmf, ch))
}

/// The scalar pair `(X_pos, Y_pos)` of a vector channel.
pub fn position_marginal(
    p_vec: &Pmf,
    ch_vec: &Dmc,
    shape: &ProductShape,
    pos: usize,
) -> Result<(Pmf, Dmc)> {
    shape.check(p_vec, ch_vec)?;
    if pos >= shape.m {
        return Err(Error::OutOfRange {
            name: "position",
            value: pos as f64,
        });
    }
    let mut joint = alloc::vec![0.0; shape.scalar_input.len() * shape.scalar_output.len()];
    accumulate_position(p_vec, ch_vec, shape, pos, &mut joint);
    pair_from_joint(&joint, &shape.scalar_input, &shape.scalar_output)
}

/// Time-averaged scalar pair `(X_I, Y_I)` with `I` uniform on the `m`
/// positions: `P_X(a) p(b|a) = (1/m) sum_j P_{X_j}(a) p_{Y_j|X_j}(b|a)`.
pub fn icm_mixture(p_vec: &Pmf, ch_vec: &Dmc, shape: &ProductShape) -> Result<(Pmf, Dmc)> {
    shape.check(p_vec, ch_vec)?;
    let mut joint = alloc::vec![0.0; shape.scalar_input.len() * shape.scalar_output.len()];
    for pos in 0..shape.m {
        accumulate_position(p_vec, ch_vec, shape, pos, &mut joint);
    }
    let inv_m = 1.0 / shape.m as f64;
    joint.iter_mut().for_each(|v| *v *= inv_m);
    pair_from_joint(&joint, &shape.scalar_input, &shape.scalar_output)
}
