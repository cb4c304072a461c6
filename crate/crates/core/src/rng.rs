//! Seeded randomness for the Monte-Carlo code.
//!
//! Trial `i` of a run with seed `s` draws from ChaCha8 seeded with
//! `seed_from_u64(s)` on stream `i`. Streams are independent, so trials can
//! be evaluated in any order or in parallel with identical results.

use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Dmc, Error, Pmf, Result};

pub type TrialRng = ChaCha8Rng;

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sampler for the symbols of a distribution.
#[derive(Debug, Clone)]
pub struct SymbolSampler {
    dist: WeightedIndex<f64>,
}

impl SymbolSampler {
    pub fn new(p: &Pmf) -> Result<Self> {
        Self::from_weights(p.probs())
    }

    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        WeightedIndex::new(weights.iter().copied())
            .map(|dist| Self { dist })
            .map_err(|_| Error::NotNormalized(weights.iter().sum()))
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.dist.sample(rng)).collect()
    }
}

/// One sampler per channel row.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    rows: Vec<SymbolSampler>,
}

impl ChannelSampler {
    pub fn new(ch: &Dmc) -> Result<Self> {
        let rows = (0..ch.input_len())
            .map(|a| SymbolSampler::from_weights(ch.row(a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    #[inline]
    pub fn transmit<R: Rng + ?Sized>(&self, rng: &mut R, a: usize) -> usize {
        self.rows[a].sample(rng)
    }

    pub fn transmit_seq<R: Rng + ?Sized>(&self, rng: &mut R, x: &[usize]) -> Vec<usize> {
        x.iter().map(|&a| self.transmit(rng, a)).collect()
    }
}

/// Uniform index in `0..n`.
#[inline]
pub fn uniform_index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.random_range(0..n)
}
