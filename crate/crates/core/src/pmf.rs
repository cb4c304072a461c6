//! Probability distributions on finite alphabets.

use alloc::vec::Vec;

use crate::{Alphabet, Error, Result, SUM_TOLERANCE};

/// A probability mass function on an [`Alphabet`].
///
/// Construction accepts entries whose sum is within `1e-9` of one and
/// renormalizes them, so the stored vector sums to one up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                what: "probabilities",
                expected: alphabet.len(),
                got: probs.len(),
            });
        }
        for (index, &value) in probs.iter().enumerate() {
            if !(0.0..=1.0 + SUM_TOLERANCE).contains(&value) {
                return Err(Error::InvalidProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized(sum));
        }
        let probs = if sum == 1.0 {
            probs
        } else {
            probs.into_iter().map(|p| p / sum).collect()
        };
        Ok(Self { alphabet, probs })
    }

    /// The uniform distribution `1/|X|` on every symbol.
    pub fn uniform(alphabet: Alphabet) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let p = 1.0 / alphabet.len() as f64;
        let probs = alloc::vec![p; alphabet.len()];
        Ok(Self { alphabet, probs })
    }

    pub fn point_mass(alphabet: Alphabet, index: usize) -> Result<Self> {
        if index >= alphabet.len() {
            return Err(Error::SymbolOutOfRange {
                index,
                size: alphabet.len(),
            });
        }
        let mut probs = alloc::vec![0.0; alphabet.len()];
        probs[index] = 1.0;
        Ok(Self { alphabet, probs })
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(alphabet: Alphabet, weights: &[f64]) -> Result<Self> {
        if let Some(index) = weights.iter().position(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidProbability {
                index,
                value: weights[index],
            });
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::NotNormalized(total));
        }
        Self::new(alphabet, weights.iter().map(|w| w / total).collect())
    }

    /// Product distribution `P(x_1, ..., x_m) = prod_j P_j(x_j)` on the
    /// lexicographic product alphabet (see [`Alphabet::power`]).
    pub fn product(factors: &[Pmf]) -> Result<Self> {
        let first = factors.first().ok_or(Error::EmptyAlphabet)?;
        for f in factors {
            f.alphabet.ensure_same(&first.alphabet, "product factors")?;
        }
        let alphabet = first.alphabet.power(factors.len())?;
        let k = first.len();
        let probs = (0..alphabet.len())
            .map(|mut idx| {
                let mut p = 1.0;
                for f in factors.iter().rev() {
                    p *= f.probs[idx % k];
                    idx /= k;
                }
                p
            })
            .collect();
        Self::new(alphabet, probs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Indices with strictly positive probability.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
    }

    pub fn has_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    /// Smallest positive probability.
    pub fn min_positive(&self) -> f64 {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_uniform(&self) -> bool {
        let p = 1.0 / self.len() as f64;
        self.probs.iter().all(|&q| (q - p).abs() <= 1e-12)
    }

    /// Same probabilities on another alphabet with identical symbols, e.g.
    /// to pick up labels or signal points.
    pub fn rebind(&self, alphabet: Alphabet) -> Result<Self> {
        self.alphabet.ensure_same(&alphabet, "rebind")?;
        Ok(Self {
            alphabet,
            probs: self.probs.clone(),
        })
    }
}

/// The uniform distribution on `alphabet`.
pub fn uniform_pmf(alphabet: Alphabet) -> Result<Pmf> {
    Pmf::uniform(alphabet)
}
