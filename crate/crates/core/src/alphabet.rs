//! Finite ordered alphabets with optional binary labels and signal points.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// A finite, ordered set of distinct symbols.
///
/// Symbols are addressed by index everywhere else in the crate; the string
/// identifiers only matter for compatibility checks and file formats.
///
/// Binary labels, when present, have a common width `m` and the alphabet has
/// exactly `2^m` symbols. Bit level `0` is the leftmost character of the
/// label string, so the label `"10"` has bit 1 at level 0 and bit 0 at level 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    symbols: Vec<String>,
    labels: Option<Vec<u32>>,
    label_bits: usize,
    signal_points: Option<Vec<f64>>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self {
            symbols,
            labels: None,
            label_bits: 0,
            signal_points: None,
        })
    }

    /// Symbols `"0"`, `"1"`, ..., `"size-1"`.
    pub fn indexed(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    /// The bit alphabet `{0, 1}`, labeled by itself.
    pub fn binary() -> Self {
        Self {
            symbols: alloc::vec!["0".into(), "1".into()],
            labels: Some(alloc::vec![0, 1]),
            label_bits: 1,
            signal_points: None,
        }
    }

    /// Attaches `bits`-wide labels given as integers (level 0 = most
    /// significant bit).
    pub fn with_labels(mut self, labels: Vec<u32>, bits: usize) -> Result<Self> {
        if bits == 0 || bits > 16 {
            return Err(Error::InvalidLabels("label width must be between 1 and 16"));
        }
        if labels.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "labels",
                expected: self.len(),
                got: labels.len(),
            });
        }
        if self.len() != 1usize << bits {
            return Err(Error::InvalidLabels(
                "a labeled alphabet must have 2^m symbols",
            ));
        }
        let mut seen = alloc::vec![false; self.len()];
        for &l in &labels {
            let l = l as usize;
            if l >= self.len() {
                return Err(Error::InvalidLabels("label wider than m bits"));
            }
            if seen[l] {
                return Err(Error::InvalidLabels("labels must be distinct"));
            }
            seen[l] = true;
        }
        self.labels = Some(labels);
        self.label_bits = bits;
        Ok(self)
    }

    /// Attaches labels written as bit strings such as `"01"`.
    pub fn with_label_strings<S: AsRef<str>>(self, labels: &[S]) -> Result<Self> {
        let bits = labels.first().map_or(0, |l| l.as_ref().len());
        let mut parsed = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            if l.len() != bits {
                return Err(Error::InvalidLabels("labels must have identical length"));
            }
            let mut v = 0u32;
            for c in l.chars() {
                v = (v << 1)
                    | match c {
                        '0' => 0,
                        '1' => 1,
                        _ => return Err(Error::InvalidLabels("labels must be binary strings")),
                    };
            }
            parsed.push(v);
        }
        self.with_labels(parsed, bits)
    }

    /// Natural binary labels: symbol `i` gets label `i`.
    pub fn with_natural_labels(self) -> Result<Self> {
        let bits = exact_log2(self.len())?;
        let labels = (0..self.len() as u32).collect();
        self.with_labels(labels, bits)
    }

    /// Binary reflected Gray labels: symbol `i` gets label `i ^ (i >> 1)`.
    pub fn with_gray_labels(self) -> Result<Self> {
        let bits = exact_log2(self.len())?;
        let labels = (0..self.len() as u32).map(|i| i ^ (i >> 1)).collect();
        self.with_labels(labels, bits)
    }

    pub fn with_signal_points(mut self, points: Vec<f64>) -> Result<Self> {
        if points.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "signal points",
                expected: self.len(),
                got: points.len(),
            });
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::OutOfRange {
                name: "signal point",
                value: points[i],
            });
        }
        self.signal_points = Some(points);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    /// Label width `m`; zero when unlabeled.
    pub fn label_bits(&self) -> usize {
        self.label_bits
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    /// Label of `symbol` as a bit string.
    pub fn label_string(&self, symbol: usize) -> Option<String> {
        let labels = self.labels.as_ref()?;
        let l = labels[symbol];
        Some(
            (0..self.label_bits)
                .map(|j| {
                    if (l >> (self.label_bits - 1 - j)) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect(),
        )
    }

    /// Bit of `symbol`'s label at `level` (0 = leftmost).
    ///
    /// Panics if the alphabet is unlabeled or `level` is out of range.
    pub fn bit(&self, symbol: usize, level: usize) -> usize {
        let labels = self.labels.as_ref().expect("unlabeled alphabet");
        assert!(level < self.label_bits);
        ((labels[symbol] >> (self.label_bits - 1 - level)) & 1) as usize
    }

    pub fn signal_points(&self) -> Option<&[f64]> {
        self.signal_points.as_deref()
    }

    /// Two alphabets are compatible when their symbol lists agree; labels and
    /// signal points are attributes, not identity.
    pub fn same_symbols(&self, other: &Alphabet) -> bool {
        self.symbols == other.symbols
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet, what: &'static str) -> Result<()> {
        if self.same_symbols(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(what))
        }
    }

    /// The `m`-fold product alphabet in lexicographic order (position 0
    /// varies slowest). Symbols are written `(a,b,...)`.
    pub fn power(&self, m: usize) -> Result<Alphabet> {
        if m == 0 {
            return Err(Error::OutOfRange {
                name: "m",
                value: 0.0,
            });
        }
        let size = self.len().checked_pow(m as u32).ok_or(Error::OutOfRange {
            name: "m",
            value: m as f64,
        })?;
        let mut symbols = Vec::with_capacity(size);
        let mut digits = alloc::vec![0usize; m];
        for _ in 0..size {
            let parts: Vec<&str> = digits.iter().map(|&d| self.symbol(d)).collect();
            symbols.push(format!("({})", parts.join(",")));
            for pos in (0..m).rev() {
                digits[pos] += 1;
                if digits[pos] < self.len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
        Alphabet::new(symbols)
    }
}

fn exact_log2(n: usize) -> Result<usize> {
    if n.is_power_of_two() && n >= 2 {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(Error::InvalidLabels("alphabet size is not a power of two"))
    }
}
