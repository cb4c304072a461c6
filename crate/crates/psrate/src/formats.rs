//! JSON documents for alphabets, distributions, channels and metrics, and
//! the number formatting shared by every output.
//!
//! ```json
//! {"symbols": ["-3", "-1", 1, 3], "labels": ["00", "01", "11", "10"],
//!  "signal_points": [-3, -1, 1, 3], "probs": [0.1, 0.4, 0.4, 0.1]}
//! {"input": {...}, "output": {...}, "rows": [[...], ...]}
//! ```
//!
//! Symbols may be strings or numbers; numbers are stored by their JSON text.
//! Labels may be bit strings or integers. Matrix entries and probabilities
//! may be the strings `"inf"`, `"-inf"` or `"nan"` where a number is not
//! representable in JSON.

use std::path::Path;

use anyhow::{bail, Context, Result};
use psrate_core::{Alphabet, Dmc, Metric, Pmf};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

/// An `f64` that serializes non-finite values as strings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_finite() {
            s.serialize_f64(v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_f64()
                .map(Num)
                .ok_or_else(|| D::Error::custom("number out of range")),
            Value::String(s) => match s.as_str() {
                "inf" | "+inf" | "Infinity" => Ok(Num(f64::INFINITY)),
                "-inf" | "-Infinity" => Ok(Num(f64::NEG_INFINITY)),
                "nan" | "NaN" => Ok(Num(f64::NAN)),
                other => Err(D::Error::custom(format!(
                    "expected a number, got \"{other}\""
                ))),
            },
            other => Err(D::Error::custom(format!("expected a number, got {other}"))),
        }
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

fn plain(v: &[Num]) -> Vec<f64> {
    v.iter().map(|n| n.0).collect()
}

/// A symbol or label given as a string or a number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Token {
    Text(String),
    Number(serde_json::Number),
}

impl Token {
    fn text(&self) -> String {
        match self {
            Token::Text(s) => s.clone(),
            Token::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphabetDoc {
    pub symbols: Vec<Token>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Token>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal_points: Option<Vec<f64>>,
}

impl AlphabetDoc {
    pub fn from_alphabet(a: &Alphabet) -> Self {
        Self {
            symbols: a.symbols().iter().cloned().map(Token::Text).collect(),
            labels: a.labels().map(|_| {
                (0..a.len())
                    .map(|i| Token::Text(a.label_string(i).unwrap_or_default()))
                    .collect()
            }),
            signal_points: a.signal_points().map(<[f64]>::to_vec),
        }
    }

    pub fn to_alphabet(&self) -> Result<Alphabet> {
        let mut a = Alphabet::new(self.symbols.iter().map(Token::text))?;
        if let Some(labels) = &self.labels {
            if labels.iter().all(|l| matches!(l, Token::Text(_))) {
                let strings: Vec<String> = labels.iter().map(Token::text).collect();
                a = a.with_label_strings(&strings)?;
            } else {
                let bits = a.len().trailing_zeros() as usize;
                let ints = labels
                    .iter()
                    .map(|l| match l {
                        Token::Number(n) => n
                            .as_u64()
                            .and_then(|v| u32::try_from(v).ok())
                            .context("labels must be non-negative integers"),
                        Token::Text(_) => bail!("labels must be all strings or all integers"),
                    })
                    .collect::<Result<Vec<u32>>>()?;
                a = a.with_labels(ints, bits)?;
            }
        }
        if let Some(points) = &self.signal_points {
            a = a.with_signal_points(points.clone())?;
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfDoc {
    #[serde(flatten)]
    pub alphabet: AlphabetDoc,
    pub probs: Vec<Num>,
}

impl PmfDoc {
    pub fn from_pmf(p: &Pmf) -> Self {
        Self {
            alphabet: AlphabetDoc::from_alphabet(p.alphabet()),
            probs: nums(p.probs()),
        }
    }

    pub fn to_pmf(&self) -> Result<Pmf> {
        Ok(Pmf::new(self.alphabet.to_alphabet()?, plain(&self.probs))?)
    }
}

/// Shared shape of the channel and metric documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub input: AlphabetDoc,
    pub output: AlphabetDoc,
    pub rows: Vec<Vec<Num>>,
}

impl MatrixDoc {
    pub fn from_dmc(ch: &Dmc) -> Self {
        Self::build(ch.input(), ch.output(), ch.matrix())
    }

    pub fn from_metric(q: &Metric) -> Self {
        Self::build(q.input(), q.output(), q.matrix())
    }

    fn build(input: &Alphabet, output: &Alphabet, flat: &[f64]) -> Self {
        Self {
            input: AlphabetDoc::from_alphabet(input),
            output: AlphabetDoc::from_alphabet(output),
            rows: flat.chunks(output.len()).map(nums).collect(),
        }
    }

    fn parts(&self) -> Result<(Alphabet, Alphabet, Vec<Vec<f64>>)> {
        Ok((
            self.input.to_alphabet().context("input alphabet")?,
            self.output.to_alphabet().context("output alphabet")?,
            self.rows.iter().map(|r| plain(r)).collect(),
        ))
    }

    pub fn to_dmc(&self) -> Result<Dmc> {
        let (i, o, rows) = self.parts()?;
        Ok(Dmc::new(i, o, rows)?)
    }

    pub fn to_metric(&self) -> Result<Metric> {
        let (i, o, rows) = self.parts()?;
        Ok(Metric::new(i, o, rows)?)
    }
}

fn read_doc<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

pub fn read_pmf(path: &Path) -> Result<Pmf> {
    read_doc::<PmfDoc>(path)?.to_pmf()
}

pub fn read_dmc(path: &Path) -> Result<Dmc> {
    read_doc::<MatrixDoc>(path)?.to_dmc()
}

pub fn read_metric(path: &Path) -> Result<Metric> {
    read_doc::<MatrixDoc>(path)?.to_metric()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// CSV cell with 12 significant digits; non-finite values as `inf`, `-inf`
/// and `nan`.
pub fn csv_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}
