//! Channel, input and metric specifications as accepted on the command line.
//!
//! Channels:
//!   `bsc:EPS`, `mary:M,EPS`, `awgn-ask:M,SIGMA[,CELLS[,SPAN]]` or a JSON file.
//!   `awgn-ask` uses the points `-(M-1), ..., -1, 1, ..., M-1` with binary
//!   reflected Gray labels and a uniform output grid of `CELLS` cells
//!   (default 512) spanning `SPAN` noise deviations (default 8) beyond the
//!   outermost points.
//! Inputs:
//!   `uniform`, `uniform:N`, `pmf:P1,P2,...`, a bare list `P1,P2,...`,
//!   `mb:NU` (Maxwell-Boltzmann, `P(x) ~ exp(-NU x^2)` over the channel's
//!   signal points) or a JSON file.
//! Metrics:
//!   `posterior`, `likelihood`, `bitwise-posterior`, `hamming` (MAP hard
//!   decision), `hamming-binary` (per-bit MAP hard decisions) or a JSON file.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, ensure, Context, Result};
use psrate_core::channel::{awgn_quantized, bsc, mary_symmetric, GridSpec};
use psrate_core::math::exp;
use psrate_core::metric::{
    binary_hamming_metric, bitwise_posterior_metric, exp_transform, hard_decision_metric,
    likelihood_metric, map_bit_quantizers, map_quantizer, posterior_metric, power_transform,
    PosteriorScaling,
};
use psrate_core::rates::{optimize_ps_rate, Family, SearchSpec};
use psrate_core::{Alphabet, Dmc, Metric, Pmf};

use crate::formats;

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| anyhow!("{what}: `{s}` is not a number"))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| anyhow!("{what}: `{s}` is not a non-negative integer"))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|v| parse_f64(v, "list entry")).collect()
}

/// Joins finite values with their shortest round-trip representation.
fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Bsc(f64),
    Mary {
        m: usize,
        eps: f64,
    },
    AwgnAsk {
        m: usize,
        sigma: f64,
        grid: GridSpec,
    },
    File(PathBuf),
}

impl FromStr for ChannelSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some((name, args)) = s.split_once(':') else {
            return Ok(Self::File(PathBuf::from(s)));
        };
        let parts: Vec<&str> = args.split(',').collect();
        match name {
            "bsc" => {
                ensure!(parts.len() == 1, "bsc takes one argument: bsc:EPS");
                Ok(Self::Bsc(parse_f64(parts[0], "bsc crossover")?))
            }
            "mary" => {
                ensure!(parts.len() == 2, "mary takes two arguments: mary:M,EPS");
                Ok(Self::Mary {
                    m: parse_usize(parts[0], "mary size")?,
                    eps: parse_f64(parts[1], "mary error probability")?,
                })
            }
            "awgn-ask" => {
                ensure!(
                    (2..=4).contains(&parts.len()),
                    "awgn-ask takes two to four arguments: awgn-ask:M,SIGMA[,CELLS[,SPAN]]"
                );
                let mut grid = GridSpec::default();
                if let Some(c) = parts.get(2) {
                    grid.cells = parse_usize(c, "awgn-ask cells")?;
                }
                if let Some(k) = parts.get(3) {
                    grid.span_sigmas = parse_f64(k, "awgn-ask span")?;
                }
                Ok(Self::AwgnAsk {
                    m: parse_usize(parts[0], "awgn-ask size")?,
                    sigma: parse_f64(parts[1], "awgn-ask sigma")?,
                    grid,
                })
            }
            _ => Ok(Self::File(PathBuf::from(s))),
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bsc(eps) => write!(f, "bsc:{eps}"),
            Self::Mary { m, eps } => write!(f, "mary:{m},{eps}"),
            Self::AwgnAsk { m, sigma, grid } => {
                write!(
                    f,
                    "awgn-ask:{m},{sigma},{},{}",
                    grid.cells, grid.span_sigmas
                )
            }
            Self::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// `M`-ASK points `2i - (M-1)` with Gray labels.
pub fn ask_alphabet(m: usize) -> Result<Alphabet> {
    ensure!(m >= 2, "ASK size must be at least 2");
    let points: Vec<f64> = (0..m).map(|i| (2 * i) as f64 - (m - 1) as f64).collect();
    let a = Alphabet::new(points.iter().map(|p| p.to_string()))?
        .with_gray_labels()
        .context("ASK size must be a power of two")?;
    Ok(a.with_signal_points(points)?)
}

impl ChannelSpec {
    pub fn build(&self) -> Result<Dmc> {
        Ok(match self {
            Self::Bsc(eps) => bsc(*eps)?,
            Self::Mary { m, eps } => mary_symmetric(*m, *eps)?,
            Self::AwgnAsk { m, sigma, grid } => awgn_quantized(&ask_alphabet(*m)?, *sigma, grid)?,
            Self::File(path) => formats::read_dmc(path)?,
        })
    }

    /// The same channel with its noise parameter replaced (`eps` for the
    /// discrete channels, `sigma` for AWGN).
    pub fn with_noise(&self, param: &str, value: f64) -> Result<Self> {
        Ok(match (self, param) {
            (Self::Bsc(_), "eps") => Self::Bsc(value),
            (Self::Mary { m, .. }, "eps") => Self::Mary { m: *m, eps: value },
            (Self::AwgnAsk { m, grid, .. }, "sigma") => Self::AwgnAsk {
                m: *m,
                sigma: value,
                grid: *grid,
            },
            _ => bail!("channel `{self}` has no parameter `{param}`"),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Uniform(Option<usize>),
    List(Vec<f64>),
    MaxwellBoltzmann(f64),
    File(PathBuf),
}

impl FromStr for InputSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(Self::Uniform(None));
        }
        if let Some((name, args)) = s.split_once(':') {
            match name {
                "uniform" => return Ok(Self::Uniform(Some(parse_usize(args, "uniform size")?))),
                "pmf" => return Ok(Self::List(parse_list(args)?)),
                "mb" => return Ok(Self::MaxwellBoltzmann(parse_f64(args, "mb parameter")?)),
                _ => {}
            }
        }
        if s.starts_with(|c: char| c.is_ascii_digit() || c == '.') && !s.ends_with(".json") {
            return Ok(Self::List(parse_list(s)?));
        }
        Ok(Self::File(PathBuf::from(s)))
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform(None) => write!(f, "uniform"),
            Self::Uniform(Some(n)) => write!(f, "uniform:{n}"),
            Self::List(v) => write!(f, "pmf:{}", join(v)),
            Self::MaxwellBoltzmann(nu) => write!(f, "mb:{nu}"),
            Self::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl InputSpec {
    /// Builds the distribution on the channel's input alphabet.
    pub fn build(&self, input: &Alphabet) -> Result<Pmf> {
        let n = input.len();
        Ok(match self {
            Self::Uniform(size) => {
                if let Some(size) = size {
                    ensure!(
                        *size == n,
                        "uniform:{size} does not match the channel input size {n}"
                    );
                }
                Pmf::uniform(input.clone())?
            }
            Self::List(v) => {
                ensure!(
                    v.len() == n,
                    "{} probabilities given for {n} input symbols",
                    v.len()
                );
                Pmf::new(input.clone(), v.clone())?
            }
            Self::MaxwellBoltzmann(nu) => {
                ensure!(
                    nu.is_finite() && *nu >= 0.0,
                    "mb parameter must be finite and non-negative"
                );
                let points = input
                    .signal_points()
                    .context("mb needs a channel input with signal points")?;
                let w: Vec<f64> = points.iter().map(|x| exp(-nu * x * x)).collect();
                Pmf::from_weights(input.clone(), &w)?
            }
            Self::File(path) => formats::read_pmf(path)?
                .rebind(input.clone())
                .context("input symbols differ from the channel input")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricKind {
    Posterior,
    Likelihood,
    BitwisePosterior,
    Hamming,
    HammingBinary,
    File(PathBuf),
}

impl FromStr for MetricKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "posterior" => Self::Posterior,
            "likelihood" => Self::Likelihood,
            "bitwise-posterior" => Self::BitwisePosterior,
            "hamming" => Self::Hamming,
            "hamming-binary" => Self::HammingBinary,
            _ => Self::File(PathBuf::from(s)),
        })
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Posterior => write!(f, "posterior"),
            Self::Likelihood => write!(f, "likelihood"),
            Self::BitwisePosterior => write!(f, "bitwise-posterior"),
            Self::Hamming => write!(f, "hamming"),
            Self::HammingBinary => write!(f, "hamming-binary"),
            Self::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl MetricKind {
    pub fn build(&self, p_x: &Pmf, ch: &Dmc) -> Result<Metric> {
        Ok(match self {
            Self::Posterior => posterior_metric(p_x, ch, PosteriorScaling::Posterior)?,
            Self::Likelihood => likelihood_metric(ch)?,
            Self::BitwisePosterior => bitwise_posterior_metric(p_x, ch)?,
            Self::Hamming => hard_decision_metric(&map_quantizer(p_x, ch)?, ch.input())?,
            Self::HammingBinary => {
                binary_hamming_metric(&map_bit_quantizers(p_x, ch)?, ch.input())?
            }
            Self::File(path) => formats::read_metric(path)?,
        })
    }

    /// Exponential family for `{0,1}`-valued and counting metrics, power
    /// family otherwise.
    pub fn default_family(&self) -> Family {
        match self {
            Self::Hamming | Self::HammingBinary => Family::Exp,
            _ => Family::Power,
        }
    }
}

/// How the base metric is turned into the decoding metric.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Exponent {
    #[default]
    None,
    /// A fixed member of the metric's family.
    Fixed(f64),
    /// The member maximizing the transmission rate.
    Optimize,
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Power => "power",
        Family::Exp => "exp",
    }
}

pub fn parse_family(s: &str) -> Result<Family> {
    match s {
        "power" => Ok(Family::Power),
        "exp" => Ok(Family::Exp),
        _ => bail!("unknown family `{s}` (expected power or exp)"),
    }
}

/// Command-line description of one (input, channel, metric) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub channel: ChannelSpec,
    pub input: InputSpec,
    pub metric: MetricKind,
    pub family: Family,
    pub exponent: Exponent,
}

/// A built triple. `q` is the decoding metric after any exponent, `base`
/// the metric before it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub p_x: Pmf,
    pub ch: Dmc,
    pub base: Metric,
    pub q: Metric,
    pub family: Family,
    /// Exponent applied to `base`, if any.
    pub s: Option<f64>,
}

pub fn apply_family(q: &Metric, family: Family, s: f64) -> Result<Metric> {
    Ok(match family {
        Family::Power => power_transform(q, s)?,
        Family::Exp => exp_transform(q, s)?,
    })
}

impl ScenarioSpec {
    pub fn new(channel: &str, input: &str, metric: &str) -> Result<Self> {
        let metric: MetricKind = metric.parse().context("--metric")?;
        Ok(Self {
            channel: channel.parse().context("--channel")?,
            input: input.parse().context("--input")?,
            family: metric.default_family(),
            metric,
            exponent: Exponent::None,
        })
    }

    pub fn build(&self) -> Result<Scenario> {
        let ch = self
            .channel
            .build()
            .with_context(|| format!("--channel {}", self.channel))?;
        let p_x = self
            .input
            .build(ch.input())
            .with_context(|| format!("--input {}", self.input))?;
        let base = self
            .metric
            .build(&p_x, &ch)
            .with_context(|| format!("--metric {}", self.metric))?;
        let (q, s) = match self.exponent {
            Exponent::None => (base.clone(), None),
            Exponent::Fixed(s) => (
                apply_family(&base, self.family, s)
                    .with_context(|| format!("metric exponent {s}"))?,
                Some(s),
            ),
            Exponent::Optimize => {
                let opt = optimize_ps_rate(&p_x, &ch, &base, self.family, &SearchSpec::default())
                    .context("--optimize-s")?;
                if opt.s > 0.0 {
                    (apply_family(&base, self.family, opt.s)?, Some(opt.s))
                } else {
                    (base.clone(), None)
                }
            }
        };
        Ok(Scenario {
            p_x,
            ch,
            base,
            q,
            family: self.family,
            s,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_shorthand() {
        assert_eq!(
            "bsc:0.11".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Bsc(0.11)
        );
        assert_eq!(
            "mary:4,0.1".parse::<ChannelSpec>().unwrap(),
            ChannelSpec::Mary { m: 4, eps: 0.1 }
        );
        assert!("bsc:x".parse::<ChannelSpec>().is_err());
        assert!("mary:4".parse::<ChannelSpec>().is_err());
        assert_eq!(
            "0.7,0.3".parse::<InputSpec>().unwrap(),
            InputSpec::List(vec![0.7, 0.3])
        );
        assert_eq!(
            "uniform:4".parse::<InputSpec>().unwrap(),
            InputSpec::Uniform(Some(4))
        );
        assert_eq!(
            "p.json".parse::<InputSpec>().unwrap(),
            InputSpec::File(PathBuf::from("p.json"))
        );
    }

    #[test]
    fn display_round_trips() {
        for s in ["bsc:0.11", "mary:4,0.1", "awgn-ask:4,0.5,256,7"] {
            let c: ChannelSpec = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        for s in ["uniform", "uniform:2", "pmf:0.7,0.3", "mb:0.1"] {
            let i: InputSpec = s.parse().unwrap();
            assert_eq!(i.to_string(), s);
        }
    }

    #[test]
    fn ask_points_and_gray_labels() {
        let a = ask_alphabet(4).unwrap();
        assert_eq!(a.signal_points().unwrap(), [-3.0, -1.0, 1.0, 3.0]);
        let labels: Vec<String> = (0..4).map(|i| a.label_string(i).unwrap()).collect();
        assert_eq!(labels, ["00", "01", "11", "10"]);
        assert!(ask_alphabet(3).is_err());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let spec = ScenarioSpec::new("bsc:0.1", "uniform:4", "posterior").unwrap();
        let err = format!("{:#}", spec.build().unwrap_err());
        assert!(err.contains("--input"), "{err}");
    }
}
