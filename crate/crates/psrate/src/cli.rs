//! Command-line definitions and subcommand implementations.
//!
//! Every subcommand renders its complete output to a string; `main` only
//! prints it. Output depends on nothing but the flags.

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use psrate_core::empirical::{Composition, McConfig, McSetup};
use psrate_core::info::entropy;
use psrate_core::metric::{map_bit_quantizers, map_quantizer, metric_switch, power_transform};
use psrate_core::rates::{
    achievable_transmission_rate, binary_hard_decision_rate, bmd_rate, conditional_entropy,
    family_ps_rate, gmi, gmi_at, hard_decision_rate, lm_rate, mutual_information, Family,
    SearchSpec,
};
use psrate_core::simulator::{Mode, Plan, SimConfig, SimResult, TrialRecord};
use psrate_core::typicality::{
    encoding_failure_bound, encoding_failure_probability, lemma_applies, lemma_lower_bound_rate,
    log2_big, typical_set_size, TypicalSpec,
};
use psrate_core::{Alphabet, Pmf};
use serde::Serialize;

use crate::drivers;
use crate::formats::{csv_num, nums, read_pmf, to_json, Num};
use crate::scenario::{
    apply_family, family_name, parse_family, Exponent, InputSpec, MetricKind, Scenario,
    ScenarioSpec,
};

const SCENARIO_HELP: &str = "\
Channel specs: bsc:EPS | mary:M,EPS | awgn-ask:M,SIGMA[,CELLS[,SPAN]] | FILE.json
  awgn-ask uses points -(M-1),...,M-1 with Gray labels; CELLS defaults to 512
  and SPAN (grid margin in noise deviations) to 8.
Input specs: uniform | uniform:N | pmf:P1,P2,... | P1,P2,... | mb:NU | FILE.json
  mb:NU is Maxwell-Boltzmann, P(x) proportional to exp(-NU x^2).
Metric specs: posterior | likelihood | bitwise-posterior | hamming |
  hamming-binary | FILE.json
  hamming and hamming-binary use MAP hard decisions and the exponential
  family e^{s q}; all other metrics use the power family q^s.";

const SWEEP_HELP: &str = "\
Parameters: eps (bsc/mary crossover), sigma (awgn-ask noise), s (metric
exponent), n (block length, simulated), r_c (code rate, simulated).

Rate sweeps (eps, sigma, s) print, after the schema line `# psrate sweep-rates v1`:
  param,value,status,entropy,uncertainty,t_c,divergence_to_uniform,r_ps,r_ps_unclamped,s
Simulation sweeps (n, r_c) print, after `# psrate sweep-sim v1`:
  param,value,status,codebook_size,messages,slots,r_c,r_tx,r_prime,
  encoding_failure_rate,encoding_failure_se,decode_error_rate,decode_error_se,
  message_error_rate,message_error_se,bound_mean,bound_se,t_hat_mean
A point outside the parameter's domain gets status `error`, empty fields and
a diagnostic on standard error. Numbers have 12 significant digits; grid
values are rounded to 12 significant digits before use.";

#[derive(Debug, Parser)]
#[command(
    name = "psrate",
    version,
    about = "Achievable rates of layered probabilistic shaping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transmission rate R_ps and its ingredients for one scenario (JSON).
    #[command(after_help = SCENARIO_HELP)]
    Rates(RatesArgs),
    /// Rates or simulation results over a parameter grid (CSV).
    #[command(after_help = SWEEP_HELP)]
    Sweep(SweepArgs),
    /// Generalized mutual information of the metric family (JSON).
    #[command(after_help = SCENARIO_HELP)]
    Gmi(GmiArgs),
    /// LM-rate for an exponent and a weight vector (JSON).
    #[command(after_help = SCENARIO_HELP)]
    Lm(LmArgs),
    /// Random-coding experiment (JSON summary or per-trial CSV).
    #[command(after_help = SCENARIO_HELP)]
    Simulate(SimulateArgs),
    /// Monte-Carlo estimate of the achievable code rate T_c (JSON).
    #[command(after_help = SCENARIO_HELP)]
    EstimateTc(EstimateArgs),
    /// Letter-typical set sizes (CSV).
    Typical(TypicalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Channel spec.
    #[arg(long)]
    pub channel: String,
    /// Input distribution spec.
    #[arg(long, default_value = "uniform")]
    pub input: String,
    /// Metric spec.
    #[arg(long, default_value = "posterior")]
    pub metric: String,
    /// Use the power-family member q^S.
    #[arg(long, value_name = "S", allow_negative_numbers = true, conflicts_with_all = ["exp_s", "optimize_s"])]
    pub power_s: Option<f64>,
    /// Use the exponential-family member e^{S q}.
    #[arg(
        long,
        value_name = "S",
        allow_negative_numbers = true,
        conflicts_with = "optimize_s"
    )]
    pub exp_s: Option<f64>,
    /// Use the family member maximizing R_ps.
    #[arg(long)]
    pub optimize_s: bool,
    /// Metric family for --optimize-s and exponent sweeps (power or exp).
    #[arg(long)]
    pub family: Option<String>,
}

impl ScenarioArgs {
    pub fn spec(&self) -> Result<ScenarioSpec> {
        let mut spec = ScenarioSpec::new(&self.channel, &self.input, &self.metric)?;
        if let Some(f) = &self.family {
            spec.family = parse_family(f).context("--family")?;
        }
        if let Some(s) = self.power_s {
            check_exponent(s).context("--power-s")?;
            spec.family = Family::Power;
            spec.exponent = Exponent::Fixed(s);
        } else if let Some(s) = self.exp_s {
            check_exponent(s).context("--exp-s")?;
            spec.family = Family::Exp;
            spec.exponent = Exponent::Fixed(s);
        } else if self.optimize_s {
            spec.exponent = Exponent::Optimize;
        }
        Ok(spec)
    }
}

fn check_exponent(s: f64) -> Result<()> {
    ensure!(
        s > 0.0 && s.is_finite(),
        "exponent must be positive and finite, got {s}"
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Eps,
    Sigma,
    S,
    N,
    #[value(name = "r_c")]
    Rc,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub param: SweepParam,
    #[arg(long, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: f64,
    /// Number of grid points, including both ends.
    #[arg(long)]
    pub steps: usize,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Debug, Args)]
pub struct GmiArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Evaluate at this exponent instead of maximizing.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LmArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s: f64,
    /// Weights r(a), comma separated; defaults to 1/P_X(a) on the support
    /// and 1 elsewhere.
    #[arg(long)]
    pub r: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    LayeredPs,
    Classical,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::LayeredPs => Mode::LayeredPs,
            ModeArg::Classical => Mode::Classical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimOutput {
    Json,
    TrialsCsv,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value = "layered-ps")]
    pub mode: ModeArg,
    /// Block length.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    /// Code rate in bits per symbol; defaults to --rtx.
    #[arg(long)]
    pub rc: Option<f64>,
    /// Transmission rate in bits per symbol.
    #[arg(long, default_value_t = 0.25)]
    pub rtx: f64,
    /// Typicality tolerance of the shaping encoder.
    #[arg(long, default_value_t = 0.2)]
    pub eps_typ: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    /// `json` for the summary, `trials-csv` for one row per trial.
    #[arg(long, value_enum, default_value = "json")]
    pub output: SimOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompositionArg {
    Iid,
    Exact,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "iid")]
    pub composition: CompositionArg,
}

#[derive(Debug, Args)]
pub struct TypicalArgs {
    /// Distribution as a comma-separated list or a JSON file.
    #[arg(long)]
    pub pmf: String,
    /// Block lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Tolerances, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub eps: Vec<f64>,
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Rates(a) => cmd_rates(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Gmi(a) => cmd_gmi(a),
        Command::Lm(a) => cmd_lm(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::EstimateTc(a) => cmd_estimate_tc(a),
        Command::Typical(a) => cmd_typical(a),
    }
}

#[derive(Debug, Serialize)]
struct ScenarioOut {
    channel: String,
    input: String,
    metric: String,
    family: &'static str,
    s: Option<Num>,
}

fn scenario_out(spec: &ScenarioSpec, sc: &Scenario) -> ScenarioOut {
    ScenarioOut {
        channel: spec.channel.to_string(),
        input: spec.input.to_string(),
        metric: spec.metric.to_string(),
        family: family_name(sc.family),
        s: sc.s.map(Num),
    }
}

#[derive(Debug, Serialize)]
struct Perspectives {
    uncertainty: Num,
    large_code: Num,
    output: Num,
}

/// The rate quantities shared by `rates` and rate sweeps.
#[derive(Debug, Serialize)]
pub struct RateSummary {
    entropy: Num,
    conditional_entropy: Num,
    mutual_information: Num,
    uncertainty: Num,
    t_c: Num,
    divergence_to_uniform: Num,
    r_ps: Num,
    r_ps_unclamped: Num,
    perspectives: Perspectives,
    clamped: bool,
}

pub fn rate_summary(sc: &Scenario) -> Result<RateSummary> {
    let r = achievable_transmission_rate(&sc.p_x, &sc.ch, &sc.q)?;
    Ok(RateSummary {
        entropy: Num(r.entropy),
        conditional_entropy: Num(conditional_entropy(&sc.p_x, &sc.ch)?),
        mutual_information: Num(mutual_information(&sc.p_x, &sc.ch)?),
        uncertainty: Num(r.uncertainty),
        t_c: Num(r.t_c),
        divergence_to_uniform: Num(r.divergence_to_uniform),
        r_ps: Num(r.r_ps),
        r_ps_unclamped: Num(r.r_ps_unclamped),
        perspectives: Perspectives {
            uncertainty: Num(r.perspectives[0]),
            large_code: Num(r.perspectives[1]),
            output: Num(r.perspectives[2]),
        },
        clamped: r.clamped,
    })
}

#[derive(Debug, Serialize)]
struct BmdOut {
    r_bmd: Num,
    r_bmd_unclamped: Num,
    abc_rate: Num,
    level_conditional_entropies: Vec<Num>,
    independent_sum: Option<Num>,
}

#[derive(Debug, Serialize)]
struct HardDecisionOut {
    rate: Num,
    rate_unclamped: Num,
    eps: Num,
    s: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_eps: Option<Vec<Num>>,
}

#[derive(Debug, Serialize)]
struct RatesOut {
    scenario: ScenarioOut,
    #[serde(flatten)]
    rates: RateSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    bmd: Option<BmdOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hard_decision: Option<HardDecisionOut>,
}

fn cmd_rates(a: &RatesArgs) -> Result<String> {
    let spec = a.scenario.spec()?;
    let sc = spec.build()?;
    let rates = rate_summary(&sc)?;
    let bmd = match spec.metric {
        MetricKind::BitwisePosterior => {
            let b = bmd_rate(&sc.p_x, &sc.ch)?;
            Some(BmdOut {
                r_bmd: Num(b.r_bmd.rate),
                r_bmd_unclamped: Num(b.r_bmd.unclamped),
                abc_rate: Num(b.abc_rate),
                level_conditional_entropies: nums(&b.level_conditional_entropies),
                independent_sum: b.independent_sum.map(Num),
            })
        }
        _ => None,
    };
    let hard_decision = match spec.metric {
        MetricKind::Hamming => {
            let h = hard_decision_rate(&sc.p_x, &sc.ch, &map_quantizer(&sc.p_x, &sc.ch)?)?;
            Some(HardDecisionOut {
                rate: Num(h.rate.rate),
                rate_unclamped: Num(h.rate.unclamped),
                eps: Num(h.eps),
                s: Num(h.s),
                level_eps: None,
            })
        }
        MetricKind::HammingBinary => {
            let h =
                binary_hard_decision_rate(&sc.p_x, &sc.ch, &map_bit_quantizers(&sc.p_x, &sc.ch)?)?;
            Some(HardDecisionOut {
                rate: Num(h.rate.rate),
                rate_unclamped: Num(h.rate.unclamped),
                eps: Num(h.eps),
                s: Num(h.s),
                level_eps: Some(nums(&h.level_eps)),
            })
        }
        _ => None,
    };
    to_json(&RatesOut {
        scenario: scenario_out(&spec, &sc),
        rates,
        bmd,
        hard_decision,
    })
}

#[derive(Debug, Serialize)]
struct GmiOut {
    scenario: ScenarioOut,
    gmi: Num,
    s: Num,
    /// R_ps of the family member at `s`.
    r_ps_at_s: Num,
    /// R_ps of the switched metric at `s`; equals the GMI.
    r_ps_switched: Num,
}

fn cmd_gmi(a: &GmiArgs) -> Result<String> {
    let spec = a.scenario.spec()?;
    ensure!(
        spec.exponent == Exponent::None,
        "gmi searches the exponent itself; use --s to fix it"
    );
    let sc = spec.build()?;
    let (value, s) = match a.s {
        Some(s) => {
            ensure!(
                s >= 0.0 && s.is_finite(),
                "--s: exponent must be finite and non-negative, got {s}"
            );
            (gmi_at(&sc.p_x, &sc.ch, &sc.base, sc.family, s)?, s)
        }
        None => {
            let o = gmi(&sc.p_x, &sc.ch, &sc.base, sc.family, &SearchSpec::default())?;
            (o.value, o.s)
        }
    };
    let (r_ps_at_s, switched) = if s > 0.0 {
        let unit = apply_family(&sc.base, sc.family, 1.0)?;
        let switched = power_transform(&metric_switch(&unit, &sc.p_x, s)?, s)?;
        (
            family_ps_rate(&sc.p_x, &sc.ch, &sc.base, sc.family, s)?,
            achievable_transmission_rate(&sc.p_x, &sc.ch, &switched)?.r_ps_unclamped,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    to_json(&GmiOut {
        scenario: scenario_out(&spec, &sc),
        gmi: Num(value),
        s: Num(s),
        r_ps_at_s: Num(r_ps_at_s),
        r_ps_switched: Num(switched),
    })
}

#[derive(Debug, Serialize)]
struct LmOut {
    scenario: ScenarioOut,
    s: Num,
    r: Vec<Num>,
    lm_rate: Num,
    lm_rate_unclamped: Num,
    r_ps: Num,
}

fn cmd_lm(a: &LmArgs) -> Result<String> {
    let spec = a.scenario.spec()?;
    let sc = spec.build()?;
    let r: Vec<f64> = match &a.r {
        Some(list) => list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .with_context(|| format!("--r: `{v}` is not a number"))
            })
            .collect::<Result<_>>()?,
        None => sc
            .p_x
            .probs()
            .iter()
            .map(|&p| if p > 0.0 { 1.0 / p } else { 1.0 })
            .collect(),
    };
    let lm = lm_rate(&sc.p_x, &sc.ch, &sc.q, a.s, &r).context("--s/--r")?;
    let rates = achievable_transmission_rate(&sc.p_x, &sc.ch, &sc.q)?;
    to_json(&LmOut {
        scenario: scenario_out(&spec, &sc),
        s: Num(a.s),
        r: nums(&r),
        lm_rate: Num(lm.rate),
        lm_rate_unclamped: Num(lm.unclamped),
        r_ps: Num(rates.r_ps),
    })
}

/// Upper estimate of the number of letter compositions of length `n`.
fn composition_count(n: usize, k: usize) -> f64 {
    (1..k).map(|i| (n + i) as f64 / i as f64).product()
}

/// Largest composition count for which reference bounds are enumerated.
const MAX_REFERENCE_COMPOSITIONS: f64 = 1e7;

pub fn sim_config(sc: &Scenario, sim: &SimArgs) -> SimConfig {
    SimConfig {
        p_x: sc.p_x.clone(),
        ch: sc.ch.clone(),
        q: sc.q.clone(),
        n: sim.n,
        r_c: sim.rc.unwrap_or(sim.rtx),
        r_tx: sim.rtx,
        eps_typ: sim.eps_typ,
        trials: sim.trials,
        seed: sim.seed,
        mode: sim.mode.into(),
    }
}

fn sim_flag_context(e: psrate_core::Error) -> anyhow::Error {
    let flag = match &e {
        psrate_core::Error::OutOfRange { name, .. } => match *name {
            "n" => "--n",
            "trials" => "--trials",
            "r_c" => "--rc",
            "r_tx" => "--rtx",
            "eps" => "--eps-typ",
            _ => "simulation parameters",
        },
        psrate_core::Error::Infeasible(_) => "--n/--rc/--rtx",
        _ => "simulation parameters",
    };
    anyhow::Error::new(e).context(flag)
}

#[derive(Debug, Serialize)]
struct FrequencyOut {
    count: usize,
    total: usize,
    rate: Num,
    std_error: Num,
}

impl From<psrate_core::simulator::Frequency> for FrequencyOut {
    fn from(f: psrate_core::simulator::Frequency) -> Self {
        Self {
            count: f.count,
            total: f.total,
            rate: Num(f.rate),
            std_error: Num(f.std_error),
        }
    }
}

#[derive(Debug, Serialize)]
struct MeanOut {
    mean: Num,
    std_dev: Num,
    std_error: Num,
    min: Num,
    max: Num,
}

impl From<psrate_core::simulator::MeanEstimate> for MeanOut {
    fn from(m: psrate_core::simulator::MeanEstimate) -> Self {
        Self {
            mean: Num(m.mean),
            std_dev: Num(m.std_dev),
            std_error: Num(m.std_error),
            min: Num(m.min),
            max: Num(m.max),
        }
    }
}

#[derive(Debug, Serialize)]
struct ReferenceOut {
    t_c: Num,
    r_ps: Num,
    /// Doubly exponential bound on the encoding failure probability at the
    /// realized shaping rate; null when not applicable or too costly.
    encoding_failure_bound: Option<Num>,
    /// Exact probability that no slot of a message holds a typical word.
    encoding_failure_probability: Option<Num>,
}

#[derive(Debug, Serialize)]
struct SimOut {
    scenario: ScenarioOut,
    mode: &'static str,
    n: usize,
    trials: usize,
    seed: u64,
    eps_typ: Num,
    codebook_size: usize,
    messages: usize,
    slots: usize,
    r_c: Num,
    r_tx: Num,
    r_prime: Num,
    encoding_failure: FrequencyOut,
    decode_error: FrequencyOut,
    message_error: FrequencyOut,
    bound_2exp: MeanOut,
    t_hat: MeanOut,
    reference: ReferenceOut,
}

fn reference(sc: &Scenario, plan: &Plan) -> Result<ReferenceOut> {
    let cfg = plan.config();
    let rates = achievable_transmission_rate(&sc.p_x, &sc.ch, &sc.q)?;
    let (bound, exact) = if cfg.mode == Mode::LayeredPs
        && composition_count(cfg.n, cfg.p_x.len()) <= MAX_REFERENCE_COMPOSITIONS
    {
        let spec = TypicalSpec::new(cfg.p_x.clone(), cfg.n, cfg.eps_typ)?;
        (
            Some(Num(encoding_failure_bound(&spec, plan.realized_r_prime())?)),
            Some(Num(encoding_failure_probability(&spec, plan.slots as u64))),
        )
    } else {
        (None, None)
    };
    Ok(ReferenceOut {
        t_c: Num(rates.t_c),
        r_ps: Num(rates.r_ps),
        encoding_failure_bound: bound,
        encoding_failure_probability: exact,
    })
}

fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("# psrate trials v1\n");
    out.push_str(
        "trial,message,index,encoded,decoded,maximizers,decode_error,message_error,t_hat,bound\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.trial,
            r.message,
            r.index,
            u8::from(r.encoded),
            r.decoded,
            r.maximizers,
            u8::from(r.decode_error),
            u8::from(r.message_error),
            csv_num(r.t_hat),
            csv_num(r.bound)
        ));
    }
    out
}

pub fn run_simulation(sc: &Scenario, sim: &SimArgs) -> Result<(Plan, SimResult, Vec<TrialRecord>)> {
    let plan = Plan::new(sim_config(sc, sim)).map_err(sim_flag_context)?;
    let (result, records) = drivers::simulate(&plan);
    Ok((plan, result, records))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<String> {
    let spec = a.scenario.spec()?;
    let sc = spec.build()?;
    let (plan, res, records) = run_simulation(&sc, &a.sim)?;
    if a.output == SimOutput::TrialsCsv {
        return Ok(trials_csv(&records));
    }
    to_json(&SimOut {
        scenario: scenario_out(&spec, &sc),
        mode: res.mode.as_str(),
        n: res.n,
        trials: res.trials,
        seed: a.sim.seed,
        eps_typ: Num(a.sim.eps_typ),
        codebook_size: res.codebook_size,
        messages: res.messages,
        slots: res.slots,
        r_c: Num(res.r_c),
        r_tx: Num(res.r_tx),
        r_prime: Num(res.r_prime),
        encoding_failure: res.encoding_failure.into(),
        decode_error: res.decode_error.into(),
        message_error: res.message_error.into(),
        bound_2exp: res.bound_2exp.into(),
        t_hat: res.t_hat.into(),
        reference: reference(&sc, &plan)?,
    })
}

#[derive(Debug, Serialize)]
struct EstimateOut {
    scenario: ScenarioOut,
    n: usize,
    trials: usize,
    seed: u64,
    composition: &'static str,
    mean: Num,
    std_dev: Num,
    std_error: Num,
    t_c_closed_form: Num,
    z_score: Num,
}

fn cmd_estimate_tc(a: &EstimateArgs) -> Result<String> {
    let spec = a.scenario.spec()?;
    let sc = spec.build()?;
    ensure!(a.n >= 1, "--n: block length must be at least 1");
    ensure!(a.trials >= 1, "--trials: at least one trial is required");
    let composition = match a.composition {
        CompositionArg::Iid => Composition::Iid,
        CompositionArg::Exact => Composition::Exact,
    };
    let cfg = McConfig {
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        composition,
    };
    let setup = McSetup::new(&sc.p_x, &sc.ch, &sc.q, cfg)?;
    let est = drivers::monte_carlo(&setup);
    to_json(&EstimateOut {
        scenario: scenario_out(&spec, &sc),
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        composition: match a.composition {
            CompositionArg::Iid => "iid",
            CompositionArg::Exact => "exact",
        },
        mean: Num(est.mean),
        std_dev: Num(est.std_dev),
        std_error: Num(est.std_error),
        t_c_closed_form: Num(est.t_c_closed_form),
        z_score: Num(est.z_score),
    })
}

fn parse_typical_pmf(s: &str) -> Result<Pmf> {
    match s.parse::<InputSpec>()? {
        InputSpec::List(v) => Ok(Pmf::new(Alphabet::indexed(v.len())?, v)?),
        InputSpec::File(path) => read_pmf(&path),
        other => bail!("expected a probability list or a JSON file, got `{other}`"),
    }
}

fn cmd_typical(a: &TypicalArgs) -> Result<String> {
    let p = parse_typical_pmf(&a.pmf).context("--pmf")?;
    let h = entropy(&p);
    let mut out = String::from("# psrate typical v1\n");
    out.push_str("n,eps,size,log2_size,rate,entropy,lemma_lower_bound,lemma_applies\n");
    for &n in &a.n {
        for &eps in &a.eps {
            let spec = TypicalSpec::new(p.clone(), n, eps)
                .with_context(|| format!("--n {n} / --eps {eps}"))?;
            let size = typical_set_size(&spec);
            let log2_size = if size == 0u32.into() {
                f64::NEG_INFINITY
            } else {
                log2_big(&size)
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                n,
                csv_num(eps),
                size,
                csv_num(log2_size),
                csv_num(log2_size / n as f64),
                csv_num(h),
                csv_num(lemma_lower_bound_rate(&spec)),
                u8::from(lemma_applies(&spec))
            ));
        }
    }
    Ok(out)
}

/// Grid value `i` of `steps`, rounded to 12 significant digits.
pub fn grid_value(start: f64, stop: f64, steps: usize, i: usize) -> f64 {
    let v = if steps == 1 {
        start
    } else {
        start + (stop - start) * i as f64 / (steps - 1) as f64
    };
    csv_num(v).parse().unwrap_or(v)
}

fn sweep_rates_row(a: &SweepArgs, value: f64) -> Result<String> {
    let mut spec = a.scenario.spec()?;
    match a.param {
        SweepParam::Eps | SweepParam::Sigma => {
            let name = if a.param == SweepParam::Eps {
                "eps"
            } else {
                "sigma"
            };
            spec.channel = spec.channel.with_noise(name, value)?;
        }
        SweepParam::S => {
            check_exponent(value)?;
            spec.exponent = Exponent::Fixed(value);
        }
        SweepParam::N | SweepParam::Rc => unreachable!(),
    }
    let sc = spec.build()?;
    let r = rate_summary(&sc)?;
    let cells = [
        r.entropy,
        r.uncertainty,
        r.t_c,
        r.divergence_to_uniform,
        r.r_ps,
        r.r_ps_unclamped,
    ];
    let mut row: Vec<String> = cells.iter().map(|c| csv_num(c.0)).collect();
    row.push(sc.s.map(csv_num).unwrap_or_default());
    Ok(row.join(","))
}

fn sweep_sim_row(a: &SweepArgs, sc: &Scenario, value: f64) -> Result<String> {
    let mut sim = a.sim.clone();
    match a.param {
        SweepParam::N => {
            let n = value.round();
            ensure!(
                n >= 1.0 && (n - value).abs() < 1e-9,
                "n = {value} is not a positive integer"
            );
            sim.n = n as usize;
        }
        SweepParam::Rc => sim.rc = Some(value),
        _ => unreachable!(),
    }
    let (_, r, _) = run_simulation(sc, &sim)?;
    let cells = [
        r.r_c,
        r.r_tx,
        r.r_prime,
        r.encoding_failure.rate,
        r.encoding_failure.std_error,
        r.decode_error.rate,
        r.decode_error.std_error,
        r.message_error.rate,
        r.message_error.std_error,
        r.bound_2exp.mean,
        r.bound_2exp.std_error,
        r.t_hat.mean,
    ];
    let mut row = vec![
        r.codebook_size.to_string(),
        r.messages.to_string(),
        r.slots.to_string(),
    ];
    row.extend(cells.iter().map(|&c| csv_num(c)));
    Ok(row.join(","))
}

const RATE_COLUMNS: usize = 7;
const SIM_COLUMNS: usize = 15;

fn cmd_sweep(a: &SweepArgs) -> Result<String> {
    ensure!(a.steps >= 1, "--steps: at least one grid point is required");
    ensure!(
        a.start.is_finite() && a.stop.is_finite(),
        "--start/--stop: range bounds must be finite"
    );
    let simulated = matches!(a.param, SweepParam::N | SweepParam::Rc);
    let param = match a.param {
        SweepParam::Eps => "eps",
        SweepParam::Sigma => "sigma",
        SweepParam::S => "s",
        SweepParam::N => "n",
        SweepParam::Rc => "r_c",
    };
    // Validate the fixed scenario up front so flag errors are not reported
    // as per-point failures.
    let spec = a.scenario.spec()?;
    if !simulated {
        let probe = match a.param {
            SweepParam::Eps => "eps",
            SweepParam::Sigma => "sigma",
            _ => "",
        };
        if !probe.is_empty() {
            spec.channel.with_noise(probe, a.start).context("--param")?;
        }
    }
    let base = if simulated { Some(spec.build()?) } else { None };

    let mut out = String::new();
    if simulated {
        out.push_str("# psrate sweep-sim v1\n");
        out.push_str(
            "param,value,status,codebook_size,messages,slots,r_c,r_tx,r_prime,encoding_failure_rate,\
encoding_failure_se,decode_error_rate,decode_error_se,message_error_rate,message_error_se,bound_mean,bound_se,t_hat_mean\n",
        );
    } else {
        out.push_str("# psrate sweep-rates v1\n");
        out.push_str("param,value,status,entropy,uncertainty,t_c,divergence_to_uniform,r_ps,r_ps_unclamped,s\n");
    }
    for i in 0..a.steps {
        let value = grid_value(a.start, a.stop, a.steps, i);
        let row = match &base {
            Some(sc) => sweep_sim_row(a, sc, value),
            None => sweep_rates_row(a, value),
        };
        let body = match row {
            Ok(cells) => format!("ok,{cells}"),
            Err(e) => {
                eprintln!("warning: {param} = {value}: {e:#}");
                let empty = if simulated { SIM_COLUMNS } else { RATE_COLUMNS };
                format!("error{}", ",".repeat(empty))
            }
        };
        out.push_str(&format!("{param},{},{body}\n", csv_num(value)));
    }
    Ok(out)
}
