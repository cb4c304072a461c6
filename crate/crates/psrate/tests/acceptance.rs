//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::Command;
use std::time::Instant;

use psrate::drivers;
use psrate::scenario::ask_alphabet;
use psrate_core::channel::{awgn_quantized, bit_marginal, bsc, mary_symmetric, GridSpec};
use psrate_core::metric::{
    bit_metric_product, exp_transform, hard_decision_metric, likelihood_metric, map_quantizer,
    metric_switch, posterior_metric, power_transform, PosteriorScaling,
};
use psrate_core::rates::{
    achievable_transmission_rate, bmd_rate, gmi, hard_decision_rate, lm_rate, uncertainty, Family,
    SearchSpec,
};
use psrate_core::simulator::{Mode, Plan, SimConfig, TrialRecord};
use psrate_core::typicality::{
    encoding_failure_bound, rate_of_typical_set, typical_set_size, TypicalSpec,
};
use psrate_core::{Alphabet, Dmc, Metric, Pmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn log2(x: f64) -> f64 {
    x.log2()
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * log2(p) - (1.0 - p) * log2(1.0 - p)
    }
}

fn entropy_of(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * log2(v)).sum()
}

fn random_probs(rng: &mut ChaCha8Rng, n: usize, lo: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(lo..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Full-support input, a channel with arbitrary zeros allowed and a positive
/// metric, with `2 <= |X| <= 8` and `2 <= |Y| <= 16`.
fn random_triples(seed: u64, count: usize) -> Vec<(Pmf, Dmc, Metric)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let nx = rng.random_range(2..=8);
            let ny = rng.random_range(2..=16);
            let (ax, ay) = (
                Alphabet::indexed(nx).unwrap(),
                Alphabet::indexed(ny).unwrap(),
            );
            let p = Pmf::new(ax.clone(), random_probs(&mut rng, nx, 0.01)).unwrap();
            let rows = (0..nx).map(|_| random_probs(&mut rng, ny, 0.0)).collect();
            let ch = Dmc::new(ax.clone(), ay.clone(), rows).unwrap();
            let qrows = (0..nx)
                .map(|_| (0..ny).map(|_| rng.random_range(0.01..10.0)).collect())
                .collect();
            let q = Metric::new(ax, ay, qrows).unwrap();
            (p, ch, q)
        })
        .collect()
}

/// `H(X|Y)` and `I(X;Y)` straight from the joint distribution.
fn joint_entropies(p: &Pmf, ch: &Dmc) -> (f64, f64) {
    let (nx, ny) = (ch.input_len(), ch.output_len());
    let joint: Vec<f64> = (0..nx * ny)
        .map(|i| p.prob(i / ny) * ch.prob(i / ny, i % ny))
        .collect();
    let py: Vec<f64> = (0..ny)
        .map(|b| (0..nx).map(|a| joint[a * ny + b]).sum())
        .collect();
    let h_xy = entropy_of(&joint);
    let h_y = entropy_of(&py);
    let h_x = entropy_of(p.probs());
    (h_xy - h_y, h_x + h_y - h_xy)
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    for (p, ch, q) in random_triples(101, 100) {
        let r = achievable_transmission_rate(&p, &ch, &q).map_err(|e| e.to_string())?;
        let [u, l, o] = r.perspectives;
        worst = worst
            .max((u - l).abs())
            .max((u - o).abs())
            .max((l - o).abs());
    }
    check(
        worst <= 1e-10,
        format!("max disagreement {worst:.2e} over 100 triples"),
    )
}

fn criterion_2() -> Outcome {
    let (mut below, mut post_gap, mut mi_gap) = (f64::INFINITY, 0.0f64, 0.0f64);
    for (p, ch, q) in random_triples(101, 100) {
        let (h_cond, mi) = joint_entropies(&p, &ch);
        below = below.min(uncertainty(&p, &ch, &q).unwrap() - h_cond);
        let post = posterior_metric(&p, &ch, PosteriorScaling::Posterior).unwrap();
        post_gap = post_gap.max((uncertainty(&p, &ch, &post).unwrap() - h_cond).abs());
        mi_gap =
            mi_gap.max((achievable_transmission_rate(&p, &ch, &post).unwrap().r_ps - mi).abs());
    }
    check(
        below >= -1e-12 && post_gap <= 1e-12 && mi_gap <= 1e-10,
        format!("min U(q)-H(X|Y) {below:.2e}, posterior gap {post_gap:.2e}, |R_ps-I| {mi_gap:.2e}"),
    )
}

fn criterion_3() -> Outcome {
    let (mut rate_gap, mut gmi_gap, mut s_rel) = (0.0f64, 0.0f64, 0.0f64);
    for m in [2usize, 4, 8] {
        for eps in [0.01, 0.1, 0.3] {
            let ch = mary_symmetric(m, eps).unwrap();
            let p = Pmf::uniform(ch.input().clone()).unwrap();
            let quant = map_quantizer(&p, &ch).unwrap();
            let closed = log2(m as f64) - h2(eps) - eps * log2((m - 1) as f64);
            let hd = hard_decision_rate(&p, &ch, &quant).unwrap();
            rate_gap = rate_gap.max((hd.rate.rate - closed).abs());
            let hamming = hard_decision_metric(&quant, ch.input()).unwrap();
            let opt = gmi(&p, &ch, &hamming, Family::Exp, &SearchSpec::default()).unwrap();
            gmi_gap = gmi_gap.max((opt.value - closed).abs());
            let s_star = ((m - 1) as f64 * (1.0 - eps) / eps).ln();
            s_rel = s_rel.max(((opt.s - s_star) / s_star).abs());
        }
    }
    check(
        rate_gap <= 1e-10 && gmi_gap <= 1e-8 && s_rel <= 1e-6,
        format!("rate gap {rate_gap:.2e}, gmi gap {gmi_gap:.2e}, s* rel. error {s_rel:.2e}"),
    )
}

/// `H(B_j|Y)` for every level, straight from the joint distribution.
fn level_conditional_entropies(p: &Pmf, ch: &Dmc, labels: &Alphabet) -> Vec<f64> {
    let (nx, ny) = (ch.input_len(), ch.output_len());
    (0..labels.label_bits())
        .map(|j| {
            let mut joint = vec![0.0; 2 * ny];
            for a in 0..nx {
                for b in 0..ny {
                    joint[labels.bit(a, j) * ny + b] += p.prob(a) * ch.prob(a, b);
                }
            }
            let py: Vec<f64> = (0..ny).map(|b| joint[b] + joint[ny + b]).collect();
            entropy_of(&joint) - entropy_of(&py)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let constellation = ask_alphabet(4).unwrap();
    let ch = awgn_quantized(&constellation, 0.8, &GridSpec::default()).unwrap();
    let (mut split_gap, mut bmd_gap, mut over_mi) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for probs in [vec![0.1, 0.4, 0.4, 0.1], vec![0.4, 0.3, 0.2, 0.1]] {
        let p = Pmf::new(constellation.clone(), probs).unwrap();
        let levels: Vec<_> = (0..2).map(|j| bit_marginal(&p, &ch, j).unwrap()).collect();
        for posterior in [true, false] {
            let metrics: Vec<Metric> = levels
                .iter()
                .map(|l| {
                    if posterior {
                        posterior_metric(&l.pmf, &l.channel, PosteriorScaling::Posterior).unwrap()
                    } else {
                        likelihood_metric(&l.channel).unwrap()
                    }
                })
                .collect();
            let product = bit_metric_product(&metrics, &constellation).unwrap();
            let total = uncertainty(&p, &ch, &product).unwrap();
            let parts: f64 = levels
                .iter()
                .zip(&metrics)
                .map(|(l, q)| uncertainty(&l.pmf, &l.channel, q).unwrap())
                .sum();
            split_gap = split_gap.max((total - parts).abs());
        }
        let hs = level_conditional_entropies(&p, &ch, &constellation);
        let expected = (entropy_of(p.probs()) - hs.iter().sum::<f64>()).max(0.0);
        let r = bmd_rate(&p, &ch).unwrap().r_bmd.rate;
        bmd_gap = bmd_gap.max((r - expected).abs());
        over_mi = over_mi.max(r - joint_entropies(&p, &ch).1);
    }
    check(
        split_gap <= 1e-10 && bmd_gap <= 1e-10 && over_mi <= 1e-10,
        format!(
            "level split gap {split_gap:.2e}, r_bmd gap {bmd_gap:.2e}, max r_bmd - I {over_mi:.2e}"
        ),
    )
}

fn inverse_weights(p: &Pmf) -> Vec<f64> {
    p.probs()
        .iter()
        .map(|&v| if v > 0.0 { 1.0 / v } else { 1.0 })
        .collect()
}

fn criterion_5() -> Outcome {
    let mut gap = 0.0f64;
    for (p, ch, q) in random_triples(505, 50) {
        let lm = lm_rate(&p, &ch, &q, 1.0, &inverse_weights(&p)).unwrap();
        let r = achievable_transmission_rate(&p, &ch, &q).unwrap();
        gap = gap.max((lm.unclamped - r.r_ps_unclamped).abs());
    }
    let ch = mary_symmetric(4, 0.2).unwrap();
    let p = Pmf::new(ch.input().clone(), vec![0.5, 0.5, 0.0, 0.0]).unwrap();
    let q = likelihood_metric(&ch).unwrap();
    let lm = lm_rate(&p, &ch, &q, 1.0, &inverse_weights(&p))
        .unwrap()
        .rate;
    let r_ps = achievable_transmission_rate(&p, &ch, &q).unwrap().r_ps;
    check(
        gap <= 1e-10 && lm >= r_ps,
        format!("max |lm - R_ps| {gap:.2e} on 50 triples; deficient support: lm {lm:.6} vs R_ps {r_ps:.6}"),
    )
}

fn criterion_6() -> Outcome {
    let a = Alphabet::indexed(3).unwrap();
    let rows = vec![
        vec![0.8, 0.15, 0.05],
        vec![0.1, 0.7, 0.2],
        vec![0.05, 0.25, 0.7],
    ];
    let ch = Dmc::new(a.clone(), a.clone(), rows).unwrap();
    let p = Pmf::new(a.clone(), vec![0.5, 0.3, 0.2]).unwrap();
    let hamming = hard_decision_metric(&map_quantizer(&p, &ch).unwrap(), &a).unwrap();
    let q = exp_transform(&hamming, 1.0).unwrap();
    let opt = gmi(&p, &ch, &q, Family::Power, &SearchSpec::default()).unwrap();
    let switched = power_transform(&metric_switch(&q, &p, opt.s).unwrap(), opt.s).unwrap();
    let r = achievable_transmission_rate(&p, &ch, &switched)
        .unwrap()
        .r_ps_unclamped;
    check(
        opt.value > 0.0 && (r - opt.value).abs() <= 1e-8,
        format!(
            "gmi {:.12} at s* {:.6}, switched R_ps {r:.12}",
            opt.value, opt.s
        ),
    )
}

fn psrate(args: &[&str]) -> Result<String, String> {
    psrate_with(args, &[])
}

fn psrate_with(args: &[&str], env: &[(&str, &str)]) -> Result<String, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_psrate"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "psrate {}: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn number(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or(f64::NAN)
}

fn criterion_7() -> Outcome {
    let mut passed = 0;
    let mut zs = Vec::new();
    for seed in 1..=5u64 {
        let seed = seed.to_string();
        let text = psrate(&[
            "estimate-tc",
            "--channel",
            "bsc:0.11",
            "--metric",
            "likelihood",
            "--n",
            "1000",
            "--trials",
            "200",
            "--seed",
            &seed,
        ])?;
        let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let (mean, se, t_c) = (
            number(&v, "mean"),
            number(&v, "std_error"),
            number(&v, "t_c_closed_form"),
        );
        if (mean - t_c).abs() <= 3.0 * se {
            passed += 1;
        }
        zs.push(format!("{:.2}", (mean - t_c) / se));
    }
    check(
        passed >= 4,
        format!(
            "{passed}/5 seeds within 3 standard errors (z = {})",
            zs.join(", ")
        ),
    )
}

fn simulate(cfg: SimConfig) -> (Plan, Vec<TrialRecord>) {
    let plan = Plan::new(cfg).unwrap();
    let (_, records) = drivers::simulate(&plan);
    (plan, records)
}

fn criterion_8() -> Outcome {
    let ch = bsc(0.05).unwrap();
    let p = Pmf::new(ch.input().clone(), vec![0.7, 0.3]).unwrap();
    let q = posterior_metric(&p, &ch, PosteriorScaling::Posterior).unwrap();
    let cfg = SimConfig {
        p_x: p.clone(),
        ch,
        q,
        n: 16,
        r_c: 0.75,
        r_tx: 0.25,
        eps_typ: 0.2,
        trials: 2000,
        seed: 8,
        mode: Mode::LayeredPs,
    };
    let (plan, records) = simulate(cfg);
    let res = plan.summarize(&records);
    let spec = TypicalSpec::new(p, 16, 0.2).unwrap();
    let enc_bound = encoding_failure_bound(&spec, plan.realized_r_prime()).unwrap();
    let enc = &res.encoding_failure;
    let a = enc.rate <= enc_bound + 3.0 * enc.std_error;
    let dec = &res.decode_error;
    let se = dec.std_error.hypot(res.bound_2exp.std_error);
    let b = dec.rate <= res.bound_2exp.mean + 3.0 * se;
    let c = records.iter().all(|r| !r.message_error || r.decode_error);
    check(
        a && b && c,
        format!(
            "(a) encoding failures {:.4} vs bound {enc_bound:.2e}; (b) decode errors {:.4} vs union bound {:.4}; \
             (c) message errors imply index errors: {c}",
            enc.rate, dec.rate, res.bound_2exp.mean
        ),
    )
}

/// `|a - b| <= 3` pooled standard errors of the difference of two proportions.
fn proportions_agree(a: usize, b: usize, total: usize) -> (bool, f64) {
    let (pa, pb) = (a as f64 / total as f64, b as f64 / total as f64);
    let pooled = (a + b) as f64 / (2 * total) as f64;
    let se = (2.0 * pooled * (1.0 - pooled) / total as f64).sqrt();
    let z = if se > 0.0 { (pa - pb) / se } else { 0.0 };
    (z.abs() <= 3.0, z)
}

fn criterion_9() -> Outcome {
    let ch = bsc(0.11).unwrap();
    let p = Pmf::uniform(ch.input().clone()).unwrap();
    let q = posterior_metric(&p, &ch, PosteriorScaling::Posterior).unwrap();
    let cfg = |mode| SimConfig {
        p_x: p.clone(),
        ch: ch.clone(),
        q: q.clone(),
        n: 16,
        r_c: 0.5,
        r_tx: 0.5,
        eps_typ: 100.0,
        trials: 2000,
        seed: 9,
        mode,
    };
    let (pl, layered) = simulate(cfg(Mode::LayeredPs));
    let (pc, classical) = simulate(cfg(Mode::Classical));
    let (l, c) = (pl.summarize(&layered), pc.summarize(&classical));
    let (ok_w, z_w) = proportions_agree(l.decode_error.count, c.decode_error.count, 2000);
    let (ok_u, z_u) = proportions_agree(l.message_error.count, c.message_error.count, 2000);
    check(
        ok_w && ok_u && l.encoding_failure.count == 0,
        format!(
            "index errors {:.4} vs {:.4} (z {z_w:.2}); message errors {:.4} vs {:.4} (z {z_u:.2})",
            l.decode_error.rate, c.decode_error.rate, l.message_error.rate, c.message_error.rate
        ),
    )
}

/// Counts typical words of length `n` over `k` letters by enumerating every
/// word, for each `(pmf, eps)` pair at once.
fn enumerate_typical(n: usize, k: usize, cases: &[(Vec<f64>, f64)]) -> Vec<u64> {
    let mut counts = vec![0u64; cases.len()];
    let mut word = vec![0usize; n];
    loop {
        let mut letters = vec![0usize; k];
        for &x in &word {
            letters[x] += 1;
        }
        for (c, (p, eps)) in counts.iter_mut().zip(cases) {
            let typical = letters.iter().zip(p).all(|(&m, &pa)| {
                let f = m as f64 / n as f64;
                f >= (1.0 - eps) * pa - 1e-12 && f <= (1.0 + eps) * pa + 1e-12
            });
            *c += u64::from(typical);
        }
        let mut i = 0;
        while i < n && word[i] == k - 1 {
            word[i] = 0;
            i += 1;
        }
        if i == n {
            return counts;
        }
        word[i] += 1;
    }
}

fn criterion_10() -> Outcome {
    let pmfs: Vec<Vec<f64>> = vec![
        vec![1.0],
        vec![0.5, 0.5],
        vec![0.7, 0.3],
        vec![0.25, 0.75],
        vec![0.5, 0.25, 0.25],
        vec![0.2, 0.3, 0.5],
        vec![0.6, 0.4, 0.0],
    ];
    let mut points = 0;
    let mut mismatches = Vec::new();
    for k in 1..=3 {
        let cases: Vec<(Vec<f64>, f64)> = pmfs
            .iter()
            .filter(|p| p.len() == k)
            .flat_map(|p| [0.0, 0.1, 0.3].map(|eps| (p.clone(), eps)))
            .collect();
        for n in 1..=12 {
            let exhaustive = enumerate_typical(n, k, &cases);
            for ((p, eps), want) in cases.iter().zip(exhaustive) {
                let pmf = Pmf::new(Alphabet::indexed(k).unwrap(), p.clone()).unwrap();
                let got = typical_set_size(&TypicalSpec::new(pmf, n, *eps).unwrap());
                points += 1;
                if got != want.into() {
                    mismatches.push(format!("{p:?} n={n} eps={eps}: {got} vs {want}"));
                }
            }
        }
    }

    // n-ladder for (0.5, 0.5): rates rise toward H(X) = 1, never exceed the
    // (1 + eps) H(X) ceiling, and reach the (1 - eps) H(X) floor at n = 24
    // when 0 < eps < min P_X.
    let mut ladder_ok = true;
    let mut ladder = Vec::new();
    for eps in [0.0, 0.1] {
        let rates: Vec<f64> = [8, 16, 24]
            .iter()
            .map(|&n| {
                let p = Pmf::uniform(Alphabet::indexed(2).unwrap()).unwrap();
                rate_of_typical_set(&TypicalSpec::new(p, n, eps).unwrap())
            })
            .collect();
        ladder_ok &= rates.windows(2).all(|w| w[0] < w[1]);
        ladder_ok &= rates.iter().all(|&r| r <= 1.0 + eps);
        if eps > 0.0 {
            ladder_ok &= rates[2] >= 1.0 - eps;
        }
        ladder.push(format!(
            "eps {eps}: {:.4}/{:.4}/{:.4}",
            rates[0], rates[1], rates[2]
        ));
    }
    check(
        mismatches.is_empty() && ladder_ok,
        format!(
            "{points} grid points, {} mismatches{}; ladder {}",
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default(),
            ladder.join(", ")
        ),
    )
}

fn criterion_11() -> Outcome {
    let runs: &[&[&str]] = &[
        &[
            "rates",
            "--channel",
            "bsc:0.11",
            "--input",
            "0.7,0.3",
            "--metric",
            "likelihood",
            "--optimize-s",
        ],
        &[
            "rates",
            "--channel",
            "awgn-ask:4,0.8",
            "--input",
            "mb:0.05",
            "--metric",
            "bitwise-posterior",
        ],
        &[
            "sweep",
            "--param",
            "eps",
            "--start",
            "0",
            "--stop",
            "0.5",
            "--steps",
            "6",
            "--channel",
            "bsc:0.1",
        ],
        &[
            "sweep",
            "--param",
            "r_c",
            "--start",
            "0.25",
            "--stop",
            "0.75",
            "--steps",
            "3",
            "--channel",
            "bsc:0.05",
            "--input",
            "0.7,0.3",
            "--trials",
            "200",
            "--seed",
            "4",
        ],
        &["gmi", "--channel", "mary:4,0.1", "--metric", "hamming"],
        &[
            "lm",
            "--channel",
            "mary:4,0.2",
            "--input",
            "0.4,0.3,0.2,0.1",
            "--metric",
            "likelihood",
            "--s",
            "0.7",
        ],
        &[
            "simulate",
            "--channel",
            "bsc:0.05",
            "--input",
            "0.7,0.3",
            "--n",
            "16",
            "--rc",
            "0.75",
            "--rtx",
            "0.25",
            "--trials",
            "300",
            "--seed",
            "11",
        ],
        &[
            "simulate",
            "--channel",
            "bsc:0.11",
            "--mode",
            "classical",
            "--rtx",
            "0.5",
            "--trials",
            "300",
            "--seed",
            "11",
            "--output",
            "trials-csv",
        ],
        &[
            "estimate-tc",
            "--channel",
            "bsc:0.11",
            "--metric",
            "likelihood",
            "--n",
            "500",
            "--trials",
            "100",
            "--seed",
            "7",
        ],
        &[
            "typical",
            "--pmf",
            "0.5,0.25,0.25",
            "--n",
            "4,8,12",
            "--eps",
            "0,0.1,0.3",
        ],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let first = psrate(args)?;
        let again = psrate(args)?;
        let single = psrate_with(args, &[("RAYON_NUM_THREADS", "1")])?;
        let wide = psrate_with(args, &[("RAYON_NUM_THREADS", "4")])?;
        if first.is_empty() || first != again || first != single || first != wide {
            differing.push(args[0]);
        }
    }
    check(
        differing.is_empty(),
        format!(
            "{} invocations over all 7 subcommands, differing: {differing:?}",
            runs.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("perspective equivalence", criterion_1),
        ("posterior optimality", criterion_2),
        ("hard-decision closed form", criterion_3),
        ("BMD factorization", criterion_4),
        ("LM-rate identity", criterion_5),
        ("metric switch", criterion_6),
        ("Monte-Carlo consistency", criterion_7),
        ("simulation vs. bounds", criterion_8),
        ("uniform layered = classical", criterion_9),
        ("typicality exactness", criterion_10),
        ("CLI determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{secs:.2} s]",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {detail} [{secs:.2} s]",
                    i + 1
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
