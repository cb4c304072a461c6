//! Parallel drivers for the Monte-Carlo estimator and the simulator.
//!
//! Trials are evaluated on the rayon pool and collected in trial order, so
//! every summary is reduced in the same order as the sequential runners and
//! results are bit-identical to them.

use psrate_core::empirical::{McEstimate, McSetup};
use psrate_core::simulator::{Plan, SimResult, TrialRecord};
use rayon::prelude::*;

pub fn monte_carlo(setup: &McSetup) -> McEstimate {
    let samples: Vec<f64> = (0..setup.config().trials)
        .into_par_iter()
        .map(|i| setup.trial(i))
        .collect();
    setup.summarize(&samples)
}

pub fn simulate(plan: &Plan) -> (SimResult, Vec<TrialRecord>) {
    let records: Vec<TrialRecord> = (0..plan.config().trials)
        .into_par_iter()
        .map(|i| plan.run_trial(i))
        .collect();
    (plan.summarize(&records), records)
}
