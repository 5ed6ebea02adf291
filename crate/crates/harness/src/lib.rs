//! Experiment driver for the stabilizing-correction schemes: time loops, error and order
//! measurement, convergence studies and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod records;
pub mod run;

pub use config::HarnessConfig;
pub use experiments::{
    grid_study, heat_table, schnak_study, standard_schemes, wave_plan, wave_study, Coupling,
    Measure, ReferencePolicy, RunPlan, SchnakSetup,
};
pub use records::{fill_orders, observed_orders, write_convergence_csv, ConvergenceRecord};
pub use run::{
    global_error, global_errors, integrate, local_error, make_reference, step_count, GridProblem,
};

/// Parses `0.25`, `1e-3` or a fraction such as `1/25`.
pub fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (b != 0.0).then_some(a / b)
        }
        None => s.parse().ok(),
    }
}

/// Comma-separated list of numbers.
pub fn parse_number_list(s: &str) -> Option<Vec<f64>> {
    s.split(',').map(parse_number).collect()
}

/// `a:b:n` as `n` evenly spaced points from `a` to `b` inclusive.
pub fn parse_range(s: &str) -> Option<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else { return None };
    let (a, b) = (parse_number(a)?, parse_number(b)?);
    let n: usize = n.trim().parse().ok()?;
    match n {
        0 => None,
        1 => Some(vec![a]),
        _ => Some((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()),
    }
}
