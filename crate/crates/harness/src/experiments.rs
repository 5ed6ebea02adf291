//! Convergence studies: heat tables, traveling wave, Schnakenberg self-convergence.

use rayon::prelude::*;
use stabcorr_core::femdd::{
    build_schnakenberg_system, schnakenberg_initial_state, triangulate_hexagon, MeshHex,
    PartitionOfUnity,
};
use stabcorr_core::problems::{HeatMms, SchnakParams, TravelingWaveParams};
use stabcorr_core::{
    norm_l2_discrete, Error, Norm, Result, SchemeConfig, SchemeKind, SplitSystem, StateVector,
};

use crate::records::{fill_orders, ConvergenceRecord};
use crate::run::{global_errors, integrate, local_error, make_reference, GridProblem};

/// Step-size coupling: `dt = factor * tau` with separate factors for the one-pass
/// (Douglas family) and two-pass (extended) schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub douglas_factor: f64,
    pub extended_factor: f64,
}

impl Coupling {
    /// Equal work per unit time: extended schemes take twice the step.
    pub const EQUAL_WORK: Coupling = Coupling {
        douglas_factor: 1.0,
        extended_factor: 2.0,
    };
    pub const UNIFORM: Coupling = Coupling {
        douglas_factor: 1.0,
        extended_factor: 1.0,
    };

    pub fn dt(&self, cfg: &SchemeConfig<f64>, tau: f64) -> f64 {
        match cfg.kind.passes() {
            1 => self.douglas_factor * tau,
            _ => self.extended_factor * tau,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferencePolicy {
    Exact,
    /// SC1A at `min(dt) / refine`.
    SelfReference { refine: usize },
}

/// Which quantity a study measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// One step from the exact solution.
    Local,
    /// Error at the output time.
    Global,
}

#[derive(Debug, Clone)]
pub struct RunPlan {
    pub problem: String,
    pub schemes: Vec<SchemeConfig<f64>>,
    /// Base step parameter `tau`, strictly decreasing.
    pub taus: Vec<f64>,
    pub coupling: Coupling,
    pub t_end: f64,
    pub reference: ReferencePolicy,
    pub norms: Vec<Norm>,
}

impl RunPlan {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() || self.taus.is_empty() || self.norms.is_empty() {
            return Err(Error::InvalidInput("run plan needs schemes, steps and norms".into()));
        }
        if self.taus.windows(2).any(|w| !(w[1] < w[0])) || self.taus.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::InvalidInput("step list must be positive and strictly decreasing".into()));
        }
        for cfg in &self.schemes {
            cfg.validate()?;
        }
        Ok(())
    }
}

fn record(cfg: &SchemeConfig<f64>, dt: f64, h: f64, norm: Norm, error: Option<f64>) -> ConvergenceRecord {
    ConvergenceRecord {
        scheme: cfg.label().to_string(),
        theta: cfg.effective_theta(),
        dt,
        h,
        norm,
        error,
        order: None,
    }
}

/// Turns a cell result into per-norm errors; blow-ups become `None`, other failures propagate.
fn cell_errors(res: Result<Vec<f64>>, n: usize) -> Result<Vec<Option<f64>>> {
    match res {
        Ok(v) => Ok(v.into_iter().map(Some).collect()),
        Err(Error::BlowUp { .. }) => Ok(vec![None; n]),
        Err(Error::StageSolve { source, .. }) if matches!(*source, Error::Factorization { .. }) => {
            Ok(vec![None; n])
        }
        Err(e) => Err(e),
    }
}

/// Grid-problem study where `h = tau` and `dt` follows the coupling. Cells whose step does not
/// divide the output interval are left out.
pub fn grid_study(problem: GridProblem, plan: &RunPlan, measure: Measure) -> Result<Vec<ConvergenceRecord>> {
    plan.validate()?;
    let cells: Vec<(usize, f64)> = (0..plan.schemes.len())
        .flat_map(|s| plan.taus.iter().map(move |&tau| (s, tau)))
        .collect();
    let results: Vec<Result<Option<Vec<ConvergenceRecord>>>> = cells
        .par_iter()
        .map(|&(s, h)| {
            let cfg = &plan.schemes[s];
            let dt = plan.coupling.dt(cfg, h);
            let res = match measure {
                Measure::Local => plan
                    .norms
                    .iter()
                    .map(|&n| local_error(problem, cfg, dt, h, n))
                    .collect(),
                Measure::Global => global_errors(problem, cfg, dt, h, plan.t_end, &plan.norms),
            };
            if let Err(Error::NonIntegerSteps { .. }) = res {
                return Ok(None);
            }
            let errs = cell_errors(res, plan.norms.len())?;
            Ok(Some(
                plan.norms
                    .iter()
                    .zip(errs)
                    .map(|(&n, e)| record(cfg, dt, h, n, e))
                    .collect(),
            ))
        })
        .collect();
    let mut records = Vec::new();
    for r in results {
        if let Some(rs) = r? {
            records.extend(rs);
        }
    }
    // group by scheme and norm, steps in plan order
    records.sort_by_key(|r| {
        let s = plan.schemes.iter().position(|c| c.label() == r.scheme && c.effective_theta() == r.theta);
        let n = plan.norms.iter().position(|&n| n == r.norm);
        (s, n)
    });
    fill_orders(&mut records);
    Ok(records)
}

/// The three heat-equation tables: 1 = local L2, 2 = global L2 at `t = 1`, 3 = global max norm.
pub fn heat_table(table: u8, inv_dts: &[usize]) -> Result<Vec<ConvergenceRecord>> {
    let (measure, norm) = match table {
        1 => (Measure::Local, Norm::L2),
        2 => (Measure::Global, Norm::L2),
        3 => (Measure::Global, Norm::Max),
        _ => return Err(Error::InvalidInput(format!("no table {table}"))),
    };
    let plan = RunPlan {
        problem: "heat-poly".into(),
        schemes: vec![SchemeConfig::douglas(0.5), SchemeConfig::sc1a(), SchemeConfig::sc1b()],
        taus: inv_dts.iter().map(|&n| 1.0 / n as f64).collect(),
        coupling: Coupling::UNIFORM,
        t_end: 1.0,
        reference: ReferencePolicy::Exact,
        norms: vec![norm],
    };
    grid_study(GridProblem::Heat(HeatMms::Poly), &plan, measure)
}

pub fn wave_plan(schemes: Vec<SchemeConfig<f64>>, hs: Vec<f64>, coupling: Coupling) -> RunPlan {
    RunPlan {
        problem: "wave".into(),
        schemes,
        taus: hs,
        coupling,
        t_end: 1.0,
        reference: ReferencePolicy::Exact,
        norms: vec![Norm::L2, Norm::Max],
    }
}

pub fn wave_study(epsilon: f64, plan: &RunPlan) -> Result<Vec<ConvergenceRecord>> {
    let problem = GridProblem::Wave(TravelingWaveParams::standard(epsilon));
    grid_study(problem, plan, Measure::Global)
}

/// The six schemes in the usual comparison: DOUGLAS(1/2), SC1A, SC1B, HV and HW at the given
/// theta, and CS.
pub fn standard_schemes(theta_extended: f64) -> Vec<SchemeConfig<f64>> {
    vec![
        SchemeConfig::douglas(0.5),
        SchemeConfig::sc1a(),
        SchemeConfig::sc1b(),
        SchemeConfig::hv(theta_extended),
        SchemeConfig::hw(theta_extended),
        SchemeConfig::craig_sneyd(),
    ]
}

/// Schnakenberg setup on the hexagon with the squares decomposition.
pub struct SchnakSetup {
    pub mesh: MeshHex<f64>,
    pub system: SplitSystem<f64>,
    pub initial: StateVector<f64>,
}

impl SchnakSetup {
    pub fn new(n_sub: usize) -> Result<Self> {
        let params = SchnakParams::default();
        let mesh = triangulate_hexagon(n_sub)?;
        let system = build_schnakenberg_system(&mesh, &PartitionOfUnity::squares(), &params)?;
        let initial = schnakenberg_initial_state(&mesh, &params)?;
        Ok(Self {
            mesh,
            system,
            initial,
        })
    }

    pub fn run(&self, cfg: &SchemeConfig<f64>, t_end: f64, dt: f64) -> Result<StateVector<f64>> {
        integrate(&self.system, cfg, &self.initial, 0.0, t_end, dt)
    }
}

fn u_component(v: &StateVector<f64>) -> Vec<f64> {
    v.species(0)
}

/// Self-convergence of the `u` component in the discrete L2 norm against an SC1A reference.
pub fn schnak_study(setup: &SchnakSetup, plan: &RunPlan) -> Result<Vec<ConvergenceRecord>> {
    plan.validate()?;
    let dts: Vec<Vec<f64>> = plan
        .schemes
        .iter()
        .map(|c| plan.taus.iter().map(|&t| plan.coupling.dt(c, t)).collect())
        .collect();
    let dt_min = dts.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let refine = match plan.reference {
        ReferencePolicy::SelfReference { refine } if refine >= 1 => refine,
        _ => return Err(Error::InvalidInput("Schnakenberg needs a self reference".into())),
    };
    let dt_ref = dt_min / refine as f64;
    for &dt in dts.iter().flatten() {
        let q = dt / dt_ref;
        if (q - q.round()).abs() > 1e-9 * q {
            return Err(Error::InvalidInput(format!("reference step {dt_ref} does not divide {dt}")));
        }
    }
    let reference = u_component(&make_reference(&setup.system, &setup.initial, plan.t_end, dt_ref)?);
    let h = setup.mesh.h;
    let cells: Vec<(usize, f64)> = dts
        .iter()
        .enumerate()
        .flat_map(|(s, d)| d.iter().map(move |&dt| (s, dt)))
        .collect();
    let errors = cells
        .par_iter()
        .map(|&(s, dt)| {
            let res = setup.run(&plan.schemes[s], plan.t_end, dt).and_then(|u| {
                let diff: Vec<f64> = u_component(&u).iter().zip(&reference).map(|(a, b)| a - b).collect();
                Ok(vec![norm_l2_discrete(&diff)?])
            });
            cell_errors(res, 1).map(|e| e[0])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<ConvergenceRecord> = cells
        .iter()
        .zip(errors)
        .map(|(&(s, dt), e)| record(&plan.schemes[s], dt, h, Norm::L2, e))
        .collect();
    fill_orders(&mut records);
    Ok(records)
}

/// Implicit stage solves needed to cover `[0, t_end]` with `cfg` at step `dt`.
pub fn stage_solves_over(sys: &SplitSystem<f64>, cfg: &SchemeConfig<f64>, t_end: f64, dt: f64) -> Result<usize> {
    let n = crate::run::step_count(0.0, t_end, dt)?;
    Ok(n * sys.s() * cfg.kind.passes())
}

/// Parses a scheme label: DOUGLAS, SC1A, SC1B, HV, HW or CS.
pub fn parse_scheme(label: &str, douglas_theta: f64, theta_extended: f64) -> Result<SchemeConfig<f64>> {
    let cfg = match label.trim().to_ascii_uppercase().as_str() {
        "DOUGLAS" | "SC1" => SchemeConfig::new(SchemeKind::Douglas, douglas_theta)?,
        "SC1A" => SchemeConfig::sc1a(),
        "SC1B" => SchemeConfig::sc1b(),
        "HV" => SchemeConfig::new(SchemeKind::Hv, theta_extended)?,
        "HW" => SchemeConfig::new(SchemeKind::Hw, theta_extended)?,
        "CS" => SchemeConfig::craig_sneyd(),
        other => return Err(Error::InvalidInput(format!("unknown scheme {other}"))),
    };
    Ok(cfg)
}
