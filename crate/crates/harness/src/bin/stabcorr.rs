use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stabcorr_core::stability::{
    scan_stability_region, write_region_csv, RegionCondition, WedgeSampler, Z0Mode,
};
use stabcorr_harness::{
    heat_table, parse_number, parse_number_list, parse_range, schnak_study, wave_plan, wave_study,
    write_convergence_csv, HarnessConfig, ReferencePolicy, RunPlan, SchnakSetup,
};

#[derive(Parser)]
#[command(name = "stabcorr", version, about = "Stabilizing-correction splitting experiments")]
struct Cli {
    /// INI file with `key = value` overrides.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear stability analysis.
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Convergence studies, written as CSV.
    #[command(subcommand)]
    Converge(ConvergeCmd),
    /// Solution snapshots.
    #[command(subcommand)]
    Snapshot(SnapshotCmd),
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// Stability mask over a (mu, nu) grid for central advection with implicit diffusion.
    Region {
        #[arg(long, value_enum, default_value = "rstar")]
        condition: Condition,
        #[arg(long, default_value = "0.01:10:200")]
        mu: String,
        #[arg(long, default_value = "0.01:5:200")]
        nu: String,
        #[arg(long, default_value_t = 512)]
        phi_samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest |r| found by sampling wedge boundaries.
    Sharpness {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        alpha: f64,
        /// Per-component angles `a1,...,as`, overriding `--alpha`.
        #[arg(long)]
        alphas: Option<String>,
        #[arg(long, value_enum, default_value = "zero")]
        z0: Z0Arg,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Condition {
    R,
    Rstar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Z0Arg {
    Zero,
    Shifted,
}

#[derive(Args)]
struct OutArg {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConvergeCmd {
    /// Heat equation tables: 1 local L2, 2 global L2, 3 global max norm.
    Heat {
        #[arg(long)]
        table: u8,
        #[arg(long, default_value = "50,100,200,400")]
        inv_dt: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Traveling wave on the unit square, errors at t = 1.
    Wave {
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value = "1/25,1/50,1/100")]
        h_list: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Schnakenberg on the hexagon, self-convergence of u.
    Schnak {
        #[arg(long, default_value_t = 32)]
        nsub: usize,
        #[arg(long, default_value = "0.5")]
        t: String,
        #[arg(long, default_value = "1/100,1/200,1/400")]
        dt_list: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum SnapshotCmd {
    /// CSV `x,y,u,v` of the Schnakenberg solution.
    Schnak {
        #[arg(long, default_value_t = 32)]
        nsub: usize,
        #[arg(long)]
        t: String,
        #[arg(long, default_value = "1/400")]
        dt: String,
        #[arg(long)]
        mesh_out: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn number(s: &str, what: &str) -> Result<f64> {
    parse_number(s).ok_or_else(|| anyhow!("invalid {what}: {s}"))
}

fn list(s: &str, what: &str) -> Result<Vec<f64>> {
    parse_number_list(s).ok_or_else(|| anyhow!("invalid {what}: {s}"))
}

fn load_config(path: Option<&Path>) -> Result<HarnessConfig> {
    match path {
        Some(p) => HarnessConfig::load(p),
        None => Ok(HarnessConfig::default()),
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Stability(StabilityCmd::Region {
            condition,
            mu,
            nu,
            phi_samples,
            out,
        }) => {
            let mu = parse_range(&mu).ok_or_else(|| anyhow!("invalid --mu range {mu}"))?;
            let nu = parse_range(&nu).ok_or_else(|| anyhow!("invalid --nu range {nu}"))?;
            let cond = match condition {
                Condition::R => RegionCondition::RFull,
                Condition::Rstar => RegionCondition::RStar,
            };
            let scan = scan_stability_region(&mu, &nu, cond, phi_samples)?;
            let mut w = output(&out)?;
            write_region_csv(&scan, &mut w)?;
            w.flush()?;
        }
        Command::Stability(StabilityCmd::Sharpness {
            s,
            alpha,
            alphas,
            z0,
            samples,
            seed,
        }) => {
            let alphas = match alphas {
                Some(a) => list(&a, "--alphas")?,
                None => vec![alpha; s],
            };
            if alphas.len() != s || s == 0 {
                bail!("need s >= 1 and exactly s wedge angles");
            }
            let mode = match z0 {
                Z0Arg::Zero => Z0Mode::Zero,
                Z0Arg::Shifted => Z0Mode::UnitDiskShifted,
            };
            let max = WedgeSampler::new(alphas, mode).max_abs_r(samples, seed);
            let verdict = if max > 1.0 + 1e-12 { "violated" } else { "bounded" };
            println!("s={s} samples={samples} seed={seed} max_abs_r={max} {verdict}");
        }
        Command::Converge(ConvergeCmd::Heat { table, inv_dt, out }) => {
            let inv: Vec<usize> = inv_dt
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .context("--inv-dt")?;
            let records = heat_table(table, &inv)?;
            write_convergence_csv(&records, output(&out.out)?)?;
        }
        Command::Converge(ConvergeCmd::Wave {
            epsilon,
            h_list,
            out,
        }) => {
            let eps = number(&epsilon, "--epsilon")?;
            let plan = wave_plan(cfg.scheme_configs()?, list(&h_list, "--h-list")?, cfg.coupling());
            let records = wave_study(eps, &plan)?;
            write_convergence_csv(&records, output(&out.out)?)?;
        }
        Command::Converge(ConvergeCmd::Schnak {
            nsub,
            t,
            dt_list,
            out,
        }) => {
            let setup = SchnakSetup::new(nsub)?;
            let plan = RunPlan {
                problem: "schnakenberg".into(),
                schemes: cfg.scheme_configs()?,
                taus: list(&dt_list, "--dt-list")?,
                coupling: cfg.coupling(),
                t_end: number(&t, "--t")?,
                reference: ReferencePolicy::SelfReference {
                    refine: cfg.reference_refine,
                },
                norms: vec![stabcorr_core::Norm::L2],
            };
            let records = schnak_study(&setup, &plan)?;
            write_convergence_csv(&records, output(&out.out)?)?;
        }
        Command::Snapshot(SnapshotCmd::Schnak {
            nsub,
            t,
            dt,
            mesh_out,
            out,
        }) => {
            let setup = SchnakSetup::new(nsub)?;
            let scheme = cfg
                .scheme_configs()?
                .into_iter()
                .find(|c| c.label() == "SC1A")
                .unwrap_or_else(stabcorr_core::SchemeConfig::sc1a);
            let u = setup.run(&scheme, number(&t, "--t")?, number(&dt, "--dt")?)?;
            if let Some(p) = mesh_out {
                let mut w = output(&Some(p))?;
                setup.mesh.write_text(&mut w)?;
                w.flush()?;
            }
            let mut w = output(&out.out)?;
            stabcorr_core::femdd::write_snapshot_csv(&setup.mesh, &u, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
