//! Command-line front end: parse channel specs, run bounds, the capacity
//! oracle, the infinity analyzer, and the figure/parameter sweeps. All
//! computation lives in the library; this binary is argument plumbing.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use asdn::bounds::{
    self, lower_bound_maj_constrained, lower_bound_psi, upper_bound_closed_form, BoundReport,
};
use asdn::channel::{ChannelSpec, InputDist};
use asdn::figures::{self, SweepComputations, SweepPlan};
use asdn::infinity;
use asdn::oracle::{blahut_arimoto, mc_mutual_information, DiscretizedChannel};
use asdn::quad::QuadratureConfig;
use asdn::{Error, Result};

#[derive(Parser)]
#[command(name = "asdn", version, about = "Capacity bounds and oracles for signal-dependent noise channels")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    abs_tol: f64,

    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-7)]
    rel_tol: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute capacity bounds for a channel spec (JSON report array).
    Bounds {
        #[arg(long)]
        spec: PathBuf,
        /// Which bound: maj | psi | symkl | all.
        #[arg(long, default_value = "all")]
        bound: String,
        /// Fixed psi threshold; optimized over [1e-3, 10] when absent.
        #[arg(long)]
        delta: Option<f64>,
        /// Replace/add a mean constraint E[X] <= alpha.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Blahut-Arimoto capacity of the discretized channel (JSON estimate).
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, default_value_t = 128)]
        n: usize,
        #[arg(short, default_value_t = 1024)]
        m: usize,
        #[arg(long)]
        alpha: Option<f64>,
        /// Duality-gap tolerance.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Cross-check with a Monte Carlo plug-in estimate of this many samples.
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Dump the optimal input pmf as CSV.
        #[arg(long)]
        dump_pmf: Option<PathBuf>,
    },
    /// Finiteness hypotheses and infinite-capacity detection (JSON).
    Analyze {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Build the interval-packing witness (CSV points + JSON summary).
    Witness {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, default_value_t = 1000)]
        n: usize,
        /// Noise window lower edge.
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        /// Noise window upper edge.
        #[arg(long, default_value_t = 2.0)]
        b: f64,
    },
    /// Capacity and symmetrized-KL upper bound vs c0^2 (CSV).
    Fig2 {
        /// Explicit comma-separated c0^2 values (overrides the range).
        #[arg(long)]
        values: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        c0sq_min: f64,
        #[arg(long, default_value_t = 10.0)]
        c0sq_max: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(short, default_value_t = 128)]
        n: usize,
        #[arg(short, default_value_t = 1024)]
        m: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Capacity and both lower bounds vs the peak A (CSV).
    Fig3 {
        /// Explicit comma-separated A values (overrides the range).
        #[arg(long)]
        values: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        a_min: f64,
        #[arg(long, default_value_t = 50.0)]
        a_max: f64,
        #[arg(long, default_value_t = 25)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        c0_sq: f64,
        #[arg(short, default_value_t = 128)]
        n: usize,
        #[arg(short, default_value_t = 1024)]
        m: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Sweep a parameter path in the spec JSON and recompute (CSV).
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        /// Dotted path, e.g. sigma.c0_sq or support.u.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        /// Comma-separated computations: bounds,oracle,analyzer.
        #[arg(long, default_value = "bounds")]
        run: String,
        #[arg(short, default_value_t = 64)]
        n: usize,
        #[arg(short, default_value_t = 512)]
        m: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_spec(path: &PathBuf, alpha: Option<f64>) -> Result<ChannelSpec> {
    let text = fs::read_to_string(path)?;
    let spec = ChannelSpec::from_json(&text)?;
    match alpha {
        Some(a) => spec.with_mean_constraint(a),
        None => Ok(spec),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_values(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad numeric value {v:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    let cfg = QuadratureConfig { abs_tol: cli.abs_tol, rel_tol: cli.rel_tol, ..Default::default() };
    cfg.validate()?;

    match cli.cmd {
        Cmd::Bounds { spec, bound, delta, alpha } => {
            let spec = load_spec(&spec, alpha)?;
            let mut reports: Vec<BoundReport> = Vec::new();
            match bound.as_str() {
                "maj" => reports.push(lower_bound_maj_constrained(&spec, &cfg)?),
                "psi" => reports.push(lower_bound_psi(&spec, delta, &cfg)?),
                "symkl" => reports.push(upper_bound_closed_form(&spec, &cfg)?),
                "all" => {
                    reports.push(lower_bound_maj_constrained(&spec, &cfg)?);
                    match lower_bound_psi(&spec, delta, &cfg) {
                        Ok(r) => reports.push(r),
                        Err(e) => eprintln!("psi bound unavailable: {e}"),
                    }
                    match upper_bound_closed_form(&spec, &cfg) {
                        Ok(r) => reports.push(r),
                        Err(e) => eprintln!("symkl bound unavailable: {e}"),
                    }
                }
                other => {
                    return Err(Error::Domain(format!(
                        "unknown bound {other:?}; expected maj | psi | symkl | all"
                    )))
                }
            }
            emit(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&reports)?))
        }
        Cmd::Oracle { spec, n, m, alpha, tol, mc, seed, dump_pmf } => {
            let spec = load_spec(&spec, alpha)?;
            let ch = DiscretizedChannel::discretize(&spec, n, m, asdn::oracle::DEFAULT_TRUNCATION_SIGMAS)?;
            let est = blahut_arimoto(&ch, spec.constraints(), tol, 100_000)?;

            if let Some(path) = dump_pmf {
                let mut csv = String::from("x,p\n");
                for (x, p) in ch.x_grid.iter().zip(&est.pmf) {
                    csv.push_str(&format!("{},{}\n", figures::fmt_sig(*x), figures::fmt_sig(*p)));
                }
                fs::write(path, csv)?;
            }

            #[derive(Serialize)]
            struct OracleOutput<'a> {
                #[serde(flatten)]
                estimate: &'a asdn::oracle::CapacityEstimate,
                #[serde(skip_serializing_if = "Option::is_none")]
                mc_estimate: Option<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                mc_stderr: Option<f64>,
            }
            let mut output = OracleOutput { estimate: &est, mc_estimate: None, mc_stderr: None };
            if let Some(samples) = mc {
                let total: f64 = est.pmf.iter().sum();
                let probs: Vec<f64> = est.pmf.iter().map(|p| p / total).collect();
                let input = InputDist::discrete(ch.x_grid.clone(), probs)?;
                let (mi, se) = mc_mutual_information(&spec, &input, samples, seed, &cfg)?;
                output.mc_estimate = Some(mi);
                output.mc_stderr = Some(se);
            }
            emit(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&output)?))
        }
        Cmd::Analyze { spec } => {
            let spec = load_spec(&spec, None)?;
            #[derive(Serialize)]
            struct Analysis {
                finiteness: Vec<bounds::HypothesisResult>,
                infinite_capacity: infinity::Detection,
            }
            let analysis = Analysis {
                finiteness: infinity::check_finiteness_hypotheses(&spec, &cfg),
                infinite_capacity: infinity::detect_infinite_capacity(&spec, &cfg),
            };
            emit(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&analysis)?))
        }
        Cmd::Witness { spec, n, a, b } => {
            let spec = load_spec(&spec, None)?;
            let w = infinity::build_packing(&spec, a, b, n, &cfg)?;
            w.validate_disjoint()?;
            let mut csv = String::from("i,x,interval_left,interval_right,p\n");
            for (i, ((x, (lo, hi)), p)) in
                w.points.iter().zip(&w.intervals).zip(&w.pmf).enumerate()
            {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i + 1,
                    figures::fmt_sig(*x),
                    figures::fmt_sig(*lo),
                    figures::fmt_sig(*hi),
                    figures::fmt_sig(*p)
                ));
            }
            if cli.out.is_some() {
                emit(&cli.out, &csv)?;
                #[derive(Serialize)]
                struct Summary {
                    n: usize,
                    event_prob: f64,
                    mi_lower_estimate: f64,
                    max_residual: f64,
                }
                let summary = Summary {
                    n,
                    event_prob: w.event_prob,
                    mi_lower_estimate: w.mi_lower_estimate(),
                    max_residual: w.max_residual,
                };
                println!("{}", serde_json::to_string_pretty(&summary)?);
                Ok(())
            } else {
                emit(&cli.out, &csv)
            }
        }
        Cmd::Fig2 { values, c0sq_min, c0sq_max, steps, n, m, tol } => {
            let vals = match values {
                Some(list) => parse_values(&list)?,
                None => log_spaced(c0sq_min, c0sq_max, steps)?,
            };
            let rows = figures::run_fig2(&vals, n, m, tol, &cfg)?;
            emit(&cli.out, &figures::fig2_csv(&rows))
        }
        Cmd::Fig3 { values, a_min, a_max, steps, c0_sq, n, m, tol } => {
            let vals = match values {
                Some(list) => parse_values(&list)?,
                None => lin_spaced(a_min, a_max, steps)?,
            };
            let rows = figures::run_fig3(&vals, c0_sq, n, m, tol, &cfg)?;
            emit(&cli.out, &figures::fig3_csv(&rows))
        }
        Cmd::Sweep { spec, param, values, run, n, m, tol } => {
            let text = fs::read_to_string(&spec)?;
            let doc: serde_json::Value = serde_json::from_str(&text)?;
            let mut comp = SweepComputations::default();
            for part in run.split(',') {
                match part.trim() {
                    "bounds" => comp.bounds = true,
                    "oracle" => comp.oracle = true,
                    "analyzer" => comp.analyzer = true,
                    other => {
                        return Err(Error::Domain(format!(
                            "unknown computation {other:?}; expected bounds, oracle, analyzer"
                        )))
                    }
                }
            }
            let plan = SweepPlan {
                parameter: param.clone(),
                values: parse_values(&values)?,
                run: comp,
                oracle_n: n,
                oracle_m: m,
                ba_tol: tol,
            };
            let rows = figures::run_sweep(&doc, &plan, &cfg)?;
            emit(&cli.out, &figures::sweep_csv(&param, &rows))
        }
    }
}

fn lin_spaced(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 1 || !(lo <= hi) {
        return Err(Error::Domain("bad range".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect())
}

fn log_spaced(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || steps < 1 || !(lo <= hi) {
        return Err(Error::Domain("log range needs 0 < lo <= hi".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let (la, lb) = (lo.ln(), hi.ln());
    Ok((0..steps).map(|i| (la + (lb - la) * i as f64 / (steps - 1) as f64).exp()).collect())
}
