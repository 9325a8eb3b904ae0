//! Command dispatch: `simulate`, `geometry`, `connection` and `verify` runs,
//! and deterministic artifact export for each.
//!
//! Exit codes: 0 = success, 1 = check failure or solver blowup, 2 = usage or
//! configuration error (the binary maps errors from here onto those codes).

use crate::config::{Command, RunConfig};
use crate::connection::{self, ConnectionSample};
use crate::geometry;
use crate::report::{
    self, ConnectionReport, GeometrySummary, Histogram, Provenance, ReportBundle, ReportError,
};
use crate::solver::{self, EvolveOptions};
use crate::spectral::Field;
use crate::verify::{self, VerifyOptions};
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Datum(String),
    #[error(transparent)]
    Solver(#[from] solver::SolverError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Connection(#[from] connection::ConnectionError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

/// Outcome of a dispatched command, already mapped to the exit-code contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Everything ran and every check (if any) passed.
    Success,
    /// The run completed but a check failed or the solver blew up.
    CheckFailure,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::CheckFailure => 1,
        }
    }
}

/// Worker-count cap honoring the `PSSLAB_THREADS` environment variable.
pub fn worker_count(tasks: usize) -> usize {
    let hw = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var("PSSLAB_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(hw);
    cap.min(hw).min(tasks.max(1))
}

/// Map `f` over `items` on up to [`worker_count`] threads, preserving order.
pub fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = worker_count(items.len());
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        for (slot, work) in out.chunks_mut(chunk).zip(items.chunks(chunk)) {
            let f = &f;
            scope.spawn(move || {
                for (o, item) in slot.iter_mut().zip(work) {
                    *o = Some(f(item));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("all slots filled")).collect()
}

fn evolve_options(config: &RunConfig) -> EvolveOptions {
    EvolveOptions {
        t_end: config.t_end,
        dt: config.dt,
        output_stride: config.output_stride,
        s_monitor: config.s_monitor,
        norm_ceiling: 1e6,
    }
}

fn build_datum(config: &RunConfig) -> Result<Field, CliError> {
    let grid = crate::spectral::PeriodicGrid::new(config.grid_n)
        .expect("config validation guarantees an admissible grid size");
    config.datum.build(grid).map_err(CliError::Datum)
}

/// Run one command against a validated configuration. Artifacts land in
/// `config.out_dir`; the report always embeds the exact configuration echo.
pub fn run_command(config: &RunConfig) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let out_dir = PathBuf::from(&config.out_dir);
    report::write_config_echo(&out_dir.join("config_echo.toml"), &config.to_toml_string())?;
    match config.command {
        Command::Simulate => run_simulate(config, &out_dir, started),
        Command::Geometry => run_geometry(config, &out_dir, started),
        Command::Connection => run_connection(config, &out_dir, started),
        Command::Verify => run_verify(config, &out_dir, started),
    }
}

fn bundle_for(config: &RunConfig, started: Instant) -> ReportBundle {
    ReportBundle::new(Provenance::new(
        config.command.to_string(),
        config.to_toml_string(),
        started.elapsed().as_millis(),
    ))
}

fn run_simulate(config: &RunConfig, out_dir: &Path, started: Instant) -> Result<Outcome, CliError> {
    let u0 = build_datum(config)?;
    let (mut trajectory, monitor) = solver::evolve(&u0, &evolve_options(config))?;
    trajectory.datum = config.datum.to_string();
    report::write_trajectory(&out_dir.join("frames"), &trajectory)?;
    let blew_up = trajectory.blowup.is_some();
    let mut bundle = bundle_for(config, started);
    bundle.blowup = trajectory.blowup.clone();
    bundle.monitor = Some(monitor);
    bundle.write_json(&out_dir.join("report.json"))?;
    if blew_up {
        eprintln!("simulate: blowup detected; partial trajectory written to {}", out_dir.display());
        Ok(Outcome::CheckFailure)
    } else {
        Ok(Outcome::Success)
    }
}

fn run_geometry(config: &RunConfig, out_dir: &Path, started: Instant) -> Result<Outcome, CliError> {
    let u0 = build_datum(config)?;
    let (trajectory, _) = solver::evolve(&u0, &evolve_options(config))?;
    let blew_up = trajectory.blowup.is_some();

    // Alias-free evaluation frames: quadratic coefficient fields of a flow
    // frame need spectral headroom, so refine before forming the triads. The
    // flow residual is shared across branches of the same frame.
    let mut refined = Vec::with_capacity(trajectory.frames.len());
    for frame in &trajectory.frames {
        let r = frame.refined(config.geometry_refine.max(1))?;
        let e = solver::pde_residual(&r);
        refined.push((r, e));
    }
    let branches = config.pss_branches();
    let tasks: Vec<(usize, geometry::PssParams)> = (0..refined.len())
        .flat_map(|i| branches.iter().map(move |&p| (i, p)))
        .collect();
    type TaskOutput = Result<(GeometrySummary, Vec<f64>), geometry::GeometryError>;
    let results: Vec<TaskOutput> = parallel_map(&tasks, |&(i, params)| {
        let (frame, flow_residual) = &refined[i];
        let rep = geometry::geometry_report(frame, params, config.genericity_tau)?;
        let curvature_samples = rep.curvature.values.iter().flatten().copied().collect();
        Ok((GeometrySummary::from_report(&rep, flow_residual), curvature_samples))
    });
    let mut summaries = Vec::with_capacity(results.len());
    let mut branch_samples: Vec<Vec<f64>> = vec![Vec::new(); branches.len()];
    for (task_idx, result) in results.into_iter().enumerate() {
        let (summary, samples) = result?;
        summaries.push(summary);
        // tasks enumerate branches fastest
        branch_samples[task_idx % branches.len()].extend(samples);
    }

    // Curvature histogram per branch over all frames, for external plotting.
    for (b, samples) in branch_samples.into_iter().enumerate() {
        let hist = Histogram::from_samples(samples.into_iter(), 64, -1.5, -0.5);
        hist.write_csv(&out_dir.join(format!("curvature_hist_branch{b}.csv")))?;
    }

    let all_non_generic = summaries.iter().all(|s| s.generic_fraction == 0.0);
    if all_non_generic {
        println!("geometry: all frames non-generic (wedge vanishes); curvature report empty");
    }
    let mut bundle = bundle_for(config, started);
    bundle.blowup = trajectory.blowup.clone();
    bundle.geometry = Some(summaries);
    bundle.write_json(&out_dir.join("report.json"))?;
    Ok(if blew_up {
        Outcome::CheckFailure
    } else {
        Outcome::Success
    })
}

fn run_connection(config: &RunConfig, out_dir: &Path, started: Instant) -> Result<Outcome, CliError> {
    let params = config.connection;
    let (samples, stop): (Vec<ConnectionSample>, _) = if params.mu == 0.0 {
        let domain = connection::validity_domain(&params);
        let (lo, hi) = match domain {
            connection::ValidityDomain::Interval { lo, hi } => {
                (lo.max(config.connection_z0), hi.min(config.connection_z_end))
            }
            connection::ValidityDomain::HalfLine { lo } => {
                (lo.max(config.connection_z0), config.connection_z_end)
            }
            connection::ValidityDomain::Empty => {
                eprintln!("connection: validity domain is empty for beta = {}, gamma = {}", params.beta, params.gamma);
                return Ok(Outcome::CheckFailure);
            }
        };
        let inset = config.connection_step;
        (
            connection::closed_form_samples(lo + inset, hi - inset, config.connection_step, &params)?,
            None,
        )
    } else {
        let traj = connection::integrate_connection(
            config.connection_z0,
            config.connection_b0,
            config.connection_z_end,
            config.connection_step,
            &params,
        )?;
        (traj.samples, Some(traj.stop))
    };

    let residuals = connection::codazzi_gauss_residuals(&samples, &params)?;
    report::write_samples_csv(&out_dir.join("samples.csv"), &samples)?;
    let mut bundle = bundle_for(config, started);
    bundle.connection = Some(ConnectionReport {
        params,
        z0: config.connection_z0,
        z_end: config.connection_z_end,
        step: config.connection_step,
        n_samples: samples.len(),
        stop,
        residuals,
        samples_file: "samples.csv".into(),
    });
    bundle.write_json(&out_dir.join("report.json"))?;
    Ok(Outcome::Success)
}

fn run_verify(config: &RunConfig, out_dir: &Path, started: Instant) -> Result<Outcome, CliError> {
    let results = verify::run_all(&VerifyOptions {
        seed: config.seed,
        tol_scale: config.tol_scale,
    });
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let total = results.len();
    println!(
        "verify: {}/{} checks passed in {:.1} s",
        total - failed,
        total,
        started.elapsed().as_secs_f64()
    );
    let mut bundle = bundle_for(config, started);
    bundle.checks = Some(results);
    bundle.write_json(&out_dir.join("report.json"))?;
    Ok(if failed == 0 {
        Outcome::Success
    } else {
        Outcome::CheckFailure
    })
}
