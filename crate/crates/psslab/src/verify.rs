//! End-to-end verification suite.
//!
//! Every check pins a quantitative property of the implementation: oracle
//! equivalences of the spectral core, conservation and sign structure of the
//! evolution, the off-shell exterior-calculus identities of the one-form
//! triads, Gaussian curvature, and the second-fundamental-form branch.
//! Numbered checks correspond to the acceptance gate exercised by the
//! `acceptance` test target; unnumbered ones are additional module-level
//! properties run by the `verify` subcommand.
//!
//! All tolerances are pinned here, in code. `tol_scale` loosens (or tightens)
//! them multiplicatively for exploratory runs; the acceptance gate runs at
//! scale 1.

use crate::connection::{self, ConnectionParams, StopReason};
use crate::datum::{exp_travelling_frame, random_smooth, sin_cos_frame};
use crate::geometry::{self, PssParams, Sign, M1};
use crate::solver::{self, EvolveOptions, MonitorReport, SolutionFrame, Trajectory};
use crate::spectral::{self, Field, PeriodicGrid};
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    /// Acceptance-criterion number when the check belongs to the gate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u8>,
    pub passed: bool,
    /// Worst measured value of the checked quantity.
    pub measured: f64,
    /// Threshold the measurement is compared against.
    pub tolerance: f64,
    pub detail: String,
    pub runtime_ms: u128,
}

impl CheckResult {
    /// One line of the `verify` output.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let tag = match self.criterion {
            Some(c) => format!("criterion {c:2}"),
            None => "property    ".to_string(),
        };
        format!(
            "{status}  {tag}  {:<28} measured={:9.3e} tol={:9.3e}  [{} ms] {}",
            self.id, self.measured, self.tolerance, self.runtime_ms, self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tol_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            tol_scale: 1.0,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    id: &str,
    name: &str,
    criterion: Option<u8>,
    started: Instant,
    measured: f64,
    tolerance: f64,
    extra_pass: bool,
    detail: String,
) -> CheckResult {
    CheckResult {
        id: id.to_string(),
        name: name.to_string(),
        criterion,
        passed: measured <= tolerance && extra_pass,
        measured,
        tolerance,
        detail,
        runtime_ms: started.elapsed().as_millis(),
    }
}

/// The reference evolution shared by several checks:
/// `u0 = 0.5 + 0.01 cos(2 pi x)` (so `m0 > 0`), `n = 256`, `dt = 1e-4`,
/// `t` in `[0, 1]`, one frame every 100 steps.
pub struct BaseRun {
    pub trajectory: Trajectory,
    pub report: MonitorReport,
    pub wall_ms: u128,
}

pub fn base_run() -> BaseRun {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).expect("256 is a valid grid size");
    let u0 = Field::from_fn(grid, |x| 0.5 + 0.01 * (2.0 * PI * x).cos());
    let (trajectory, report) = solver::evolve(
        &u0,
        &EvolveOptions {
            t_end: 1.0,
            dt: Some(1e-4),
            output_stride: 100,
            s_monitor: 2.0,
            norm_ceiling: 1e6,
        },
    )
    .expect("reference options are valid");
    BaseRun {
        trajectory,
        report,
        wall_ms: started.elapsed().as_millis(),
    }
}

/// Run the full suite. The returned list always contains every check; each
/// records pass/fail with the measured value.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    let base = base_run();
    let mut out = vec![
        check_helmholtz_green_oracle(opts),
        check_formulation_equivalence(opts),
        check_mass_conservation(opts, &base),
        check_positivity_and_bounds(opts, &base),
        check_continuous_dependence(opts, &base),
        check_off_shell_structure(opts),
        check_gaussian_curvature(opts, &base),
        check_genericity_dichotomy(opts),
        check_second_fundamental_mu0(opts),
        check_second_fundamental_mu1(opts),
        check_temporal_self_convergence(opts),
    ];
    out.extend([
        check_transform_roundtrip(opts),
        check_dealias_idempotence(opts),
        check_sobolev_monotonicity(opts),
        check_validity_domain_sampling(opts),
        check_wedge_closed_form(opts),
        check_equilibrium(opts),
    ]);
    out
}

/// Criterion 1: the Green-kernel quadrature and the Helmholtz multiplier agree
/// to 1e-10 on 20 random smooth fields at n = 256, in under 5 seconds.
pub fn check_helmholtz_green_oracle(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let f = random_smooth(grid, opts.seed.wrapping_add(i), 12, 0.1, 0.4);
        let d = spectral::green_convolve(&f)
            .sub(&spectral::helmholtz_solve(&f))
            .max_abs();
        worst = worst.max(d);
    }
    let elapsed = started.elapsed();
    let in_budget = elapsed.as_secs_f64() < 5.0;
    check(
        "helmholtz_green_oracle",
        "Helmholtz inverse vs Green-kernel quadrature",
        Some(1),
        started,
        worst,
        1e-10 * opts.tol_scale,
        in_budget,
        format!("20 fields, n=256, {:.2} s (< 5 s)", elapsed.as_secs_f64()),
    )
}

/// Criterion 2: `(1 - d_xx) nonlocal_rhs(u)` equals the local-form flux
/// `d_x (2 u^2 + (u^2)_x - (u^2)_xx)` to 1e-9 on 20 random smooth fields.
pub fn check_formulation_equivalence(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let u = random_smooth(grid, opts.seed.wrapping_add(100 + i), 12, 0.1, 0.4);
        let lhs = spectral::helmholtz_apply(&solver::nonlocal_rhs(&u)).unwrap();
        worst = worst.max(lhs.sub(&solver::momentum_flux(&u)).max_abs());
    }
    check(
        "formulation_equivalence",
        "nonlocal vs local formulation",
        Some(2),
        started,
        worst,
        1e-9 * opts.tol_scale,
        true,
        "20 fields, n=256".into(),
    )
}

/// Criterion 3: conservation of the momentum integral on the reference run,
/// drift below 1e-8, runtime below 60 s.
pub fn check_mass_conservation(opts: &VerifyOptions, base: &BaseRun) -> CheckResult {
    let started = Instant::now();
    let in_budget = base.wall_ms < 60_000;
    check(
        "mass_conservation",
        "conserved momentum integral",
        Some(3),
        started,
        base.report.mass_drift,
        1e-8 * opts.tol_scale,
        in_budget && base.trajectory.blowup.is_none(),
        format!(
            "u0 = 0.5 + 0.01 cos, t in [0,1], dt=1e-4, run {} ms (< 60 s)",
            base.wall_ms
        ),
    )
}

/// Criterion 4: on the reference run the momentum density and the solution
/// stay positive and `max |u_x| <= ||m0||_L1 + 1e-8` at every frame.
pub fn check_positivity_and_bounds(opts: &VerifyOptions, base: &BaseRun) -> CheckResult {
    let started = Instant::now();
    let r = &base.report;
    let slack = 1e-8 * opts.tol_scale;
    // largest violation across the three bounds; <= 0 means all hold strictly
    let excess = (-r.min_m).max(-r.min_u).max(r.max_ux - r.m0_l1 - slack);
    let positive = r.min_m > 0.0 && r.min_u > 0.0;
    check(
        "positivity_and_bounds",
        "momentum sign, solution sign, gradient bound",
        Some(4),
        started,
        excess.max(0.0),
        0.0,
        positive && r.m0_nonnegative,
        format!(
            "min m = {:.4e}, min u = {:.4e}, max |u_x| = {:.4e}, ||m0||_L1 = {:.4e}",
            r.min_m, r.min_u, r.max_ux, r.m0_l1
        ),
    )
}

/// Criterion 5: the rescaled response `||u^eps(1) - u(1)||_2 / eps` agrees
/// across eps in {1e-4, 1e-5} within a factor of 1.5.
pub fn check_continuous_dependence(opts: &VerifyOptions, base: &BaseRun) -> CheckResult {
    let started = Instant::now();
    let grid = base.trajectory.frames[0].grid();
    let u_final = &base.trajectory.last().u;
    let mut ratios = Vec::new();
    for &eps in &[1e-4, 1e-5] {
        let u0 = Field::from_fn(grid, |x| 0.5 + (0.01 + eps) * (2.0 * PI * x).cos());
        let (traj, _) = solver::evolve(
            &u0,
            &EvolveOptions {
                t_end: 1.0,
                dt: Some(1e-4),
                output_stride: 10_000,
                ..Default::default()
            },
        )
        .unwrap();
        ratios.push(traj.last().u.sub(u_final).l2_norm() / eps);
    }
    let spread = ratios[0].max(ratios[1]) / ratios[0].min(ratios[1]);
    let factor = 1.0 + 0.5 * opts.tol_scale;
    check(
        "continuous_dependence",
        "continuity of the data-to-solution map",
        Some(5),
        started,
        spread,
        factor,
        true,
        format!("response ratios {:.6e}, {:.6e}", ratios[0], ratios[1]),
    )
}

/// Criterion 6: off-shell structure identities on `u = sin(2 pi x) cos(t)`
/// with analytic jets, for all four `(m1, sign)` branches and `mu` in {0, 1}:
/// `r1 = E`, `r2 = mu E` (hence `r1 = r2` at `mu = 1`),
/// `r3 = sign sqrt(1+mu^2) r1`, and `Sigma` equals
/// `(E/2) [[mu, 1 - s q], [1 + s q, -mu]]` with zero trace.
pub fn check_off_shell_structure(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let frame = sin_cos_frame(grid, 0.4);
    let e = solver::pde_residual(&frame);
    let mut worst: f64 = 0.0;
    let mut r1_vs_r2_at_mu1: f64 = 0.0;
    for &mu in &[0.0, 1.0] {
        for p in PssParams::all_branches(mu) {
            let forms = geometry::one_form_coeffs(&frame, p);
            let r = geometry::structure_residuals(&forms);
            let sq = p.sign.value() * p.q();
            worst = worst.max(r.r1.sub(&e).max_abs());
            worst = worst.max(r.r2.sub(&e.scale(mu)).max_abs());
            worst = worst.max(r.r3.sub(&r.r1.scale(sq)).max_abs());
            if mu == 1.0 {
                r1_vs_r2_at_mu1 = r1_vs_r2_at_mu1.max(r.r1.sub(&r.r2).max_abs());
            }
            let sigma = geometry::sigma_residual(&forms);
            let expect = [
                [e.scale(mu / 2.0), e.scale((1.0 - sq) / 2.0)],
                [e.scale((1.0 + sq) / 2.0), e.scale(-mu / 2.0)],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    worst = worst.max(sigma[i][j].sub(&expect[i][j]).max_abs());
                }
            }
            worst = worst.max(sigma[0][0].add(&sigma[1][1]).max_abs());
        }
    }
    worst = worst.max(r1_vs_r2_at_mu1);
    check(
        "off_shell_structure",
        "structure equations as identities in u",
        Some(6),
        started,
        worst,
        1e-9 * opts.tol_scale,
        true,
        "4 branches x mu in {0,1}; r2/r1 = mu, off-diagonal pair (1 -+ q)E/2".into(),
    )
}

/// Criterion 7: Gaussian curvature. The analytic travelling profile with
/// `m1 = -2` gives `K = -1` to 1e-10 everywhere; frames of the reference run
/// (evaluated alias-free on a twice-refined grid, mask threshold 1e-3) give
/// `K = -1` to 1e-3 with generic fraction above 0.99.
pub fn check_gaussian_curvature(opts: &VerifyOptions, base: &BaseRun) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let mut analytic_dev: f64 = 0.0;
    for &mu in &[0.0, 1.0] {
        for &sign in &[Sign::Plus, Sign::Minus] {
            let frame = exp_travelling_frame(grid, 0.8, 0.5);
            let forms =
                geometry::one_form_coeffs(&frame, PssParams::new(mu, M1::MinusTwo, sign));
            let report =
                geometry::gaussian_curvature(&forms, geometry::DEFAULT_GENERICITY_TAU).unwrap();
            analytic_dev = analytic_dev.max(
                report
                    .max_deviation_from_minus_one()
                    .expect("profile is fully generic"),
            );
        }
    }

    // On-flow frames: quadratic coefficient fields need twofold spectral
    // refinement to be alias-free; the mask threshold 1e-3 bounds the
    // quotient's conditioning while excluding well under 1% of points.
    let flow_tau = 1e-3;
    let mut flow_dev: f64 = 0.0;
    let mut min_fraction: f64 = 1.0;
    let n_frames = base.trajectory.frames.len();
    for idx in [n_frames / 4, n_frames / 2, 3 * n_frames / 4, n_frames - 1] {
        let refined = base.trajectory.frames[idx].refined(2).unwrap();
        for &sign in &[Sign::Plus, Sign::Minus] {
            let forms = geometry::one_form_coeffs(&refined, PssParams::new(0.0, M1::One, sign));
            let report = geometry::gaussian_curvature(&forms, flow_tau).unwrap();
            min_fraction = min_fraction.min(report.genericity.generic_fraction);
            flow_dev = flow_dev.max(
                report
                    .max_deviation_from_minus_one()
                    .expect("flow frames are generic"),
            );
        }
    }
    let analytic_ok = analytic_dev <= 1e-10 * opts.tol_scale;
    let fraction_ok = min_fraction > 0.99;
    check(
        "gaussian_curvature",
        "K = -1 on analytic and on-flow frames",
        Some(7),
        started,
        flow_dev,
        1e-3 * opts.tol_scale,
        analytic_ok && fraction_ok,
        format!(
            "analytic dev {analytic_dev:.3e} (tol 1e-10), flow generic fraction {min_fraction:.4}"
        ),
    )
}

/// Criterion 8: genericity dichotomy. Constant frames are 0% generic;
/// `u = f(t) e^x` is 0% generic for `m1 = 1` and 100% generic for `m1 = -2`.
pub fn check_genericity_dichotomy(_opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let tau = geometry::DEFAULT_GENERICITY_TAU;
    let constant = SolutionFrame::from_u(0.0, Field::constant(grid, 0.8)).unwrap();
    let exp = exp_travelling_frame(grid, 1.0, 0.3);
    let mut worst: f64 = 0.0;
    for &sign in &[Sign::Plus, Sign::Minus] {
        let f_const = geometry::classify_genericity(
            &geometry::one_form_coeffs(&constant, PssParams::new(1.0, M1::One, sign)),
            tau,
        )
        .unwrap()
        .generic_fraction;
        let f_exp_m1 = geometry::classify_genericity(
            &geometry::one_form_coeffs(&exp, PssParams::new(1.0, M1::One, sign)),
            tau,
        )
        .unwrap()
        .generic_fraction;
        let f_exp_m2 = geometry::classify_genericity(
            &geometry::one_form_coeffs(&exp, PssParams::new(1.0, M1::MinusTwo, sign)),
            tau,
        )
        .unwrap()
        .generic_fraction;
        worst = worst.max(f_const).max(f_exp_m1).max(1.0 - f_exp_m2);
    }
    check(
        "genericity_dichotomy",
        "generic fractions 0%/0%/100%",
        Some(8),
        started,
        worst,
        0.0,
        true,
        format!("tau = {tau:.1e}"),
    )
}

/// Criterion 9: `mu = 0` closed form at `(beta, gamma) = (0.5, 2)`.
/// Gauss identity to 1e-12 across the validity interval, Codazzi residuals to
/// 1e-9 at spacing 1e-3 on its interior, and the regression that the
/// `e^{2z}`-numerator variant of `c` violates Gauss by more than 0.1 (it
/// coincides with the corrected form only at the isolated point `z = 0`).
pub fn check_second_fundamental_mu0(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let params = ConnectionParams {
        mu: 0.0,
        m1: M1::One,
        beta: 0.5,
        gamma: 2.0,
        branch_phi1: Sign::Plus,
        branch_ode: Sign::Plus,
    };
    let (lo, hi) = match connection::validity_domain(&params) {
        connection::ValidityDomain::Interval { lo, hi } => (lo, hi),
        other => {
            return check(
                "second_fundamental_mu0",
                "mu = 0 closed form",
                Some(9),
                started,
                f64::INFINITY,
                0.0,
                false,
                format!("unexpected validity domain {other:?}"),
            )
        }
    };
    let interval_ok = (lo + 0.3119).abs() < 1e-4 && (hi - 1.0051).abs() < 1e-4;

    // Gauss identity across the whole interval (pointwise closed form).
    let gauss_samples = connection::closed_form_samples(lo + 1e-3, hi - 1e-3, 1e-3, &params).unwrap();
    let gauss: f64 = gauss_samples
        .iter()
        .map(|s| s.gauss_defect().abs())
        .fold(0.0, f64::max);

    // Codazzi residuals by finite differences; the sqrt vanishes at the
    // interval ends, so differencing stays 0.4 clear of the boundary to keep
    // the fourth-order stencils in their asymptotic range.
    let interior = connection::closed_form_samples(lo + 0.4, hi - 0.4, 1e-3, &params).unwrap();
    let summary = connection::codazzi_gauss_residuals(&interior, &params).unwrap();
    let codazzi = summary.codazzi_r1.max(summary.codazzi_r2);

    // Regression for the e^{2z}-numerator variant.
    let coincide_at_zero = connection::closed_form_abc_with_e2z_numerator(0.0, &params)
        .unwrap()
        .gauss_defect()
        .abs();
    let margin = connection::closed_form_abc_with_e2z_numerator(0.5, &params)
        .unwrap()
        .gauss_defect()
        .abs();
    let regression_ok = margin > 0.1 && coincide_at_zero < 1e-12;

    let measured = gauss.max(codazzi * 1e-3); // report on the tighter scale
    let passed_detail = gauss <= 1e-12 * opts.tol_scale && codazzi <= 1e-9 * opts.tol_scale;
    check(
        "second_fundamental_mu0",
        "mu = 0 closed form: Gauss, Codazzi, numerator regression",
        Some(9),
        started,
        measured,
        1e-12 * opts.tol_scale,
        interval_ok && regression_ok && passed_detail,
        format!(
            "gauss {gauss:.2e} (tol 1e-12), codazzi {codazzi:.2e} (tol 1e-9), \
             e2z-variant defect {margin:.2} at z=0.5 (> 0.1), {coincide_at_zero:.1e} at z=0"
        ),
    )
}

/// Criterion 10: `mu = 1, beta = 0, b0 = 1.2` over `z in [0, 0.5]`:
/// the integration reaches the end with `Delta > 0`, the Gauss identity holds
/// to 1e-13, Codazzi residuals to 1e-6, and the integrator self-converges at
/// order >= 3.8.
pub fn check_second_fundamental_mu1(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let params = ConnectionParams {
        mu: 1.0,
        m1: M1::One,
        beta: 0.0,
        gamma: 0.0,
        branch_phi1: Sign::Plus,
        branch_ode: Sign::Plus,
    };
    let traj = connection::integrate_connection(0.0, 1.2, 0.5, 1e-3, &params).unwrap();
    let reached_end = traj.stop == StopReason::ReachedEnd;
    // Delta = phi^2 - 4(1 - b^2) = 4(b^2 - 1) for beta = 0, mu = 1
    let delta_min = traj
        .samples
        .iter()
        .map(|s| 4.0 * (s.b * s.b - 1.0))
        .fold(f64::INFINITY, f64::min);
    let gauss: f64 = traj
        .samples
        .iter()
        .map(|s| s.gauss_defect().abs())
        .fold(0.0, f64::max);
    let summary = connection::codazzi_gauss_residuals(&traj.samples, &params).unwrap();
    let codazzi = summary.codazzi_r1.max(summary.codazzi_r2);

    let mut finals = Vec::new();
    for &h in &[4e-3, 2e-3, 1e-3] {
        let t = connection::integrate_connection(0.0, 1.2, 0.5, h, &params).unwrap();
        finals.push(t.samples.last().unwrap().b);
    }
    let order = ((finals[0] - finals[1]).abs() / (finals[1] - finals[2]).abs()).log2();

    check(
        "second_fundamental_mu1",
        "mu = 1 ODE branch: Gauss, Codazzi, convergence",
        Some(10),
        started,
        gauss,
        1e-13 * opts.tol_scale,
        reached_end && delta_min > 0.0 && codazzi <= 1e-6 * opts.tol_scale && order >= 3.8,
        format!(
            "delta_min {delta_min:.3e}, codazzi {codazzi:.2e} (tol 1e-6), order {order:.2}"
        ),
    )
}

/// Criterion 11: temporal self-convergence of the evolution at order >= 3.8 on
/// `dt` in {2e-4, 1e-4, 5e-5} at fixed `n = 256`.
///
/// The datum `1 + 0.2 cos(2 pi x)` is energetic enough that the `dt^4` error
/// differences sit orders of magnitude above accumulated round-off.
pub fn check_temporal_self_convergence(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let u0 = Field::from_fn(grid, |x| 1.0 + 0.2 * (2.0 * PI * x).cos());
    let mut finals = Vec::new();
    for &dt in &[2e-4, 1e-4, 5e-5] {
        let (traj, _) = solver::evolve(
            &u0,
            &EvolveOptions {
                t_end: 0.5,
                dt: Some(dt),
                output_stride: 100_000,
                ..Default::default()
            },
        )
        .unwrap();
        finals.push(traj.last().u.clone());
    }
    let d1 = finals[0].sub(&finals[1]).l2_norm();
    let d2 = finals[1].sub(&finals[2]).l2_norm();
    let order = (d1 / d2).log2();
    let min_order = 3.8 / opts.tol_scale;
    CheckResult {
        id: "temporal_self_convergence".into(),
        name: "fourth-order convergence of the evolution".into(),
        criterion: Some(11),
        passed: order >= min_order,
        measured: order,
        tolerance: min_order,
        detail: format!("diffs {d1:.3e} / {d2:.3e}; measured order vs required minimum"),
        runtime_ms: started.elapsed().as_millis(),
    }
}

// --- additional module-level properties (superset of the gate) ---

fn check_transform_roundtrip(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let f = random_smooth(grid, opts.seed.wrapping_add(200 + i), 20, 0.4, 0.1);
        let back = spectral::inverse(&spectral::forward(&f));
        worst = worst.max(back.sub(&f).max_abs() / f.max_abs());
        let hat = spectral::forward(&f);
        let nodal: f64 = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        let par: f64 = hat.coeffs().iter().map(|c| c.norm_sqr()).sum();
        worst = worst.max((nodal - par).abs() / nodal);
    }
    check(
        "transform_roundtrip",
        "transform inversion and Parseval",
        None,
        started,
        worst,
        1e-12 * opts.tol_scale,
        true,
        "5 random fields".into(),
    )
}

fn check_dealias_idempotence(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(256).unwrap();
    let f = random_smooth(grid, opts.seed.wrapping_add(300), 80, 0.4, 0.0);
    let once = spectral::dealias(&spectral::forward(&f));
    let twice = spectral::dealias(&once);
    let worst = once
        .coeffs()
        .iter()
        .zip(twice.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    let cut = once.mode_coeff(127).norm().max(once.mode_coeff(-120).norm());
    check(
        "dealias_idempotence",
        "2/3-rule truncation",
        None,
        started,
        worst.max(cut),
        0.0,
        true,
        "idempotent; modes above n/3 zeroed".into(),
    )
}

fn check_sobolev_monotonicity(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(128).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let f = random_smooth(grid, opts.seed.wrapping_add(400 + i), 20, 0.5, 0.2);
        let mut prev = 0.0;
        for &s in &[0.0, 0.5, 1.0, 2.0, 3.0, 4.0] {
            let v = spectral::sobolev_norm(&f, s);
            worst = worst.max(prev - v);
            prev = v;
        }
    }
    check(
        "sobolev_monotonicity",
        "norm embedding ||f||_r <= ||f||_s for r <= s",
        None,
        started,
        worst.max(0.0),
        0.0,
        true,
        "10 random fields, s in [0, 4]".into(),
    )
}

fn check_validity_domain_sampling(_opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let mut mismatches = 0u64;
    let cases = [
        (0.5, 2.0),
        (0.0, 1.0),
        (0.0, -0.5),
        (1.0, 1.5),
        (0.3, 0.7),
        (-0.4, 1.9),
    ];
    for &(beta, gamma) in &cases {
        let params = ConnectionParams {
            mu: 0.0,
            m1: M1::One,
            beta,
            gamma,
            branch_phi1: Sign::Plus,
            branch_ode: Sign::Plus,
        };
        let domain = connection::validity_domain(&params);
        for i in 0..2000 {
            let z = -3.0 + 6.0 * i as f64 / 1999.0;
            let q = gamma * (2.0 * z).exp() - beta * beta * (4.0 * z).exp() - 1.0;
            if domain.contains(z) != (q > 0.0) {
                mismatches += 1;
            }
        }
    }
    check(
        "validity_domain_sampling",
        "domain matches the sign of the radicand",
        None,
        started,
        mismatches as f64,
        0.0,
        true,
        format!("{} parameter pairs x 2000 samples", cases.len()),
    )
}

fn check_wedge_closed_form(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(128).unwrap();
    let frame = SolutionFrame::from_u(
        0.0,
        random_smooth(grid, opts.seed.wrapping_add(500), 10, 0.2, 0.5),
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for &mu in &[0.0, 1.0] {
        for p in PssParams::all_branches(mu) {
            let forms = geometry::one_form_coeffs(&frame, p);
            let (m1, q, s) = (p.m1.value(), p.q(), p.sign.value());
            let closed = frame
                .u
                .mul(&frame.u_xx)
                .scale(2.0 * m1)
                .sub(&frame.u.mul(&frame.u_x).scale(4.0))
                .add(&frame.u_x.mul(&frame.u_x).scale(2.0 * m1))
                .scale(s * q);
            worst = worst.max(geometry::wedge12_coeff(&forms).sub(&closed).max_abs());
        }
    }
    check(
        "wedge_closed_form",
        "wedge coefficient vs closed form",
        None,
        started,
        worst,
        1e-10 * opts.tol_scale,
        true,
        "8 branches".into(),
    )
}

fn check_equilibrium(opts: &VerifyOptions) -> CheckResult {
    let started = Instant::now();
    let grid = PeriodicGrid::new(64).unwrap();
    let (traj, report) = solver::evolve(
        &Field::constant(grid, 1.0),
        &EvolveOptions {
            t_end: 1.0,
            dt: Some(1e-2),
            output_stride: 10,
            ..Default::default()
        },
    )
    .unwrap();
    let dev = traj
        .frames
        .iter()
        .map(|f| f.u.sub(&Field::constant(grid, 1.0)).max_abs())
        .fold(0.0f64, f64::max);
    check(
        "equilibrium",
        "constants are exact equilibria",
        None,
        started,
        dev.max(report.mass_drift),
        1e-13 * opts.tol_scale,
        true,
        "u0 = 1, t_end = 1".into(),
    )
}
