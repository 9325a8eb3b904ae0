//! Second-fundamental-form coefficients `a, b, c` compatible with the metric,
//! as functions of `z = m1 x`.
//!
//! Writing `a = phi1(z)`, `b = phi2(z)`, `c = phi3(z)`, compatibility reduces
//! to the Codazzi-Mainardi system
//!
//! ```text
//! phi1' + mu phi2' - phi1 - 2 mu phi2 + phi3 = 0
//! phi2' + mu phi3' + mu phi1 - 2 phi2 - mu phi3 = 0
//! ```
//!
//! together with the Gauss identity `phi1 phi3 - phi2^2 = -1`.
//!
//! For `mu = 0` the system closes in elementary functions:
//! `b = beta e^{2z}` and, with `Q(z) = gamma e^{2z} - beta^2 e^{4z} - 1`,
//!
//! ```text
//! a = +- sqrt(Q),    c = +- (beta^2 e^{4z} - 1) / sqrt(Q),
//! ```
//!
//! valid exactly where `Q > 0`. Note the `e^{4z}` in `c`'s numerator: it is
//! forced by differentiating `a` and imposing the Gauss identity (the variant
//! with `e^{2z}` satisfies the identity only at the isolated point `z = 0`; a
//! regression test pins this down).
//!
//! For `mu != 0` the system reduces to a scalar ODE for `phi2`. With
//! `phi = ((mu^2 - 1)/mu) phi2 - (beta/mu) e^{2z}` and
//! `Delta = phi^2 - 4 (1 - phi2^2)`:
//!
//! ```text
//! phi2' = [2 (1 + mu^2) sqrt(Delta) phi2 +- 2 beta e^{2z} phi]
//!       / [(1 + mu^2) sqrt(Delta) +- ((mu^2 - 1) phi + 4 mu phi2)]
//! ```
//!
//! after which `phi1 = (-phi +- sqrt(Delta))/2` and `phi3 = phi1 + phi`. The
//! reconstruction enforces the Gauss identity algebraically:
//! `phi1 phi3 = (Delta - phi^2)/4 = phi2^2 - 1`. The two `+-` choices (the
//! branch inside the ODE and the branch of `phi1`) must agree for the Codazzi
//! system to hold along the integrated samples; they are kept as separate
//! parameters so the mismatch is observable, and they default to matching.

use crate::geometry::{GeometryError, Sign, M1};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConnectionError {
    #[error("z = {z} lies outside the validity domain {domain}")]
    OutsideDomain { z: f64, domain: String },
    #[error("closed form requires mu = 0, got {0}")]
    RequiresMuZero(f64),
    #[error("ODE branch requires mu != 0")]
    RequiresMuNonzero,
    #[error("Delta = {0} < 0: phi1 reconstruction is not real here")]
    Ellipticity(f64),
    #[error("phi2' coefficient {0:e} is numerically singular")]
    SingularCoefficient(f64),
    #[error("invalid initial point: {0}")]
    Precondition(String),
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("need at least 5 samples for fourth-order differences, got {0}")]
    TooFewSamples(usize),
    #[error("samples must be uniformly spaced in z")]
    NonUniformSamples,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Parameters of the connection-form computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectionParams {
    pub mu: f64,
    pub m1: M1,
    /// Integration constant of the first integral of the Codazzi system.
    pub beta: f64,
    /// Second integration constant; only the `mu = 0` closed form uses it.
    pub gamma: f64,
    /// Sign of `phi1` in the closed form / reconstruction.
    pub branch_phi1: Sign,
    /// Sign branch inside the `phi2` ODE.
    pub branch_ode: Sign,
}

impl ConnectionParams {
    pub fn q(&self) -> f64 {
        (1.0 + self.mu * self.mu).sqrt()
    }
}

/// One evaluated point of the second fundamental form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConnectionSample {
    pub z: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ConnectionSample {
    /// Gauss identity defect `a c - b^2 + 1`.
    pub fn gauss_defect(&self) -> f64 {
        self.a * self.c - self.b * self.b + 1.0
    }

    /// The compatibility argument needs `a c != 0`; a vanishing product is
    /// reported, never silently accepted.
    pub fn ac_nonzero(&self) -> bool {
        self.a * self.c != 0.0
    }
}

/// Set of `z` values where the `mu = 0` closed form is real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ValidityDomain {
    Empty,
    /// Open interval `(lo, hi)`.
    Interval { lo: f64, hi: f64 },
    /// Open half line `(lo, inf)` (the `beta = 0` case).
    HalfLine { lo: f64 },
}

impl ValidityDomain {
    pub fn contains(&self, z: f64) -> bool {
        match *self {
            ValidityDomain::Empty => false,
            ValidityDomain::Interval { lo, hi } => z > lo && z < hi,
            ValidityDomain::HalfLine { lo } => z > lo,
        }
    }
}

impl std::fmt::Display for ValidityDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ValidityDomain::Empty => write!(f, "(empty)"),
            ValidityDomain::Interval { lo, hi } => write!(f, "({lo}, {hi})"),
            ValidityDomain::HalfLine { lo } => write!(f, "({lo}, inf)"),
        }
    }
}

/// Where `Q(z) = gamma e^{2z} - beta^2 e^{4z} - 1 > 0`.
///
/// For `beta != 0` this is the interval between `z = (1/2) ln y_-` and
/// `(1/2) ln y_+`, `y_+- = (gamma +- sqrt(gamma^2 - 4 beta^2)) / (2 beta^2)`,
/// nonempty exactly when `gamma > 2 |beta|`; for `beta = 0` it is the half
/// line `z > -(1/2) ln gamma`, nonempty exactly when `gamma > 0`.
pub fn validity_domain(params: &ConnectionParams) -> ValidityDomain {
    let (beta, gamma) = (params.beta, params.gamma);
    if beta == 0.0 {
        if gamma > 0.0 {
            ValidityDomain::HalfLine {
                lo: -0.5 * gamma.ln(),
            }
        } else {
            ValidityDomain::Empty
        }
    } else {
        let disc = gamma * gamma - 4.0 * beta * beta;
        if gamma <= 2.0 * beta.abs() || disc <= 0.0 {
            return ValidityDomain::Empty;
        }
        let b2 = 2.0 * beta * beta;
        let y_lo = (gamma - disc.sqrt()) / b2;
        let y_hi = (gamma + disc.sqrt()) / b2;
        ValidityDomain::Interval {
            lo: 0.5 * y_lo.ln(),
            hi: 0.5 * y_hi.ln(),
        }
    }
}

/// Closed-form `mu = 0` coefficients at `z`.
pub fn closed_form_abc(z: f64, params: &ConnectionParams) -> Result<ConnectionSample, ConnectionError> {
    if params.mu != 0.0 {
        return Err(ConnectionError::RequiresMuZero(params.mu));
    }
    let domain = validity_domain(params);
    let e2 = (2.0 * z).exp();
    let e4 = (4.0 * z).exp();
    let q = params.gamma * e2 - params.beta * params.beta * e4 - 1.0;
    if !domain.contains(z) || q <= 0.0 {
        return Err(ConnectionError::OutsideDomain {
            z,
            domain: domain.to_string(),
        });
    }
    let s = params.branch_phi1.value();
    let root = q.sqrt();
    Ok(ConnectionSample {
        z,
        a: s * root,
        b: params.beta * e2,
        c: s * (params.beta * params.beta * e4 - 1.0) / root,
    })
}

/// The `mu = 0` closed form with the numerator `beta^2 e^{2z} - 1` in `c`.
///
/// Kept only as a regression fixture: its Gauss defect is
/// `beta^2 e^{2z} (1 - e^{2z})`, which vanishes at `z = 0` and nowhere else
/// (for `beta != 0`), so it is not a valid second fundamental form.
pub fn closed_form_abc_with_e2z_numerator(
    z: f64,
    params: &ConnectionParams,
) -> Result<ConnectionSample, ConnectionError> {
    let correct = closed_form_abc(z, params)?;
    let e2 = (2.0 * z).exp();
    let q = params.gamma * e2 - params.beta * params.beta * (4.0 * z).exp() - 1.0;
    Ok(ConnectionSample {
        c: params.branch_phi1.value() * (params.beta * params.beta * e2 - 1.0) / q.sqrt(),
        ..correct
    })
}

fn phi_of(z: f64, phi2: f64, params: &ConnectionParams) -> f64 {
    let mu = params.mu;
    (mu * mu - 1.0) / mu * phi2 - params.beta / mu * (2.0 * z).exp()
}

const SINGULAR_COEFF_FLOOR: f64 = 1e-12;

/// Right-hand side of the `phi2` ODE for `mu != 0`.
///
/// Requires `Delta >= 0` (ellipticity error otherwise) and a nonsingular
/// coefficient; `Delta = 0` itself is degenerate but well defined as long as
/// the coefficient stays away from zero.
pub fn phi2_rhs(z: f64, phi2: f64, params: &ConnectionParams) -> Result<f64, ConnectionError> {
    if params.mu == 0.0 {
        return Err(ConnectionError::RequiresMuNonzero);
    }
    let mu = params.mu;
    let eps = params.branch_ode.value();
    let phi = phi_of(z, phi2, params);
    let delta = phi * phi - 4.0 * (1.0 - phi2 * phi2);
    if delta < 0.0 {
        return Err(ConnectionError::Ellipticity(delta));
    }
    let root = delta.sqrt();
    let one_mu2 = 1.0 + mu * mu;
    let denom = one_mu2 * root + eps * ((mu * mu - 1.0) * phi + 4.0 * mu * phi2);
    if denom.abs() < SINGULAR_COEFF_FLOOR {
        return Err(ConnectionError::SingularCoefficient(denom));
    }
    let numer = 2.0 * one_mu2 * root * phi2 + eps * 2.0 * params.beta * (2.0 * z).exp() * phi;
    Ok(numer / denom)
}

/// Rebuild `(phi1, phi3)` from `(z, phi2)` via the quadratic solution of the
/// Gauss identity; exact by construction: `phi1 phi3 - phi2^2 = -1`.
fn reconstruct(z: f64, phi2: f64, params: &ConnectionParams) -> Result<ConnectionSample, ConnectionError> {
    let phi = phi_of(z, phi2, params);
    let delta = phi * phi - 4.0 * (1.0 - phi2 * phi2);
    if delta < 0.0 {
        return Err(ConnectionError::Ellipticity(delta));
    }
    let phi1 = (-phi + params.branch_phi1.value() * delta.sqrt()) / 2.0;
    Ok(ConnectionSample {
        z,
        a: phi1,
        b: phi2,
        c: phi1 + phi,
    })
}

/// Why an integration stopped before reaching the end of the span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StopReason {
    ReachedEnd,
    /// `Delta` became negative inside a step.
    LostEllipticity { z: f64 },
    /// The `phi2'` coefficient became numerically singular.
    SingularCoefficient { z: f64 },
    /// The coefficient changed sign between accepted samples, which signals
    /// leaving the regime where the reduction is valid.
    CoefficientSignChange { z: f64 },
}

#[derive(Debug, Clone)]
pub struct ConnectionTrajectory {
    pub samples: Vec<ConnectionSample>,
    pub step: f64,
    pub stop: StopReason,
    pub params: ConnectionParams,
}

fn coeff_sign(z: f64, phi2: f64, params: &ConnectionParams) -> Result<f64, ConnectionError> {
    let mu = params.mu;
    let eps = params.branch_ode.value();
    let phi = phi_of(z, phi2, params);
    let delta = phi * phi - 4.0 * (1.0 - phi2 * phi2);
    if delta < 0.0 {
        return Err(ConnectionError::Ellipticity(delta));
    }
    Ok(((1.0 + mu * mu) * delta.sqrt() + eps * ((mu * mu - 1.0) * phi + 4.0 * mu * phi2)).signum())
}

/// RK4 integration of the `phi2` ODE over `[z0, z_end]` with fixed step,
/// reconstructing `(a, b, c)` at every accepted sample.
///
/// Stops early (with the reason recorded) if ellipticity or the coefficient
/// degenerate; an invalid initial point is a precondition error instead.
pub fn integrate_connection(
    z0: f64,
    b0: f64,
    z_end: f64,
    step: f64,
    params: &ConnectionParams,
) -> Result<ConnectionTrajectory, ConnectionError> {
    if params.mu == 0.0 {
        return Err(ConnectionError::RequiresMuNonzero);
    }
    if !(step > 0.0 && step.is_finite()) || z_end <= z0 {
        return Err(ConnectionError::BadStep(step));
    }
    phi2_rhs(z0, b0, params).map_err(|e| ConnectionError::Precondition(e.to_string()))?;
    let initial_sign = coeff_sign(z0, b0, params)
        .map_err(|e| ConnectionError::Precondition(e.to_string()))?;

    let n = ((z_end - z0) / step).round().max(1.0) as usize;
    let h = (z_end - z0) / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(reconstruct(z0, b0, params)?);
    let mut phi2 = b0;
    let mut stop = StopReason::ReachedEnd;
    for i in 0..n {
        let z = z0 + i as f64 * h;
        let step_result = (|| -> Result<f64, ConnectionError> {
            let k1 = phi2_rhs(z, phi2, params)?;
            let k2 = phi2_rhs(z + h / 2.0, phi2 + h / 2.0 * k1, params)?;
            let k3 = phi2_rhs(z + h / 2.0, phi2 + h / 2.0 * k2, params)?;
            let k4 = phi2_rhs(z + h, phi2 + h * k3, params)?;
            Ok(phi2 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        })();
        match step_result {
            Ok(next) => {
                let z_next = z0 + (i + 1) as f64 * h;
                match coeff_sign(z_next, next, params) {
                    Ok(sign) if sign == initial_sign => {
                        phi2 = next;
                        samples.push(reconstruct(z_next, phi2, params)?);
                    }
                    Ok(_) => {
                        stop = StopReason::CoefficientSignChange { z: z_next };
                        break;
                    }
                    Err(ConnectionError::Ellipticity(_)) => {
                        stop = StopReason::LostEllipticity { z: z_next };
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(ConnectionError::Ellipticity(_)) => {
                stop = StopReason::LostEllipticity { z: z + h };
                break;
            }
            Err(ConnectionError::SingularCoefficient(_)) => {
                stop = StopReason::SingularCoefficient { z: z + h };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ConnectionTrajectory {
        samples,
        step: h,
        stop,
        params: *params,
    })
}

/// Max-norm summary of the Codazzi and Gauss residuals over a sample set.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualSummary {
    /// `max |phi1' + mu phi2' - phi1 - 2 mu phi2 + phi3|`.
    pub codazzi_r1: f64,
    /// `max |phi2' + mu phi3' + mu phi1 - 2 phi2 - mu phi3|`.
    pub codazzi_r2: f64,
    /// `max |a c - b^2 + 1|`.
    pub gauss: f64,
    /// `z` values where `a c = 0` exactly (condition violation, reported).
    pub ac_zero_at: Vec<f64>,
    /// `z` values where `b = 0`; the closed form with `beta = 0` produces
    /// `b == 0` with the Gauss identity still satisfied, so this is
    /// informational rather than an error.
    pub b_zero_at: Vec<f64>,
}

/// Evaluate Codazzi and Gauss residuals on uniformly spaced samples using
/// fourth-order finite differences (one-sided at the ends).
pub fn codazzi_gauss_residuals(
    samples: &[ConnectionSample],
    params: &ConnectionParams,
) -> Result<ResidualSummary, ConnectionError> {
    if samples.len() < 5 {
        return Err(ConnectionError::TooFewSamples(samples.len()));
    }
    let h = samples[1].z - samples[0].z;
    for w in samples.windows(2) {
        if ((w[1].z - w[0].z) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(ConnectionError::NonUniformSamples);
        }
    }
    let a: Vec<f64> = samples.iter().map(|s| s.a).collect();
    let b: Vec<f64> = samples.iter().map(|s| s.b).collect();
    let c: Vec<f64> = samples.iter().map(|s| s.c).collect();
    let da = fd4(&a, h);
    let db = fd4(&b, h);
    let dc = fd4(&c, h);

    let mu = params.mu;
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    let mut gauss: f64 = 0.0;
    let mut ac_zero_at = Vec::new();
    let mut b_zero_at = Vec::new();
    for i in 0..samples.len() {
        let s = &samples[i];
        r1 = r1.max((da[i] + mu * db[i] - s.a - 2.0 * mu * s.b + s.c).abs());
        r2 = r2.max((db[i] + mu * dc[i] + mu * s.a - 2.0 * s.b - mu * s.c).abs());
        gauss = gauss.max(s.gauss_defect().abs());
        if !s.ac_nonzero() {
            ac_zero_at.push(s.z);
        }
        if s.b == 0.0 {
            b_zero_at.push(s.z);
        }
    }
    Ok(ResidualSummary {
        codazzi_r1: r1,
        codazzi_r2: r2,
        gauss,
        ac_zero_at,
        b_zero_at,
    })
}

/// Fourth-order first derivative on a uniform grid; centered five-point
/// stencil inside, one-sided five-point stencils at the two points near each
/// end.
fn fd4(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        / (12.0 * h);
    d[n - 2] =
        (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5])
            / (12.0 * h);
    d
}

/// Closed-form samples on `[lo, hi]` with spacing `step`.
pub fn closed_form_samples(
    lo: f64,
    hi: f64,
    step: f64,
    params: &ConnectionParams,
) -> Result<Vec<ConnectionSample>, ConnectionError> {
    if !(step > 0.0 && step.is_finite()) || hi <= lo {
        return Err(ConnectionError::BadStep(step));
    }
    // tolerate float fuzz when the span is an exact multiple of the step
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize;
    (0..=n)
        .map(|i| closed_form_abc(lo + i as f64 * step, params))
        .collect()
}
