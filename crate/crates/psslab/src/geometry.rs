//! One-forms of the pseudospherical-surface structure carried by solutions,
//! and numerical verification of the exterior-calculus identities they obey.
//!
//! For parameters `m1 in {-2, 1}`, `mu` real and a sign branch `s = +-1`, the
//! coefficient matrix of the triad `w_i = f_i1 dx + f_i2 dt` is
//!
//! ```text
//! f11 = m                      f12 = 2 u m + psi
//! f21 = mu m + s m1 q          f22 = mu f12
//! f31 = s q m + m1 mu          f32 = s q f12
//! ```
//!
//! with `m = u - u_xx`, `q = sqrt(1 + mu^2)` and
//! `psi = (4/m1) u u_x - 2 u_x^2 - 2 u^2`.
//!
//! Orientation convention: all exterior-derivative residuals and the matrix
//! `Sigma` below are reported as coefficients of `dt ^ dx`. With that choice
//! the residual of the first structure equation equals the strong-form flow
//! residual `E` of [`crate::solver::pde_residual`], and the full residual triple
//! satisfies, identically in `u` (not only on solutions),
//!
//! ```text
//! r1 = E,   r2 = mu E,   r3 = s sqrt(1 + mu^2) E,
//! ```
//!
//! which closes to `Sigma = (E/2) [[mu, 1 - s q], [1 + s q, -mu]]`. The factor
//! `mu` on the second equation and the placement of `1 -+ s q` follow from the
//! linear relations between the rows of `f` and are verified symbolically and
//! numerically in the test suite; the residual of the third equation divided by
//! the first recovers `+- sqrt(1 + mu^2)` on either sign branch.

use crate::solver::SolutionFrame;
use crate::spectral::Field;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("m1 must be -2 or 1, got {0}")]
    BadM1(i64),
    #[error("sign branch must be +1 or -1, got {0}")]
    BadSign(i64),
    #[error("genericity threshold must be positive and finite, got {0}")]
    BadThreshold(f64),
}

/// The admissible values of the parameter `m1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum M1 {
    MinusTwo,
    One,
}

impl M1 {
    pub fn from_i64(v: i64) -> Result<Self, GeometryError> {
        match v {
            -2 => Ok(M1::MinusTwo),
            1 => Ok(M1::One),
            other => Err(GeometryError::BadM1(other)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            M1::MinusTwo => -2.0,
            M1::One => 1.0,
        }
    }
}

/// A `+-1` branch sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Self, GeometryError> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(GeometryError::BadSign(other)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Parameters selecting one of the one-form families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PssParams {
    pub mu: f64,
    pub m1: M1,
    pub sign: Sign,
}

impl PssParams {
    pub fn new(mu: f64, m1: M1, sign: Sign) -> Self {
        Self { mu, m1, sign }
    }

    /// `sqrt(1 + mu^2)`.
    pub fn q(&self) -> f64 {
        (1.0 + self.mu * self.mu).sqrt()
    }

    /// All four `(m1, sign)` branches at a fixed `mu`.
    pub fn all_branches(mu: f64) -> [PssParams; 4] {
        [
            PssParams::new(mu, M1::MinusTwo, Sign::Plus),
            PssParams::new(mu, M1::MinusTwo, Sign::Minus),
            PssParams::new(mu, M1::One, Sign::Plus),
            PssParams::new(mu, M1::One, Sign::Minus),
        ]
    }
}

/// Coefficients `f_ij` of the one-form triad on a frame, together with the
/// data needed to differentiate them.
///
/// `df12_dx` is assembled by the chain rule from the frame's jets (never by a
/// transform), so synthetic non-periodic frames are handled exactly; `m_t`
/// supplies every `d_t f_i1` through the linear relations between rows.
#[derive(Debug, Clone)]
pub struct FrameForms {
    pub t: f64,
    pub params: PssParams,
    pub f11: Field,
    pub f12: Field,
    pub f21: Field,
    pub f22: Field,
    pub f31: Field,
    pub f32: Field,
    pub psi: Field,
    df12_dx: Field,
    m_t: Field,
}

/// Evaluate the one-form coefficients on a frame.
pub fn one_form_coeffs(frame: &SolutionFrame, params: PssParams) -> FrameForms {
    let (u, ux, uxx, uxxx) = (&frame.u, &frame.u_x, &frame.u_xx, &frame.u_xxx);
    let m1 = params.m1.value();
    let q = params.q();
    let s = params.sign.value();

    let m = &frame.m;
    // psi = (4/m1) u u_x - 2 u_x^2 - 2 u^2
    let psi = u
        .mul(ux)
        .scale(4.0 / m1)
        .sub(&ux.mul(ux).scale(2.0))
        .sub(&u.mul(u).scale(2.0));
    let f12 = u.mul(m).scale(2.0).add(&psi);

    // d_x f12 = 2 u_x m + 2 u m_x + psi_x, with m_x = u_x - u_xxx and
    // psi_x = (4/m1)(u_x^2 + u u_xx) - 4 u_x u_xx - 4 u u_x
    let m_x = ux.sub(uxxx);
    let psi_x = ux
        .mul(ux)
        .add(&u.mul(uxx))
        .scale(4.0 / m1)
        .sub(&ux.mul(uxx).scale(4.0))
        .sub(&u.mul(ux).scale(4.0));
    let df12_dx = ux.mul(m).scale(2.0).add(&u.mul(&m_x).scale(2.0)).add(&psi_x);

    FrameForms {
        t: frame.t,
        params,
        f11: m.clone(),
        f21: m.scale(params.mu).shift(s * m1 * q),
        f31: m.scale(s * q).shift(m1 * params.mu),
        f22: f12.scale(params.mu),
        f32: f12.scale(s * q),
        f12,
        psi,
        df12_dx,
        m_t: frame.m_t.clone(),
    }
}

/// Coefficient of `dx ^ dt` in `w1 ^ w2`, namely `f11 f22 - f12 f21`.
///
/// Equals `s sqrt(1 + mu^2) (2 m1 u u_xx - 4 u u_x + 2 m1 u_x^2)` in closed
/// form; solutions with a vanishing wedge are non-generic and carry no
/// curvature information.
pub fn wedge12_coeff(forms: &FrameForms) -> Field {
    forms.f11.mul(&forms.f22).sub(&forms.f12.mul(&forms.f21))
}

/// Residuals of the three structure equations as `dt ^ dx` coefficients:
///
/// ```text
/// r1 = coeff(d w1 - w3 ^ w2),  r2 = coeff(d w2 - w1 ^ w3),  r3 = coeff(d w3 - w1 ^ w2).
/// ```
#[derive(Debug, Clone)]
pub struct StructureResiduals {
    pub r1: Field,
    pub r2: Field,
    pub r3: Field,
}

pub fn structure_residuals(forms: &FrameForms) -> StructureResiduals {
    let q = forms.params.q();
    let s = forms.params.sign.value();
    let mu = forms.params.mu;
    let mt = &forms.m_t;
    let df12 = &forms.df12_dx;

    // d_t f21 = mu m_t, d_t f31 = s q m_t; d_x f22 = mu d_x f12, d_x f32 = s q d_x f12.
    let r1 = mt
        .sub(df12)
        .add(&forms.f31.mul(&forms.f22).sub(&forms.f32.mul(&forms.f21)));
    let r2 = mt
        .sub(df12)
        .scale(mu)
        .add(&forms.f11.mul(&forms.f32).sub(&forms.f12.mul(&forms.f31)));
    let r3 = mt
        .sub(df12)
        .scale(s * q)
        .add(&forms.f11.mul(&forms.f22).sub(&forms.f12.mul(&forms.f21)));
    StructureResiduals { r1, r2, r3 }
}

/// Entries of `Sigma = d Omega - Omega ^ Omega` as `dt ^ dx` coefficients, for
/// the sl(2) matrix of one-forms
///
/// ```text
/// Omega = 1/2 [[w2, w1 - w3], [w1 + w3, -w2]].
/// ```
///
/// `Sigma` vanishes exactly when the flow residual `E` does; its trace is zero
/// identically, and its entries equal `(E/2) [[mu, 1 - s q], [1 + s q, -mu]]`.
pub fn sigma_residual(forms: &FrameForms) -> [[Field; 2]; 2] {
    // Omega entries as (dx-coefficient, dt-coefficient) pairs.
    let half = |f: &Field| f.scale(0.5);
    let o11 = (half(&forms.f21), half(&forms.f22));
    let o12 = (
        forms.f11.sub(&forms.f31).scale(0.5),
        forms.f12.sub(&forms.f32).scale(0.5),
    );
    let o21 = (
        forms.f11.add(&forms.f31).scale(0.5),
        forms.f12.add(&forms.f32).scale(0.5),
    );
    let o22 = (half(&forms.f21).scale(-1.0), half(&forms.f22).scale(-1.0));

    // d_t of the dx-coefficients, using the linear relations on the rows.
    let mu = forms.params.mu;
    let q = forms.params.q();
    let s = forms.params.sign.value();
    let mt = &forms.m_t;
    let df12 = &forms.df12_dx;
    let dt_dx_coeff = [
        [mt.scale(mu * 0.5), mt.scale((1.0 - s * q) * 0.5)],
        [mt.scale((1.0 + s * q) * 0.5), mt.scale(-mu * 0.5)],
    ];
    let dx_dt_coeff = [
        [df12.scale(mu * 0.5), df12.scale((1.0 - s * q) * 0.5)],
        [df12.scale((1.0 + s * q) * 0.5), df12.scale(-mu * 0.5)],
    ];

    // dt^dx coefficient of a wedge of two one-forms.
    let wedge = |a: &(Field, Field), b: &(Field, Field)| a.1.mul(&b.0).sub(&a.0.mul(&b.1));
    let entries_prod = [
        [
            wedge(&o11, &o11).add(&wedge(&o12, &o21)),
            wedge(&o11, &o12).add(&wedge(&o12, &o22)),
        ],
        [
            wedge(&o21, &o11).add(&wedge(&o22, &o21)),
            wedge(&o21, &o12).add(&wedge(&o22, &o22)),
        ],
    ];

    let entry = |i: usize, j: usize| {
        dt_dx_coeff[i][j]
            .sub(&dx_dt_coeff[i][j])
            .sub(&entries_prod[i][j])
    };
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// Genericity mask: points where `|wedge| > tau * max(1, ||wedge||_inf)`.
#[derive(Debug, Clone, Serialize)]
pub struct GenericityReport {
    pub mask: Vec<bool>,
    pub generic_fraction: f64,
    pub tau: f64,
    pub wedge_max: f64,
}

pub const DEFAULT_GENERICITY_TAU: f64 = 1e-8;

pub fn classify_genericity(forms: &FrameForms, tau: f64) -> Result<GenericityReport, GeometryError> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(GeometryError::BadThreshold(tau));
    }
    let wedge = wedge12_coeff(forms);
    let wedge_max = wedge.max_abs();
    let threshold = tau * wedge_max.max(1.0);
    let mask: Vec<bool> = wedge.values().iter().map(|w| w.abs() > threshold).collect();
    let generic = mask.iter().filter(|&&b| b).count();
    Ok(GenericityReport {
        generic_fraction: generic as f64 / mask.len() as f64,
        mask,
        tau,
        wedge_max,
    })
}

/// Gaussian curvature on the generic set.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    /// `K` where the mask is set, `None` elsewhere.
    pub values: Vec<Option<f64>>,
    pub genericity: GenericityReport,
}

impl CurvatureReport {
    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|v| v.is_none())
    }

    /// Largest `|K + 1|` over the generic set, if any point is generic.
    pub fn max_deviation_from_minus_one(&self) -> Option<f64> {
        self.values
            .iter()
            .flatten()
            .map(|k| (k + 1.0).abs())
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
    }
}

/// Curvature from the Gauss equation,
/// `K = -(d_x f32 - d_t f31) / (f11 f22 - f12 f21)`,
/// evaluated where the wedge exceeds the genericity threshold and masked
/// elsewhere. A fully non-generic frame yields an empty report.
pub fn gaussian_curvature(forms: &FrameForms, tau: f64) -> Result<CurvatureReport, GeometryError> {
    let genericity = classify_genericity(forms, tau)?;
    let q = forms.params.q();
    let s = forms.params.sign.value();
    // d_x f32 - d_t f31 = s q (d_x f12 - m_t)
    let numerator = forms.df12_dx.sub(&forms.m_t).scale(s * q);
    let wedge = wedge12_coeff(forms);
    let values = numerator
        .values()
        .iter()
        .zip(wedge.values())
        .zip(&genericity.mask)
        .map(|((num, w), &ok)| if ok { Some(-num / w) } else { None })
        .collect();
    Ok(CurvatureReport { values, genericity })
}

/// Everything the geometry checks produce for one frame and branch.
#[derive(Debug, Clone)]
pub struct GeometryReport {
    pub params: PssParams,
    pub t: f64,
    pub residuals: StructureResiduals,
    pub sigma: [[Field; 2]; 2],
    pub wedge: Field,
    pub curvature: CurvatureReport,
}

pub fn geometry_report(
    frame: &SolutionFrame,
    params: PssParams,
    tau: f64,
) -> Result<GeometryReport, GeometryError> {
    let forms = one_form_coeffs(frame, params);
    Ok(GeometryReport {
        params,
        t: frame.t,
        residuals: structure_residuals(&forms),
        sigma: sigma_residual(&forms),
        wedge: wedge12_coeff(&forms),
        curvature: gaussian_curvature(&forms, tau)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{pde_residual, SolutionFrame};
    use crate::spectral::PeriodicGrid;
    use std::f64::consts::PI;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    /// `u = e^{x - c t}` with exact jets; solves the equation for every `c`.
    fn exp_frame(g: PeriodicGrid, c: f64, t: f64) -> SolutionFrame {
        SolutionFrame::synthetic(t, g, move |x| {
            let u = (x - c * t).exp();
            (u, u, u, u, -c * u, 0.0)
        })
    }

    /// Off-shell synthetic `u = sin(2 pi x) cos(t)` with exact jets.
    fn sincos_frame(g: PeriodicGrid, t: f64) -> SolutionFrame {
        SolutionFrame::synthetic(t, g, move |x| {
            let (s, c) = (2.0 * PI * x).sin_cos();
            let w = 2.0 * PI;
            let u = s * t.cos();
            (
                u,
                w * c * t.cos(),
                -w * w * s * t.cos(),
                -w * w * w * c * t.cos(),
                -s * t.sin(),
                -(1.0 + w * w) * s * t.sin(),
            )
        })
    }

    fn constant_frame(g: PeriodicGrid, k: f64) -> SolutionFrame {
        SolutionFrame::from_u(0.0, Field::constant(g, k)).unwrap()
    }

    #[test]
    fn m1_and_sign_validation() {
        assert!(M1::from_i64(-2).is_ok());
        assert!(M1::from_i64(1).is_ok());
        assert_eq!(M1::from_i64(3), Err(GeometryError::BadM1(3)));
        assert_eq!(Sign::from_i64(0), Err(GeometryError::BadSign(0)));
    }

    #[test]
    fn forms_on_constant_solution() {
        let g = grid(64);
        let k = 1.25;
        let frame = constant_frame(g, k);
        for mu in [0.0, 1.0, -0.7] {
            for p in PssParams::all_branches(mu) {
                let forms = one_form_coeffs(&frame, p);
                let (m1, q, s) = (p.m1.value(), p.q(), p.sign.value());
                assert!(forms.f11.sub(&Field::constant(g, k)).max_abs() < 1e-13);
                assert!(forms.f12.max_abs() < 1e-13, "2k^2 + psi must cancel");
                assert!(forms.f22.max_abs() < 1e-13);
                assert!(forms.f32.max_abs() < 1e-13);
                assert!(
                    forms
                        .f21
                        .sub(&Field::constant(g, mu * k + s * m1 * q))
                        .max_abs()
                        < 1e-13
                );
                assert!(
                    forms
                        .f31
                        .sub(&Field::constant(g, s * q * k + m1 * mu))
                        .max_abs()
                        < 1e-13
                );
            }
        }
    }

    #[test]
    fn forms_on_exponential_profile() {
        // m = 0 identically, psi = -6 u^2, so w1 = -6 u^2 dt.
        let g = grid(64);
        let frame = exp_frame(g, 1.3, 0.2);
        let p = PssParams::new(0.5, M1::MinusTwo, Sign::Plus);
        let forms = one_form_coeffs(&frame, p);
        assert!(forms.f11.max_abs() < 1e-12);
        let expect = frame.u.mul(&frame.u).scale(-6.0);
        assert!(forms.psi.sub(&expect).max_abs() < 1e-11);
        assert!(forms.f12.sub(&expect).max_abs() < 1e-11);
    }

    #[test]
    fn linear_relations_between_rows_hold_pointwise() {
        let g = grid(128);
        let frame =
            SolutionFrame::from_u(0.0, crate::datum::random_smooth(g, 11, 10, 0.2, 0.6)).unwrap();
        for p in PssParams::all_branches(0.8) {
            let forms = one_form_coeffs(&frame, p);
            let (m1, q, s) = (p.m1.value(), p.q(), p.sign.value());
            assert!(forms.f22.sub(&forms.f12.scale(p.mu)).max_abs() < 1e-14);
            assert!(forms.f32.sub(&forms.f12.scale(s * q)).max_abs() < 1e-14);
            let f21 = forms.f11.scale(p.mu).shift(s * m1 * q);
            let f31 = forms.f11.scale(s * q).shift(m1 * p.mu);
            assert!(forms.f21.sub(&f21).max_abs() < 1e-14);
            assert!(forms.f31.sub(&f31).max_abs() < 1e-14);
        }
    }

    #[test]
    fn wedge_closed_form_on_random_frames() {
        let g = grid(128);
        let frame =
            SolutionFrame::from_u(0.0, crate::datum::random_smooth(g, 12, 10, 0.2, 0.5)).unwrap();
        for mu in [0.0, 1.0] {
            for p in PssParams::all_branches(mu) {
                let forms = one_form_coeffs(&frame, p);
                let (m1, q, s) = (p.m1.value(), p.q(), p.sign.value());
                let closed = frame
                    .u
                    .mul(&frame.u_xx)
                    .scale(2.0 * m1)
                    .sub(&frame.u.mul(&frame.u_x).scale(4.0))
                    .add(&frame.u_x.mul(&frame.u_x).scale(2.0 * m1))
                    .scale(s * q);
                assert!(wedge12_coeff(&forms).sub(&closed).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wedge_vanishes_exactly_on_known_non_generic_profiles() {
        let g = grid(64);
        let constant = constant_frame(g, 0.9);
        let exp = exp_frame(g, 0.7, 0.4);
        for p in PssParams::all_branches(1.0) {
            let w = wedge12_coeff(&one_form_coeffs(&constant, p));
            assert!(w.max_abs() < 1e-13);
        }
        // f(t) e^x is non-generic exactly for m1 = 1
        let p1 = PssParams::new(1.0, M1::One, Sign::Plus);
        assert!(wedge12_coeff(&one_form_coeffs(&exp, p1)).max_abs() == 0.0);
        // and generic for m1 = -2: wedge = -+ 12 sqrt(1+mu^2) u^2
        let p2 = PssParams::new(1.0, M1::MinusTwo, Sign::Plus);
        let w = wedge12_coeff(&one_form_coeffs(&exp, p2));
        let expect = exp.u.mul(&exp.u).scale(-12.0 * p2.q());
        assert!(w.sub(&expect).max_abs() < 1e-11);
    }

    #[test]
    fn structure_residuals_vanish_on_shell() {
        let g = grid(64);
        for p in PssParams::all_branches(0.6) {
            let r = structure_residuals(&one_form_coeffs(&constant_frame(g, 1.1), p));
            assert!(r.r1.max_abs() < 1e-12);
            assert!(r.r2.max_abs() < 1e-12);
            assert!(r.r3.max_abs() < 1e-12);

            let r = structure_residuals(&one_form_coeffs(&exp_frame(g, 0.9, 0.3), p));
            assert!(r.r1.max_abs() < 1e-12);
            assert!(r.r2.max_abs() < 1e-12);
            assert!(r.r3.max_abs() < 1e-12);
        }
    }

    #[test]
    fn off_shell_residuals_match_flow_residual_and_scalings() {
        let g = grid(128);
        let frame = sincos_frame(g, 0.4);
        let e = pde_residual(&frame);
        assert!(e.max_abs() > 0.1, "the synthetic frame must be genuinely off-shell");
        for mu in [0.0, 1.0] {
            for p in PssParams::all_branches(mu) {
                let r = structure_residuals(&one_form_coeffs(&frame, p));
                let sq = p.sign.value() * p.q();
                assert!(r.r1.sub(&e).max_abs() < 1e-9, "r1 = E");
                assert!(r.r2.sub(&e.scale(mu)).max_abs() < 1e-9, "r2 = mu E");
                assert!(r.r3.sub(&e.scale(sq)).max_abs() < 1e-9, "r3 = s q E");
                // pointwise ratio where r1 is well away from zero
                for (a, b) in r.r3.values().iter().zip(r.r1.values()) {
                    if b.abs() > 1e-8 {
                        assert!((a / b - sq).abs() < 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_matches_derived_matrix_and_shape() {
        let g = grid(128);
        let frame = sincos_frame(g, 0.7);
        let e = pde_residual(&frame);
        for mu in [0.0, 1.0] {
            for p in PssParams::all_branches(mu) {
                let sigma = sigma_residual(&one_form_coeffs(&frame, p));
                let sq = p.sign.value() * p.q();
                let expect = [
                    [e.scale(mu / 2.0), e.scale((1.0 - sq) / 2.0)],
                    [e.scale((1.0 + sq) / 2.0), e.scale(-mu / 2.0)],
                ];
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(sigma[i][j].sub(&expect[i][j]).max_abs() < 1e-9);
                    }
                }
                // trace-free for every input
                assert!(sigma[0][0].add(&sigma[1][1]).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sigma_vanishes_on_shell() {
        let g = grid(64);
        let frame = exp_frame(g, 1.1, 0.25);
        for p in PssParams::all_branches(1.0) {
            let sigma = sigma_residual(&one_form_coeffs(&frame, p));
            for row in &sigma {
                for entry in row {
                    assert!(entry.max_abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn curvature_is_minus_one_on_exponential_profile() {
        let g = grid(64);
        let frame = exp_frame(g, 0.8, 0.5);
        for p in PssParams::all_branches(0.3) {
            if p.m1 == M1::One {
                continue; // non-generic family for this profile
            }
            let report =
                gaussian_curvature(&one_form_coeffs(&frame, p), DEFAULT_GENERICITY_TAU).unwrap();
            assert!((report.genericity.generic_fraction - 1.0).abs() < 1e-12);
            let dev = report.max_deviation_from_minus_one().unwrap();
            assert!(dev < 1e-10, "curvature deviation {dev:e}");
        }
    }

    #[test]
    fn curvature_mask_is_empty_on_constant_frames() {
        let g = grid(64);
        let report = gaussian_curvature(
            &one_form_coeffs(&constant_frame(g, 0.5), PssParams::new(1.0, M1::One, Sign::Plus)),
            DEFAULT_GENERICITY_TAU,
        )
        .unwrap();
        assert!(report.is_empty());
        assert_eq!(report.genericity.generic_fraction, 0.0);
        assert!(report.max_deviation_from_minus_one().is_none());
    }

    #[test]
    fn genericity_dichotomy_for_exponential_profiles() {
        let g = grid(64);
        let frame = exp_frame(g, 1.0, 0.3);
        let g1 = classify_genericity(
            &one_form_coeffs(&frame, PssParams::new(0.0, M1::One, Sign::Plus)),
            DEFAULT_GENERICITY_TAU,
        )
        .unwrap();
        assert_eq!(g1.generic_fraction, 0.0);
        let g2 = classify_genericity(
            &one_form_coeffs(&frame, PssParams::new(0.0, M1::MinusTwo, Sign::Minus)),
            DEFAULT_GENERICITY_TAU,
        )
        .unwrap();
        assert_eq!(g2.generic_fraction, 1.0);
    }

    #[test]
    fn genericity_rejects_bad_threshold() {
        let g = grid(64);
        let forms = one_form_coeffs(
            &constant_frame(g, 1.0),
            PssParams::new(0.0, M1::One, Sign::Plus),
        );
        assert!(classify_genericity(&forms, 0.0).is_err());
        assert!(classify_genericity(&forms, f64::NAN).is_err());
    }
}
