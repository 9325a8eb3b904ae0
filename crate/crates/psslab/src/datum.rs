//! Initial-datum presets and synthetic test data.

use crate::solver::SolutionFrame;
use crate::spectral::{Field, PeriodicGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DatumError {
    #[error("unknown datum preset `{0}` (expected constant(c), cos(c, a) or file(path))")]
    UnknownPreset(String),
    #[error("datum `{0}`: {1}")]
    BadArguments(String, String),
}

/// Initial-datum descriptor.
///
/// `Cos { offset, amplitude }` means `offset + amplitude * cos(2 pi x)`; the
/// default demo values `(0.5, 0.01)` keep the momentum density
/// `m0 = offset + amplitude (1 + 4 pi^2) cos(2 pi x)` strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub enum Datum {
    Constant(f64),
    Cos { offset: f64, amplitude: f64 },
    File(String),
}

impl Datum {
    /// Sample the datum on a grid. `File` data must contain exactly
    /// `grid.n_points()` CSV rows `x,value` after the header.
    pub fn build(&self, grid: PeriodicGrid) -> Result<Field, String> {
        match self {
            Datum::Constant(c) => Ok(Field::constant(grid, *c)),
            Datum::Cos { offset, amplitude } => {
                let (c, a) = (*offset, *amplitude);
                Ok(Field::from_fn(grid, |x| c + a * (2.0 * PI * x).cos()))
            }
            Datum::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read datum file {path}: {e}"))?;
                let mut values = Vec::new();
                for (i, line) in text.lines().enumerate() {
                    if i == 0 && line.trim().starts_with(|c: char| c.is_alphabetic()) {
                        continue; // header row
                    }
                    if line.trim().is_empty() {
                        continue;
                    }
                    let value = line
                        .split(',')
                        .nth(1)
                        .ok_or_else(|| format!("{path}:{}: expected `x,value`", i + 1))?
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| format!("{path}:{}: {e}", i + 1))?;
                    values.push(value);
                }
                Field::new(grid, values).map_err(|e| format!("datum file {path}: {e}"))
            }
        }
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Constant(c) => write!(f, "constant({c})"),
            Datum::Cos { offset, amplitude } => write!(f, "cos({offset}, {amplitude})"),
            Datum::File(path) => write!(f, "file({path})"),
        }
    }
}

impl FromStr for Datum {
    type Err = DatumError;

    fn from_str(s: &str) -> Result<Self, DatumError> {
        let s = s.trim();
        let (name, rest) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            _ => return Err(DatumError::UnknownPreset(s.to_string())),
        };
        let args: Vec<&str> = rest.split(',').map(str::trim).collect();
        let parse = |v: &str| {
            v.parse::<f64>()
                .map_err(|e| DatumError::BadArguments(s.to_string(), e.to_string()))
        };
        match name.trim() {
            "constant" if args.len() == 1 => Ok(Datum::Constant(parse(args[0])?)),
            "cos" if args.len() == 2 => Ok(Datum::Cos {
                offset: parse(args[0])?,
                amplitude: parse(args[1])?,
            }),
            "file" if args.len() == 1 && !args[0].is_empty() => {
                Ok(Datum::File(args[0].to_string()))
            }
            _ => Err(DatumError::UnknownPreset(s.to_string())),
        }
    }
}

/// Seeded band-limited random field: modes `1..=kmax` with amplitudes
/// `amp * exp(-0.4 k)` and standard normal weights, plus a constant offset.
///
/// Used by the randomized verification checks; modest amplitudes keep
/// quadratic products well inside the resolved band.
pub fn random_smooth(grid: PeriodicGrid, seed: u64, kmax: usize, amp: f64, offset: f64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![offset; grid.n_points()];
    for k in 1..=kmax {
        let a = amp * (-0.4 * k as f64).exp();
        let (wc, ws): (f64, f64) = (gaussian(&mut rng), gaussian(&mut rng));
        for (j, v) in values.iter_mut().enumerate() {
            let phase = 2.0 * PI * k as f64 * grid.point(j);
            *v += a * (wc * phase.cos() + ws * phase.sin());
        }
    }
    Field::new(grid, values).expect("generated field is finite by construction")
}

/// Synthetic frame for the travelling profile `u = e^{x - c t}` with exact
/// jets. Solves the equation for every `c`; all jets coincide with `u` and
/// `m = u - u_xx` vanishes identically, so `m_t = 0`.
pub fn exp_travelling_frame(grid: PeriodicGrid, c: f64, t: f64) -> SolutionFrame {
    SolutionFrame::synthetic(t, grid, move |x| {
        let u = (x - c * t).exp();
        (u, u, u, u, -c * u, 0.0)
    })
}

/// Off-shell synthetic frame `u = sin(2 pi x) cos(t)` with exact jets;
/// `m = (1 + 4 pi^2) u` so `m_t = -(1 + 4 pi^2) sin(2 pi x) sin(t)`.
pub fn sin_cos_frame(grid: PeriodicGrid, t: f64) -> SolutionFrame {
    SolutionFrame::synthetic(t, grid, move |x| {
        let w = 2.0 * PI;
        let (s, c) = (w * x).sin_cos();
        (
            s * t.cos(),
            w * c * t.cos(),
            -w * w * s * t.cos(),
            -w * w * w * c * t.cos(),
            -s * t.sin(),
            -(1.0 + w * w) * s * t.sin(),
        )
    })
}

// Box-Muller; avoids pulling in rand_distr for one distribution.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}
