//! Run configuration: a flat TOML file with `[run]`, `[grid]`, `[pss]`,
//! `[connection]` and `[output]` sections.
//!
//! Parsing validates the whole document and reports *all* violations, each
//! named by its key path, rather than stopping at the first.

use crate::connection::ConnectionParams;
use crate::datum::Datum;
use crate::geometry::{PssParams, Sign, M1};
use std::fmt;
use thiserror::Error;
use toml::Value;

#[derive(Debug, Error)]
#[error("invalid configuration:\n{}", .violations.join("\n"))]
pub struct ConfigErrors {
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Command {
    Simulate,
    Geometry,
    Connection,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::Simulate => "simulate",
            Command::Geometry => "geometry",
            Command::Connection => "connection",
            Command::Verify => "verify",
        };
        f.write_str(s)
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub grid_n: usize,
    pub t_end: f64,
    /// `None` selects the step heuristic.
    pub dt: Option<f64>,
    pub output_stride: usize,
    pub s_monitor: f64,
    pub datum: Datum,
    pub seed: u64,
    pub tol_scale: f64,
    /// Branch sets evaluated by geometry runs.
    pub pss_mu: Vec<f64>,
    pub pss_m1: Vec<M1>,
    pub pss_sign: Vec<Sign>,
    pub genericity_tau: f64,
    /// Spectral refinement factor for geometry evaluation of flow frames.
    pub geometry_refine: usize,
    pub connection: ConnectionParams,
    pub connection_z0: f64,
    pub connection_b0: f64,
    pub connection_z_end: f64,
    pub connection_step: f64,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Simulate,
            grid_n: 256,
            t_end: 1.0,
            dt: None,
            output_stride: 100,
            s_monitor: 2.0,
            datum: Datum::Cos {
                offset: 0.5,
                amplitude: 0.01,
            },
            seed: 7,
            tol_scale: 1.0,
            pss_mu: vec![0.0, 1.0],
            pss_m1: vec![M1::MinusTwo, M1::One],
            pss_sign: vec![Sign::Plus, Sign::Minus],
            genericity_tau: crate::geometry::DEFAULT_GENERICITY_TAU,
            geometry_refine: 2,
            connection: ConnectionParams {
                mu: 1.0,
                m1: M1::One,
                beta: 0.0,
                gamma: 2.0,
                branch_phi1: Sign::Plus,
                branch_ode: Sign::Plus,
            },
            connection_z0: 0.0,
            connection_b0: 1.2,
            connection_z_end: 0.5,
            connection_step: 1e-3,
            out_dir: "out".into(),
        }
    }
}

impl RunConfig {
    /// All `(mu, m1, sign)` geometry branches selected by this config.
    pub fn pss_branches(&self) -> Vec<PssParams> {
        let mut out = Vec::new();
        for &mu in &self.pss_mu {
            for &m1 in &self.pss_m1 {
                for &sign in &self.pss_sign {
                    out.push(PssParams::new(mu, m1, sign));
                }
            }
        }
        out
    }

    /// Serialize back to the TOML layout accepted by [`parse_config`].
    pub fn to_toml_string(&self) -> String {
        let sign_i = |s: Sign| if s == Sign::Plus { 1 } else { -1 };
        let m1_i = |m: M1| if m == M1::One { 1 } else { -2 };
        let mut out = String::new();
        out.push_str("[run]\n");
        out.push_str(&format!("command = \"{}\"\n", self.command));
        out.push_str(&format!("t_end = {:?}\n", self.t_end));
        if let Some(dt) = self.dt {
            out.push_str(&format!("dt = {dt:?}\n"));
        }
        out.push_str(&format!("output_stride = {}\n", self.output_stride));
        out.push_str(&format!("s_monitor = {:?}\n", self.s_monitor));
        out.push_str(&format!("datum = \"{}\"\n", self.datum));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("tol_scale = {:?}\n", self.tol_scale));
        out.push_str("\n[grid]\n");
        out.push_str(&format!("n = {}\n", self.grid_n));
        out.push_str("\n[pss]\n");
        out.push_str(&format!(
            "mu = [{}]\n",
            self.pss_mu
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "m1 = [{}]\n",
            self.pss_m1
                .iter()
                .map(|&v| m1_i(v).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "sign = [{}]\n",
            self.pss_sign
                .iter()
                .map(|&v| sign_i(v).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!("genericity_tau = {:?}\n", self.genericity_tau));
        out.push_str(&format!("refine = {}\n", self.geometry_refine));
        out.push_str("\n[connection]\n");
        out.push_str(&format!("mu = {:?}\n", self.connection.mu));
        out.push_str(&format!("m1 = {}\n", m1_i(self.connection.m1)));
        out.push_str(&format!("beta = {:?}\n", self.connection.beta));
        out.push_str(&format!("gamma = {:?}\n", self.connection.gamma));
        out.push_str(&format!(
            "branch_phi1 = {}\n",
            sign_i(self.connection.branch_phi1)
        ));
        out.push_str(&format!(
            "branch_ode = {}\n",
            sign_i(self.connection.branch_ode)
        ));
        out.push_str(&format!("z0 = {:?}\n", self.connection_z0));
        out.push_str(&format!("b0 = {:?}\n", self.connection_b0));
        out.push_str(&format!("z_end = {:?}\n", self.connection_z_end));
        out.push_str(&format!("step = {:?}\n", self.connection_step));
        out.push_str("\n[output]\n");
        out.push_str(&format!("dir = {:?}\n", self.out_dir));
        out
    }
}

struct Validator {
    violations: Vec<String>,
}

impl Validator {
    fn fail(&mut self, path: &str, msg: impl fmt::Display) {
        self.violations.push(format!("{path}: {msg}"));
    }

    fn float(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<f64> {
        match table.get(key) {
            None => None,
            Some(Value::Float(f)) if f.is_finite() => Some(*f),
            Some(Value::Integer(i)) => Some(*i as f64),
            Some(Value::Float(f)) => {
                self.fail(&format!("{path}.{key}"), format!("must be finite, got {f}"));
                None
            }
            Some(other) => {
                self.fail(
                    &format!("{path}.{key}"),
                    format!("expected a number, got {}", other.type_str()),
                );
                None
            }
        }
    }

    fn integer(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<i64> {
        match table.get(key) {
            None => None,
            Some(Value::Integer(i)) => Some(*i),
            Some(other) => {
                self.fail(
                    &format!("{path}.{key}"),
                    format!("expected an integer, got {}", other.type_str()),
                );
                None
            }
        }
    }

    fn string(&mut self, table: &toml::Table, path: &str, key: &str) -> Option<String> {
        match table.get(key) {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(other) => {
                self.fail(
                    &format!("{path}.{key}"),
                    format!("expected a string, got {}", other.type_str()),
                );
                None
            }
        }
    }

    fn check_known_keys(&mut self, table: &toml::Table, path: &str, known: &[&str]) {
        for key in table.keys() {
            if !known.contains(&key.as_str()) {
                self.fail(&format!("{path}.{key}"), "unknown key");
            }
        }
    }
}

/// Parse and fully validate a configuration document.
///
/// Missing keys fall back to [`RunConfig::default`]; every violation found is
/// reported, not just the first.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let root: toml::Table = match text.parse() {
        Ok(v) => v,
        Err(e) => {
            return Err(ConfigErrors {
                violations: vec![format!("(syntax): {e}")],
            })
        }
    };
    let mut cfg = RunConfig::default();
    let mut v = Validator {
        violations: Vec::new(),
    };
    v.check_known_keys(&root, "(root)", &["run", "grid", "pss", "connection", "output"]);

    let section = |v: &mut Validator, name: &str| -> Option<toml::Table> {
        match root.get(name) {
            None => None,
            Some(Value::Table(t)) => Some(t.clone()),
            Some(other) => {
                v.fail(name, format!("expected a table, got {}", other.type_str()));
                None
            }
        }
    };

    if let Some(run) = section(&mut v, "run") {
        v.check_known_keys(
            &run,
            "run",
            &["command", "t_end", "dt", "output_stride", "s_monitor", "datum", "seed", "tol_scale"],
        );
        if let Some(c) = v.string(&run, "run", "command") {
            match c.as_str() {
                "simulate" => cfg.command = Command::Simulate,
                "geometry" => cfg.command = Command::Geometry,
                "connection" => cfg.command = Command::Connection,
                "verify" => cfg.command = Command::Verify,
                other => v.fail(
                    "run.command",
                    format!("must be simulate|geometry|connection|verify, got `{other}`"),
                ),
            }
        }
        if let Some(t) = v.float(&run, "run", "t_end") {
            if t > 0.0 {
                cfg.t_end = t;
            } else {
                v.fail("run.t_end", format!("must be > 0, got {t}"));
            }
        }
        if let Some(dt) = v.float(&run, "run", "dt") {
            if dt > 0.0 {
                cfg.dt = Some(dt);
            } else {
                v.fail("run.dt", format!("must be > 0, got {dt}"));
            }
        }
        if let Some(s) = v.integer(&run, "run", "output_stride") {
            if s >= 1 {
                cfg.output_stride = s as usize;
            } else {
                v.fail("run.output_stride", format!("must be >= 1, got {s}"));
            }
        }
        if let Some(s) = v.float(&run, "run", "s_monitor") {
            cfg.s_monitor = s;
        }
        if let Some(d) = v.string(&run, "run", "datum") {
            match d.parse::<Datum>() {
                Ok(datum) => cfg.datum = datum,
                Err(e) => v.fail("run.datum", e),
            }
        }
        if let Some(s) = v.integer(&run, "run", "seed") {
            if s >= 0 {
                cfg.seed = s as u64;
            } else {
                v.fail("run.seed", format!("must be >= 0, got {s}"));
            }
        }
        if let Some(t) = v.float(&run, "run", "tol_scale") {
            if t > 0.0 {
                cfg.tol_scale = t;
            } else {
                v.fail("run.tol_scale", format!("must be > 0, got {t}"));
            }
        }
    }

    if let Some(grid) = section(&mut v, "grid") {
        v.check_known_keys(&grid, "grid", &["n"]);
        if let Some(n) = v.integer(&grid, "grid", "n") {
            if n >= 8 && n % 2 == 0 {
                cfg.grid_n = n as usize;
            } else {
                v.fail("grid.n", format!("must be an even integer >= 8, got {n}"));
            }
        }
    }

    if let Some(pss) = section(&mut v, "pss") {
        v.check_known_keys(&pss, "pss", &["mu", "m1", "sign", "genericity_tau", "refine"]);
        if let Some(Value::Array(arr)) = pss.get("mu") {
            let mut mus = Vec::new();
            for (i, item) in arr.iter().enumerate() {
                match item {
                    Value::Float(f) if f.is_finite() => mus.push(*f),
                    Value::Integer(n) => mus.push(*n as f64),
                    other => v.fail(
                        &format!("pss.mu[{i}]"),
                        format!("expected a finite number, got {other}"),
                    ),
                }
            }
            if !mus.is_empty() {
                cfg.pss_mu = mus;
            }
        } else if pss.contains_key("mu") {
            v.fail("pss.mu", "expected an array of numbers");
        }
        if let Some(Value::Array(arr)) = pss.get("m1") {
            let mut m1s = Vec::new();
            for (i, item) in arr.iter().enumerate() {
                match item.as_integer().map(M1::from_i64) {
                    Some(Ok(m1)) => m1s.push(m1),
                    _ => v.fail(&format!("pss.m1[{i}]"), format!("m1 must be -2 or 1, got {item}")),
                }
            }
            if !m1s.is_empty() {
                cfg.pss_m1 = m1s;
            }
        } else if pss.contains_key("m1") {
            v.fail("pss.m1", "expected an array of integers (-2 or 1)");
        }
        if let Some(Value::Array(arr)) = pss.get("sign") {
            let mut signs = Vec::new();
            for (i, item) in arr.iter().enumerate() {
                match item.as_integer().map(Sign::from_i64) {
                    Some(Ok(s)) => signs.push(s),
                    _ => v.fail(
                        &format!("pss.sign[{i}]"),
                        format!("sign must be 1 or -1, got {item}"),
                    ),
                }
            }
            if !signs.is_empty() {
                cfg.pss_sign = signs;
            }
        } else if pss.contains_key("sign") {
            v.fail("pss.sign", "expected an array of integers (1 or -1)");
        }
        if let Some(t) = v.float(&pss, "pss", "genericity_tau") {
            if t > 0.0 {
                cfg.genericity_tau = t;
            } else {
                v.fail("pss.genericity_tau", format!("must be > 0, got {t}"));
            }
        }
        if let Some(r) = v.integer(&pss, "pss", "refine") {
            if r >= 1 {
                cfg.geometry_refine = r as usize;
            } else {
                v.fail("pss.refine", format!("must be >= 1, got {r}"));
            }
        }
    }

    if let Some(conn) = section(&mut v, "connection") {
        v.check_known_keys(
            &conn,
            "connection",
            &["mu", "m1", "beta", "gamma", "branch_phi1", "branch_ode", "z0", "b0", "z_end", "step"],
        );
        if let Some(mu) = v.float(&conn, "connection", "mu") {
            cfg.connection.mu = mu;
        }
        if let Some(m1) = v.integer(&conn, "connection", "m1") {
            match M1::from_i64(m1) {
                Ok(m1) => cfg.connection.m1 = m1,
                Err(_) => v.fail("connection.m1", format!("m1 must be -2 or 1, got {m1}")),
            }
        }
        if let Some(b) = v.float(&conn, "connection", "beta") {
            cfg.connection.beta = b;
        }
        if let Some(g) = v.float(&conn, "connection", "gamma") {
            cfg.connection.gamma = g;
        }
        for key in ["branch_phi1", "branch_ode"] {
            if let Some(s) = v.integer(&conn, "connection", key) {
                match Sign::from_i64(s) {
                    Ok(sign) => {
                        if key == "branch_phi1" {
                            cfg.connection.branch_phi1 = sign;
                        } else {
                            cfg.connection.branch_ode = sign;
                        }
                    }
                    Err(_) => v.fail(
                        &format!("connection.{key}"),
                        format!("must be 1 or -1, got {s}"),
                    ),
                }
            }
        }
        if let Some(z0) = v.float(&conn, "connection", "z0") {
            cfg.connection_z0 = z0;
        }
        if let Some(b0) = v.float(&conn, "connection", "b0") {
            cfg.connection_b0 = b0;
        }
        if let Some(z1) = v.float(&conn, "connection", "z_end") {
            cfg.connection_z_end = z1;
        }
        if let Some(s) = v.float(&conn, "connection", "step") {
            if s > 0.0 {
                cfg.connection_step = s;
            } else {
                v.fail("connection.step", format!("must be > 0, got {s}"));
            }
        }
        if cfg.connection_z_end <= cfg.connection_z0 {
            v.fail(
                "connection.z_end",
                format!(
                    "must exceed z0 = {}, got {}",
                    cfg.connection_z0, cfg.connection_z_end
                ),
            );
        }
    }

    if let Some(output) = section(&mut v, "output") {
        v.check_known_keys(&output, "output", &["dir"]);
        if let Some(dir) = v.string(&output, "output", "dir") {
            if dir.is_empty() {
                v.fail("output.dir", "must not be empty");
            } else {
                cfg.out_dir = dir;
            }
        }
    }

    if v.violations.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigErrors {
            violations: v.violations,
        })
    }
}
