//! Gain tables and frequency-response output for the CLI.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::analysis::{bode_table, AnalysisError};
use crate::controller::{
    closed_loop_tf, observer_tfs, reduce_to_pi, reduce_to_pid, synthesize_gains, ClassicPidGains, ControllerConfig,
    ControllerError,
};
use crate::sim::{fmt_f64, ConfigError};
use crate::tf::RationalTransferFunction;

/// The subset of a scenario file that `tune` and `bode` read. Unknown keys
/// are ignored so a full scenario file works as input.
#[derive(Debug, Deserialize)]
struct LooseFile {
    #[serde(default)]
    plant: LoosePlant,
    controller: LooseController,
    #[serde(default)]
    sim: LooseSim,
}

#[derive(Debug, Deserialize)]
struct LoosePlant {
    #[serde(default = "chain")]
    kind: String,
    #[serde(default = "one_usize")]
    order: usize,
    #[serde(default = "one")]
    b: f64,
}

impl Default for LoosePlant {
    fn default() -> Self {
        Self {
            kind: chain(),
            order: 1,
            b: 1.0,
        }
    }
}

#[derive(Debug, Deserialize)]
struct LooseController {
    omega: f64,
    omega_f: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct LooseSim {
    #[serde(default = "default_dt")]
    dt: f64,
}

impl Default for LooseSim {
    fn default() -> Self {
        Self { dt: default_dt() }
    }
}

fn chain() -> String {
    "chain".into()
}
fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn default_dt() -> f64 {
    1e-3
}

/// Read a chain controller configuration from scenario-style TOML.
pub fn controller_config_from_str(text: &str) -> Result<ControllerConfig, ConfigError> {
    let f: LooseFile = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    if f.plant.kind != "chain" {
        return Err(ConfigError::Field {
            field: "plant.kind".into(),
            reason: format!("gain tables need a chain plant, got `{}`", f.plant.kind),
        });
    }
    let omega_f = f.controller.omega_f.ok_or_else(|| ConfigError::Field {
        field: "controller.omega_f".into(),
        reason: "missing".into(),
    })?;
    ControllerConfig::new(f.plant.order, f.plant.b, f.controller.omega, omega_f, f.sim.dt).map_err(|e| {
        ConfigError::Field {
            field: "controller".into(),
            reason: e.to_string(),
        }
    })
}

pub fn controller_config_from_path(path: &Path) -> Result<ControllerConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    controller_config_from_str(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneReport {
    pub order: usize,
    pub b: f64,
    pub omega: f64,
    pub omega_f: f64,
    /// `a_0 .. a_{n-1}`.
    pub homogeneous: Vec<f64>,
    /// Classic gains before and after the division by `b`, for `n <= 2`.
    pub classic: Option<(ClassicPidGains, ClassicPidGains)>,
    pub note: Option<String>,
}

pub fn tune_report(cfg: &ControllerConfig) -> Result<TuneReport, ControllerError> {
    cfg.validate()?;
    let gains = synthesize_gains(cfg.order, cfg.omega)?;
    let classic = match cfg.order {
        1 => Some(reduce_to_pi(cfg)?),
        2 => Some(reduce_to_pid(cfg)?),
        _ => None,
    };
    let note = (cfg.order > 2).then(|| {
        format!(
            "order {} has no classic PID equivalent; the generalized controller uses the state-feedback gains and the observer",
            cfg.order
        )
    });
    Ok(TuneReport {
        order: cfg.order,
        b: cfg.b,
        omega: cfg.omega,
        omega_f: cfg.omega_f,
        homogeneous: gains.as_slice().to_vec(),
        classic: classic.map(|g| (g, g.divided_by(cfg.b))),
        note,
    })
}

impl TuneReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "order   {}", self.order);
        let _ = writeln!(s, "b       {}", self.b);
        let _ = writeln!(s, "omega   {}", self.omega);
        let _ = writeln!(s, "omega_f {}", self.omega_f);
        for (i, a) in self.homogeneous.iter().enumerate() {
            let _ = writeln!(s, "a{i}      {a}");
        }
        if let Some((raw, scaled)) = &self.classic {
            let _ = writeln!(s, "gain  raw  /b");
            if let (Some(d), Some(ds)) = (raw.kd, scaled.kd) {
                let _ = writeln!(s, "kd    {d}  {ds}");
            }
            let _ = writeln!(s, "kp    {}  {}", raw.kp, scaled.kp);
            let _ = writeln!(s, "ki    {}  {}", raw.ki, scaled.ki);
        }
        if let Some(n) = &self.note {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// `name,raw,scaled` rows. Homogeneous gains have no scaled column.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,raw,scaled\n");
        for (i, a) in self.homogeneous.iter().enumerate() {
            let _ = writeln!(s, "a{i},{},", fmt_f64(*a));
        }
        if let Some((raw, scaled)) = &self.classic {
            if let (Some(d), Some(ds)) = (raw.kd, scaled.kd) {
                let _ = writeln!(s, "kd,{},{}", fmt_f64(d), fmt_f64(ds));
            }
            let _ = writeln!(s, "kp,{},{}", fmt_f64(raw.kp), fmt_f64(scaled.kp));
            let _ = writeln!(s, "ki,{},{}", fmt_f64(raw.ki), fmt_f64(scaled.ki));
        }
        s
    }
}

/// Closed loop `G`, observer `G_o` and estimation error `G_e`.
pub fn standard_tfs(cfg: &ControllerConfig) -> Result<Vec<(&'static str, RationalTransferFunction)>, ControllerError> {
    let (go, ge) = observer_tfs(cfg.omega_f)?;
    Ok(vec![("G", closed_loop_tf(cfg)?), ("G_o", go), ("G_e", ge)])
}

/// `freq,mag,phase_rad` for one transfer function.
pub fn bode_csv(tf: &RationalTransferFunction, grid: &[f64]) -> Result<String, AnalysisError> {
    let mut s = String::from("freq,mag,phase_rad\n");
    for r in bode_table(tf, grid)? {
        let _ = writeln!(s, "{},{},{}", fmt_f64(r.frequency), fmt_f64(r.magnitude), fmt_f64(r.phase));
    }
    Ok(s)
}

/// `tf,freq,mag,phase_rad` for several named transfer functions.
pub fn bode_long_csv(tfs: &[(&str, RationalTransferFunction)], grid: &[f64]) -> Result<String, AnalysisError> {
    let mut s = String::from("tf,freq,mag,phase_rad\n");
    for (name, tf) in tfs {
        for r in bode_table(tf, grid)? {
            let _ = writeln!(
                s,
                "{name},{},{},{}",
                fmt_f64(r.frequency),
                fmt_f64(r.magnitude),
                fmt_f64(r.phase)
            );
        }
    }
    Ok(s)
}
