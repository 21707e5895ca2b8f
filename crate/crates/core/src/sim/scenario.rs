//! Declarative experiment description and its TOML schema.
//!
//! ```toml
//! id = "bound-demo"
//! plant.kind = "chain"          # chain | vtol | vehicle
//! plant.order = 2
//! plant.b = 1.0
//! plant.x0 = [1.0, 0.0]
//! controller.kind = "generalized" # generalized | homogeneous | pid (chain)
//! controller.omega = 2.0
//! controller.omega_f = 10.0
//! disturbance.kind = "constant"
//! disturbance.value = 1.0
//! noise.sigma = [0.0, 0.01]     # scalar or one entry per channel
//! sim.dt = 1e-3
//! sim.duration = 20.0
//! sim.seed = 7
//! ```
//!
//! VTOL scenarios add a `vtol` table, vehicle scenarios a `vehicle` table;
//! see the README for the complete key list.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::controller::{ObserverInit, Quadrature};
use crate::plants::path::{FrenetPath, MatchOptions, PathError};
use crate::plants::so3::{Mat3, Vec3};
use crate::plants::vtol::{VtolGains, VtolParams, VtolReference};

use super::{DisturbanceSignal, NoiseSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("`{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("reading {path}: {reason}")]
    Io { path: String, reason: String },
}

fn field_err(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field_err(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(field_err(field, format!("must be finite, got {v}")))
    }
}

// ---- raw file layout --------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    id: Option<String>,
    plant: RawPlant,
    #[serde(default)]
    controller: RawController,
    disturbance: Option<RawDisturbance>,
    #[serde(default)]
    noise: RawNoise,
    sim: RawSim,
    vtol: Option<RawVtol>,
    vehicle: Option<RawVehicle>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlant {
    kind: String,
    order: Option<usize>,
    b: Option<f64>,
    #[serde(default)]
    coupling: Vec<f64>,
    x0: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawController {
    kind: Option<String>,
    omega: Option<f64>,
    omega_f: Option<f64>,
    quadrature: Option<String>,
    observer_init: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDisturbance {
    kind: String,
    value: Option<f64>,
    t_start: Option<f64>,
    amplitude: Option<f64>,
    freq: Option<f64>,
    phase: Option<f64>,
    terms: Option<Vec<RawDisturbance>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawSignal {
    Constant(f64),
    Signal(RawDisturbance),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ScalarOrList {
    Scalar(f64),
    List(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    sigma: Option<ScalarOrList>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    dt: f64,
    duration: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "one")]
    decimation: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVtol {
    mass: f64,
    #[serde(default = "gravity")]
    g: f64,
    inertia: Vec<f64>,
    omega_att: f64,
    omega_tau: f64,
    #[serde(default)]
    psi: f64,
    p0: Option<[f64; 3]>,
    d_f: Option<[RawSignal; 3]>,
    d_tau: Option<[RawSignal; 3]>,
    reference: RawReference,
}

fn gravity() -> f64 {
    9.81
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReference {
    kind: String,
    p: Option<[f64; 3]>,
    radius: Option<f64>,
    omega: Option<f64>,
    height: Option<f64>,
    ax: Option<f64>,
    ay: Option<f64>,
    wx: Option<f64>,
    wy: Option<f64>,
    phase: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVehicle {
    #[serde(default = "default_speed")]
    speed: f64,
    wheelbase: f64,
    #[serde(default)]
    bias: f64,
    #[serde(default)]
    l0: f64,
    #[serde(default)]
    e_theta0: f64,
    #[serde(default)]
    s0: f64,
    #[serde(default = "default_grace")]
    grace: f64,
    capture: Option<f64>,
    path: RawPath,
}

fn default_speed() -> f64 {
    10.0
}

fn default_grace() -> f64 {
    0.5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    kind: String,
    length: Option<f64>,
    radius: Option<f64>,
    arc: Option<f64>,
    spacing: Option<f64>,
    file: Option<PathBuf>,
}

// ---- validated scenario -----------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainControllerKind {
    /// `u = (u_x - f_hat) / b` with the integral observer.
    Generalized,
    /// `u = u_x / b`, no disturbance compensation.
    Homogeneous,
    /// Classic PI/PID with the reduced gains.
    ClassicPid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainScenario {
    pub order: usize,
    pub b: f64,
    pub disturbance: DisturbanceSignal,
    pub coupling: Vec<f64>,
    pub x0: Vec<f64>,
    pub controller: ChainControllerKind,
    pub omega: f64,
    pub omega_f: f64,
    pub quadrature: Quadrature,
    pub observer_init: ObserverInit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VtolScenario {
    pub params: VtolParams,
    pub gains: VtolGains,
    pub reference: VtolReference,
    pub psi: f64,
    pub p0: Vec3<f64>,
    pub quadrature: Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LateralControllerKind {
    KnownBias,
    Observer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleScenario {
    pub path: Arc<FrenetPath>,
    pub speed: f64,
    pub wheelbase: f64,
    pub bias: f64,
    pub controller: LateralControllerKind,
    pub omega: f64,
    pub omega_d: f64,
    pub quadrature: Quadrature,
    /// Initial offset from the path point at `s0`.
    pub l0: f64,
    pub e_theta0: f64,
    pub s0: f64,
    /// Seconds the heading error may sit at `|e_theta| >= pi/2` before the run fails.
    pub grace: f64,
    pub matching: MatchOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlantSpec {
    Chain(ChainScenario),
    Vtol(VtolScenario),
    Vehicle(VehicleScenario),
}

impl PlantSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            PlantSpec::Chain(_) => "chain",
            PlantSpec::Vtol(_) => "vtol",
            PlantSpec::Vehicle(_) => "vehicle",
        }
    }

    /// Number of noisy measurement channels.
    pub fn channels(&self) -> usize {
        match self {
            PlantSpec::Chain(c) => c.order,
            // position and velocity
            PlantSpec::Vtol(_) => 6,
            // x, y, theta
            PlantSpec::Vehicle(_) => 3,
        }
    }

    pub fn omega(&self) -> f64 {
        match self {
            PlantSpec::Chain(c) => c.omega,
            PlantSpec::Vtol(v) => v.gains.omega_pos,
            PlantSpec::Vehicle(v) => v.omega,
        }
    }

    pub fn omega_f(&self) -> f64 {
        match self {
            PlantSpec::Chain(c) => c.omega_f,
            PlantSpec::Vtol(v) => v.gains.omega_f,
            PlantSpec::Vehicle(v) => v.omega_d,
        }
    }

    /// Replace the homogeneous and observer bandwidths of the outer loop.
    pub fn set_bandwidths(&mut self, omega: f64, omega_f: f64) {
        match self {
            PlantSpec::Chain(c) => {
                c.omega = omega;
                c.omega_f = omega_f;
            }
            PlantSpec::Vtol(v) => {
                v.gains.omega_pos = omega;
                v.gains.omega_f = omega_f;
            }
            PlantSpec::Vehicle(v) => {
                v.omega = omega;
                v.omega_d = omega_f;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub dt: f64,
    pub duration: f64,
    pub decimation: usize,
    pub seed: u64,
}

impl SimSettings {
    /// Number of integration steps, `round(duration / dt)`.
    pub fn steps(&self) -> u64 {
        (self.duration / self.dt).round() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub plant: PlantSpec,
    pub sim: SimSettings,
    /// Per-channel deviation; the seed lives in `sim.seed`.
    pub noise_sigma: Vec<f64>,
}

/// Environment variable that overrides `sim.seed`.
pub const SEED_ENV: &str = "LUMPED_PID_SEED";

impl Scenario {
    pub fn noise(&self) -> NoiseSpec {
        NoiseSpec {
            sigma: self.noise_sigma.clone(),
            seed: self.sim.seed,
        }
    }

    pub fn set_uniform_noise(&mut self, sigma: f64) {
        self.noise_sigma = vec![sigma; self.plant.channels()];
    }

    /// Apply `LUMPED_PID_SEED` if it is set.
    pub fn apply_env_overrides(&mut self) -> Result<(), ConfigError> {
        if let Ok(v) = std::env::var(SEED_ENV) {
            self.sim.seed = v
                .trim()
                .parse()
                .map_err(|_| field_err(SEED_ENV, format!("not an unsigned integer: `{v}`")))?;
        }
        Ok(())
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
        Self::parse(&text, stem, path.parent())
    }

    /// Parse scenario text. Relative path files resolve against `base_dir`.
    pub fn parse(text: &str, default_id: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let sim = SimSettings {
            dt: positive("sim.dt", raw.sim.dt)?,
            duration: positive("sim.duration", raw.sim.duration)?,
            decimation: raw.sim.decimation,
            seed: raw.sim.seed,
        };
        if sim.dt > sim.duration {
            return Err(field_err("sim.dt", "must not exceed sim.duration"));
        }
        if sim.decimation == 0 {
            return Err(field_err("sim.decimation", "must be at least 1"));
        }
        let plant = match raw.plant.kind.as_str() {
            "chain" => PlantSpec::Chain(chain_spec(&raw)?),
            "vtol" => PlantSpec::Vtol(vtol_spec(&raw)?),
            "vehicle" => PlantSpec::Vehicle(vehicle_spec(&raw, base_dir)?),
            other => return Err(field_err("plant.kind", format!("unknown plant `{other}` (chain | vtol | vehicle)"))),
        };
        if !matches!(plant, PlantSpec::Vtol(_)) && raw.vtol.is_some() {
            return Err(field_err("vtol", "only valid with plant.kind = \"vtol\""));
        }
        if !matches!(plant, PlantSpec::Vehicle(_)) && raw.vehicle.is_some() {
            return Err(field_err("vehicle", "only valid with plant.kind = \"vehicle\""));
        }
        let channels = plant.channels();
        let noise_sigma = match raw.noise.sigma {
            None => vec![0.0; channels],
            Some(ScalarOrList::Scalar(s)) => vec![s; channels],
            Some(ScalarOrList::List(v)) => {
                if v.len() != channels {
                    return Err(field_err(
                        "noise.sigma",
                        format!("expected {channels} channels for a {} plant, got {}", plant.kind(), v.len()),
                    ));
                }
                v
            }
        };
        if let Some(s) = noise_sigma.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return Err(field_err("noise.sigma", format!("must be non-negative, got {s}")));
        }
        Ok(Scenario {
            id: raw.id.unwrap_or_else(|| default_id.to_string()),
            plant,
            sim,
            noise_sigma,
        })
    }
}

fn quadrature(raw: &RawController) -> Result<Quadrature, ConfigError> {
    raw.quadrature
        .as_deref()
        .map_or(Ok(Quadrature::default()), str::parse)
        .map_err(|e| field_err("controller.quadrature", e))
}

fn require(field: &str, v: Option<f64>) -> Result<f64, ConfigError> {
    v.ok_or_else(|| field_err(field, "missing"))
}

fn disturbance(field: &str, raw: &RawDisturbance) -> Result<DisturbanceSignal, ConfigError> {
    let key = |k: &str| format!("{field}.{k}");
    let get = |k: &str, v: Option<f64>| require(&key(k), v).and_then(|x| finite(&key(k), x));
    Ok(match raw.kind.as_str() {
        "none" => DisturbanceSignal::zero(),
        "constant" => DisturbanceSignal::Constant(get("value", raw.value)?),
        "step" => DisturbanceSignal::Step {
            value: get("value", raw.value)?,
            t_start: get("t_start", raw.t_start.or(Some(0.0)))?,
        },
        "sinusoid" => DisturbanceSignal::Sinusoid {
            amplitude: get("amplitude", raw.amplitude)?,
            freq: get("freq", raw.freq)?,
            phase: get("phase", raw.phase.or(Some(0.0)))?,
        },
        "sum" => {
            let terms = raw.terms.as_ref().ok_or_else(|| field_err(&key("terms"), "missing"))?;
            DisturbanceSignal::Sum(
                terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| disturbance(&format!("{field}.terms[{i}]"), t))
                    .collect::<Result<_, _>>()?,
            )
        }
        other => {
            return Err(field_err(
                &key("kind"),
                format!("unknown disturbance `{other}` (none | constant | step | sinusoid | sum)"),
            ))
        }
    })
}

fn signal_triple(field: &str, raw: &Option<[RawSignal; 3]>) -> Result<[DisturbanceSignal; 3], ConfigError> {
    let Some(raw) = raw else {
        return Ok(Default::default());
    };
    let mut out: [DisturbanceSignal; 3] = Default::default();
    for (i, s) in raw.iter().enumerate() {
        let name = format!("{field}[{i}]");
        out[i] = match s {
            RawSignal::Constant(v) => DisturbanceSignal::Constant(finite(&name, *v)?),
            RawSignal::Signal(d) => disturbance(&name, d)?,
        };
    }
    Ok(out)
}

fn chain_spec(raw: &RawScenario) -> Result<ChainScenario, ConfigError> {
    let order = raw.plant.order.ok_or_else(|| field_err("plant.order", "missing"))?;
    if order == 0 || order > crate::poly::MAX_ORDER {
        return Err(field_err("plant.order", format!("must be in 1..={}", crate::poly::MAX_ORDER)));
    }
    let b = finite("plant.b", require("plant.b", raw.plant.b)?)?;
    if b == 0.0 {
        return Err(field_err("plant.b", "must be nonzero"));
    }
    let c = &raw.controller;
    let controller = match c.kind.as_deref().unwrap_or("generalized") {
        "generalized" => ChainControllerKind::Generalized,
        "homogeneous" => ChainControllerKind::Homogeneous,
        "pid" | "pi" => ChainControllerKind::ClassicPid,
        other => {
            return Err(field_err(
                "controller.kind",
                format!("unknown controller `{other}` (generalized | homogeneous | pid)"),
            ))
        }
    };
    if controller == ChainControllerKind::ClassicPid && order > 2 {
        return Err(field_err("controller.kind", "classic PI/PID needs plant.order 1 or 2"));
    }
    let omega = positive("controller.omega", require("controller.omega", c.omega)?)?;
    let omega_f = match controller {
        ChainControllerKind::Homogeneous => c.omega_f.unwrap_or(0.0),
        _ => positive("controller.omega_f", require("controller.omega_f", c.omega_f)?)?,
    };
    let x0 = raw.plant.x0.clone().unwrap_or_else(|| vec![0.0; order]);
    if x0.len() != order {
        return Err(field_err("plant.x0", format!("expected {order} entries, got {}", x0.len())));
    }
    if raw.plant.coupling.len() > order {
        return Err(field_err("plant.coupling", format!("at most {order} entries")));
    }
    let observer_init = match c.observer_init.as_deref().unwrap_or("zero") {
        "zero" => ObserverInit::Zero,
        "matched" => ObserverInit::MatchInitialState,
        other => return Err(field_err("controller.observer_init", format!("unknown `{other}` (zero | matched)"))),
    };
    Ok(ChainScenario {
        order,
        b,
        disturbance: match &raw.disturbance {
            Some(d) => disturbance("disturbance", d)?,
            None => DisturbanceSignal::zero(),
        },
        coupling: raw.plant.coupling.clone(),
        x0,
        controller,
        omega,
        omega_f,
        quadrature: quadrature(c)?,
        observer_init,
    })
}

fn vtol_spec(raw: &RawScenario) -> Result<VtolScenario, ConfigError> {
    let v = raw.vtol.as_ref().ok_or_else(|| field_err("vtol", "missing table for plant.kind = \"vtol\""))?;
    let inertia = match v.inertia.len() {
        3 => Mat3::diag(Vec3::from_slice(&v.inertia)),
        9 => Mat3::from_slice(&v.inertia),
        n => return Err(field_err("vtol.inertia", format!("expected 3 (diagonal) or 9 entries, got {n}"))),
    };
    let params = VtolParams::new(v.mass, v.g, inertia)
        .map_err(|e| field_err("vtol", e.to_string()))?
        .with_force_disturbance(signal_triple("vtol.d_f", &v.d_f)?)
        .with_torque_disturbance(signal_triple("vtol.d_tau", &v.d_tau)?);
    let c = &raw.controller;
    if let Some(k) = c.kind.as_deref() {
        if k != "generalized" {
            return Err(field_err("controller.kind", "VTOL supports only the generalized controller"));
        }
    }
    let gains = VtolGains {
        omega_pos: positive("controller.omega", require("controller.omega", c.omega)?)?,
        omega_f: positive("controller.omega_f", require("controller.omega_f", c.omega_f)?)?,
        omega_att: positive("vtol.omega_att", v.omega_att)?,
        omega_tau: positive("vtol.omega_tau", v.omega_tau)?,
    };
    let r = &v.reference;
    let req = |k: &str, x: Option<f64>| require(&format!("vtol.reference.{k}"), x);
    let reference = match r.kind.as_str() {
        "hover" => VtolReference::Hover {
            p: Vec3(r.p.ok_or_else(|| field_err("vtol.reference.p", "missing"))?),
        },
        "circle" => VtolReference::Circle {
            radius: req("radius", r.radius)?,
            omega: req("omega", r.omega)?,
            z: req("height", r.height)?,
        },
        "lissajous" => VtolReference::Lissajous {
            ax: req("ax", r.ax)?,
            ay: req("ay", r.ay)?,
            wx: req("wx", r.wx)?,
            wy: req("wy", r.wy)?,
            phase: r.phase.unwrap_or(0.0),
            z: req("height", r.height)?,
        },
        other => {
            return Err(field_err(
                "vtol.reference.kind",
                format!("unknown reference `{other}` (hover | circle | lissajous)"),
            ))
        }
    };
    let p0 = v.p0.map(Vec3).unwrap_or_else(|| reference.sample(0.0, v.psi).p);
    Ok(VtolScenario {
        params,
        gains,
        reference,
        psi: v.psi,
        p0,
        quadrature: quadrature(c)?,
    })
}

fn vehicle_spec(raw: &RawScenario, base_dir: Option<&Path>) -> Result<VehicleScenario, ConfigError> {
    let v = raw
        .vehicle
        .as_ref()
        .ok_or_else(|| field_err("vehicle", "missing table for plant.kind = \"vehicle\""))?;
    let p = &v.path;
    let path_err = |e: PathError| field_err("vehicle.path", e.to_string());
    let spacing = p.spacing.map(|s| positive("vehicle.path.spacing", s)).transpose()?;
    let spacing = spacing.unwrap_or(crate::plants::path::DEFAULT_SPACING);
    let path = match p.kind.as_str() {
        "line" => FrenetPath::line_sampled(
            positive("vehicle.path.length", require("vehicle.path.length", p.length)?)?,
            spacing,
        ),
        "circle" => FrenetPath::circle_sampled(
            positive("vehicle.path.radius", require("vehicle.path.radius", p.radius)?)?,
            positive("vehicle.path.arc", require("vehicle.path.arc", p.arc)?)?,
            spacing,
        ),
        "csv" => {
            let file = p.file.as_ref().ok_or_else(|| field_err("vehicle.path.file", "missing"))?;
            let full = match base_dir {
                Some(dir) if file.is_relative() => dir.join(file),
                _ => file.clone(),
            };
            let f = std::fs::File::open(&full).map_err(|e| ConfigError::Io {
                path: full.display().to_string(),
                reason: e.to_string(),
            })?;
            FrenetPath::from_csv(f).map_err(path_err)?
        }
        other => return Err(field_err("vehicle.path.kind", format!("unknown path `{other}` (line | circle | csv)"))),
    };
    let c = &raw.controller;
    let controller = match c.kind.as_deref().unwrap_or("observer") {
        "observer" | "generalized" => LateralControllerKind::Observer,
        "known_d" => LateralControllerKind::KnownBias,
        other => {
            return Err(field_err(
                "controller.kind",
                format!("unknown lateral controller `{other}` (observer | known_d)"),
            ))
        }
    };
    let omega = positive("controller.omega", require("controller.omega", c.omega)?)?;
    let omega_d = match controller {
        LateralControllerKind::Observer => {
            positive("controller.omega_f", require("controller.omega_f", c.omega_f)?)?
        }
        LateralControllerKind::KnownBias => c.omega_f.unwrap_or(0.0),
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    if v.e_theta0.abs() >= half_pi {
        return Err(field_err("vehicle.e_theta0", "must lie in (-pi/2, pi/2)"));
    }
    if v.bias.abs() >= half_pi {
        return Err(field_err("vehicle.bias", "must lie in (-pi/2, pi/2)"));
    }
    let mut matching = MatchOptions::default();
    if let Some(cap) = v.capture {
        matching.capture = positive("vehicle.capture", cap)?;
    }
    Ok(VehicleScenario {
        path: Arc::new(path),
        speed: finite("vehicle.speed", v.speed)?,
        wheelbase: positive("vehicle.wheelbase", v.wheelbase)?,
        bias: v.bias,
        controller,
        omega,
        omega_d,
        quadrature: quadrature(c)?,
        l0: finite("vehicle.l0", v.l0)?,
        e_theta0: v.e_theta0,
        s0: finite("vehicle.s0", v.s0)?,
        grace: finite("vehicle.grace", v.grace)?.max(0.0),
        matching,
    })
}
