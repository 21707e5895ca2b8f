use thiserror::Error;

use crate::controller::{
    ChainControl, ClassicPid, ControllerConfig, ControllerError, GeneralizedController, HomogeneousController,
};
use crate::plants::path::FrenetMatcher;
use crate::plants::so3::orthogonality_error;
use crate::plants::vehicle::{
    geometric_rs, lateral_controller_known_d, lateral_error_derivatives, lateral_lumped_disturbance, BicyclePlant,
    LateralObserverController, ANGLE_GUARD,
};
use crate::plants::vtol::{vtol_derivative, RigidBodyState, VtolController, VtolPlant};
use crate::plants::IntegratorChain;

use super::scenario::{
    ChainControllerKind, ChainScenario, ConfigError, LateralControllerKind, PlantSpec, Scenario, SimSettings,
    VehicleScenario, VtolScenario,
};
use super::{gaussian_noise, rk4_step, IntegrationError, NoiseSpec, PlantModel, SimTrace};

/// State magnitude treated as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("diverged at t = {t}: {reason}")]
    Diverged { t: f64, reason: String },
    #[error("plant/controller failure at t = {t}: {reason}")]
    Plant { t: f64, reason: String },
}

impl From<ConfigError> for SimError {
    fn from(e: ConfigError) -> Self {
        SimError::Config(e.to_string())
    }
}

impl From<ControllerError> for SimError {
    fn from(e: ControllerError) -> Self {
        SimError::Config(e.to_string())
    }
}

fn plant_err(t: f64, e: impl std::fmt::Display) -> SimError {
    SimError::Plant { t, reason: e.to_string() }
}

/// Integrate one step and apply the divergence checks.
fn advance<P: PlantModel<f64> + ?Sized>(plant: &P, t: f64, x: &[f64], u: &[f64], dt: f64) -> Result<Vec<f64>, SimError> {
    let next = rk4_step(plant, t, x, u, dt).map_err(|IntegrationError::NonFinite { index, t }| SimError::Diverged {
        t,
        reason: format!("non-finite state component {index}"),
    })?;
    if let Some(i) = next.iter().position(|v| v.abs() > DIVERGENCE_LIMIT) {
        return Err(SimError::Diverged {
            t: t + dt,
            reason: format!("|state[{i}]| exceeded {DIVERGENCE_LIMIT:e}"),
        });
    }
    Ok(next)
}

/// Run a scenario to completion. The result is a pure function of the scenario.
pub fn run_scenario(scenario: &Scenario) -> Result<SimTrace, SimError> {
    let noise = scenario.noise();
    match &scenario.plant {
        PlantSpec::Chain(c) => run_chain(c, &scenario.sim, &noise),
        PlantSpec::Vtol(v) => run_vtol(v, &scenario.sim, &noise),
        PlantSpec::Vehicle(v) => run_vehicle(v, &scenario.sim, &noise),
    }
}

fn chain_controller(c: &ChainScenario, dt: f64) -> Result<Box<dyn ChainControl<f64>>, SimError> {
    Ok(match c.controller {
        ChainControllerKind::Homogeneous => Box::new(HomogeneousController::new(c.order, c.b, c.omega)?),
        kind => {
            let cfg = ControllerConfig::new(c.order, c.b, c.omega, c.omega_f, dt)?
                .with_quadrature(c.quadrature)
                .with_observer_init(c.observer_init);
            if kind == ChainControllerKind::ClassicPid {
                Box::new(ClassicPid::new(cfg)?)
            } else {
                Box::new(GeneralizedController::new(cfg)?)
            }
        }
    })
}

/// Columns `t, x0.., u, f_true, f_hat, z0..`; primary `x0`.
fn run_chain(c: &ChainScenario, sim: &SimSettings, noise: &NoiseSpec) -> Result<SimTrace, SimError> {
    let n = c.order;
    let plant = IntegratorChain::new(n, c.b, c.disturbance.clone()).with_coupling(c.coupling.clone());
    let mut ctrl = chain_controller(c, sim.dt)?;
    let mut names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    names.extend(["u", "f_true", "f_hat"].map(String::from));
    names.extend((0..n).map(|i| format!("z{i}")));
    let mut trace = SimTrace::new(names, "x0").with_control("u");

    let mut x = c.x0.clone();
    let steps = sim.steps();
    let mut row = Vec::with_capacity(2 * n + 3);
    for k in 0..=steps {
        let t = k as f64 * sim.dt;
        let z: Vec<f64> = (0..n).map(|i| x[i] + gaussian_noise(noise, i, k)).collect();
        let out = ctrl.step(&z).map_err(|e| plant_err(t, e))?;
        if k % sim.decimation as u64 == 0 {
            row.clear();
            row.extend_from_slice(&x);
            row.extend([out.u, plant.lumped(t, &x), out.f_hat]);
            row.extend_from_slice(&z);
            trace.push(t, &row);
        }
        if k == steps {
            break;
        }
        x = advance(&plant, t, &x, &[out.u], sim.dt)?;
    }
    Ok(trace)
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// Position, velocity, rotation, body rates, commands, per-axis lumped
/// disturbance and estimate, `err_norm = |p - p_d|` (primary) and the
/// orthogonality defect of `R`.
fn run_vtol(v: &VtolScenario, sim: &SimSettings, noise: &NoiseSpec) -> Result<SimTrace, SimError> {
    let plant = VtolPlant { params: v.params.clone() };
    let mut ctrl = VtolController::new(v.gains, &v.params, sim.dt, v.quadrature);
    let mut names: Vec<String> = Vec::new();
    for pre in ["p", "v"] {
        names.extend(AXES.map(|a| format!("{pre}{a}")));
    }
    for i in 0..3 {
        names.extend((0..3).map(|j| format!("r{i}{j}")));
    }
    names.extend(AXES.map(|a| format!("w{a}")));
    names.extend(["thrust", "tau_x", "tau_y", "tau_z"].map(String::from));
    names.extend(AXES.map(|a| format!("f_true_{a}")));
    names.extend(AXES.map(|a| format!("f_hat_{a}")));
    names.extend(AXES.map(|a| format!("pd{a}")));
    names.extend(["err_norm", "ortho_err"].map(String::from));
    let mut trace = SimTrace::new(names, "err_norm").with_control("thrust");

    let mut x = RigidBodyState::at_rest(v.p0).to_vec();
    let steps = sim.steps();
    let (k0, k1) = v.gains.pos_k();
    for k in 0..=steps {
        let t = k as f64 * sim.dt;
        let truth = RigidBodyState::from_slice(&x);
        let mut meas = truth;
        for i in 0..3 {
            meas.p[i] += gaussian_noise(noise, i, k);
            meas.v[i] += gaussian_noise(noise, 3 + i, k);
        }
        let reference = v.reference.sample(t, v.psi);
        let cmd = ctrl.step(&meas, &reference).map_err(|e| plant_err(t, e))?;
        if k % sim.decimation as u64 == 0 {
            // lumped disturbance as seen by the translational observer
            let d = vtol_derivative(&truth, cmd.thrust, &cmd.tau, &v.params, t);
            let f_x = -((truth.p - reference.p).scale(k0) + (truth.v - reference.v).scale(k1));
            let lump = d.v_dot - reference.a - f_x;
            let mut row = x.clone();
            row.extend([cmd.thrust, cmd.tau[0], cmd.tau[1], cmd.tau[2]]);
            row.extend_from_slice(&lump.0);
            row.extend_from_slice(&cmd.d_f_hat.0);
            row.extend_from_slice(&reference.p.0);
            row.push((truth.p - reference.p).norm());
            row.push(orthogonality_error(&truth.r));
            trace.push(t, &row);
        }
        if k == steps {
            break;
        }
        let input = [cmd.thrust, cmd.tau[0], cmd.tau[1], cmd.tau[2]];
        x = advance(&plant, t, &x, &input, sim.dt)?;
    }
    Ok(trace)
}

/// Pose, steering, lumped lateral disturbance and its estimate, and the
/// Frenet diagnostics `l, e_theta, s_d, r_s, kappa, l_p, l_pp`; primary `l`.
fn run_vehicle(v: &VehicleScenario, sim: &SimSettings, noise: &NoiseSpec) -> Result<SimTrace, SimError> {
    let plant = BicyclePlant {
        speed: v.speed,
        wheelbase: v.wheelbase,
        bias: v.bias,
    };
    let names = [
        "x", "y", "theta", "delta", "f_true", "f_hat", "l", "e_theta", "s_d", "r_s", "kappa", "l_p", "l_pp",
    ];
    let mut trace = SimTrace::new(names, "l").with_control("delta");
    let (k0, k1) = (v.omega * v.omega, 2.0 * v.omega);
    let mut observer = LateralObserverController::new(v.omega, v.omega_d, v.wheelbase, v.quadrature);

    let start = v.path.point_at(v.path.s_start() + v.s0);
    let (sn, cn) = start.theta.sin_cos();
    // p = p_d - l n_d with n_d = (-sin, cos)
    let mut x = vec![start.x + v.l0 * sn, start.y - v.l0 * cn, start.theta - v.e_theta0];

    let mut truth_matcher = FrenetMatcher::new(&v.path, v.matching);
    let mut meas_matcher = FrenetMatcher::new(&v.path, v.matching);
    let noisy = !noise.is_silent();
    let steps = sim.steps();
    let ds = v.speed * sim.dt;
    let limit = std::f64::consts::FRAC_PI_2 - ANGLE_GUARD;
    let mut singular_since: Option<f64> = None;
    let mut delta = 0.0;
    let mut d_hat = 0.0;
    for k in 0..=steps {
        let t = k as f64 * sim.dt;
        let truth = truth_matcher.match_pose(x[0], x[1], x[2]).map_err(|e| plant_err(t, e))?;
        let m = if noisy {
            let z: Vec<f64> = (0..3).map(|i| x[i] + gaussian_noise(noise, i, k)).collect();
            meas_matcher.match_pose(z[0], z[1], z[2]).map_err(|e| plant_err(t, e))?
        } else {
            truth
        };
        if m.error.e_theta.abs() >= limit {
            // hold the last command through a short excursion
            let since = *singular_since.get_or_insert(t);
            if t - since > v.grace {
                return Err(plant_err(
                    t,
                    format!("heading error {} rad outside (-pi/2, pi/2) for more than {} s", m.error.e_theta, v.grace),
                ));
            }
        } else {
            singular_since = None;
            match v.controller {
                LateralControllerKind::KnownBias => {
                    delta = lateral_controller_known_d(&m.error, m.point.kappa, v.bias, v.wheelbase, k0, k1)
                        .map_err(|e| plant_err(t, e))?;
                }
                LateralControllerKind::Observer => {
                    let cmd = observer.step(&m.error, ds).map_err(|e| plant_err(t, e))?;
                    delta = cmd.delta;
                    d_hat = cmd.d_hat;
                }
            }
        }
        plant.check_steering(delta).map_err(|e| plant_err(t, e))?;
        if k % sim.decimation as u64 == 0 {
            let e = truth.error;
            let kappa = truth.point.kappa;
            let rs = geometric_rs(&e, kappa);
            let (lp, lpp) = lateral_error_derivatives(&e, delta, v.bias, v.wheelbase, rs, kappa);
            let lump = lateral_lumped_disturbance(&e, delta, v.bias, v.wheelbase, rs, kappa);
            trace.push(
                t,
                &[x[0], x[1], x[2], delta, lump, d_hat, e.l, e.e_theta, e.s_d, rs, kappa, lp, lpp],
            );
        }
        if k == steps {
            break;
        }
        x = advance(&plant, t, &x, &[delta], sim.dt)?;
    }
    Ok(trace)
}

/// Max `|R^T R - I|_F` over a VTOL trace.
pub fn max_orthogonality_error(trace: &SimTrace) -> Option<f64> {
    trace.column("ortho_err").map(|c| c.iter().fold(0.0, |a: f64, &v| a.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::scenario::Scenario;

    fn chain(extra: &str) -> Scenario {
        let text = format!(
            r#"
plant.kind = "chain"
plant.order = 2
plant.b = 2.0
controller.omega = 2.0
controller.omega_f = 10.0
sim.dt = 1e-3
sim.duration = 20.0
{extra}
"#
        );
        Scenario::parse(&text, "t", None).unwrap()
    }

    #[test]
    fn zero_everything_is_identically_zero() {
        let tr = run_scenario(&chain("")).unwrap();
        assert_eq!(tr.len(), 20_001);
        for name in tr.names()[1..].iter() {
            assert!(tr.column(name).unwrap().iter().all(|&v| v == 0.0), "{name}");
        }
    }

    #[test]
    fn constant_disturbance_is_rejected() {
        let tr = run_scenario(&chain("disturbance.kind = \"constant\"\ndisturbance.value = 1.0")).unwrap();
        let last = tr.len() - 1;
        assert!(tr.primary()[last].abs() < 1e-6);
        assert!((tr.column("u").unwrap()[last] + 0.5).abs() < 1e-6);
        assert!((tr.column("f_hat").unwrap()[last] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn grid_and_decimation() {
        let tr = run_scenario(&chain("sim.decimation = 7")).unwrap();
        for (k, &t) in tr.t().iter().enumerate() {
            assert_eq!(t, (7 * k) as f64 * 1e-3);
        }
    }

    #[test]
    fn noisy_runs_are_reproducible() {
        let s = chain("noise.sigma = 0.01\nsim.seed = 3\ndisturbance.kind = \"step\"\ndisturbance.value = 1.0\ndisturbance.t_start = 1.0");
        let a = run_scenario(&s).unwrap().to_csv_string();
        let b = run_scenario(&s).unwrap().to_csv_string();
        assert_eq!(a, b);
        let mut other = s.clone();
        other.sim.seed = 4;
        assert_ne!(a, run_scenario(&other).unwrap().to_csv_string());
    }

    #[test]
    fn runaway_plant_is_reported_as_diverged() {
        // x' = 50 x + u with u = -x
        let bad = r#"
plant.kind = "chain"
plant.order = 1
plant.b = 1.0
plant.coupling = [50.0]
plant.x0 = [1.0]
controller.kind = "homogeneous"
controller.omega = 1.0
sim.dt = 1e-2
sim.duration = 100.0
"#;
        let s = Scenario::parse(bad, "bad", None).unwrap();
        assert!(matches!(run_scenario(&s), Err(SimError::Diverged { .. })));
    }

    #[test]
    fn vehicle_line_converges() {
        let text = r#"
plant.kind = "vehicle"
controller.omega = 0.5
controller.omega_f = 2.0
vehicle.wheelbase = 2.7
vehicle.bias = 0.0349
vehicle.l0 = 1.0
vehicle.path.kind = "line"
vehicle.path.length = 120.0
sim.dt = 1e-3
sim.duration = 10.0
"#;
        let s = Scenario::parse(text, "veh", None).unwrap();
        let tr = run_scenario(&s).unwrap();
        assert_eq!(tr.column("l").unwrap()[0], 1.0);
        assert!(tr.primary().last().unwrap().abs() < 1e-3);
    }

    #[test]
    fn vtol_hover_stays_put() {
        let text = r#"
plant.kind = "vtol"
controller.omega = 2.0
controller.omega_f = 10.0
vtol.mass = 2.0
vtol.inertia = [0.02, 0.02, 0.04]
vtol.omega_att = 8.0
vtol.omega_tau = 40.0
vtol.reference.kind = "hover"
vtol.reference.p = [0.0, 0.0, -1.0]
sim.dt = 1e-3
sim.duration = 2.0
"#;
        let s = Scenario::parse(text, "v", None).unwrap();
        let tr = run_scenario(&s).unwrap();
        assert!(tr.primary().iter().all(|&e| e < 1e-12));
        assert!(max_orthogonality_error(&tr).unwrap() < 1e-12);
    }
}
