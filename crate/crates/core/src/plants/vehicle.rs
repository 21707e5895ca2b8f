//! Kinematic bicycle and lateral control in the distance domain.
//!
//! With `s` the travelled distance, the lateral error obeys
//!
//! ```text
//! l'  = sin e_theta
//! l'' = cos e_theta (r_s kappa_d - tan(delta + d) / L)
//! ```

use thiserror::Error;

use crate::controller::{ObserverState, Quadrature};
use crate::scalar::Real;
use crate::sim::PlantModel;

use super::path::LateralErrorState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VehicleError {
    #[error("effective steering angle {0} rad reaches the +-pi/2 limit")]
    SteeringLimit(f64),
    #[error("heading error {0} rad outside (-pi/2, pi/2)")]
    HeadingSingular(f64),
    #[error("non-finite steering command")]
    NonFinite,
}

/// Margin kept from `pi/2` by the steering and heading guards.
pub const ANGLE_GUARD: f64 = 1e-6;

fn half_pi_guard<T: Real>() -> T {
    T::lit(std::f64::consts::FRAC_PI_2 - ANGLE_GUARD)
}

fn check_heading<T: Real>(e_theta: T) -> Result<(), VehicleError> {
    if e_theta.abs() >= half_pi_guard() {
        Err(VehicleError::HeadingSingular(e_theta.to_f64_lossy()))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicycleState<T = f64> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

/// `(v cos theta, v sin theta, v tan(delta + d) / L)`.
pub fn bicycle_derivative<T: Real>(
    state: &BicycleState<T>,
    v: T,
    delta: T,
    d: T,
    wheelbase: T,
) -> Result<[T; 3], VehicleError> {
    let eff = delta + d;
    if eff.abs() >= half_pi_guard() {
        return Err(VehicleError::SteeringLimit(eff.to_f64_lossy()));
    }
    Ok([v * state.theta.cos(), v * state.theta.sin(), v * eff.tan() / wheelbase])
}

/// Time-domain bicycle with constant speed and steering bias; input `[delta]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BicyclePlant<T = f64> {
    pub speed: T,
    pub wheelbase: T,
    pub bias: T,
}

impl<T: Real> BicyclePlant<T> {
    pub fn check_steering(&self, delta: T) -> Result<(), VehicleError> {
        bicycle_derivative(&BicycleState { x: T::zero(), y: T::zero(), theta: T::zero() }, self.speed, delta, self.bias, self.wheelbase)
            .map(|_| ())
    }
}

impl<T: Real> PlantModel<T> for BicyclePlant<T> {
    fn state_dim(&self) -> usize {
        3
    }

    fn derivative(&self, _t: T, state: &[T], input: &[T], out: &mut [T]) {
        let (s, c) = state[2].sin_cos();
        out[0] = self.speed * c;
        out[1] = self.speed * s;
        out[2] = self.speed * (input[0] + self.bias).tan() / self.wheelbase;
    }
}

/// `(l', l'')` in the distance domain.
pub fn lateral_error_derivatives<T: Real>(
    err: &LateralErrorState<T>,
    delta: T,
    d: T,
    wheelbase: T,
    r_s: T,
    kappa_d: T,
) -> (T, T) {
    let (s, c) = err.e_theta.sin_cos();
    (s, c * (r_s * kappa_d - (delta + d).tan() / wheelbase))
}

/// `ds_d/ds` from the path geometry: `cos e_theta / (1 + kappa_d l)`.
pub fn geometric_rs<T: Real>(err: &LateralErrorState<T>, kappa_d: T) -> T {
    err.e_theta.cos() / (T::one() + kappa_d * err.l)
}

/// Known-bias feedback linearization with `r_s = 1`.
pub fn lateral_controller_known_d<T: Real>(
    err: &LateralErrorState<T>,
    kappa_d: T,
    d: T,
    wheelbase: T,
    k0: T,
    k1: T,
) -> Result<T, VehicleError> {
    check_heading(err.e_theta)?;
    let sec = T::one() / err.e_theta.cos();
    let delta = (wheelbase * (kappa_d + sec * (k0 * err.l + k1 * err.e_theta.sin()))).atan() - d;
    if delta.is_finite() {
        Ok(delta)
    } else {
        Err(VehicleError::NonFinite)
    }
}

/// Lumped disturbance of the lateral error model under the observer law:
/// `cos e_theta (r_s kappa_d - (tan(delta + d) - tan delta) / L)`.
pub fn lateral_lumped_disturbance<T: Real>(
    err: &LateralErrorState<T>,
    delta: T,
    d: T,
    wheelbase: T,
    r_s: T,
    kappa_d: T,
) -> T {
    let (td, tb) = (delta.tan(), d.tan());
    let jump = tb * (T::one() + td * td) / (T::one() - td * tb);
    err.e_theta.cos() * (r_s * kappa_d - jump / wheelbase)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateralCommand<T = f64> {
    pub delta: T,
    pub u_x: T,
    pub d_hat: T,
}

/// Speeds below this freeze the distance-domain observer update.
pub const MIN_SPEED: f64 = 1e-9;

/// Observer-based lateral controller:
///
/// ```text
/// delta = atan(L sec e_theta (u_x + d_hat))
/// u_x   = k0 l + k1 sin e_theta
/// d_hat = omega_d (sin e_theta + integral(u_x ds))
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LateralObserverController<T = f64> {
    pub k0: T,
    pub k1: T,
    pub omega_d: T,
    pub wheelbase: T,
    pub quadrature: Quadrature,
    observer: ObserverState<T>,
}

impl<T: Real> LateralObserverController<T> {
    pub fn new(omega: T, omega_d: T, wheelbase: T, quadrature: Quadrature) -> Self {
        Self {
            k0: omega * omega,
            k1: T::lit(2.0) * omega,
            omega_d,
            wheelbase,
            quadrature,
            observer: ObserverState::new(),
        }
    }

    pub fn observer(&self) -> &ObserverState<T> {
        &self.observer
    }

    /// One control step covering distance `ds = v dt`.
    pub fn step(&mut self, err: &LateralErrorState<T>, ds: T) -> Result<LateralCommand<T>, VehicleError> {
        check_heading(err.e_theta)?;
        let sin_e = err.e_theta.sin();
        let u_x = self.k0 * err.l + self.k1 * sin_e;
        // same observer as the chain template with x_top = sin e_theta and
        // homogeneous input -u_x, since the input gain -cos e_theta / L is negative
        let d_hat = if ds.abs() < T::lit(MIN_SPEED) {
            self.omega_d * (sin_e - self.observer.ux_integral)
        } else {
            self.observer.step(sin_e, -u_x, self.omega_d, ds, self.quadrature)
        };
        let delta = (self.wheelbase * (u_x + d_hat) / err.e_theta.cos()).atan();
        if !delta.is_finite() {
            return Err(VehicleError::NonFinite);
        }
        Ok(LateralCommand { delta, u_x, d_hat })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plants::path::{FrenetPath, MatchOptions};
    use crate::sim::rk4_step;

    fn err(l: f64, e_theta: f64) -> LateralErrorState {
        LateralErrorState { l, e_theta, s_d: 0.0 }
    }

    #[test]
    fn bicycle_rates() {
        let s = BicycleState::<f64> { x: 0.0, y: 0.0, theta: 0.0 };
        assert_eq!(bicycle_derivative(&s, 10.0, 0.0, 0.0, 2.7).unwrap(), [10.0, 0.0, 0.0]);
        let r = bicycle_derivative(&s, 10.0, 0.07, 0.03, 2.7).unwrap();
        assert!((r[2] - 0.371_63).abs() < 1e-4);
        assert!((r[2] - 10.0 * 0.1f64.tan() / 2.7).abs() < 1e-15);
        assert!(matches!(
            bicycle_derivative(&s, 10.0, 1.6, 0.0, 2.7),
            Err(VehicleError::SteeringLimit(_))
        ));
    }

    #[test]
    fn constant_steer_closes_circle() {
        let plant = BicyclePlant { speed: 10.0, wheelbase: 2.7, bias: 0.02 };
        let delta = 0.08;
        let radius = 2.7 / (0.1f64).tan();
        let period = std::f64::consts::TAU * radius / 10.0;
        let steps = 20_000;
        let dt = period / steps as f64;
        let mut x = vec![1.0, -2.0, 0.4];
        for k in 0..steps {
            x = rk4_step(&plant, k as f64 * dt, &x, &[delta], dt).unwrap();
        }
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] + 2.0).abs() < 1e-9);
        assert!((x[2] - 0.4 - std::f64::consts::TAU).abs() < 1e-9);
    }

    #[test]
    fn error_derivative_examples() {
        let (d1, d2) = lateral_error_derivatives(&err(0.3, 0.0), 0.0, (2.7f64 / 50.0).atan(), 2.7, 1.0, 1.0 / 50.0);
        assert_eq!(d1, 0.0);
        assert!(d2.abs() < 1e-16);
        assert_eq!(lateral_error_derivatives(&err(0.0, 0.1), 0.0, 0.0, 2.7, 1.0, 0.0), (0.1f64.sin(), 0.0));
    }

    #[test]
    fn known_d_examples() {
        assert_eq!(lateral_controller_known_d(&err(0.0, 0.0), 0.0, 0.0, 2.7, 0.25, 1.0).unwrap(), 0.0);
        let d = 0.03;
        let delta = lateral_controller_known_d(&err(0.0, 0.0), 1.0 / 50.0, d, 2.7, 0.25, 1.0).unwrap();
        assert!((delta - ((2.7f64 / 50.0).atan() - d)).abs() < 1e-15);
        assert!(matches!(
            lateral_controller_known_d(&err(0.0, 1.6), 0.0, 0.0, 2.7, 0.25, 1.0),
            Err(VehicleError::HeadingSingular(_))
        ));
    }

    #[test]
    fn known_d_linearizes_exactly() {
        let (k0, k1, wb, d) = (0.25, 1.0, 2.7, 0.035);
        for &(l, e, kappa) in &[(0.4, 0.2, 0.0), (-1.3, -0.6, 0.02), (2.0, 1.2, -0.05)] {
            let er = err(l, e);
            let delta = lateral_controller_known_d(&er, kappa, d, wb, k0, k1).unwrap();
            let (lp, lpp) = lateral_error_derivatives(&er, delta, d, wb, 1.0, kappa);
            assert!((lpp + k0 * l + k1 * lp).abs() < 1e-12);
        }
    }

    #[test]
    fn lumped_form() {
        // straight path steady state delta = -d gives -tan(d)/L
        let (d, wb): (f64, f64) = (0.0349, 2.7);
        let f = lateral_lumped_disturbance(&err(0.0, 0.0), -d, d, wb, 1.0, 0.0);
        assert!((f + d.tan() / wb).abs() < 1e-15);
        // identity l'' = -(u_x + d_hat) + d_lump once the observer law is in place
        for &(l, e, dh, kappa) in &[(0.3, 0.1, 0.01, 0.02), (-0.8, -0.3, -0.05, 0.0)] {
            let er = err(l, e);
            let u_x = 0.25 * l + 1.0 * e.sin();
            let delta = (wb * (u_x + dh) / e.cos()).atan();
            let rs = 0.97;
            let (_, lpp) = lateral_error_derivatives(&er, delta, d, wb, rs, kappa);
            let lump = lateral_lumped_disturbance(&er, delta, d, wb, rs, kappa);
            assert!((lpp - (-(u_x + dh) + lump)).abs() < 1e-14);
        }
    }

    #[test]
    fn geometric_rs_on_circle() {
        // radial offset keeps e_theta = 0; the matching point moves at R / (R + off)
        let r = 50.0;
        let rs = geometric_rs(&err(0.5, 0.0), 1.0 / r);
        assert!((rs - r / (r + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn observer_freezes_at_zero_speed() {
        let mut c = LateralObserverController::new(0.5, 2.0, 2.7, Quadrature::Rectangular);
        let e = err(0.5, 0.1);
        c.step(&e, 0.0).unwrap();
        assert_eq!(c.observer().ux_integral, 0.0);
        c.step(&e, 1e-3).unwrap();
        assert!(c.observer().ux_integral != 0.0);
    }

    #[test]
    fn closed_loop_known_d_follows_linear_response() {
        // distance-domain simulation from l(0) = 1 on a straight path
        let (omega, wb, v, dt) = (0.5, 2.7, 10.0, 1e-4);
        let (k0, k1) = (omega * omega, 2.0 * omega);
        let path = FrenetPath::line(60.0);
        let plant = BicyclePlant { speed: v, wheelbase: wb, bias: 0.03 };
        let mut x = vec![0.0, -1.0, 0.0];
        let mut k = 0usize;
        loop {
            let m = path.match_pose(x[0], x[1], x[2], &MatchOptions::default()).unwrap();
            let s = k as f64 * v * dt;
            if s >= 3.0 / omega {
                let oracle = (1.0 + omega * s) * (-omega * s).exp();
                assert!((m.error.l - oracle).abs() <= 0.02 * oracle, "s={s} l={} oracle={oracle}", m.error.l);
            }
            if s > 40.0 {
                break;
            }
            let delta = lateral_controller_known_d(&m.error, m.point.kappa, plant.bias, wb, k0, k1).unwrap();
            x = rk4_step(&plant, k as f64 * dt, &x, &[delta], dt).unwrap();
            k += 1;
        }
    }
}
