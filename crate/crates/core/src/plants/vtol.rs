//! Underactuated VTOL rigid body and its trajectory-tracking controller.
//!
//! Frame convention: `e3` points along gravity, thrust acts along `-R e3`.
//!
//! ```text
//! p' = v
//! m v' = m g e3 - f R e3 + d_f
//! R' = R hat(w)
//! J w' = -w x (J w) + tau + d_tau
//! ```
//!
//! The controller treats both the translational error `p - p_d` and the
//! attitude error vector `g~` as double integrators with a lumped
//! disturbance, each compensated by the integral observer from
//! [`crate::controller`].

use thiserror::Error;

use crate::controller::{ObserverState, Quadrature};
use crate::scalar::Real;
use crate::sim::{DisturbanceSignal, PlantModel};

use super::so3::{hat, orthonormalize, so3_log, vee_unchecked, Mat3, RotationMatrix, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VtolError {
    #[error("attitude error parameterization is singular (tr(R~) + 1 = {0:e})")]
    AttitudeSingular(f64),
    #[error("desired force too small to define an attitude (|F_d| = {0:e})")]
    DegenerateThrust(f64),
    #[error("desired thrust direction is parallel to the heading vector")]
    GimbalDegenerate,
    #[error("invalid VTOL parameters: {0}")]
    InvalidParams(String),
}

/// Lower bound on `tr(R~) + 1` accepted by [`attitude_error`].
pub const ATTITUDE_SINGULAR_EPS: f64 = 1e-6;
/// Lower bound on `|F_d|` accepted by [`desired_attitude`].
pub const THRUST_EPS: f64 = 1e-9;
/// Lower bound on `|b3d x b_d|` accepted by [`desired_attitude`].
pub const CROSS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyState<T = f64> {
    pub p: Vec3<T>,
    pub v: Vec3<T>,
    pub r: RotationMatrix<T>,
    /// Body angular velocity.
    pub omega: Vec3<T>,
}

impl<T: Real> RigidBodyState<T> {
    pub const DIM: usize = 18;

    pub fn at_rest(p: Vec3<T>) -> Self {
        Self {
            p,
            v: Vec3::zero(),
            r: Mat3::identity(),
            omega: Vec3::zero(),
        }
    }

    /// Layout: `p(3) v(3) R(9, row-major) omega(3)`.
    pub fn to_vec(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(Self::DIM);
        out.extend_from_slice(&self.p.0);
        out.extend_from_slice(&self.v.0);
        out.extend_from_slice(&self.r.to_array());
        out.extend_from_slice(&self.omega.0);
        out
    }

    pub fn from_slice(s: &[T]) -> Self {
        Self {
            p: Vec3::from_slice(&s[0..3]),
            v: Vec3::from_slice(&s[3..6]),
            r: Mat3::from_slice(&s[6..15]),
            omega: Vec3::from_slice(&s[15..18]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidBodyDerivative<T = f64> {
    pub p_dot: Vec3<T>,
    pub v_dot: Vec3<T>,
    pub r_dot: Mat3<T>,
    pub omega_dot: Vec3<T>,
}

impl<T: Real> RigidBodyDerivative<T> {
    pub fn to_vec(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(RigidBodyState::<T>::DIM);
        out.extend_from_slice(&self.p_dot.0);
        out.extend_from_slice(&self.v_dot.0);
        out.extend_from_slice(&self.r_dot.to_array());
        out.extend_from_slice(&self.omega_dot.0);
        out
    }

    pub fn norm(&self) -> T {
        self.to_vec().iter().fold(T::zero(), |a, &v| a + v * v).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VtolParams<T = f64> {
    pub mass: T,
    pub g: T,
    pub inertia: Mat3<T>,
    inertia_inv: Mat3<T>,
    pub d_f: [DisturbanceSignal<T>; 3],
    pub d_tau: [DisturbanceSignal<T>; 3],
}

impl<T: Real> VtolParams<T> {
    pub fn new(mass: T, g: T, inertia: Mat3<T>) -> Result<Self, VtolError> {
        if !(mass > T::zero() && mass.is_finite()) {
            return Err(VtolError::InvalidParams(format!("mass must be positive, got {mass}")));
        }
        if !inertia.is_symmetric(T::lit(1e-12)) {
            return Err(VtolError::InvalidParams("inertia must be symmetric".into()));
        }
        // Sylvester: leading principal minors positive
        let m = &inertia.0;
        let m1 = m[0][0];
        let m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(m1 > T::zero() && m2 > T::zero() && inertia.det() > T::zero()) {
            return Err(VtolError::InvalidParams("inertia must be positive definite".into()));
        }
        let inertia_inv = inertia.try_inverse(T::zero()).expect("positive definite");
        Ok(Self {
            mass,
            g,
            inertia,
            inertia_inv,
            d_f: Default::default(),
            d_tau: Default::default(),
        })
    }

    pub fn with_force_disturbance(mut self, d_f: [DisturbanceSignal<T>; 3]) -> Self {
        self.d_f = d_f;
        self
    }

    pub fn with_torque_disturbance(mut self, d_tau: [DisturbanceSignal<T>; 3]) -> Self {
        self.d_tau = d_tau;
        self
    }

    pub fn inertia_inv(&self) -> &Mat3<T> {
        &self.inertia_inv
    }

    pub fn force_disturbance(&self, t: T) -> Vec3<T> {
        Vec3([0, 1, 2].map(|i| self.d_f[i].eval(t)))
    }

    pub fn torque_disturbance(&self, t: T) -> Vec3<T> {
        Vec3([0, 1, 2].map(|i| self.d_tau[i].eval(t)))
    }

    pub fn hover_thrust(&self) -> T {
        self.mass * self.g
    }
}

/// Right-hand side of the rigid-body model.
pub fn vtol_derivative<T: Real>(
    state: &RigidBodyState<T>,
    thrust: T,
    tau: &Vec3<T>,
    params: &VtolParams<T>,
    t: T,
) -> RigidBodyDerivative<T> {
    let e3 = Vec3::e3();
    let m = params.mass;
    let v_dot = e3.scale(params.g) - (state.r * e3).scale(thrust / m) + params.force_disturbance(t).scale(T::one() / m);
    let jw = params.inertia * state.omega;
    let omega_dot = params.inertia_inv * (-state.omega.cross(&jw) + *tau + params.torque_disturbance(t));
    RigidBodyDerivative {
        p_dot: state.v,
        v_dot,
        r_dot: state.r * hat(&state.omega),
        omega_dot,
    }
}

/// [`PlantModel`] wrapper: input `[f, tau_x, tau_y, tau_z]`, rotation
/// re-orthonormalized after every step.
#[derive(Debug, Clone)]
pub struct VtolPlant<T = f64> {
    pub params: VtolParams<T>,
}

impl<T: Real> PlantModel<T> for VtolPlant<T> {
    fn state_dim(&self) -> usize {
        RigidBodyState::<T>::DIM
    }

    fn derivative(&self, t: T, state: &[T], input: &[T], out: &mut [T]) {
        let s = RigidBodyState::from_slice(state);
        let d = vtol_derivative(&s, input[0], &Vec3::from_slice(&input[1..4]), &self.params, t);
        out.copy_from_slice(&d.to_vec());
    }

    fn project(&self, state: &mut [T]) {
        let r = orthonormalize(&Mat3::from_slice(&state[6..15]));
        state[6..15].copy_from_slice(&r.to_array());
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttitudeError<T = f64> {
    /// `R~ = R_d^T R`.
    pub r_tilde: Mat3<T>,
    /// Vector part `vee(R~ - R~^T) / (tr(R~) + 1)`.
    pub g_tilde: Vec3<T>,
    pub g_tilde_dot: Vec3<T>,
    /// `G = (I + hat(g~) + g~ g~^T) / 2`.
    pub g_matrix: Mat3<T>,
    /// `w~ = w - R~^T w_d`.
    pub omega_tilde: Vec3<T>,
}

impl<T: Real> AttitudeError<T> {
    /// Closed form `G^-1 = 2 (I - hat(g~)) / (1 + |g~|^2)`.
    pub fn g_inverse(&self) -> Mat3<T> {
        let g = &self.g_tilde;
        (Mat3::identity() - hat(g)).scale(T::lit(2.0) / (T::one() + g.dot(g)))
    }
}

pub fn attitude_error<T: Real>(
    r: &RotationMatrix<T>,
    r_d: &RotationMatrix<T>,
    omega: &Vec3<T>,
    omega_d: &Vec3<T>,
) -> Result<AttitudeError<T>, VtolError> {
    let r_tilde = r_d.transpose() * *r;
    let denom = r_tilde.trace() + T::one();
    if denom < T::lit(ATTITUDE_SINGULAR_EPS) {
        return Err(VtolError::AttitudeSingular(denom.to_f64_lossy()));
    }
    let g_tilde = vee_unchecked(&(r_tilde - r_tilde.transpose())).scale(T::one() / denom);
    let g_matrix = (Mat3::identity() + hat(&g_tilde) + Mat3::outer(&g_tilde, &g_tilde)).scale(T::lit(0.5));
    let omega_tilde = *omega - r_tilde.transpose() * *omega_d;
    Ok(AttitudeError {
        r_tilde,
        g_tilde,
        g_tilde_dot: g_matrix * omega_tilde,
        g_matrix,
        omega_tilde,
    })
}

/// Desired attitude from the desired force and heading, plus the thrust
/// obtained by projecting `F_d` on the current body axis `R e3`.
pub fn desired_attitude<T: Real>(
    f_d: &Vec3<T>,
    psi_d: T,
    r: &RotationMatrix<T>,
) -> Result<(RotationMatrix<T>, T), VtolError> {
    let norm = f_d.norm();
    if !(norm > T::lit(THRUST_EPS)) {
        return Err(VtolError::DegenerateThrust(norm.to_f64_lossy()));
    }
    let b3 = f_d.scale(T::one() / norm);
    let heading = Vec3::new(psi_d.cos(), psi_d.sin(), T::zero());
    let c = b3.cross(&heading);
    let cn = c.norm();
    if cn < T::lit(CROSS_EPS) {
        return Err(VtolError::GimbalDegenerate);
    }
    let b2 = c.scale(T::one() / cn);
    let b1 = b2.cross(&b3);
    let r_d = Mat3::from_cols(b1, b2, b3);
    let thrust = (*r * Vec3::e3()).dot(f_d);
    Ok((r_d, thrust))
}

/// Reference position with its first two time derivatives, and heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSample<T = f64> {
    pub p: Vec3<T>,
    pub v: Vec3<T>,
    pub a: Vec3<T>,
    pub psi: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VtolReference<T = f64> {
    Hover { p: Vec3<T> },
    /// Horizontal circle `(r cos wt, r sin wt, z)`.
    Circle { radius: T, omega: T, z: T },
    /// `(ax sin(wx t + phase), ay sin(wy t), z)`.
    Lissajous { ax: T, ay: T, wx: T, wy: T, phase: T, z: T },
}

impl<T: Real> VtolReference<T> {
    pub fn sample(&self, t: T, psi: T) -> ReferenceSample<T> {
        let o = T::zero();
        let (p, v, a) = match *self {
            VtolReference::Hover { p } => (p, Vec3::zero(), Vec3::zero()),
            VtolReference::Circle { radius, omega, z } => {
                let (s, c) = (omega * t).sin_cos();
                let w2 = omega * omega;
                (
                    Vec3::new(radius * c, radius * s, z),
                    Vec3::new(-radius * omega * s, radius * omega * c, o),
                    Vec3::new(-radius * w2 * c, -radius * w2 * s, o),
                )
            }
            VtolReference::Lissajous { ax, ay, wx, wy, phase, z } => {
                let (sx, cx) = (wx * t + phase).sin_cos();
                let (sy, cy) = (wy * t).sin_cos();
                (
                    Vec3::new(ax * sx, ay * sy, z),
                    Vec3::new(ax * wx * cx, ay * wy * cy, o),
                    Vec3::new(-ax * wx * wx * sx, -ay * wy * wy * sy, o),
                )
            }
        };
        ReferenceSample { p, v, a, psi }
    }
}

/// Bandwidths for both loops. Each loop uses `k0 = w^2`, `k1 = 2 w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VtolGains<T = f64> {
    pub omega_pos: T,
    pub omega_f: T,
    pub omega_att: T,
    pub omega_tau: T,
}

impl<T: Real> VtolGains<T> {
    pub fn pos_k(&self) -> (T, T) {
        (self.omega_pos * self.omega_pos, T::lit(2.0) * self.omega_pos)
    }

    pub fn att_k(&self) -> (T, T) {
        (self.omega_att * self.omega_att, T::lit(2.0) * self.omega_att)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VtolCommand<T = f64> {
    pub thrust: T,
    pub tau: Vec3<T>,
    pub f_desired: Vec3<T>,
    pub r_desired: RotationMatrix<T>,
    pub omega_desired: Vec3<T>,
    pub d_f_hat: Vec3<T>,
    pub d_tau_hat: Vec3<T>,
    pub attitude: AttitudeError<T>,
}

/// Position + attitude tracking with lumped-disturbance observers on both loops.
#[derive(Debug, Clone)]
pub struct VtolController<T = f64> {
    gains: VtolGains<T>,
    mass: T,
    g: T,
    inertia: Mat3<T>,
    dt: T,
    quadrature: Quadrature,
    force_obs: [ObserverState<T>; 3],
    torque_obs: [ObserverState<T>; 3],
    prev_r_d: Option<RotationMatrix<T>>,
}

impl<T: Real> VtolController<T> {
    pub fn new(gains: VtolGains<T>, params: &VtolParams<T>, dt: T, quadrature: Quadrature) -> Self {
        Self {
            gains,
            mass: params.mass,
            g: params.g,
            inertia: params.inertia,
            dt,
            quadrature,
            force_obs: [ObserverState::new(); 3],
            torque_obs: [ObserverState::new(); 3],
            prev_r_d: None,
        }
    }

    pub fn step(&mut self, state: &RigidBodyState<T>, reference: &ReferenceSample<T>) -> Result<VtolCommand<T>, VtolError> {
        let (k0, k1) = self.gains.pos_k();
        let p_err = state.p - reference.p;
        let v_err = state.v - reference.v;
        let f_x = -(p_err.scale(k0) + v_err.scale(k1));
        let mut d_f_hat = Vec3::zero();
        for i in 0..3 {
            d_f_hat[i] = self.force_obs[i].step(v_err[i], f_x[i], self.gains.omega_f, self.dt, self.quadrature);
        }
        let f_desired = -(f_x - d_f_hat - Vec3::e3().scale(self.g)).scale(self.mass);
        let (r_desired, thrust) = desired_attitude(&f_desired, reference.psi, &state.r)?;

        // w_d from the backward difference of R_d between controller steps
        let omega_desired = match self.prev_r_d {
            Some(prev) => so3_log(&(prev.transpose() * r_desired)).scale(T::one() / self.dt),
            None => Vec3::zero(),
        };
        self.prev_r_d = Some(r_desired);

        let attitude = attitude_error(&state.r, &r_desired, &state.omega, &omega_desired)?;
        let (a0, a1) = self.gains.att_k();
        let tau_x = -(attitude.g_tilde.scale(a0) + attitude.g_tilde_dot.scale(a1));
        let mut d_tau_hat = Vec3::zero();
        for i in 0..3 {
            d_tau_hat[i] = self.torque_obs[i].step(
                attitude.g_tilde_dot[i],
                tau_x[i],
                self.gains.omega_tau,
                self.dt,
                self.quadrature,
            );
        }
        let tau = self.inertia * (attitude.g_inverse() * (tau_x - d_tau_hat));
        Ok(VtolCommand {
            thrust,
            tau,
            f_desired,
            r_desired,
            omega_desired,
            d_f_hat,
            d_tau_hat,
            attitude,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::so3::{axis_angle, orthogonality_error};
    use super::*;

    fn params() -> VtolParams {
        VtolParams::new(2.0, 9.81, Mat3::diag(Vec3::new(0.02, 0.025, 0.04))).unwrap()
    }

    #[test]
    fn hover_is_equilibrium() {
        let p = params();
        let s = RigidBodyState::at_rest(Vec3::new(1.0, -2.0, 3.0));
        let d = vtol_derivative(&s, p.hover_thrust(), &Vec3::zero(), &p, 0.0);
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn free_fall() {
        let p = params();
        let s = RigidBodyState::at_rest(Vec3::zero());
        let d = vtol_derivative(&s, 0.0, &Vec3::zero(), &p, 0.0);
        assert_eq!(d.v_dot, Vec3::new(0.0, 0.0, 9.81));
    }

    #[test]
    fn principal_axis_spin_has_no_gyroscopic_torque() {
        let p = params();
        let mut s = RigidBodyState::at_rest(Vec3::zero());
        s.omega = Vec3::new(0.0, 0.0, 5.0);
        let d = vtol_derivative(&s, p.hover_thrust(), &Vec3::zero(), &p, 0.0);
        assert!(d.omega_dot.norm() < 1e-15);
        s.omega = Vec3::new(1.0, 0.0, 5.0);
        let d = vtol_derivative(&s, p.hover_thrust(), &Vec3::zero(), &p, 0.0);
        assert!(d.omega_dot.norm() > 1e-3);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(VtolParams::new(0.0, 9.81, Mat3::identity()).is_err());
        assert!(VtolParams::new(1.0, 9.81, Mat3::diag(Vec3::new(1.0, -1.0, 1.0))).is_err());
        let mut asym = Mat3::identity();
        asym.0[0][1] = 0.1;
        assert!(VtolParams::new(1.0, 9.81, asym).is_err());
    }

    #[test]
    fn identity_attitude_error() {
        let r = axis_angle(&Vec3::new(0.2, 1.0, -0.3), 0.8);
        let w = Vec3::new(0.1, -0.2, 0.3);
        let e = attitude_error(&r, &r, &w, &Vec3::zero()).unwrap();
        assert!(e.g_tilde.norm() < 1e-15);
        assert!((e.g_matrix - Mat3::identity().scale(0.5)).frobenius_norm() < 1e-15);
        assert!((e.g_tilde_dot - w.scale(0.5)).norm() < 1e-15);
    }

    #[test]
    fn small_yaw_error_is_half_angle_tangent() {
        let phi: f64 = 0.02;
        let r = axis_angle(&Vec3::e3(), phi);
        let e = attitude_error(&r, &Mat3::identity(), &Vec3::zero(), &Vec3::zero()).unwrap();
        assert!((e.g_tilde - Vec3::new(0.0, 0.0, (phi / 2.0).tan())).norm() < 1e-15);
    }

    #[test]
    fn half_turn_is_singular() {
        let r = axis_angle(&Vec3::new(1.0, 0.0, 0.0), std::f64::consts::PI);
        assert!(matches!(
            attitude_error(&r, &Mat3::identity(), &Vec3::zero(), &Vec3::zero()),
            Err(VtolError::AttitudeSingular(_))
        ));
    }

    #[test]
    fn g_inverse_closed_form() {
        let r = axis_angle(&Vec3::new(0.3, -0.5, 0.8), 1.1);
        let e = attitude_error(&r, &Mat3::identity(), &Vec3::zero(), &Vec3::zero()).unwrap();
        let inv = e.g_matrix.try_inverse(1e-12).unwrap();
        assert!((inv - e.g_inverse()).frobenius_norm() < 1e-13);
    }

    #[test]
    fn g_tilde_rate_matches_finite_difference() {
        // attitude trajectory R(t) = exp(t a) exp(t^2 b), R_d(t) = exp(t c)
        let (a, b, c) = (Vec3::new(0.3, -0.2, 0.5), Vec3::new(0.1, 0.4, -0.2), Vec3::new(-0.2, 0.1, 0.3));
        let rot = |t: f64| super::super::so3::so3_exp(&a.scale(t)) * super::super::so3::so3_exp(&b.scale(t * t));
        let rot_d = |t: f64| super::super::so3::so3_exp(&c.scale(t));
        let h = 1e-5;
        for &t in &[0.1, 0.5, 1.0, 1.7] {
            // body rates via central differences of the trajectories
            let body_rate = |f: &dyn Fn(f64) -> Mat3, t: f64| {
                let rdot = (f(t + h) - f(t - h)).scale(0.5 / h);
                vee_unchecked(&(f(t).transpose() * rdot))
            };
            let w = body_rate(&rot, t);
            let w_d = body_rate(&rot_d, t);
            let e = attitude_error(&rot(t), &rot_d(t), &w, &w_d).unwrap();
            let gp = attitude_error(&rot(t + h), &rot_d(t + h), &w, &w_d).unwrap().g_tilde;
            let gm = attitude_error(&rot(t - h), &rot_d(t - h), &w, &w_d).unwrap().g_tilde;
            let fd = (gp - gm).scale(0.5 / h);
            let rel = (fd - e.g_tilde_dot).norm() / e.g_tilde_dot.norm();
            assert!(rel < 1e-3, "t={t}: rel {rel}");
        }
    }

    #[test]
    fn hover_force_gives_identity_attitude() {
        let f = Vec3::<f64>::new(0.0, 0.0, 2.0 * 9.81);
        let (r_d, thrust) = desired_attitude(&f, 0.0, &Mat3::identity()).unwrap();
        assert!((r_d - Mat3::identity()).frobenius_norm() < 1e-15);
        assert!((thrust - f.norm()).abs() < 1e-12);
    }

    #[test]
    fn desired_attitude_is_rotation() {
        let f = Vec3::<f64>::new(1.5, -0.7, 18.0);
        let (r_d, _) = desired_attitude(&f, 0.6, &Mat3::identity()).unwrap();
        assert!(orthogonality_error(&r_d) < 1e-12);
        assert!((r_d.det() - 1.0).abs() < 1e-12);
        assert!((r_d * Vec3::e3() - f.normalized()).norm() < 1e-15);
        // projecting through R = R_d recovers |F_d|
        let (_, thrust) = desired_attitude(&f, 0.6, &r_d).unwrap();
        assert!((thrust - f.norm()).abs() < 1e-12);
    }

    #[test]
    fn desired_attitude_degeneracies() {
        assert!(matches!(
            desired_attitude(&Vec3::zero(), 0.0, &Mat3::identity()),
            Err(VtolError::DegenerateThrust(_))
        ));
        assert!(matches!(
            desired_attitude(&Vec3::new(1.0, 0.0, 0.0), 0.0, &Mat3::identity()),
            Err(VtolError::GimbalDegenerate)
        ));
    }

    #[test]
    fn controller_at_equilibrium_commands_hover() {
        let p = params();
        let gains = VtolGains { omega_pos: 2.0, omega_f: 10.0, omega_att: 8.0, omega_tau: 40.0 };
        let mut c = VtolController::new(gains, &p, 1e-3, Quadrature::Rectangular);
        let s = RigidBodyState::at_rest(Vec3::new(0.0, 0.0, -1.0));
        let reference = VtolReference::Hover { p: s.p }.sample(0.0, 0.0);
        for _ in 0..3 {
            let cmd = c.step(&s, &reference).unwrap();
            assert!((cmd.thrust - p.hover_thrust()).abs() < 1e-12);
            assert!(cmd.tau.norm() < 1e-12);
        }
    }

    #[test]
    fn reference_derivatives_consistent() {
        let refs = [
            VtolReference::Circle { radius: 1.5, omega: 0.8, z: -1.0 },
            VtolReference::Lissajous { ax: 1.0, ay: 0.5, wx: 1.0, wy: 2.0, phase: 0.3, z: -2.0 },
        ];
        let h = 1e-5;
        for r in refs {
            for &t in &[0.0, 0.7, 2.3] {
                let s = r.sample(t, 0.0);
                let fd_v = (r.sample(t + h, 0.0).p - r.sample(t - h, 0.0).p).scale(0.5 / h);
                let fd_a = (r.sample(t + h, 0.0).v - r.sample(t - h, 0.0).v).scale(0.5 / h);
                assert!((fd_v - s.v).norm() < 1e-8);
                assert!((fd_a - s.a).norm() < 1e-8);
            }
        }
    }
}
