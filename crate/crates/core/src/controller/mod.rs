//! Generalized PID: a repeated-pole homogeneous state-feedback controller
//! plus a first-order integral observer of the lumped disturbance.
//!
//! For the plant `x^(n) = f + b u` the control is split as
//! `u = (u_x - f_hat) / b`, where `u_x = -sum a_i x^(i)` places every
//! closed-loop pole of the disturbance-free system at `-omega`, and
//! `f_hat = omega_f (x^(n-1) - integral(u_x))` tracks `f` through the lag
//! `omega_f / (s + omega_f)`. For `n = 1, 2` the composition collapses to
//! classic PI / PID gains, see [`reduce_to_pi`] and [`reduce_to_pid`].

mod gains;
mod observer;
mod pid;

pub use gains::{
    closed_loop_tf, control_output, homogeneous_control, observer_tfs, reduce_to_pi,
    reduce_to_pid, synthesize_gains, ClassicPidGains, HomogeneousGains,
};
pub use observer::{observer_step, GeneralizedController, HomogeneousController, ObserverState};
pub use pid::{classic_pid_step, ClassicPid, PidIntegral};

use thiserror::Error;

use crate::poly::{PolyError, MAX_ORDER};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControllerError {
    #[error("invalid controller config: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error("expected {expected} state derivatives, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("reduction requires order {expected}, config has order {got}")]
    OrderMismatch { expected: usize, got: usize },
}

impl From<PolyError> for ControllerError {
    fn from(e: PolyError) -> Self {
        let field = match e {
            PolyError::NonPositiveBandwidth(_) => "omega",
            PolyError::ZeroOrder | PolyError::OrderTooLarge(_) => "order",
        };
        ControllerError::InvalidConfig {
            field,
            reason: e.to_string(),
        }
    }
}

/// Rule used for every running integral inside a controller.
///
/// The generalized form and the classic PID form only agree step for step
/// when both use the same rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Left endpoint: the value at step `k` integrates samples `0..k`.
    #[default]
    Rectangular,
    /// Trapezoids over samples `0..=k`, the current sample included.
    Trapezoidal,
}

impl std::str::FromStr for Quadrature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rectangular" | "rect" => Ok(Quadrature::Rectangular),
            "trapezoidal" | "trap" => Ok(Quadrature::Trapezoidal),
            other => Err(format!("unknown quadrature rule `{other}`")),
        }
    }
}

/// How the observer's `integral(u_x)` accumulator starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObserverInit {
    /// Start at zero; the `omega_f x^(n-1)(0)` offset is treated as part of
    /// the lumped disturbance.
    #[default]
    Zero,
    /// Start at `x^(n-1)(0)` so that `f_hat(0) = 0` exactly.
    MatchInitialState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerConfig<T = f64> {
    pub order: usize,
    pub b: T,
    pub omega: T,
    pub omega_f: T,
    pub dt: T,
    pub quadrature: Quadrature,
    pub observer_init: ObserverInit,
}

impl<T: Real> ControllerConfig<T> {
    pub fn new(order: usize, b: T, omega: T, omega_f: T, dt: T) -> Result<Self, ControllerError> {
        let cfg = Self {
            order,
            b,
            omega,
            omega_f,
            dt,
            quadrature: Quadrature::default(),
            observer_init: ObserverInit::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_quadrature(mut self, quadrature: Quadrature) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn with_observer_init(mut self, init: ObserverInit) -> Self {
        self.observer_init = init;
        self
    }

    pub fn validate(&self) -> Result<(), ControllerError> {
        let bad = |field, reason: String| Err(ControllerError::InvalidConfig { field, reason });
        if self.order == 0 {
            return bad("order", "must be at least 1".into());
        }
        if self.order > MAX_ORDER {
            return bad("order", format!("must not exceed {MAX_ORDER}"));
        }
        if !self.b.is_finite() || self.b == T::zero() {
            return bad("b", format!("must be finite and nonzero, got {}", self.b));
        }
        for (field, v) in [("omega", self.omega), ("omega_f", self.omega_f), ("dt", self.dt)] {
            if !(v.is_finite() && v > T::zero()) {
                return bad(field, format!("must be finite and positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// One controller evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput<T = f64> {
    /// Plant input.
    pub u: T,
    /// Homogeneous (state-feedback) component.
    pub u_x: T,
    /// Disturbance estimate; for forms without an explicit observer this is
    /// the implied `u_x - b u`.
    pub f_hat: T,
}

/// A controller for the integrator chain `x^(n) = f + b u`, fed the measured
/// derivatives `z = (x, x', ..., x^(n-1))` once per step.
pub trait ChainControl<T: Real> {
    fn step(&mut self, z: &[T]) -> Result<ControlOutput<T>, ControllerError>;
}
