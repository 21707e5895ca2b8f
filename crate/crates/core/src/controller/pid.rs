use crate::scalar::Real;

use super::gains::{
    homogeneous_control, reduce_to_pi, reduce_to_pid, synthesize_gains, ClassicPidGains, HomogeneousGains,
};
use super::{ChainControl, ControlOutput, ControllerConfig, ControllerError, Quadrature};

/// Running `integral(e)` of a classic PI/PID controller.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PidIntegral<T = f64> {
    pub value: T,
    prev_e: Option<T>,
}

impl<T: Real> PidIntegral<T> {
    pub fn new() -> Self {
        Self {
            value: T::zero(),
            prev_e: None,
        }
    }
}

/// `u = -(kd e_dot + kp e + ki integral(e)) / b`, the integral advanced with
/// the same rule the observer uses.
pub fn classic_pid_step<T: Real>(
    gains: &ClassicPidGains<T>,
    state: PidIntegral<T>,
    e: T,
    e_dot: T,
    b: T,
    dt: T,
    rule: Quadrature,
) -> (PidIntegral<T>, T) {
    let mut next = state;
    let integral = match rule {
        Quadrature::Rectangular => {
            next.value = state.value + e * dt;
            state.value
        }
        Quadrature::Trapezoidal => {
            if let Some(prev) = state.prev_e {
                next.value = state.value + (prev + e) * dt * T::lit(0.5);
            }
            next.value
        }
    };
    next.prev_e = Some(e);
    let kd = gains.kd.unwrap_or_else(T::zero);
    let u = -(kd * e_dot + gains.kp * e + gains.ki * integral) / b;
    (next, u)
}

/// Classic PI (order 1) or PID (order 2) built from the reduced gains.
#[derive(Debug, Clone)]
pub struct ClassicPid<T = f64> {
    config: ControllerConfig<T>,
    gains: ClassicPidGains<T>,
    homogeneous: HomogeneousGains<T>,
    integral: PidIntegral<T>,
}

impl<T: Real> ClassicPid<T> {
    pub fn new(config: ControllerConfig<T>) -> Result<Self, ControllerError> {
        let gains = match config.order {
            1 => reduce_to_pi(&config)?,
            2 => reduce_to_pid(&config)?,
            got => return Err(ControllerError::OrderMismatch { expected: 2, got }),
        };
        Ok(Self {
            config,
            gains,
            homogeneous: synthesize_gains(config.order, config.omega)?,
            integral: PidIntegral::new(),
        })
    }

    pub fn gains(&self) -> &ClassicPidGains<T> {
        &self.gains
    }
}

impl<T: Real> ChainControl<T> for ClassicPid<T> {
    fn step(&mut self, z: &[T]) -> Result<ControlOutput<T>, ControllerError> {
        if z.len() != self.config.order {
            return Err(ControllerError::DimensionMismatch {
                expected: self.config.order,
                got: z.len(),
            });
        }
        let e_dot = if z.len() > 1 { z[1] } else { T::zero() };
        let c = &self.config;
        let (next, u) = classic_pid_step(&self.gains, self.integral, z[0], e_dot, c.b, c.dt, c.quadrature);
        self.integral = next;
        // implied split: f_hat = u_x - b u
        let u_x = homogeneous_control(&self.homogeneous, z)?;
        Ok(ControlOutput {
            u,
            u_x,
            f_hat: u_x - c.b * u,
        })
    }
}
