use crate::scalar::Real;

use super::gains::{control_output, homogeneous_control, synthesize_gains, HomogeneousGains};
use super::{ChainControl, ControlOutput, ControllerConfig, ControllerError, ObserverInit, Quadrature};

/// Running state of the integral-form lumped-disturbance observer.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObserverState<T = f64> {
    /// Accumulated `integral(u_x)`.
    pub ux_integral: T,
    /// Latest disturbance estimate.
    pub f_hat: T,
    prev_ux: Option<T>,
}

impl<T: Real> ObserverState<T> {
    pub fn new() -> Self {
        Self {
            ux_integral: T::zero(),
            f_hat: T::zero(),
            prev_ux: None,
        }
    }

    /// Accumulator preloaded with `x^(n-1)(0)` so the first estimate is zero.
    pub fn matched(x_top_initial: T) -> Self {
        Self {
            ux_integral: x_top_initial,
            ..Self::new()
        }
    }

    /// Advance one step. Returns the estimate for the current sample.
    pub fn step(&mut self, x_top: T, u_x: T, omega_f: T, dt: T, rule: Quadrature) -> T {
        let (next, f_hat) = observer_step(*self, x_top, u_x, omega_f, dt, rule);
        *self = next;
        f_hat
    }
}

/// `f_hat = omega_f (x_top - integral(u_x))`.
///
/// Under [`Quadrature::Rectangular`] the estimate at sample `k` uses the
/// integral of samples `0..k` and the current `u_x` is accumulated afterwards;
/// under [`Quadrature::Trapezoidal`] the current sample is folded in first.
pub fn observer_step<T: Real>(
    state: ObserverState<T>,
    x_top: T,
    u_x: T,
    omega_f: T,
    dt: T,
    rule: Quadrature,
) -> (ObserverState<T>, T) {
    let mut next = state;
    let f_hat = match rule {
        Quadrature::Rectangular => {
            let f_hat = omega_f * (x_top - state.ux_integral);
            next.ux_integral = state.ux_integral + u_x * dt;
            f_hat
        }
        Quadrature::Trapezoidal => {
            if let Some(prev) = state.prev_ux {
                next.ux_integral = state.ux_integral + (prev + u_x) * dt * T::lit(0.5);
            }
            omega_f * (x_top - next.ux_integral)
        }
    };
    next.prev_ux = Some(u_x);
    next.f_hat = f_hat;
    (next, f_hat)
}

/// Homogeneous controller composed with the lumped-disturbance observer.
#[derive(Debug, Clone)]
pub struct GeneralizedController<T = f64> {
    config: ControllerConfig<T>,
    gains: HomogeneousGains<T>,
    observer: ObserverState<T>,
    started: bool,
}

impl<T: Real> GeneralizedController<T> {
    pub fn new(config: ControllerConfig<T>) -> Result<Self, ControllerError> {
        config.validate()?;
        let gains = synthesize_gains(config.order, config.omega)?;
        Ok(Self::with_gains(config, gains))
    }

    /// Use explicit (possibly non-equal-pole) homogeneous gains.
    pub fn with_gains(config: ControllerConfig<T>, gains: HomogeneousGains<T>) -> Self {
        Self {
            config,
            gains,
            observer: ObserverState::new(),
            started: false,
        }
    }

    pub fn config(&self) -> &ControllerConfig<T> {
        &self.config
    }

    pub fn gains(&self) -> &HomogeneousGains<T> {
        &self.gains
    }

    pub fn observer(&self) -> &ObserverState<T> {
        &self.observer
    }
}

impl<T: Real> ChainControl<T> for GeneralizedController<T> {
    fn step(&mut self, z: &[T]) -> Result<ControlOutput<T>, ControllerError> {
        let u_x = homogeneous_control(&self.gains, z)?;
        let x_top = z[z.len() - 1];
        if !self.started {
            if self.config.observer_init == ObserverInit::MatchInitialState {
                self.observer = ObserverState::matched(x_top);
            }
            self.started = true;
        }
        let c = &self.config;
        let f_hat = self.observer.step(x_top, u_x, c.omega_f, c.dt, c.quadrature);
        let u = control_output(u_x, f_hat, c.b)?;
        Ok(ControlOutput { u, u_x, f_hat })
    }
}

/// State feedback only, no disturbance compensation: `u = u_x / b`.
#[derive(Debug, Clone)]
pub struct HomogeneousController<T = f64> {
    b: T,
    gains: HomogeneousGains<T>,
}

impl<T: Real> HomogeneousController<T> {
    pub fn new(order: usize, b: T, omega: T) -> Result<Self, ControllerError> {
        if b == T::zero() || !b.is_finite() {
            return Err(ControllerError::InvalidConfig {
                field: "b",
                reason: format!("must be finite and nonzero, got {b}"),
            });
        }
        Ok(Self {
            b,
            gains: synthesize_gains(order, omega)?,
        })
    }
}

impl<T: Real> ChainControl<T> for HomogeneousController<T> {
    fn step(&mut self, z: &[T]) -> Result<ControlOutput<T>, ControllerError> {
        let u_x = homogeneous_control(&self.gains, z)?;
        Ok(ControlOutput {
            u: control_output(u_x, T::zero(), self.b)?,
            u_x,
            f_hat: T::zero(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_gives_zero_estimate() {
        let (_, f) = observer_step(ObserverState::new(), 0.0, 0.0, 10.0, 1e-3, Quadrature::Rectangular);
        assert_eq!(f, 0.0);
    }

    #[test]
    fn constant_ux_accumulates_linearly() {
        let (wf, c, dt) = (10.0, 0.7, 1e-2);
        let mut s = ObserverState::new();
        for k in 0..500 {
            let f = s.step(0.0, c, wf, dt, Quadrature::Rectangular);
            let expect = -wf * c * k as f64 * dt;
            assert!((f - expect).abs() <= 1e-12 * (1.0 + expect.abs()), "k={k}: {f} vs {expect}");
        }
    }

    #[test]
    fn trapezoid_includes_current_sample() {
        let mut s = ObserverState::<f64>::new();
        let dt = 0.1;
        assert_eq!(s.step(0.0, 1.0, 1.0, dt, Quadrature::Trapezoidal), 0.0);
        let f = s.step(0.0, 3.0, 1.0, dt, Quadrature::Trapezoidal);
        assert!((f + 0.2).abs() < 1e-15);
    }

    #[test]
    fn matched_init_zeroes_first_estimate() {
        let cfg = ControllerConfig::new(2, 1.0, 2.0, 10.0, 1e-3)
            .unwrap()
            .with_observer_init(ObserverInit::MatchInitialState);
        let mut c = GeneralizedController::new(cfg).unwrap();
        let out = c.step(&[0.3, 1.5]).unwrap();
        assert_eq!(out.f_hat, 0.0);

        let mut d = GeneralizedController::new(cfg.with_observer_init(ObserverInit::Zero)).unwrap();
        assert_eq!(d.step(&[0.3, 1.5]).unwrap().f_hat, 15.0);
    }

    #[test]
    fn homogeneous_only_has_no_estimate() {
        let mut h = HomogeneousController::new(2, 2.0, 2.0).unwrap();
        let out = h.step(&[1.0, 0.0]).unwrap();
        assert_eq!((out.u, out.u_x, out.f_hat), (-2.0, -4.0, 0.0));
        assert!(HomogeneousController::new(2, 0.0, 2.0).is_err());
    }
}
