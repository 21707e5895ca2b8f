use thiserror::Error;

use crate::scalar::Real;

/// Continuous-time plant integrated by [`rk4_step`].
///
/// The plant owns its disturbance model and evaluates it at whatever time
/// the integrator asks for, so stage times see the disturbance at
/// `t`, `t + dt/2` and `t + dt`.
pub trait PlantModel<T: Real> {
    fn state_dim(&self) -> usize;

    /// Writes `dx/dt` into `out` for the given held input.
    fn derivative(&self, t: T, state: &[T], input: &[T], out: &mut [T]);

    /// Noise-free measured quantities at `state`.
    fn measurements(&self, _t: T, state: &[T]) -> Vec<T> {
        state.to_vec()
    }

    /// Map a post-step state back onto the plant's manifold, if it has one.
    fn project(&self, _state: &mut [T]) {}
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("non-finite state component {index} at t = {t}")]
    NonFinite { index: usize, t: f64 },
}

/// Plant given by a closure `f(t, x, u, dxdt)`.
pub struct FnPlant<F> {
    dim: usize,
    f: F,
}

impl<F> FnPlant<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T: Real, F: Fn(T, &[T], &[T], &mut [T])> PlantModel<T> for FnPlant<F> {
    fn state_dim(&self) -> usize {
        self.dim
    }

    fn derivative(&self, t: T, state: &[T], input: &[T], out: &mut [T]) {
        (self.f)(t, state, input, out)
    }
}

/// Classical fourth-order Runge-Kutta step with the input held constant
/// across the step.
pub fn rk4_step<T: Real, P: PlantModel<T> + ?Sized>(
    plant: &P,
    t: T,
    state: &[T],
    input: &[T],
    dt: T,
) -> Result<Vec<T>, IntegrationError> {
    let n = state.len();
    let half = dt * T::lit(0.5);
    let mut k1 = vec![T::zero(); n];
    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];

    plant.derivative(t, state, input, &mut k1);
    for i in 0..n {
        tmp[i] = state[i] + half * k1[i];
    }
    plant.derivative(t + half, &tmp, input, &mut k2);
    for i in 0..n {
        tmp[i] = state[i] + half * k2[i];
    }
    plant.derivative(t + half, &tmp, input, &mut k3);
    for i in 0..n {
        tmp[i] = state[i] + dt * k3[i];
    }
    plant.derivative(t + dt, &tmp, input, &mut k4);

    let sixth = dt / T::lit(6.0);
    let two = T::lit(2.0);
    let mut next: Vec<T> = (0..n)
        .map(|i| state[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
        .collect();
    plant.project(&mut next);
    if let Some(index) = next.iter().position(|v| !v.is_finite()) {
        return Err(IntegrationError::NonFinite {
            index,
            t: (t + dt).to_f64_lossy(),
        });
    }
    Ok(next)
}
