use crate::scalar::Real;
use crate::sim::{DisturbanceSignal, PlantModel};

/// `x^(n) = f + b u` with state `(x, x', ..., x^(n-1))` and lumped
/// disturbance `f = f0(t) + sum c_i x^(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorChain<T = f64> {
    pub order: usize,
    pub b: T,
    pub disturbance: DisturbanceSignal<T>,
    /// State-dependent part of the disturbance; shorter than `order` means
    /// the remaining coefficients are zero.
    pub coupling: Vec<T>,
}

impl<T: Real> IntegratorChain<T> {
    pub fn new(order: usize, b: T, disturbance: DisturbanceSignal<T>) -> Self {
        assert!(order >= 1, "integrator chain needs order >= 1");
        Self {
            order,
            b,
            disturbance,
            coupling: Vec::new(),
        }
    }

    pub fn with_coupling(mut self, coupling: Vec<T>) -> Self {
        self.coupling = coupling;
        self
    }

    /// True lumped disturbance at `(t, x)`.
    pub fn lumped(&self, t: T, state: &[T]) -> T {
        self.coupling
            .iter()
            .zip(state)
            .fold(self.disturbance.eval(t), |acc, (&c, &x)| acc + c * x)
    }
}

impl<T: Real> PlantModel<T> for IntegratorChain<T> {
    fn state_dim(&self) -> usize {
        self.order
    }

    fn derivative(&self, t: T, state: &[T], input: &[T], out: &mut [T]) {
        let n = self.order;
        out[..n - 1].copy_from_slice(&state[1..n]);
        out[n - 1] = self.lumped(t, state) + self.b * input[0];
    }
}
