use crate::scalar::Real;

/// Time-varying lumped disturbance `f(t)`. Every variant is bounded on `[0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DisturbanceSignal<T = f64> {
    Constant(T),
    /// Zero before `t_start`, `value` from `t_start` on.
    Step { value: T, t_start: T },
    /// `amplitude * sin(freq * t + phase)`, `freq` in rad/s.
    Sinusoid { amplitude: T, freq: T, phase: T },
    Sum(Vec<DisturbanceSignal<T>>),
}

impl<T: Real> Default for DisturbanceSignal<T> {
    fn default() -> Self {
        DisturbanceSignal::Constant(T::zero())
    }
}

impl<T: Real> DisturbanceSignal<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            DisturbanceSignal::Constant(v) => *v,
            DisturbanceSignal::Step { value, t_start } => {
                if t >= *t_start {
                    *value
                } else {
                    T::zero()
                }
            }
            DisturbanceSignal::Sinusoid { amplitude, freq, phase } => *amplitude * (*freq * t + *phase).sin(),
            DisturbanceSignal::Sum(terms) => terms.iter().fold(T::zero(), |acc, s| acc + s.eval(t)),
        }
    }

    /// Upper bound on `sup |f(t)|`.
    pub fn bound(&self) -> T {
        match self {
            DisturbanceSignal::Constant(v) => v.abs(),
            DisturbanceSignal::Step { value, .. } => value.abs(),
            DisturbanceSignal::Sinusoid { amplitude, .. } => amplitude.abs(),
            DisturbanceSignal::Sum(terms) => terms.iter().fold(T::zero(), |acc, s| acc + s.bound()),
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        self.bound() == T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants() {
        let c = DisturbanceSignal::Constant(2.0);
        assert_eq!(c.eval(10.0), 2.0);
        let s = DisturbanceSignal::Step { value: 1.5, t_start: 1.0 };
        assert_eq!((s.eval(0.999), s.eval(1.0)), (0.0, 1.5));
        let w = DisturbanceSignal::Sinusoid { amplitude: 2.0, freq: 1.0, phase: 0.0 };
        assert!((w.eval(std::f64::consts::FRAC_PI_2) - 2.0).abs() < 1e-15);
        let sum = DisturbanceSignal::Sum(vec![c, s, w]);
        assert_eq!(sum.bound(), 5.5);
        assert!((sum.eval(0.0) - 2.0).abs() < 1e-15);
        assert!(DisturbanceSignal::<f64>::zero().is_identically_zero());
    }
}
