use crate::poly::{binomial_poly, poly_mul, Polynomial};
use crate::scalar::Real;
use crate::tf::RationalTransferFunction;

use super::{ControllerConfig, ControllerError};

/// State-feedback coefficients; `a[i]` multiplies `x^(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousGains<T = f64> {
    a: Vec<T>,
}

impl<T: Real> HomogeneousGains<T> {
    /// Arbitrary (not necessarily equal-pole) coefficients.
    pub fn from_coeffs(a: Vec<T>) -> Result<Self, ControllerError> {
        if a.is_empty() {
            return Err(ControllerError::InvalidConfig {
                field: "order",
                reason: "must be at least 1".into(),
            });
        }
        Ok(Self { a })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.a
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// `s^n + sum a_i s^i`.
    pub fn characteristic_polynomial(&self) -> Polynomial<T> {
        let mut c = self.a.clone();
        c.push(T::one());
        Polynomial::new(c)
    }
}

/// Classic gains in the form applied before the `1/b` division.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicPidGains<T = f64> {
    pub kp: T,
    pub ki: T,
    /// Absent for a PI controller.
    pub kd: Option<T>,
}

impl<T: Real> ClassicPidGains<T> {
    pub fn divided_by(&self, b: T) -> Self {
        Self {
            kp: self.kp / b,
            ki: self.ki / b,
            kd: self.kd.map(|kd| kd / b),
        }
    }
}

/// Equal-pole synthesis: the non-leading coefficients of `(s + omega)^n`.
pub fn synthesize_gains<T: Real>(n: usize, omega: T) -> Result<HomogeneousGains<T>, ControllerError> {
    let mut c = binomial_poly(omega, n)?.coeffs().to_vec();
    c.pop();
    Ok(HomogeneousGains { a: c })
}

/// `u_x = -sum a_i x^(i)`.
pub fn homogeneous_control<T: Real>(gains: &HomogeneousGains<T>, x_derivs: &[T]) -> Result<T, ControllerError> {
    if x_derivs.len() != gains.a.len() {
        return Err(ControllerError::DimensionMismatch {
            expected: gains.a.len(),
            got: x_derivs.len(),
        });
    }
    Ok(-gains
        .a
        .iter()
        .zip(x_derivs)
        .fold(T::zero(), |acc, (&a, &x)| acc + a * x))
}

/// `u = (u_x - f_hat) / b`.
pub fn control_output<T: Real>(u_x: T, f_hat: T, b: T) -> Result<T, ControllerError> {
    if b == T::zero() {
        return Err(ControllerError::InvalidConfig {
            field: "b",
            reason: "input coefficient must be nonzero".into(),
        });
    }
    Ok((u_x - f_hat) / b)
}

fn expect_order<T>(config: &ControllerConfig<T>, n: usize) -> Result<(), ControllerError> {
    if config.order != n {
        return Err(ControllerError::OrderMismatch {
            expected: n,
            got: config.order,
        });
    }
    Ok(())
}

/// First-order reduction: `kp = a0 + omega_f`, `ki = omega_f a0` with `a0 = omega`.
///
/// These are the non-leading coefficients of `(s + a0)(s + omega_f)`, which is
/// what composing `u_x = -a0 x` with `f_hat = omega_f (x - integral(u_x))`
/// yields when expanded.
pub fn reduce_to_pi<T: Real>(config: &ControllerConfig<T>) -> Result<ClassicPidGains<T>, ControllerError> {
    config.validate()?;
    expect_order(config, 1)?;
    let a0 = config.omega;
    Ok(ClassicPidGains {
        kp: a0 + config.omega_f,
        ki: config.omega_f * a0,
        kd: None,
    })
}

/// Second-order reduction: `kd = a1 + omega_f`, `kp = a0 + omega_f a1`, `ki = omega_f a0`
/// with `a1 = 2 omega`, `a0 = omega^2`.
pub fn reduce_to_pid<T: Real>(config: &ControllerConfig<T>) -> Result<ClassicPidGains<T>, ControllerError> {
    config.validate()?;
    expect_order(config, 2)?;
    let g = synthesize_gains(2, config.omega)?;
    let (a0, a1) = (g.a[0], g.a[1]);
    let wf = config.omega_f;
    Ok(ClassicPidGains {
        kp: a0 + wf * a1,
        ki: wf * a0,
        kd: Some(a1 + wf),
    })
}

/// Disturbance-to-state transfer function of the full loop,
/// `s / ((s + omega)^n (s + omega_f))`.
pub fn closed_loop_tf<T: Real>(
    config: &ControllerConfig<T>,
) -> Result<RationalTransferFunction<T>, ControllerError> {
    config.validate()?;
    let char_poly = binomial_poly(config.omega, config.order)?;
    let den = poly_mul(&char_poly, &Polynomial::linear(config.omega_f));
    let num = Polynomial::new(vec![T::zero(), T::one()]);
    Ok(RationalTransferFunction::new(num, den).expect("denominator is monic"))
}

/// Observer transfer function `G_o = omega_f / (s + omega_f)` and estimation
/// error transfer function `G_e = s / (s + omega_f)`.
pub fn observer_tfs<T: Real>(
    omega_f: T,
) -> Result<(RationalTransferFunction<T>, RationalTransferFunction<T>), ControllerError> {
    if !(omega_f.is_finite() && omega_f > T::zero()) {
        return Err(ControllerError::InvalidConfig {
            field: "omega_f",
            reason: format!("must be finite and positive, got {omega_f}"),
        });
    }
    let den = Polynomial::linear(omega_f);
    let go = RationalTransferFunction::new(Polynomial::constant(omega_f), den.clone()).expect("monic");
    let ge = RationalTransferFunction::new(Polynomial::new(vec![T::zero(), T::one()]), den).expect("monic");
    Ok((go, ge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tf::DcGain;
    use num_complex::Complex;

    fn cfg(n: usize, w: f64, wf: f64) -> ControllerConfig {
        ControllerConfig::new(n, 1.0, w, wf, 1e-3).unwrap()
    }

    #[test]
    fn synthesized_gains() {
        assert_eq!(synthesize_gains(1, 5.0).unwrap().as_slice(), &[5.0]);
        assert_eq!(synthesize_gains(2, 2.0).unwrap().as_slice(), &[4.0, 4.0]);
        assert_eq!(synthesize_gains(3, 2.0).unwrap().as_slice(), &[8.0, 12.0, 6.0]);
        assert!(synthesize_gains(0, 2.0).is_err());
        assert!(synthesize_gains(2, -1.0).is_err());
    }

    #[test]
    fn homogeneous_control_examples() {
        let g = synthesize_gains(2, 2.0).unwrap();
        assert_eq!(homogeneous_control(&g, &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(homogeneous_control(&g, &[1.0, 0.0]).unwrap(), -4.0);
        let g3 = synthesize_gains(3, 2.0).unwrap();
        let x = [0.5, -1.0, 2.0];
        let u = homogeneous_control(&g3, &x).unwrap();
        // reverse summation order as an independent check
        let rev: f64 = -(6.0 * 2.0 + 12.0 * -1.0 + 8.0 * 0.5);
        assert_eq!(u, -4.0);
        assert_eq!(u, rev);
        assert_eq!(
            homogeneous_control(&g3, &[1.0]),
            Err(ControllerError::DimensionMismatch { expected: 3, got: 1 })
        );
    }

    #[test]
    fn control_output_examples() {
        assert_eq!(control_output(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(control_output(-4.0, 1.0, 2.0).unwrap(), -2.5);
        assert_eq!(control_output(-4.0, 1.0, -2.0).unwrap(), 2.5);
        assert!(control_output(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn pi_reduction() {
        let g = reduce_to_pi(&cfg(1, 5.0, 20.0)).unwrap();
        assert_eq!((g.kp, g.ki, g.kd), (25.0, 100.0, None));
        let g = reduce_to_pi(&cfg(1, 1.0, 1.0)).unwrap();
        assert_eq!((g.kp, g.ki), (2.0, 1.0));
        let g = reduce_to_pi(&cfg(1, 0.5, 4.0)).unwrap();
        assert_eq!((g.kp, g.ki), (4.5, 2.0));
        assert_eq!(
            reduce_to_pi(&cfg(2, 1.0, 1.0)),
            Err(ControllerError::OrderMismatch { expected: 1, got: 2 })
        );
    }

    #[test]
    fn pid_reduction() {
        let g = reduce_to_pid(&cfg(2, 2.0, 10.0)).unwrap();
        assert_eq!((g.kd, g.kp, g.ki), (Some(14.0), 44.0, 40.0));
        let g = reduce_to_pid(&cfg(2, 3.0, 6.0)).unwrap();
        assert_eq!((g.kd, g.kp, g.ki), (Some(12.0), 45.0, 54.0));
        // small-omega_f limit approaches pure pole placement (PD)
        let g = reduce_to_pid(&cfg(2, 1.0, 1e-12)).unwrap();
        assert!((g.kd.unwrap() - 2.0).abs() < 1e-9 && (g.kp - 1.0).abs() < 1e-9 && g.ki < 1e-9);
        assert!(reduce_to_pid(&cfg(1, 1.0, 1.0)).is_err());
    }

    #[test]
    fn post_division_gains() {
        let c = ControllerConfig::new(1, 2.0, 5.0, 20.0, 1e-3).unwrap();
        let g = reduce_to_pi(&c).unwrap().divided_by(c.b);
        assert_eq!((g.kp, g.ki), (12.5, 50.0));
    }

    #[test]
    fn closed_loop_denominators() {
        let g = closed_loop_tf(&cfg(1, 2.0, 10.0)).unwrap();
        assert_eq!(g.numerator().coeffs(), &[0.0, 1.0]);
        assert_eq!(g.denominator().coeffs(), &[20.0, 12.0, 1.0]);
        let g = closed_loop_tf(&cfg(2, 2.0, 10.0)).unwrap();
        assert_eq!(g.denominator().coeffs(), &[40.0, 44.0, 14.0, 1.0]);
        assert_eq!(g.dc_gain(), DcGain::Finite(0.0));
    }

    #[test]
    fn classic_gains_are_closed_loop_coefficients() {
        for &(w, wf) in &[(2.0, 10.0), (3.0, 6.0), (0.5, 4.0)] {
            let den = closed_loop_tf(&cfg(2, w, wf)).unwrap();
            let pid = reduce_to_pid(&cfg(2, w, wf)).unwrap();
            let d = den.denominator().coeffs();
            assert_eq!([d[0], d[1], d[2]], [pid.ki, pid.kp, pid.kd.unwrap()]);
            let den1 = closed_loop_tf(&cfg(1, w, wf)).unwrap();
            let pi = reduce_to_pi(&cfg(1, w, wf)).unwrap();
            assert_eq!(&den1.denominator().coeffs()[..2], &[pi.ki, pi.kp]);
        }
    }

    #[test]
    fn observer_pair() {
        let (go, ge) = observer_tfs(10.0).unwrap();
        let hi = go.evaluate_at(Complex::new(0.0, 1e7)).unwrap();
        assert!(hi.norm() < 2e-6);
        let at_bw = go.response(10.0).unwrap().magnitude;
        assert!((at_bw - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        for k in 0..200 {
            let w = 10f64.powf(-2.0 + 5.0 * k as f64 / 199.0);
            let mo = go.response(w).unwrap().magnitude;
            let me = ge.response(w).unwrap().magnitude;
            assert!((mo * mo + me * me - 1.0).abs() < 1e-12);
        }
        let sum = go.add_over_common_denominator(&ge);
        // common denominator (s+wf)^2; numerator must equal it
        assert_eq!(sum.numerator(), sum.denominator());
        assert!(observer_tfs(0.0).is_err());
    }
}
