//! Rational transfer functions and pointwise frequency response.

use num_complex::Complex;
use num_traits::Num;
use thiserror::Error;

use crate::poly::{poly_mul, Polynomial};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TfError {
    #[error("denominator polynomial is identically zero")]
    ZeroDenominator,
    #[error("evaluation point {0} is (numerically) a pole")]
    PoleHit(String),
}

/// `num(s) / den(s)` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTransferFunction<T = f64> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

/// Result of evaluating a transfer function at zero frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DcGain<T> {
    Finite(T),
    /// Pole at the origin with a nonzero numerator there.
    Infinite,
    /// Both numerator and denominator vanish at the origin.
    Indeterminate,
}

impl<T> DcGain<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            DcGain::Finite(v) => Some(v),
            _ => None,
        }
    }
}

/// One point of a frequency response table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexResponse<T = f64> {
    pub frequency: T,
    pub magnitude: T,
    /// Radians in `(-pi, pi]`.
    pub phase: T,
}

impl<T: Real> ComplexResponse<T> {
    pub fn from_value(frequency: T, value: Complex<T>) -> Self {
        let mut phase = value.im.atan2(value.re);
        if phase <= -T::lit(std::f64::consts::PI) {
            phase = T::lit(std::f64::consts::PI);
        }
        Self {
            frequency,
            magnitude: value.norm(),
            phase,
        }
    }

    pub fn magnitude_db(&self) -> T {
        T::lit(20.0) * self.magnitude.log10()
    }
}

impl<T: Num + Clone> RationalTransferFunction<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self, TfError> {
        if den.is_zero() {
            return Err(TfError::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.den
    }

    /// `deg(num) <= deg(den)`.
    pub fn is_proper(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(n), Some(d)) => n <= d,
            (Some(_), None) => false,
        }
    }

    /// Sum over the common denominator `den_a * den_b` (no cancellation).
    pub fn add_over_common_denominator(&self, other: &Self) -> Self {
        let num = &poly_mul(&self.num, &other.den) + &poly_mul(&other.num, &self.den);
        let den = poly_mul(&self.den, &other.den);
        Self { num, den }
    }

    pub fn dc_gain(&self) -> DcGain<T> {
        dc_gain(self)
    }
}

impl<T: Real> RationalTransferFunction<T> {
    pub fn evaluate_at(&self, s: Complex<T>) -> Result<Complex<T>, TfError> {
        evaluate_at(self, s)
    }

    /// Response at `s = j*freq`.
    pub fn response(&self, freq: T) -> Result<ComplexResponse<T>, TfError> {
        let value = evaluate_at(self, Complex::new(T::zero(), freq))?;
        Ok(ComplexResponse::from_value(freq, value))
    }
}

/// Magnitude of `den(s)` below which [`evaluate_at`] reports a pole hit.
pub fn pole_hit_epsilon<T: Real>() -> T {
    T::lit(1e-300).max(T::min_positive_value())
}

/// `num(s) / den(s)` via complex Horner evaluation of both polynomials.
pub fn evaluate_at<T: Real>(
    tf: &RationalTransferFunction<T>,
    s: Complex<T>,
) -> Result<Complex<T>, TfError> {
    let den = tf.den.eval_complex(s);
    if den.norm() < pole_hit_epsilon::<T>() {
        return Err(TfError::PoleHit(format!("{s}")));
    }
    Ok(tf.num.eval_complex(s) / den)
}

pub fn dc_gain<T: Num + Clone>(tf: &RationalTransferFunction<T>) -> DcGain<T> {
    let n0 = tf.num.coeff(0);
    let d0 = tf.den.coeff(0);
    match (n0.is_zero(), d0.is_zero()) {
        (_, false) => DcGain::Finite(n0 / d0),
        (false, true) => DcGain::Infinite,
        (true, true) => DcGain::Indeterminate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::binomial_poly;

    fn lag(wf: f64) -> RationalTransferFunction {
        RationalTransferFunction::new(Polynomial::constant(wf), Polynomial::linear(wf)).unwrap()
    }

    #[test]
    fn first_order_lag_dc() {
        let g = lag(10.0);
        let v = g.evaluate_at(Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex::new(1.0, 0.0));
        assert_eq!(g.dc_gain(), DcGain::Finite(1.0));
    }

    #[test]
    fn error_tf_zero_at_origin() {
        let ge = RationalTransferFunction::new(Polynomial::new(vec![0.0, 1.0]), Polynomial::linear(10.0))
            .unwrap();
        assert_eq!(ge.evaluate_at(Complex::new(0.0, 0.0)).unwrap(), Complex::new(0.0, 0.0));
        assert_eq!(ge.dc_gain(), DcGain::Finite(0.0));
    }

    #[test]
    fn repeated_pole_dc_gain() {
        let g = RationalTransferFunction::new(Polynomial::one(), binomial_poly(2.0, 3).unwrap()).unwrap();
        assert_eq!(g.dc_gain(), DcGain::Finite(0.125));
    }

    #[test]
    fn dc_markers() {
        let integ = RationalTransferFunction::new(Polynomial::one(), Polynomial::new(vec![0.0, 1.0])).unwrap();
        assert_eq!(integ.dc_gain(), DcGain::Infinite);
        let s_over_s =
            RationalTransferFunction::new(Polynomial::new(vec![0.0, 1.0]), Polynomial::new(vec![0.0, 1.0]))
                .unwrap();
        assert_eq!(s_over_s.dc_gain(), DcGain::Indeterminate);
    }

    #[test]
    fn pole_hit() {
        let integ = RationalTransferFunction::new(Polynomial::one(), Polynomial::new(vec![0.0, 1.0])).unwrap();
        assert!(matches!(integ.evaluate_at(Complex::new(0.0, 0.0)), Err(TfError::PoleHit(_))));
        assert!(integ.evaluate_at(Complex::new(0.0, 1e-3)).is_ok());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalTransferFunction::new(Polynomial::one(), Polynomial::<f64>::zero()),
            Err(TfError::ZeroDenominator)
        );
    }

    #[test]
    fn phase_range_is_half_open() {
        let r = ComplexResponse::from_value(1.0, Complex::new(-1.0, -0.0));
        assert_eq!(r.phase, std::f64::consts::PI);
        assert_eq!(r.magnitude, 1.0);
    }

    #[test]
    fn bandwidth_is_minus_three_db() {
        let r = lag(10.0).response(10.0).unwrap();
        assert!((r.magnitude - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.phase + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let g = RationalTransferFunction::new(Polynomial::constant(4.0_f32), Polynomial::linear(4.0_f32)).unwrap();
        let r = g.response(4.0).unwrap();
        assert!((r.magnitude - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }
}
