//! Real-coefficient polynomials in ascending-degree storage.
//!
//! `coeffs[i]` multiplies `s^i`. The representation is kept canonical: trailing
//! (highest-degree) zeros are trimmed on construction, so the zero polynomial
//! has no coefficients at all and every other polynomial has a nonzero
//! leading coefficient.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{FromPrimitive, Num};
use thiserror::Error;

use crate::scalar::Real;

/// Largest order accepted by [`binomial_poly`]. Binomial coefficients up to
/// this order are computed exactly in integer arithmetic.
pub const MAX_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("bandwidth must be positive, got {0}")]
    NonPositiveBandwidth(String),
    #[error("order must be at least 1")]
    ZeroOrder,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Num + Clone> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monic first-order factor `s + root_neg`, i.e. a pole at `-root_neg`.
    pub fn linear(root_neg: T) -> Self {
        Self::new(vec![root_neg, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `s^i`; zero above the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation at a point of the coefficient ring.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }
}

impl<T: Real> Polynomial<T> {
    /// Complex Horner evaluation.
    pub fn eval_complex(&self, s: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| {
                acc * s + Complex::new(c, T::zero())
            })
    }
}

/// Convolution product of two polynomials.
pub fn poly_mul<T: Num + Clone>(a: &Polynomial<T>, b: &Polynomial<T>) -> Polynomial<T> {
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero();
    }
    let mut out = vec![T::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        for (j, bj) in b.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    Polynomial::new(out)
}

/// Expansion of `(s + omega)^n`; the coefficient of `s^(n-i)` is `C(n,i) omega^i`.
pub fn binomial_poly<T>(omega: T, n: usize) -> Result<Polynomial<T>, PolyError>
where
    T: Num + Clone + PartialOrd + FromPrimitive + std::fmt::Debug,
{
    if omega <= T::zero() {
        return Err(PolyError::NonPositiveBandwidth(format!("{omega:?}")));
    }
    if n == 0 {
        return Err(PolyError::ZeroOrder);
    }
    if n > MAX_ORDER {
        return Err(PolyError::OrderTooLarge(n));
    }
    let binom = binomial_row(n);
    // coeffs[j] = C(n, j) * omega^(n-j)
    let mut powers = Vec::with_capacity(n + 1);
    let mut p = T::one();
    for _ in 0..=n {
        powers.push(p.clone());
        p = p * omega.clone();
    }
    let coeffs = (0..=n)
        .map(|j| {
            let c = T::from_u64(binom[j]).expect("binomial coefficient representable");
            c * powers[n - j].clone()
        })
        .collect();
    Ok(Polynomial::new(coeffs))
}

/// Row `n` of Pascal's triangle via the multiplicative recurrence
/// `C(n,k+1) = C(n,k) (n-k) / (k+1)`, exact in integers.
pub fn binomial_row(n: usize) -> Vec<u64> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c: u128 = 1;
    row.push(1);
    for k in 0..n {
        c = c * (n - k) as u128 / (k + 1) as u128;
        row.push(u64::try_from(c).expect("binomial coefficient fits in u64"));
    }
    row
}

impl<T: Num + Clone> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Num + Clone> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Num + Clone + Neg<Output = T>> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().cloned().map(Neg::neg).collect())
    }
}

impl<T: Num + Clone> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        poly_mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_row() {
        let p = binomial_poly(1.0, 3).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 3.0, 3.0, 1.0]);
        assert_eq!(binomial_row(20)[10], 184_756);
    }

    #[test]
    fn square_of_s_plus_three() {
        let p = binomial_poly(3.0, 2).unwrap();
        assert_eq!(p.coeffs(), &[9.0, 6.0, 1.0]);
    }

    #[test]
    fn rejects_bad_requests() {
        assert_eq!(binomial_poly(1.0, 0), Err(PolyError::ZeroOrder));
        assert!(matches!(binomial_poly(0.0, 2), Err(PolyError::NonPositiveBandwidth(_))));
        assert!(matches!(binomial_poly(-1.0, 2), Err(PolyError::NonPositiveBandwidth(_))));
        assert_eq!(binomial_poly(1.0, 21), Err(PolyError::OrderTooLarge(21)));
    }

    #[test]
    fn trims_leading_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::new(vec![0.0_f64]).is_zero());
        assert_eq!(Polynomial::<f64>::zero().degree(), None);
    }

    #[test]
    fn identity_and_square() {
        let one = Polynomial::one();
        let q = Polynomial::new(vec![9.0, 6.0, 1.0]);
        assert_eq!(poly_mul(&one, &q), q);
        let l = Polynomial::linear(3.0);
        assert_eq!(poly_mul(&l, &l).coeffs(), &[9.0, 6.0, 1.0]);
        assert!(poly_mul(&Polynomial::zero(), &q).is_zero());
    }

    #[test]
    fn add_sub() {
        let a = Polynomial::new(vec![1.0, 2.0, 3.0]);
        let b = Polynomial::new(vec![1.0, 2.0, 3.0]);
        assert!((&a - &b).is_zero());
        assert_eq!((&a + &b).coeffs(), &[2.0, 4.0, 6.0]);
    }

    #[test]
    fn horner_real_and_complex_agree() {
        let p = Polynomial::new(vec![2.0, -1.0, 0.5]);
        let x: f64 = 1.7;
        let c = p.eval_complex(Complex::new(x, 0.0));
        assert!((c.re - p.eval(&x)).abs() < 1e-15);
        assert_eq!(c.im, 0.0);
    }
}
