//! Small fixed-size linear algebra for rigid-body work: 3-vectors, 3x3
//! matrices, the `hat`/`vee` pair and SO(3) exponential/log maps.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T = f64>(pub [T; 3]);

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3<T = f64>(pub [[T; 3]; 3]);

/// Rotation matrix; kept on SO(3) by the integrator's projection step.
pub type RotationMatrix<T = f64> = Mat3<T>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkewError {
    #[error("matrix is not skew-symmetric: |M + M^T| = {0:e}")]
    NotSkew(f64),
}

/// Tolerance on `|M + M^T|_F` accepted by [`vee`].
pub const SKEW_TOL: f64 = 1e-9;

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3([T::zero(); 3])
    }

    pub fn e3() -> Self {
        Vec3([T::zero(), T::zero(), T::one()])
    }

    pub fn from_slice(s: &[T]) -> Self {
        Vec3([s[0], s[1], s[2]])
    }

    pub fn dot(&self, o: &Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vec3([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, k: T) -> Self {
        Vec3(self.0.map(|v| v * k))
    }

    pub fn normalized(&self) -> Self {
        self.scale(T::one() / self.norm())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Vec3(self.0.map(f))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec3(self.0.map(|v| -v))
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Real> Mat3<T> {
    pub fn zero() -> Self {
        Mat3([[T::zero(); 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag(Vec3([T::one(); 3]))
    }

    pub fn diag(d: Vec3<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = d.0[i];
        }
        m
    }

    pub fn from_cols(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i] = [c0.0[i], c1.0[i], c2.0[i]];
        }
        m
    }

    /// Row-major from a 9-element slice.
    pub fn from_slice(s: &[T]) -> Self {
        Mat3([[s[0], s[1], s[2]], [s[3], s[4], s[5]], [s[6], s[7], s[8]]])
    }

    pub fn to_array(&self) -> [T; 9] {
        let m = &self.0;
        [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]]
    }

    pub fn outer(a: &Vec3<T>, b: &Vec3<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = a.0[i] * b.0[j];
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> T {
        self.col(0).dot(&self.col(1).cross(&self.col(2)))
    }

    pub fn scale(&self, k: T) -> Self {
        Mat3(self.0.map(|r| r.map(|v| v * k)))
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3(self.0.map(|r| r[0] * v.0[0] + r[1] * v.0[1] + r[2] * v.0[2]))
    }

    pub fn frobenius_norm(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    /// Adjugate-based inverse; `None` when `|det| <= eps`.
    pub fn try_inverse(&self, eps: T) -> Option<Self> {
        let det = self.det();
        if det.abs() <= eps {
            return None;
        }
        let (c0, c1, c2) = (self.col(0), self.col(1), self.col(2));
        // rows of the inverse are the cross products of column pairs
        let r0 = c1.cross(&c2);
        let r1 = c2.cross(&c0);
        let r2 = c0.cross(&c1);
        Some(Mat3([r0.0, r1.0, r2.0]).scale(T::one() / det))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        (*self - self.transpose()).frobenius_norm() <= tol
    }
}

impl<T: Real> Add for Mat3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = m.0[i][j] + o.0[i][j];
            }
        }
        m
    }
}

impl<T: Real> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-T::one())
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = (0..3).fold(T::zero(), |acc, k| acc + self.0[i][k] * o.0[k][j]);
            }
        }
        m
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        self.mul_vec(&v)
    }
}

/// `hat(v) w == v x w`.
pub fn hat<T: Real>(v: &Vec3<T>) -> Mat3<T> {
    let [x, y, z] = v.0;
    let o = T::zero();
    Mat3([[o, -z, y], [z, o, -x], [-y, x, o]])
}

/// Inverse of [`hat`]; rejects matrices that are not skew-symmetric.
pub fn vee<T: Real>(m: &Mat3<T>) -> Result<Vec3<T>, SkewError> {
    let asym = (*m + m.transpose()).frobenius_norm();
    if asym > T::lit(SKEW_TOL) {
        return Err(SkewError::NotSkew(asym.to_f64_lossy()));
    }
    Ok(vee_unchecked(m))
}

/// Reads the three off-diagonal entries without checking skewness.
pub fn vee_unchecked<T: Real>(m: &Mat3<T>) -> Vec3<T> {
    Vec3([m.0[2][1], m.0[0][2], m.0[1][0]])
}

/// Rodrigues formula for `exp(hat(w))`.
pub fn so3_exp<T: Real>(w: &Vec3<T>) -> Mat3<T> {
    let theta = w.norm();
    let k = hat(w);
    let k2 = k * k;
    let (a, b) = if theta < T::lit(1e-6) {
        let t2 = theta * theta;
        (T::one() - t2 / T::lit(6.0), T::lit(0.5) - t2 / T::lit(24.0))
    } else {
        (theta.sin() / theta, (T::one() - theta.cos()) / (theta * theta))
    };
    Mat3::identity() + k.scale(a) + k2.scale(b)
}

/// Rotation vector `w` with `so3_exp(w) == r`, angle in `[0, pi]`.
pub fn so3_log<T: Real>(r: &Mat3<T>) -> Vec3<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let cos = ((r.trace() - one) / two).max(-one).min(one);
    let theta = cos.acos();
    let skew = vee_unchecked(&(*r - r.transpose())).scale(T::lit(0.5));
    if theta < T::lit(1e-6) {
        return skew;
    }
    let sin = theta.sin();
    if sin > T::lit(1e-6) {
        return skew.scale(theta / sin);
    }
    // near pi: axis from the symmetric part, sign from the skew part
    let b = (*r + Mat3::identity()).scale(T::lit(0.5));
    let mut axis = Vec3([b.0[0][0], b.0[1][1], b.0[2][2]].map(|v: T| v.max(T::zero()).sqrt()));
    let i = (0..3).fold(0, |best, i| if axis.0[i] > axis.0[best] { i } else { best });
    for j in 0..3 {
        if j != i && b.0[i][j] < T::zero() {
            axis.0[j] = -axis.0[j];
        }
    }
    let axis = axis.normalized();
    let sign = if axis.dot(&skew) < T::zero() { -one } else { one };
    axis.scale(theta * sign)
}

/// Gram-Schmidt on the first two columns; the third is their cross product,
/// so the result always has determinant `+1`.
pub fn orthonormalize<T: Real>(r: &Mat3<T>) -> Mat3<T> {
    let c0 = r.col(0).normalized();
    let c1 = r.col(1);
    let c1 = (c1 - c0.scale(c0.dot(&c1))).normalized();
    let c2 = c0.cross(&c1);
    Mat3::from_cols(c0, c1, c2)
}

/// `|R^T R - I|_F`.
pub fn orthogonality_error<T: Real>(r: &Mat3<T>) -> T {
    (r.transpose() * *r - Mat3::identity()).frobenius_norm()
}

/// Rotation by `angle` about a unit axis.
pub fn axis_angle<T: Real>(axis: &Vec3<T>, angle: T) -> Mat3<T> {
    so3_exp(&axis.normalized().scale(angle))
}
