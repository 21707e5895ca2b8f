//! Arc-length parameterized reference paths and matching-point search.

use std::io::Read;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("path needs at least two samples, got {0}")]
    TooShort(usize),
    #[error("path columns have different lengths")]
    RaggedColumns,
    #[error("arc length must be strictly increasing (row {0})")]
    NonMonotone(usize),
    #[error("heading is not unwrapped between rows {0} and {1}")]
    HeadingJump(usize, usize),
    #[error("segment {index}: {what} inconsistent with samples (deviation {deviation:e})")]
    Inconsistent { index: usize, what: &'static str, deviation: f64 },
    #[error("non-finite value in row {0}")]
    NonFinite(usize),
    #[error("path csv: {0}")]
    Csv(String),
    #[error("pose is {distance} m from the path, capture bound is {bound} m")]
    OffPath { distance: f64, bound: f64 },
    #[error("pose projects beyond the end of the path")]
    BeyondEnd,
    #[error("ambiguous matching point: candidates at s = {0} and s = {1}")]
    Ambiguous(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathInterpolation {
    /// Constant-curvature arc between samples.
    #[default]
    Arc,
    /// Straight chord, linearly interpolated heading and curvature.
    Linear,
}

/// Point on the reference path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint<T = f64> {
    pub s: T,
    pub x: T,
    pub y: T,
    pub theta: T,
    pub kappa: T,
}

/// Lateral error `l` and heading error `e_theta = theta_d - theta` at the
/// matched arc length `s_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LateralErrorState<T = f64> {
    pub l: T,
    pub e_theta: T,
    pub s_d: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetMatch<T = f64> {
    pub error: LateralErrorState<T>,
    pub point: PathPoint<T>,
}

/// Matching tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchOptions {
    /// Largest accepted pose-to-path distance.
    pub capture: f64,
    /// Two candidates closer than this in distance are ambiguous.
    pub ambiguity_tol: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        Self {
            capture: 10.0,
            ambiguity_tol: 1e-6,
        }
    }
}

pub const DEFAULT_SPACING: f64 = 0.5;
/// Default tolerance for the sample-consistency checks in [`FrenetPath::new`].
pub const CONSISTENCY_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct FrenetPath<T = f64> {
    s: Vec<T>,
    x: Vec<T>,
    y: Vec<T>,
    theta: Vec<T>,
    kappa: Vec<T>,
    interp: PathInterpolation,
}

/// `sin(a) / a`, accurate near zero.
fn sinc<T: Real>(a: T) -> T {
    if a.abs() < T::lit(1e-4) {
        T::one() - a * a / T::lit(6.0)
    } else {
        a.sin() / a
    }
}

/// Wrap into `(-pi, pi]`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let pi = T::lit(std::f64::consts::PI);
    let two_pi = pi + pi;
    let mut w = a - two_pi * ((a + pi) / two_pi).floor();
    if w <= -pi {
        w = w + two_pi;
    }
    w
}

impl<T: Real> FrenetPath<T> {
    pub fn new(s: Vec<T>, x: Vec<T>, y: Vec<T>, theta: Vec<T>, kappa: Vec<T>) -> Result<Self, PathError> {
        Self::with_tolerance(s, x, y, theta, kappa, T::lit(CONSISTENCY_TOL))
    }

    /// Validates monotone `s`, unwrapped heading, chord directions against
    /// `(cos theta, sin theta)` and heading increments against `kappa`.
    pub fn with_tolerance(
        s: Vec<T>,
        x: Vec<T>,
        y: Vec<T>,
        theta: Vec<T>,
        kappa: Vec<T>,
        tol: T,
    ) -> Result<Self, PathError> {
        let n = s.len();
        if [x.len(), y.len(), theta.len(), kappa.len()].iter().any(|&m| m != n) {
            return Err(PathError::RaggedColumns);
        }
        if n < 2 {
            return Err(PathError::TooShort(n));
        }
        for i in 0..n {
            if ![s[i], x[i], y[i], theta[i], kappa[i]].iter().all(|v| v.is_finite()) {
                return Err(PathError::NonFinite(i));
            }
        }
        let half = T::lit(0.5);
        for i in 0..n - 1 {
            let ds = s[i + 1] - s[i];
            if !(ds > T::zero()) {
                return Err(PathError::NonMonotone(i + 1));
            }
            let dth = theta[i + 1] - theta[i];
            if dth.abs() >= T::lit(std::f64::consts::PI) {
                return Err(PathError::HeadingJump(i, i + 1));
            }
            // chord of a constant-curvature arc points along the mid heading
            let mid = theta[i] + half * dth;
            let dx = (x[i + 1] - x[i]) / ds;
            let dy = (y[i + 1] - y[i]) / ds;
            let dev = ((dx - mid.cos()).powi(2) + (dy - mid.sin()).powi(2)).sqrt();
            if dev > tol {
                return Err(PathError::Inconsistent {
                    index: i,
                    what: "position increment",
                    deviation: dev.to_f64_lossy(),
                });
            }
            let dev = (dth / ds - half * (kappa[i] + kappa[i + 1])).abs();
            if dev > tol {
                return Err(PathError::Inconsistent {
                    index: i,
                    what: "heading increment",
                    deviation: dev.to_f64_lossy(),
                });
            }
        }
        Ok(Self {
            s,
            x,
            y,
            theta,
            kappa,
            interp: PathInterpolation::Arc,
        })
    }

    pub fn with_interpolation(mut self, interp: PathInterpolation) -> Self {
        self.interp = interp;
        self
    }

    /// Straight segment along `+x` from the origin.
    pub fn line(length: T) -> Self {
        Self::line_sampled(length, T::lit(DEFAULT_SPACING))
    }

    pub fn line_sampled(length: T, spacing: T) -> Self {
        let s = grid(length, spacing);
        let n = s.len();
        Self {
            x: s.clone(),
            y: vec![T::zero(); n],
            theta: vec![T::zero(); n],
            kappa: vec![T::zero(); n],
            s,
            interp: PathInterpolation::Arc,
        }
    }

    /// Counter-clockwise circle through the origin with heading `+x` there
    /// (centre `(0, radius)`), covering `arc` radians.
    pub fn circle(radius: T, arc: T) -> Self {
        Self::circle_sampled(radius, arc, T::lit(DEFAULT_SPACING))
    }

    pub fn circle_sampled(radius: T, arc: T, spacing: T) -> Self {
        let s = grid(radius * arc, spacing);
        let n = s.len();
        let theta: Vec<T> = s.iter().map(|&v| v / radius).collect();
        Self {
            x: theta.iter().map(|&a| radius * a.sin()).collect(),
            y: theta.iter().map(|&a| radius * (T::one() - a.cos())).collect(),
            kappa: vec![T::one() / radius; n],
            theta,
            s,
            interp: PathInterpolation::Arc,
        }
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn length(&self) -> T {
        self.s[self.len() - 1] - self.s[0]
    }

    pub fn s_start(&self) -> T {
        self.s[0]
    }

    pub fn s_end(&self) -> T {
        self.s[self.len() - 1]
    }

    pub fn interpolation(&self) -> PathInterpolation {
        self.interp
    }

    pub fn sample(&self, i: usize) -> PathPoint<T> {
        PathPoint {
            s: self.s[i],
            x: self.x[i],
            y: self.y[i],
            theta: self.theta[i],
            kappa: self.kappa[i],
        }
    }

    fn segment_for(&self, s: T) -> usize {
        let i = self.s.partition_point(|&v| v <= s);
        i.clamp(1, self.len() - 1) - 1
    }

    /// Point at offset `sigma` from the start of segment `i`.
    fn point_in_segment(&self, i: usize, sigma: T) -> PathPoint<T> {
        let ds = self.s[i + 1] - self.s[i];
        let frac = sigma / ds;
        let dth = self.theta[i + 1] - self.theta[i];
        let kappa = self.kappa[i] + frac * (self.kappa[i + 1] - self.kappa[i]);
        match self.interp {
            PathInterpolation::Arc => {
                let kbar = dth / ds;
                let half = T::lit(0.5) * kbar * sigma;
                let chord = sigma * sinc(half);
                let mid = self.theta[i] + half;
                PathPoint {
                    s: self.s[i] + sigma,
                    x: self.x[i] + chord * mid.cos(),
                    y: self.y[i] + chord * mid.sin(),
                    theta: self.theta[i] + kbar * sigma,
                    kappa,
                }
            }
            PathInterpolation::Linear => PathPoint {
                s: self.s[i] + sigma,
                x: self.x[i] + frac * (self.x[i + 1] - self.x[i]),
                y: self.y[i] + frac * (self.y[i + 1] - self.y[i]),
                theta: self.theta[i] + frac * dth,
                kappa,
            },
        }
    }

    /// Interpolated point at arc length `s` (clamped to the path).
    pub fn point_at(&self, s: T) -> PathPoint<T> {
        let s = s.max(self.s_start()).min(self.s_end());
        let i = self.segment_for(s);
        self.point_in_segment(i, s - self.s[i])
    }

    /// Solve the tangency condition `(p_d(sigma) - p) . t(sigma) = 0` inside
    /// segment `i`. Returns `None` when the root leaves the segment.
    fn refine(&self, i: usize, px: T, py: T) -> Option<PathPoint<T>> {
        let ds = self.s[i + 1] - self.s[i];
        let slack = ds * T::lit(1e-9);
        let g = |pt: &PathPoint<T>| (pt.x - px) * pt.theta.cos() + (pt.y - py) * pt.theta.sin();
        // initial guess: projection on the chord
        let (cx, cy) = (self.x[i + 1] - self.x[i], self.y[i + 1] - self.y[i]);
        let c2 = cx * cx + cy * cy;
        let mut sigma = (((px - self.x[i]) * cx + (py - self.y[i]) * cy) / c2 * ds).max(T::zero()).min(ds);
        let (mut lo, mut hi) = (T::zero(), ds);
        let (g_lo, g_hi) = (g(&self.point_in_segment(i, lo)), g(&self.point_in_segment(i, hi)));
        if g_lo > slack || g_hi < -slack {
            return None;
        }
        for _ in 0..50 {
            let pt = self.point_in_segment(i, sigma);
            let gv = g(&pt);
            if gv > T::zero() {
                hi = sigma;
            } else {
                lo = sigma;
            }
            let l = -(pt.x - px) * pt.theta.sin() + (pt.y - py) * pt.theta.cos();
            let kbar = match self.interp {
                PathInterpolation::Arc => (self.theta[i + 1] - self.theta[i]) / ds,
                PathInterpolation::Linear => T::zero(),
            };
            // g' = 1 + kappa l, clamped to stay a descent direction
            let dg = (T::one() + kbar * l).max(T::lit(1e-3));
            let mut next = sigma - gv / dg;
            if !(next > lo && next < hi) {
                next = T::lit(0.5) * (lo + hi);
            }
            let done = (next - sigma).abs() <= ds * T::epsilon() * T::lit(4.0);
            sigma = next;
            if done || hi - lo <= ds * T::epsilon() {
                break;
            }
        }
        Some(self.point_in_segment(i, sigma.max(T::zero()).min(ds)))
    }

    fn candidates(&self, px: T, py: T, range: std::ops::Range<usize>) -> Vec<(T, PathPoint<T>)> {
        let d2: Vec<T> = range
            .clone()
            .map(|i| (self.x[i] - px).powi(2) + (self.y[i] - py).powi(2))
            .collect();
        let mut out = Vec::new();
        let m = d2.len();
        for j in 0..m {
            let left = j == 0 || d2[j] <= d2[j - 1];
            let right = j + 1 == m || d2[j] <= d2[j + 1];
            if !(left && right) {
                continue;
            }
            let i = range.start + j;
            let mut best: Option<(T, PathPoint<T>)> = None;
            for seg in [i.checked_sub(1), (i + 1 < self.len()).then_some(i)].into_iter().flatten() {
                if let Some(pt) = self.refine(seg, px, py) {
                    let d = ((pt.x - px).powi(2) + (pt.y - py).powi(2)).sqrt();
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, pt));
                    }
                }
            }
            if let Some(b) = best {
                out.push(b);
            }
        }
        out
    }

    fn select(
        &self,
        px: T,
        py: T,
        theta: T,
        cands: Vec<(T, PathPoint<T>)>,
        opts: &MatchOptions,
        check_ambiguity: bool,
    ) -> Result<FrenetMatch<T>, PathError> {
        let Some(&(d_best, best)) = cands.iter().min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite")) else {
            return Err(PathError::BeyondEnd);
        };
        if d_best > T::lit(opts.capture) {
            return Err(PathError::OffPath {
                distance: d_best.to_f64_lossy(),
                bound: opts.capture,
            });
        }
        if check_ambiguity {
            let spacing = self.length() / T::from_usize_lossy(self.len() - 1);
            for &(d, pt) in &cands {
                if (pt.s - best.s).abs() > spacing + spacing && (d - d_best).abs() < T::lit(opts.ambiguity_tol) {
                    return Err(PathError::Ambiguous(best.s.to_f64_lossy(), pt.s.to_f64_lossy()));
                }
            }
        }
        let (ex, ey) = (best.x - px, best.y - py);
        let l = -ex * best.theta.sin() + ey * best.theta.cos();
        Ok(FrenetMatch {
            error: LateralErrorState {
                l,
                e_theta: wrap_angle(best.theta - theta),
                s_d: best.s,
            },
            point: best,
        })
    }

    /// Global matching-point search over the whole path.
    pub fn match_pose(&self, px: T, py: T, theta: T, opts: &MatchOptions) -> Result<FrenetMatch<T>, PathError> {
        let cands = self.candidates(px, py, 0..self.len());
        self.select(px, py, theta, cands, opts, true)
    }

    pub fn from_csv<R: Read>(reader: R) -> Result<Self, PathError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| PathError::Csv(e.to_string()))?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| PathError::Csv(format!("missing column `{name}`")))
        };
        let idx = [col("s")?, col("x")?, col("y")?, col("theta")?, col("kappa")?];
        let mut cols: [Vec<T>; 5] = Default::default();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| PathError::Csv(e.to_string()))?;
            for (c, &i) in idx.iter().enumerate() {
                let field = rec.get(i).unwrap_or("");
                let v: f64 = field
                    .parse()
                    .map_err(|_| PathError::Csv(format!("row {}: bad number `{field}`", row + 1)))?;
                cols[c].push(T::lit(v));
            }
        }
        let [s, x, y, theta, kappa] = cols;
        Self::new(s, x, y, theta, kappa)
    }
}

fn grid<T: Real>(length: T, spacing: T) -> Vec<T> {
    assert!(length > T::zero() && spacing > T::zero(), "path length and spacing must be positive");
    let n = (length / spacing).ceil().to_f64_lossy().max(1.0) as usize;
    let h = length / T::from_usize_lossy(n);
    (0..=n).map(|k| T::from_usize_lossy(k) * h).collect()
}

/// Global search on `path`; see [`FrenetPath::match_pose`].
pub fn frenet_match<T: Real>(
    path: &FrenetPath<T>,
    pose: (T, T, T),
    opts: &MatchOptions,
) -> Result<FrenetMatch<T>, PathError> {
    path.match_pose(pose.0, pose.1, pose.2, opts)
}

/// Incremental matcher that searches a window around the previous match.
#[derive(Debug, Clone)]
pub struct FrenetMatcher<'a, T = f64> {
    path: &'a FrenetPath<T>,
    opts: MatchOptions,
    window: T,
    last_s: Option<T>,
}

impl<'a, T: Real> FrenetMatcher<'a, T> {
    pub fn new(path: &'a FrenetPath<T>, opts: MatchOptions) -> Self {
        Self {
            path,
            opts,
            window: T::lit(opts.capture),
            last_s: None,
        }
    }

    pub fn match_pose(&mut self, px: T, py: T, theta: T) -> Result<FrenetMatch<T>, PathError> {
        let m = match self.last_s {
            None => self.path.match_pose(px, py, theta, &self.opts)?,
            Some(s0) => {
                let lo = self.path.s.partition_point(|&v| v < s0 - self.window).saturating_sub(1);
                let hi = (self.path.s.partition_point(|&v| v <= s0 + self.window) + 1).min(self.path.len());
                let cands = self.path.candidates(px, py, lo..hi);
                self.path.select(px, py, theta, cands, &self.opts, false)?
            }
        };
        self.last_s = Some(m.error.s_d);
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap() {
        use std::f64::consts::PI;
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((wrap_angle(-0.3f64) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn generators_validate() {
        let c = FrenetPath::<f64>::circle(50.0, 4.0);
        let l = FrenetPath::<f64>::line(100.0);
        for p in [&c, &l] {
            FrenetPath::new(p.s.clone(), p.x.clone(), p.y.clone(), p.theta.clone(), p.kappa.clone()).unwrap();
        }
        assert!((c.length() - 200.0).abs() < 1e-12);
    }

    #[test]
    fn validation_errors() {
        let v = |a: &[f64]| a.to_vec();
        assert_eq!(
            FrenetPath::new(v(&[0.0]), v(&[0.0]), v(&[0.0]), v(&[0.0]), v(&[0.0])),
            Err(PathError::TooShort(1))
        );
        assert_eq!(
            FrenetPath::new(v(&[0.0, 0.0]), v(&[0.0, 1.0]), v(&[0.0; 2]), v(&[0.0; 2]), v(&[0.0; 2])),
            Err(PathError::NonMonotone(1))
        );
        assert!(matches!(
            FrenetPath::new(v(&[0.0, 1.0]), v(&[0.0, 0.0]), v(&[0.0, 1.0]), v(&[0.0; 2]), v(&[0.0; 2])),
            Err(PathError::Inconsistent { what: "position increment", .. })
        ));
        assert!(matches!(
            FrenetPath::new(v(&[0.0, 1.0]), v(&[0.0, 1.0]), v(&[0.0; 2]), v(&[0.0; 2]), v(&[0.5; 2])),
            Err(PathError::Inconsistent { what: "heading increment", .. })
        ));
    }

    #[test]
    fn arc_interpolation_is_exact_on_circles() {
        let r = 50.0;
        let c = FrenetPath::circle(r, 3.0);
        for k in 0..200 {
            let s = 0.731 * k as f64;
            let p = c.point_at(s);
            let a = s / r;
            assert!((p.x - r * a.sin()).abs() < 1e-11);
            assert!((p.y - r * (1.0 - a.cos())).abs() < 1e-11);
            assert!((p.theta - a).abs() < 1e-13);
        }
    }

    #[test]
    fn on_path_pose() {
        let c = FrenetPath::<f64>::circle(50.0, 4.0);
        let p = c.point_at(37.3);
        let m = c.match_pose(p.x, p.y, p.theta, &MatchOptions::default()).unwrap();
        assert!(m.error.l.abs() < 1e-10);
        assert!(m.error.e_theta.abs() < 1e-12);
        assert!((m.error.s_d - 37.3).abs() < 1e-9);
    }

    #[test]
    fn straight_line_left_offset() {
        let line = FrenetPath::<f64>::line(20.0);
        let m = frenet_match(&line, (5.0, 0.3, 0.0), &MatchOptions::default()).unwrap();
        // l = e . n_d with e = p_d - p: a pose left of the path has negative l
        assert!((m.error.l + 0.3).abs() < 1e-15);
        assert_eq!(m.error.e_theta, 0.0);
        assert!((m.error.s_d - 5.0).abs() < 1e-12);
    }

    fn brute_force(path: &FrenetPath, px: f64, py: f64) -> (f64, PathPoint) {
        let n = 400_000;
        let mut best = (f64::INFINITY, path.point_at(0.0));
        for k in 0..=n {
            let p = path.point_at(path.length() * k as f64 / n as f64);
            let d = ((p.x - px).powi(2) + (p.y - py).powi(2)).sqrt();
            if d < best.0 {
                best = (d, p);
            }
        }
        best
    }

    #[test]
    fn circle_outside_offset_matches_brute_force() {
        let r = 50.0;
        let c = FrenetPath::circle(r, 4.0);
        let a: f64 = 1.3;
        // 0.2 m outside: away from the centre (0, r)
        let (px, py) = ((r + 0.2) * a.sin(), r - (r + 0.2) * a.cos());
        let m = c.match_pose(px, py, a, &MatchOptions::default()).unwrap();
        let (d, bp) = brute_force(&c, px, py);
        assert!((m.error.l.abs() - 0.2).abs() < 1e-10);
        assert!((m.error.l.abs() - d).abs() < 1e-6);
        assert!((m.error.s_d - bp.s).abs() < 1e-3);
        // outside a left-turning circle is to the right of the path
        assert!(m.error.l > 0.0);
    }

    #[test]
    fn ambiguity_and_off_path() {
        let c = FrenetPath::circle(5.0, 1.5 * std::f64::consts::PI);
        assert!(matches!(
            c.match_pose(0.0, 5.0, 0.0, &MatchOptions::default()),
            Err(PathError::Ambiguous(..))
        ));
        let line = FrenetPath::line(50.0);
        assert!(matches!(
            line.match_pose(10.0, 12.0, 0.0, &MatchOptions::default()),
            Err(PathError::OffPath { .. })
        ));
        assert_eq!(line.match_pose(60.0, 0.0, 0.0, &MatchOptions::default()), Err(PathError::BeyondEnd));
    }

    #[test]
    fn csv_round_trip() {
        let c = FrenetPath::<f64>::circle_sampled(20.0, 1.0, 1.0);
        let mut text = String::from("s,x,y,theta,kappa\n");
        for i in 0..c.len() {
            let p = c.sample(i);
            text += &format!("{:e},{:e},{:e},{:e},{:e}\n", p.s, p.x, p.y, p.theta, p.kappa);
        }
        let back = FrenetPath::<f64>::from_csv(text.as_bytes()).unwrap();
        assert_eq!(back, c);
        assert!(FrenetPath::<f64>::from_csv("s,x,y\n0,0,0\n".as_bytes()).is_err());
    }

    #[test]
    fn windowed_matcher_agrees_with_global() {
        let c = FrenetPath::<f64>::circle(50.0, 4.0);
        let mut m = FrenetMatcher::new(&c, MatchOptions::default());
        for k in 0..150 {
            let s = 1.0 + k as f64;
            let p = c.point_at(s);
            let off = 0.5 * (0.1 * s).sin();
            let (px, py) = (p.x + off * p.theta.sin(), p.y - off * p.theta.cos());
            let a = m.match_pose(px, py, p.theta + 0.05).unwrap();
            let b = c.match_pose(px, py, p.theta + 0.05, &MatchOptions::default()).unwrap();
            assert!((a.error.l - b.error.l).abs() < 1e-12);
            assert!((a.error.l - off).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn tangency_holds(s in 1.0f64..150.0, off in -3.0f64..3.0) {
            let c = FrenetPath::<f64>::circle(50.0, 4.0);
            let p = c.point_at(s);
            let (px, py) = (p.x - off * p.theta.sin(), p.y + off * p.theta.cos());
            let m = c.match_pose(px, py, 0.0, &MatchOptions::default()).unwrap();
            let q = m.point;
            let along = (q.x - px) * q.theta.cos() + (q.y - py) * q.theta.sin();
            prop_assert!(along.abs() < 1e-9);
            prop_assert!((m.error.l + off).abs() < 1e-9);
        }
    }
}
