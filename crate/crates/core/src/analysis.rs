//! Metrics over simulation traces, ultimate-bound checks and frequency tables.

use thiserror::Error;

use crate::controller::HomogeneousGains;
use crate::sim::SimTrace;
use crate::tf::{ComplexResponse, RationalTransferFunction, TfError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("trace is empty")]
    EmptyTrace,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("final window starts at t = {start}, needs at least {needed} s of settling")]
    WindowTooShort { start: f64, needed: f64 },
    #[error("frequency grid must be positive and strictly ascending")]
    BadGrid,
    #[error(transparent)]
    Tf(#[from] TfError),
}

/// Fraction of the trace used as the final window.
pub const FINAL_WINDOW: f64 = 0.2;
/// Relative slack on the ultimate bound.
pub const BOUND_MARGIN: f64 = 0.05;
/// Settling time constants required before the final window.
pub const SETTLING_CONSTANTS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceMetrics {
    /// RMS of the primary column over the final window.
    pub sse_rms: f64,
    pub sse_max: f64,
    /// Time after the last exceedance of the threshold; `inf` if the trace
    /// ends above it.
    pub settling_time: f64,
    /// Max `|x|` after the first sign change.
    pub overshoot: f64,
    /// RMS of `f_true - f_hat` over the final window, all axes pooled.
    pub observer_rmse: Option<f64>,
    /// Standard deviation of the control column over the final window.
    pub control_noise_rms: Option<f64>,
}

/// First row of the final window.
pub fn final_window_start(len: usize) -> usize {
    let w = ((len as f64) * FINAL_WINDOW).ceil() as usize;
    len - w.clamp(1, len.max(1))
}

fn rms(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x * x, n + 1));
    if n == 0 {
        0.0
    } else {
        (sum / n as f64).sqrt()
    }
}

fn std_dev(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    rms(v.iter().map(|x| x - mean))
}

/// `(f_true*, f_hat*)` column pairs with matching suffixes.
pub fn observer_pairs(trace: &SimTrace) -> Vec<(&[f64], &[f64])> {
    trace
        .names()
        .iter()
        .filter_map(|n| n.strip_prefix("f_true"))
        .filter_map(|suffix| Some((trace.column(&format!("f_true{suffix}"))?, trace.column(&format!("f_hat{suffix}"))?)))
        .collect()
}

/// Pooled RMS of the estimate error over rows `range`.
pub fn observer_rmse(trace: &SimTrace, range: std::ops::Range<usize>) -> Option<f64> {
    let pairs = observer_pairs(trace);
    if pairs.is_empty() {
        return None;
    }
    let sq: f64 = range
        .clone()
        .map(|k| pairs.iter().map(|(f, h)| (f[k] - h[k]).powi(2)).sum::<f64>())
        .sum();
    Some((sq / range.len().max(1) as f64).sqrt())
}

/// Settling time for `|x| < threshold` from some point on.
pub fn settling_time(t: &[f64], x: &[f64], threshold: f64) -> f64 {
    match x.iter().rposition(|v| v.abs() >= threshold) {
        None => t.first().copied().unwrap_or(0.0),
        Some(i) if i + 1 == x.len() => f64::INFINITY,
        Some(i) => t[i + 1],
    }
}

/// Max `|x|` after the first sign change relative to the first nonzero sample.
pub fn overshoot(x: &[f64]) -> f64 {
    let Some(first) = x.iter().position(|&v| v != 0.0) else {
        return 0.0;
    };
    let sign = x[first].signum();
    match x[first..].iter().position(|&v| v * sign < 0.0) {
        None => 0.0,
        Some(j) => x[first + j..].iter().fold(0.0, |m: f64, v| m.max(v.abs())),
    }
}

pub fn trace_metrics(trace: &SimTrace, threshold: f64) -> Result<TraceMetrics, AnalysisError> {
    if trace.is_empty() {
        return Err(AnalysisError::EmptyTrace);
    }
    let x = trace.primary();
    let start = final_window_start(trace.len());
    let tail = &x[start..];
    Ok(TraceMetrics {
        sse_rms: rms(tail.iter().copied()),
        sse_max: tail.iter().fold(0.0, |m: f64, v| m.max(v.abs())),
        settling_time: settling_time(trace.t(), x, threshold),
        overshoot: overshoot(x),
        observer_rmse: observer_rmse(trace, start..trace.len()),
        control_noise_rms: trace.control().map(|u| std_dev(&u[start..])),
    })
}

/// `f_bar / omega^n`.
pub fn ultimate_bound(f_bar: f64, omega: f64, n: usize) -> Result<f64, AnalysisError> {
    if !(omega > 0.0) || n == 0 || !(f_bar >= 0.0) {
        return Err(AnalysisError::InvalidParams(format!(
            "need f_bar >= 0, omega > 0, n >= 1 (got {f_bar}, {omega}, {n})"
        )));
    }
    Ok(f_bar / omega.powi(n as i32))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// `sup |f|` over the final window.
    pub f_bar: f64,
    pub theoretical_bound: f64,
    /// `max |x|` over the final window, an estimate of `limsup |x|`.
    pub measured_limsup: f64,
    pub margin: f64,
    pub satisfied: bool,
}

/// Compare the tail of an uncompensated run against `f_bar / omega^n`.
pub fn check_bound(trace: &SimTrace, omega: f64, n: usize) -> Result<BoundReport, AnalysisError> {
    check_bound_with_margin(trace, omega, n, BOUND_MARGIN)
}

pub fn check_bound_with_margin(trace: &SimTrace, omega: f64, n: usize, margin: f64) -> Result<BoundReport, AnalysisError> {
    if trace.is_empty() {
        return Err(AnalysisError::EmptyTrace);
    }
    ultimate_bound(0.0, omega, n)?;
    let start = final_window_start(trace.len());
    let needed = SETTLING_CONSTANTS / omega;
    let t0 = trace.t()[start] - trace.t()[0];
    if t0 < needed {
        return Err(AnalysisError::WindowTooShort { start: t0, needed });
    }
    let f = trace
        .column("f_true")
        .ok_or_else(|| AnalysisError::InvalidParams("trace has no f_true column".into()))?;
    let f_bar = f[start..].iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let measured_limsup = trace.primary()[start..].iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let theoretical_bound = ultimate_bound(f_bar, omega, n)?;
    Ok(BoundReport {
        f_bar,
        theoretical_bound,
        measured_limsup,
        margin,
        satisfied: measured_limsup <= theoretical_bound * (1.0 + margin),
    })
}

/// Evaluate `tf` on `j w` for each grid frequency.
pub fn bode_table(tf: &RationalTransferFunction, grid: &[f64]) -> Result<Vec<ComplexResponse>, AnalysisError> {
    let ok = grid.first().is_some_and(|&f| f > 0.0) && grid.windows(2).all(|w| w[1] > w[0]);
    if !ok {
        return Err(AnalysisError::BadGrid);
    }
    grid.iter().map(|&w| tf.response(w).map_err(Into::into)).collect()
}

/// Logarithmic grid from `lo` to `hi` with `per_decade` points per decade,
/// both ends included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && per_decade > 0, "invalid log grid");
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=n)
        .map(|k| lo * 10f64.powf(decades * k as f64 / n as f64))
        .collect()
}

/// 50 points per decade over `[min(w, w_f)/100, max(w, w_f)*100]`.
pub fn default_grid(omega: f64, omega_f: f64) -> Vec<f64> {
    log_grid(omega.min(omega_f) / 100.0, omega.max(omega_f) * 100.0, 50)
}

/// Least-squares slope of `ln|y|` against `t`.
pub fn fit_log_slope(t: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(_, v)| **v != 0.0)
        .map(|(&t, v)| (t, v.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let (mt, my) = pts.iter().fold((0.0, 0.0), |(a, b), (t, l)| (a + t / n, b + l / n));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, l)| (a + (t - mt) * (l - my), b + (t - mt).powi(2)));
    sxy / sxx
}

/// Noise seen at the control input, per the small-signal pathway
/// `u_w - w_hat` with `w_hat ~ omega_f w_{n-1}`, ignoring closed-loop feedback.
pub fn predicted_control_noise_rms(gains: &HomogeneousGains, omega_f: f64, b: f64, sigma: &[f64]) -> f64 {
    let a = gains.as_slice();
    let n = a.len();
    let var: f64 = (0..n)
        .map(|i| {
            let s = sigma.get(i).copied().unwrap_or(0.0);
            let k = if i + 1 == n { a[i] + omega_f } else { a[i] };
            (k * s).powi(2)
        })
        .sum();
    var.sqrt() / b.abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseReport {
    pub measured: f64,
    pub predicted: f64,
}

impl NoiseReport {
    pub fn ratio(&self) -> f64 {
        self.measured / self.predicted
    }
}
