//! Parameter sweeps over `(omega, omega_f, sigma)` with canonical row order.

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{check_bound, trace_metrics, BoundReport, TraceMetrics};
use crate::sim::scenario::{ChainControllerKind, PlantSpec};
use crate::sim::{fmt_f64, run_scenario, Scenario, SimError, SimTrace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid axis `{0}` is empty")]
    Empty(&'static str),
    #[error("grid axis `{axis}` has invalid value {value}")]
    Invalid { axis: &'static str, value: f64 },
    #[error("cannot parse grid spec `{0}`")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedPolicy {
    /// Every cell uses the scenario seed.
    #[default]
    Fixed,
    /// Cell `i` (in canonical order) uses a seed derived from the scenario seed and `i`.
    PerCell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub omega: Vec<f64>,
    pub omega_f: Vec<f64>,
    /// Uniform noise level on every measurement channel; `None` keeps the
    /// scenario's own noise.
    pub sigma: Option<Vec<f64>>,
    pub seed_policy: SeedPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub index: usize,
    pub omega: f64,
    pub omega_f: f64,
    pub sigma: Option<f64>,
}

fn parse_list(axis: &'static str, text: &str) -> Result<Vec<f64>, GridError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| GridError::Syntax(format!("{axis}={text}")))
        })
        .collect()
}

impl SweepGrid {
    pub fn new(omega: Vec<f64>, omega_f: Vec<f64>) -> Result<Self, GridError> {
        let g = Self {
            omega,
            omega_f,
            sigma: None,
            seed_policy: SeedPolicy::Fixed,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_sigma(mut self, sigma: Vec<f64>) -> Result<Self, GridError> {
        self.sigma = Some(sigma);
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed_policy(mut self, policy: SeedPolicy) -> Self {
        self.seed_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<(), GridError> {
        for (axis, vals) in [("omega", &self.omega), ("omega_f", &self.omega_f)] {
            if vals.is_empty() {
                return Err(GridError::Empty(axis));
            }
            if let Some(&value) = vals.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(GridError::Invalid { axis, value });
            }
        }
        if let Some(s) = &self.sigma {
            if s.is_empty() {
                return Err(GridError::Empty("sigma"));
            }
            if let Some(&value) = s.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return Err(GridError::Invalid { axis: "sigma", value });
            }
        }
        Ok(())
    }

    /// Parse `omega=1,2,5 omega_f=10,20 [sigma=0,0.01] [seed=fixed|per-cell]`.
    pub fn parse<S: AsRef<str>>(specs: &[S]) -> Result<Self, GridError> {
        let (mut omega, mut omega_f, mut sigma, mut policy) = (None, None, None, SeedPolicy::Fixed);
        for spec in specs.iter().flat_map(|s| s.as_ref().split_whitespace().map(str::to_string).collect::<Vec<_>>()) {
            let (key, val) = spec.split_once('=').ok_or_else(|| GridError::Syntax(spec.clone()))?;
            match key {
                "omega" => omega = Some(parse_list("omega", val)?),
                "omega_f" => omega_f = Some(parse_list("omega_f", val)?),
                "sigma" => sigma = Some(parse_list("sigma", val)?),
                "seed" => {
                    policy = match val {
                        "fixed" => SeedPolicy::Fixed,
                        "per-cell" | "per_cell" => SeedPolicy::PerCell,
                        _ => return Err(GridError::Syntax(spec.clone())),
                    }
                }
                _ => return Err(GridError::Syntax(spec.clone())),
            }
        }
        let g = Self {
            omega: omega.ok_or(GridError::Empty("omega"))?,
            omega_f: omega_f.ok_or(GridError::Empty("omega_f"))?,
            sigma,
            seed_policy: policy,
        };
        g.validate()?;
        Ok(g)
    }

    /// Cells sorted by `(omega, omega_f, sigma)`, indexed in that order.
    pub fn cells(&self) -> Vec<SweepCell> {
        let sorted = |v: &[f64]| {
            let mut v = v.to_vec();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let sig: Vec<Option<f64>> = match &self.sigma {
            Some(s) => sorted(s).into_iter().map(Some).collect(),
            None => vec![None],
        };
        let mut cells = Vec::new();
        for &omega in &sorted(&self.omega) {
            for &omega_f in &sorted(&self.omega_f) {
                for &sigma in &sig {
                    cells.push(SweepCell {
                        index: cells.len(),
                        omega,
                        omega_f,
                        sigma,
                    });
                }
            }
        }
        cells
    }
}

/// SplitMix64 finalizer, used to derive per-cell seeds.
fn mix_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    Diverged(String),
    Failed(String),
}

impl CellStatus {
    pub fn label(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::Diverged(m) => format!("diverged: {m}"),
            CellStatus::Failed(m) => format!("failed: {m}"),
        }
    }

    pub fn is_ok(&self) -> bool {
        *self == CellStatus::Ok
    }
}

/// One row of the metrics table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scenario_id: String,
    pub omega: f64,
    pub omega_f: f64,
    pub sigma: f64,
    pub metrics: Option<TraceMetrics>,
    pub bound: Option<BoundReport>,
    pub status: CellStatus,
}

/// Fraction of the peak `|primary|` used as the settling threshold.
pub const SETTLING_FRACTION: f64 = 0.02;

/// Metrics for a finished run. The bound report is filled for uncompensated
/// chain runs whose final window is long enough.
pub fn scenario_metrics(scenario: &Scenario, trace: &SimTrace) -> (TraceMetrics, Option<BoundReport>) {
    let peak = trace.primary().iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let threshold = if peak > 0.0 { SETTLING_FRACTION * peak } else { f64::MIN_POSITIVE };
    let metrics = trace_metrics(trace, threshold).expect("runs produce at least one row");
    let bound = match &scenario.plant {
        PlantSpec::Chain(c) if c.controller == ChainControllerKind::Homogeneous => {
            check_bound(trace, c.omega, c.order).ok()
        }
        _ => None,
    };
    (metrics, bound)
}

pub fn metrics_row(scenario: &Scenario, result: &Result<SimTrace, SimError>) -> MetricsRow {
    let sigma = scenario.noise_sigma.iter().fold(0.0, |m: f64, &s| m.max(s));
    let mut row = MetricsRow {
        scenario_id: scenario.id.clone(),
        omega: scenario.plant.omega(),
        omega_f: scenario.plant.omega_f(),
        sigma,
        metrics: None,
        bound: None,
        status: CellStatus::Ok,
    };
    match result {
        Ok(trace) => {
            let (m, b) = scenario_metrics(scenario, trace);
            row.metrics = Some(m);
            row.bound = b;
        }
        Err(SimError::Diverged { t, reason }) => row.status = CellStatus::Diverged(format!("t = {t}: {reason}")),
        Err(e) => row.status = CellStatus::Failed(e.to_string()),
    }
    row
}

pub const METRICS_HEADER: [&str; 11] = [
    "scenario_id",
    "omega",
    "omega_f",
    "sse_rms",
    "sse_max",
    "settling",
    "overshoot",
    "observer_rmse",
    "bound",
    "limsup",
    "satisfied",
];

/// Extra columns appended in sweep output.
pub const SWEEP_EXTRA: [&str; 3] = ["sigma", "u_noise_rms", "status"];

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn row_fields(r: &MetricsRow, sweep: bool) -> Vec<String> {
    let m = r.metrics.as_ref();
    let b = r.bound.as_ref();
    let mut f = vec![
        r.scenario_id.clone(),
        fmt_f64(r.omega),
        fmt_f64(r.omega_f),
        opt(m.map(|m| m.sse_rms)),
        opt(m.map(|m| m.sse_max)),
        opt(m.map(|m| m.settling_time)),
        opt(m.map(|m| m.overshoot)),
        opt(m.and_then(|m| m.observer_rmse)),
        opt(b.map(|b| b.theoretical_bound)),
        opt(b.map(|b| b.measured_limsup)),
        b.map(|b| b.satisfied.to_string()).unwrap_or_default(),
    ];
    if sweep {
        f.push(fmt_f64(r.sigma));
        f.push(opt(m.and_then(|m| m.control_noise_rms)));
        f.push(r.status.label());
    }
    f
}

fn write_rows(rows: &[MetricsRow], sweep: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = METRICS_HEADER.to_vec();
    if sweep {
        header.extend(SWEEP_EXTRA);
    }
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        w.write_record(row_fields(r, sweep)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Metrics CSV with the standard header.
pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    write_rows(rows, false)
}

/// Sweep CSV: standard header plus `sigma,u_noise_rms,status`.
pub fn sweep_csv(rows: &[MetricsRow]) -> String {
    write_rows(rows, true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<MetricsRow>,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.status.is_ok()).count()
    }
}

/// Scenario for one grid cell.
pub fn cell_scenario(base: &Scenario, grid: &SweepGrid, cell: &SweepCell) -> Scenario {
    let mut s = base.clone();
    s.plant.set_bandwidths(cell.omega, cell.omega_f);
    if let Some(sigma) = cell.sigma {
        s.set_uniform_noise(sigma);
    }
    if grid.seed_policy == SeedPolicy::PerCell {
        s.sim.seed = mix_seed(base.sim.seed, cell.index);
    }
    s
}

/// Run every cell on a pool of `parallelism` threads. Rows come back in
/// canonical cell order whatever the scheduling.
pub fn run_sweep(base: &Scenario, grid: &SweepGrid, parallelism: usize) -> SweepResult {
    let cells = grid.cells();
    let run = |cell: &SweepCell| {
        let s = cell_scenario(base, grid, cell);
        metrics_row(&s, &run_scenario(&s))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("thread pool");
    let rows = pool.install(|| cells.par_iter().map(run).collect());
    SweepResult { rows }
}
