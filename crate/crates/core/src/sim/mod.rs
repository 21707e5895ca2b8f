mod noise;
mod rk4;
mod runner;
pub mod scenario;
mod signal;
mod trace;

pub use noise::{gaussian_noise, standard_normal, NoiseSpec};
pub use rk4::{rk4_step, FnPlant, IntegrationError, PlantModel};
pub use runner::{max_orthogonality_error, run_scenario, SimError, DIVERGENCE_LIMIT};
pub use scenario::{ConfigError, PlantSpec, Scenario, SimSettings};
pub use signal::DisturbanceSignal;
pub use trace::{fmt_f64, SimTrace};
