//! Generalized PID control built from pole placement and a first-order
//! disturbance observer, with simulators for integrator chains, a VTOL
//! rigid body and a kinematic bicycle following a path.
//!
//! The numeric core is generic over the scalar type (`f32` or `f64`); the
//! aliases below fix it to `f64` or `f32`. Simulation, analysis and I/O work
//! in `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod controller;
pub mod plants;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod sim;
pub mod sweep;
pub mod tf;

pub use scalar::Real;

pub type Polynomial64 = poly::Polynomial<f64>;
pub type Polynomial32 = poly::Polynomial<f32>;
pub type TransferFunction64 = tf::RationalTransferFunction<f64>;
pub type TransferFunction32 = tf::RationalTransferFunction<f32>;
pub type ControllerConfig64 = controller::ControllerConfig<f64>;
pub type ControllerConfig32 = controller::ControllerConfig<f32>;
pub type GeneralizedController64 = controller::GeneralizedController<f64>;
pub type GeneralizedController32 = controller::GeneralizedController<f32>;
pub type ClassicPid64 = controller::ClassicPid<f64>;
pub type ClassicPid32 = controller::ClassicPid<f32>;
pub type FrenetPath64 = plants::FrenetPath<f64>;
pub type VtolController64 = plants::vtol::VtolController<f64>;
