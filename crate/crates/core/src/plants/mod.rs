//! Plant models: integrator chains, the VTOL rigid body and the kinematic
//! vehicle tracked in path coordinates.

mod chain;
pub mod path;
pub mod so3;
pub mod vehicle;
pub mod vtol;

pub use chain::IntegratorChain;
pub use path::{frenet_match, FrenetMatch, FrenetMatcher, FrenetPath, LateralErrorState, MatchOptions, PathError};
pub use so3::{hat, vee, Mat3, RotationMatrix, Vec3};
