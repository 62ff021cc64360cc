//! Built-in charts, named field families and the scalar ODEs they reduce to.

pub mod chart;
pub mod families;
pub mod ode;
pub mod random;

pub use chart::{FrameVector, ModelChart};
pub use families::{field_family, field_family_with_exprs, FamilyField};
pub use ode::{euler_exponents, integrate_local, ode_residual, OdeId, OdeSpec};
