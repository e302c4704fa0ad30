//! Coefficient expressions, quadrature, and cached edge profiles.

pub mod expr;
pub mod interp;
pub mod params;
pub mod profile;
pub mod quad;

pub use expr::{ExprError, Expression};
pub use interp::{CumulativeTable, InterpError};
pub use params::{ParamsError, VertexParams};
pub use profile::{EdgeProfile, ProfileError};
pub use quad::{integrate, GaussLegendre, QuadError, QuadOptions};
