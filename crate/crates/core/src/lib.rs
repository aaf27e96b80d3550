//! Stationary spacelike capillary drops in Lorentz-Minkowski space.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod integrate;
pub mod io;
pub mod params;
pub mod pendent;
pub mod picard;
pub mod profile;
pub mod quadrature;
pub mod report;
pub mod roots;
pub mod shooting;
pub mod sweep;
pub mod tables;

pub use error::{DropError, Result};
pub use integrate::{integrate_ivp, series_start};
pub use params::{CapillaryParams, IvpConfig};
pub use picard::picard_oracle;
pub use profile::{DropProfile, ProfileSample};
