//! Exact tools for Z-expansions of directions on translation surfaces.

pub mod constants;
pub mod dioph;
pub mod error;
pub mod exactfield;
pub mod interval;
pub mod matrix;
pub mod mink;
pub mod surface;
pub mod zexp;

pub use error::{Error, Result};
pub use exactfield::{FieldDescriptor, FieldElement};
pub use interval::{Interval, RatInterval};
pub use matrix::GroupElement;
pub use mink::{ConvexBodyParam, MinkReport, SearchBudget, Shape};
pub use surface::{GroupOrbitModel, Origami, SaddleVector, SurfaceConfig, SurfaceModel};
pub use zexp::{ConvergentRecord, Direction, Expansion, ExpansionLimit, ZSource};
