//! Z-expansions: best approximations of a ray by elements of a discrete
//! set Z of plane vectors, taken in order of height.

mod direction;
mod expansion;
mod hor;
mod source;

pub use direction::{Direction, RealConstant};
pub use expansion::{
    sandwich_check, termination_check, z_expansion, ConvergentRecord, Expansion, ExpansionLimit, SandwichReport,
    SandwichStep, Termination,
};
pub use hor::{cmp_hor, distance_to_ratio, hor_at, hor_theta, in_positive_half_plane, Hor, MAX_BITS, START_BITS};
pub use source::{
    window_source, LatticeSource, ListSource, OrbitWindowSource, OrigamiWindowSource, StreamSource, WindowConfig, ZSource,
};
