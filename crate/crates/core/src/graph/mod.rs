//! Lifting protographs to parity-check matrices and counting short cycles.

mod cycles;
mod peg;
mod typed;

pub use cycles::{added_4cycles, count_4cycles, CycleCounter};
pub use peg::{peg_lift, random_lift};
pub use typed::{load_typed, realized_protograph, save_typed, TypeSidecar, TypedMatrix};
