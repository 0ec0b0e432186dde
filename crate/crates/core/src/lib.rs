//! Page–Wootters clocks on a clock and system encoded in SU(2)₂ anyons:
//! fusion spaces, braid representations, fusion measurements, clock POVMs
//! and conditioning.

pub mod anyon_model;
pub mod braiding;
pub mod cli;
pub mod error;
pub mod fusion_space;
pub mod linalg;
pub mod measurement;
pub mod relational_clock;
pub mod report;

pub use anyon_model::{AnyonModelSpec, ModelKind};
pub use braiding::{BraidWord, GateMatrix};
pub use error::{Error, Result};
pub use fusion_space::{FusionBasis, QubitKet, StateVector};
pub use measurement::PovmEffect;
pub use relational_clock::{ClockSchedule, GlobalState};
