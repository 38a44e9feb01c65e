//! Witness maximization: grid scans, simplex search, random scenarios.

pub mod ceiling;
pub mod grid;
pub mod random;
pub mod simplex;
pub mod space;

pub use ceiling::{
    saturation_family, saturation_space, spin1_space, spin1_witness, verify_spin1_ceiling,
    CeilingReport, SPIN1_CEILING,
};
pub use grid::{grid_scan, grid_value, GridPoint, GridScan};
pub use random::{random_kraus_scenario, random_scenario, task_rng};
pub use simplex::{better, local_search, multi_restart, random_starts, OptResult};
pub use space::{Param, ParamSpace};
