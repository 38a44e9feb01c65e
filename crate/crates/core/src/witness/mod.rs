//! Blind-measurement witness, its bounds, and the trace-distance machinery
//! that underpins them.

pub mod bounds;
pub mod channel;
pub mod json;
pub mod metrics;
pub mod scenario;
pub mod state;

pub use bounds::{balanced_partition, dimension_bound, saturating_scenario, theoretical_bound};
pub use channel::Channel;
pub use json::{scenario_from_str, scenario_from_value, scenario_to_value, ScenarioError};
pub use metrics::{
    entropic_witness, linear_entropy, optimal_final_projector, shannon_entropy, trace_distance,
};
pub use scenario::{
    blind_measure, outcome_probability, witness_only, witness_value, WitnessReport, WitnessScenario,
};
pub use state::{DensityMatrix, MeasurementSet, Projector};
