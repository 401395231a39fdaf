//! Conflict-of-interest intensity maps for a gridded polar region.
//!
//! Each country gets a utility field per resource (oil, gas, fish and
//! shipping routes), derived from resource layers and its distance to every
//! cell. Utilities are discretized to a small grade scale, and cells are
//! ranked by threshold aggregation: the per-country grades at a cell are
//! sorted high to low and compared lexicographically. Ranking runs once per
//! resource and once more across the resulting forecasts.
//!
//! The foreign-EEZ interest parameter `alpha` scales a country's utility in
//! other countries' EEZs: `0` limits interest to its own EEZ and international
//! water, `1` treats every EEZ as international.

pub mod aggregation;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod scenario;
pub mod utility;

pub use aggregation::{
    aggregate_overall, aggregate_resource, classify, compare_intensity, rank_cells, sort_desc,
    ConflictClassField, GradeVector, Ranking, SortedGradeVector, ThresholdScheme,
};
pub use config::{LoadedConfig, ScenarioConfig};
pub use error::{Error, Result};
pub use model::{
    build_world, distance_field, great_circle_km, CellId, Country, CountryCode, CountryKind,
    DistanceField, GridSpec, LatLon, Owner, World,
};
pub use scenario::{compare_runs, run_scenario, sweep_alpha, LayerSet, RunComparison, RunResult};
pub use utility::{
    deposit_utility, maritime_utility, quantize, DecayFunction, GradeField, MaritimeParams,
    QuantizeMode, Resource, ResourceLayer, UtilityField,
};
