//! Set systems, VC and metric dimension, closed-form bounds, and the
//! experiment harness that checks measured quantities against them.

pub mod bounds;
mod harness;
mod metric;
mod setsys;

pub use bounds::BoundKind;
pub use harness::{
    bound_harness, csv_rows, expand, run_instance, validate_spec, BenchOutcome, BenchSpec, BoundCheck, CsvRow,
    EnvelopeStep, ExperimentGroup, ExperimentReport, GeneratorKind, GuardStats, InstanceKey, Measured, TargetMode,
    Timings, SCHEMA_VERSION,
};
pub use metric::{is_resolving, metric_dimension_exact, MetricDimension};
pub use setsys::{ball_system, sauer_shelah_check, trace_system, vc_dimension, Radii, SauerShelahReport, SetSystem, VcDimension};
