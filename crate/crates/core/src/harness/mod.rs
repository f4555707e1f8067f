//! Experiment driver on synthetic ratings and the JSON instance format.

mod experiment;
mod spec;

pub use experiment::{
    generate_synthetic_ratings, run_experiment, ExperimentConfig, ExperimentResult,
    ExperimentSummary, MeanStd, MetricsRecord, MAX_RATING,
};
pub use spec::{
    build_constraint, build_matroid, build_objectives, AdversarySpec, ConstraintSpec, InstanceSpec,
    LoadedInstance, ObjectiveSpec,
};
