//! Seeded experiments, their summaries, and CSV/JSON persistence.

mod cluster;
mod config;
mod excitation;
mod persist;

use serde::Serialize;

pub use crate::stats::fit_inverse_sqrt;
pub use cluster::{cluster_rate_experiment, ClusterResult, ClusterRow, CLUSTER_HEADER};
pub use config::{ExperimentConfig, Method};
pub use excitation::{
    cdf_rows, excitation_experiment, general_kappa_lower_bound, light_cone_step, rank_increment_check,
    sandwich_check, tournament_max, tournament_maxima, CdfRow, CheckReport, ExcitationResult, LowerBoundReport,
    SandwichReport, DIRECT_TAU_MAX, NE_HEADER,
};
pub use persist::{read_metadata, sidecar_path, write_constants, write_csv, Metadata};

/// A named estimate with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub label: String,
    pub value: f64,
    pub stderr: f64,
}

/// Point estimates plus whatever distances and fits an experiment produces.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SummaryStats {
    pub estimates: Vec<Estimate>,
    pub ks_distance: Option<f64>,
    /// `(a, b)` of `y ≈ a + b/√t`.
    pub fit: Option<(f64, f64)>,
    pub notes: Vec<String>,
}

impl SummaryStats {
    pub fn push(&mut self, label: impl Into<String>, value: f64, stderr: f64) {
        self.estimates.push(Estimate { label: label.into(), value, stderr });
    }

    pub fn get(&self, label: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.label == label)
    }
}
