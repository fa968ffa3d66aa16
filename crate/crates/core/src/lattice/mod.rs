//! Colorings, the FCA/GHM/CCA update rules, the associated 1-form and the
//! tournament ranking.

mod config;
mod form;
pub mod kernel;
mod rules;
mod tournament;

pub use config::{blink_color, burn_in, light_cone_window, ColorConfig, Geometry, MAX_KAPPA};
pub use form::{edge_value, OneForm, Orientation};
pub use kernel::BulkLattice;
pub use rules::{
    evolve_form, flipped_edges, simulate, step, step_cca, step_fca, step_ghm, Rule, StepReport, Trajectory,
};
pub(crate) use config::check_kappa;
pub(crate) use rules::step_flags;
pub use tournament::{max_rank, tournament_step, Ranking};
