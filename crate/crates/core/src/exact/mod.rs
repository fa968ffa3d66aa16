//! Survival tables for the κ=3 comparison walk, the generating-function
//! matrix system, and the asymptotic constants derived from them.

mod asymptotics;
mod matrix;
mod qtable;

pub use asymptotics::{
    asymptotic_constant, asymptotic_from_table, disagreement_asymptotics, disagreement_exact, disagreement_from_exact,
    disagreement_from_float, ladder, proportionality_report, AsymptoticReport, RatioRow, STATED_RATIOS,
};
pub use matrix::{find_q_minus, matrix_a, matrix_entries, MatrixSystem};
pub use qtable::{nine_state_table, ExactTable, Family, FloatTable, MemoryTerm, EXACT_CAP};
