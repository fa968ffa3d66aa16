//! Reference constants, also written to `constants.json` for the plotting
//! scripts so the numbers live in one place.

use serde::Serialize;

/// Claimed limit of `√(3τ)·P(X_{3τ}(0) ≠ X_{3τ}(1))` for κ=3: `176/(467√(2π))`.
pub fn disagreement_constant() -> f64 {
    176.0 / (467.0 * (2.0 * std::f64::consts::PI).sqrt())
}

/// Claimed limit of `√t·Q^{●0}(0, t)`: `432/(467√(3π))`.
pub fn survival_constant() -> f64 {
    432.0 / (467.0 * (3.0 * std::f64::consts::PI).sqrt())
}

/// Three-color CCA cluster constant `√(2/(3π))`.
pub fn cca_constant() -> f64 {
    (2.0 / (3.0 * std::f64::consts::PI)).sqrt()
}

/// Limit of `(1 − q⁻(u))/√(1−u)`: `3√3/2`.
pub fn q_minus_ratio() -> f64 {
    1.5 * 3f64.sqrt()
}

/// Excitation scaling variance `8/81` (so `ne_t ≈ √(8t/81)·M`).
pub const EXCITATION_VARIANCE: f64 = 8.0 / 81.0;

/// `γ² = 8/27` for κ=3.
pub const GAMMA_SQUARED: f64 = 8.0 / 27.0;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Constants {
    pub disagreement_constant: f64,
    pub survival_constant: f64,
    pub cca_constant: f64,
    pub q_minus_ratio: f64,
    pub excitation_variance: f64,
    pub gamma_squared: f64,
    pub sa_simple_walk: f64,
}

pub fn all() -> Constants {
    Constants {
        disagreement_constant: disagreement_constant(),
        survival_constant: survival_constant(),
        cca_constant: cca_constant(),
        q_minus_ratio: q_minus_ratio(),
        excitation_variance: EXCITATION_VARIANCE,
        gamma_squared: GAMMA_SQUARED,
        sa_simple_walk: std::f64::consts::SQRT_2,
    }
}

pub fn to_json() -> String {
    serde_json::to_string_pretty(&all()).expect("constants serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_values() {
        assert!((disagreement_constant() - 0.15035).abs() < 5e-6);
        assert!((survival_constant() - 0.30133).abs() < 1e-5);
        assert!((cca_constant() - 0.4607).abs() < 5e-5);
        assert!((q_minus_ratio() - 2.598).abs() < 1e-3);
        assert!(to_json().contains("\"q_minus_ratio\""));
    }

    #[test]
    fn checked_in_file_is_current() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/constants.json");
        let on_disk = std::fs::read_to_string(path).expect("schemas/constants.json");
        assert_eq!(on_disk.trim_end(), to_json());
    }
}
