//! Scalar unit conversions.
//!
//! Everything internal runs in SI base units (W, Hz, m, s). Decibel and dBm
//! values appear only at API boundaries and in serialized output, so each
//! conversion lives here and nowhere else.

use crate::error::{QotError, Result};

/// Planck constant in J*s (exact, 2019 SI definition).
pub const PLANCK_J_S: f64 = 6.62607015e-34;

/// Converts a decibel ratio to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Converts a power in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

/// Converts a power in watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts / 1e-3)
}

/// Converts a power attenuation figure in dB/km to the power attenuation
/// coefficient alpha_p in Np/m.
pub fn attenuation_to_alpha_p(att_db_per_km: f64) -> Result<f64> {
    if !att_db_per_km.is_finite() || att_db_per_km <= 0.0 {
        return Err(QotError::InvalidParameter(format!(
            "attenuation must be positive and finite, got {att_db_per_km} dB/km"
        )));
    }
    Ok(att_db_per_km / (10.0 * std::f64::consts::E.log10()) / 1000.0)
}

/// Inverse of [`attenuation_to_alpha_p`].
pub fn alpha_p_to_attenuation(alpha_p: f64) -> f64 {
    alpha_p * 10.0 * std::f64::consts::E.log10() * 1000.0
}
