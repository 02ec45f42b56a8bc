//! Reconstruction quality measures and the two-detector coincidence parameter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FIDELITY_NORM_TOL: f64 = 1e-6;

fn check_normalized(field: &str, p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::invalid(field, "entries must be finite and nonnegative"));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > FIDELITY_NORM_TOL {
        return Err(Error::NotNormalized {
            sum,
            tolerance: FIDELITY_NORM_TOL,
        });
    }
    Ok(())
}

/// Classical fidelity `sum_m sqrt(a(m) b(m))`. The shorter argument is
/// implicitly zero-padded.
pub fn fidelity(a: &[f64], b: &[f64]) -> Result<f64> {
    check_normalized("fidelity argument", a)?;
    check_normalized("fidelity argument", b)?;
    let f: f64 = a.iter().zip(b).map(|(x, y)| (x * y).sqrt()).sum();
    Ok(f.min(1.0))
}

/// Fidelity between measured and model photocount distributions of one setting.
pub fn photocount_fidelity(p_xp: &[f64], p_r: &[f64]) -> Result<f64> {
    fidelity(p_xp, p_r)
}

pub fn mean_photon_number(b: &[f64]) -> Result<f64> {
    check_normalized("distribution", b)?;
    Ok(b.iter().enumerate().map(|(m, &x)| m as f64 * x).sum())
}

/// `alpha = P12 / (P1 P2)` for light split 50:50 onto two click detectors of
/// efficiency `eta`.
///
/// Per photon number the no-click probabilities are `(1 - eta/2)^m` (one arm)
/// and `(1 - eta)^m` (both arms); they are evaluated through `ln_1p`/`exp_m1`
/// so that the coincidence term keeps its precision at small `eta`.
pub fn hbt_alpha(p: &[f64], eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::invalid("eta", format!("{eta} is outside (0, 1]")));
    }
    check_normalized("distribution", p)?;
    let ln_half = (-eta / 2.0).ln_1p();
    let ln_full = (-eta).ln_1p();
    let mut p1 = 0.0;
    let mut p12 = 0.0;
    for (m, &pm) in p.iter().enumerate().skip(1) {
        let mf = m as f64;
        let click_one = -(mf * ln_half).exp_m1();
        p1 += pm * click_one;
        if m >= 2 {
            let click_any = -(mf * ln_full).exp_m1();
            p12 += pm * (2.0 * click_one - click_any);
        }
    }
    if p1 == 0.0 {
        return Err(Error::invalid(
            "distribution",
            "no detector can click, alpha is undefined",
        ));
    }
    Ok(p12 / (p1 * p1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    /// Reconstructed vs expected noise distribution.
    pub distribution_fidelity: f64,
    /// Per setting, measured vs reconstructed photocount distribution.
    pub setting_fidelities: Vec<f64>,
    pub tau_reconstructed: f64,
    pub tau_reference: f64,
    pub mean_reconstructed: f64,
    pub mean_expected: f64,
}
