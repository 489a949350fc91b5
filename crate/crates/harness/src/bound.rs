use crate::error::{config, Result};

/// Attenuation below which a lone error is more likely to be corrected than
/// joined by a wrong flip among its `l (k - 1)` neighbours:
/// `(1 / (l (k - 1)))^(1 / (l - 1))`.
pub fn gamma_bound(l: usize, k: usize) -> Result<f64> {
    if l < 2 || k < 2 {
        return config(format!("gamma bound needs l >= 2 and k >= 2, got l = {l}, k = {k}"));
    }
    let base = 1.0 / (l * (k - 1)) as f64;
    Ok(base.powf(1.0 / (l - 1) as f64))
}
