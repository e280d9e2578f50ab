use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree_sequences::sample_iid_degrees;
use crate::distributions::FloorParetoLaw;
use crate::error::{invalid, Result};
use crate::graphs::{pair_stubs, MultiGraph};
use crate::measures::mixing_curves;
use crate::seeding::{replica_seed, stream};

use super::median;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapConfig {
    pub gamma: f64,
    pub n: usize,
    pub replicas: usize,
    pub k: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub config: GapConfig,
    /// `a = (γ - 1)² / (2γ)`.
    pub exponent: f64,
    /// `n^{2/γ - 1 - a}` for `γ ≤ 2`, `n^{-a}` for `γ > 2`.
    pub threshold: f64,
    pub annd_cm: Vec<f64>,
    pub annd_ecm: Vec<f64>,
    pub annr_cm: Vec<f64>,
    pub annr_ecm: Vec<f64>,
    pub annd_gaps: Vec<f64>,
    pub annr_gaps: Vec<f64>,
    pub annd_fraction_exceeding: f64,
    pub annr_fraction_exceeding: f64,
    pub median_annd_gap: f64,
    pub median_annd_cm: f64,
}

/// `(Φ_n(k), Φ̂_n(k), Θ_n(k), Θ̂_n(k))` for a multigraph and its erasure. The
/// erased curves use realized degrees; absent degrees read as zero.
pub fn curve_gaps(mg: &MultiGraph, k: u64) -> (f64, f64, f64, f64) {
    let cm = mixing_curves(mg);
    let ecm = mixing_curves(&mg.erase());
    (
        cm.annd.value(k),
        ecm.annd.value(k),
        cm.annr.value(k),
        ecm.annr.value(k),
    )
}

/// Per replica, pairs one CM multigraph, erases it, and compares the ANND and
/// ANNR at degree `k` between the two.
pub fn ecm_cm_gap(cfg: &GapConfig) -> Result<GapReport> {
    let law = FloorParetoLaw::new(cfg.gamma)?;
    if cfg.k < 1 {
        return Err(invalid("k must be >= 1"));
    }
    if cfg.n == 0 || cfg.replicas == 0 {
        return Err(invalid("n and replicas must be >= 1"));
    }
    let values: Vec<(f64, f64, f64, f64)> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(replica_seed(cfg.seed, r));
            let seq = sample_iid_degrees(cfg.n, &law, &mut rng)?;
            let mg = MultiGraph::from_matching(&pair_stubs(&seq, &mut rng)?);
            Ok(curve_gaps(&mg, cfg.k))
        })
        .collect::<Result<_>>()?;
    let g = cfg.gamma;
    let exponent = (g - 1.0).powi(2) / (2.0 * g);
    let nf = cfg.n as f64;
    let threshold = if g <= 2.0 {
        nf.powf(2.0 / g - 1.0 - exponent)
    } else {
        nf.powf(-exponent)
    };
    let annd_cm: Vec<f64> = values.iter().map(|v| v.0).collect();
    let annd_ecm: Vec<f64> = values.iter().map(|v| v.1).collect();
    let annr_cm: Vec<f64> = values.iter().map(|v| v.2).collect();
    let annr_ecm: Vec<f64> = values.iter().map(|v| v.3).collect();
    let annd_gaps: Vec<f64> = values.iter().map(|v| (v.1 - v.0).abs()).collect();
    let annr_gaps: Vec<f64> = values.iter().map(|v| (v.3 - v.2).abs()).collect();
    let frac = |gaps: &[f64]| gaps.iter().filter(|&&x| x > threshold).count() as f64 / gaps.len() as f64;
    Ok(GapReport {
        config: cfg.clone(),
        exponent,
        threshold,
        annd_fraction_exceeding: frac(&annd_gaps),
        annr_fraction_exceeding: frac(&annr_gaps),
        median_annd_gap: median(&annd_gaps).unwrap_or(0.0),
        median_annd_cm: median(&annd_cm).unwrap_or(0.0),
        annd_cm,
        annd_ecm,
        annr_cm,
        annr_ecm,
        annd_gaps,
        annr_gaps,
    })
}
