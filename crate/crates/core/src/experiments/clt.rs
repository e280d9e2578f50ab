use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree_sequences::sample_iid_degrees;
use crate::distributions::FloorParetoLaw;
use crate::error::{invalid, Result};
use crate::graphs::pair_stubs;
use crate::measures::annd;
use crate::seeding::{replica_seed, stream};

/// Share of the largest order statistics used by the Hill estimator.
pub const HILL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltConfig {
    pub gamma: f64,
    pub n: usize,
    pub replicas: usize,
    pub k: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub config: CltConfig,
    /// `n^{2/γ - 1}`; the slowly varying factor is taken as 1.
    pub scale: f64,
    /// `Φ_n(k)` of each replica where degree `k` is present, in replica order.
    pub raw: Vec<f64>,
    /// `raw / scale`.
    pub rescaled: Vec<f64>,
    /// Replicas without a node of degree `k`.
    pub excluded: usize,
    /// Hill estimate over the top [`HILL_FRACTION`] of `rescaled`.
    pub hill_index: Option<f64>,
    /// `γ/2`, the index of the stable limit.
    pub theoretical_index: f64,
}

/// Hill estimator `m / Σ_{i<m} ln(x_(i) / x_(m))` over the `m = ⌊fraction·len⌋`
/// largest positive values (`x_(0) ≥ x_(1) ≥ ...`). Needs `m ≥ 2`.
pub fn hill_tail_index(sample: &[f64], fraction: f64) -> Option<f64> {
    let mut v: Vec<f64> = sample.iter().copied().filter(|x| *x > 0.0).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    let m = (fraction * v.len() as f64).floor() as usize;
    if m < 2 || m >= v.len() {
        return None;
    }
    let threshold = v[m];
    let s: f64 = v[..m].iter().map(|x| (x / threshold).ln()).sum();
    (s > 0.0).then(|| m as f64 / s)
}

/// Measures `Φ_n(k)` over CM replicas in the infinite-variance regime and
/// checks its `n^{2/γ-1}` scaling through the tail index of the rescaled values.
pub fn clt_experiment(cfg: &CltConfig) -> Result<CltReport> {
    let law = FloorParetoLaw::new(cfg.gamma)?;
    if !(cfg.gamma < 2.0) {
        return Err(invalid(format!(
            "the stable-law regime needs 1 < gamma < 2, got {}",
            cfg.gamma
        )));
    }
    if cfg.n == 0 || cfg.replicas == 0 {
        return Err(invalid("n and replicas must be >= 1"));
    }
    let k_limit = 0.5 * (cfg.n as f64).powf(1.0 / (cfg.gamma + 1.0));
    if cfg.k < 1 || cfg.k as f64 > k_limit {
        return Err(invalid(format!(
            "k must satisfy 1 <= k <= 0.5 n^(1/(gamma+1)) = {k_limit:.3}, got {}",
            cfg.k
        )));
    }
    let values: Vec<Option<f64>> = (0..cfg.replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(replica_seed(cfg.seed, r));
            let seq = sample_iid_degrees(cfg.n, &law, &mut rng)?;
            let curve = annd(&pair_stubs(&seq, &mut rng)?);
            let (v, present) = curve.get(cfg.k);
            Ok(present.then_some(v))
        })
        .collect::<Result<_>>()?;
    let raw: Vec<f64> = values.iter().flatten().copied().collect();
    let excluded = values.len() - raw.len();
    let scale = (cfg.n as f64).powf(2.0 / cfg.gamma - 1.0);
    let rescaled: Vec<f64> = raw.iter().map(|v| v / scale).collect();
    Ok(CltReport {
        config: cfg.clone(),
        scale,
        hill_index: hill_tail_index(&rescaled, HILL_FRACTION),
        raw,
        rescaled,
        excluded,
        theoretical_index: cfg.gamma / 2.0,
    })
}
