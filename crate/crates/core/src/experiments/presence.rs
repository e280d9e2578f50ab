use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree_sequences::sample_iid_degrees;
use crate::distributions::FloorParetoLaw;
use crate::error::{invalid, Result};
use crate::seeding::{replica_seed, splitmix64, stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresenceConfig {
    pub gamma: f64,
    pub ns: Vec<usize>,
    /// Exponents `a ∈ (0, 1)`; each is probed at `k = ⌈n^a⌉`.
    pub exponents: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PresenceRow {
    pub n: usize,
    pub a: f64,
    pub k: u64,
    /// Fraction of replicas whose degrees include every value in `1..=k`.
    pub all_present_fraction: f64,
    /// Fraction of replicas containing degree `k` itself.
    pub k_present_fraction: f64,
    pub replicas: usize,
}

/// `⌈n^a⌉`, treating values within `1e-9` (relative) of an integer as that
/// integer so that e.g. `⌈(10⁵)^{0.2}⌉ = 10` despite rounding in `powf`.
pub fn ceil_power(n: usize, a: f64) -> u64 {
    let x = (n as f64).powf(a);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// Samples i.i.d. degree sequences and records, for each `(n, a)`, how often
/// all of `1..=⌈n^a⌉` and `⌈n^a⌉` alone appear.
pub fn presence_experiment(cfg: &PresenceConfig) -> Result<Vec<PresenceRow>> {
    let law = FloorParetoLaw::new(cfg.gamma)?;
    if cfg.replicas == 0 {
        return Err(invalid("replicas must be >= 1"));
    }
    if let Some(a) = cfg.exponents.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(invalid(format!("exponent a must lie in (0, 1), got {a}")));
    }
    if cfg.ns.iter().any(|&n| n == 0) {
        return Err(invalid("n must be >= 1"));
    }
    let mut rows = Vec::new();
    for (ni, &n) in cfg.ns.iter().enumerate() {
        let ks: Vec<u64> = cfg.exponents.iter().map(|&a| ceil_power(n, a)).collect();
        let k_max = ks.iter().copied().max().unwrap_or(0);
        let block_seed = splitmix64(cfg.seed ^ (ni as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
        // Per replica: (first missing degree, presence flags of each k).
        let per_replica: Vec<(u64, Vec<bool>)> = (0..cfg.replicas as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = stream(replica_seed(block_seed, r));
                let seq = sample_iid_degrees(n, &law, &mut rng)?;
                let mut seen = vec![false; k_max as usize + 2];
                for &d in seq.degrees() {
                    if d <= k_max + 1 {
                        seen[d as usize] = true;
                    }
                }
                let first_missing = (1..seen.len()).find(|&k| !seen[k]).unwrap_or(seen.len()) as u64;
                let flags = ks.iter().map(|&k| seen[k as usize]).collect();
                Ok((first_missing, flags))
            })
            .collect::<Result<_>>()?;
        let r = cfg.replicas as f64;
        for (ai, (&a, &k)) in cfg.exponents.iter().zip(&ks).enumerate() {
            let all = per_replica.iter().filter(|(fm, _)| *fm > k).count();
            let top = per_replica.iter().filter(|(_, f)| f[ai]).count();
            rows.push(PresenceRow {
                n,
                a,
                k,
                all_present_fraction: all as f64 / r,
                k_present_fraction: top as f64 / r,
                replicas: cfg.replicas,
            });
        }
    }
    Ok(rows)
}
