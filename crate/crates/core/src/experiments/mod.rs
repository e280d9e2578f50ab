//! Replica ensembles and the scaling experiments built on them.
//!
//! Replica `r` always draws from [`replica_seed`](crate::seeding::replica_seed)`(seed, r)`
//! and results are reduced in replica order, so every report is identical
//! for any number of worker threads.

mod clt;
mod ensemble;
mod gap;
mod presence;

pub use clt::{clt_experiment, hill_tail_index, CltConfig, CltReport, HILL_FRACTION};
pub use ensemble::{
    run_ensemble, EnsembleConfig, EnsembleSummary, MeasureSummary, Model, SummaryRow,
};
pub use gap::{curve_gaps, ecm_cm_gap, GapConfig, GapReport};
pub use presence::{ceil_power, presence_experiment, PresenceConfig, PresenceRow};

use crate::error::{invalid, Result};

/// Runs `op` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, op: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(op))
}

/// Median of the finite values; `None` for an empty sample.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    })
}
