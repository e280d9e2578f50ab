use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree_sequences::sample_iid_degrees;
use crate::distributions::FloorParetoLaw;
use crate::error::{invalid, Error, Result};
use crate::graphs::{pair_stubs, repeated_cm, MultiGraph, DEFAULT_MAX_ATTEMPTS};
use crate::measures::{mixing_curves, MeasureKind, MixingCurves};
use crate::seeding::{replica_seed, stream};

/// Which configuration-model variant an ensemble samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Multigraph from uniform stub pairing.
    Cm,
    /// CM with self-loops removed and multi-edges collapsed.
    Ecm,
    /// CM re-paired until simple.
    Rcm,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Cm => "cm",
            Model::Ecm => "ecm",
            Model::Rcm => "rcm",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm" => Ok(Model::Cm),
            "ecm" => Ok(Model::Ecm),
            "rcm" => Ok(Model::Rcm),
            other => Err(invalid(format!("unknown model {other:?} (expected cm, ecm or rcm)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub gamma: f64,
    pub n: usize,
    pub replicas: usize,
    pub model: Model,
    pub seed: u64,
    pub measures: Vec<MeasureKind>,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u32,
}

fn default_max_attempts() -> u32 {
    DEFAULT_MAX_ATTEMPTS
}

impl EnsembleConfig {
    /// Both measures, CM, and the default RCM attempt budget.
    pub fn new(gamma: f64, n: usize, replicas: usize, seed: u64) -> Self {
        Self {
            gamma,
            n,
            replicas,
            model: Model::Cm,
            seed,
            measures: vec![MeasureKind::Annd, MeasureKind::Annr],
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn with_model(mut self, model: Model) -> Self {
        self.model = model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        FloorParetoLaw::new(self.gamma)?;
        if self.n == 0 {
            return Err(invalid("n must be >= 1"));
        }
        if self.replicas == 0 {
            return Err(invalid("replicas must be >= 1"));
        }
        if self.measures.is_empty() {
            return Err(invalid("at least one measure is required"));
        }
        if self.max_attempts == 0 {
            return Err(invalid("max_attempts must be >= 1"));
        }
        if self.model == Model::Rcm && self.gamma <= 2.0 {
            return Err(invalid(format!(
                "the repeated configuration model needs a finite second moment (gamma > 2); \
                 got gamma = {}: the probability of a simple graph vanishes as n grows",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// One aggregated degree of an ensemble curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub k: u64,
    /// Sum of values over completed replicas, absent degrees counting as 0,
    /// divided by the number of completed replicas.
    pub zero_filled_mean: f64,
    /// Mean over the replicas where degree `k` is present.
    pub corrected_mean: Option<f64>,
    pub presence_count: usize,
    pub presence_fraction: f64,
    /// Sample standard deviation over the replicas where `k` is present.
    pub corrected_std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub measure: MeasureKind,
    /// Rows for every degree present in at least one replica.
    pub rows: Vec<SummaryRow>,
    completed: usize,
}

impl MeasureSummary {
    /// The row for `k`, or an all-zero row when no replica contains `k`.
    pub fn row(&self, k: u64) -> SummaryRow {
        match self.rows.binary_search_by_key(&k, |r| r.k) {
            Ok(i) => self.rows[i],
            Err(_) => SummaryRow {
                k,
                zero_filled_mean: 0.0,
                corrected_mean: None,
                presence_count: 0,
                presence_fraction: 0.0,
                corrected_std: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub config: EnsembleConfig,
    pub replica_seeds: Vec<u64>,
    /// Replicas that produced a graph.
    pub completed: usize,
    /// Indices of RCM replicas that ran out of attempts.
    pub failed_replicas: Vec<usize>,
    pub measures: Vec<MeasureSummary>,
}

impl EnsembleSummary {
    pub fn measure(&self, kind: MeasureKind) -> Option<&MeasureSummary> {
        self.measures.iter().find(|m| m.measure == kind)
    }

    /// Columns `k,measure,zero_filled_mean,corrected_mean,presence_count,presence_fraction`;
    /// an undefined corrected mean is left empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "k,measure,zero_filled_mean,corrected_mean,presence_count,presence_fraction"
        )?;
        for m in &self.measures {
            for r in &m.rows {
                let corrected = r.corrected_mean.map(|v| v.to_string()).unwrap_or_default();
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.k, m.measure, r.zero_filled_mean, corrected, r.presence_count, r.presence_fraction
                )?;
            }
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| Error::Io(e.into()))
    }
}

fn sample_replica(cfg: &EnsembleConfig, law: &FloorParetoLaw, seed: u64) -> Result<Option<MixingCurves>> {
    let mut rng = stream(seed);
    let seq = sample_iid_degrees(cfg.n, law, &mut rng)?;
    match cfg.model {
        Model::Cm => Ok(Some(mixing_curves(&pair_stubs(&seq, &mut rng)?))),
        Model::Ecm => {
            let mg = MultiGraph::from_matching(&pair_stubs(&seq, &mut rng)?);
            Ok(Some(mixing_curves(&mg.erase())))
        }
        Model::Rcm => match repeated_cm(&seq, &mut rng, cfg.max_attempts) {
            Ok(out) => Ok(Some(mixing_curves(&out.graph))),
            Err(Error::RepeatedPairingExhausted { .. }) => Ok(None),
            Err(e) => Err(e),
        },
    }
}

#[derive(Default, Clone, Copy)]
struct Accumulator {
    sum: f64,
    sum_sq: f64,
    count: usize,
}

fn summarize(kind: MeasureKind, replicas: &[MixingCurves], completed: usize) -> MeasureSummary {
    let mut acc: BTreeMap<u64, Accumulator> = BTreeMap::new();
    for curves in replicas {
        for &(k, v) in curves.get(kind).points() {
            let a = acc.entry(k).or_default();
            a.sum += v;
            a.sum_sq += v * v;
            a.count += 1;
        }
    }
    let rows = acc
        .into_iter()
        .map(|(k, a)| {
            let mean = a.sum / a.count as f64;
            let std = (a.count > 1).then(|| {
                let var = (a.sum_sq - a.count as f64 * mean * mean) / (a.count - 1) as f64;
                var.max(0.0).sqrt()
            });
            SummaryRow {
                k,
                zero_filled_mean: a.sum / completed as f64,
                corrected_mean: Some(mean),
                presence_count: a.count,
                presence_fraction: a.count as f64 / completed as f64,
                corrected_std: std,
            }
        })
        .collect();
    MeasureSummary {
        measure: kind,
        rows,
        completed,
    }
}

/// Samples `cfg.replicas` graphs in parallel and aggregates each requested
/// measure with zero-filled and presence-corrected means.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleSummary> {
    cfg.validate()?;
    let law = FloorParetoLaw::new(cfg.gamma)?;
    let replica_seeds: Vec<u64> = (0..cfg.replicas as u64)
        .map(|r| replica_seed(cfg.seed, r))
        .collect();
    let outcomes: Vec<Option<MixingCurves>> = replica_seeds
        .par_iter()
        .map(|&s| sample_replica(cfg, &law, s))
        .collect::<Result<_>>()?;
    let failed_replicas: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.is_none())
        .map(|(i, _)| i)
        .collect();
    let curves: Vec<MixingCurves> = outcomes.into_iter().flatten().collect();
    let completed = curves.len();
    let measures = cfg
        .measures
        .iter()
        .map(|&kind| summarize(kind, &curves, completed))
        .collect();
    Ok(EnsembleSummary {
        config: cfg.clone(),
        replica_seeds,
        completed,
        failed_replicas,
        measures,
    })
}
