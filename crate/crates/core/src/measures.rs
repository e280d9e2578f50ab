//! Joint degree distribution, ANND `Φ_n(k)`, ANNR `Θ_n(k)`, and the
//! regularity diagnostics comparing an empirical sequence with its law.
//!
//! Everything here works on directed edges (see [`DegreeGraph`]), so a
//! self-loop at `i` contributes `D_i` to its own ANND and `F_n*(D_i)` to its
//! own ANNR. Sums are accumulated in 128-bit integers and divided once, so
//! the formula route and a direct per-stub average agree bit for bit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::degree_sequences::DegreeSequence;
use crate::distributions::{d1, dtv, Distance, FloorParetoLaw};
use crate::error::{Error, Result};
use crate::graphs::DegreeGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Annd,
    Annr,
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureKind::Annd => "annd",
            MeasureKind::Annr => "annr",
        })
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "annd" => Ok(MeasureKind::Annd),
            "annr" => Ok(MeasureKind::Annr),
            other => Err(Error::InvalidParameter(format!("unknown measure {other:?}"))),
        }
    }
}

/// Per-degree values of `Φ_n` or `Θ_n`.
///
/// Only degrees present in the graph are stored; any other `k` reads as
/// `(0.0, false)`, the zero convention for absent degrees. Degree 0 is never
/// present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingCurve {
    kind: MeasureKind,
    points: Vec<(u64, f64)>,
}

impl MixingCurve {
    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// Present degrees and their values, increasing in `k`.
    pub fn points(&self) -> &[(u64, f64)] {
        &self.points
    }

    /// `(value, present)`.
    pub fn get(&self, k: u64) -> (f64, bool) {
        match self.points.binary_search_by_key(&k, |p| p.0) {
            Ok(i) => (self.points[i].1, true),
            Err(_) => (0.0, false),
        }
    }

    pub fn value(&self, k: u64) -> f64 {
        self.get(k).0
    }

    pub fn is_present(&self, k: u64) -> bool {
        self.get(k).1
    }

    pub fn max_degree(&self) -> u64 {
        self.points.last().map_or(0, |p| p.0)
    }

    /// CSV with columns `k,value,present`, one row for every `k` from 1 to the
    /// largest present degree.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,value,present")?;
        let mut it = self.points.iter().peekable();
        for k in 1..=self.max_degree() {
            match it.peek() {
                Some(&&(pk, v)) if pk == k => {
                    writeln!(w, "{k},{v},true")?;
                    it.next();
                }
                _ => writeln!(w, "{k},0,false")?,
            }
        }
        Ok(())
    }
}

/// Both curves of one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingCurves {
    pub annd: MixingCurve,
    pub annr: MixingCurve,
}

impl MixingCurves {
    pub fn get(&self, kind: MeasureKind) -> &MixingCurve {
        match kind {
            MeasureKind::Annd => &self.annd,
            MeasureKind::Annr => &self.annr,
        }
    }
}

/// Distinct positive degrees with node counts and cumulative stub counts.
struct DegreeClasses {
    degrees: Vec<u64>,
    node_counts: Vec<u64>,
    /// `cumulative_stubs[c] = Σ_{classes ≤ c} k n_k = L_n F_n*(k_c)`.
    cumulative_stubs: Vec<u128>,
    class_of: Vec<u32>,
}

const NO_CLASS: u32 = u32::MAX;

impl DegreeClasses {
    fn new(node_degrees: &[u64]) -> Self {
        let mut degrees: Vec<u64> = node_degrees.iter().copied().filter(|&d| d > 0).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut node_counts = vec![0u64; degrees.len()];
        let class_of: Vec<u32> = node_degrees
            .iter()
            .map(|&d| {
                if d == 0 {
                    NO_CLASS
                } else {
                    let c = degrees.binary_search(&d).expect("degree was collected");
                    node_counts[c] += 1;
                    c as u32
                }
            })
            .collect();
        let mut acc = 0u128;
        let cumulative_stubs = degrees
            .iter()
            .zip(&node_counts)
            .map(|(&k, &c)| {
                acc += u128::from(k) * u128::from(c);
                acc
            })
            .collect();
        Self {
            degrees,
            node_counts,
            cumulative_stubs,
            class_of,
        }
    }
}

/// Computes `Φ_n` and `Θ_n` in one pass over the directed edges.
///
/// `Φ_n(k) = Σ_{i→j, D_i=k} D_j / (k n_k)` and
/// `Θ_n(k) = Σ_{i→j, D_i=k} F_n*(D_j) / (k n_k)`, which equal
/// `Σ_ℓ h_n(k,ℓ) ℓ / f_n*(k)` and `Σ_ℓ h_n(k,ℓ) F_n*(ℓ) / f_n*(k)`.
pub fn mixing_curves<G: DegreeGraph + ?Sized>(graph: &G) -> MixingCurves {
    let degrees = graph.degrees();
    let classes = DegreeClasses::new(degrees);
    let mut annd_num = vec![0u128; classes.degrees.len()];
    let mut annr_num = vec![0u128; classes.degrees.len()];
    graph.for_each_directed_edge(|i, j, m| {
        let ci = classes.class_of[i] as usize;
        let cj = classes.class_of[j] as usize;
        let m = u128::from(m);
        annd_num[ci] += m * u128::from(degrees[j]);
        annr_num[ci] += m * classes.cumulative_stubs[cj];
    });
    let total = graph.stub_total() as f64;
    let mut annd = Vec::with_capacity(classes.degrees.len());
    let mut annr = Vec::with_capacity(classes.degrees.len());
    for (c, &k) in classes.degrees.iter().enumerate() {
        let stubs = (u128::from(k) * u128::from(classes.node_counts[c])) as f64;
        annd.push((k, annd_num[c] as f64 / stubs));
        annr.push((k, annr_num[c] as f64 / (stubs * total)));
    }
    MixingCurves {
        annd: MixingCurve {
            kind: MeasureKind::Annd,
            points: annd,
        },
        annr: MixingCurve {
            kind: MeasureKind::Annr,
            points: annr,
        },
    }
}

pub fn annd<G: DegreeGraph + ?Sized>(graph: &G) -> MixingCurve {
    mixing_curves(graph).annd
}

pub fn annr<G: DegreeGraph + ?Sized>(graph: &G) -> MixingCurve {
    mixing_curves(graph).annr
}

/// `h_n(k, ℓ)`: the fraction of directed edges from a degree-`k` node to a
/// degree-`ℓ` node, stored as integer directed-edge counts over `L_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDegreeDistribution {
    counts: HashMap<(u64, u64), u64>,
    stub_total: u64,
}

pub fn joint_degree_density<G: DegreeGraph + ?Sized>(graph: &G) -> Result<JointDegreeDistribution> {
    if graph.stub_total() == 0 {
        return Err(Error::EmptyGraph);
    }
    let degrees = graph.degrees();
    let mut counts = HashMap::new();
    graph.for_each_directed_edge(|i, j, m| {
        *counts.entry((degrees[i], degrees[j])).or_insert(0) += m;
    });
    Ok(JointDegreeDistribution {
        counts,
        stub_total: graph.stub_total(),
    })
}

impl JointDegreeDistribution {
    pub fn stub_total(&self) -> u64 {
        self.stub_total
    }

    /// Directed-edge count behind `h_n(k, ℓ)`.
    pub fn count(&self, k: u64, l: u64) -> u64 {
        self.counts.get(&(k, l)).copied().unwrap_or(0)
    }

    pub fn h(&self, k: u64, l: u64) -> f64 {
        self.count(k, l) as f64 / self.stub_total as f64
    }

    /// Nonzero entries sorted by `(k, ℓ)`.
    pub fn entries(&self) -> Vec<((u64, u64), u64)> {
        let mut v: Vec<_> = self.counts.iter().map(|(&key, &c)| (key, c)).collect();
        v.sort_unstable();
        v
    }

    /// `Σ_ℓ h_n(k, ℓ)` as directed-edge counts per `k`; equals `k n_k`.
    pub fn marginal_counts(&self) -> BTreeMap<u64, u64> {
        let mut m = BTreeMap::new();
        for (&(k, _), &c) in &self.counts {
            *m.entry(k).or_insert(0) += c;
        }
        m
    }

    /// `Φ_n(k) = Σ_ℓ h_n(k,ℓ) ℓ / f_n*(k)`, evaluated from the joint counts.
    pub fn annd(&self) -> MixingCurve {
        let mut num: BTreeMap<u64, (u128, u128)> = BTreeMap::new();
        for (&(k, l), &c) in &self.counts {
            let e = num.entry(k).or_insert((0, 0));
            e.0 += u128::from(c) * u128::from(l);
            e.1 += u128::from(c);
        }
        let points = num
            .into_iter()
            .filter(|&(k, _)| k > 0)
            .map(|(k, (s, m))| (k, s as f64 / m as f64))
            .collect();
        MixingCurve {
            kind: MeasureKind::Annd,
            points,
        }
    }

    /// `Θ_n(k) = Σ_ℓ h_n(k,ℓ) F_n*(ℓ) / f_n*(k)`, with `F_n*` rebuilt from the
    /// marginals.
    pub fn annr(&self) -> MixingCurve {
        let marg = self.marginal_counts();
        let mut cum = BTreeMap::new();
        let mut acc = 0u128;
        for (&k, &c) in &marg {
            acc += u128::from(c);
            cum.insert(k, acc);
        }
        let mut num: BTreeMap<u64, u128> = BTreeMap::new();
        for (&(k, l), &c) in &self.counts {
            *num.entry(k).or_insert(0) += u128::from(c) * cum[&l];
        }
        let total = self.stub_total as f64;
        let points = num
            .into_iter()
            .filter(|&(k, _)| k > 0)
            .map(|(k, s)| (k, s as f64 / (marg[&k] as f64 * total)))
            .collect();
        MixingCurve {
            kind: MeasureKind::Annr,
            points,
        }
    }
}

/// Distances between an empirical degree sequence and its law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityDiagnostics {
    /// `d₁(f_n, f)`.
    pub d1_f: Distance,
    /// `d₁(f_n*, f*)`; `None` when `γ ≤ 2`, where `f*` has no finite mean.
    pub d1_fstar: Option<Distance>,
    /// `d_tv(f_n*, f*)`.
    pub dtv_fstar: Distance,
}

/// Compares `f_n`, `f_n*` with `f`, `f*`; the laws are materialized up to the
/// largest observed degree and their tails enter the reported intervals.
pub fn regularity_diagnostics(
    seq: &DegreeSequence,
    law: &FloorParetoLaw,
) -> Result<RegularityDiagnostics> {
    let k_max = seq.max_degree().max(1);
    let f = law.truncated_density(k_max)?;
    let fstar = law.truncated_size_biased_density(k_max)?;
    let fn_ = seq.empirical_density();
    let fn_star = seq.size_biased_empirical();
    let d1_fstar = (law.gamma() > 2.0).then(|| d1(&fn_star, &fstar));
    Ok(RegularityDiagnostics {
        d1_f: d1(&fn_, &f),
        d1_fstar,
        dtv_fstar: dtv(&fn_star, &fstar),
    })
}
