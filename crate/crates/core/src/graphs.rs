//! The configuration model: uniform stub pairing (CM), its erased simple
//! graph (ECM), and pairing repeated until simple (RCM).
//!
//! Randomness is consumed in one fixed order: the stub array
//! `[0; D_0], [1; D_1], ...` is Fisher–Yates shuffled with
//! [`SliceRandom::shuffle`] and then split into consecutive pairs. A uniform
//! shuffle paired consecutively is a uniform perfect matching.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::degree_sequences::DegreeSequence;
use crate::error::{invalid, Error, Result};

/// Read access shared by every graph representation the measures accept.
///
/// Directed-edge iteration follows the convention that an undirected edge
/// `{i, j}` appears as both `i → j` and `j → i`, and a self-loop at `i`
/// appears twice as `i → i`.
pub trait DegreeGraph {
    fn node_count(&self) -> usize;

    /// Degrees the measures use; realized degrees for simple graphs.
    fn degrees(&self) -> &[u64];

    fn stub_total(&self) -> u64;

    /// Calls `visit(i, j, count)` for directed edges `i → j`; the counts over
    /// all calls for a given `(i, j)` sum to `G_ij`.
    fn for_each_directed_edge<F: FnMut(usize, usize, u64)>(&self, visit: F);
}

/// The raw outcome of stub pairing: one entry per undirected edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StubMatching {
    degrees: Vec<u64>,
    pairs: Vec<(u32, u32)>,
    total: u64,
}

impl StubMatching {
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

impl DegreeGraph for StubMatching {
    fn node_count(&self) -> usize {
        self.degrees.len()
    }

    fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    fn stub_total(&self) -> u64 {
        self.total
    }

    fn for_each_directed_edge<F: FnMut(usize, usize, u64)>(&self, mut visit: F) {
        for &(u, v) in &self.pairs {
            visit(u as usize, v as usize, 1);
            visit(v as usize, u as usize, 1);
        }
    }
}

fn check_node_count(n: usize) -> Result<()> {
    if n > u32::MAX as usize {
        return Err(invalid(format!("{n} nodes exceed the u32 node-id range")));
    }
    Ok(())
}

/// Uniformly pairs the `L_n` stubs of `seq`.
pub fn pair_stubs<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> Result<StubMatching> {
    if seq.total() % 2 == 1 {
        return Err(Error::OddStubTotal(seq.total()));
    }
    check_node_count(seq.len())?;
    let mut stubs = Vec::with_capacity(seq.total() as usize);
    for (i, &d) in seq.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat(i as u32).take(d as usize));
    }
    stubs.shuffle(rng);
    let pairs = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    Ok(StubMatching {
        degrees: seq.degrees().to_vec(),
        pairs,
        total: seq.total(),
    })
}

/// CM multigraph from a uniform stub pairing.
pub fn pair_configuration_model<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
) -> Result<MultiGraph> {
    Ok(MultiGraph::from_matching(&pair_stubs(seq, rng)?))
}

/// `E[G_ij | D]`: `D_i D_j / (L_n - 1)` off the diagonal and
/// `D_i (D_i - 1) / (L_n - 1)` on it. Nodes are zero-based.
pub fn conditional_edge_expectation(seq: &DegreeSequence, i: usize, j: usize) -> Result<f64> {
    let l = seq.total();
    if l < 2 {
        return Err(invalid("conditional expectation needs L_n >= 2"));
    }
    let d = seq.degrees();
    if i >= d.len() || j >= d.len() {
        return Err(invalid(format!("node index out of range for n={}", d.len())));
    }
    let num = if i == j {
        d[i] as f64 * (d[i] as f64 - 1.0)
    } else {
        d[i] as f64 * d[j] as f64
    };
    Ok(num / (l as f64 - 1.0))
}

/// Symmetric edge multiplicities stored sparsely by `(min, max)`.
///
/// Entries `(i, j, m)` have `i ≤ j`; for `i < j`, `m = G_ij = G_ji`, and for
/// `i = j`, `m = G_ii`, twice the number of self-loops at `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    degrees: Vec<u64>,
    entries: Vec<(u32, u32, u64)>,
    stub_total: u64,
}

impl MultiGraph {
    pub fn from_matching(m: &StubMatching) -> Self {
        let mut keys: Vec<u64> = m
            .pairs
            .iter()
            .map(|&(u, v)| {
                let (a, b) = if u <= v { (u, v) } else { (v, u) };
                (u64::from(a) << 32) | u64::from(b)
            })
            .collect();
        keys.sort_unstable();
        let mut entries: Vec<(u32, u32, u64)> = Vec::new();
        for key in keys {
            let (a, b) = ((key >> 32) as u32, key as u32);
            let step = if a == b { 2 } else { 1 };
            match entries.last_mut() {
                Some(e) if e.0 == a && e.1 == b => e.2 += step,
                _ => entries.push((a, b, step)),
            }
        }
        Self {
            degrees: m.degrees.clone(),
            entries,
            stub_total: m.total,
        }
    }

    /// Builds a multigraph on `n` nodes from undirected edges `(u, v, count)`;
    /// a self-loop line `(u, u, s)` adds `s` loops, i.e. `2s` to `G_uu`.
    /// Repeated pairs accumulate.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        check_node_count(n)?;
        let mut raw: Vec<(u32, u32, u64)> = Vec::new();
        for (u, v, count) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u}, {v}) outside node range 0..{n}")));
            }
            if count == 0 {
                continue;
            }
            let (a, b) = if u <= v { (u, v) } else { (v, u) };
            let m = if a == b { 2 * count } else { count };
            raw.push((a as u32, b as u32, m));
        }
        raw.sort_unstable_by_key(|e| (e.0, e.1));
        let mut entries: Vec<(u32, u32, u64)> = Vec::with_capacity(raw.len());
        for e in raw {
            match entries.last_mut() {
                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
                _ => entries.push(e),
            }
        }
        let mut degrees = vec![0u64; n];
        for &(a, b, m) in &entries {
            if a == b {
                degrees[a as usize] += m;
            } else {
                degrees[a as usize] += m;
                degrees[b as usize] += m;
            }
        }
        let stub_total = degrees.iter().sum();
        Ok(Self {
            degrees,
            entries,
            stub_total,
        })
    }

    pub fn entries(&self) -> &[(u32, u32, u64)] {
        &self.entries
    }

    /// `G_ij` for zero-based nodes.
    pub fn multiplicity(&self, i: usize, j: usize) -> u64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let key = (a as u32, b as u32);
        self.entries
            .binary_search_by_key(&key, |e| (e.0, e.1))
            .map_or(0, |idx| self.entries[idx].2)
    }

    pub fn self_loop_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.0 == e.1)
            .map(|e| e.2 / 2)
            .sum()
    }

    pub fn is_simple(&self) -> bool {
        self.entries.iter().all(|e| e.0 != e.1 && e.2 == 1)
    }

    /// Removes self-loops and collapses multiple edges.
    pub fn erase(&self) -> SimpleGraph {
        let n = self.degrees.len();
        let mut realized = vec![0u64; n];
        let mut edges = Vec::with_capacity(self.entries.len());
        for &(a, b, _) in &self.entries {
            if a != b {
                edges.push((a, b));
                realized[a as usize] += 1;
                realized[b as usize] += 1;
            }
        }
        let erased: Vec<u64> = self
            .degrees
            .iter()
            .zip(&realized)
            .map(|(&d, &r)| d - r)
            .collect();
        let erased_total = erased.iter().sum();
        SimpleGraph {
            original_degrees: self.degrees.clone(),
            realized_degrees: realized,
            erased,
            edges,
            erased_total,
        }
    }

    /// One `u v m` line per stored pair, `u u s` (loops) for self-loops.
    pub fn write_edge_list<W: Write>(&self, mut w: W, seed: Option<u64>) -> Result<()> {
        write!(w, "# n={} L={}", self.degrees.len(), self.stub_total)?;
        if let Some(s) = seed {
            write!(w, " seed={s}")?;
        }
        writeln!(w)?;
        for &(a, b, m) in &self.entries {
            let count = if a == b { m / 2 } else { m };
            writeln!(w, "{a} {b} {count}")?;
        }
        Ok(())
    }

    /// Parses the edge-list format. Lines are `u v` or `u v count` with
    /// zero-based node ids; `#` lines are comments, and a header `n=` fixes
    /// the node count (otherwise it is the largest id plus one).
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut declared_n = None;
        let mut edges = Vec::new();
        let mut max_id = None::<usize>;
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    if let Some(v) = field.strip_prefix("n=") {
                        declared_n = Some(v.parse::<usize>().map_err(|_| Error::Parse {
                            line: lineno,
                            message: format!("bad node count {v:?}"),
                        })?);
                    }
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 2 && fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `u v [count]`, got {trimmed:?}"),
                });
            }
            let parse = |s: &str, what: &str| {
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad {what} {s:?}"),
                })
            };
            let u = parse(fields[0], "node id")? as usize;
            let v = parse(fields[1], "node id")? as usize;
            let count = match fields.get(2) {
                Some(c) => parse(c, "multiplicity")?,
                None => 1,
            };
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            edges.push((u, v, count));
        }
        let n = match (declared_n, max_id) {
            (Some(n), Some(m)) if m >= n => {
                return Err(invalid(format!("node id {m} exceeds declared n={n}")))
            }
            (Some(n), _) => n,
            (None, Some(m)) => m + 1,
            (None, None) => 0,
        };
        Self::from_edges(n, edges)
    }
}

impl DegreeGraph for MultiGraph {
    fn node_count(&self) -> usize {
        self.degrees.len()
    }

    fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    fn stub_total(&self) -> u64 {
        self.stub_total
    }

    fn for_each_directed_edge<F: FnMut(usize, usize, u64)>(&self, mut visit: F) {
        for &(a, b, m) in &self.entries {
            if a == b {
                visit(a as usize, a as usize, m);
            } else {
                visit(a as usize, b as usize, m);
                visit(b as usize, a as usize, m);
            }
        }
    }
}

/// A simple graph derived from a CM multigraph, remembering how many stubs
/// each node lost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    original_degrees: Vec<u64>,
    realized_degrees: Vec<u64>,
    erased: Vec<u64>,
    edges: Vec<(u32, u32)>,
    erased_total: u64,
}

impl SimpleGraph {
    /// Unordered pairs `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn original_degrees(&self) -> &[u64] {
        &self.original_degrees
    }

    /// `D̂_i`.
    pub fn realized_degrees(&self) -> &[u64] {
        &self.realized_degrees
    }

    /// `Y_i = D_i - D̂_i`.
    pub fn erased_per_node(&self) -> &[u64] {
        &self.erased
    }

    /// `E_n = Σ Y_i = L_n - L̂_n`.
    pub fn erased_total(&self) -> u64 {
        self.erased_total
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.edges.binary_search(&(a as u32, b as u32)).is_ok()
    }

    pub fn to_multigraph(&self) -> MultiGraph {
        MultiGraph::from_edges(
            self.realized_degrees.len(),
            self.edges.iter().map(|&(a, b)| (a as usize, b as usize, 1)),
        )
        .expect("edges are in range")
    }
}

impl DegreeGraph for SimpleGraph {
    fn node_count(&self) -> usize {
        self.realized_degrees.len()
    }

    fn degrees(&self) -> &[u64] {
        &self.realized_degrees
    }

    fn stub_total(&self) -> u64 {
        2 * self.edges.len() as u64
    }

    fn for_each_directed_edge<F: FnMut(usize, usize, u64)>(&self, mut visit: F) {
        for &(a, b) in &self.edges {
            visit(a as usize, b as usize, 1);
            visit(b as usize, a as usize, 1);
        }
    }
}

/// A simple realization found by repeated pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatedOutcome {
    pub graph: SimpleGraph,
    pub attempts: u32,
}

pub const DEFAULT_MAX_ATTEMPTS: u32 = 1000;

/// Re-pairs until the multigraph is simple, at most `max_attempts` times.
pub fn repeated_cm<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
    max_attempts: u32,
) -> Result<RepeatedOutcome> {
    if max_attempts == 0 {
        return Err(invalid("max_attempts must be >= 1"));
    }
    for attempt in 1..=max_attempts {
        let mg = pair_configuration_model(seq, rng)?;
        if mg.is_simple() {
            return Ok(RepeatedOutcome {
                graph: mg.erase(),
                attempts: attempt,
            });
        }
    }
    Err(Error::RepeatedPairingExhausted {
        attempts: max_attempts,
    })
}
