//! Exhaustive enumeration of stub matchings and exact (rational) curve
//! oracles shared by the small-graph suites.
#![allow(dead_code)]

use degcorr::MultiGraph;
use num_rational::Ratio;

pub type Q = Ratio<u128>;

/// Non-increasing sequences of positive integers summing to `total`.
pub fn partitions(total: u64, max_part: u64) -> Vec<Vec<u64>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn small_sequences() -> Vec<Vec<u64>> {
    (1..=5).flat_map(|h| partitions(2 * h, 2 * h)).collect()
}

/// Every perfect matching of stubs `0..l`, as lists of stub pairs.
pub fn matchings(l: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free.remove(idx);
            cur.push((a, b));
            go(free, cur, out);
            cur.pop();
            free.insert(idx, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    go(&mut (0..l).collect(), &mut Vec::new(), &mut out);
    out
}

pub fn stub_owners(degrees: &[u64]) -> Vec<usize> {
    degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat(i).take(d as usize))
        .collect()
}

pub fn graph_of(degrees: &[u64], matching: &[(usize, usize)]) -> MultiGraph {
    let owner = stub_owners(degrees);
    MultiGraph::from_edges(
        degrees.len(),
        matching.iter().map(|&(a, b)| (owner[a], owner[b], 1)),
    )
    .unwrap()
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Per-node neighbour lists read off the stubs: each stub contributes its
/// partner's owner, so a self-loop lists the node itself twice.
pub fn stub_neighbours(degrees: &[u64], matching: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let owner = stub_owners(degrees);
    let mut nbrs = vec![Vec::new(); degrees.len()];
    for &(a, b) in matching {
        nbrs[owner[a]].push(owner[b]);
        nbrs[owner[b]].push(owner[a]);
    }
    nbrs
}

/// Direct averaging: for each degree-`k` node, average the partner degrees
/// (or partner ranks `F_n*`) over its stubs, then average over those nodes.
pub fn direct_curves(degrees: &[u64], matching: &[(usize, usize)]) -> (Vec<(u64, Q)>, Vec<(u64, Q)>) {
    let l: u128 = degrees.iter().map(|&d| u128::from(d)).sum();
    let rank = |d: u64| {
        let below: u128 = degrees.iter().filter(|&&x| x <= d).map(|&x| u128::from(x)).sum();
        Q::new(below, l)
    };
    let nbrs = stub_neighbours(degrees, matching);
    let mut ks: Vec<u64> = degrees.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let mut phi = Vec::new();
    let mut theta = Vec::new();
    for &k in &ks {
        let nodes: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == k).collect();
        let node_mean = |f: &dyn Fn(usize) -> Q| {
            nodes
                .iter()
                .map(|&i| nbrs[i].iter().map(|&j| f(j)).sum::<Q>() / Q::from(u128::from(k)))
                .sum::<Q>()
                / Q::from(nodes.len() as u128)
        };
        phi.push((k, node_mean(&|j| Q::from(u128::from(degrees[j])))));
        theta.push((k, node_mean(&|j| rank(degrees[j]))));
    }
    (phi, theta)
}

