//! Exhaustive checks on every degree sequence with at most ten stubs: all
//! perfect matchings are enumerated, so expectations and curve values are
//! known exactly.

use std::collections::HashMap;

use degcorr::graphs::{conditional_edge_expectation, pair_stubs, repeated_cm};
use degcorr::measures::{annd, annr, joint_degree_density};
use degcorr::seeding::stream;
use degcorr::{DegreeSequence, Error, MixingCurve, MultiGraph};

mod common;
use common::{direct_curves, graph_of, matchings, small_sequences, to_f64, Q};

fn assert_curve_eq(curve: &MixingCurve, exact: &[(u64, Q)], what: &str) {
    let expected: Vec<(u64, f64)> = exact.iter().map(|&(k, q)| (k, to_f64(q))).collect();
    assert_eq!(curve.points(), &expected[..], "{what}");
}

#[test]
fn formula_curves_equal_direct_averaging_on_every_small_matching() {
    let mut graphs_checked = 0;
    for degrees in small_sequences() {
        let l = degrees.iter().sum::<u64>() as usize;
        for m in matchings(l) {
            let g = graph_of(&degrees, &m);
            let (phi, theta) = direct_curves(&degrees, &m);
            let ctx = format!("{degrees:?} {m:?}");
            assert_curve_eq(&annd(&g), &phi, &ctx);
            assert_curve_eq(&annr(&g), &theta, &ctx);
            let h = joint_degree_density(&g).unwrap();
            assert_curve_eq(&h.annd(), &phi, &ctx);
            assert_curve_eq(&h.annr(), &theta, &ctx);
            graphs_checked += 1;
        }
    }
    // 945 matchings on ten stubs alone.
    assert!(graphs_checked > 5000, "{graphs_checked}");
}

#[test]
fn joint_density_marginals_symmetry_and_stub_average_identity_are_exact() {
    for degrees in small_sequences() {
        let l = degrees.iter().sum::<u64>();
        let seq = DegreeSequence::new(degrees.clone()).unwrap();
        let counts = seq.degree_counts();
        for m in matchings(l as usize) {
            let g = graph_of(&degrees, &m);
            let h = joint_degree_density(&g).unwrap();
            for ((k, l2), c) in h.entries() {
                assert_eq!(c, h.count(l2, k));
            }
            let marg = h.marginal_counts();
            for (&k, &nk) in &counts {
                assert_eq!(marg[&k], k * nk, "{degrees:?}");
            }
            // Σ_k f*(k) Φ(k) = Σ_{k,ℓ} h(k,ℓ) ℓ, both over L.
            let lhs: Q = annd(&g)
                .points()
                .iter()
                .map(|&(k, _)| {
                    let num: u128 = h
                        .entries()
                        .iter()
                        .filter(|e| e.0 .0 == k)
                        .map(|e| u128::from(e.1) * u128::from(e.0 .1))
                        .sum();
                    Q::new(u128::from(k * counts[&k]), u128::from(l))
                        * Q::new(num, u128::from(k * counts[&k]))
                })
                .sum();
            let rhs: Q = h
                .entries()
                .iter()
                .map(|&((_, l2), c)| Q::new(u128::from(c) * u128::from(l2), u128::from(l)))
                .sum();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn enumerated_edge_expectation_matches_the_closed_form() {
    for degrees in small_sequences() {
        let l = degrees.iter().sum::<u64>() as usize;
        let seq = DegreeSequence::new(degrees.clone()).unwrap();
        let all = matchings(l);
        let n = degrees.len();
        let mut sums = vec![vec![0u128; n]; n];
        for m in &all {
            let g = graph_of(&degrees, m);
            for (i, row) in sums.iter_mut().enumerate() {
                for (j, s) in row.iter_mut().enumerate() {
                    *s += u128::from(g.multiplicity(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let exact = Q::new(sums[i][j], all.len() as u128);
                let (di, dj) = (u128::from(degrees[i]), u128::from(degrees[j]));
                let closed = if i == j {
                    Q::new(di * (di - 1), l as u128 - 1)
                } else {
                    Q::new(di * dj, l as u128 - 1)
                };
                assert_eq!(exact, closed, "{degrees:?} ({i},{j})");
                let lib = conditional_edge_expectation(&seq, i, j).unwrap();
                assert!((lib - to_f64(closed)).abs() <= 1e-15 * to_f64(closed).max(1.0));
            }
        }
    }
}

/// Compares pairing frequencies of every distinct multigraph with the
/// enumeration, each within four standard errors.
fn check_pairing_frequencies(degrees: &[u64], trials: u32, seed: u64) {
    let l = degrees.iter().sum::<u64>() as usize;
    let all = matchings(l);
    let mut exact: HashMap<Vec<(u32, u32, u64)>, u64> = HashMap::new();
    for m in &all {
        *exact.entry(graph_of(degrees, m).entries().to_vec()).or_default() += 1;
    }
    let seq = DegreeSequence::new(degrees.to_vec()).unwrap();
    let mut rng = stream(seed);
    let mut seen: HashMap<Vec<(u32, u32, u64)>, u64> = HashMap::new();
    for _ in 0..trials {
        let g = MultiGraph::from_matching(&pair_stubs(&seq, &mut rng).unwrap());
        *seen.entry(g.entries().to_vec()).or_default() += 1;
    }
    assert!(
        seen.keys().all(|g| exact.contains_key(g)),
        "pairing produced a graph outside the enumeration"
    );
    for (g, &count) in &exact {
        let p = count as f64 / all.len() as f64;
        let freq = seen.get(g).copied().unwrap_or(0) as f64 / f64::from(trials);
        let sigma = (p * (1.0 - p) / f64::from(trials)).sqrt();
        assert!(
            (freq - p).abs() <= 4.0 * sigma,
            "{degrees:?}: {g:?} freq {freq} vs {p} (sigma {sigma})"
        );
    }
}

#[test]
fn pairing_frequencies_match_enumeration() {
    for (i, degrees) in [
        vec![2, 2],
        vec![3, 2, 1],
        vec![1, 1, 1, 1],
        vec![2, 2, 2],
        vec![3, 3, 2, 2],
        vec![4, 2, 2, 1, 1],
    ]
    .iter()
    .enumerate()
    {
        check_pairing_frequencies(degrees, 100_000, 1000 + i as u64);
    }
}

#[test]
fn double_edge_probability_for_two_degree_two_nodes() {
    let seq = DegreeSequence::new(vec![2, 2]).unwrap();
    let mut rng = stream(5);
    let trials = 100_000;
    let doubles = (0..trials)
        .filter(|_| {
            MultiGraph::from_matching(&pair_stubs(&seq, &mut rng).unwrap()).multiplicity(0, 1) == 2
        })
        .count();
    let p = 2.0 / 3.0;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((doubles as f64 / trials as f64 - p).abs() <= 4.0 * sigma);
}

#[test]
fn monte_carlo_edge_means_match_conditional_expectation() {
    let seq = DegreeSequence::new(vec![3, 2, 1]).unwrap();
    let trials = 100_000;
    let mut rng = stream(77);
    let mut sum = [[0f64; 3]; 3];
    let mut sum_sq = [[0f64; 3]; 3];
    for _ in 0..trials {
        let g = MultiGraph::from_matching(&pair_stubs(&seq, &mut rng).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let x = g.multiplicity(i, j) as f64;
                sum[i][j] += x;
                sum_sq[i][j] += x * x;
            }
        }
    }
    let t = f64::from(trials);
    for i in 0..3 {
        for j in 0..3 {
            let mean = sum[i][j] / t;
            let var = (sum_sq[i][j] / t - mean * mean).max(0.0);
            let expect = conditional_edge_expectation(&seq, i, j).unwrap();
            let se = (var / t).sqrt().max(1e-12);
            assert!(
                (mean - expect).abs() <= 4.0 * se,
                "({i},{j}): {mean} vs {expect} (se {se})"
            );
        }
    }
}

#[test]
fn repeated_pairing_attempt_counts() {
    // Matchings of [1, 1, 2]: a loop at the degree-2 node (1 of 3) or a path
    // (2 of 3), so attempts are geometric with mean 3/2.
    let seq = DegreeSequence::new(vec![1, 1, 2]).unwrap();
    let mut rng = stream(31);
    let runs = 20_000;
    let total: u64 = (0..runs)
        .map(|_| u64::from(repeated_cm(&seq, &mut rng, 1000).unwrap().attempts))
        .sum();
    let mean = total as f64 / f64::from(runs);
    let sigma = (0.75f64 / f64::from(runs)).sqrt();
    assert!((mean - 1.5).abs() <= 3.0 * sigma, "{mean}");

    let seq = DegreeSequence::new(vec![1, 1]).unwrap();
    assert_eq!(repeated_cm(&seq, &mut rng, 1).unwrap().attempts, 1);

    // Two degree-2 nodes always give a double edge or two loops.
    let seq = DegreeSequence::new(vec![2, 2]).unwrap();
    assert!(matches!(
        repeated_cm(&seq, &mut rng, 50),
        Err(Error::RepeatedPairingExhausted { attempts: 50 })
    ));
}
