//! i.i.d. degree sequences with the parity correction, and their empirical
//! and size-biased empirical distributions.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{DiscreteDistribution, FloorParetoLaw};
use crate::error::{invalid, Error, Result};

/// `n` positive degrees whose total `L_n` is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
    total: u64,
}

impl DegreeSequence {
    /// Validates positivity and even total.
    pub fn new(degrees: Vec<u64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(invalid("degree sequence is empty"));
        }
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(invalid(format!("degree of node {i} is zero")));
        }
        let total = degrees
            .iter()
            .try_fold(0u64, |acc, &d| acc.checked_add(d))
            .ok_or_else(|| invalid("stub total overflows u64"))?;
        if total % 2 == 1 {
            return Err(Error::OddStubTotal(total));
        }
        Ok(Self { degrees, total })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `L_n`, the number of stubs.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `Σ D_i²`, accumulated exactly.
    pub fn sum_of_squares(&self) -> u128 {
        self.degrees.iter().map(|&d| u128::from(d) * u128::from(d)).sum()
    }

    /// Number of nodes of each degree.
    pub fn degree_counts(&self) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        for &d in &self.degrees {
            *counts.entry(d).or_insert(0) += 1;
        }
        counts
    }

    /// `f_n(k) = #{i : D_i = k} / n`.
    pub fn empirical_density(&self) -> DiscreteDistribution {
        let n = self.degrees.len() as f64;
        let points = self
            .degree_counts()
            .into_iter()
            .map(|(k, c)| (k, c as f64 / n))
            .collect();
        DiscreteDistribution::from_points(points).expect("counts form a distribution")
    }

    /// `f_n*(k) = k n f_n(k) / L_n`; its `cdf` is `F_n*`.
    pub fn size_biased_empirical(&self) -> DiscreteDistribution {
        let total = self.total as f64;
        let points = self
            .degree_counts()
            .into_iter()
            .map(|(k, c)| (k, (u128::from(k) * u128::from(c)) as f64 / total))
            .collect();
        DiscreteDistribution::from_points(points).expect("stub counts form a distribution")
    }

    /// Writes the header line followed by one degree per line.
    pub fn write_to<W: Write>(&self, mut w: W, header: &SequenceHeader) -> Result<()> {
        write!(w, "# n={}", self.degrees.len())?;
        if let Some(g) = header.gamma {
            write!(w, " gamma={g}")?;
        }
        if let Some(s) = header.seed {
            write!(w, " seed={s}")?;
        }
        writeln!(w)?;
        for d in &self.degrees {
            writeln!(w, "{d}")?;
        }
        Ok(())
    }

    /// Reads the newline-delimited format written by [`write_to`](Self::write_to).
    /// Comment lines start with `#`; a header `n=` must match the entry count.
    pub fn read_from<R: BufRead>(r: R) -> Result<(Self, SequenceHeader)> {
        let mut header = SequenceHeader::default();
        let mut declared_n = None;
        let mut degrees = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    let Some((key, value)) = field.split_once('=') else {
                        continue;
                    };
                    let bad = |what: &str| Error::Parse {
                        line: lineno,
                        message: format!("bad {what} value {value:?}"),
                    };
                    match key {
                        "n" => declared_n = Some(value.parse::<usize>().map_err(|_| bad("n"))?),
                        "gamma" => header.gamma = Some(value.parse().map_err(|_| bad("gamma"))?),
                        "seed" => header.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                        _ => {}
                    }
                }
                continue;
            }
            let d = trimmed.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("expected a non-negative integer degree, got {trimmed:?}"),
            })?;
            degrees.push(d);
        }
        if let Some(n) = declared_n {
            if n != degrees.len() {
                return Err(invalid(format!(
                    "header declares n={n} but {} degrees follow",
                    degrees.len()
                )));
            }
        }
        Ok((Self::new(degrees)?, header))
    }
}

/// Metadata carried by the degree-sequence file header.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SequenceHeader {
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
}

/// One draw of `⌊U^{-1/γ}⌋` with `U` uniform on `(0, 1]`.
pub fn sample_degree<R: Rng + ?Sized>(law: &FloorParetoLaw, rng: &mut R) -> u64 {
    let u = 1.0 - rng.random::<f64>();
    u.powf(-1.0 / law.gamma()).floor() as u64
}

/// Samples `IID(D)`: `n - 1` i.i.d. degrees, then a last draw plus one if
/// needed to make the total even. Consumes exactly `n` uniforms.
pub fn sample_iid_degrees<R: Rng + ?Sized>(
    n: usize,
    law: &FloorParetoLaw,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    let mut degrees: Vec<u64> = (0..n).map(|_| sample_degree(law, rng)).collect();
    let total: u64 = degrees.iter().sum();
    if total % 2 == 1 {
        degrees[n - 1] += 1;
    }
    DegreeSequence::new(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::stream;

    #[test]
    fn empirical_density_counts() {
        let seq = DegreeSequence::new(vec![1, 2, 1]).unwrap();
        let f = seq.empirical_density();
        assert_eq!(f.points(), &[(1, 2.0 / 3.0), (2, 1.0 / 3.0)]);
        let seq = DegreeSequence::new(vec![2, 2]).unwrap();
        assert_eq!(seq.empirical_density().points(), &[(2, 1.0)]);
    }

    #[test]
    fn odd_total_and_zero_rejected() {
        assert!(matches!(
            DegreeSequence::new(vec![1, 2]),
            Err(Error::OddStubTotal(3))
        ));
        assert!(DegreeSequence::new(vec![0, 2]).is_err());
        assert!(DegreeSequence::new(vec![]).is_err());
    }

    #[test]
    fn size_biased_small_cases() {
        // [1,2,1] has an even total of 4.
        let seq = DegreeSequence::new(vec![1, 2, 1]).unwrap();
        let fs = seq.size_biased_empirical();
        assert_eq!(fs.points(), &[(1, 0.5), (2, 0.5)]);
        let seq = DegreeSequence::new(vec![3, 3, 3, 3]).unwrap();
        let fs = seq.size_biased_empirical();
        assert_eq!(fs.pmf(3), 1.0);
        assert_eq!(fs.cdf(3), 1.0);
        let seq = DegreeSequence::new(vec![1, 1, 2]).unwrap();
        let fs = seq.size_biased_empirical();
        assert_eq!(fs.cdf(1), 0.5);
        assert_eq!(fs.cdf(2), 1.0);
    }

    #[test]
    fn sampling_is_reproducible_and_even() {
        let law = FloorParetoLaw::new(1.5).unwrap();
        for seed in 0..50 {
            let a = sample_iid_degrees(101, &law, &mut stream(seed)).unwrap();
            let b = sample_iid_degrees(101, &law, &mut stream(seed)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.total() % 2, 0);
            assert!(a.degrees().iter().all(|&d| d >= 1));
        }
        assert!(sample_iid_degrees(0, &law, &mut stream(0)).is_err());
    }

    #[test]
    fn header_roundtrip_and_parse_errors() {
        let seq = DegreeSequence::new(vec![3, 1, 2]).unwrap();
        let header = SequenceHeader {
            gamma: Some(2.5),
            seed: Some(17),
        };
        let mut buf = Vec::new();
        seq.write_to(&mut buf, &header).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# n=3 gamma=2.5 seed=17\n"));
        let (back, h) = DegreeSequence::read_from(&buf[..]).unwrap();
        assert_eq!(back, seq);
        assert_eq!(h, header);

        let err = DegreeSequence::read_from("1\n1\nx\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = DegreeSequence::read_from("# n=2\n1\n2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::OddStubTotal(3)));
        let err = DegreeSequence::read_from("# n=3\n1\n1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }
}
