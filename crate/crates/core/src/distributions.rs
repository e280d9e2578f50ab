//! The floor-Pareto degree law, zeta-function helpers, and distances between
//! discrete distributions on the non-negative integers.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

// Bernoulli numbers B_2, B_4, ..., B_18 divided by (2j)!.
const EM_COEFFICIENTS: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43867.0 / 5_109_094_217_170_944_000.0,
];

/// Hurwitz zeta function `ζ(s, a) = Σ_{k≥0} (a + k)^{-s}` for `s > 1`, `a > 0`.
///
/// Direct summation up to a shift point `x = a + m ≥ s + 12`, then the
/// Euler–Maclaurin tail with nine Bernoulli corrections. Relative error is
/// close to machine precision for every `s > 1`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(invalid(format!("zeta requires s > 1, got {s}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("hurwitz zeta requires a > 0, got {a}")));
    }
    let shift = (s + 12.0 - a).ceil().max(0.0) as u64;
    let mut head = 0.0;
    // Smallest terms first.
    for k in (0..shift).rev() {
        head += (a + k as f64).powf(-s);
    }
    let x = a + shift as f64;
    let x_pow = x.powf(-s);
    let mut tail = x * x_pow / (s - 1.0) + 0.5 * x_pow;
    // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
    let inv_x2 = 1.0 / (x * x);
    let mut rising = s * x_pow / x;
    for (j, coef) in EM_COEFFICIENTS.iter().enumerate() {
        tail += coef * rising;
        let p = 2.0 * (j as f64 + 1.0);
        rising *= (s + p - 1.0) * (s + p) * inv_x2;
    }
    Ok(head + tail)
}

/// Riemann zeta function for real `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

/// `k^{-γ} - (k+1)^{-γ}` without cancellation for large `k`.
fn pareto_increment(gamma: f64, k: f64) -> f64 {
    k.powf(-gamma) * -(-gamma * (1.0 / k).ln_1p()).exp_m1()
}

/// Second moment of the degree law; infinite for `γ ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondMoment {
    Finite(f64),
    Infinite,
}

impl SecondMoment {
    pub fn finite(self) -> Option<f64> {
        match self {
            SecondMoment::Finite(v) => Some(v),
            SecondMoment::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub nu1: f64,
    pub nu2: SecondMoment,
}

impl Moments {
    /// `ν₂/ν₁`, the CM limit of the ANND when the variance is finite.
    pub fn ratio(&self) -> Option<f64> {
        self.nu2.finite().map(|nu2| nu2 / self.nu1)
    }
}

/// Result of [`FloorParetoLaw::limit_annr`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitAnnr {
    /// Partial sum `Σ_{k ≤ terms} F*(k) f*(k)`.
    pub value: f64,
    /// The true limit lies in `[value, value + error_bound]`.
    pub error_bound: f64,
    pub terms: u64,
}

/// Default cap on the number of terms summed by [`FloorParetoLaw::limit_annr`].
pub const DEFAULT_LIMIT_TERMS_CAP: u64 = 200_000_000;

/// The law of `D = ⌊X⌋` where `P(X > t) = t^{-γ}` for `t ≥ 1`.
///
/// `P(D = k) = k^{-γ} - (k+1)^{-γ}` for `k ≥ 1`, which is regularly varying
/// with exponent `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloorParetoLaw {
    gamma: f64,
    zeta_gamma: f64,
}

impl FloorParetoLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(invalid(format!("exponent gamma must be > 1, got {gamma}")));
        }
        Ok(Self {
            gamma,
            zeta_gamma: zeta(gamma)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn check_k(k: u64) -> Result<()> {
        if k < 1 {
            return Err(invalid("degree k must be >= 1"));
        }
        Ok(())
    }

    pub fn pmf(&self, k: u64) -> Result<f64> {
        Self::check_k(k)?;
        Ok(pareto_increment(self.gamma, k as f64))
    }

    /// `F(k) = 1 - (k+1)^{-γ}`; zero below the support.
    pub fn cdf(&self, k: u64) -> f64 {
        if k == 0 {
            0.0
        } else {
            1.0 - (k as f64 + 1.0).powf(-self.gamma)
        }
    }

    /// `ν₁ = ζ(γ)` and `ν₂ = 2ζ(γ-1) - ζ(γ)`.
    pub fn moments(&self) -> Moments {
        let nu2 = if self.gamma > 2.0 {
            // gamma - 1 > 1 here, so zeta cannot fail.
            let z = zeta(self.gamma - 1.0).expect("gamma - 1 > 1");
            SecondMoment::Finite(2.0 * z - self.zeta_gamma)
        } else {
            SecondMoment::Infinite
        };
        Moments {
            nu1: self.zeta_gamma,
            nu2,
        }
    }

    pub fn mean(&self) -> f64 {
        self.zeta_gamma
    }

    /// `f*(k) = k f(k) / ν₁`.
    pub fn size_biased_pmf(&self, k: u64) -> Result<f64> {
        Ok(k as f64 * self.pmf(k)? / self.zeta_gamma)
    }

    /// `1 - F*(k) = (ζ(γ, k+1) + k (k+1)^{-γ}) / ζ(γ)`, computed without
    /// cancellation. Equals 1 at `k = 0`.
    pub fn size_biased_tail(&self, k: u64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let kf = k as f64;
        let hz = hurwitz_zeta(self.gamma, kf + 1.0).expect("gamma > 1");
        (hz + kf * (kf + 1.0).powf(-self.gamma)) / self.zeta_gamma
    }

    /// `F*(k) = (Σ_{t ≤ k} t^{-γ} - k (k+1)^{-γ}) / ζ(γ)`.
    pub fn size_biased_cdf(&self, k: u64) -> Result<f64> {
        Self::check_k(k)?;
        let kf = k as f64;
        let partial = self.zeta_gamma - hurwitz_zeta(self.gamma, kf + 1.0)?;
        Ok((partial - kf * (kf + 1.0).powf(-self.gamma)) / self.zeta_gamma)
    }

    /// `E[F*(D*)] = Σ_k F*(k) f*(k)`, the CM limit of the ANNR.
    ///
    /// The sum is truncated at the smallest `N` whose remaining size-biased
    /// mass `1 - F*(N)` is at most `abs_tol`; since `F* ≤ 1` that mass bounds
    /// the omitted terms.
    pub fn limit_annr(&self, abs_tol: f64) -> Result<LimitAnnr> {
        self.limit_annr_capped(abs_tol, DEFAULT_LIMIT_TERMS_CAP)
    }

    pub fn limit_annr_capped(&self, abs_tol: f64, max_terms: u64) -> Result<LimitAnnr> {
        if !(abs_tol > 0.0) {
            return Err(invalid(format!("tolerance must be > 0, got {abs_tol}")));
        }
        if max_terms == 0 {
            return Err(invalid("term cap must be >= 1"));
        }
        let terms = match self.terms_for_tail(abs_tol, max_terms) {
            Some(n) => n,
            None => {
                let value = self.partial_annr_sum(max_terms);
                return Err(Error::PrecisionUnreachable {
                    requested: abs_tol,
                    achieved: self.size_biased_tail(max_terms),
                    value,
                    terms: max_terms,
                });
            }
        };
        Ok(LimitAnnr {
            value: self.partial_annr_sum(terms),
            error_bound: self.size_biased_tail(terms),
            terms,
        })
    }

    /// Smallest `N ≤ cap` with `1 - F*(N) ≤ tol`, found by doubling and bisection
    /// on the monotone closed-form tail.
    fn terms_for_tail(&self, tol: f64, cap: u64) -> Option<u64> {
        if self.size_biased_tail(cap) > tol {
            return None;
        }
        let mut hi = 1u64;
        while hi < cap && self.size_biased_tail(hi) > tol {
            hi = hi.saturating_mul(2).min(cap);
        }
        let mut lo = hi / 2;
        if self.size_biased_tail(hi) <= tol && hi == 1 {
            return Some(1);
        }
        // invariant: tail(lo) > tol (or lo == 0), tail(hi) <= tol
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.size_biased_tail(mid) <= tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    fn partial_annr_sum(&self, terms: u64) -> f64 {
        let g = self.gamma;
        let inv_zeta = 1.0 / self.zeta_gamma;
        let mut power_sum = Kahan::default();
        let mut total = Kahan::default();
        let mut pow_k = 1.0;
        for k in 1..=terms {
            let kf = k as f64;
            let pow_next = (kf + 1.0).powf(-g);
            power_sum.add(pow_k);
            let cdf_star = (power_sum.sum() - kf * pow_next) * inv_zeta;
            // Cancellation here only matters for k where f*(k) is already tiny.
            let pmf_star = kf * (pow_k - pow_next) * inv_zeta;
            total.add(cdf_star * pmf_star);
            pow_k = pow_next;
        }
        total.sum()
    }

    /// `f` on `{1, ..., max_k}` with the remaining mass recorded as tail.
    pub fn truncated_density(&self, max_k: u64) -> Result<DiscreteDistribution> {
        Self::check_k(max_k)?;
        let points = (1..=max_k)
            .map(|k| (k, pareto_increment(self.gamma, k as f64)))
            .collect();
        let kf = max_k as f64;
        let tail_mass = (kf + 1.0).powf(-self.gamma);
        // Σ_{k > K} (1 - F(k)) = Σ_{k > K} (k+1)^{-γ} = ζ(γ, K+2)
        let tail_excess = hurwitz_zeta(self.gamma, kf + 2.0)?;
        DiscreteDistribution::truncated(points, max_k, tail_mass, tail_excess)
    }

    /// `f*` on `{1, ..., max_k}`; the tail excess is infinite when `γ ≤ 2`.
    pub fn truncated_size_biased_density(&self, max_k: u64) -> Result<DiscreteDistribution> {
        Self::check_k(max_k)?;
        let inv_zeta = 1.0 / self.zeta_gamma;
        let points = (1..=max_k)
            .map(|k| (k, k as f64 * pareto_increment(self.gamma, k as f64) * inv_zeta))
            .collect();
        let tail_mass = self.size_biased_tail(max_k);
        let tail_excess = if self.gamma > 2.0 {
            // Σ_{k > K}(1 - F*(k)) = Σ_{j ≥ K+2} (j - K - 1) f*(j); summing by
            // parts gives (K+2)^{1-γ} + 2ζ(γ-1, K+3) - (K+2)ζ(γ, K+3), over ν₁.
            let a = max_k as f64 + 2.0;
            let s = a.powf(1.0 - self.gamma) + 2.0 * hurwitz_zeta(self.gamma - 1.0, a + 1.0)?
                - a * hurwitz_zeta(self.gamma, a + 1.0)?;
            s * inv_zeta
        } else {
            f64::INFINITY
        };
        DiscreteDistribution::truncated(points, max_k, tail_mass, tail_excess)
    }
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn sum(&self) -> f64 {
        self.sum
    }
}

/// A distribution on the non-negative integers given by explicit point
/// masses up to `known_through`, plus an unresolved tail beyond it.
///
/// `tail_mass` is the probability beyond `known_through` and `tail_excess`
/// is `Σ_{k > known_through} (1 - F(k))`, the tail's contribution to the
/// mean. Fully explicit distributions have both equal to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    points: Vec<(u64, f64)>,
    known_through: u64,
    tail_mass: f64,
    tail_excess: f64,
}

const MASS_TOLERANCE: f64 = 1e-9;

impl DiscreteDistribution {
    /// A fully explicit distribution. Points must have strictly increasing
    /// support and non-negative masses summing to at most `1 + 1e-9`.
    pub fn from_points(points: Vec<(u64, f64)>) -> Result<Self> {
        let known_through = points.last().map_or(0, |p| p.0);
        Self::truncated(points, known_through, 0.0, 0.0)
    }

    /// Dense probabilities starting at `offset`.
    pub fn from_probabilities(offset: u64, probabilities: &[f64]) -> Result<Self> {
        let points = probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| (offset + i as u64, p))
            .collect();
        Self::from_points(points)
    }

    pub fn point_mass(k: u64) -> Self {
        Self {
            points: vec![(k, 1.0)],
            known_through: k,
            tail_mass: 0.0,
            tail_excess: 0.0,
        }
    }

    pub fn truncated(
        points: Vec<(u64, f64)>,
        known_through: u64,
        tail_mass: f64,
        tail_excess: f64,
    ) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("support points must be strictly increasing"));
        }
        if points.last().is_some_and(|p| p.0 > known_through) {
            return Err(invalid("support point beyond the explicit range"));
        }
        if points.iter().any(|p| !(p.1 >= 0.0)) || !(tail_mass >= 0.0) || !(tail_excess >= 0.0)
        {
            return Err(invalid("masses must be non-negative"));
        }
        let total: f64 = points.iter().map(|p| p.1).sum::<f64>() + tail_mass;
        if total > 1.0 + MASS_TOLERANCE {
            return Err(invalid(format!("total mass {total} exceeds 1")));
        }
        Ok(Self {
            points,
            known_through,
            tail_mass,
            tail_excess,
        })
    }

    pub fn points(&self) -> &[(u64, f64)] {
        &self.points
    }

    pub fn known_through(&self) -> u64 {
        self.known_through
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn tail_excess(&self) -> f64 {
        self.tail_excess
    }

    pub fn pmf(&self, k: u64) -> f64 {
        self.points
            .binary_search_by_key(&k, |p| p.0)
            .map_or(0.0, |i| self.points[i].1)
    }

    /// Cumulative mass `F(k)`; beyond the explicit range this is only a lower
    /// bound when a tail is present.
    pub fn cdf(&self, k: u64) -> f64 {
        let end = self.points.partition_point(|p| p.0 <= k);
        self.points[..end].iter().map(|p| p.1).sum::<f64>().min(1.0)
    }

    /// `Σ_{k ≥ 0} (1 - F(k))`, including the tail's contribution.
    pub fn mean(&self) -> f64 {
        (1.0 - self.cdf(0)).max(0.0) + excess_beyond(self, 0)
    }
}

/// A distance known to lie in `[lo, hi]`; `lo == hi` when both inputs are
/// fully explicit (or their unresolved tails cannot overlap).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    pub lo: f64,
    pub hi: f64,
}

impl Distance {
    pub fn value(&self) -> f64 {
        if self.hi.is_infinite() {
            self.hi
        } else {
            0.5 * (self.lo + self.hi)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Walks the merged support of two explicit parts in increasing `k`,
/// calling `visit(k, next_k, f_cdf, g_cdf, f_pmf, g_pmf)` at each breakpoint.
fn merged_walk(
    f: &[(u64, f64)],
    g: &[(u64, f64)],
    end: u64,
    mut visit: impl FnMut(u64, u64, f64, f64, f64, f64),
) {
    let (mut i, mut j) = (0, 0);
    let (mut cf, mut cg) = (0.0, 0.0);
    loop {
        let kf = f.get(i).map_or(u64::MAX, |p| p.0);
        let kg = g.get(j).map_or(u64::MAX, |p| p.0);
        let k = kf.min(kg);
        if k > end {
            break;
        }
        let (mut pf, mut pg) = (0.0, 0.0);
        if kf == k {
            pf = f[i].1;
            cf += pf;
            i += 1;
        }
        if kg == k {
            pg = g[j].1;
            cg += pg;
            j += 1;
        }
        let next = f
            .get(i)
            .map_or(u64::MAX, |p| p.0)
            .min(g.get(j).map_or(u64::MAX, |p| p.0))
            .min(end + 1);
        visit(k, next, cf.min(1.0), cg.min(1.0), pf, pg);
    }
}

/// Σ_{from < k ≤ known_through} (1 - F(k)) plus the tail excess.
fn excess_beyond(d: &DiscreteDistribution, from: u64) -> f64 {
    let mut acc = 0.0;
    let mut cdf = d.cdf(from);
    let mut k = from + 1;
    let rest = &d.points[d.points.partition_point(|p| p.0 <= from)..];
    for &(pk, p) in rest {
        acc += (1.0 - cdf).max(0.0) * (pk - k) as f64;
        cdf += p;
        k = pk;
    }
    if d.known_through >= k {
        acc += (1.0 - cdf).max(0.0) * (d.known_through - k + 1) as f64;
    }
    acc + d.tail_excess
}

/// Kantorovich–Rubinstein distance `d₁(F, G) = Σ_{k ≥ 0} |F(k) - G(k)|`.
pub fn d1(f: &DiscreteDistribution, g: &DiscreteDistribution) -> Distance {
    let common = f.known_through.min(g.known_through);
    let mut exact = 0.0;
    merged_walk(&f.points, &g.points, common, |k, next, cf, cg, _, _| {
        exact += (cf - cg).abs() * (next - k) as f64;
    });
    let xf = excess_beyond(f, common);
    let xg = excess_beyond(g, common);
    if xf.is_infinite() || xg.is_infinite() {
        let finite_part = if xf.is_infinite() && xg.is_infinite() {
            exact
        } else {
            f64::INFINITY
        };
        return Distance {
            lo: finite_part,
            hi: f64::INFINITY,
        };
    }
    Distance {
        lo: exact + (xf - xg).abs(),
        hi: exact + xf + xg,
    }
}

/// Total variation distance `d_tv(f, g) = ½ Σ_k |f(k) - g(k)|`.
pub fn dtv(f: &DiscreteDistribution, g: &DiscreteDistribution) -> Distance {
    let common = f.known_through.min(g.known_through);
    let mut exact = 0.0;
    merged_walk(&f.points, &g.points, common, |_, _, _, _, pf, pg| {
        exact += (pf - pg).abs();
    });
    let beyond_f = f.mass_beyond(common);
    let beyond_g = g.mass_beyond(common);
    // Both explicit beyond `common`: resolve exactly.
    if f.tail_mass == 0.0 && g.tail_mass == 0.0 {
        let mut rest = 0.0;
        merged_walk(&f.points, &g.points, u64::MAX - 1, |k, _, _, _, pf, pg| {
            if k > common {
                rest += (pf - pg).abs();
            }
        });
        let v = 0.5 * (exact + rest);
        return Distance { lo: v, hi: v };
    }
    Distance {
        lo: 0.5 * (exact + (beyond_f - beyond_g).abs()),
        hi: (0.5 * (exact + beyond_f + beyond_g)).min(1.0),
    }
}

impl DiscreteDistribution {
    fn mass_beyond(&self, k: u64) -> f64 {
        let start = self.points.partition_point(|p| p.0 <= k);
        self.points[start..].iter().map(|p| p.1).sum::<f64>() + self.tail_mass
    }
}
