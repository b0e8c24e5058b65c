//! Pythagorean fuzzy numbers and their algebra.
//!
//! A [`Pfn`] is a membership/non-membership pair `(mu, nu)` with
//! `mu^2 + nu^2 <= 1`. Everything else in the crate is built from the
//! operations here: the quasi-order, `⊕`, scalar multiplication, the score
//! function, the half-sum distance and the closeness index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack accepted on `mu^2 + nu^2 <= 1`.
pub const EPS_VALID: f64 = 1e-9;
/// Default tolerance for every order comparison.
pub const EPS_CMP: f64 = 1e-9;
/// Slack accepted on weight vectors summing to one.
pub const EPS_WEIGHT: f64 = 1e-9;

/// A Pythagorean fuzzy number `P(mu, nu)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPfn")]
pub struct Pfn {
    mu: f64,
    nu: f64,
}

#[derive(Deserialize)]
struct RawPfn {
    mu: f64,
    nu: f64,
}

impl TryFrom<RawPfn> for Pfn {
    type Error = Error;

    fn try_from(raw: RawPfn) -> Result<Self> {
        Pfn::new(raw.mu, raw.nu)
    }
}

/// Outcome of comparing two PFNs under the quasi-order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriStateOrder {
    LessOrEqual,
    GreaterOrEqual,
    Equal,
    Incomparable,
}

impl TriStateOrder {
    /// `true` for `LessOrEqual` and `Equal`.
    pub fn is_le(self) -> bool {
        matches!(self, TriStateOrder::LessOrEqual | TriStateOrder::Equal)
    }

    /// `true` for `GreaterOrEqual` and `Equal`.
    pub fn is_ge(self) -> bool {
        matches!(self, TriStateOrder::GreaterOrEqual | TriStateOrder::Equal)
    }
}

impl Pfn {
    /// The ideal PFN `P(1, 0)`.
    pub const POSITIVE_IDEAL: Pfn = Pfn { mu: 1.0, nu: 0.0 };
    /// The anti-ideal PFN `P(0, 1)`, also the identity of `⊕`.
    pub const NEGATIVE_IDEAL: Pfn = Pfn { mu: 0.0, nu: 1.0 };

    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Domain(format!(
                "membership degree {mu} outside [0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::Domain(format!(
                "non-membership degree {nu} outside [0, 1]"
            )));
        }
        if mu * mu + nu * nu > 1.0 + EPS_VALID {
            return Err(Error::Constraint { mu, nu });
        }
        Ok(Pfn { mu, nu })
    }

    /// Builds a PFN from components produced by closed operations.
    /// Rounding can push a component a hair outside `[0, 1]`; clamp it back.
    fn from_closed(mu: f64, nu: f64) -> Self {
        let pfn = Pfn {
            mu: mu.clamp(0.0, 1.0),
            nu: nu.clamp(0.0, 1.0),
        };
        debug_assert!(
            pfn.mu * pfn.mu + pfn.nu * pfn.nu <= 1.0 + EPS_VALID,
            "{pfn}"
        );
        pfn
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Hesitancy degree `sqrt(1 - mu^2 - nu^2)`.
    pub fn hesitancy(&self) -> f64 {
        self.hesitancy_sq().sqrt()
    }

    fn hesitancy_sq(&self) -> f64 {
        (1.0 - self.mu * self.mu - self.nu * self.nu).clamp(0.0, 1.0)
    }

    /// Quasi-order comparison with the default tolerance.
    pub fn quasi_compare(&self, other: &Pfn) -> TriStateOrder {
        self.quasi_compare_eps(other, EPS_CMP)
    }

    /// `self >= other` iff `mu >= mu'` and `nu <= nu'`; differences within
    /// `eps` count as ties.
    pub fn quasi_compare_eps(&self, other: &Pfn, eps: f64) -> TriStateOrder {
        let ge = self.mu >= other.mu - eps && self.nu <= other.nu + eps;
        let le = self.mu <= other.mu + eps && self.nu >= other.nu - eps;
        match (ge, le) {
            (true, true) => TriStateOrder::Equal,
            (true, false) => TriStateOrder::GreaterOrEqual,
            (false, true) => TriStateOrder::LessOrEqual,
            (false, false) => TriStateOrder::Incomparable,
        }
    }

    /// `γ1 ⊕ γ2 = P(sqrt(mu1^2 + mu2^2 - mu1^2 mu2^2), nu1 nu2)`.
    pub fn add(&self, other: &Pfn) -> Pfn {
        let a = self.mu * self.mu;
        let b = other.mu * other.mu;
        // a + b - ab, arranged to avoid cancellation when both are small
        let mu_sq = a + b * (1.0 - a);
        Pfn::from_closed(mu_sq.sqrt(), self.nu * other.nu)
    }

    /// `kγ = P(sqrt(1 - (1 - mu^2)^k), nu^k)` for `k >= 0`.
    pub fn scale(&self, k: f64) -> Result<Pfn> {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::Domain(format!(
                "scalar multiplier {k} must be a finite value >= 0"
            )));
        }
        Ok(Pfn::from_closed(
            complement_product_sqrt(&[(self.mu, k)]),
            pow0(self.nu, k),
        ))
    }

    /// Score `mu^2 - nu^2`, in `[-1, 1]`.
    pub fn score(&self) -> f64 {
        self.mu * self.mu - self.nu * self.nu
    }

    /// Half-sum distance over squared membership, non-membership and
    /// hesitancy degrees.
    pub fn distance(&self, other: &Pfn) -> f64 {
        0.5 * ((self.mu * self.mu - other.mu * other.mu).abs()
            + (self.nu * self.nu - other.nu * other.nu).abs()
            + (self.hesitancy_sq() - other.hesitancy_sq()).abs())
    }

    /// Closeness index `(1 - nu^2) / (2 - mu^2 - nu^2)`: relative proximity
    /// to `P(1, 0)` against `P(0, 1)`. The denominator is at least one.
    pub fn closeness(&self) -> f64 {
        (1.0 - self.nu * self.nu) / (2.0 - self.mu * self.mu - self.nu * self.nu)
    }
}

impl fmt::Display for Pfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "P({:.*},{:.*})", p, self.mu, p, self.nu),
            None => write!(f, "P({},{})", self.mu, self.nu),
        }
    }
}

/// `base^exp` with `0^0 = 1`.
pub(crate) fn pow0(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.powf(exp)
    }
}

/// `sqrt(1 - Π (1 - mu_i^2)^{e_i})`, evaluated through `ln_1p`/`exp_m1` so
/// that results near zero keep full relative precision. Zero exponents
/// contribute a factor of one, including when `mu_i = 1`.
pub(crate) fn complement_product_sqrt(terms: &[(f64, f64)]) -> f64 {
    let mut log_sum = 0.0;
    for &(mu, exp) in terms {
        if exp == 0.0 {
            continue;
        }
        log_sum += exp * (-(mu * mu)).ln_1p();
    }
    (-log_sum.exp_m1()).clamp(0.0, 1.0).sqrt()
}

/// Free-function form of [`Pfn::new`].
pub fn pfn_new(mu: f64, nu: f64) -> Result<Pfn> {
    Pfn::new(mu, nu)
}

pub fn hesitancy(g: &Pfn) -> f64 {
    g.hesitancy()
}

pub fn quasi_compare(g1: &Pfn, g2: &Pfn) -> TriStateOrder {
    g1.quasi_compare(g2)
}

pub fn pfn_add(g1: &Pfn, g2: &Pfn) -> Pfn {
    g1.add(g2)
}

pub fn pfn_scale(k: f64, g: &Pfn) -> Result<Pfn> {
    g.scale(k)
}

pub fn score(g: &Pfn) -> f64 {
    g.score()
}

pub fn distance(g1: &Pfn, g2: &Pfn) -> f64 {
    g1.distance(g2)
}

pub fn closeness(g: &Pfn) -> f64 {
    g.closeness()
}

/// Checks that `weights` is non-negative and sums to one within
/// [`EPS_WEIGHT`]. Never renormalizes.
pub fn check_weights(weights: &[f64]) -> Result<()> {
    if let Some(k) = weights.iter().find(|k| !k.is_finite() || **k < 0.0) {
        return Err(Error::Weight(format!(
            "weight {k} is negative or not finite"
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > EPS_WEIGHT {
        return Err(Error::Weight(format!("weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Weighted arithmetic mean of memberships and non-memberships:
/// `P(Σ k_i mu_i, Σ k_i nu_i)`.
pub fn weighted_average(gs: &[Pfn], ks: &[f64]) -> Result<Pfn> {
    if gs.len() != ks.len() {
        return Err(Error::Shape(format!(
            "{} values but {} weights",
            gs.len(),
            ks.len()
        )));
    }
    if gs.is_empty() {
        return Err(Error::Shape("cannot average an empty list".into()));
    }
    check_weights(ks)?;
    let (mu, nu) = gs.iter().zip(ks).fold((0.0, 0.0), |(mu, nu), (g, k)| {
        (mu + k * g.mu, nu + k * g.nu)
    });
    Ok(Pfn::from_closed(mu, nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(mu: f64, nu: f64) -> Pfn {
        Pfn::new(mu, nu).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn construction() {
        assert_eq!(p(1.0, 0.0), Pfn::POSITIVE_IDEAL);
        let g = p(3f64.sqrt() / 2.0, 0.5);
        assert!(close(g.hesitancy(), 0.0, 1e-7));
        assert!(matches!(Pfn::new(0.9, 0.9), Err(Error::Constraint { .. })));
        assert!(matches!(Pfn::new(1.1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(Pfn::new(0.0, -0.1), Err(Error::Domain(_))));
        assert!(matches!(Pfn::new(f64::NAN, 0.0), Err(Error::Domain(_))));
        // exactly on the unit circle despite rounding
        assert!(Pfn::new(0.6, 0.8).is_ok());
    }

    #[test]
    fn hesitancy_values() {
        assert_eq!(p(1.0, 0.0).hesitancy(), 0.0);
        assert_eq!(p(0.0, 0.0).hesitancy(), 1.0);
        assert!(close(p(0.6, 0.8).hesitancy(), 0.0, 1e-7));
    }

    #[test]
    fn incomparable_pairs() {
        let g1 = p(5f64.sqrt() / 3.0, 2f64.sqrt() / 3.0);
        let g2 = p(2f64.sqrt() / 3.0, 1.0 / 3.0);
        assert_eq!(g1.quasi_compare(&g2), TriStateOrder::Incomparable);
        assert_eq!(
            p(0.20, 0.80).quasi_compare(&p(0.25, 0.85)),
            TriStateOrder::Incomparable
        );
        assert_eq!(
            p(0.5, 0.5).quasi_compare(&p(0.5, 0.5)),
            TriStateOrder::Equal
        );
        assert_eq!(
            p(0.7, 0.4).quasi_compare(&p(0.25, 0.85)),
            TriStateOrder::GreaterOrEqual
        );
        assert_eq!(
            p(0.25, 0.85).quasi_compare(&p(0.7, 0.4)),
            TriStateOrder::LessOrEqual
        );
    }

    #[test]
    fn addition() {
        let g = p(0.6, 0.8);
        assert_eq!(Pfn::NEGATIVE_IDEAL.add(&g), g);
        let top = Pfn::POSITIVE_IDEAL.add(&g);
        assert!(close(top.mu(), 1.0, 1e-15) && top.nu() == 0.0);
        // by hand: mu^2 = 0.36 + 0.25 - 0.09 = 0.52, nu = 0.5 * 0.6
        let s = p(0.6, 0.5).add(&p(0.5, 0.6));
        assert!(close(s.mu(), 0.52f64.sqrt(), 1e-15));
        assert!(close(s.nu(), 0.30, 1e-15));
    }

    #[test]
    fn scaling() {
        let g = p(0.6, 0.5);
        assert_eq!(g.scale(1.0).unwrap(), g);
        assert_eq!(g.scale(0.0).unwrap(), Pfn::NEGATIVE_IDEAL);
        assert_eq!(Pfn::POSITIVE_IDEAL.scale(0.0).unwrap(), Pfn::NEGATIVE_IDEAL);
        // 0.5 * P(0.8, 0.2): mu = sqrt(1 - 0.6) = 0.632455532033675866,
        // nu = sqrt(0.2) = 0.447213595499957939 (50-digit mpmath)
        let h = p(0.8, 0.2).scale(0.5).unwrap();
        assert!(close(h.mu(), 0.632_455_532_033_675_9, 1e-15));
        assert!(close(h.nu(), 0.447_213_595_499_957_9, 1e-15));
        assert!(matches!(g.scale(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn scores() {
        assert!(close(p(0.90, 0.16).score(), 0.7844, 1e-12));
        assert_eq!(Pfn::POSITIVE_IDEAL.score(), 1.0);
        assert_eq!(Pfn::NEGATIVE_IDEAL.score(), -1.0);
        let g1 = p(5f64.sqrt() / 3.0, 2.0 / 3.0);
        let g2 = p(2.0 / 3.0, 3f64.sqrt() / 3.0);
        assert!(close(g1.score(), 1.0 / 9.0, 1e-12));
        assert!(close(g2.score(), 1.0 / 9.0, 1e-12));
    }

    #[test]
    fn distances() {
        for g in [p(0.3, 0.4), p(0.9, 0.1), p(0.0, 0.0), p(0.6, 0.8)] {
            assert!(close(
                g.distance(&Pfn::POSITIVE_IDEAL),
                1.0 - g.mu() * g.mu(),
                1e-15
            ));
            assert!(close(
                g.distance(&Pfn::NEGATIVE_IDEAL),
                1.0 - g.nu() * g.nu(),
                1e-15
            ));
            assert_eq!(g.distance(&g), 0.0);
        }
    }

    #[test]
    fn closeness_values() {
        let g1 = p(5f64.sqrt() / 3.0, 2.0 / 3.0);
        let g2 = p(2.0 / 3.0, 3f64.sqrt() / 3.0);
        assert!(close(g1.closeness(), 5.0 / 9.0, 1e-12));
        assert!(close(g2.closeness(), 6.0 / 11.0, 1e-12));
        assert_eq!(Pfn::POSITIVE_IDEAL.closeness(), 1.0);
        assert_eq!(Pfn::NEGATIVE_IDEAL.closeness(), 0.0);
        assert_eq!(p(0.0, 0.0).closeness(), 0.5);
    }

    #[test]
    fn closeness_matches_distance_ratio() {
        for g in [p(0.3, 0.4), p(0.9, 0.16), p(0.1, 0.9)] {
            let dp = g.distance(&Pfn::POSITIVE_IDEAL);
            let dn = g.distance(&Pfn::NEGATIVE_IDEAL);
            assert!(close(g.closeness(), dn / (dp + dn), 1e-15));
        }
    }

    #[test]
    fn weighted_average_rows() {
        let row1 = [
            p(1.0, 0.0),
            p(0.9, 0.3),
            p(0.8, 0.2),
            p(0.9, 0.1),
            p(0.9, 0.2),
        ];
        let row2 = [
            p(0.9, 0.1),
            p(0.5, 0.5),
            p(0.1, 0.9),
            p(0.3, 0.8),
            p(0.1, 0.9),
        ];
        let k = [0.2; 5];
        let r1 = weighted_average(&row1, &k).unwrap();
        let r2 = weighted_average(&row2, &k).unwrap();
        assert!(close(r1.mu(), 0.90, 1e-12) && close(r1.nu(), 0.16, 1e-12));
        assert!(close(r2.mu(), 0.38, 1e-12) && close(r2.nu(), 0.64, 1e-12));
        assert_eq!(
            weighted_average(&[p(0.3, 0.2)], &[1.0]).unwrap(),
            p(0.3, 0.2)
        );
    }

    #[test]
    fn weighted_average_errors() {
        let gs = [p(0.3, 0.2), p(0.1, 0.1)];
        assert!(matches!(
            weighted_average(&gs, &[0.5]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(weighted_average(&[], &[]), Err(Error::Shape(_))));
        assert!(matches!(
            weighted_average(&gs, &[0.5, 0.4]),
            Err(Error::Weight(_))
        ));
        assert!(matches!(
            weighted_average(&gs, &[1.5, -0.5]),
            Err(Error::Weight(_))
        ));
    }

    #[test]
    fn zero_to_the_zero() {
        assert_eq!(pow0(0.0, 0.0), 1.0);
        assert_eq!(pow0(0.0, 0.5), 0.0);
        assert!(close(
            complement_product_sqrt(&[(1.0, 0.0), (0.5, 1.0)]),
            0.5,
            1e-15
        ));
    }

    #[test]
    fn quasi_order_grid_matches_coordinates() {
        let grid: Vec<Pfn> = (0..=20)
            .flat_map(|i| (0..=20).map(move |j| (i as f64 / 20.0, j as f64 / 20.0)))
            .filter(|(m, n)| m * m + n * n <= 1.0)
            .map(|(m, n)| p(m, n))
            .collect();
        for a in &grid {
            for b in &grid {
                let ge = a.mu() >= b.mu() && a.nu() <= b.nu();
                let le = a.mu() <= b.mu() && a.nu() >= b.nu();
                let expected = match (ge, le) {
                    (true, true) => TriStateOrder::Equal,
                    (true, false) => TriStateOrder::GreaterOrEqual,
                    (false, true) => TriStateOrder::LessOrEqual,
                    (false, false) => TriStateOrder::Incomparable,
                };
                assert_eq!(a.quasi_compare(b), expected, "{a} vs {b}");
            }
        }
    }
}
