//! Comparison regimes.
//!
//! Every decision in the crate (alliance partitions from thresholds,
//! minimum-risk classification from expected losses, monotonicity of loss
//! functions) reduces to comparing PFNs. There are three ways to do that:
//! the quasi-order on `(mu, nu)`, the score `mu^2 - nu^2`, and the closeness
//! index. Each is a [`Regime`], registered by name in a [`RegimeRegistry`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alliance::Thresholds;
use crate::error::{Error, Result};
use crate::pfn::{Pfn, EPS_CMP};

/// Alliance an agent ends up in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Positive,
    Central,
    Negative,
    Unclassified,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Positive => "positive",
            Region::Central => "central",
            Region::Negative => "negative",
            Region::Unclassified => "unclassified",
        })
    }
}

/// The three classification actions, in tie-break precedence order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    P,
    B,
    N,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::P, Action::B, Action::N];

    pub fn region(self) -> Region {
        match self {
            Action::P => Region::Positive,
            Action::B => Region::Central,
            Action::N => Region::Negative,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegimeKind {
    #[serde(rename = "pfn")]
    PfnOrder,
    #[serde(rename = "score")]
    Score,
    #[serde(rename = "closeness")]
    Closeness,
}

impl RegimeKind {
    pub const ALL: [RegimeKind; 3] = [
        RegimeKind::PfnOrder,
        RegimeKind::Score,
        RegimeKind::Closeness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegimeKind::PfnOrder => "pfn",
            RegimeKind::Score => "score",
            RegimeKind::Closeness => "closeness",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegimeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegimeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownRegime(s.to_string()))
    }
}

/// A way of comparing PFNs, used for both threshold partitions and
/// minimum-risk decisions.
pub trait Regime: fmt::Debug + Send + Sync {
    fn kind(&self) -> RegimeKind;

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// `a <= b` under this regime, ties within tolerance included.
    fn le(&self, a: &Pfn, b: &Pfn) -> bool;

    /// Scalar the regime ranks by, if it is a total preorder.
    fn value(&self, g: &Pfn) -> Option<f64>;

    fn check_thresholds(&self, thresholds: &Thresholds) -> Result<()>;

    /// Alliance of one aggregate. Thresholds must already have passed
    /// [`Regime::check_thresholds`].
    fn assign(&self, aggregate: &Pfn, thresholds: &Thresholds) -> Region;

    /// Action with minimal expected loss among `[P, B, N]`, ties broken in
    /// that order. `None` when no loss is `<=` both others.
    fn min_risk_action(&self, losses: &[Pfn; 3]) -> Option<Action> {
        Action::ALL.into_iter().find(|a| {
            let mine = &losses[a.index()];
            losses.iter().all(|other| self.le(mine, other))
        })
    }
}

/// Quasi-order regime: `γ1 <= γ2` iff `mu1 <= mu2` and `nu1 >= nu2`.
#[derive(Clone, Debug)]
pub struct PfnOrderRegime {
    pub eps: f64,
}

/// Ranks PFNs by score.
#[derive(Clone, Debug)]
pub struct ScoreRegime {
    pub eps: f64,
}

/// Ranks PFNs by closeness index.
#[derive(Clone, Debug)]
pub struct ClosenessRegime {
    pub eps: f64,
}

impl Default for PfnOrderRegime {
    fn default() -> Self {
        PfnOrderRegime { eps: EPS_CMP }
    }
}

impl Default for ScoreRegime {
    fn default() -> Self {
        ScoreRegime { eps: EPS_CMP }
    }
}

impl Default for ClosenessRegime {
    fn default() -> Self {
        ClosenessRegime { eps: EPS_CMP }
    }
}

impl Regime for PfnOrderRegime {
    fn kind(&self) -> RegimeKind {
        RegimeKind::PfnOrder
    }

    fn le(&self, a: &Pfn, b: &Pfn) -> bool {
        a.quasi_compare_eps(b, self.eps).is_le()
    }

    fn value(&self, _g: &Pfn) -> Option<f64> {
        None
    }

    fn check_thresholds(&self, thresholds: &Thresholds) -> Result<()> {
        let Thresholds::Pfn { upper, lower } = thresholds else {
            return Err(mismatch(self.kind(), thresholds));
        };
        if !lower.quasi_compare_eps(upper, self.eps).is_le() {
            return Err(Error::Threshold(format!(
                "lower threshold {lower} is not below upper threshold {upper} in the quasi-order"
            )));
        }
        Ok(())
    }

    fn assign(&self, aggregate: &Pfn, thresholds: &Thresholds) -> Region {
        let Thresholds::Pfn { upper, lower } = thresholds else {
            unreachable!("thresholds checked by caller");
        };
        let vs_upper = aggregate.quasi_compare_eps(upper, self.eps);
        let vs_lower = aggregate.quasi_compare_eps(lower, self.eps);
        if vs_upper.is_ge() {
            Region::Positive
        } else if vs_lower.is_le() {
            Region::Negative
        } else if vs_upper.is_le() && vs_lower.is_ge() {
            Region::Central
        } else {
            Region::Unclassified
        }
    }
}

fn scalar_assign(value: f64, alpha: f64, beta: f64, eps: f64) -> Region {
    if value >= alpha - eps {
        Region::Positive
    } else if value <= beta + eps {
        Region::Negative
    } else {
        Region::Central
    }
}

fn check_scalar_bounds(kind: RegimeKind, alpha: f64, beta: f64, floor: f64) -> Result<()> {
    if !(alpha.is_finite() && beta.is_finite()) || beta < floor || alpha > 1.0 || beta >= alpha {
        return Err(Error::Threshold(format!(
            "{kind} thresholds need {floor} <= beta < alpha <= 1, got alpha = {alpha}, beta = {beta}"
        )));
    }
    Ok(())
}

fn mismatch(kind: RegimeKind, thresholds: &Thresholds) -> Error {
    Error::Threshold(format!(
        "{kind} regime cannot use {} thresholds",
        thresholds.kind()
    ))
}

impl Regime for ScoreRegime {
    fn kind(&self) -> RegimeKind {
        RegimeKind::Score
    }

    fn le(&self, a: &Pfn, b: &Pfn) -> bool {
        a.score() <= b.score() + self.eps
    }

    fn value(&self, g: &Pfn) -> Option<f64> {
        Some(g.score())
    }

    fn check_thresholds(&self, thresholds: &Thresholds) -> Result<()> {
        match *thresholds {
            Thresholds::Score { alpha, beta } => {
                check_scalar_bounds(self.kind(), alpha, beta, -1.0)
            }
            _ => Err(mismatch(self.kind(), thresholds)),
        }
    }

    fn assign(&self, aggregate: &Pfn, thresholds: &Thresholds) -> Region {
        let Thresholds::Score { alpha, beta } = *thresholds else {
            unreachable!("thresholds checked by caller");
        };
        scalar_assign(aggregate.score(), alpha, beta, self.eps)
    }
}

impl Regime for ClosenessRegime {
    fn kind(&self) -> RegimeKind {
        RegimeKind::Closeness
    }

    fn le(&self, a: &Pfn, b: &Pfn) -> bool {
        a.closeness() <= b.closeness() + self.eps
    }

    fn value(&self, g: &Pfn) -> Option<f64> {
        Some(g.closeness())
    }

    fn check_thresholds(&self, thresholds: &Thresholds) -> Result<()> {
        match *thresholds {
            Thresholds::Closeness { alpha, beta } => {
                check_scalar_bounds(self.kind(), alpha, beta, 0.0)
            }
            _ => Err(mismatch(self.kind(), thresholds)),
        }
    }

    fn assign(&self, aggregate: &Pfn, thresholds: &Thresholds) -> Region {
        let Thresholds::Closeness { alpha, beta } = *thresholds else {
            unreachable!("thresholds checked by caller");
        };
        scalar_assign(aggregate.closeness(), alpha, beta, self.eps)
    }
}

/// Built-in regime of the given kind with tolerance `eps`.
pub fn builtin(kind: RegimeKind, eps: f64) -> Arc<dyn Regime> {
    match kind {
        RegimeKind::PfnOrder => Arc::new(PfnOrderRegime { eps }),
        RegimeKind::Score => Arc::new(ScoreRegime { eps }),
        RegimeKind::Closeness => Arc::new(ClosenessRegime { eps }),
    }
}

/// Regimes looked up by name.
#[derive(Debug, Clone)]
pub struct RegimeRegistry {
    regimes: BTreeMap<String, Arc<dyn Regime>>,
}

impl Default for RegimeRegistry {
    fn default() -> Self {
        RegimeRegistry::with_tolerance(EPS_CMP)
    }
}

impl RegimeRegistry {
    pub fn empty() -> Self {
        RegimeRegistry {
            regimes: BTreeMap::new(),
        }
    }

    /// Registry holding the three built-in regimes at tolerance `eps`.
    pub fn with_tolerance(eps: f64) -> Self {
        let mut reg = RegimeRegistry::empty();
        for kind in RegimeKind::ALL {
            reg.register_arc(builtin(kind, eps));
        }
        reg
    }

    pub fn register<R: Regime + 'static>(&mut self, regime: R) {
        self.register_arc(Arc::new(regime));
    }

    pub fn register_arc(&mut self, regime: Arc<dyn Regime>) {
        self.regimes.insert(regime.name().to_string(), regime);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Regime>> {
        self.regimes
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownRegime(name.to_string()))
    }

    pub fn kind(&self, kind: RegimeKind) -> Arc<dyn Regime> {
        self.get(kind.name())
            .unwrap_or_else(|_| builtin(kind, EPS_CMP))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.regimes.keys().map(String::as_str)
    }
}
