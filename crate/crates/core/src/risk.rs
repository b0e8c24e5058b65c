//! Bayesian minimum-risk classification under one Pythagorean fuzzy loss
//! function.
//!
//! For an agent whose aggregate has closeness index `p`, the expected loss
//! of action `a` is `p·λ_aP ⊕ (1-p)·λ_aN`, which collapses to the product
//! form
//!
//! ```text
//! R(a|x) = P( sqrt(1 - (1-μ_aP²)^p (1-μ_aN²)^(1-p)),  ν_aP^p ν_aN^(1-p) )
//! ```
//!
//! Agents are then placed by the action with minimal expected loss under one
//! of the three [`Regime`]s.
//!
//! The score and closeness rules in the source material print `x ∈ POA(U)`
//! for their third case (`N` minimal). That is a typo: `N` minimal means the
//! negative alliance, as in the quasi-order rule, and that is what is
//! implemented here.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pfn::EPS_CMP;
use crate::pfn::{complement_product_sqrt, pow0, Pfn};
use crate::regime::{builtin, Action, Regime, RegimeKind, Region};
use crate::system::{aggregate_all, Pfis};

/// Six losses: `xy` is the loss of action `x` when the agent is (`y = p`)
/// or is not (`y = n`) in the target camp.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossFunction {
    pub pp: Pfn,
    pub bp: Pfn,
    pub np: Pfn,
    pub pn: Pfn,
    pub bn: Pfn,
    pub nn: Pfn,
}

impl LossFunction {
    /// `(λ_aP, λ_aN)` for `action`.
    pub fn losses_for(&self, action: Action) -> (Pfn, Pfn) {
        match action {
            Action::P => (self.pp, self.pn),
            Action::B => (self.bp, self.bn),
            Action::N => (self.np, self.nn),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Expected losses of one agent under the three actions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskRow {
    pub agent: String,
    pub loss_p: Pfn,
    pub loss_b: Pfn,
    pub loss_n: Pfn,
}

impl RiskRow {
    pub fn losses(&self) -> [Pfn; 3] {
        [self.loss_p, self.loss_b, self.loss_n]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub agent: String,
    pub region: Region,
    pub rule: RegimeKind,
}

/// Monotonicity modes in which `λ_PP <= λ_BP <= λ_NP` and
/// `λ_NN <= λ_BN <= λ_PN` both hold.
pub fn loss_modes(l: &LossFunction, eps: f64) -> BTreeSet<RegimeKind> {
    RegimeKind::ALL
        .into_iter()
        .filter(|&kind| {
            let r = builtin(kind, eps);
            r.le(&l.pp, &l.bp) && r.le(&l.bp, &l.np) && r.le(&l.nn, &l.bn) && r.le(&l.bn, &l.pn)
        })
        .collect()
}

/// Non-empty set of modes the loss function is monotone in.
pub fn validate_loss(l: &LossFunction) -> Result<BTreeSet<RegimeKind>> {
    let modes = loss_modes(l, EPS_CMP);
    if modes.is_empty() {
        return Err(Error::LossOrder(format!(
            "neither the quasi-order, score nor closeness chains hold for {}",
            describe(l)
        )));
    }
    Ok(modes)
}

fn describe(l: &LossFunction) -> String {
    format!(
        "pp={} bp={} np={} pn={} bn={} nn={}",
        l.pp, l.bp, l.np, l.pn, l.bn, l.nn
    )
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "conditional probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `(mu, nu)` of `p·x ⊕ (1-p)·not_x` in product form. The endpoints return
/// the corresponding loss untouched.
pub(crate) fn mixed_loss_components(p: f64, x: &Pfn, not_x: &Pfn) -> (f64, f64) {
    if p == 1.0 {
        return (x.mu(), x.nu());
    }
    if p == 0.0 {
        return (not_x.mu(), not_x.nu());
    }
    let q = 1.0 - p;
    let mu = complement_product_sqrt(&[(x.mu(), p), (not_x.mu(), q)]);
    let nu = pow0(x.nu(), p) * pow0(not_x.nu(), q);
    (mu, nu)
}

/// Expected loss of `action` for an agent with conditional probability `p`.
pub fn expected_loss(p: f64, l: &LossFunction, action: Action) -> Result<Pfn> {
    check_probability(p)?;
    let (x, not_x) = l.losses_for(action);
    let (mu, nu) = mixed_loss_components(p, &x, &not_x);
    // closure: nu^2 <= Π (1-mu_i^2)^e_i = 1 - mu^2; rounding stays within EPS_VALID
    Pfn::new(mu.min(1.0), nu.min(1.0))
}

/// One row per agent, using the closeness index of its aggregate as `p`.
pub fn expected_loss_matrix(s: &Pfis, l: &LossFunction) -> Result<Vec<RiskRow>> {
    aggregate_all(s)
        .into_iter()
        .map(|a| {
            let p = a.closeness;
            Ok(RiskRow {
                loss_p: expected_loss(p, l, Action::P)?,
                loss_b: expected_loss(p, l, Action::B)?,
                loss_n: expected_loss(p, l, Action::N)?,
                agent: a.agent,
            })
        })
        .collect()
}

/// Maps each row's losses through `f`, giving an `n × 3` grid.
pub fn value_grid(rows: &[RiskRow], f: impl Fn(&Pfn) -> f64) -> Vec<[f64; 3]> {
    rows.iter().map(|r| r.losses().map(|g| f(&g))).collect()
}

pub fn score_matrix(s: &Pfis, l: &LossFunction) -> Result<Vec<[f64; 3]>> {
    Ok(value_grid(&expected_loss_matrix(s, l)?, Pfn::score))
}

pub fn closeness_matrix(s: &Pfis, l: &LossFunction) -> Result<Vec<[f64; 3]>> {
    Ok(value_grid(&expected_loss_matrix(s, l)?, Pfn::closeness))
}

/// Region of the minimal expected loss under `regime`.
pub fn classify_losses(agent: &str, losses: &[Pfn; 3], regime: &dyn Regime) -> Classification {
    let region = regime
        .min_risk_action(losses)
        .map_or(Region::Unclassified, Action::region);
    Classification {
        agent: agent.to_string(),
        region,
        rule: regime.kind(),
    }
}

pub fn classify(row: &RiskRow, regime: &dyn Regime) -> Classification {
    classify_losses(&row.agent, &row.losses(), regime)
}

pub fn classify_pfn_order(row: &RiskRow) -> Classification {
    classify(row, &*builtin(RegimeKind::PfnOrder, EPS_CMP))
}

pub fn classify_score(row: &RiskRow) -> Classification {
    classify(row, &*builtin(RegimeKind::Score, EPS_CMP))
}

pub fn classify_closeness(row: &RiskRow) -> Classification {
    classify(row, &*builtin(RegimeKind::Closeness, EPS_CMP))
}
