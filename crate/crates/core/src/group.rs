//! Multi-expert minimum-risk classification.
//!
//! A panel of `m` loss functions with expert weights `k_i` yields, per
//! agent and action, the weighted arithmetic mean of the per-expert
//! expected-loss components:
//!
//! ```text
//! P( Σ k_i sqrt(1 - (1-μ⁽ⁱ⁾_aP²)^p (1-μ⁽ⁱ⁾_aN²)^(1-p)),  Σ k_i ν⁽ⁱ⁾_aP^p ν⁽ⁱ⁾_aN^(1-p) )
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pfn::{check_weights, Pfn, EPS_CMP};
use crate::regime::{builtin, Action, Regime, RegimeKind};
use crate::risk::{
    check_probability, classify_losses, mixed_loss_components, validate_loss, Classification,
    LossFunction,
};
use crate::system::{aggregate_all, Pfis};

#[derive(Clone, Debug, PartialEq)]
pub struct LossPanel {
    losses: Vec<LossFunction>,
    expert_weights: Vec<f64>,
    modes: Vec<BTreeSet<RegimeKind>>,
}

#[derive(Serialize, Deserialize)]
struct PanelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    experts: Vec<LossFunction>,
}

impl LossPanel {
    /// Every expert must pass [`validate_loss`]; weights must be
    /// non-negative and sum to one.
    pub fn new(losses: Vec<LossFunction>, expert_weights: Vec<f64>) -> Result<Self> {
        if losses.is_empty() {
            return Err(Error::Shape(
                "a loss panel needs at least one expert".into(),
            ));
        }
        if losses.len() != expert_weights.len() {
            return Err(Error::Shape(format!(
                "{} experts but {} weights",
                losses.len(),
                expert_weights.len()
            )));
        }
        check_weights(&expert_weights)?;
        let modes = losses
            .iter()
            .enumerate()
            .map(|(i, l)| {
                validate_loss(l).map_err(|e| Error::LossOrder(format!("expert {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LossPanel {
            losses,
            expert_weights,
            modes,
        })
    }

    /// Panel with equal weights `1/m`.
    pub fn uniform(losses: Vec<LossFunction>) -> Result<Self> {
        let m = losses.len().max(1);
        LossPanel::new(losses, vec![1.0 / m as f64; m])
    }

    pub fn single(loss: LossFunction) -> Result<Self> {
        LossPanel::new(vec![loss], vec![1.0])
    }

    /// Parses `{"weights": [...], "experts": [...]}`; missing weights are
    /// uniform.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PanelFile = serde_json::from_str(text)?;
        match file.weights {
            Some(w) => LossPanel::new(file.experts, w),
            None => LossPanel::uniform(file.experts),
        }
    }

    pub fn to_json(&self) -> String {
        let file = PanelFile {
            weights: Some(self.expert_weights.clone()),
            experts: self.losses.clone(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn losses(&self) -> &[LossFunction] {
        &self.losses
    }

    pub fn expert_weights(&self) -> &[f64] {
        &self.expert_weights
    }

    pub fn len(&self) -> usize {
        self.losses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.losses.is_empty()
    }

    /// Monotonicity modes shared by every expert. May be empty.
    pub fn common_modes(&self) -> BTreeSet<RegimeKind> {
        let mut iter = self.modes.iter();
        let first = iter.next().cloned().unwrap_or_default();
        iter.fold(first, |acc, m| acc.intersection(m).copied().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupRiskRow {
    pub agent: String,
    pub gloss_p: Pfn,
    pub gloss_b: Pfn,
    pub gloss_n: Pfn,
}

impl GroupRiskRow {
    pub fn losses(&self) -> [Pfn; 3] {
        [self.gloss_p, self.gloss_b, self.gloss_n]
    }
}

/// The group expected-loss grid and its entry-wise score and closeness.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMatrices {
    pub pfn: Vec<GroupRiskRow>,
    pub score: Vec<[f64; 3]>,
    pub closeness: Vec<[f64; 3]>,
}

pub fn group_expected_loss(p: f64, panel: &LossPanel, action: Action) -> Result<Pfn> {
    check_probability(p)?;
    let (mut mu, mut nu) = (0.0, 0.0);
    for (l, k) in panel.losses.iter().zip(&panel.expert_weights) {
        let (x, not_x) = l.losses_for(action);
        let (m, n) = mixed_loss_components(p, &x, &not_x);
        mu += k * m;
        nu += k * n;
    }
    Pfn::new(mu.min(1.0), nu.min(1.0))
}

pub fn group_expected_loss_matrix(s: &Pfis, panel: &LossPanel) -> Result<Vec<GroupRiskRow>> {
    aggregate_all(s)
        .into_iter()
        .map(|a| {
            let p = a.closeness;
            Ok(GroupRiskRow {
                gloss_p: group_expected_loss(p, panel, Action::P)?,
                gloss_b: group_expected_loss(p, panel, Action::B)?,
                gloss_n: group_expected_loss(p, panel, Action::N)?,
                agent: a.agent,
            })
        })
        .collect()
}

pub fn group_matrices(s: &Pfis, panel: &LossPanel) -> Result<GroupMatrices> {
    let pfn = group_expected_loss_matrix(s, panel)?;
    let score = pfn.iter().map(|r| r.losses().map(|g| g.score())).collect();
    let closeness = pfn
        .iter()
        .map(|r| r.losses().map(|g| g.closeness()))
        .collect();
    Ok(GroupMatrices {
        pfn,
        score,
        closeness,
    })
}

pub fn classify_group_with(row: &GroupRiskRow, regime: &dyn Regime) -> Classification {
    classify_losses(&row.agent, &row.losses(), regime)
}

pub fn classify_group(row: &GroupRiskRow, rule: RegimeKind) -> Classification {
    classify_group_with(row, &*builtin(rule, EPS_CMP))
}
