//! Positive / central / negative alliances from thresholds on aggregated
//! attitudes.

use serde::Serialize;

use crate::error::Result;
use crate::pfn::Pfn;
use crate::regime::{ClosenessRegime, PfnOrderRegime, Regime, RegimeKind, Region, ScoreRegime};
use crate::system::{aggregate_all, AgentAggregate, Pfis};

/// Threshold pair for one regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Thresholds {
    /// `upper` plays γ°, `lower` plays γ∘.
    Pfn { upper: Pfn, lower: Pfn },
    /// `-1 <= beta < alpha <= 1` on scores.
    Score { alpha: f64, beta: f64 },
    /// `0 <= beta < alpha <= 1` on closeness indices.
    Closeness { alpha: f64, beta: f64 },
}

impl Thresholds {
    pub fn kind(&self) -> RegimeKind {
        match self {
            Thresholds::Pfn { .. } => RegimeKind::PfnOrder,
            Thresholds::Score { .. } => RegimeKind::Score,
            Thresholds::Closeness { .. } => RegimeKind::Closeness,
        }
    }
}

/// Disjoint alliances covering every agent, in agent order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlliancePartition {
    pub regime: RegimeKind,
    pub positive: Vec<String>,
    pub central: Vec<String>,
    pub negative: Vec<String>,
    pub unclassified: Vec<String>,
}

impl AlliancePartition {
    pub fn empty(regime: RegimeKind) -> Self {
        AlliancePartition {
            regime,
            positive: Vec::new(),
            central: Vec::new(),
            negative: Vec::new(),
            unclassified: Vec::new(),
        }
    }

    /// Collects `(agent, region)` pairs, preserving their order.
    pub fn from_regions<'a>(
        regime: RegimeKind,
        regions: impl IntoIterator<Item = (&'a str, Region)>,
    ) -> Self {
        let mut part = AlliancePartition::empty(regime);
        for (agent, region) in regions {
            part.set_mut(region).push(agent.to_string());
        }
        part
    }

    pub fn set(&self, region: Region) -> &[String] {
        match region {
            Region::Positive => &self.positive,
            Region::Central => &self.central,
            Region::Negative => &self.negative,
            Region::Unclassified => &self.unclassified,
        }
    }

    fn set_mut(&mut self, region: Region) -> &mut Vec<String> {
        match region {
            Region::Positive => &mut self.positive,
            Region::Central => &mut self.central,
            Region::Negative => &mut self.negative,
            Region::Unclassified => &mut self.unclassified,
        }
    }

    pub fn region_of(&self, agent: &str) -> Option<Region> {
        [
            Region::Positive,
            Region::Central,
            Region::Negative,
            Region::Unclassified,
        ]
        .into_iter()
        .find(|r| self.set(*r).iter().any(|a| a == agent))
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.central.len() + self.negative.len() + self.unclassified.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Partitions precomputed aggregates under `regime`.
pub fn partition_aggregates(
    aggregates: &[AgentAggregate],
    regime: &dyn Regime,
    thresholds: &Thresholds,
) -> Result<AlliancePartition> {
    regime.check_thresholds(thresholds)?;
    Ok(AlliancePartition::from_regions(
        regime.kind(),
        aggregates
            .iter()
            .map(|a| (a.agent.as_str(), regime.assign(&a.aggregate, thresholds))),
    ))
}

pub fn partition(
    s: &Pfis,
    regime: &dyn Regime,
    thresholds: &Thresholds,
) -> Result<AlliancePartition> {
    partition_aggregates(&aggregate_all(s), regime, thresholds)
}

pub fn partition_pfn(s: &Pfis, thresholds: &Thresholds) -> Result<AlliancePartition> {
    partition(s, &PfnOrderRegime::default(), thresholds)
}

pub fn partition_score(s: &Pfis, thresholds: &Thresholds) -> Result<AlliancePartition> {
    partition(s, &ScoreRegime::default(), thresholds)
}

pub fn partition_closeness(s: &Pfis, thresholds: &Thresholds) -> Result<AlliancePartition> {
    partition(s, &ClosenessRegime::default(), thresholds)
}
