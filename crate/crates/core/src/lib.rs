//! Conflict analysis over Pythagorean fuzzy information systems.
//!
//! Agents state attitudes towards issues as Pythagorean fuzzy numbers
//! ([`Pfn`]). The crate aggregates each agent's attitudes, splits agents
//! into positive, central and negative alliances by thresholds, and
//! classifies them by minimum expected loss under one loss function or a
//! weighted panel of them. Each comparison style is a [`Regime`] looked up
//! by name in a [`RegimeRegistry`].

pub mod alliance;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod pfn;
pub mod regime;
pub mod reproduce;
pub mod risk;
pub mod system;

pub use alliance::{
    partition, partition_closeness, partition_pfn, partition_score, AlliancePartition, Thresholds,
};
pub use error::{Error, Result};
pub use group::{
    classify_group, classify_group_with, group_expected_loss, group_matrices, GroupMatrices,
    GroupRiskRow, LossPanel,
};
pub use pfn::{
    closeness, distance, hesitancy, pfn_add, pfn_new, pfn_scale, quasi_compare, score,
    weighted_average, Pfn, TriStateOrder, EPS_CMP, EPS_VALID, EPS_WEIGHT,
};
pub use regime::{Action, Regime, RegimeKind, RegimeRegistry, Region};
pub use risk::{
    classify, classify_closeness, classify_pfn_order, classify_score, closeness_matrix,
    expected_loss, expected_loss_matrix, score_matrix, validate_loss, Classification, LossFunction,
    RiskRow,
};
pub use system::{
    aggregate_agent, aggregate_all, load_system, pythagorean_matrix, read_system, AgentAggregate,
    Pfis, PythagoreanMatrix, SystemFormat,
};
