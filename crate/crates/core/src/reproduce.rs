//! Recomputes the bundled reference example end to end and compares every
//! published figure against the recomputation at full precision.

use std::fmt;

use crate::alliance::{partition, AlliancePartition, Thresholds};
use crate::error::Result;
use crate::fixtures;
use crate::group::{classify_group_with, group_matrices, LossPanel};
use crate::pfn::Pfn;
use crate::regime::{RegimeKind, RegimeRegistry};
use crate::risk::{classify, expected_loss_matrix, value_grid, LossFunction};
use crate::system::{aggregate_all, Pfis};

pub const TOL_AGGREGATE: f64 = 1e-12;
pub const TOL_SCORE: f64 = 1e-9;
pub const TOL_CLOSENESS: f64 = 5e-4;
pub const TOL_MATRIX: f64 = 2e-3;

/// Published aggregates `(mu, nu)` per agent.
pub const AGGREGATES: [(f64, f64); 6] = [
    (0.90, 0.16),
    (0.38, 0.64),
    (0.20, 0.80),
    (0.30, 0.70),
    (0.36, 0.70),
    (0.48, 0.58),
];
pub const AGGREGATE_SCORES: [f64; 6] = [0.7844, -0.2652, -0.6000, -0.4000, -0.3604, -0.1060];
pub const AGGREGATE_CLOSENESS: [f64; 6] = [0.8368, 0.4083, 0.2727, 0.3592, 0.3695, 0.4584];

pub const EXPECTED_LOSS: [[(f64, f64); 3]; 6] = [
    [(0.4937, 0.6380), (0.5859, 0.5151), (0.8675, 0.3521)],
    [(0.7920, 0.3522), (0.5450, 0.5570), (0.7103, 0.5360)],
    [(0.8378, 0.2919), (0.5308, 0.5709), (0.6187, 0.6122)],
    [(0.8101, 0.3291), (0.5399, 0.5620), (0.6808, 0.5625)],
    [(0.8065, 0.3338), (0.5410, 0.5609), (0.6873, 0.5568)],
    [(0.7694, 0.3800), (0.5505, 0.5514), (0.7393, 0.5080)],
];
pub const SCORE_MATRIX: [[f64; 3]; 6] = [
    [-0.1633, 0.0779, 0.6286],
    [0.5031, -0.0132, 0.2172],
    [0.6168, -0.0442, 0.0080],
    [0.5480, -0.0243, 0.1471],
    [0.5390, -0.0219, 0.1623],
    [0.4476, -0.0010, 0.2885],
];
pub const CLOSENESS_MATRIX: [[f64; 3]; 6] = [
    [0.4395, 0.5280, 0.7797],
    [0.7015, 0.4953, 0.5899],
    [0.7543, 0.4841, 0.5032],
    [0.7218, 0.4913, 0.5603],
    [0.7176, 0.4921, 0.5666],
    [0.6771, 0.4997, 0.6207],
];

pub const GROUP_EXPECTED_LOSS: [[(f64, f64); 3]; 6] = [
    [(0.4623, 0.6731), (0.5412, 0.5926), (0.7617, 0.2503)],
    [(0.7203, 0.3558), (0.5571, 0.5769), (0.6020, 0.4633)],
    [(0.7660, 0.2929), (0.5609, 0.5730), (0.5186, 0.5679)],
    [(0.7380, 0.3314), (0.5586, 0.5754), (0.5746, 0.4986)],
    [(0.7344, 0.3364), (0.5583, 0.5757), (0.5806, 0.4909)],
    [(0.6987, 0.3852), (0.5554, 0.5786), (0.6295, 0.4273)],
];
pub const GROUP_SCORE_MATRIX: [[f64; 3]; 6] = [
    [-0.2393, -0.0583, 0.5176],
    [0.3922, -0.0224, 0.1478],
    [0.5009, -0.0137, -0.0536],
    [0.4349, -0.0191, 0.0816],
    [0.4263, -0.0198, 0.0961],
    [0.3398, -0.0262, 0.2137],
];
pub const GROUP_CLOSENESS_MATRIX: [[f64; 3]; 6] = [
    [0.4103, 0.4785, 0.6907],
    [0.6448, 0.4918, 0.5519],
    [0.6887, 0.4950, 0.4810],
    [0.6616, 0.4930, 0.5287],
    [0.6582, 0.4927, 0.5338],
    [0.6246, 0.4903, 0.5752],
];

/// Inputs of a reproduction run. `Default` is the bundled reference data.
#[derive(Clone, Debug)]
pub struct ReferenceData {
    pub system: Pfis,
    pub loss: LossFunction,
    pub panel: LossPanel,
}

impl Default for ReferenceData {
    fn default() -> Self {
        ReferenceData {
            system: fixtures::reference_system(),
            loss: fixtures::reference_loss(),
            panel: fixtures::reference_panel(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict}  {:<40} {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn numeric(&mut self, name: &str, actual: &[f64], expected: &[f64], tol: f64) {
        if actual.len() != expected.len() {
            let detail = format!("expected {} values, got {}", expected.len(), actual.len());
            self.checks.push(Check {
                name: name.to_string(),
                passed: false,
                detail,
            });
            return;
        }
        let (worst, max_dev) = actual
            .iter()
            .zip(expected)
            .map(|(a, e)| (a - e).abs())
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, d)| if d > best.1 { (i, d) } else { best },
            );
        let passed = max_dev <= tol;
        let mut detail = format!(
            "max deviation {max_dev:.3e} (tolerance {tol:.0e}, {} values)",
            expected.len()
        );
        if !passed {
            detail.push_str(&format!(
                "; entry {} recomputed {:.6}, reference {}",
                worst, actual[worst], expected[worst]
            ));
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    fn partition(&mut self, name: &str, actual: &AlliancePartition, expected: [&[&str]; 4]) {
        let got = [
            &actual.positive,
            &actual.central,
            &actual.negative,
            &actual.unclassified,
        ];
        let passed = got
            .iter()
            .zip(expected)
            .all(|(g, e)| g.iter().map(String::as_str).eq(e.iter().copied()));
        let detail = format!(
            "positive={:?} central={:?} negative={:?} unclassified={:?}",
            actual.positive, actual.central, actual.negative, actual.unclassified
        );
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn flatten_pairs(rows: &[[(f64, f64); 3]]) -> Vec<f64> {
    rows.iter().flatten().flat_map(|&(m, n)| [m, n]).collect()
}

fn flatten_pfns<'a>(rows: impl IntoIterator<Item = [Pfn; 3]> + 'a) -> Vec<f64> {
    rows.into_iter()
        .flatten()
        .flat_map(|g| [g.mu(), g.nu()])
        .collect()
}

const X1: &[&str] = &["x1"];
const NONE: &[&str] = &[];

/// Runs every check over `data` with the built-in regimes.
pub fn run(data: &ReferenceData) -> Result<Report> {
    run_with(data, &RegimeRegistry::default())
}

pub fn run_with(data: &ReferenceData, regimes: &RegimeRegistry) -> Result<Report> {
    let mut report = Report::default();
    let pfn_order = regimes.kind(RegimeKind::PfnOrder);
    let score = regimes.kind(RegimeKind::Score);
    let closeness = regimes.kind(RegimeKind::Closeness);

    let aggregates = aggregate_all(&data.system);
    let agg_values: Vec<f64> = aggregates
        .iter()
        .flat_map(|a| [a.aggregate.mu(), a.aggregate.nu()])
        .collect();
    let agg_expected: Vec<f64> = AGGREGATES.iter().flat_map(|&(m, n)| [m, n]).collect();
    report.numeric("aggregates", &agg_values, &agg_expected, TOL_AGGREGATE);

    let upper = Pfn::new(0.7, 0.4)?;
    let lower = Pfn::new(0.25, 0.85)?;
    let part = partition(&data.system, &*pfn_order, &Thresholds::Pfn { upper, lower })?;
    report.partition(
        "quasi-order alliances",
        &part,
        [X1, &["x2", "x4", "x5", "x6"], NONE, &["x3"]],
    );

    let scores: Vec<f64> = aggregates.iter().map(|a| a.score).collect();
    report.numeric("aggregate scores", &scores, &AGGREGATE_SCORES, TOL_SCORE);
    let part = partition(
        &data.system,
        &*score,
        &Thresholds::Score {
            alpha: 0.5,
            beta: -0.5,
        },
    )?;
    report.partition(
        "score alliances",
        &part,
        [X1, &["x2", "x4", "x5", "x6"], &["x3"], NONE],
    );

    let cls: Vec<f64> = aggregates.iter().map(|a| a.closeness).collect();
    report.numeric(
        "aggregate closeness",
        &cls,
        &AGGREGATE_CLOSENESS,
        TOL_CLOSENESS,
    );
    let part = partition(
        &data.system,
        &*closeness,
        &Thresholds::Closeness {
            alpha: 0.75,
            beta: 0.3,
        },
    )?;
    report.partition(
        "closeness alliances",
        &part,
        [X1, &["x2", "x4", "x5", "x6"], &["x3"], NONE],
    );

    let rows = expected_loss_matrix(&data.system, &data.loss)?;
    report.numeric(
        "expected loss matrix",
        &flatten_pfns(rows.iter().map(|r| r.losses())),
        &flatten_pairs(&EXPECTED_LOSS),
        TOL_MATRIX,
    );
    let decide = |regime: &dyn crate::regime::Regime| {
        AlliancePartition::from_regions(
            regime.kind(),
            rows.iter()
                .map(|r| (r.agent.as_str(), classify(r, regime).region)),
        )
    };
    report.partition(
        "quasi-order risk classification",
        &decide(&*pfn_order),
        [X1, &["x2", "x5", "x6"], NONE, &["x3", "x4"]],
    );

    let grid = value_grid(&rows, Pfn::score);
    report.numeric(
        "score matrix",
        &grid.concat(),
        &SCORE_MATRIX.concat(),
        TOL_MATRIX,
    );
    report.partition(
        "score risk classification",
        &decide(&*score),
        [X1, &["x2", "x3", "x4", "x5", "x6"], NONE, NONE],
    );

    let grid = value_grid(&rows, Pfn::closeness);
    report.numeric(
        "closeness matrix",
        &grid.concat(),
        &CLOSENESS_MATRIX.concat(),
        TOL_MATRIX,
    );
    report.partition(
        "closeness risk classification",
        &decide(&*closeness),
        [X1, &["x2", "x3", "x4", "x5", "x6"], NONE, NONE],
    );

    let group = group_matrices(&data.system, &data.panel)?;
    let decide_group = |regime: &dyn crate::regime::Regime| {
        AlliancePartition::from_regions(
            regime.kind(),
            group
                .pfn
                .iter()
                .map(|r| (r.agent.as_str(), classify_group_with(r, regime).region)),
        )
    };
    report.numeric(
        "group expected loss matrix",
        &flatten_pfns(group.pfn.iter().map(|r| r.losses())),
        &flatten_pairs(&GROUP_EXPECTED_LOSS),
        TOL_MATRIX,
    );
    report.partition(
        "group quasi-order classification",
        &decide_group(&*pfn_order),
        [X1, &["x2", "x4", "x5", "x6"], NONE, &["x3"]],
    );
    report.numeric(
        "group score matrix",
        &group.score.concat(),
        &GROUP_SCORE_MATRIX.concat(),
        TOL_MATRIX,
    );
    report.partition(
        "group score classification",
        &decide_group(&*score),
        [X1, &["x2", "x4", "x5", "x6"], &["x3"], NONE],
    );
    report.numeric(
        "group closeness matrix",
        &group.closeness.concat(),
        &GROUP_CLOSENESS_MATRIX.concat(),
        TOL_MATRIX,
    );
    report.partition(
        "group closeness classification",
        &decide_group(&*closeness),
        [X1, &["x2", "x4", "x5", "x6"], &["x3"], NONE],
    );

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_matches_except_published_x6_closeness() {
        let report = run(&ReferenceData::default()).unwrap();
        assert_eq!(report.checks.len(), 18);
        // The reference closeness for x6 reads 0.4584; P(0.48, 0.58) gives
        // 0.6636 / 1.4332 = 0.46302, which is also the value every
        // reference matrix row for x6 is consistent with.
        let failed: Vec<_> = report.failures().collect();
        assert_eq!(failed.len(), 1, "{failed:?}");
        assert_eq!(failed[0].name, "aggregate closeness");
        assert!(
            failed[0].detail.contains("entry 5 recomputed 0.463020"),
            "{}",
            failed[0].detail
        );
    }

    #[test]
    fn perturbed_cell_fails_matrix_checks() {
        let mut data = ReferenceData::default();
        data.system = data
            .system
            .with_cell(0, 0, Pfn::new(0.5, 0.5).unwrap())
            .unwrap();
        let report = run(&data).unwrap();
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"expected loss matrix"), "{failed:?}");
        assert!(failed.contains(&"aggregates"));
        assert!(!report.all_passed());
    }
}
