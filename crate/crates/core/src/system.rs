//! Pythagorean fuzzy information systems: agents × issues grids of PFNs
//! with issue weights, plus CSV/JSON ingestion and row-wise aggregation.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pfn::{check_weights, weighted_average, Pfn};

/// Marker in the first column of the optional CSV weights row.
pub const WEIGHTS_MARKER: &str = "!weights";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemFormat {
    Csv,
    Json,
}

impl FromStr for SystemFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(SystemFormat::Csv),
            "json" => Ok(SystemFormat::Json),
            other => Err(Error::Parse(format!("unknown system format {other:?}"))),
        }
    }
}

impl fmt::Display for SystemFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemFormat::Csv => "csv",
            SystemFormat::Json => "json",
        })
    }
}

/// Agents × issues grid of PFNs with issue weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Pfis {
    agents: Vec<String>,
    issues: Vec<String>,
    values: Vec<Vec<Pfn>>,
    weights: Vec<f64>,
}

/// Explicit matrix view of a [`Pfis`], rows aligned with its agents.
#[derive(Clone, Debug, PartialEq)]
pub struct PythagoreanMatrix {
    pub rows: Vec<Vec<Pfn>>,
}

impl PythagoreanMatrix {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.rows.first().map_or(0, Vec::len))
    }
}

/// One agent's aggregate attitude with its score and closeness index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgentAggregate {
    pub agent: String,
    pub aggregate: Pfn,
    pub score: f64,
    pub closeness: f64,
}

/// Result of loading a system from a source that may omit weights.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub system: Pfis,
    /// `true` when the source had no weights and uniform ones were assumed.
    pub weights_defaulted: bool,
}

impl Pfis {
    /// Validates and assembles a system. `weights = None` means uniform `1/m`.
    pub fn new(
        agents: Vec<String>,
        issues: Vec<String>,
        values: Vec<Vec<Pfn>>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::Parse("system has no agents".into()));
        }
        if issues.is_empty() {
            return Err(Error::Parse("system has no issues".into()));
        }
        check_unique("agent", &agents)?;
        check_unique("issue", &issues)?;
        if values.len() != agents.len() {
            return Err(Error::Shape(format!(
                "{} agents but {} value rows",
                agents.len(),
                values.len()
            )));
        }
        if let Some((i, row)) = values
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != issues.len())
        {
            return Err(Error::Shape(format!(
                "row {} ({}) has {} cells, expected {}",
                i + 1,
                agents[i],
                row.len(),
                issues.len()
            )));
        }
        let m = issues.len();
        let weights = weights.unwrap_or_else(|| vec![1.0 / m as f64; m]);
        if weights.len() != m {
            return Err(Error::Weight(format!(
                "{} weights for {m} issues",
                weights.len()
            )));
        }
        check_weights(&weights)?;
        Ok(Pfis {
            agents,
            issues,
            values,
            weights,
        })
    }

    /// Like [`Pfis::new`] but from raw `(mu, nu)` pairs; the first invalid
    /// cell in row-major order is reported with its coordinates.
    pub fn from_raw(
        agents: Vec<String>,
        issues: Vec<String>,
        raw: Vec<Vec<(f64, f64)>>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(raw.len());
        for (i, row) in raw.into_iter().enumerate() {
            let mut cells = Vec::with_capacity(row.len());
            for (j, (mu, nu)) in row.into_iter().enumerate() {
                let pfn = Pfn::new(mu, nu).map_err(|e| cell_error(&agents, &issues, i, j, e))?;
                cells.push(pfn);
            }
            values.push(cells);
        }
        Pfis::new(agents, issues, values, weights)
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn issues(&self) -> &[String] {
        &self.issues
    }

    pub fn values(&self) -> &[Vec<Pfn>] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn n_issues(&self) -> usize {
        self.issues.len()
    }

    pub fn agent_index(&self, agent: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| Error::UnknownAgent(agent.to_string()))
    }

    /// Returns a copy with one agent's row removed.
    pub fn without_agent(&self, agent: &str) -> Result<Pfis> {
        let idx = self.agent_index(agent)?;
        let mut agents = self.agents.clone();
        let mut values = self.values.clone();
        agents.remove(idx);
        values.remove(idx);
        Pfis::new(
            agents,
            self.issues.clone(),
            values,
            Some(self.weights.clone()),
        )
    }

    /// Returns a copy with one cell replaced.
    pub fn with_cell(&self, row: usize, col: usize, value: Pfn) -> Result<Pfis> {
        let mut values = self.values.clone();
        let cell = values
            .get_mut(row)
            .and_then(|r| r.get_mut(col))
            .ok_or_else(|| Error::Shape(format!("no cell at ({row}, {col})")))?;
        *cell = value;
        Pfis::new(
            self.agents.clone(),
            self.issues.clone(),
            values,
            Some(self.weights.clone()),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(Vec::new());
        let header = std::iter::once("agent".to_string()).chain(self.issues.iter().cloned());
        w.write_record(header).expect("in-memory write");
        let weights = std::iter::once(WEIGHTS_MARKER.to_string())
            .chain(self.weights.iter().map(|k| k.to_string()));
        w.write_record(weights).expect("in-memory write");
        for (agent, row) in self.agents.iter().zip(&self.values) {
            let rec = std::iter::once(agent.clone())
                .chain(row.iter().map(|g| format!("{},{}", g.mu(), g.nu())));
            w.write_record(rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn to_json(&self) -> String {
        let file = SystemFile {
            agents: self.agents.clone(),
            issues: self.issues.clone(),
            weights: Some(self.weights.clone()),
            values: self
                .values
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|g| RawCell {
                            mu: g.mu(),
                            nu: g.nu(),
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn serialize(&self, format: SystemFormat) -> String {
        match format {
            SystemFormat::Csv => self.to_csv(),
            SystemFormat::Json => self.to_json(),
        }
    }
}

fn check_unique(kind: &str, ids: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::Parse(format!("duplicate {kind} identifier {id:?}")));
        }
    }
    Ok(())
}

fn cell_error(agents: &[String], issues: &[String], i: usize, j: usize, source: Error) -> Error {
    Error::Cell {
        row: i + 1,
        col: j + 1,
        agent: agents.get(i).cloned().unwrap_or_default(),
        issue: issues.get(j).cloned().unwrap_or_default(),
        source: Box::new(source),
    }
}

#[derive(Serialize, Deserialize)]
struct SystemFile {
    agents: Vec<String>,
    issues: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    values: Vec<Vec<RawCell>>,
}

#[derive(Serialize, Deserialize)]
struct RawCell {
    mu: f64,
    nu: f64,
}

fn parse_real(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("{what}: cannot parse {text:?} as a real number")))
}

fn parse_cell(text: &str, row: usize, col: usize) -> Result<(f64, f64)> {
    let mut parts = text.split(',');
    let (Some(mu), Some(nu), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::Parse(format!(
            "row {row}, column {col}: expected \"mu,nu\", found {text:?}"
        )));
    };
    let at = format!("row {row}, column {col}");
    Ok((parse_real(mu, &at)?, parse_real(nu, &at)?))
}

fn read_csv(source: impl Read) -> Result<Loaded> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse("empty input: missing header row".into()))??;
    let issues: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

    let mut weights = None;
    let mut agents = Vec::new();
    let mut raw = Vec::new();
    for (idx, record) in records.enumerate() {
        let record = record?;
        let first = record.get(0).unwrap_or_default();
        if first == WEIGHTS_MARKER {
            if idx != 0 {
                return Err(Error::Parse(
                    "weights row must directly follow the header".into(),
                ));
            }
            let ks = record
                .iter()
                .skip(1)
                .map(|t| parse_real(t, "weights row"))
                .collect::<Result<Vec<_>>>()?;
            weights = Some(ks);
            continue;
        }
        let row = agents.len() + 1;
        let cells = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, t)| parse_cell(t, row, j + 1))
            .collect::<Result<Vec<_>>>()?;
        agents.push(first.to_string());
        raw.push(cells);
    }
    let weights_defaulted = weights.is_none();
    let system = Pfis::from_raw(agents, issues, raw, weights)?;
    Ok(Loaded {
        system,
        weights_defaulted,
    })
}

fn read_json(mut source: impl Read) -> Result<Loaded> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::Parse(format!("cannot read input: {e}")))?;
    let file: SystemFile = serde_json::from_str(&text)?;
    let weights_defaulted = file.weights.is_none();
    let raw = file
        .values
        .into_iter()
        .map(|r| r.into_iter().map(|c| (c.mu, c.nu)).collect())
        .collect();
    let system = Pfis::from_raw(file.agents, file.issues, raw, file.weights)?;
    Ok(Loaded {
        system,
        weights_defaulted,
    })
}

/// Loads a system and reports whether weights were defaulted.
pub fn read_system(source: impl Read, format: SystemFormat) -> Result<Loaded> {
    match format {
        SystemFormat::Csv => read_csv(source),
        SystemFormat::Json => read_json(source),
    }
}

pub fn load_system(source: impl Read, format: SystemFormat) -> Result<Pfis> {
    read_system(source, format).map(|l| l.system)
}

pub fn pythagorean_matrix(s: &Pfis) -> PythagoreanMatrix {
    PythagoreanMatrix {
        rows: s.values.clone(),
    }
}

/// Weighted average of one agent's row under the system's issue weights.
pub fn aggregate_agent(s: &Pfis, agent: &str) -> Result<Pfn> {
    let idx = s.agent_index(agent)?;
    weighted_average(&s.values[idx], &s.weights)
}

pub fn aggregate_all(s: &Pfis) -> Vec<AgentAggregate> {
    s.agents
        .iter()
        .zip(&s.values)
        .map(|(agent, row)| {
            let aggregate =
                weighted_average(row, &s.weights).expect("validated system aggregates cleanly");
            AgentAggregate {
                agent: agent.clone(),
                aggregate,
                score: aggregate.score(),
                closeness: aggregate.closeness(),
            }
        })
        .collect()
}
