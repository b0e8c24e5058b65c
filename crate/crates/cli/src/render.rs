//! Text rendering of result tables in csv, json and markdown.

use clap::ValueEnum;
use pfconflict_core::{AgentAggregate, AlliancePartition, Pfn, Region};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
    Markdown,
}

/// Fixed-decimal rendering; ties round to even and negative zero prints
/// without its sign.
pub fn num(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// The rounded value as a JSON number, so json output matches the text
/// formats digit for digit.
fn json_num(x: f64, precision: usize) -> Value {
    let rounded: f64 = num(x, precision).parse().expect("formatted float parses");
    json!(rounded)
}

fn json_pfn(g: &Pfn, precision: usize) -> Value {
    json!({ "mu": json_num(g.mu(), precision), "nu": json_num(g.nu(), precision) })
}

/// Cell content of one matrix entry.
#[derive(Clone, Copy, Debug)]
pub enum Entry {
    Pfn(Pfn),
    Real(f64),
}

impl Entry {
    fn text(&self, precision: usize, out: OutFormat) -> String {
        match self {
            Entry::Real(x) => num(*x, precision),
            Entry::Pfn(g) if out == OutFormat::Markdown => {
                format!("P({},{})", num(g.mu(), precision), num(g.nu(), precision))
            }
            Entry::Pfn(g) => format!("{},{}", num(g.mu(), precision), num(g.nu(), precision)),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            Entry::Real(x) => json_num(*x, precision),
            Entry::Pfn(g) => json_pfn(g, precision),
        }
    }
}

/// Agents by actions P, B, N.
#[derive(Clone, Debug)]
pub struct Matrix {
    pub title: String,
    pub rows: Vec<(String, [Entry; 3])>,
}

/// Everything one run prints, in order.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub aggregates: Vec<AgentAggregate>,
    pub matrix: Option<Matrix>,
    pub partition: Option<AlliancePartition>,
}

const ACTIONS: [&str; 3] = ["P", "B", "N"];
const REGIONS: [Region; 4] = [
    Region::Positive,
    Region::Central,
    Region::Negative,
    Region::Unclassified,
];

struct Table {
    title: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn markdown(&self, buf: &mut String) {
        buf.push_str(&format!("## {}\n\n", self.title));
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        buf.push_str(&line(&self.header));
        buf.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for row in &self.rows {
            buf.push_str(&line(row));
        }
    }

    fn csv(&self, buf: &mut String) {
        buf.push_str(&format!("# {}\n", self.title));
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            buf.push_str(&cells.join(","));
            buf.push('\n');
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

impl Output {
    pub fn render(&self, out: OutFormat, precision: usize) -> String {
        if out == OutFormat::Json {
            let mut text =
                serde_json::to_string_pretty(&self.json(precision)).expect("serializable");
            text.push('\n');
            return text;
        }
        let tables = self.tables(out, precision);
        let mut buf = String::new();
        for (i, t) in tables.iter().enumerate() {
            if i > 0 {
                buf.push('\n');
            }
            match out {
                OutFormat::Markdown => t.markdown(&mut buf),
                _ => t.csv(&mut buf),
            }
        }
        buf
    }

    fn tables(&self, out: OutFormat, precision: usize) -> Vec<Table> {
        let mut tables = Vec::new();
        if !self.aggregates.is_empty() {
            let header = ["agent", "mu", "nu", "score", "closeness"]
                .map(String::from)
                .to_vec();
            let rows = self
                .aggregates
                .iter()
                .map(|a| {
                    vec![
                        a.agent.clone(),
                        num(a.aggregate.mu(), precision),
                        num(a.aggregate.nu(), precision),
                        num(a.score, precision),
                        num(a.closeness, precision),
                    ]
                })
                .collect();
            tables.push(Table {
                title: "aggregates".into(),
                header,
                rows,
            });
        }
        if let Some(m) = &self.matrix {
            let header = std::iter::once("agent")
                .chain(ACTIONS)
                .map(String::from)
                .collect();
            let rows = m
                .rows
                .iter()
                .map(|(agent, es)| {
                    std::iter::once(agent.clone())
                        .chain(es.iter().map(|e| e.text(precision, out)))
                        .collect()
                })
                .collect();
            tables.push(Table {
                title: m.title.clone(),
                header,
                rows,
            });
        }
        if let Some(p) = &self.partition {
            let header = vec!["alliance".to_string(), "agents".to_string()];
            let rows = REGIONS
                .iter()
                .map(|&r| vec![r.to_string(), p.set(r).join(" ")])
                .collect();
            tables.push(Table {
                title: format!("partition ({})", p.regime.name()),
                header,
                rows,
            });
        }
        tables
    }

    pub fn json(&self, precision: usize) -> Value {
        let mut doc = Map::new();
        if !self.aggregates.is_empty() {
            let rows = self
                .aggregates
                .iter()
                .map(|a| {
                    json!({
                        "agent": a.agent,
                        "mu": json_num(a.aggregate.mu(), precision),
                        "nu": json_num(a.aggregate.nu(), precision),
                        "score": json_num(a.score, precision),
                        "closeness": json_num(a.closeness, precision),
                    })
                })
                .collect();
            doc.insert("aggregates".into(), Value::Array(rows));
        }
        if let Some(m) = &self.matrix {
            let rows = m
                .rows
                .iter()
                .map(|(agent, es)| {
                    let mut row = Map::new();
                    row.insert("agent".into(), json!(agent));
                    for (name, e) in ACTIONS.iter().zip(es) {
                        row.insert((*name).into(), e.json(precision));
                    }
                    Value::Object(row)
                })
                .collect();
            doc.insert(
                "matrix".into(),
                json!({ "title": m.title, "rows": Value::Array(rows) }),
            );
        }
        if let Some(p) = &self.partition {
            doc.insert(
                "partition".into(),
                serde_json::to_value(p).expect("serializable"),
            );
        }
        Value::Object(doc)
    }
}
