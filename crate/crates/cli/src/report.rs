//! The serialized result of a command.

use std::collections::BTreeMap;

use blochkit::estimate::{EstimateInterval, Mode};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// One reported quantity. Infinite ends are written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub name: String,
    pub value: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub mode: String,
    pub paper_ref: String,
}

impl ResultRow {
    pub fn interval(name: &str, e: &EstimateInterval, reference: &str) -> ResultRow {
        ResultRow {
            name: name.into(),
            value: finite(e.value()),
            lower: finite(e.lower),
            upper: e.upper.and_then(finite),
            mode: e.mode.as_str().into(),
            paper_ref: reference.into(),
        }
    }

    pub fn exact(name: &str, v: f64, reference: &str) -> ResultRow {
        ResultRow::with_mode(name, v, Mode::Exact, reference)
    }

    pub fn with_mode(name: &str, v: f64, mode: Mode, reference: &str) -> ResultRow {
        let (lower, upper) = match mode {
            Mode::Exact => (finite(v), finite(v)),
            Mode::SampledLower => (finite(v), None),
            Mode::AnalyticBounds => (None, finite(v)),
        };
        ResultRow { name: name.into(), value: finite(v), lower, upper, mode: mode.as_str().into(), paper_ref: reference.into() }
    }
}

/// One pass/fail line of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    /// Acceptance criterion this check belongs to.
    pub criterion: u32,
    pub name: String,
    pub reference: String,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub detail: String,
}

/// A numeric data table; `None` cells are infinite or undefined.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&x| finite(x)).collect());
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub domain: Option<String>,
    pub symbol: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub results: Vec<ResultRow>,
    pub verdicts: BTreeMap<String, String>,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Table>,
}

impl Report {
    pub fn new(command: &str, seed: u64, samples: usize) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            domain: None,
            symbol: None,
            seed,
            samples,
            results: Vec::new(),
            verdicts: BTreeMap::new(),
            elapsed_ms: 0,
            checks: Vec::new(),
            tables: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: ResultRow) {
        self.results.push(row);
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<String>) {
        self.verdicts.insert(key.into(), value.into());
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.to_csv(),
            Format::Pretty => self.to_pretty(),
        }
    }

    fn to_csv(&self) -> String {
        let cell = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "value", "lower", "upper", "mode", "paper_ref"]).unwrap();
        for r in &self.results {
            w.write_record([r.name.clone(), cell(r.value), cell(r.lower), cell(r.upper), r.mode.clone(), r.paper_ref.clone()])
                .unwrap();
        }
        for (k, v) in &self.verdicts {
            w.write_record([format!("verdict:{k}"), String::new(), String::new(), String::new(), v.clone(), String::new()])
                .unwrap();
        }
        for c in &self.checks {
            w.write_record([
                format!("check:{}", c.name),
                cell(c.measured),
                String::new(),
                cell(c.tolerance),
                if c.pass { "pass".into() } else { "fail".into() },
                c.reference.clone(),
            ])
            .unwrap();
        }
        let mut out = String::from_utf8(w.into_inner().unwrap()).unwrap();
        for (name, t) in &self.tables {
            out.push_str(&format!("# table {name}\n"));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.columns).unwrap();
            for row in &t.rows {
                w.write_record(row.iter().map(|x| cell(*x))).unwrap();
            }
            out.push_str(&String::from_utf8(w.into_inner().unwrap()).unwrap());
        }
        out
    }

    fn to_pretty(&self) -> String {
        let fmt = |v: f64| if v != 0.0 && v.abs() < 1e-4 { format!("{v:.3e}") } else { format!("{v:.6}") };
        let num = |x: Option<f64>| x.map(fmt).unwrap_or_else(|| "inf".into());
        let chk = |x: Option<f64>| x.map(fmt).unwrap_or_else(|| "n/a".into());
        let mut out = format!("{} {}", self.command, self.version);
        if let Some(d) = &self.domain {
            out.push_str(&format!("  domain {d}"));
        }
        if let Some(s) = &self.symbol {
            out.push_str(&format!("  symbol {s}"));
        }
        out.push_str(&format!("  seed {}  samples {}\n", self.seed, self.samples));
        for r in &self.results {
            match r.mode.as_str() {
                "exact" => out.push_str(&format!("  {:<24} {}  (exact)\n", r.name, num(r.value))),
                _ => out.push_str(&format!("  {:<24} [{}, {}]  ({})\n", r.name, num(r.lower), num(r.upper), r.mode)),
            }
        }
        for (k, v) in &self.verdicts {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} measured {} tol {}  {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                chk(c.measured),
                chk(c.tolerance),
                c.detail
            ));
        }
        for (name, t) in &self.tables {
            out.push_str(&format!("  table {name} ({} rows): {}\n", t.rows.len(), t.columns.join(" ")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_fixed() {
        let mut r = Report::new("qf", 42, 10);
        r.push(ResultRow::exact("q", 1.0, "Q_f"));
        r.push(ResultRow::interval("beta", &EstimateInterval::sampled(0.5, 10, 42), "beta"));
        let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            ["command", "domain", "elapsed_ms", "results", "samples", "seed", "symbol", "verdicts", "version"]
        );
        assert_eq!(v["results"][1]["upper"], serde_json::Value::Null);
        let row: Vec<&str> = v["results"][0].as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(row, ["lower", "mode", "name", "paper_ref", "upper", "value"]);
    }

    #[test]
    fn csv_quotes_fields() {
        let mut r = Report::new("x", 1, 1);
        r.push(ResultRow::exact("a", 2.0, "max{a, b}"));
        let s = r.render(Format::Csv);
        assert!(s.starts_with("name,value,lower,upper,mode,paper_ref\n"));
        assert!(s.contains("a,2,2,2,exact,\"max{a, b}\""));
    }
}
