//! Structured check reports and their two text renderings.
//!
//! Every validation and verification suite produces a [`Report`]: a list of
//! named checks with pass/warn/fail status, an optional witness term on
//! failure, and key-value details. Reports render either as an aligned
//! table or as line-oriented records (one `key=value` record per line).
//! Renderings are deterministic; timings are carried but only printed when
//! explicitly requested, so default output is byte-stable across runs.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Warn => "warn",
            Status::Fail => "fail",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    pub details: Vec<(String, String)>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            details: vec![],
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
            details: vec![],
        }
    }

    pub fn warn(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Warn,
            witness: Some(witness.into()),
            details: vec![],
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.details.push((key.into(), value.to_string()));
        self
    }

    /// Pass/fail from a boolean, with the witness attached on failure.
    pub fn verdict(name: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness)
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: vec![] }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail)
            .collect()
    }

    pub fn render_table(&self) -> String {
        let name_w = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let mut out = String::new();
        out.push_str(&format!("{:<name_w$}  {:<6}  detail\n", "check", "status"));
        for c in &self.checks {
            let mut detail = String::new();
            if let Some(w) = &c.witness {
                detail.push_str(&format!("witness: {}", sanitize(w)));
            }
            for (k, v) in &c.details {
                if !detail.is_empty() {
                    detail.push_str("; ");
                }
                detail.push_str(&format!("{k}={}", sanitize(v)));
            }
            out.push_str(&format!("{:<name_w$}  {:<6}  {detail}\n", c.name, c.status));
        }
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("check={} status={}", c.name, c.status));
            if let Some(w) = &c.witness {
                out.push_str(&format!(" witness={}", quote(w)));
            }
            for (k, v) in &c.details {
                out.push_str(&format!(" {k}={}", quote(v)));
            }
            out.push('\n');
        }
        out
    }
}

/// Dimension bookkeeping for one graded piece of an assembled complex.
#[derive(Clone, Debug)]
pub struct DimRow {
    /// Human-readable piece label, e.g. `r=1 deg=2`.
    pub piece: String,
    pub dim: usize,
    /// Rank of the incoming differential (boundaries).
    pub rank_in: usize,
    /// Rank of the outgoing differential.
    pub rank_out: usize,
    pub homology: usize,
    /// False when the truncation may clip this piece or its boundary
    /// sources, so vanishing claims should not be read off it.
    pub interior: bool,
}

#[derive(Clone, Debug)]
pub struct DimensionTable {
    pub title: String,
    pub rows: Vec<DimRow>,
}

impl DimensionTable {
    pub fn render_table(&self) -> String {
        let mut out = format!("{}\n", self.title);
        let w = self
            .rows
            .iter()
            .map(|r| r.piece.len())
            .max()
            .unwrap_or(5)
            .max(5);
        out.push_str(&format!(
            "{:<w$}  {:>4}  {:>7}  {:>8}  {:>8}  {:>8}\n",
            "piece", "dim", "rank_in", "rank_out", "homology", "interior"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<w$}  {:>4}  {:>7}  {:>8}  {:>8}  {:>8}\n",
                r.piece, r.dim, r.rank_in, r.rank_out, r.homology, r.interior
            ));
        }
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "table={} piece={} dim={} rank_in={} rank_out={} homology={} interior={}\n",
                quote(&self.title),
                quote(&r.piece),
                r.dim,
                r.rank_in,
                r.rank_out,
                r.homology,
                r.interior
            ));
        }
        out
    }
}

fn sanitize(s: &str) -> String {
    s.replace('\n', " ")
}

fn quote(s: &str) -> String {
    let t = sanitize(s);
    if t.contains(' ') || t.is_empty() {
        format!("\"{}\"", t.replace('"', "'"))
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_rendering_is_line_oriented() {
        let mut r = Report::new();
        r.push(Check::pass("closedness"));
        r.push(Check::fail("nondegeneracy", "kernel contains @z").with("dim", 3));
        let recs = r.render_records();
        assert_eq!(recs.lines().count(), 2);
        assert!(recs.contains("check=nondegeneracy status=fail"));
        assert!(!r.all_passed());
    }
}
