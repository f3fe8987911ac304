use std::collections::BTreeMap;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<=")]
    AtMost,
    /// |value − target| ≤ tolerance.
    #[serde(rename = "~")]
    Within,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, target: f64, relation: Relation, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::AtLeast => value >= target - tolerance,
            Relation::AtMost => value <= target + tolerance,
            Relation::Within => (value - target).abs() <= tolerance,
        };
        Self {
            name: name.into(),
            value,
            target,
            relation,
            tolerance,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            note: None,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(name, value, target, Relation::AtLeast, tolerance)
    }

    pub fn at_most(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(name, value, target, Relation::AtMost, tolerance)
    }

    pub fn within(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(name, value, target, Relation::Within, tolerance)
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Downgrade a passing check to inconclusive (truncation could not be
    /// trusted); failures stay failures.
    pub fn inconclusive_if(mut self, flag: bool, why: impl Into<String>) -> Self {
        if flag && self.pass {
            self.pass = false;
            self.status = Status::Inconclusive;
            self.note = Some(why.into());
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub status: Status,
}

/// Shortest round-trip decimal, exponent form outside [1e-5, 1e16).
fn cell(v: f64) -> String {
    format!("{v:?}")
}

fn write_csv(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        write_csv(
            &self.columns,
            self.rows.iter().map(|row| row.iter().map(|v| cell(*v)).collect()),
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub summary: Summary,
}

impl Report {
    pub fn new(
        command: String,
        config: BTreeMap<String, String>,
        seed: Option<u64>,
        checks: Vec<Check>,
        table: Option<Table>,
    ) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let (passed, failed, inconclusive) = (count(Status::Pass), count(Status::Fail), count(Status::Inconclusive));
        let status = if failed > 0 {
            Status::Fail
        } else if inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            config,
            seed,
            summary: Summary {
                total: checks.len(),
                passed,
                failed,
                inconclusive,
                status,
            },
            checks,
            table,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.summary.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// The table when present, otherwise one row per check.
    pub fn to_csv(&self) -> String {
        if let Some(t) = &self.table {
            return t.to_csv();
        }
        let header = ["name", "value", "relation", "target", "tolerance", "status"].map(String::from);
        let rows = self.checks.iter().map(|c| {
            let rel = match c.relation {
                Relation::AtLeast => ">=",
                Relation::AtMost => "<=",
                Relation::Within => "~",
            };
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Inconclusive => "inconclusive",
            };
            vec![
                c.name.clone(),
                cell(c.value),
                rel.into(),
                cell(c.target),
                cell(c.tolerance),
                status.into(),
            ]
        });
        write_csv(&header, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_aggregation() {
        let checks = vec![
            Check::at_least("a", 1.0, 0.0, 0.0),
            Check::at_most("b", 1.0, 0.0, 0.5).inconclusive_if(true, "x"),
            Check::within("c", 1.0, 1.1, 0.2).inconclusive_if(true, "tail"),
        ];
        assert!(!checks[1].pass && checks[1].status == Status::Fail);
        assert_eq!(checks[2].status, Status::Inconclusive);
        let r = Report::new("t".into(), BTreeMap::new(), None, checks, None);
        assert_eq!(r.exit_code(), 1);
        let r = Report::new(
            "t".into(),
            BTreeMap::new(),
            None,
            vec![Check::within("c", 1.0, 1.1, 0.2).inconclusive_if(true, "tail")],
            None,
        );
        assert_eq!(r.exit_code(), 3);
    }

    #[test]
    fn csv_table() {
        let mut t = Table::new(&["x", "y"]);
        t.push(vec![0.5, 1e-20]);
        assert_eq!(t.to_csv(), "x,y\n0.5,1e-20\n");
    }
}
