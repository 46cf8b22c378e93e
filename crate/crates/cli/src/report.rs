//! In-memory scenario reports and their files: CSV tables, two-column plot
//! data and a PASS/FAIL summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// One checked claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// File name inside the output directory.
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&'static str]) -> Self {
        Self {
            file: file.into(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// `x y` pairs for gnuplot.
#[derive(Clone, Debug, PartialEq)]
pub struct Plot {
    pub file: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub assertions: Vec<Assertion>,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
}

/// Fixed formatting so identical runs give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

impl Report {
    pub fn new(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            ..Self::default()
        }
    }

    pub fn assert(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    /// Appends another report's contents, prefixing assertion names.
    pub fn absorb(&mut self, other: Report) {
        for mut a in other.assertions {
            a.name = format!("{}: {}", other.scenario, a.name);
            self.assertions.push(a);
        }
        self.tables.extend(other.tables);
        self.plots.extend(other.plots);
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for a in &self.assertions {
            let _ = writeln!(out, "{} {}: {}", if a.pass { "PASS" } else { "FAIL" }, a.name, a.detail);
        }
        let passed = self.assertions.iter().filter(|a| a.pass).count();
        let _ = writeln!(out, "{}: {passed} of {} assertions pass", self.scenario, self.assertions.len());
        out
    }

    /// Writes every table, plot and `<scenario>-summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, String> {
        let io = |p: &Path, e: &dyn std::fmt::Display| format!("{}: {e}", p.display());
        std::fs::create_dir_all(dir).map_err(|e| io(dir, &e))?;
        let mut written = Vec::new();
        for t in &self.tables {
            let path = dir.join(&t.file);
            let mut w = csv::Writer::from_path(&path).map_err(|e| io(&path, &e))?;
            w.write_record(&t.header).map_err(|e| io(&path, &e))?;
            for row in &t.rows {
                w.write_record(row).map_err(|e| io(&path, &e))?;
            }
            w.flush().map_err(|e| io(&path, &e))?;
            written.push(path);
        }
        for p in &self.plots {
            let path = dir.join(&p.file);
            let mut text = String::new();
            for (x, y) in &p.points {
                let _ = writeln!(text, "{} {}", num(*x), num(*y));
            }
            std::fs::write(&path, text).map_err(|e| io(&path, &e))?;
            written.push(path);
        }
        let path = dir.join(format!("{}-summary.txt", self.scenario));
        std::fs::write(&path, self.summary()).map_err(|e| io(&path, &e))?;
        written.push(path);
        Ok(written)
    }
}
