//! Self-check results, summaries and CSV output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// One self-check of a study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition, e.g. `"< 1e-12"`.
    pub bound: String,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, bound: format!("< {limit:e}"), passed: value < limit }
    }

    pub fn above(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check { name: name.into(), value, bound: format!("> {limit:e}"), passed: value > limit }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            value,
            bound: format!("in [{lo:e}, {hi:e}]"),
            passed: (lo..=hi).contains(&value),
        }
    }
}

/// Outcome of one study: checks, headline numbers, warnings and written files.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Report {
    pub study: String,
    pub checks: Vec<Check>,
    pub metrics: Vec<(String, f64)>,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Report {
    pub fn new(study: &str) -> Self {
        Report { study: study.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = self.passed().into();
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "study: {}", self.study);
        for (name, value) in &self.metrics {
            let _ = writeln!(s, "  {name} = {value:.6e}");
        }
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "  [{tag}] {} = {:.6e} ({})", c.name, c.value, c.bound);
        }
        for w in &self.warnings {
            let _ = writeln!(s, "  warning: {w}");
        }
        for f in &self.files {
            let _ = writeln!(s, "  wrote {}", f.display());
        }
        let _ = writeln!(s, "  {}", if self.passed() { "all checks passed" } else { "SOME CHECKS FAILED" });
        s
    }
}

/// Round-trippable decimal: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `header` and `rows` to `dir/name` and returns the path.
pub fn write_csv<I, R>(dir: &Path, name: &str, header: &[&str], rows: I) -> std::io::Result<PathBuf>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(path)
}
