//! Golden-file runner: each `<name>.request.json` holds
//! `{"command", "payload", "options"}` and `<name>.expected.json` the full
//! response document. Documents are compared after canonicalization.

use std::fmt::Write;
use std::path::Path;

use serde_json::Value;

use crate::{dispatch, Request};

#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub name: String,
    pub passed: bool,
    /// One line per differing JSON path.
    pub diff: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.cases.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let _ = writeln!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            for line in &c.diff {
                let _ = writeln!(out, "    {}", line);
            }
        }
        let _ = writeln!(out, "{}/{} fixtures passed", self.passed(), self.cases.len());
        out
    }
}

/// Sorted keys and compact separators; `serde_json` maps are ordered.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("unreadable fixture {}: {}", path.display(), e))?;
    serde_json::from_str(&text).map_err(|e| format!("unreadable fixture {}: {}", path.display(), e))
}

fn diff(path: &str, expected: &Value, actual: &Value, out: &mut Vec<String>) {
    match (expected, actual) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, va) in a {
                let sub = format!("{}/{}", path, k);
                match b.get(k) {
                    Some(vb) => diff(&sub, va, vb, out),
                    None => out.push(format!("{}: missing, expected {}", sub, canonical(va))),
                }
            }
            for (k, vb) in b {
                if !a.contains_key(k) {
                    out.push(format!("{}/{}: unexpected {}", path, k, canonical(vb)));
                }
            }
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => {
            for (i, (va, vb)) in a.iter().zip(b).enumerate() {
                diff(&format!("{}/{}", path, i), va, vb, out);
            }
        }
        _ if expected != actual => {
            out.push(format!("{}: expected {}, got {}", if path.is_empty() { "/" } else { path }, canonical(expected), canonical(actual)))
        }
        _ => {}
    }
}

/// Runs one fixture; a malformed request is a fixture error.
pub fn run_case(request: &Value, expected: &Value) -> Result<(bool, Vec<String>), String> {
    let req = Request::from_json(request).map_err(|e| format!("bad request: {}", e))?;
    let actual = dispatch(&req).to_json();
    let mut lines = Vec::new();
    diff("", expected, &actual, &mut lines);
    Ok((lines.is_empty(), lines))
}

/// Executes all pairs in name order. Missing or unparsable files abort the
/// run with an error.
pub fn run_suite(dir: &Path) -> Result<SuiteReport, String> {
    let entries = std::fs::read_dir(dir).map_err(|e| format!("cannot read {}: {}", dir.display(), e))?;
    let mut names = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| e.to_string())?;
        let file = entry.file_name().to_string_lossy().into_owned();
        if let Some(name) = file.strip_suffix(".request.json") {
            names.push(name.to_string());
        }
    }
    names.sort();
    let mut report = SuiteReport::default();
    for name in names {
        let request = read_json(&dir.join(format!("{}.request.json", name)))?;
        let expected = read_json(&dir.join(format!("{}.expected.json", name)))?;
        let (passed, diff) = run_case(&request, &expected).map_err(|e| format!("{}: {}", name, e))?;
        report.cases.push(CaseOutcome { name, passed, diff });
    }
    Ok(report)
}
