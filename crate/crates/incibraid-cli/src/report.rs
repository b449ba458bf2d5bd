use std::fmt;
use std::path::Path;

use incibraid::braiding::Verdict;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, bytes: &[u8]) -> InputDigest {
        let h = Sha256::digest(bytes);
        InputDigest {
            path: path.display().to_string(),
            sha256: h.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub passed: bool,
    pub violations: usize,
    pub witnesses: Vec<String>,
}

impl From<&Verdict> for CheckRecord {
    fn from(v: &Verdict) -> CheckRecord {
        CheckRecord {
            check: v.check.clone(),
            passed: v.passed,
            violations: v.violations,
            witnesses: v.witnesses.clone(),
        }
    }
}

/// Everything a run did. Apart from `elapsed_ms`, identical inputs and
/// seed give an identical report.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> RunReport {
        RunReport {
            command,
            inputs: Vec::new(),
            seed: None,
            checks: Vec::new(),
            outputs: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
            exit_code: EXIT_PASS,
        }
    }

    pub fn push(&mut self, v: &Verdict) {
        self.checks.push(v.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Sets the exit code from the check outcomes.
    pub fn settle(&mut self) {
        self.exit_code = if self.all_passed() { EXIT_PASS } else { EXIT_FAIL };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "$ {}", self.command.join(" "))?;
        for i in &self.inputs {
            writeln!(f, "input {} sha256 {}", i.path, &i.sha256[..16])?;
        }
        if let Some(s) = self.seed {
            writeln!(f, "seed {s}")?;
        }
        for c in &self.checks {
            if c.passed {
                writeln!(f, "{}: pass", c.check)?;
            } else {
                writeln!(f, "{}: FAIL ({} violations)", c.check, c.violations)?;
                for w in &c.witnesses {
                    writeln!(f, "    {w}")?;
                }
            }
        }
        for o in &self.outputs {
            writeln!(f, "wrote {o}")?;
        }
        for n in &self.notes {
            writeln!(f, "{n}")?;
        }
        write!(f, "{} ms, exit {}", self.elapsed_ms, self.exit_code)
    }
}
