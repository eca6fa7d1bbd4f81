//! Running an external SMT solver on an emitted script.

use std::path::Path;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolverOutcome {
    pub verdict: Verdict,
    /// Everything the solver printed after the verdict line.
    pub rest: String,
}

static COUNTER: AtomicUsize = AtomicUsize::new(0);

/// Writes `script` to a temporary file, runs `solver <file>` and reads the
/// verdict from the first line of its output.
pub fn run_solver(solver: &Path, script: &str) -> Result<SolverOutcome> {
    let k = COUNTER.fetch_add(1, Ordering::Relaxed);
    let file = std::env::temp_dir().join(format!("smk-{}-{k}.smt2", std::process::id()));
    std::fs::write(&file, script).map_err(|e| Error::Solver(format!("writing {}: {e}", file.display())))?;
    let out = Command::new(solver).arg(&file).output();
    let _ = std::fs::remove_file(&file);
    let out = out.map_err(|e| Error::Solver(format!("cannot run {}: {e}", solver.display())))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    let first = lines.next().unwrap_or("").trim();
    let verdict = match first {
        "sat" => Verdict::Sat,
        "unsat" => Verdict::Unsat,
        "unknown" => Verdict::Unknown,
        other => {
            let stderr = String::from_utf8_lossy(&out.stderr);
            return Err(Error::Solver(format!(
                "unexpected output `{other}` (status {}){}",
                out.status,
                if stderr.trim().is_empty() {
                    String::new()
                } else {
                    format!(": {}", stderr.trim())
                }
            )));
        }
    };
    if !out.status.success() {
        return Err(Error::Solver(format!("exited with {}", out.status)));
    }
    Ok(SolverOutcome {
        verdict,
        rest: lines.collect::<Vec<_>>().join("\n"),
    })
}
