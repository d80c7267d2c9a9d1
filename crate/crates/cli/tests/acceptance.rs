//! Prints one PASS/FAIL line per acceptance criterion and fails if any
//! criterion fails.

use diffint_cli::selftest::{criterion, CRITERIA};
use std::process::{Command, ExitCode};

const BIN: &str = env!("CARGO_BIN_EXE_diffint");

/// Checks made through the built binary rather than the library.
fn binary_check(id: u32) -> Result<(), String> {
    match id {
        8 => {
            let out = Command::new(BIN)
                .args(["integrate", "--domain", "real", "--oracle", "--format", "json", "sin(x)/x"])
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("exit status {}", out.status));
            }
            let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
            let delta: f64 = v["oracle"]["delta"].as_str().and_then(|s| s.parse().ok()).unwrap_or(f64::NAN);
            if delta.is_nan() || delta > 1e-6 {
                return Err(format!("binary oracle delta {delta}"));
            }
            Ok(())
        }
        9 => {
            let out = Command::new(BIN)
                .args(["integrate", "--from", "-1", "--to", "1", "1/x", "--constant", "symbolic"])
                .output()
                .map_err(|e| e.to_string())?;
            let stderr = String::from_utf8_lossy(&out.stderr);
            if out.status.success()
                || !stderr.contains("non-cancelling integration constant / pole prescription required")
            {
                return Err(format!("exit {} with stderr {stderr:?}", out.status));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, _) in CRITERIA {
        let o = criterion(id);
        let outcome = if o.passed { binary_check(id).map(|_| o.detail.clone()) } else { Err(o.detail.clone()) };
        match outcome {
            Ok(detail) => println!("criterion {id}: PASS  {} — {detail}", o.title),
            Err(detail) => {
                failed += 1;
                println!("criterion {id}: FAIL  {} — {detail}", o.title);
            }
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
