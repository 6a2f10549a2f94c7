//! Subprocess execution and SZS verdict parsing.

use super::{ProverConfig, ProverVerdict, VerdictStatus};
use crate::fol::{emit_tptp, EncodedTask};
use std::io::Read;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

/// Emits the task as TPTP and runs the prover on it.
pub fn run_prover(task: &EncodedTask, cfg: &ProverConfig) -> ProverVerdict {
    let text = match emit_tptp(task) {
        Ok(t) => t,
        Err(e) => {
            return ProverVerdict::new(VerdictStatus::ProverError, cfg.id.clone(), Duration::ZERO)
                .with_detail(format!("emission failed: {e}"))
        }
    };
    run_prover_on_text(&text, cfg)
}

/// Runs the prover on already-emitted TPTP text via a temp file.
pub fn run_prover_on_text(tptp: &str, cfg: &ProverConfig) -> ProverVerdict {
    let start = Instant::now();
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            return ProverVerdict::new(VerdictStatus::ProverError, cfg.id.clone(), start.elapsed())
                .with_detail(format!("cannot create temp dir: {e}"))
        }
    };
    let problem = dir.path().join("problem.p");
    if let Err(e) = std::fs::write(&problem, tptp) {
        return ProverVerdict::new(VerdictStatus::ProverError, cfg.id.clone(), start.elapsed())
            .with_detail(format!("cannot write problem file: {e}"));
    }

    let mut child = match Command::new(&cfg.path)
        .args(cfg.render_args(&problem))
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(c) => c,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return ProverVerdict::new(VerdictStatus::ProverError, cfg.id.clone(), start.elapsed())
                .with_detail(format!("executable not found: {}", cfg.path.display()));
        }
        Err(e) => {
            return ProverVerdict::new(VerdictStatus::ProverError, cfg.id.clone(), start.elapsed())
                .with_detail(format!("cannot spawn prover: {e}"));
        }
    };

    // Drain pipes on threads so a chatty prover cannot deadlock on a full
    // pipe while we poll for exit.
    let mut stdout_pipe = child.stdout.take().expect("stdout piped");
    let mut stderr_pipe = child.stderr.take().expect("stderr piped");
    let out_thread = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout_pipe.read_to_string(&mut buf);
        buf
    });
    let err_thread = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stderr_pipe.read_to_string(&mut buf);
        buf
    });

    let deadline = start + cfg.timeout;
    let mut timed_out = false;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) => {
                if Instant::now() >= deadline {
                    timed_out = true;
                    let _ = child.kill();
                    let _ = child.wait();
                    break None;
                }
                std::thread::sleep(Duration::from_millis(10));
            }
            Err(e) => {
                let _ = child.kill();
                return ProverVerdict::new(
                    VerdictStatus::ProverError,
                    cfg.id.clone(),
                    start.elapsed(),
                )
                .with_detail(format!("wait failed: {e}"));
            }
        }
    };
    let stdout = out_thread.join().unwrap_or_default();
    let stderr = err_thread.join().unwrap_or_default();
    let elapsed = start.elapsed();

    if timed_out {
        return ProverVerdict::new(VerdictStatus::Timeout, cfg.id.clone(), elapsed)
            .with_detail(format!("killed after {:?}", cfg.timeout));
    }
    let status = status.expect("exit status present unless timed out");

    match szs_status(&stdout) {
        Some(s) => {
            let verdict = classify_szs(&s);
            ProverVerdict::new(verdict, cfg.id.clone(), elapsed)
                .with_detail(format!("SZS status {s}"))
        }
        None if status.success() => {
            ProverVerdict::new(VerdictStatus::Unknown, cfg.id.clone(), elapsed)
                .with_detail(excerpt(&stdout))
        }
        None => ProverVerdict::new(VerdictStatus::ProverError, cfg.id.clone(), elapsed)
            .with_detail(format!(
                "exit {:?} without SZS status; stderr: {}",
                status.code(),
                excerpt(&stderr)
            )),
    }
}

/// Extracts the status word of the first `SZS status <word>` line.
pub(crate) fn szs_status(output: &str) -> Option<String> {
    for line in output.lines() {
        if let Some(idx) = line.find("SZS status") {
            let rest = &line[idx + "SZS status".len()..];
            if let Some(word) = rest.split_whitespace().next() {
                return Some(word.to_string());
            }
        }
    }
    None
}

fn classify_szs(status: &str) -> VerdictStatus {
    match status {
        "Theorem" | "Unsatisfiable" | "ContradictoryAxioms" => VerdictStatus::Proved,
        "CounterSatisfiable" | "Satisfiable" => VerdictStatus::CounterSatisfiable,
        "Timeout" | "TimeOut" | "ResourceOut" => VerdictStatus::Timeout,
        _ => VerdictStatus::Unknown,
    }
}

fn excerpt(text: &str) -> String {
    let mut out: String = text.chars().take(200).collect();
    if text.len() > 200 {
        out.push_str("...");
    }
    out.trim().to_string()
}
