//! Batch execution over instance files with per-instance budgets.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use crate::budget::Deadline;
use crate::stp::{gap_permil, read_stp_file, BoundsTable, RunRecord, RunStatus};

use super::spec::{solve, RunSpec, SolveError};

/// Expands directories into their `.stp` files (sorted); files pass through.
pub fn collect_instances(paths: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x.eq_ignore_ascii_case("stp")))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// Runs `spec` on one instance file; failures become records, never panics.
pub fn run_file(path: &Path, spec: &RunSpec, bounds: Option<&BoundsTable>) -> RunRecord {
    let start = Instant::now();
    let mut record = RunRecord {
        instance: instance_name(path),
        algo: spec.algo.name().to_string(),
        flags: spec.flags(),
        k: spec.algo.uses_components().then_some(spec.k),
        cost: None,
        gap_permil: None,
        time_s: 0.0,
        status: RunStatus::Error,
    };
    let inst = match read_stp_file(path) {
        Ok(i) => i,
        Err(e) => {
            log::warn!("{}: {e}", path.display());
            return record;
        }
    };
    if let Some(name) = inst.name() {
        if bounds.is_some_and(|b| b.get(name).is_some()) {
            record.instance = name.to_string();
        }
    }
    let deadline = Deadline::after(Duration::from_secs_f64(spec.time_s.max(0.0)));
    let outcome = if spec.time_s <= 0.0 {
        Err(SolveError::Timeout)
    } else {
        solve(&inst, spec, &deadline)
    };
    record.time_s = start.elapsed().as_secs_f64();
    match outcome {
        Ok(solved) => {
            record.status = RunStatus::Success;
            record.cost = Some(solved.tree.cost);
            if let Some(best) = bounds.and_then(|b| b.get(&record.instance)) {
                match gap_permil(solved.tree.cost, best) {
                    Ok(g) => record.gap_permil = Some(g),
                    Err(e) => log::warn!("{}: {e}", record.instance),
                }
            }
        }
        Err(SolveError::Timeout) => record.status = RunStatus::Timeout,
        Err(SolveError::Memory(msg)) => {
            log::info!("{}: {msg}", record.instance);
            record.status = RunStatus::Memlimit;
        }
        Err(e) => {
            log::warn!("{}: {e}", record.instance);
            record.status = RunStatus::Error;
        }
    }
    record
}

/// Runs `spec` over all files with up to `workers` threads. Records come
/// back in input order.
pub fn run_batch(files: &[PathBuf], spec: &RunSpec, bounds: Option<&BoundsTable>, workers: usize) -> Vec<RunRecord> {
    let workers = workers.clamp(1, files.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, RunRecord)>();
    std::thread::scope(|s| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let rec = run_file(&files[i], spec, bounds);
                if tx.send((i, rec)).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut out: Vec<(usize, RunRecord)> = rx.into_iter().collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}
