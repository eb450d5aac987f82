//! Runs every example binary built alongside the tests.

use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().join("examples")
}

#[test]
fn examples_run() {
    let dir = examples_dir();
    for name in ["quickstart", "components", "greedy_contraction", "lp_rounding", "exact", "benchmark"] {
        let bin = dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        if !bin.exists() {
            eprintln!("skipping {name}: not built");
            continue;
        }
        let out = Command::new(&bin).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}
