//! Algorithm and variant selection, validation and dispatch.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::budget::{Deadline, Interrupted};
use crate::components::{generate, ComponentError, ComponentSet, GenStrategy};
use crate::exact::{dreyfus_wagner, ExactError, ExactOptions};
use crate::gcf::{run_gcf, run_gcf_ondemand, Assembly, Contraction, GcfError, GcfOptions, SaveKind, WinKind};
use crate::graph::{DistMode, DistanceOracle, Instance, PathPolicy};
use crate::lp::{round_iterative, LpError, Presep, RoundOptions, Rounding, SerOptions};
use crate::two_approx::{kmb, mehlhorn, tm_with, SteinerTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid value {value:?} for {flag}")]
pub struct FlagError {
    pub flag: &'static str,
    pub value: String,
}

fn on_off(flag: &'static str, s: &str) -> Result<bool, FlagError> {
    match s {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        _ => Err(FlagError {
            flag,
            value: s.to_string(),
        }),
    }
}

fn show_on_off(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Tm,
    Kmb,
    Mehlhorn,
    Gcf,
    Lca,
    Lp,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Tm => "tm",
            Algorithm::Kmb => "kmb",
            Algorithm::Mehlhorn => "mehlhorn",
            Algorithm::Gcf => "gcf",
            Algorithm::Lca => "lca",
            Algorithm::Lp => "lp",
            Algorithm::Exact => "exact",
        }
    }

    /// Whether the algorithm works on k-restricted components.
    pub fn uses_components(self) -> bool {
        matches!(self, Algorithm::Gcf | Algorithm::Lca | Algorithm::Lp)
    }
}

impl FromStr for Algorithm {
    type Err = FlagError;
    fn from_str(s: &str) -> Result<Self, FlagError> {
        Ok(match s {
            "tm" => Algorithm::Tm,
            "kmb" => Algorithm::Kmb,
            "mehlhorn" => Algorithm::Mehlhorn,
            "gcf" => Algorithm::Gcf,
            "lca" => Algorithm::Lca,
            "lp" => Algorithm::Lp,
            "exact" => Algorithm::Exact,
            _ => {
                return Err(FlagError {
                    flag: "algo",
                    value: s.to_string(),
                })
            }
        })
    }
}

/// Component generation, including the implicit on-demand mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    Explicit(GenStrategy),
    OnDemand,
}

impl FromStr for Gen {
    type Err = FlagError;
    fn from_str(s: &str) -> Result<Self, FlagError> {
        Ok(match s {
            "all:naive" | "all:naïve" | "naive" => Gen::Explicit(GenStrategy::Naive),
            "all:smart" | "smart" => Gen::Explicit(GenStrategy::Smart),
            "all:dw" | "dw" => Gen::Explicit(GenStrategy::Dw),
            "voronoi" => Gen::Explicit(GenStrategy::Voronoi),
            "ondemand" => Gen::OnDemand,
            _ => {
                return Err(FlagError {
                    flag: "gen",
                    value: s.to_string(),
                })
            }
        })
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Explicit(s) => f.write_str(s.name()),
            Gen::OnDemand => f.write_str("ondemand"),
        }
    }
}

/// Distance precomputation; `Auto` picks sssp iff `k <= 3` and density `<= 0.25`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dist {
    Auto,
    Fixed(DistMode),
}

pub fn parse_dist(s: &str) -> Result<Dist, FlagError> {
    Ok(match s {
        "auto" => Dist::Auto,
        "apsp" => Dist::Fixed(DistMode::Apsp),
        "sssp" => Dist::Fixed(DistMode::Sssp),
        _ => {
            return Err(FlagError {
                flag: "dist",
                value: s.to_string(),
            })
        }
    })
}

pub fn parse_sp(s: &str) -> Result<PathPolicy, FlagError> {
    match s {
        "forbid" => Ok(PathPolicy::Forbid),
        "prefer" => Ok(PathPolicy::Prefer),
        _ => Err(FlagError {
            flag: "sp",
            value: s.to_string(),
        }),
    }
}

pub fn parse_save(s: &str) -> Result<SaveKind, FlagError> {
    match s {
        "matrix" => Ok(SaveKind::Matrix),
        "static" => Ok(SaveKind::Static),
        "dynamic" => Ok(SaveKind::Dynamic),
        _ => Err(FlagError {
            flag: "save",
            value: s.to_string(),
        }),
    }
}

pub fn parse_win(s: &str) -> Result<WinKind, FlagError> {
    match s {
        "abs" => Ok(WinKind::Abs),
        "rel" => Ok(WinKind::Rel),
        "loss" => Ok(WinKind::Loss),
        _ => Err(FlagError {
            flag: "win",
            value: s.to_string(),
        }),
    }
}

pub fn parse_presep(s: &str) -> Result<Presep, FlagError> {
    match s {
        "initial" | "on" => Ok(Presep::Initial),
        "ondemand" | "off" => Ok(Presep::OnDemand),
        _ => Err(FlagError {
            flag: "presep",
            value: s.to_string(),
        }),
    }
}

pub fn parse_rounding(s: &str) -> Result<bool, FlagError> {
    match s {
        "sample" => Ok(true),
        "max" => Ok(false),
        _ => Err(FlagError {
            flag: "rounding",
            value: s.to_string(),
        }),
    }
}

pub fn parse_assembly(s: &str) -> Result<Assembly, FlagError> {
    match s {
        "tm" => Ok(Assembly::Tm),
        "mstunion" => Ok(Assembly::MstUnion),
        _ => Err(FlagError {
            flag: "assembly",
            value: s.to_string(),
        }),
    }
}

pub fn parse_on_off(flag: &'static str, s: &str) -> Result<bool, FlagError> {
    on_off(flag, s)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("gen=ondemand needs algo=gcf, win=abs and k=3")]
    OnDemand,
    #[error("lca uses win=loss")]
    LcaWin,
}

/// One algorithm with all its variant flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algo: Algorithm,
    pub k: usize,
    pub gen: Gen,
    pub dist: Dist,
    pub sp: PathPolicy,
    pub save: SaveKind,
    pub win: WinKind,
    pub reduce: bool,
    pub singlepass: bool,
    pub assembly: Assembly,
    pub presep: Presep,
    pub consep: bool,
    pub stronger: bool,
    pub bound: bool,
    pub prune: bool,
    pub sample: bool,
    pub seed: u64,
    /// Wall-clock budget in seconds.
    pub time_s: f64,
    /// Soft memory budget in bytes.
    pub mem_bytes: u64,
}

impl RunSpec {
    pub fn new(algo: Algorithm) -> Self {
        RunSpec {
            algo,
            k: 3,
            gen: Gen::Explicit(GenStrategy::Voronoi),
            dist: Dist::Auto,
            sp: PathPolicy::Prefer,
            save: SaveKind::Static,
            win: if algo == Algorithm::Lca { WinKind::Loss } else { WinKind::Rel },
            reduce: true,
            singlepass: false,
            assembly: Assembly::Tm,
            presep: Presep::Initial,
            consep: true,
            stronger: false,
            bound: false,
            prune: true,
            sample: false,
            seed: 0,
            time_s: 60.0,
            mem_bytes: 2 << 30,
        }
    }

    /// Rejects inconsistent flag combinations; returns warnings for legal
    /// but questionable ones.
    pub fn validate(&self) -> Result<Vec<String>, SpecError> {
        let mut warnings = Vec::new();
        if self.algo.uses_components() {
            if self.k < 2 {
                return Err(SpecError::InvalidK(self.k));
            }
            if self.gen == Gen::OnDemand && (self.algo != Algorithm::Gcf || self.win != WinKind::Abs || self.k != 3) {
                return Err(SpecError::OnDemand);
            }
            if self.algo == Algorithm::Lca && self.win != WinKind::Loss {
                return Err(SpecError::LcaWin);
            }
            if self.gen == Gen::Explicit(GenStrategy::Voronoi) && self.k >= 4 {
                warnings.push(format!(
                    "gen=voronoi with k={} does not guarantee minimum k-restricted trees",
                    self.k
                ));
            }
        }
        Ok(warnings)
    }

    /// Canonical flag string for records; only flags the algorithm reads.
    pub fn flags(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.algo.uses_components() {
            parts.push(format!("gen={}", self.gen));
            parts.push(format!(
                "dist={}",
                match self.dist {
                    Dist::Auto => "auto",
                    Dist::Fixed(DistMode::Apsp) => "apsp",
                    Dist::Fixed(DistMode::Sssp) => "sssp",
                }
            ));
            parts.push(format!(
                "sp={}",
                match self.sp {
                    PathPolicy::Forbid => "forbid",
                    PathPolicy::Prefer => "prefer",
                }
            ));
        }
        match self.algo {
            Algorithm::Gcf | Algorithm::Lca => {
                parts.push(format!("win={}", self.win.name()));
                parts.push(format!("save={}", self.save.name()));
                parts.push(format!("reduce={}", show_on_off(self.reduce)));
                parts.push(format!("singlepass={}", show_on_off(self.singlepass)));
                if self.assembly == Assembly::MstUnion {
                    parts.push("assembly=mstunion".into());
                }
            }
            Algorithm::Lp => {
                parts.push(format!(
                    "presep={}",
                    if self.presep == Presep::Initial { "initial" } else { "ondemand" }
                ));
                parts.push(format!("consep={}", show_on_off(self.consep)));
                parts.push(format!("stronger={}", show_on_off(self.stronger)));
                parts.push(format!("bound={}", show_on_off(self.bound)));
                parts.push(format!("prune={}", show_on_off(self.prune)));
                if self.sample {
                    parts.push(format!("rounding=sample seed={}", self.seed));
                } else {
                    parts.push("rounding=max".into());
                }
            }
            _ => {}
        }
        parts.join(" ")
    }

    pub fn dist_mode(&self, inst: &Instance) -> DistMode {
        match self.dist {
            Dist::Auto => DistMode::auto(inst, self.k),
            Dist::Fixed(m) => m,
        }
    }

    /// Rough peak allocation of a run, used for the soft memory guard.
    pub fn estimate_memory(&self, inst: &Instance) -> u64 {
        let n = inst.node_count() as u64;
        let r = inst.terminals().len() as u64;
        let mut bytes = 64 * (n + inst.edge_count() as u64);
        let subsets = |limit: u64| -> u64 {
            let mut total: u64 = 0;
            let mut c: u64 = 1;
            for i in 1..=limit.min(r) {
                c = c.saturating_mul(r - i + 1) / i;
                total = total.saturating_add(c);
            }
            total
        };
        if self.algo == Algorithm::Exact {
            bytes = bytes.saturating_add(subsets(r.saturating_sub(1)).saturating_mul(n).saturating_mul(24));
        }
        if self.algo.uses_components() {
            let rows = match self.dist_mode(inst) {
                DistMode::Apsp => n,
                DistMode::Sssp => r,
            };
            bytes = bytes.saturating_add(rows.saturating_mul(n).saturating_mul(25));
            let k = self.k as u64;
            let comps = subsets(k).saturating_sub(r);
            bytes = bytes.saturating_add(comps.saturating_mul(128 * k));
            if self.gen == Gen::Explicit(GenStrategy::Dw) {
                bytes = bytes.saturating_add(subsets(k).saturating_mul(n).saturating_mul(24));
            }
            if self.algo == Algorithm::Lp {
                let rows = 4 * r + 16;
                bytes = bytes.saturating_add(rows.saturating_mul(comps + 2 * rows).saturating_mul(8));
            }
        }
        bytes
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("time budget exhausted")]
    Timeout,
    #[error("memory budget exceeded: {0}")]
    Memory(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Failed(String),
}

impl From<Interrupted> for SolveError {
    fn from(_: Interrupted) -> Self {
        SolveError::Timeout
    }
}

impl From<ComponentError> for SolveError {
    fn from(e: ComponentError) -> Self {
        match e {
            ComponentError::Interrupted(_) => SolveError::Timeout,
            ComponentError::TableLimit => SolveError::Memory(e.to_string()),
            other => SolveError::Failed(other.to_string()),
        }
    }
}

impl From<ExactError> for SolveError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::Interrupted(_) => SolveError::Timeout,
            ExactError::TableLimit { .. } | ExactError::Guard { .. } => SolveError::Memory(e.to_string()),
            other => SolveError::Failed(other.to_string()),
        }
    }
}

impl From<GcfError> for SolveError {
    fn from(e: GcfError) -> Self {
        match e {
            GcfError::Interrupted(_) => SolveError::Timeout,
            other => SolveError::Failed(other.to_string()),
        }
    }
}

impl From<LpError> for SolveError {
    fn from(e: LpError) -> Self {
        match e {
            LpError::Interrupted(_) => SolveError::Timeout,
            other => SolveError::Failed(other.to_string()),
        }
    }
}

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub tree: SteinerTree,
    /// LP lower bound for `lp` runs.
    pub lp_bound: Option<f64>,
    /// Set when `bound=on` made the relaxation infeasible and the TM tree
    /// was returned instead.
    pub fell_back: bool,
}

fn components(inst: &Instance, spec: &RunSpec, strategy: GenStrategy, deadline: &Deadline) -> Result<ComponentSet, SolveError> {
    let oracle = DistanceOracle::build(inst, spec.dist_mode(inst), spec.sp);
    deadline.check()?;
    Ok(generate(inst, &oracle, strategy, spec.k, deadline)?)
}

/// Runs `spec` on `inst` within `deadline`.
pub fn solve(inst: &Instance, spec: &RunSpec, deadline: &Deadline) -> Result<Solved, SolveError> {
    spec.validate()?;
    let estimate = spec.estimate_memory(inst);
    if estimate > spec.mem_bytes {
        return Err(SolveError::Memory(format!("estimated {estimate} bytes > {}", spec.mem_bytes)));
    }
    let plain = |tree| Solved {
        tree,
        lp_bound: None,
        fell_back: false,
    };
    match spec.algo {
        Algorithm::Tm => Ok(plain(tm_with(inst, inst.terminals(), deadline)?)),
        Algorithm::Kmb => {
            let oracle = DistanceOracle::build(inst, DistMode::Sssp, PathPolicy::Prefer);
            deadline.check()?;
            Ok(plain(kmb(inst, &oracle)))
        }
        Algorithm::Mehlhorn => Ok(plain(mehlhorn(inst))),
        Algorithm::Exact => {
            let opts = ExactOptions {
                max_entries: (spec.mem_bytes / 24) as u128,
                force: true,
            };
            Ok(plain(dreyfus_wagner(inst, &opts, deadline)?))
        }
        Algorithm::Gcf | Algorithm::Lca => {
            let opts = GcfOptions {
                win: spec.win,
                save: spec.save,
                contraction: if spec.algo == Algorithm::Lca {
                    Contraction::Loss
                } else {
                    Contraction::Full
                },
                reduce: spec.reduce,
                singlepass: spec.singlepass,
                assembly: spec.assembly,
            };
            let res = match spec.gen {
                Gen::OnDemand => {
                    let oracle = DistanceOracle::build(inst, spec.dist_mode(inst), spec.sp);
                    run_gcf_ondemand(inst, &oracle, &opts, deadline)?
                }
                Gen::Explicit(strategy) => {
                    let set = components(inst, spec, strategy, deadline)?;
                    run_gcf(inst, &set, &opts, deadline)?
                }
            };
            Ok(plain(res.tree))
        }
        Algorithm::Lp => {
            let Gen::Explicit(strategy) = spec.gen else {
                return Err(SpecError::OnDemand.into());
            };
            let set = components(inst, spec, strategy, deadline)?;
            let fallback = if spec.bound {
                Some(tm_with(inst, inst.terminals(), deadline)?)
            } else {
                None
            };
            let opts = RoundOptions {
                ser: SerOptions {
                    presep: spec.presep,
                    consep: spec.consep,
                    stronger: spec.stronger,
                    bound: fallback.as_ref().map(|t| t.cost),
                    clique_size: spec.k + 1,
                    ..Default::default()
                },
                rounding: if spec.sample {
                    Rounding::Sample(spec.seed)
                } else {
                    Rounding::MaxValue
                },
                prune: spec.prune,
            };
            match round_iterative(inst, &set, &opts, deadline) {
                Ok(res) => Ok(Solved {
                    tree: res.tree,
                    lp_bound: Some(res.lp_bound),
                    fell_back: false,
                }),
                Err(LpError::Infeasible) if fallback.is_some() => Ok(Solved {
                    tree: fallback.unwrap(),
                    lp_bound: None,
                    fell_back: true,
                }),
                Err(e) => Err(e.into()),
            }
        }
    }
}

/// `1 + 2^r / ((r - 1) 2^r + k)` with `r = floor(log2 k)`.
pub fn rho_k(k: usize) -> Result<f64, SpecError> {
    if k < 2 {
        return Err(SpecError::InvalidK(k));
    }
    let r = (usize::BITS - 1 - k.leading_zeros()) as i32;
    let p = 2f64.powi(r);
    Ok(1.0 + p / ((r - 1) as f64 * p + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        assert_eq!(rho_k(2).unwrap(), 2.0);
        assert!((rho_k(3).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(rho_k(4).unwrap(), 1.5);
        assert!(rho_k(1).is_err());
    }

    #[test]
    fn ondemand_validation() {
        let mut s = RunSpec::new(Algorithm::Gcf);
        s.gen = Gen::OnDemand;
        assert_eq!(s.validate(), Err(SpecError::OnDemand));
        s.win = WinKind::Abs;
        assert!(s.validate().is_ok());
        let mut v = RunSpec::new(Algorithm::Gcf);
        v.k = 4;
        assert_eq!(v.validate().unwrap().len(), 1);
    }
}
