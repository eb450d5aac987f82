use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use steiner_core::bench::{
    build_report, collect_instances, parse_assembly, parse_dist, parse_on_off, parse_presep, parse_rounding, parse_save,
    parse_sp, parse_win, rho_k, run_batch, Algorithm, Gen, Grouping, InstanceInfo, ReportInputs, RunSpec,
};
use steiner_core::stp::{read_records, read_stp_file, write_records, BoundsTable};

#[derive(Parser)]
#[command(name = "steiner-bench", about = "Run and compare Steiner tree algorithms on STP instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm configuration over instance files or directories.
    Run(RunArgs),
    /// Aggregate run CSVs into per-group tables.
    Report(ReportArgs),
    /// Print the k-restricted Steiner ratio.
    Rho {
        #[arg(long)]
        k: usize,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// tm | kmb | mehlhorn | gcf | lca | lp | exact
    #[arg(long)]
    algo: String,
    /// abs | rel | loss
    #[arg(long)]
    win: Option<String>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// all:naive | all:smart | all:dw | voronoi | ondemand
    #[arg(long, default_value = "voronoi")]
    gen: String,
    /// prefer | forbid
    #[arg(long, default_value = "prefer")]
    sp: String,
    /// auto | apsp | sssp
    #[arg(long, default_value = "auto")]
    dist: String,
    /// matrix | static | dynamic
    #[arg(long, default_value = "static")]
    save: String,
    #[arg(long, default_value = "on")]
    reduce: String,
    #[arg(long, default_value = "off")]
    singlepass: String,
    /// tm | mst
    #[arg(long, default_value = "tm")]
    assembly: String,
    /// initial | ondemand
    #[arg(long, default_value = "initial")]
    presep: String,
    #[arg(long, default_value = "on")]
    consep: String,
    #[arg(long, default_value = "off")]
    stronger: String,
    #[arg(long, default_value = "off")]
    bound: String,
    #[arg(long, default_value = "on")]
    prune: String,
    /// max | sample
    #[arg(long, default_value = "max")]
    rounding: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-instance time limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    time: f64,
    /// Per-instance memory limit, e.g. 2G or 512M.
    #[arg(long, default_value = "2G")]
    mem: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Best known values, `name value` per line.
    #[arg(long)]
    bounds: Option<PathBuf>,
    /// Output CSV; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(required = true)]
    paths: Vec<PathBuf>,
}

#[derive(clap::Args)]
struct ReportArgs {
    #[arg(long)]
    bounds: Option<PathBuf>,
    /// Lines of `regex<TAB>group`.
    #[arg(long)]
    groups: Option<PathBuf>,
    /// Instance directory, needed for coverage and size groups.
    #[arg(long)]
    instances: Option<PathBuf>,
    /// File listing difficult instance names, one per line.
    #[arg(long)]
    difficult: Option<PathBuf>,
    /// Emit CSV instead of markdown.
    #[arg(long)]
    csv: bool,
    #[arg(required = true)]
    records: Vec<PathBuf>,
}

fn parse_mem(s: &str) -> Result<u64> {
    let s = s.trim();
    let (num, mult) = match s.chars().last() {
        Some('G' | 'g') => (&s[..s.len() - 1], 1u64 << 30),
        Some('M' | 'm') => (&s[..s.len() - 1], 1 << 20),
        Some('K' | 'k') => (&s[..s.len() - 1], 1 << 10),
        _ => (s, 1),
    };
    let v: f64 = num.parse().with_context(|| format!("invalid --mem value {s:?}"))?;
    if v <= 0.0 {
        bail!("--mem must be positive");
    }
    Ok((v * mult as f64) as u64)
}

fn build_spec(a: &RunArgs) -> Result<RunSpec> {
    let algo: Algorithm = a.algo.parse()?;
    let mut spec = RunSpec::new(algo);
    spec.k = a.k;
    spec.gen = a.gen.parse::<Gen>()?;
    spec.dist = parse_dist(&a.dist)?;
    spec.sp = parse_sp(&a.sp)?;
    spec.save = parse_save(&a.save)?;
    if let Some(w) = &a.win {
        spec.win = parse_win(w)?;
    }
    spec.reduce = parse_on_off("reduce", &a.reduce)?;
    spec.singlepass = parse_on_off("singlepass", &a.singlepass)?;
    spec.assembly = parse_assembly(&a.assembly)?;
    spec.presep = parse_presep(&a.presep)?;
    spec.consep = parse_on_off("consep", &a.consep)?;
    spec.stronger = parse_on_off("stronger", &a.stronger)?;
    spec.bound = parse_on_off("bound", &a.bound)?;
    spec.prune = parse_on_off("prune", &a.prune)?;
    spec.sample = parse_rounding(&a.rounding)?;
    spec.seed = a.seed;
    spec.time_s = a.time;
    spec.mem_bytes = parse_mem(&a.mem)?;
    for w in spec.validate()? {
        log::warn!("{w}");
    }
    Ok(spec)
}

fn run(a: RunArgs) -> Result<()> {
    let spec = build_spec(&a)?;
    let bounds = a.bounds.as_ref().map(BoundsTable::read).transpose()?;
    let files = collect_instances(&a.paths)?;
    if files.is_empty() {
        bail!("no instance files found");
    }
    let records = run_batch(&files, &spec, bounds.as_ref(), a.workers);
    match &a.out {
        Some(p) => write_records(File::create(p).with_context(|| p.display().to_string())?, &records)?,
        None => write_records(io::stdout().lock(), &records)?,
    }
    Ok(())
}

fn report(a: ReportArgs) -> Result<()> {
    let mut records = Vec::new();
    for p in &a.records {
        let f = File::open(p).with_context(|| p.display().to_string())?;
        records.extend(read_records(f)?);
    }
    let bounds = a.bounds.as_ref().map(BoundsTable::read).transpose()?;
    let grouping = match &a.groups {
        Some(p) => Some(Grouping::parse(&std::fs::read_to_string(p)?)?),
        None => None,
    };
    let mut info = HashMap::new();
    match &a.instances {
        Some(dir) => {
            for f in collect_instances(std::slice::from_ref(dir))? {
                match read_stp_file(&f) {
                    Ok(inst) => {
                        let i = InstanceInfo::of(&inst);
                        if let Some(stem) = f.file_stem() {
                            info.insert(stem.to_string_lossy().into_owned(), i);
                        }
                        if let Some(name) = inst.name() {
                            info.insert(name.to_string(), i);
                        }
                    }
                    Err(e) => log::warn!("{}: {e}", f.display()),
                }
            }
        }
        None => log::warn!("no --instances directory; coverage and size tables skipped"),
    }
    let difficult = match &a.difficult {
        Some(p) => Some(
            std::fs::read_to_string(p)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect::<HashSet<_>>(),
        ),
        None => None,
    };
    let tables = build_report(&ReportInputs {
        records: &records,
        bounds: bounds.as_ref(),
        grouping: grouping.as_ref(),
        info,
        difficult,
    });
    let mut out = io::stdout().lock();
    for t in &tables {
        if a.csv {
            write!(out, "{}", t.to_csv())?;
        } else {
            writeln!(out, "{}", t.to_markdown())?;
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::Report(a) => report(a),
        Command::Rho { k } => {
            println!("{:.6}", rho_k(k)?);
            Ok(())
        }
    }
}
