//! Benchmark harness: run algorithm variants over instance files under
//! time and memory budgets, and aggregate the records into tables.

mod report;
mod run;
mod spec;

pub use report::{build_report, Cell, Grouping, GroupingError, InstanceInfo, ReportInputs, ReportRow, ReportTable, OPTIMAL_GAP};
pub use run::{collect_instances, run_batch, run_file};
pub use spec::{
    parse_assembly, parse_dist, parse_on_off, parse_presep, parse_rounding, parse_save, parse_sp, parse_win, rho_k, solve,
    Algorithm, Dist, FlagError, Gen, RunSpec, SolveError, Solved, SpecError,
};
