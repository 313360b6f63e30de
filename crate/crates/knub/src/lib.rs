//! Find maximum (or bounded/maximal) cliques in large sparse graphs by
//! first shrinking the graph to its k-nub: after counting r-cliques once,
//! edges and vertices whose participation falls below the binomial
//! thresholds for a k-clique are deleted, and the (k-1)-core of the rest
//! is taken. Every clique of order >= k survives the reduction, so exact
//! search can run on a far smaller graph, and an empty reduction is a
//! proof that no k-clique exists.
//!
//! The pieces compose as a pipeline (see [`estimate::solve_with_reduction`]):
//! count -> bound k -> reduce -> solve survivor -> halve k until the
//! bracket on the clique number closes.

pub mod binom;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod graph;
pub mod io;
pub mod participation;
pub mod reduce;
pub mod solve;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use estimate::{
    classify_outcome, initial_k_upper, max_nonempty_nub_k, next_k, refine_k_by_participation,
    solve_with_reduction, solve_with_reduction_using, Classification, DriverOptions, HistoryEntry,
    KSearchState, OutcomeCase,
};
pub use experiments::{
    compare_core_vs_nub, gen_erdos_renyi, run_er_benchmark, BenchConfig, BenchOutput, BenchRow,
};
pub use graph::Graph;
pub use io::{format_for_path, parse_edge_list, write_snap, EdgeFormat};
pub use participation::{
    count_r_cliques, find_one_r_clique, max_participation, CliqueStats, StatsFile,
};
pub use reduce::{
    has_k_clique_prefilter, k_nub, k_nub_with_recount, participation_thresholds, ReductionParams,
    ReductionReport,
};
pub use solve::{
    brute_force_max_clique, greedy_maximal_clique, max_clique_exact, CliqueKind, CliqueResult,
    SolverBudget,
};
