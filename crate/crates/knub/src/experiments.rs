//! Random-graph experiments: seeded graph generation, the benchmark sweep
//! over orders and densities, and the core-vs-nub comparison.
//!
//! Reproducibility contract: a graph is fully determined by
//! `(n, p, seed)`. Pairs are visited in lexicographic order `(u, v)`,
//! u < v; for each pair one 64-bit word is drawn from a ChaCha8 stream
//! seeded with `seed` (via the standard SplitMix64 expansion of
//! `seed_from_u64`), and the edge is present iff
//! `(word >> 11) * 2^-53 < p`.

use std::io::Write;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{initial_k_upper, max_nonempty_nub_k, refine_k_by_participation};
use crate::graph::Graph;
use crate::participation::{count_r_cliques, CliqueStats};
use crate::reduce::{k_nub, ReductionParams};
use crate::solve::{max_clique_exact, SolverBudget};

/// Erdős–Rényi G(n, p) under the documented deterministic scheme.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 1 {
        return Err(Error::Domain("graph order must be at least 1".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "edge probability must lie strictly between 0 and 1, got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (1u64 << 53) as f64;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            let x = (rng.next_u64() >> 11) as f64 * scale;
            if x < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_sorted_edges(n, edges, None))
}

/// One sweep cell set: which graphs to generate and how to treat them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub orders: Vec<usize>,
    pub densities: Vec<f64>,
    /// graphs per (n, p) cell
    pub replicates: usize,
    /// participation order used for counting and reduction
    pub r: u32,
    /// base seed; replicate i uses `seed + i`
    pub seed: u64,
    pub max_time_secs: f64,
    pub max_nodes: u64,
    /// also solve the unreduced graph (slow; mirrors the original-graph
    /// timing column)
    #[serde(default)]
    pub solve_original: bool,
    /// capture wall-clock columns; disable for byte-reproducible output
    #[serde(default = "default_true")]
    pub record_timings: bool,
}

fn default_true() -> bool {
    true
}

impl BenchConfig {
    /// Desk-scale sweep; the larger orders from the original experiments
    /// are a config edit away but take hours.
    pub fn desk_default() -> BenchConfig {
        BenchConfig {
            orders: vec![200, 500, 1000],
            densities: vec![0.1, 0.3, 0.4],
            replicates: 10,
            r: 3,
            seed: 1,
            max_time_secs: 120.0,
            max_nodes: 500_000_000,
            solve_original: false,
            record_timings: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::Domain("replicates must be >= 1".into()));
        }
        if self.orders.is_empty() || self.densities.is_empty() {
            return Err(Error::Domain(
                "orders and densities must be non-empty".into(),
            ));
        }
        for &p in &self.densities {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Domain(format!("density {p} outside (0, 1)")));
            }
        }
        if self.r < 3 {
            return Err(Error::Domain("benchmark needs r >= 3".into()));
        }
        SolverBudget::new(
            Duration::from_secs_f64(self.max_time_secs.max(f64::MIN_POSITIVE)),
            self.max_nodes,
        )?;
        Ok(())
    }

    fn budget(&self) -> SolverBudget {
        SolverBudget {
            max_time: Duration::from_secs_f64(self.max_time_secs),
            max_nodes: self.max_nodes,
        }
    }
}

/// One benchmark measurement. Time fields are `None` when timing capture
/// is off or the solve hit its budget (the analogue of a did-not-finish
/// cell).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub reduction_time: Option<f64>,
    pub survivor_order: usize,
    pub percent_reduced: f64,
    pub k_used: u32,
    pub solve_time_original: Option<f64>,
    pub solve_time_reduced: Option<f64>,
    pub clique_size: usize,
    pub core_order: usize,
}

/// Mean/stddev aggregate of one (n, p) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub n: usize,
    pub p: f64,
    pub replicates: usize,
    pub reduction_time_mean: Option<f64>,
    pub reduction_time_std: Option<f64>,
    pub percent_reduced_mean: f64,
    pub percent_reduced_std: f64,
    pub k_used_mean: f64,
    pub k_used_std: f64,
    pub solve_time_original_mean: Option<f64>,
    pub solve_time_original_std: Option<f64>,
    pub solve_time_reduced_mean: Option<f64>,
    pub solve_time_reduced_std: Option<f64>,
    pub clique_size_mean: f64,
    pub clique_size_std: f64,
}

#[derive(Debug, Clone)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<AggregateRow>,
}

/// Runs the full sweep: generate, count, estimate k, reduce, solve the
/// survivor (and optionally the original), one row per replicate. Rows
/// come out in (order, density, replicate) order. A solver timeout marks
/// the time column absent but never aborts the sweep.
pub fn run_er_benchmark(cfg: &BenchConfig) -> Result<BenchOutput> {
    cfg.validate()?;
    let budget = cfg.budget();
    let mut rows = Vec::new();
    for &n in &cfg.orders {
        for &p in &cfg.densities {
            for rep in 0..cfg.replicates {
                let seed = cfg.seed.wrapping_add(rep as u64);
                rows.push(bench_one(n, p, seed, cfg, &budget)?);
            }
        }
    }
    let aggregates = aggregate(cfg, &rows);
    Ok(BenchOutput { rows, aggregates })
}

fn bench_one(
    n: usize,
    p: f64,
    seed: u64,
    cfg: &BenchConfig,
    budget: &SolverBudget,
) -> Result<BenchRow> {
    let g = gen_erdos_renyi(n, p, seed)?;
    let stats = count_r_cliques(&g, cfg.r)?;
    let core_order = g.main_core().n();

    let timer = |t: Duration| cfg.record_timings.then_some(t.as_secs_f64());

    let (k_used, survivor, reduction_time) = if stats.total() == 0 {
        (cfg.r - 1, Graph::empty(), None)
    } else {
        let k0 = initial_k_upper(stats.total(), cfg.r);
        let refined = refine_k_by_participation(&stats, k0, false);
        let (k, _) = max_nonempty_nub_k(&g, &stats, refined)?
            .expect("total > 0 keeps the nub at k = r nonempty");
        // the timed reduction is a single pass at the chosen k
        let t0 = Instant::now();
        let report = k_nub(&g, &stats, ReductionParams::new(k, cfg.r)?)?;
        let dt = t0.elapsed();
        (k, report.survivor, timer(dt))
    };

    let t0 = Instant::now();
    let solved = if survivor.is_empty() {
        max_clique_exact(&g, budget)
    } else {
        max_clique_exact(&survivor, budget)
    };
    let solve_time_reduced = if solved.is_exact() {
        timer(t0.elapsed())
    } else {
        None
    };

    let solve_time_original = if cfg.solve_original {
        let t0 = Instant::now();
        let full = max_clique_exact(&g, budget);
        if full.is_exact() {
            timer(t0.elapsed())
        } else {
            None
        }
    } else {
        None
    };

    Ok(BenchRow {
        n,
        p,
        seed,
        reduction_time,
        survivor_order: survivor.n(),
        percent_reduced: 1.0 - survivor.n() as f64 / n as f64,
        k_used,
        solve_time_original,
        solve_time_reduced,
        clique_size: solved.lower,
        core_order,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

fn opt_mean_std(values: Vec<f64>, any_expected: bool) -> (Option<f64>, Option<f64>) {
    if !any_expected || values.is_empty() {
        return (None, None);
    }
    let (m, s) = mean_std(&values);
    (Some(m), Some(s))
}

fn aggregate(cfg: &BenchConfig, rows: &[BenchRow]) -> Vec<AggregateRow> {
    let mut out = Vec::new();
    for &n in &cfg.orders {
        for &p in &cfg.densities {
            let cell: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.n == n && (r.p - p).abs() < f64::EPSILON)
                .collect();
            if cell.is_empty() {
                continue;
            }
            let (pr_mean, pr_std) =
                mean_std(&cell.iter().map(|r| r.percent_reduced).collect::<Vec<_>>());
            let (k_mean, k_std) =
                mean_std(&cell.iter().map(|r| r.k_used as f64).collect::<Vec<_>>());
            let (cs_mean, cs_std) = mean_std(
                &cell
                    .iter()
                    .map(|r| r.clique_size as f64)
                    .collect::<Vec<_>>(),
            );
            let (rt_mean, rt_std) = opt_mean_std(
                cell.iter().filter_map(|r| r.reduction_time).collect(),
                cfg.record_timings,
            );
            let (so_mean, so_std) = opt_mean_std(
                cell.iter().filter_map(|r| r.solve_time_original).collect(),
                cfg.record_timings && cfg.solve_original,
            );
            let (sr_mean, sr_std) = opt_mean_std(
                cell.iter().filter_map(|r| r.solve_time_reduced).collect(),
                cfg.record_timings,
            );
            out.push(AggregateRow {
                n,
                p,
                replicates: cell.len(),
                reduction_time_mean: rt_mean,
                reduction_time_std: rt_std,
                percent_reduced_mean: pr_mean,
                percent_reduced_std: pr_std,
                k_used_mean: k_mean,
                k_used_std: k_std,
                solve_time_original_mean: so_mean,
                solve_time_original_std: so_std,
                solve_time_reduced_mean: sr_mean,
                solve_time_reduced_std: sr_std,
                clique_size_mean: cs_mean,
                clique_size_std: cs_std,
            });
        }
    }
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// Row CSV: one header line, columns in `BenchRow` field order.
pub fn write_rows_csv<W: Write>(rows: &[BenchRow], out: &mut W) -> Result<()> {
    writeln!(
        out,
        "n,p,seed,reduction_time,survivor_order,percent_reduced,k_used,\
         solve_time_original,solve_time_reduced,clique_size,core_order"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.p,
            r.seed,
            fmt_opt(r.reduction_time),
            r.survivor_order,
            r.percent_reduced,
            r.k_used,
            fmt_opt(r.solve_time_original),
            fmt_opt(r.solve_time_reduced),
            r.clique_size,
            r.core_order
        )?;
    }
    Ok(())
}

/// Aggregate CSV: one line per (n, p) cell with mean/stddev pairs.
pub fn write_aggregates_csv<W: Write>(aggs: &[AggregateRow], out: &mut W) -> Result<()> {
    writeln!(
        out,
        "n,p,replicates,reduction_time_mean,reduction_time_std,\
         percent_reduced_mean,percent_reduced_std,k_used_mean,k_used_std,\
         solve_time_original_mean,solve_time_original_std,\
         solve_time_reduced_mean,solve_time_reduced_std,\
         clique_size_mean,clique_size_std"
    )?;
    for a in aggs {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            a.n,
            a.p,
            a.replicates,
            fmt_opt(a.reduction_time_mean),
            fmt_opt(a.reduction_time_std),
            a.percent_reduced_mean,
            a.percent_reduced_std,
            a.k_used_mean,
            a.k_used_std,
            fmt_opt(a.solve_time_original_mean),
            fmt_opt(a.solve_time_original_std),
            fmt_opt(a.solve_time_reduced_mean),
            fmt_opt(a.solve_time_reduced_std),
            a.clique_size_mean,
            a.clique_size_std
        )?;
    }
    Ok(())
}

/// Fraction of the main core's vertices that survive into the k-nub.
/// 0 when the nub is empty; the main core of a nonempty graph is never
/// empty, and an empty input graph has no meaningful ratio.
pub fn compare_core_vs_nub(g: &Graph, stats: &CliqueStats, k: u32, r: u32) -> Result<f64> {
    if stats.r() != r {
        return Err(Error::StatsMismatch(format!(
            "stats carry r={}, comparison wants r={r}",
            stats.r()
        )));
    }
    if g.is_empty() {
        return Err(Error::Domain(
            "core/nub comparison undefined on the empty graph".into(),
        ));
    }
    let nub = k_nub(g, stats, ReductionParams::new(k, r)?)?.survivor;
    let core = g.main_core();
    if core.is_empty() {
        // unreachable for n >= 1: the 0-core is the graph itself
        return Err(Error::Domain(
            "internal invariant violated: empty main core on a nonempty graph".into(),
        ));
    }
    if nub.is_empty() {
        return Ok(0.0);
    }
    Ok(nub.n() as f64 / core.n() as f64)
}
