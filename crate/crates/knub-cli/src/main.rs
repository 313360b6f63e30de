//! `knub`: find maximum cliques in large sparse graphs by reducing them
//! first. Progress goes to stderr; machine-readable output goes to files
//! and stdout only.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use knub::{
    compare_core_vs_nub, count_r_cliques, initial_k_upper, k_nub, k_nub_with_recount,
    max_nonempty_nub_k, parse_edge_list, refine_k_by_participation, run_er_benchmark, write_snap,
    BenchConfig, CliqueStats, DriverOptions, EdgeFormat, Graph, ReductionParams, SolverBudget,
    StatsFile,
};

#[derive(Parser)]
#[command(
    name = "knub",
    version,
    about = "Maximum-clique search via participation-based graph reduction"
)]
struct Cli {
    /// Worker threads for clique counting (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// More progress detail on stderr (repeatable)
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file to read
    #[arg(long)]
    input: PathBuf,

    /// Input format: snap or mtx (default: by file extension)
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Wall-clock cap in seconds for counting and for each exact solve
    #[arg(long, default_value_t = 60.0)]
    time_budget: f64,

    /// Search-tree node cap for each exact solve
    #[arg(long, default_value_t = 200_000_000)]
    node_budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Count r-cliques and persist the participation statistics
    Count {
        #[command(flatten)]
        input: InputArgs,

        /// Clique order to count
        #[arg(long, default_value_t = 3)]
        r: u32,

        /// Statistics file to write (default: `<input>.r<r>.stats.json`)
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Reduce a graph to its k-nub and write the survivor
    Reduce {
        #[command(flatten)]
        input: InputArgs,

        #[arg(long, default_value_t = 3)]
        r: u32,

        /// Target clique order (default: estimated from the counts)
        #[arg(long)]
        k: Option<u32>,

        /// Statistics file to reuse instead of recounting
        #[arg(long)]
        stats: Option<PathBuf>,

        /// Survivor edge list to write (default: `<input>.nub.txt`)
        #[arg(long)]
        out: Option<PathBuf>,

        /// Reduction report to write (default: `<input>.nub.json`)
        #[arg(long)]
        report: Option<PathBuf>,

        /// Recount participation on the survivor and reduce again until
        /// stable
        #[arg(long)]
        recount: bool,
    },

    /// Find the maximum clique (or tight bounds) via reduce-then-solve
    Solve {
        #[command(flatten)]
        input: InputArgs,

        #[arg(long, default_value_t = 3)]
        r: u32,

        #[command(flatten)]
        budget: BudgetArgs,

        /// Statistics file to reuse instead of recounting
        #[arg(long)]
        stats: Option<PathBuf>,

        /// Write the result JSON here as well as to stdout
        #[arg(long)]
        out: Option<PathBuf>,

        /// Write the per-iteration search trace JSON here
        #[arg(long)]
        trace: Option<PathBuf>,

        /// Recount participation on each survivor before reducing again
        #[arg(long)]
        recount: bool,

        /// Refine k with the edge-participation test only
        #[arg(long)]
        ep_only: bool,
    },

    /// Run the seeded random-graph benchmark sweep
    Bench {
        /// Benchmark configuration JSON (default: the desk-scale sweep)
        #[arg(long)]
        config: Option<PathBuf>,

        /// Override the configuration's base seed
        #[arg(long)]
        seed: Option<u64>,

        /// Per-row CSV to write
        #[arg(long)]
        out: PathBuf,

        /// Aggregate CSV to write (default: `<out stem>.agg.csv`)
        #[arg(long)]
        agg_out: Option<PathBuf>,
    },

    /// Ratio of the k-nub's order to the main core's order
    CompareCore {
        #[command(flatten)]
        input: InputArgs,

        #[arg(long, default_value_t = 3)]
        r: u32,

        /// Target clique order (default: estimated from the counts)
        #[arg(long)]
        k: Option<u32>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("knub: could not configure {threads} threads: {e}");
            std::process::exit(1);
        }
    }
    let verbose = cli.verbose;
    let result = match cli.command {
        Command::Count { input, r, out } => cmd_count(&input, r, out.as_deref(), verbose),
        Command::Reduce {
            input,
            r,
            k,
            stats,
            out,
            report,
            recount,
        } => cmd_reduce(
            &input,
            r,
            k,
            stats.as_deref(),
            out,
            report,
            recount,
            verbose,
        ),
        Command::Solve {
            input,
            r,
            budget,
            stats,
            out,
            trace,
            recount,
            ep_only,
        } => cmd_solve(
            &input,
            r,
            &budget,
            stats.as_deref(),
            out,
            trace,
            recount,
            ep_only,
            verbose,
        ),
        Command::Bench {
            config,
            seed,
            out,
            agg_out,
        } => cmd_bench(config.as_deref(), seed, &out, agg_out, verbose),
        Command::CompareCore { input, r, k } => cmd_compare_core(&input, r, k, verbose),
    };
    if let Err(e) = result {
        eprintln!("knub: error: {e:#}");
        std::process::exit(1);
    }
}

fn warn_degenerate_r(r: u32) {
    if r == 2 {
        eprintln!(
            "knub: warning: r = 2 makes participation thresholds plain degree tests; \
             r >= 3 gives real reductions"
        );
    }
}

fn budget_of(args: &BudgetArgs) -> Result<SolverBudget> {
    if !(args.time_budget > 0.0 && args.time_budget.is_finite()) {
        bail!("--time-budget must be a positive number of seconds");
    }
    SolverBudget::new(Duration::from_secs_f64(args.time_budget), args.node_budget)
        .map_err(|e| anyhow::anyhow!("{e}"))
}

fn load_graph(args: &InputArgs) -> Result<(Graph, String, Vec<u8>)> {
    let bytes =
        fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let text = std::str::from_utf8(&bytes).context("input is not UTF-8 text")?;
    let format = match &args.format {
        Some(f) => f
            .parse::<EdgeFormat>()
            .map_err(|e| anyhow::anyhow!("{e}"))?,
        None => knub::format_for_path(&args.input.to_string_lossy()),
    };
    let g = parse_edge_list(text, format)
        .with_context(|| format!("parsing {} as {format}", args.input.display()))?;
    let hash = hex::encode(Sha256::digest(&bytes));
    Ok((g, hash, bytes))
}

fn default_stats_path(input: &Path, r: u32) -> PathBuf {
    let mut name = input.as_os_str().to_os_string();
    name.push(format!(".r{r}.stats.json"));
    PathBuf::from(name)
}

/// Loads cached statistics if they match the input (by content hash and
/// r), otherwise counts afresh (within `deadline`, if any) and refreshes
/// the cache.
fn load_or_count(
    g: &Graph,
    r: u32,
    input: &Path,
    hash: &str,
    explicit: Option<&Path>,
    deadline: Option<Duration>,
    verbose: u8,
) -> Result<CliqueStats> {
    let cache = default_stats_path(input, r);
    for path in [explicit, Some(cache.as_path())].into_iter().flatten() {
        if !path.is_file() {
            continue;
        }
        let text = fs::read_to_string(path)?;
        let file: StatsFile = match serde_json::from_str(&text) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("knub: ignoring stats {}: {e}", path.display());
                continue;
            }
        };
        if file.r != r {
            eprintln!(
                "knub: ignoring stats {} (r = {}, wanted {r})",
                path.display(),
                file.r
            );
            continue;
        }
        if let Some(h) = &file.graph_hash {
            if h != hash {
                eprintln!(
                    "knub: ignoring stats {} (input content changed)",
                    path.display()
                );
                continue;
            }
        }
        match file.into_stats(g) {
            Ok(stats) => {
                eprintln!("knub: reusing statistics from {}", path.display());
                return Ok(stats);
            }
            Err(e) => eprintln!("knub: ignoring stats {}: {e}", path.display()),
        }
    }

    let t0 = Instant::now();
    let stats = knub::participation::count_r_cliques_with_deadline(
        g,
        r,
        deadline.map(|d| {
            let now = Instant::now();
            now.checked_add(d)
                .unwrap_or_else(|| now + Duration::from_secs(31_536_000))
        }),
    )?;
    if verbose > 0 {
        eprintln!(
            "knub: counted {} {r}-cliques in {:?}",
            stats.total(),
            t0.elapsed()
        );
    }
    let file = StatsFile::from_stats(g, &stats, Some(hash.to_string()));
    fs::write(&cache, serde_json::to_string(&file)?)
        .with_context(|| format!("writing {}", cache.display()))?;
    eprintln!("knub: cached statistics at {}", cache.display());
    Ok(stats)
}

fn cmd_count(input: &InputArgs, r: u32, out: Option<&Path>, verbose: u8) -> Result<()> {
    warn_degenerate_r(r);
    let (g, hash, _) = load_graph(input)?;
    if verbose > 0 {
        eprintln!("knub: graph n={} m={}", g.n(), g.m());
    }
    let t0 = Instant::now();
    let stats = count_r_cliques(&g, r)?;
    let elapsed = t0.elapsed();

    let label = if r == 3 {
        "triangles".to_string()
    } else {
        format!("{r}-cliques")
    };
    println!("{label}: {}", stats.total());
    eprintln!("knub: counted in {elapsed:?}");

    let path = out
        .map(PathBuf::from)
        .unwrap_or_else(|| default_stats_path(&input.input, r));
    let file = StatsFile::from_stats(&g, &stats, Some(hash));
    fs::write(&path, serde_json::to_string(&file)?)
        .with_context(|| format!("writing {}", path.display()))?;
    eprintln!("knub: statistics written to {}", path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(
    input: &InputArgs,
    r: u32,
    k: Option<u32>,
    stats_path: Option<&Path>,
    out: Option<PathBuf>,
    report_path: Option<PathBuf>,
    recount: bool,
    verbose: u8,
) -> Result<()> {
    warn_degenerate_r(r);
    let (g, hash, _) = load_graph(input)?;
    let stats = load_or_count(&g, r, &input.input, &hash, stats_path, None, verbose)?;

    let k = match k {
        Some(k) => k,
        None => {
            if stats.total() == 0 {
                bail!("graph has no {r}-cliques; below order {r} there is nothing to reduce for");
            }
            let k0 = initial_k_upper(stats.total(), r);
            let refined = refine_k_by_participation(&stats, k0, false);
            eprintln!("knub: estimated k = {refined} (count bound {k0})");
            refined
        }
    };

    let params = ReductionParams::new(k, r).map_err(|e| anyhow::anyhow!("{e}"))?;
    let t0 = Instant::now();
    let report = if recount {
        k_nub_with_recount(&g, &stats, params)?
    } else {
        k_nub(&g, &stats, params)?
    };
    eprintln!(
        "knub: reduced {} -> {} vertices ({} -> {} edges) in {:?}",
        g.n(),
        report.survivor.n(),
        g.m(),
        report.survivor.m(),
        t0.elapsed()
    );
    if report.survivor.is_empty() {
        eprintln!("knub: no {k}-clique exists (the reduction emptied the graph)");
    }

    let out = out.unwrap_or_else(|| {
        let mut name = input.input.as_os_str().to_os_string();
        name.push(".nub.txt");
        PathBuf::from(name)
    });
    let source = format!("{}-nub of {}", k, input.input.display());
    fs::write(&out, write_snap(&report.survivor, &source))
        .with_context(|| format!("writing {}", out.display()))?;
    eprintln!("knub: survivor written to {}", out.display());

    let report_path = report_path.unwrap_or_else(|| {
        let mut name = input.input.as_os_str().to_os_string();
        name.push(".nub.json");
        PathBuf::from(name)
    });
    let summary = report.summary(params, Some(out.display().to_string()));
    fs::write(&report_path, serde_json::to_string_pretty(&summary)?)
        .with_context(|| format!("writing {}", report_path.display()))?;
    eprintln!("knub: report written to {}", report_path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    input: &InputArgs,
    r: u32,
    budget: &BudgetArgs,
    stats_path: Option<&Path>,
    out: Option<PathBuf>,
    trace: Option<PathBuf>,
    recount: bool,
    ep_only: bool,
    verbose: u8,
) -> Result<()> {
    let (g, hash, _) = load_graph(input)?;
    if verbose > 0 {
        eprintln!("knub: graph n={} m={}", g.n(), g.m());
    }
    let solver_budget = budget_of(budget)?;
    let stats = load_or_count(
        &g,
        r,
        &input.input,
        &hash,
        stats_path,
        Some(solver_budget.max_time),
        verbose,
    )?;

    let mut opts = DriverOptions::new(r);
    opts.budget = solver_budget;
    opts.recount = recount;
    opts.ep_only_refine = ep_only;

    let t0 = Instant::now();
    let (result, state) = knub::solve_with_reduction_using(&g, Some(&stats), &opts)?;
    let elapsed = t0.elapsed();
    eprintln!(
        "knub: {:?} omega in [{}, {}] after {} probes in {elapsed:?}",
        result.kind,
        result.lower,
        result.upper,
        state.history.len()
    );

    let json = serde_json::to_string_pretty(&result)?;
    println!("{json}");
    if let Some(path) = out {
        fs::write(&path, &json).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("knub: result written to {}", path.display());
    }
    if let Some(path) = trace {
        fs::write(&path, serde_json::to_string_pretty(&state)?)
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("knub: trace written to {}", path.display());
    }
    Ok(())
}

fn cmd_bench(
    config: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    agg_out: Option<PathBuf>,
    verbose: u8,
) -> Result<()> {
    let mut cfg: BenchConfig = match config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => BenchConfig::desk_default(),
    };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if verbose > 0 {
        eprintln!(
            "knub: sweep orders={:?} densities={:?} replicates={} r={} seed={}",
            cfg.orders, cfg.densities, cfg.replicates, cfg.r, cfg.seed
        );
    }

    let t0 = Instant::now();
    let output = run_er_benchmark(&cfg)?;
    eprintln!("knub: {} rows in {:?}", output.rows.len(), t0.elapsed());

    let mut rows_csv = Vec::new();
    knub::experiments::write_rows_csv(&output.rows, &mut rows_csv)?;
    fs::write(out, rows_csv).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("knub: rows written to {}", out.display());

    let agg_path = agg_out.unwrap_or_else(|| {
        let stem = out.file_stem().unwrap_or_default().to_string_lossy();
        out.with_file_name(format!("{stem}.agg.csv"))
    });
    let mut agg_csv = Vec::new();
    knub::experiments::write_aggregates_csv(&output.aggregates, &mut agg_csv)?;
    fs::write(&agg_path, agg_csv).with_context(|| format!("writing {}", agg_path.display()))?;
    eprintln!("knub: aggregates written to {}", agg_path.display());
    Ok(())
}

fn cmd_compare_core(input: &InputArgs, r: u32, k: Option<u32>, verbose: u8) -> Result<()> {
    let (g, hash, _) = load_graph(input)?;
    let stats = load_or_count(&g, r, &input.input, &hash, None, None, verbose)?;

    let k = match k {
        Some(k) => k,
        None => {
            if stats.total() == 0 {
                bail!("graph has no {r}-cliques; no reduction point to compare at");
            }
            let k0 = initial_k_upper(stats.total(), r);
            let refined = refine_k_by_participation(&stats, k0, false);
            match max_nonempty_nub_k(&g, &stats, refined)? {
                Some((k, _)) => k,
                None => bail!("every reduction empties the graph; nothing to compare"),
            }
        }
    };
    eprintln!("knub: comparing the {k}-nub against the main core");
    let ratio = compare_core_vs_nub(&g, &stats, k, r)?;
    println!("{ratio:.4}");
    Ok(())
}
