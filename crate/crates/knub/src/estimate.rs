//! Candidate-k estimation and the reduce-then-solve driver.
//!
//! The clique number is bracketed from two sides. Counting r-cliques
//! yields an upper bound (a k-clique forces at least C(k, r) of them),
//! participation maxima tighten it, and reductions close the gap: an
//! empty k-nub certifies that no k-clique exists, while a clique found in
//! any survivor raises the lower bound. A halving schedule on the
//! candidate k drives the bracket shut.

use std::time::Instant;

use serde::Serialize;

use crate::binom::{binomial_at_most, binomial_saturating_u64};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::participation::{count_r_cliques_with_deadline, find_one_r_clique, CliqueStats};
use crate::reduce::{
    has_k_clique_prefilter, k_nub, k_nub_with_recount, ReductionParams, ReductionReport,
};
use crate::solve::{
    deadline_after, greedy_maximal_clique, max_clique_exact, CliqueKind, CliqueResult, SolverBudget,
};

/// Largest k (>= r) whose clique-count requirement C(k, r) is met by the
/// observed number of r-cliques; every larger order is impossible.
/// Returns the sentinel r - 1 when no r-clique exists at all.
pub fn initial_k_upper(total_r_cliques: u64, r: u32) -> u32 {
    assert!(r >= 2, "participation order r must be >= 2");
    if total_r_cliques == 0 {
        return r - 1;
    }
    let mut k = r;
    while binomial_at_most(k as u64 + 1, r as u64, total_r_cliques as u128) {
        k += 1;
    }
    k
}

/// Tightens a candidate k using participation maxima: a k'-clique needs
/// an edge with EP >= C(k'-2, r-2) and k' vertices with
/// VP >= C(k'-1, r-1). Returns the largest k' <= k passing both tests,
/// or the sentinel r - 1 if none does. `ep_only` drops the vertex test.
pub fn refine_k_by_participation(stats: &CliqueStats, k: u32, ep_only: bool) -> u32 {
    let r = stats.r();
    let (_, max_ep) = stats.max_participation();
    let mut kp = k;
    while kp >= r {
        let e_bound = binomial_saturating_u64(kp as u64 - 2, r as u64 - 2);
        if max_ep >= e_bound && (ep_only || vp_support(stats, kp)) {
            return kp;
        }
        kp -= 1;
    }
    r - 1
}

/// At least k vertices reach the vertex-participation threshold for a
/// k-clique.
fn vp_support(stats: &CliqueStats, k: u32) -> bool {
    let r = stats.r();
    let v_bound = binomial_saturating_u64(k as u64 - 1, r as u64 - 1);
    let mut hits = 0usize;
    for &c in stats.vp_slice() {
        if c >= v_bound {
            hits += 1;
            if hits >= k as usize {
                return true;
            }
        }
    }
    false
}

/// Halving step of the bracket search.
pub fn next_k(l: usize, k: u32) -> Result<u32> {
    if l as u64 >= k as u64 {
        return Err(Error::Domain(format!(
            "search already converged: lower bound {l} >= candidate {k}"
        )));
    }
    Ok(((l as u64 + k as u64) / 2) as u32)
}

/// The four ways a reduction at candidate k can turn out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeCase {
    Empty,
    UnderK,
    ExactlyK,
    OverK,
}

/// Classification of a survivor plus the bound updates it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub case: OutcomeCase,
    pub survivor_complete: bool,
    /// Set when the outcome pins the clique number outright.
    pub omega_exact: Option<usize>,
    /// Set when the outcome proves an upper bound on the clique number.
    pub omega_upper: Option<usize>,
    /// Best lower bound implied (from `l_prime`).
    pub lower: usize,
}

/// Sorts a survivor into the four outcome cases. `l_prime` is the size of
/// a maximal clique already found in the survivor (0 if empty). An empty
/// or undersized survivor refutes order k; an exactly-k complete survivor
/// is itself the maximum clique; an oversized survivor carries every
/// k-or-larger clique of the original graph.
pub fn classify_outcome(survivor: &Graph, k: u32, l_prime: usize) -> Classification {
    let k = k as usize;
    let order = survivor.n();
    if order == 0 {
        return Classification {
            case: OutcomeCase::Empty,
            survivor_complete: false,
            omega_exact: None,
            omega_upper: Some(k - 1),
            lower: 0,
        };
    }
    if order < k {
        return Classification {
            case: OutcomeCase::UnderK,
            survivor_complete: survivor.is_complete(),
            omega_exact: None,
            omega_upper: Some(k - 1),
            lower: l_prime,
        };
    }
    if order == k {
        let complete = survivor.is_complete();
        return Classification {
            case: OutcomeCase::ExactlyK,
            survivor_complete: complete,
            omega_exact: complete.then_some(k),
            omega_upper: (!complete).then_some(k - 1),
            lower: if complete { k } else { l_prime },
        };
    }
    Classification {
        case: OutcomeCase::OverK,
        survivor_complete: survivor.is_complete(),
        omega_exact: None,
        omega_upper: None,
        lower: l_prime,
    }
}

/// Largest k in `[r, upper]` whose k-nub is nonempty, found by bisection
/// (emptiness is monotone in k). This is the operating point where the
/// reduction is deepest while still certifying nothing was lost; above
/// it, every nub is empty. `None` when even k = r empties the graph.
pub fn max_nonempty_nub_k(
    g: &Graph,
    stats: &CliqueStats,
    upper: u32,
) -> Result<Option<(u32, ReductionReport)>> {
    let r = stats.r();
    if upper < r {
        return Ok(None);
    }
    let probe =
        |k: u32| -> Result<ReductionReport> { k_nub(g, stats, ReductionParams::new(k, r)?) };
    let mut best: Option<(u32, ReductionReport)> = None;
    let (mut lo, mut hi) = (r, upper);
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        let report = probe(mid)?;
        if report.survivor.is_empty() {
            // mid >= r >= 2, so this cannot underflow
            hi = mid - 1;
        } else {
            lo = mid + 1;
            best = Some((mid, report));
        }
    }
    Ok(best)
}

/// One reduction probe in the driver trace.
#[derive(Debug, Clone, Serialize)]
pub struct HistoryEntry {
    pub k: u32,
    pub case: OutcomeCase,
    pub survivor_order: usize,
    pub survivor_size: usize,
    pub lower: usize,
    pub upper: usize,
    pub elapsed_ms: u64,
}

/// Running state of the bracket search: proven lower bound with its
/// witness, current candidate, and the probe history.
#[derive(Debug, Clone, Serialize)]
pub struct KSearchState {
    pub lower: usize,
    pub k: u32,
    pub history: Vec<HistoryEntry>,
    pub witness: Vec<u64>,
}

/// Knobs of [`solve_with_reduction`].
#[derive(Debug, Clone)]
pub struct DriverOptions {
    pub r: u32,
    pub budget: SolverBudget,
    /// Recount participation on the survivor and reduce again at the same
    /// k until the survivor stops shrinking. Off by default.
    pub recount: bool,
    /// Use only the edge-participation test when refining k.
    pub ep_only_refine: bool,
}

impl DriverOptions {
    pub fn new(r: u32) -> DriverOptions {
        DriverOptions {
            r,
            budget: SolverBudget::default(),
            recount: false,
            ep_only_refine: false,
        }
    }
}

/// Reduce-then-solve pipeline: count r-cliques, bound k from the counts,
/// then repeatedly reduce at the candidate k and solve the survivor,
/// halving k until the bracket closes. Returns an exact result when the
/// lower bound meets the proven upper bound, otherwise an interval whose
/// witness realises the lower end.
///
/// The time budget caps the counting phase (an error if it cannot finish)
/// and each individual exact solve (which then degrades to maximal).
pub fn solve_with_reduction(
    g: &Graph,
    opts: &DriverOptions,
) -> Result<(CliqueResult, KSearchState)> {
    solve_with_reduction_using(g, None, opts)
}

/// [`solve_with_reduction`] with participation statistics that were
/// already computed (for example, loaded from a stats cache). The stats
/// must belong to this graph and carry `opts.r`.
pub fn solve_with_reduction_using(
    g: &Graph,
    precomputed: Option<&CliqueStats>,
    opts: &DriverOptions,
) -> Result<(CliqueResult, KSearchState)> {
    if opts.r < 3 {
        return Err(Error::Domain(format!(
            "driver needs participation order r >= 3, got {}",
            opts.r
        )));
    }
    if let Some(stats) = precomputed {
        if stats.r() != opts.r || !stats.matches(g) {
            return Err(Error::StatsMismatch(
                "precomputed statistics do not belong to this graph and r".into(),
            ));
        }
    }
    let started = Instant::now();
    let r = opts.r;
    let mut state = KSearchState {
        lower: 0,
        k: 0,
        history: Vec::new(),
        witness: Vec::new(),
    };

    // degenerate graphs first
    if g.is_empty() {
        let res = exact_result(0, Vec::new());
        return Ok((res, state));
    }
    if g.m() == 0 {
        state.lower = 1;
        state.witness = vec![g.label(0)];
        return Ok((exact_result(1, state.witness.clone()), state));
    }

    // no r-clique can exist if too few vertices have degree >= r - 1
    if !has_k_clique_prefilter(g, r) {
        let res = solve_directly(g, opts, (r - 1) as usize, &mut state);
        return Ok((res, state));
    }

    let deadline = deadline_after(opts.budget.max_time);
    let counted;
    let stats: &CliqueStats = match precomputed {
        Some(stats) => stats,
        None => {
            counted = count_r_cliques_with_deadline(g, r, Some(deadline))?;
            &counted
        }
    };
    if stats.total() == 0 {
        let res = solve_directly(g, opts, (r - 1) as usize, &mut state);
        return Ok((res, state));
    }

    // upper bound from counts, tightened by participation
    let k0 = initial_k_upper(stats.total(), r);
    let mut upper = refine_k_by_participation(stats, k0, opts.ep_only_refine) as usize;

    // lower bound: extend one r-clique greedily
    let seed = find_one_r_clique(g, r).expect("total > 0 implies an r-clique");
    let witness_ids = greedy_maximal_clique(g, Some(&seed));
    state.lower = witness_ids.len();
    state.witness = sorted_labels(g, &witness_ids);
    debug_assert!(state.lower <= upper);

    // deepest useful reduction: above this k every nub is empty, which
    // also certifies the upper bound
    let deepest = max_nonempty_nub_k(g, stats, upper as u32)?;
    let (mut k, mut pending) = match deepest {
        Some((k, report)) => {
            upper = upper.min(k as usize);
            let survivor = &report.survivor;
            let case = classify_outcome(survivor, k, 0).case;
            push_history(
                &mut state,
                k,
                case,
                survivor.n(),
                survivor.m(),
                upper,
                started,
            );
            (k, Some((k, report)))
        }
        None => {
            // even k = r empties the graph: contradicts total > 0
            return Err(Error::StatsMismatch(
                "nub at k = r is empty although r-cliques were counted".into(),
            ));
        }
    };

    let mut last_solved: Option<(Graph, CliqueResult)> = None;
    for _ in 0..64 {
        if state.lower >= upper {
            state.k = k;
            return Ok((exact_result(state.lower, state.witness.clone()), state));
        }
        k = (k as usize).clamp(state.lower + 1, upper) as u32;
        state.k = k;

        let report = match pending.take() {
            // recounting changes the reduction, so bisection probes are
            // reused only in the plain mode
            Some((probe_k, rep)) if probe_k == k && !opts.recount => rep,
            _ => reduce_at(g, stats, k, r, opts)?,
        };
        let survivor = &report.survivor;

        if survivor.is_empty() {
            upper = (k - 1) as usize;
            push_history(&mut state, k, OutcomeCase::Empty, 0, 0, upper, started);
            if state.lower < upper {
                k = next_k(state.lower, k)?;
            }
            continue;
        }

        // solve the survivor (reusing the previous solve when the graph
        // did not change)
        let res = match &last_solved {
            Some((prev, res)) if prev == survivor => res.clone(),
            _ => {
                let res = max_clique_exact(survivor, &opts.budget);
                last_solved = Some((survivor.clone(), res.clone()));
                res
            }
        };
        if res.lower > state.lower {
            state.lower = res.lower;
            state.witness = res.witness.clone();
        }

        let cls = classify_outcome(survivor, k, res.lower);
        push_history(
            &mut state,
            k,
            cls.case,
            survivor.n(),
            survivor.m(),
            upper,
            started,
        );

        if let Some(exact) = cls.omega_exact {
            // exactly-k complete survivor: it is the maximum clique
            state.lower = exact;
            state.witness = survivor.labels();
            return Ok((exact_result(exact, state.witness.clone()), state));
        }

        // under-k and exactly-k-incomplete survivors refute a k-clique
        // structurally, solver outcome or not
        let structurally_refuted = cls.omega_upper.is_some();
        if let Some(u) = cls.omega_upper {
            upper = upper.min(u);
        }

        if res.is_exact() {
            if survivor.n() == g.n() && survivor.m() == g.m() {
                // nothing was reduced away, so this was a full solve
                return Ok((exact_result(res.lower, res.witness.clone()), state));
            }
            if res.lower >= k as usize {
                // an at-least-k clique survives, so it is a maximum
                // clique of the whole graph
                return Ok((exact_result(res.lower, res.witness.clone()), state));
            }
            // the survivor holds every k-clique of g, and it has none
            upper = upper.min(k as usize - 1);
        } else if k as usize == state.lower + 1 && !structurally_refuted {
            // smallest informative candidate already exceeds the solver
            // budget; no further probe can tighten the bracket
            break;
        }

        if state.lower < upper && (k as usize) > state.lower {
            let halved = next_k(state.lower, k)?;
            k = halved.max(state.lower as u32 + 1);
        }
    }

    state.k = k;
    let result = CliqueResult {
        kind: if state.lower == upper {
            CliqueKind::Exact
        } else {
            CliqueKind::Interval
        },
        lower: state.lower,
        upper,
        witness: state.witness.clone(),
    };
    Ok((result, state))
}

fn reduce_at(
    g: &Graph,
    stats: &CliqueStats,
    k: u32,
    r: u32,
    opts: &DriverOptions,
) -> Result<ReductionReport> {
    let params = ReductionParams::new(k, r)?;
    if opts.recount {
        k_nub_with_recount(g, stats, params)
    } else {
        k_nub(g, stats, params)
    }
}

/// Exact solve without reduction, for graphs already known to have no
/// r-clique (clique number < r).
fn solve_directly(
    g: &Graph,
    opts: &DriverOptions,
    upper_cap: usize,
    state: &mut KSearchState,
) -> CliqueResult {
    let res = max_clique_exact(g, &opts.budget);
    state.lower = res.lower;
    state.witness = res.witness.clone();
    if res.is_exact() {
        res
    } else {
        CliqueResult {
            kind: CliqueKind::Interval,
            lower: res.lower,
            upper: res.upper.min(upper_cap),
            witness: res.witness,
        }
    }
}

fn exact_result(size: usize, witness: Vec<u64>) -> CliqueResult {
    CliqueResult {
        kind: CliqueKind::Exact,
        lower: size,
        upper: size,
        witness,
    }
}

fn sorted_labels(g: &Graph, vs: &[u32]) -> Vec<u64> {
    let mut w: Vec<u64> = vs.iter().map(|&v| g.label(v)).collect();
    w.sort_unstable();
    w
}

fn push_history(
    state: &mut KSearchState,
    k: u32,
    case: OutcomeCase,
    survivor_order: usize,
    survivor_size: usize,
    upper: usize,
    started: Instant,
) {
    state.history.push(HistoryEntry {
        k,
        case,
        survivor_order,
        survivor_size,
        lower: state.lower,
        upper,
        elapsed_ms: started.elapsed().as_millis() as u64,
    });
}
