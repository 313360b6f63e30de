//! Cross-module pipeline checks at sizes between the unit tests and the
//! acceptance sweeps.

mod common;

use knub::{
    count_r_cliques, gen_erdos_renyi, max_clique_exact, max_nonempty_nub_k, parse_edge_list,
    solve_with_reduction, write_snap, DriverOptions, EdgeFormat, SolverBudget,
};

use common::{labels_induce_clique, SMALL14};

/// The reduce-then-solve route and a direct exact solve of the original
/// graph are two independent paths to the clique number; they must agree.
#[test]
fn reduction_route_matches_direct_solve_on_er_graphs() {
    for (n, p, seed) in [(200usize, 0.3f64, 1u64), (150, 0.5, 2), (300, 0.2, 3)] {
        let g = gen_erdos_renyi(n, p, seed).unwrap();
        let (via_reduction, _) = solve_with_reduction(&g, &DriverOptions::new(3)).unwrap();
        let direct = max_clique_exact(&g, &SolverBudget::default());
        assert!(via_reduction.is_exact() && direct.is_exact());
        assert_eq!(
            via_reduction.lower, direct.lower,
            "G({n}, {p}, {seed}): routes disagree"
        );
        assert!(labels_induce_clique(&g, &via_reduction.witness));
    }
}

/// r = 4 statistics drive the same pipeline to the same answer.
#[test]
fn higher_participation_order_gives_the_same_clique_number() {
    let g = gen_erdos_renyi(150, 0.3, 9).unwrap();
    let (r3, _) = solve_with_reduction(&g, &DriverOptions::new(3)).unwrap();
    let (r4, _) = solve_with_reduction(&g, &DriverOptions::new(4)).unwrap();
    assert!(r3.is_exact() && r4.is_exact());
    assert_eq!(r3.lower, r4.lower);
}

/// Survivors written as snap-txt re-enter the pipeline unchanged.
#[test]
fn survivor_round_trips_through_the_writer() {
    let g = parse_edge_list(SMALL14, EdgeFormat::SnapTxt).unwrap();
    let stats = count_r_cliques(&g, 3).unwrap();
    let (_, report) = max_nonempty_nub_k(&g, &stats, 5).unwrap().unwrap();
    let text = write_snap(&report.survivor, "pipeline-test");
    let back = parse_edge_list(&text, EdgeFormat::SnapTxt).unwrap();
    assert_eq!(back.n(), report.survivor.n());
    assert_eq!(back.m(), report.survivor.m());
    assert_eq!(back.labels(), report.survivor.labels());
    // the survivor of the deepest reduction still contains a maximum clique
    let solved = max_clique_exact(&back, &SolverBudget::default());
    assert_eq!(solved.lower, 4);
}

/// The driver trace records every probe with consistent bounds.
#[test]
fn driver_trace_is_consistent() {
    let g = gen_erdos_renyi(300, 0.2, 5).unwrap();
    let (res, state) = solve_with_reduction(&g, &DriverOptions::new(3)).unwrap();
    assert!(res.is_exact());
    assert!(!state.history.is_empty());
    for h in &state.history {
        assert!(h.lower <= h.upper + 1, "bounds crossed in trace");
        assert!(res.lower >= h.lower, "final answer below a recorded bound");
        assert!(res.lower <= h.upper, "final answer above a recorded upper");
    }
    let json = serde_json::to_string(&state).unwrap();
    assert!(json.contains("\"history\""));
}
