mod common;

use common::{closed_graph, random_closed_subsets};
use ksctx_core::connection::{
    enumerate_connections, random_cycle, sample_holonomy, ConnectionSearchOptions,
    BRUTE_FORCE_TRIAD_CAP,
};
use ksctx_core::corpus::builtin;
use ksctx_core::{
    brute_force_3c, cocycle_check, connection_from_labeling, connection_search,
    labeling_from_connection, three_colorable, verify_holonomy, Bijection, ContextCycle,
    ContextPoset, Error, OrthoGraph, SearchOptions,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn closed_instances() -> Vec<(OrthoGraph, ContextPoset)> {
    let mut out = Vec::new();
    for (parent, seed) in [("yu-oh-25", 11), ("peres-57", 12)] {
        for s in random_closed_subsets(&builtin(parent).unwrap(), 30, seed) {
            let g = OrthoGraph::build(s).unwrap();
            let p = ContextPoset::build(&g).unwrap();
            out.push((g, p));
        }
    }
    for name in ["triad", "two-triads"] {
        let g = closed_graph(name);
        let p = ContextPoset::build(&g).unwrap();
        out.push((g, p));
    }
    out
}

#[test]
fn labelling_round_trip() {
    let mut checked = 0;
    for (g, poset) in closed_instances() {
        if poset.is_empty() {
            continue;
        }
        let Some(lab) = three_colorable(&g, SearchOptions::default()).witness else {
            continue;
        };
        let conn = connection_from_labeling(&lab, &poset).unwrap();
        conn.check_axioms(&poset).unwrap();
        assert!(cocycle_check(&conn, &poset).unwrap().consistent);
        let back = labeling_from_connection(&conn, &poset, &g).unwrap();
        for &r in &back.outside_triads {
            assert!(g.triads_of(r).is_empty());
        }
        // compare on rays that lie in some triad
        let inside: Vec<usize> = (0..g.len()).filter(|&r| !g.triads_of(r).is_empty()).collect();
        let restrict = |l: &ksctx_core::Labeling| {
            ksctx_core::Labeling(inside.iter().map(|&r| l.0[r]).collect())
        };
        assert!(restrict(&back.labeling).equivalent_up_to_relabel(&restrict(&lab)));
        checked += 1;
    }
    assert!(checked > 10);
}

#[test]
fn connections_fix_shared_rays() {
    for (g, poset) in closed_instances() {
        let Some(lab) = three_colorable(&g, SearchOptions::default()).witness else {
            continue;
        };
        let conn = connection_from_labeling(&lab, &poset).unwrap();
        for (&(a, b), &ray) in poset.shared_table() {
            assert_eq!(conn.ray_image(&poset, a, b, ray).unwrap(), ray);
            assert_eq!(conn.ray_image(&poset, b, a, ray).unwrap(), ray);
        }
    }
}

/// Each connection matches exactly six labellings of the rays in triads; rays
/// outside every triad are unconstrained.
#[test]
fn connection_count_matches_labelling_count() {
    let mut checked = 0;
    for (g, poset) in closed_instances() {
        if poset.is_empty() || poset.len() > BRUTE_FORCE_TRIAD_CAP || g.len() > 13 {
            continue;
        }
        let conns = enumerate_connections(&poset).unwrap();
        let labs = brute_force_3c(&g, 13).unwrap();
        let free = (0..g.len()).filter(|&r| g.triads_of(r).is_empty()).count() as u32;
        assert_eq!(conns.count * 6 * 3u64.pow(free), labs.count);
        checked += 1;
    }
    assert!(checked > 5, "{checked}");
}

#[test]
fn search_agrees_with_enumeration_and_colouring() {
    for (g, poset) in closed_instances() {
        let opts = ConnectionSearchOptions {
            budget: None,
            brute_force: true,
        };
        let search = connection_search(&poset, &g, opts).unwrap();
        let coloring = three_colorable(&g, SearchOptions::default());
        assert_eq!(search.verdict.satisfiable(), coloring.satisfiable());
        if poset.len() <= BRUTE_FORCE_TRIAD_CAP {
            assert_eq!(search.agrees(), Some(true));
        } else {
            assert!(search.brute_force.is_none());
        }
    }
}

#[test]
fn closure_of_the_peres_set_has_no_connection() {
    let g = closed_graph("peres-33");
    let poset = ContextPoset::build(&g).unwrap();
    let search = connection_search(&poset, &g, ConnectionSearchOptions::default()).unwrap();
    assert_eq!(search.verdict.satisfiable(), Some(false));
}

#[test]
fn open_sets_are_refused() {
    let g = OrthoGraph::build(builtin("peres-33").unwrap()).unwrap();
    let poset = ContextPoset::build(&g).unwrap();
    let err = connection_search(&poset, &g, ConnectionSearchOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NotClosed(..)), "{err}");
}

#[test]
fn returned_connections_have_trivial_holonomy() {
    let mut rng = StdRng::seed_from_u64(99);
    for (g, poset) in closed_instances() {
        let search = connection_search(&poset, &g, ConnectionSearchOptions::default()).unwrap();
        if let Some(conn) = search.verdict.witness {
            let sample = sample_holonomy(&conn, &poset, &mut rng, 200, 8).unwrap();
            assert!(sample.nontrivial.is_empty());
        }
    }
}

#[test]
fn twisted_connection_has_residual_three_cycle() {
    let poset = ContextPoset::from_triads(vec![[0, 1, 2], [3, 4, 5], [6, 7, 8]]).unwrap();
    let mut conn = ksctx_core::Connection::new();
    conn.insert(0, 1, Bijection::IDENTITY);
    conn.insert(1, 2, Bijection::IDENTITY);
    conn.insert(0, 2, Bijection::new([2, 0, 1]).unwrap());
    let h = verify_holonomy(&conn, &ContextCycle::new(vec![0, 1, 2]).unwrap()).unwrap();
    assert!(!h.trivial);
    assert_eq!(h.cycle_notation(&poset), "(0 1 2)");
    assert!(!cocycle_check(&conn, &poset).unwrap().consistent);
    // reversing the cycle gives the inverse residual
    let back = verify_holonomy(&conn, &ContextCycle::new(vec![2, 1, 0]).unwrap()).unwrap();
    assert_eq!(back.composite, h.composite.inverse());
}

#[test]
fn missing_pairs_are_reported() {
    let poset = ContextPoset::from_triads(vec![[0, 1, 2], [3, 4, 5]]).unwrap();
    let conn = ksctx_core::Connection::new();
    let err = verify_holonomy(&conn, &ContextCycle::new(vec![0, 1]).unwrap()).unwrap_err();
    assert!(matches!(err, Error::MissingPair { .. }), "{err}");
    assert!(conn.check_axioms(&poset).is_err());
}

fn bijection() -> impl Strategy<Value = Bijection> {
    prop::sample::select(Bijection::ALL.to_vec())
}

proptest! {
    #[test]
    fn bijections_form_a_group(a in bijection(), b in bijection(), c in bijection()) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.then(&Bijection::IDENTITY), a);
        for p in 0..3 {
            prop_assert_eq!(a.then(&b).apply(p), b.apply(a.apply(p)));
        }
    }

    #[test]
    fn random_cycles_are_valid(seed in any::<u64>(), triads in 2usize..10, max_len in 2usize..9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cycle = random_cycle(&mut rng, triads, max_len).unwrap();
        let c = cycle.contexts();
        prop_assert!(c.len() >= 2 && c.len() <= max_len);
        for i in 0..c.len() {
            prop_assert!(c[i] < triads);
            prop_assert_ne!(c[i], c[(i + 1) % c.len()]);
        }
    }
}
