mod common;

use common::{closed_graph, graph, random_closed_subsets, sq};
use ksctx_core::corpus::{builtin, NAMES};
use ksctx_core::solve::{DEFAULT_3C_BRUTE_CAP, DEFAULT_KS_BRUTE_CAP};
use ksctx_core::{
    brute_force_3c, brute_force_ks, check_witness, ks_colorable, three_colorable, Error,
    KsColoring, Label, Labeling, OrthoGraph, SearchOptions, Status,
};

fn small_graphs() -> Vec<OrthoGraph> {
    let mut out: Vec<OrthoGraph> = ["yu-oh-13", "triad", "two-triads"].iter().map(|n| graph(n)).collect();
    for (parent, seed) in [("yu-oh-25", 1), ("peres-57", 2)] {
        for s in random_closed_subsets(&builtin(parent).unwrap(), 40, seed) {
            out.push(OrthoGraph::build(s).unwrap());
        }
    }
    out
}

#[test]
fn solvers_agree_with_enumeration() {
    let (mut ks_checked, mut c3_checked) = (0, 0);
    for g in small_graphs() {
        if g.len() <= DEFAULT_KS_BRUTE_CAP {
            let bf = brute_force_ks(&g, DEFAULT_KS_BRUTE_CAP).unwrap();
            let v = ks_colorable(&g, SearchOptions::default());
            assert_eq!(bf.verdict.satisfiable(), v.satisfiable());
            assert_eq!(bf.count > 0, v.is_sat());
            ks_checked += 1;
        }
        if g.len() <= DEFAULT_3C_BRUTE_CAP {
            let bf = brute_force_3c(&g, DEFAULT_3C_BRUTE_CAP).unwrap();
            let v = three_colorable(&g, SearchOptions::default());
            assert_eq!(bf.verdict.satisfiable(), v.satisfiable());
            // with an edge present, labellings come in orbits of the six relabellings
            if !g.edges().is_empty() {
                assert_eq!(bf.count % 6, 0);
            }
            c3_checked += 1;
        }
    }
    assert!(ks_checked > 20 && c3_checked > 20, "{ks_checked} {c3_checked}");
}

#[test]
fn small_known_counts() {
    assert_eq!(brute_force_3c(&graph("triad"), 13).unwrap().count, 6);
    assert_eq!(brute_force_3c(&graph("two-triads"), 13).unwrap().count, 12);
    assert_eq!(brute_force_ks(&graph("triad"), 20).unwrap().count, 3);
    assert_eq!(brute_force_3c(&graph("yu-oh-13"), 13).unwrap().count, 0);
}

#[test]
fn three_colourings_give_ks_colourings() {
    for g in small_graphs().iter().chain([closed_graph("triad")].iter()) {
        if let Some(lab) = three_colorable(g, SearchOptions::default()).witness {
            assert!(check_witness(g, &lab).unwrap());
            // whichever label is sent to 1, the result is a KS colouring
            for shift in 0..3 {
                let shifted = Labeling(lab.0.iter().map(|&l| Label::from_index((l.index() + shift) % 3)).collect());
                assert!(check_witness(g, &shifted.to_ks()).unwrap());
            }
            assert!(ks_colorable(g, SearchOptions::default()).is_sat());
        }
    }
}

#[test]
fn published_verdicts() {
    for name in NAMES {
        let entry = ksctx_core::corpus_get(name).unwrap();
        let g = OrthoGraph::build(entry.rays).unwrap();
        let ks = ks_colorable(&g, SearchOptions::default());
        let c3 = three_colorable(&g, SearchOptions::default());
        assert_eq!(ks.satisfiable(), entry.expected.ks, "{name}");
        assert_eq!(c3.satisfiable(), entry.expected.three_c, "{name}");
        if let Some(w) = &ks.witness {
            assert!(check_witness(&g, w).unwrap());
        }
        if let Some(w) = &c3.witness {
            assert!(check_witness(&g, w).unwrap());
        }
    }
}

#[test]
fn searches_are_deterministic() {
    for name in ["yu-oh-25", "peres-57", "two-triads"] {
        let g = graph(name);
        let a = ks_colorable(&g, SearchOptions::default());
        let b = ks_colorable(&g, SearchOptions::default());
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.nodes, b.nodes);
        let a = three_colorable(&g, SearchOptions::default());
        let b = three_colorable(&g, SearchOptions::default());
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.nodes, b.nodes);
    }
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let g = graph("peres-57");
    let v = ks_colorable(&g, SearchOptions { budget: Some(1) });
    assert_eq!(v.status, Status::Inconclusive);
    assert_eq!(v.satisfiable(), None);
    assert!(v.witness.is_none());
    let v = ks_colorable(&g, SearchOptions { budget: Some(1_000_000) });
    assert_eq!(v.status, Status::Unsat);
}

#[test]
fn oracle_caps_and_partial_witnesses() {
    let g = graph("yu-oh-25");
    assert!(matches!(brute_force_3c(&g, DEFAULT_3C_BRUTE_CAP), Err(Error::TooLarge { .. })));
    assert!(matches!(brute_force_ks(&g, DEFAULT_KS_BRUTE_CAP), Err(Error::TooLarge { .. })));
    let short = KsColoring(vec![true; 3]);
    assert!(matches!(check_witness(&g, &short), Err(Error::PartialAssignment { .. })));
    let bad = KsColoring(vec![true; g.len()]);
    assert!(!check_witness(&g, &bad).unwrap());
}

/// The labelled rays of the corpus table, with 100 = Y and 010 = X.
/// Vectors are in squared-magnitude notation.
const TABLE_LABELS: [([i64; 3], Label); 13] = [
    ([0, 0, 1], Label::Z),
    ([0, 1, 0], Label::X),
    ([1, 0, 0], Label::Y),
    ([1, 0, 1], Label::Z),
    ([-1, 0, 1], Label::Y),
    ([0, 1, 1], Label::Z),
    ([0, -1, 1], Label::X),
    ([1, -1, 4], Label::Z),
    ([-1, 1, 1], Label::Y),
    ([1, 1, 0], Label::X),
    ([1, 1, 4], Label::Z),
    ([-1, 1, 0], Label::Y),
    ([1, 1, -1], Label::X),
];

fn extensions(g: &OrthoGraph, labels: &mut Vec<Option<Label>>, free: &[usize]) -> u64 {
    let Some((&ray, rest)) = free.split_first() else {
        return 1;
    };
    let mut total = 0;
    for l in Label::ALL {
        if g.neighbours(ray).iter().all(|&n| labels[n] != Some(l)) {
            labels[ray] = Some(l);
            total += extensions(g, labels, rest);
            labels[ray] = None;
        }
    }
    total
}

#[test]
fn corpus_table_labelling_is_proper_but_does_not_extend() {
    let g = graph("yu-oh-25");
    let mut labels = vec![None; g.len()];
    for (v, l) in TABLE_LABELS {
        let i = g.rays().position(&sq(&v)).unwrap();
        labels[i] = Some(l);
    }
    for &(a, b) in g.edges() {
        if let (Some(x), Some(y)) = (labels[a], labels[b]) {
            assert_ne!(x, y, "{} ⊥ {}", g.key(a), g.key(b));
        }
    }
    // the pair the table singles out is not orthogonal
    assert!(!sq(&[1, 1, -1]).is_orthogonal(&sq(&[0, -1, 1])).unwrap());
    let free: Vec<usize> = (0..g.len()).filter(|&i| labels[i].is_none()).collect();
    assert_eq!(free.len(), 12);
    assert_eq!(extensions(&g, &mut labels, &free), 0);
}
