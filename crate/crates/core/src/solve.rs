//! KS-colouring and proper 3-colouring of orthogonality graphs.
//!
//! Both searches are complete backtracking procedures with propagation over
//! a fixed variable order (descending degree, ties broken by canonical key),
//! so identical inputs give identical verdicts and witnesses. The
//! brute-force enumerators are independent oracles for small graphs.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::OrthoGraph;

pub const DEFAULT_KS_BRUTE_CAP: usize = 20;
pub const DEFAULT_3C_BRUTE_CAP: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    X,
    Y,
    Z,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::X, Label::Y, Label::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Label {
        Self::ALL[i]
    }

    pub fn as_char(self) -> char {
        match self {
            Label::X => 'X',
            Label::Y => 'Y',
            Label::Z => 'Z',
        }
    }

    fn bit(self) -> u8 {
        1 << self.index()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A {0,1} valuation of the rays of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsColoring(pub Vec<bool>);

/// An {X,Y,Z} label per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling(pub Vec<Label>);

impl Labeling {
    /// Z becomes 1, X and Y become 0.
    pub fn to_ks(&self) -> KsColoring {
        KsColoring(self.0.iter().map(|&l| l == Label::Z).collect())
    }

    /// Whether `other` equals `self` after some permutation of the three labels.
    pub fn equivalent_up_to_relabel(&self, other: &Labeling) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        let mut image: [Option<Label>; 3] = [None; 3];
        let mut preimage: [Option<Label>; 3] = [None; 3];
        for (&a, &b) in self.0.iter().zip(&other.0) {
            match (image[a.index()], preimage[b.index()]) {
                (None, None) => {
                    image[a.index()] = Some(b);
                    preimage[b.index()] = Some(a);
                }
                (Some(x), Some(y)) if x == b && y == a => {}
                _ => return false,
            }
        }
        true
    }
}

/// Assignments that can be checked against a graph and rendered per ray.
pub trait Witness {
    const PROBLEM: &'static str;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the assignment satisfies the constraints of its problem on a graph
    /// with exactly `self.len()` rays.
    fn satisfies(&self, g: &OrthoGraph) -> bool;

    fn value_json(&self, ray: usize) -> Value;
}

impl Witness for KsColoring {
    const PROBLEM: &'static str = "ks";

    fn len(&self) -> usize {
        self.0.len()
    }

    fn satisfies(&self, g: &OrthoGraph) -> bool {
        let v = &self.0;
        g.edges().iter().all(|&(a, b)| !(v[a] && v[b]))
            && g
                .triads()
                .iter()
                .all(|t| t.iter().filter(|&&r| v[r]).count() == 1)
    }

    fn value_json(&self, ray: usize) -> Value {
        json!(u8::from(self.0[ray]))
    }
}

impl Witness for Labeling {
    const PROBLEM: &'static str = "3c";

    fn len(&self) -> usize {
        self.0.len()
    }

    fn satisfies(&self, g: &OrthoGraph) -> bool {
        let v = &self.0;
        g.edges().iter().all(|&(a, b)| v[a] != v[b])
    }

    fn value_json(&self, ray: usize) -> Value {
        json!(self.0[ray].to_string())
    }
}

/// Checks a total assignment against the graph it was computed for.
pub fn check_witness<W: Witness>(g: &OrthoGraph, w: &W) -> Result<bool> {
    if w.len() != g.len() {
        return Err(Error::PartialAssignment {
            expected: g.len(),
            found: w.len(),
        });
    }
    Ok(w.satisfies(g))
}

/// `{canonical_key: value}` for every ray.
pub fn witness_json<W: Witness>(g: &OrthoGraph, w: &W) -> Value {
    let map: Map<String, Value> = (0..g.len())
        .map(|i| (g.key(i).to_owned(), w.value_json(i)))
        .collect();
    Value::Object(map)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
    /// The node budget ran out before the search finished.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Verdict<W> {
    pub status: Status,
    pub witness: Option<W>,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl<W> Verdict<W> {
    /// `Some(true|false)` for a decided search, `None` when inconclusive.
    pub fn satisfiable(&self) -> Option<bool> {
        match self.status {
            Status::Sat => Some(true),
            Status::Unsat => Some(false),
            Status::Inconclusive => None,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict {
            status: self.status,
            witness: self.witness.map(f),
            nodes: self.nodes,
            elapsed: self.elapsed,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Maximum number of search nodes; `None` searches to completion.
    pub budget: Option<u64>,
}

/// Brute-force result: a verdict plus the total number of valid assignments.
#[derive(Clone, Debug)]
pub struct Enumeration<W> {
    pub verdict: Verdict<W>,
    pub count: u64,
}

/// Descending degree, ties by canonical key.
fn variable_order(g: &OrthoGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| {
        g.degree(b)
            .cmp(&g.degree(a))
            .then_with(|| g.key(a).cmp(g.key(b)))
            .then(a.cmp(&b))
    });
    order
}

enum Search<T> {
    Found(T),
    Exhausted,
    OutOfBudget,
}

struct KsSearch<'a> {
    g: &'a OrthoGraph,
    order: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl KsSearch<'_> {
    /// Sets `ray` to `value` and propagates: a 1 zeroes all neighbours, and a
    /// triad with two zeros forces its last ray to 1. Returns false on conflict.
    fn assign(&self, state: &mut [Option<bool>], ray: usize, value: bool) -> bool {
        let mut queue = vec![(ray, value)];
        while let Some((r, v)) = queue.pop() {
            match state[r] {
                Some(x) if x == v => continue,
                Some(_) => return false,
                None => state[r] = Some(v),
            }
            if v {
                queue.extend(self.g.neighbours(r).iter().map(|&n| (n, false)));
            }
            for &t in self.g.triads_of(r) {
                let triad = &self.g.triads()[t];
                let ones = triad.iter().filter(|&&m| state[m] == Some(true)).count();
                let open: Vec<usize> = triad.iter().copied().filter(|&m| state[m].is_none()).collect();
                match (ones, open.as_slice()) {
                    (0, []) => return false,
                    (0, [last]) => queue.push((*last, true)),
                    (n, _) if n > 1 => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn run(&mut self, state: Vec<Option<bool>>) -> Search<Vec<bool>> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Search::OutOfBudget;
        }
        let Some(var) = self.order.iter().copied().find(|&r| state[r].is_none()) else {
            return Search::Found(state.into_iter().map(|v| v.unwrap_or(false)).collect());
        };
        for value in [true, false] {
            let mut next = state.clone();
            if self.assign(&mut next, var, value) {
                match self.run(next) {
                    Search::Exhausted => {}
                    other => return other,
                }
            }
        }
        Search::Exhausted
    }
}

fn finish<W: Witness>(
    g: &OrthoGraph,
    outcome: Search<W>,
    nodes: u64,
    start: Instant,
) -> Verdict<W> {
    let (status, witness) = match outcome {
        Search::Found(w) => {
            assert!(
                w.satisfies(g),
                "solver produced a witness violating its constraints"
            );
            (Status::Sat, Some(w))
        }
        Search::Exhausted => (Status::Unsat, None),
        Search::OutOfBudget => (Status::Inconclusive, None),
    };
    Verdict {
        status,
        witness,
        nodes,
        elapsed: start.elapsed(),
    }
}

/// Decides whether some {0,1} assignment gives every triad exactly one 1 and
/// no orthogonal pair two 1s.
pub fn ks_colorable(g: &OrthoGraph, opts: SearchOptions) -> Verdict<KsColoring> {
    let start = Instant::now();
    let mut search = KsSearch {
        g,
        order: variable_order(g),
        nodes: 0,
        budget: opts.budget,
    };
    let outcome = match search.run(vec![None; g.len()]) {
        Search::Found(v) => Search::Found(KsColoring(v)),
        Search::Exhausted => Search::Exhausted,
        Search::OutOfBudget => Search::OutOfBudget,
    };
    finish(g, outcome, search.nodes, start)
}

struct ColorSearch<'a> {
    g: &'a OrthoGraph,
    order: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl ColorSearch<'_> {
    /// Restricts `ray` to `label`, then removes every fixed label from the
    /// domains of its neighbours; a ray left with one label is fixed in turn.
    fn assign(&self, domains: &mut [u8], ray: usize, label: Label) -> bool {
        let narrowed = domains[ray] & label.bit();
        if narrowed == 0 {
            return false;
        }
        if narrowed == domains[ray] {
            return true;
        }
        domains[ray] = narrowed;
        let mut queue = vec![ray];
        while let Some(r) = queue.pop() {
            let fixed = domains[r];
            for &n in self.g.neighbours(r) {
                if domains[n] & fixed != 0 {
                    domains[n] &= !fixed;
                    match domains[n].count_ones() {
                        0 => return false,
                        1 => queue.push(n),
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, domains: Vec<u8>) -> Search<Vec<u8>> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Search::OutOfBudget;
        }
        let Some(var) = self
            .order
            .iter()
            .copied()
            .find(|&r| domains[r].count_ones() > 1)
        else {
            return Search::Found(domains);
        };
        for label in Label::ALL {
            if domains[var] & label.bit() == 0 {
                continue;
            }
            let mut next = domains.clone();
            if self.assign(&mut next, var, label) {
                match self.run(next) {
                    Search::Exhausted => {}
                    other => return other,
                }
            }
        }
        Search::Exhausted
    }
}

/// Decides whether the orthogonality graph has a proper colouring with
/// labels X, Y, Z. The first triad is pinned to (X, Y, Z), which loses no
/// solutions up to relabelling.
pub fn three_colorable(g: &OrthoGraph, opts: SearchOptions) -> Verdict<Labeling> {
    let start = Instant::now();
    let mut search = ColorSearch {
        g,
        order: variable_order(g),
        nodes: 0,
        budget: opts.budget,
    };
    let mut domains = vec![0b111u8; g.len()];
    let pinned = match g.triads().first() {
        Some(t) if t.len() == 3 => t
            .iter()
            .zip(Label::ALL)
            .all(|(&r, l)| search.assign(&mut domains, r, l)),
        _ => true,
    };
    let outcome = if pinned {
        search.run(domains)
    } else {
        Search::Exhausted
    };
    let outcome = match outcome {
        Search::Found(d) => Search::Found(Labeling(
            d.iter()
                .map(|&m| Label::from_index(m.trailing_zeros() as usize))
                .collect(),
        )),
        Search::Exhausted => Search::Exhausted,
        Search::OutOfBudget => Search::OutOfBudget,
    };
    finish(g, outcome, search.nodes, start)
}

/// Enumerates all 2ⁿ assignments.
pub fn brute_force_ks(g: &OrthoGraph, max_rays: usize) -> Result<Enumeration<KsColoring>> {
    let n = g.len();
    if n > max_rays || n >= 64 {
        return Err(Error::TooLarge { rays: n, max: max_rays });
    }
    let start = Instant::now();
    let edge_masks: Vec<u64> = g.edges().iter().map(|&(a, b)| (1 << a) | (1 << b)).collect();
    let triad_masks: Vec<u64> = g
        .triads()
        .iter()
        .map(|t| t.iter().fold(0u64, |m, &r| m | (1 << r)))
        .collect();
    let mut count = 0u64;
    let mut first = None;
    for bits in 0u64..(1u64 << n) {
        let ok = edge_masks.iter().all(|&m| bits & m != m)
            && triad_masks.iter().all(|&m| (bits & m).count_ones() == 1);
        if ok {
            count += 1;
            first.get_or_insert(bits);
        }
    }
    let witness = first.map(|bits| KsColoring((0..n).map(|i| bits >> i & 1 == 1).collect()));
    Ok(Enumeration {
        verdict: Verdict {
            status: if witness.is_some() { Status::Sat } else { Status::Unsat },
            witness,
            nodes: 1u64 << n,
            elapsed: start.elapsed(),
        },
        count,
    })
}

/// Enumerates all 3ⁿ labellings.
pub fn brute_force_3c(g: &OrthoGraph, max_rays: usize) -> Result<Enumeration<Labeling>> {
    let n = g.len();
    if n > max_rays || n > 40 {
        return Err(Error::TooLarge { rays: n, max: max_rays });
    }
    let start = Instant::now();
    let mut digits = vec![0u8; n];
    let mut count = 0u64;
    let mut first = None;
    let mut visited = 0u64;
    loop {
        visited += 1;
        if g.edges().iter().all(|&(a, b)| digits[a] != digits[b]) {
            count += 1;
            if first.is_none() {
                first = Some(digits.clone());
            }
        }
        let mut i = 0;
        while i < n && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        digits[i] += 1;
    }
    let witness =
        first.map(|d| Labeling(d.iter().map(|&x| Label::from_index(x as usize)).collect()));
    Ok(Enumeration {
        verdict: Verdict {
            status: if witness.is_some() { Status::Sat } else { Status::Unsat },
            witness,
            nodes: visited,
            elapsed: start.elapsed(),
        },
        count,
    })
}
