//! Context connections between triads, holonomy around context cycles, and
//! the translation between connections and 3-colourings.
//!
//! A connection assigns to every ordered pair of triads `(C, C')` a
//! bijection from the rays of `C` to the rays of `C'`, inverse to the one
//! for `(C', C)` and fixing any ray the two triads share. Noncontextuality
//! requires the composite of these bijections around every cycle of triads
//! to be the identity. Because bijections exist for every pair, that holds
//! for all cycles iff it holds for all triangles, i.e. iff
//! `l(a→c) = l(b→c) ∘ l(a→b)` for every triple.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{ContextPoset, OrthoGraph};
use crate::solve::{
    three_colorable, Enumeration, Label, Labeling, SearchOptions, Status, Verdict,
};

/// Largest number of triads the exhaustive connection enumeration accepts.
pub const BRUTE_FORCE_TRIAD_CAP: usize = 6;

/// A permutation of the three positions of a triad; position `i` maps to `self.0[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bijection([u8; 3]);

impl Bijection {
    pub const IDENTITY: Bijection = Bijection([0, 1, 2]);

    pub const ALL: [Bijection; 6] = [
        Bijection([0, 1, 2]),
        Bijection([0, 2, 1]),
        Bijection([1, 0, 2]),
        Bijection([1, 2, 0]),
        Bijection([2, 0, 1]),
        Bijection([2, 1, 0]),
    ];

    pub fn new(images: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::InvalidConnection(format!(
                    "{images:?} is not a permutation of three positions"
                )));
            }
        }
        Ok(Self(images))
    }

    pub fn images(&self) -> [u8; 3] {
        self.0
    }

    pub fn apply(&self, position: usize) -> usize {
        self.0[position] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = [0u8; 3];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Self(inv)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Bijection) -> Self {
        Self([0, 1, 2].map(|i| next.0[self.0[i] as usize]))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// Bijections between the ray sets of triads, indexed by ordered triad pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Connection {
    maps: BTreeMap<(usize, usize), Bijection>,
}

impl Connection {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `bij` for `from → to` and its inverse for `to → from`.
    pub fn insert(&mut self, from: usize, to: usize, bij: Bijection) {
        self.maps.insert((from, to), bij);
        self.maps.insert((to, from), bij.inverse());
    }

    /// Stores a single direction only; used to build deliberately malformed connections.
    pub fn insert_one_way(&mut self, from: usize, to: usize, bij: Bijection) {
        self.maps.insert((from, to), bij);
    }

    /// The bijection `from → to`; the identity when `from == to`.
    pub fn get(&self, from: usize, to: usize) -> Option<Bijection> {
        if from == to {
            return Some(Bijection::IDENTITY);
        }
        self.maps.get(&(from, to)).copied()
    }

    pub fn require(&self, from: usize, to: usize) -> Result<Bijection> {
        self.get(from, to).ok_or(Error::MissingPair { from, to })
    }

    /// Stored pairs with `from < to`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, Bijection)> + '_ {
        self.maps
            .iter()
            .filter(|((a, b), _)| a < b)
            .map(|(&(a, b), &bij)| (a, b, bij))
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Image of `ray` (a member of triad `from`) in triad `to`.
    pub fn ray_image(&self, poset: &ContextPoset, from: usize, to: usize, ray: usize) -> Result<usize> {
        let triad = poset.triads()[from];
        let pos = triad.iter().position(|&r| r == ray).ok_or_else(|| {
            Error::InvalidConnection(format!("ray {ray} is not in triad {from}"))
        })?;
        Ok(poset.triads()[to][self.require(from, to)?.apply(pos)])
    }

    /// Checks totality, the inverse-pair axiom and that shared rays are fixed.
    pub fn check_axioms(&self, poset: &ContextPoset) -> Result<()> {
        for a in 0..poset.len() {
            for b in a + 1..poset.len() {
                let fwd = self.require(a, b)?;
                let back = self.require(b, a)?;
                if fwd.inverse() != back {
                    return Err(Error::InvalidConnection(format!(
                        "maps between triads {a} and {b} are not mutually inverse"
                    )));
                }
                if let Some(ray) = poset.shared(a, b) {
                    if self.ray_image(poset, a, b, ray)? != ray {
                        return Err(Error::InvalidConnection(format!(
                            "map from triad {a} to triad {b} moves their shared ray {ray}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `{pairs: [{from: [i,j,k], to: [i',j',k'], map: [..]}, ...]}` over pairs with `from < to`.
    pub fn to_json(&self, poset: &ContextPoset) -> Value {
        let pairs: Vec<Value> = self
            .pairs()
            .map(|(a, b, bij)| {
                json!({
                    "from": poset.triads()[a],
                    "to": poset.triads()[b],
                    "map": bij.images(),
                })
            })
            .collect();
        json!({ "pairs": pairs })
    }
}

/// A cyclic sequence of triad indices with consecutive entries distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextCycle {
    contexts: Vec<usize>,
}

impl ContextCycle {
    pub fn new(contexts: Vec<usize>) -> Result<Self> {
        if contexts.len() < 2 {
            return Err(Error::InvalidCycle("a cycle needs at least two contexts".into()));
        }
        let n = contexts.len();
        if let Some(i) = (0..n).find(|&i| contexts[i] == contexts[(i + 1) % n]) {
            return Err(Error::InvalidCycle(format!(
                "positions {i} and {} hold the same context",
                (i + 1) % n
            )));
        }
        Ok(Self { contexts })
    }

    pub fn contexts(&self) -> &[usize] {
        &self.contexts
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyResult {
    pub cycle: ContextCycle,
    /// The composite around the cycle, as a permutation of the first triad's positions.
    pub composite: Bijection,
    pub trivial: bool,
}

impl HolonomyResult {
    /// The composite as a permutation of ray indices in cycle notation, e.g.
    /// `(3 4 5)`; the identity renders as `()`.
    pub fn cycle_notation(&self, poset: &ContextPoset) -> String {
        let rays = poset.triads()[self.cycle.contexts[0]];
        cycle_notation(&self.composite, &rays)
    }
}

fn cycle_notation(perm: &Bijection, rays: &[usize; 3]) -> String {
    if perm.is_identity() {
        return "()".into();
    }
    let mut seen = [false; 3];
    let mut out = String::new();
    for start in 0..3 {
        if seen[start] || perm.apply(start) == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(rays[i].to_string());
            i = perm.apply(i);
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    out
}

impl fmt::Display for Bijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&cycle_notation(self, &[0, 1, 2]))
    }
}

/// Composes the connection around `cycle`: `l(c₀→c₁)`, then `l(c₁→c₂)`, …,
/// then `l(cₙ₋₁→c₀)`.
pub fn verify_holonomy(conn: &Connection, cycle: &ContextCycle) -> Result<HolonomyResult> {
    let cs = cycle.contexts();
    let mut composite = Bijection::IDENTITY;
    for i in 0..cs.len() {
        let step = conn.require(cs[i], cs[(i + 1) % cs.len()])?;
        composite = composite.then(&step);
    }
    Ok(HolonomyResult {
        cycle: cycle.clone(),
        composite,
        trivial: composite.is_identity(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub consistent: bool,
    /// First ordered triple `(a, b, c)` with `l(a→c) ≠ l(b→c) ∘ l(a→b)`.
    pub violation: Option<(usize, usize, usize)>,
}

/// Checks `l(a→c) = l(b→c) ∘ l(a→b)` on every ordered triple of distinct triads.
pub fn cocycle_check(conn: &Connection, poset: &ContextPoset) -> Result<CocycleReport> {
    let n = poset.len();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            let ab = conn.require(a, b)?;
            for c in (0..n).filter(|&c| c != a && c != b) {
                if conn.require(a, c)? != ab.then(&conn.require(b, c)?) {
                    return Ok(CocycleReport {
                        consistent: false,
                        violation: Some((a, b, c)),
                    });
                }
            }
        }
    }
    Ok(CocycleReport {
        consistent: true,
        violation: None,
    })
}

/// Position of each label within each triad.
fn label_positions(lab: &Labeling, poset: &ContextPoset) -> Result<Vec<[usize; 3]>> {
    poset
        .triads()
        .iter()
        .enumerate()
        .map(|(t, triad)| {
            let mut pos = [usize::MAX; 3];
            for (i, &ray) in triad.iter().enumerate() {
                let label = lab.0.get(ray).ok_or_else(|| {
                    Error::InvalidLabeling(format!("ray {ray} has no label"))
                })?;
                pos[label.index()] = i;
            }
            if pos.contains(&usize::MAX) {
                return Err(Error::InvalidLabeling(format!(
                    "triad {t} does not carry all three labels"
                )));
            }
            Ok(pos)
        })
        .collect()
}

/// The connection sending the ray labelled `L` in one triad to the ray
/// labelled `L` in every other triad.
pub fn connection_from_labeling(lab: &Labeling, poset: &ContextPoset) -> Result<Connection> {
    let positions = label_positions(lab, poset)?;
    let mut conn = Connection::new();
    for a in 0..poset.len() {
        for b in a + 1..poset.len() {
            let mut images = [0u8; 3];
            for (i, &ray) in poset.triads()[a].iter().enumerate() {
                images[i] = positions[b][lab.0[ray].index()] as u8;
            }
            conn.insert(a, b, Bijection(images));
        }
    }
    Ok(conn)
}

/// A labelling recovered by transporting fixed labels along a connection.
#[derive(Clone, Debug)]
pub struct Transported {
    pub labeling: Labeling,
    /// Rays in no triad; they were labelled X.
    pub outside_triads: Vec<usize>,
}

/// Pins the rays of triad 0 to X, Y, Z in order and carries those labels to
/// every other triad along the connection.
pub fn labeling_from_connection(
    conn: &Connection,
    poset: &ContextPoset,
    g: &OrthoGraph,
) -> Result<Transported> {
    if poset.is_empty() {
        return Err(Error::NoContexts);
    }
    conn.check_axioms(poset)?;
    if let Some((a, b, c)) = cocycle_check(conn, poset)?.violation {
        return Err(Error::CocycleViolation(a, b, c));
    }
    let mut labels: Vec<Option<Label>> = vec![None; g.len()];
    for (t, triad) in poset.triads().iter().enumerate() {
        let bij = conn.require(0, t)?;
        for label in Label::ALL {
            let ray = triad[bij.apply(label.index())];
            match labels[ray] {
                None => labels[ray] = Some(label),
                Some(prev) if prev == label => {}
                Some(prev) => {
                    return Err(Error::InconsistentTransport {
                        ray,
                        first: prev.as_char(),
                        second: label.as_char(),
                    })
                }
            }
        }
    }
    let outside_triads: Vec<usize> = (0..g.len()).filter(|&r| labels[r].is_none()).collect();
    let labeling = Labeling(labels.into_iter().map(|l| l.unwrap_or(Label::X)).collect());
    if let Some(&(a, b)) = g
        .edges()
        .iter()
        .find(|&&(a, b)| labeling.0[a] == labeling.0[b])
    {
        return Err(Error::AdjacentClash(a, b));
    }
    Ok(Transported {
        labeling,
        outside_triads,
    })
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ConnectionSearchOptions {
    pub budget: Option<u64>,
    /// Also run the exhaustive enumeration when the poset has at most
    /// [`BRUTE_FORCE_TRIAD_CAP`] triads.
    pub brute_force: bool,
}

#[derive(Clone, Debug)]
pub struct ConnectionSearch {
    pub verdict: Verdict<Connection>,
    pub brute_force: Option<Enumeration<Connection>>,
}

impl ConnectionSearch {
    /// Whether the exhaustive path, if it ran, reached the same verdict.
    pub fn agrees(&self) -> Option<bool> {
        self.brute_force
            .as_ref()
            .map(|bf| bf.verdict.status == self.verdict.status)
    }
}

/// Decides whether a connection with trivial holonomy exists, by way of a
/// 3-colouring of the orthogonality graph.
pub fn connection_search(
    poset: &ContextPoset,
    g: &OrthoGraph,
    opts: ConnectionSearchOptions,
) -> Result<ConnectionSearch> {
    if let Some((a, b)) = g.edge_outside_triads() {
        return Err(Error::NotClosed(a, b));
    }
    let coloring = three_colorable(g, SearchOptions { budget: opts.budget });
    let Verdict {
        status,
        witness,
        nodes,
        elapsed,
    } = coloring;
    let witness = match witness {
        Some(lab) => Some(connection_from_labeling(&lab, poset)?),
        None => None,
    };
    let verdict = Verdict {
        status,
        witness,
        nodes,
        elapsed,
    };
    let brute_force = if opts.brute_force && poset.len() <= BRUTE_FORCE_TRIAD_CAP {
        Some(enumerate_connections(poset)?)
    } else {
        None
    };
    Ok(ConnectionSearch {
        verdict,
        brute_force,
    })
}

/// Enumerates every connection that fixes shared rays and satisfies the
/// cocycle condition, by backtracking over triad pairs.
pub fn enumerate_connections(poset: &ContextPoset) -> Result<Enumeration<Connection>> {
    let n = poset.len();
    if n > BRUTE_FORCE_TRIAD_CAP {
        return Err(Error::TooLarge {
            rays: n,
            max: BRUTE_FORCE_TRIAD_CAP,
        });
    }
    let start = Instant::now();
    let mut pairs = Vec::new();
    for b in 1..n {
        for a in 0..b {
            let candidates: Vec<Bijection> = Bijection::ALL
                .into_iter()
                .filter(|bij| match poset.shared(a, b) {
                    None => true,
                    Some(ray) => {
                        let pa = poset.triads()[a].iter().position(|&r| r == ray).unwrap();
                        let pb = poset.triads()[b].iter().position(|&r| r == ray).unwrap();
                        bij.apply(pa) == pb
                    }
                })
                .collect();
            pairs.push((a, b, candidates));
        }
    }

    struct Walk<'a> {
        n: usize,
        pairs: &'a [(usize, usize, Vec<Bijection>)],
        chosen: Vec<Option<Bijection>>,
        count: u64,
        nodes: u64,
        first: Option<Vec<Option<Bijection>>>,
    }

    impl Walk<'_> {
        fn at(&self, a: usize, b: usize) -> Bijection {
            self.chosen[a * self.n + b].expect("assigned pair")
        }

        fn go(&mut self, k: usize) {
            self.nodes += 1;
            if k == self.pairs.len() {
                self.count += 1;
                if self.first.is_none() {
                    self.first = Some(self.chosen.clone());
                }
                return;
            }
            let (a, b, ref candidates) = self.pairs[k];
            for &bij in candidates {
                self.chosen[a * self.n + b] = Some(bij);
                // every triangle (c, a, b) with c < a is now fully assigned
                let consistent = (0..a).all(|c| self.at(c, b) == self.at(c, a).then(&bij));
                if consistent {
                    self.go(k + 1);
                }
            }
            self.chosen[a * self.n + b] = None;
        }
    }

    let mut walk = Walk {
        n,
        pairs: &pairs,
        chosen: vec![None; n * n],
        count: 0,
        nodes: 0,
        first: None,
    };
    walk.go(0);

    let witness = walk.first.map(|chosen| {
        let mut conn = Connection::new();
        for &(a, b, _) in &pairs {
            conn.insert(a, b, chosen[a * n + b].expect("complete assignment"));
        }
        conn
    });
    Ok(Enumeration {
        verdict: Verdict {
            status: if witness.is_some() { Status::Sat } else { Status::Unsat },
            witness,
            nodes: walk.nodes,
            elapsed: start.elapsed(),
        },
        count: walk.count,
    })
}

/// A uniformly random length in `2..=max_len` and random triads with
/// consecutive entries distinct (cyclically). `None` with fewer than two triads.
pub fn random_cycle<R: Rng + ?Sized>(rng: &mut R, triads: usize, max_len: usize) -> Option<ContextCycle> {
    if triads < 2 || max_len < 2 {
        return None;
    }
    let mut len = rng.gen_range(2..=max_len);
    if triads == 2 && len % 2 == 1 {
        // two triads can only alternate
        len -= 1;
    }
    let mut contexts = vec![rng.gen_range(0..triads)];
    for i in 1..len {
        let prev = contexts[i - 1];
        let avoid_first = i == len - 1;
        loop {
            let c = rng.gen_range(0..triads);
            if c != prev && !(avoid_first && c == contexts[0]) {
                contexts.push(c);
                break;
            }
        }
    }
    ContextCycle::new(contexts).ok()
}

#[derive(Clone, Debug)]
pub struct HolonomySample {
    pub sampled: usize,
    pub nontrivial: Vec<HolonomyResult>,
}

/// Verifies holonomy on `samples` random cycles of length at most `max_len`.
pub fn sample_holonomy<R: Rng + ?Sized>(
    conn: &Connection,
    poset: &ContextPoset,
    rng: &mut R,
    samples: usize,
    max_len: usize,
) -> Result<HolonomySample> {
    let mut sampled = 0;
    let mut nontrivial = Vec::new();
    for _ in 0..samples {
        let Some(cycle) = random_cycle(rng, poset.len(), max_len) else {
            break;
        };
        let result = verify_holonomy(conn, &cycle)?;
        sampled += 1;
        if !result.trivial {
            nontrivial.push(result);
        }
    }
    Ok(HolonomySample {
        sampled,
        nontrivial,
    })
}
