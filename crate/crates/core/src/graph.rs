//! Orthogonality graphs, their maximal contexts and the shared-ray table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::ray::RaySet;

/// Rays, their orthogonality edges, and every mutually orthogonal `d`-subset.
///
/// In dimension 3 the maximal contexts are triads. Edges and contexts are
/// stored sorted, with indices ascending inside each tuple.
#[derive(Clone, Debug)]
pub struct OrthoGraph {
    rays: RaySet,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    matrix: Vec<Vec<bool>>,
    triads: Vec<Vec<usize>>,
    triads_of_ray: Vec<Vec<usize>>,
}

impl OrthoGraph {
    pub fn build(rays: RaySet) -> Result<Self> {
        let n = rays.len();
        let mut matrix = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rays.get(i).is_orthogonal(rays.get(j))? {
                    matrix[i][j] = true;
                    matrix[j][i] = true;
                    edges.push((i, j));
                }
            }
        }
        let adjacency: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| matrix[i][j]).collect())
            .collect();

        let dim = rays.dim();
        let mut triads = Vec::new();
        if dim == 3 {
            for &(i, j) in &edges {
                for &k in adjacency[j].iter().filter(|&&k| k > j) {
                    if matrix[i][k] {
                        triads.push(vec![i, j, k]);
                    }
                }
            }
        } else {
            let mut stack = Vec::with_capacity(dim);
            for v in 0..n {
                stack.push(v);
                extend_cliques(&adjacency, &matrix, dim, &mut stack, &mut triads);
                stack.pop();
            }
        }
        triads.sort();

        let mut triads_of_ray = vec![Vec::new(); n];
        for (t, triad) in triads.iter().enumerate() {
            for &r in triad {
                triads_of_ray[r].push(t);
            }
        }
        Ok(Self {
            rays,
            edges,
            adjacency,
            matrix,
            triads,
            triads_of_ray,
        })
    }

    pub fn rays(&self) -> &RaySet {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, ray: usize) -> &[usize] {
        &self.adjacency[ray]
    }

    pub fn degree(&self, ray: usize) -> usize {
        self.adjacency[ray].len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.matrix[a][b]
    }

    /// Maximal contexts: mutually orthogonal subsets of size `dim`.
    pub fn triads(&self) -> &[Vec<usize>] {
        &self.triads
    }

    /// Indices of the triads containing `ray`.
    pub fn triads_of(&self, ray: usize) -> &[usize] {
        &self.triads_of_ray[ray]
    }

    pub fn key(&self, ray: usize) -> &str {
        self.rays.get(ray).key()
    }

    /// First edge that lies in no triad, if any. In dimension 3 an edge lies
    /// in a triad iff its completion is in the set.
    pub fn edge_outside_triads(&self) -> Option<(usize, usize)> {
        self.edges.iter().copied().find(|&(a, b)| {
            !self.triads_of_ray[a]
                .iter()
                .any(|t| self.triads[*t].contains(&b))
        })
    }

    pub fn is_triad_closed(&self) -> bool {
        self.edge_outside_triads().is_none()
    }

    pub fn stats(&self) -> GraphStats {
        let mut histogram = BTreeMap::new();
        for list in &self.triads_of_ray {
            *histogram.entry(list.len()).or_insert(0) += 1;
        }
        GraphStats {
            rays: self.len(),
            edges: self.edges.len(),
            triads: self.triads.len(),
            triads_per_ray: histogram,
            isolated: (0..self.len()).filter(|&i| self.degree(i) == 0).collect(),
        }
    }

    /// `{rays: [key...], edges: [[i,j]...], triads: [[i,j,k]...]}`
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rays": self.rays.iter().map(|r| r.key()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
            "triads": self.triads,
        })
    }

    /// Graphviz rendering. With `triads` set, each triad is also drawn as a
    /// bold cycle so that maximal contexts stand out.
    pub fn to_dot(&self, triads: bool) -> String {
        let mut out = String::from("graph orthogonality {\n  node [shape=box];\n");
        for (i, ray) in self.rays.iter().enumerate() {
            let _ = writeln!(out, "  r{i} [label=\"{}\"];", ray.key());
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  r{a} -- r{b};");
        }
        if triads {
            for t in &self.triads {
                let path: Vec<String> = t.iter().chain(t.first()).map(|i| format!("r{i}")).collect();
                let _ = writeln!(out, "  {} [style=bold, color=blue];", path.join(" -- "));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn extend_cliques(
    adjacency: &[Vec<usize>],
    matrix: &[Vec<bool>],
    size: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if stack.len() == size {
        out.push(stack.clone());
        return;
    }
    let last = *stack.last().expect("non-empty clique");
    for &v in adjacency[last].iter().filter(|&&v| v > last) {
        if stack.iter().all(|&u| matrix[u][v]) {
            stack.push(v);
            extend_cliques(adjacency, matrix, size, stack, out);
            stack.pop();
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub rays: usize,
    pub edges: usize,
    pub triads: usize,
    /// Number of rays lying in exactly `k` triads, keyed by `k`.
    pub triads_per_ray: BTreeMap<usize, usize>,
    pub isolated: Vec<usize>,
}

/// Triads of a three-dimensional graph and the ray shared by each
/// overlapping pair.
#[derive(Clone, Debug)]
pub struct ContextPoset {
    triads: Vec<[usize; 3]>,
    shared: BTreeMap<(usize, usize), usize>,
}

impl ContextPoset {
    pub fn build(graph: &OrthoGraph) -> Result<Self> {
        if graph.rays().dim() != 3 {
            return Err(Error::NotSupported(format!(
                "context poset in dimension {}",
                graph.rays().dim()
            )));
        }
        let triads: Vec<[usize; 3]> = graph
            .triads()
            .iter()
            .map(|t| [t[0], t[1], t[2]])
            .collect();
        Self::from_triads(triads)
    }

    /// Builds the shared-ray table for explicitly given triads.
    pub fn from_triads(triads: Vec<[usize; 3]>) -> Result<Self> {
        let mut shared = BTreeMap::new();
        for a in 0..triads.len() {
            for b in a + 1..triads.len() {
                let common: Vec<usize> = triads[a]
                    .iter()
                    .copied()
                    .filter(|r| triads[b].contains(r))
                    .collect();
                match common.as_slice() {
                    [] => {}
                    [ray] => {
                        shared.insert((a, b), *ray);
                    }
                    _ => return Err(Error::SharedPairViolation { first: a, second: b }),
                }
            }
        }
        Ok(Self { triads, shared })
    }

    pub fn triads(&self) -> &[[usize; 3]] {
        &self.triads
    }

    pub fn len(&self) -> usize {
        self.triads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triads.is_empty()
    }

    /// The ray shared by triads `a` and `b`, if any. Symmetric in its arguments.
    pub fn shared(&self, a: usize, b: usize) -> Option<usize> {
        let pair = if a <= b { (a, b) } else { (b, a) };
        self.shared.get(&pair).copied()
    }

    /// All overlapping triad pairs `(a, b)` with `a < b`, and their shared ray.
    pub fn shared_table(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.shared
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ray::Ray;

    fn set(rays: &[[i64; 3]]) -> RaySet {
        RaySet::from_rays(3, rays.iter().map(|r| Ray::from_integers(r).unwrap()))
            .unwrap()
            .0
    }

    #[test]
    fn single_triad() {
        let g = OrthoGraph::build(set(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])).unwrap();
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.triads(), &[vec![0, 1, 2]]);
        let poset = ContextPoset::build(&g).unwrap();
        assert!(poset.shared_table().is_empty());
    }

    #[test]
    fn two_triads_share_z() {
        let g = OrthoGraph::build(set(&[
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 1, 0],
            [1, -1, 0],
        ]))
        .unwrap();
        assert_eq!(g.triads().len(), 2);
        let poset = ContextPoset::build(&g).unwrap();
        assert_eq!(poset.shared(0, 1), Some(2));
        assert_eq!(poset.shared(1, 0), Some(2));
        assert!(g.is_triad_closed());
    }

    #[test]
    fn shared_pair_violation() {
        let err = ContextPoset::from_triads(vec![[0, 1, 2], [0, 1, 3]]).unwrap_err();
        assert_eq!(err, Error::SharedPairViolation { first: 0, second: 1 });
    }

    #[test]
    fn empty_stats() {
        let g = OrthoGraph::build(RaySet::new(3)).unwrap();
        assert_eq!(g.stats(), GraphStats::default());
    }

    #[test]
    fn isolated_rays_are_kept() {
        let g = OrthoGraph::build(set(&[[1, 0, 0], [0, 1, 0], [1, 1, 1]])).unwrap();
        let stats = g.stats();
        assert_eq!(stats.isolated, vec![2]);
        assert_eq!(stats.edges, 1);
        assert_eq!(g.edge_outside_triads(), Some((0, 1)));
    }

    #[test]
    fn four_dimensional_contexts() {
        let rays = (0..4).map(|i| {
            let mut v = [0i64; 4];
            v[i] = 1;
            Ray::from_integers(&v).unwrap()
        });
        let extra = Ray::from_integers(&[1, 1, 0, 0]).unwrap();
        let extra2 = Ray::from_integers(&[1, -1, 0, 0]).unwrap();
        let (s, _) = RaySet::from_rays(4, rays.chain([extra, extra2])).unwrap();
        let g = OrthoGraph::build(s).unwrap();
        assert_eq!(g.triads(), &[vec![0, 1, 2, 3], vec![2, 3, 4, 5]]);
        assert!(ContextPoset::build(&g).is_err());
    }

    #[test]
    fn dot_and_json_exports() {
        let g = OrthoGraph::build(set(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]])).unwrap();
        let dot = g.to_dot(true);
        assert!(dot.contains("r0 -- r1;"));
        assert!(dot.contains("r0 -- r1 -- r2 -- r0 [style=bold, color=blue];"));
        let v = g.to_json();
        assert_eq!(v["triads"], json!([[0, 1, 2]]));
        assert_eq!(v["rays"][2], "0, 0, 1");
    }
}
