//! Polarized metrized graphs: vertices carrying a nonnegative polarization
//! `q`, edges carrying positive rational lengths. Self-loops (u = v) and
//! parallel edges are allowed; lengths stay exact rationals regardless of
//! the arithmetic backend used later.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub q: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: BigRational,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// Endpoint pair in canonical (sorted) order, for parallel-edge grouping.
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

/// Genus bookkeeping: first Betti number, polarized genus, and the degree
/// of the canonical divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenusData {
    pub g: i64,
    pub gbar: i64,
    pub deg_k: i64,
}

/// Everything `validate` looked at, kept structured so the CLI can report
/// each class of violation separately.
#[derive(Clone, Debug, Default)]
pub struct ValidationOutcome {
    pub connected: bool,
    pub empty: bool,
    pub nonpositive_edges: Vec<usize>,
    pub non_effective: Vec<String>,
    pub disconnected_witness: Option<(String, String)>,
}

impl ValidationOutcome {
    pub fn is_valid(&self) -> bool {
        self.connected
            && !self.empty
            && self.nonpositive_edges.is_empty()
            && self.non_effective.is_empty()
    }

    /// First violation as an error, in severity order.
    pub fn first_error(&self, graph: &PMGraph) -> Option<Error> {
        if self.empty {
            return Some(Error::EmptyGraph);
        }
        if let Some(&e) = self.nonpositive_edges.first() {
            return Some(Error::NonpositiveEdgeLength(graph.edge_label(e)));
        }
        if let Some((a, b)) = &self.disconnected_witness {
            return Some(Error::DisconnectedGraph(a.clone(), b.clone()));
        }
        if !self.non_effective.is_empty() {
            return Some(Error::NonEffectiveCanonicalDivisor(
                self.non_effective.clone(),
            ));
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    index: BTreeMap<String, usize>,
}

impl PMGraph {
    /// Build from id-labelled data. Rejects duplicate ids and unknown
    /// endpoints immediately; everything else is reported by [`validate`].
    ///
    /// [`validate`]: PMGraph::validate
    pub fn new(
        vertices: Vec<(String, u32)>,
        edges: Vec<(String, String, BigRational)>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        let mut vs = Vec::with_capacity(vertices.len());
        for (pos, (id, q)) in vertices.into_iter().enumerate() {
            if index.insert(id.clone(), pos).is_some() {
                return Err(Error::DuplicateVertexId(id));
            }
            vs.push(Vertex { id, q });
        }
        let mut es = Vec::with_capacity(edges.len());
        for (u, v, length) in edges {
            let ui = *index
                .get(&u)
                .ok_or_else(|| Error::UnknownVertex(u.clone()))?;
            let vi = *index
                .get(&v)
                .ok_or_else(|| Error::UnknownVertex(v.clone()))?;
            es.push(Edge {
                u: ui,
                v: vi,
                length,
            });
        }
        Ok(PMGraph {
            vertices: vs,
            edges: es,
            index,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn vertex_id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub(crate) fn edge_label(&self, e: usize) -> String {
        let edge = &self.edges[e];
        format!(
            "{}#{}: {}-{}",
            e,
            self.edges.len(),
            self.vertices[edge.u].id,
            self.vertices[edge.v].id
        )
    }

    /// Number of directions emanating from the vertex; a self-loop counts
    /// twice.
    pub fn valence(&self, i: usize) -> usize {
        self.edges
            .iter()
            .map(|e| {
                if e.is_loop() && e.u == i {
                    2
                } else if e.u == i || e.v == i {
                    1
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            if e.is_loop() {
                val[e.u] += 2;
            } else {
                val[e.u] += 1;
                val[e.v] += 1;
            }
        }
        val
    }

    pub fn sum_q(&self) -> i64 {
        self.vertices.iter().map(|v| v.q as i64).sum()
    }

    /// Canonical-divisor weight val(p) - 2 + 2q(p) at one vertex.
    pub fn canonical_weight_at(&self, i: usize) -> i64 {
        self.valence(i) as i64 - 2 + 2 * self.vertices[i].q as i64
    }

    pub fn canonical_weight(&self, id: &str) -> Result<i64> {
        Ok(self.canonical_weight_at(self.vertex_index(id)?))
    }

    pub fn canonical_weights(&self) -> Vec<i64> {
        let val = self.valences();
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| val[i] as i64 - 2 + 2 * v.q as i64)
            .collect()
    }

    pub fn total_length(&self) -> BigRational {
        let mut acc: BigRational = Zero::zero();
        for e in &self.edges {
            acc += &e.length;
        }
        acc
    }

    pub fn is_connected(&self) -> bool {
        self.disconnected_witness().is_none()
    }

    fn disconnected_witness(&self) -> Option<(String, String)> {
        let v = self.vertices.len();
        if v == 0 {
            return None;
        }
        let mut adj = vec![Vec::new(); v];
        for e in &self.edges {
            if !e.is_loop() {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        let mut seen = vec![false; v];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.iter()
            .position(|s| !s)
            .map(|i| (self.vertices[i].id.clone(), self.vertices[0].id.clone()))
    }

    /// g = e - v + 1, ḡ = g + Σq, deg K = 2ḡ - 2. Assumes connectivity.
    pub fn genus(&self) -> GenusData {
        let g = self.edges.len() as i64 - self.vertices.len() as i64 + 1;
        let gbar = g + self.sum_q();
        GenusData {
            g,
            gbar,
            deg_k: 2 * gbar - 2,
        }
    }

    /// Check the pm-graph invariants. Effectiveness of the canonical
    /// divisor is only demanded when `require_effective` is set; the tau
    /// constant and resistances are defined without it.
    pub fn validate(&self, require_effective: bool) -> ValidationOutcome {
        let mut out = ValidationOutcome {
            empty: self.edges.is_empty(),
            ..Default::default()
        };
        for (i, e) in self.edges.iter().enumerate() {
            if !e.length.is_positive() {
                out.nonpositive_edges.push(i);
            }
        }
        out.disconnected_witness = self.disconnected_witness();
        out.connected = out.disconnected_witness.is_none();
        if require_effective {
            let weights = self.canonical_weights();
            for (i, w) in weights.iter().enumerate() {
                if *w < 0 {
                    out.non_effective.push(self.vertices[i].id.clone());
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self, require_effective: bool) -> Result<()> {
        let outcome = self.validate(require_effective);
        match outcome.first_error(self) {
            Some(err) => Err(err),
            None => Ok(()),
        }
    }

    /// Adequate means: no self-loops and no parallel edges.
    pub fn is_adequate(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.edges {
            if e.is_loop() || !seen.insert(e.key()) {
                return false;
            }
        }
        true
    }

    /// Rebuild with the same ids but new structure; used by the reduction
    /// passes.
    pub(crate) fn rebuild(
        vertices: Vec<Vertex>,
        edges: Vec<(usize, usize, BigRational)>,
    ) -> PMGraph {
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        PMGraph {
            edges: edges
                .into_iter()
                .map(|(u, v, length)| Edge { u, v, length })
                .collect(),
            vertices,
            index,
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::rat;

    pub(crate) fn k4_uniform() -> PMGraph {
        let vertices = (0..4).map(|i| (format!("v{i}"), 0)).collect();
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((format!("v{i}"), format!("v{j}"), rat("1/6")));
            }
        }
        PMGraph::new(vertices, edges).unwrap()
    }

    #[test]
    fn k4_is_valid_with_unit_weights() {
        let g = k4_uniform();
        let outcome = g.validate(true);
        assert!(outcome.is_valid());
        for i in 0..4 {
            assert_eq!(g.canonical_weight_at(i), 1);
        }
        assert_eq!(
            g.genus(),
            GenusData {
                g: 3,
                gbar: 3,
                deg_k: 4
            }
        );
        assert_eq!(g.total_length(), rat("1"));
    }

    #[test]
    fn self_loop_counts_twice_in_valence() {
        let g = PMGraph::new(
            vec![("p".into(), 0)],
            vec![("p".into(), "p".into(), rat("1"))],
        )
        .unwrap();
        assert_eq!(g.valence(0), 2);
        assert_eq!(g.canonical_weight("p").unwrap(), 0);
        assert!(g.validate(true).is_valid());
    }

    #[test]
    fn leaves_make_k_non_effective() {
        let g = PMGraph::new(
            vec![("p".into(), 0), ("q".into(), 0)],
            vec![("p".into(), "q".into(), rat("2"))],
        )
        .unwrap();
        let outcome = g.validate(true);
        assert!(!outcome.is_valid());
        assert_eq!(
            outcome.non_effective,
            vec!["p".to_string(), "q".to_string()]
        );
        // without the effectiveness requirement the graph is fine
        assert!(g.validate(false).is_valid());
    }

    #[test]
    fn sum_of_weights_is_deg_k() {
        let g = k4_uniform();
        let total: i64 = g.canonical_weights().iter().sum();
        assert_eq!(total, g.genus().deg_k);
    }

    #[test]
    fn detects_disconnection_and_bad_lengths() {
        let g = PMGraph::new(
            vec![("a".into(), 1), ("b".into(), 1)],
            vec![
                ("a".into(), "a".into(), rat("1")),
                ("b".into(), "b".into(), rat("0")),
            ],
        )
        .unwrap();
        let outcome = g.validate(false);
        assert!(!outcome.connected);
        assert_eq!(outcome.nonpositive_edges, vec![1]);
        assert!(matches!(
            outcome.first_error(&g),
            Some(Error::NonpositiveEdgeLength(_))
        ));
    }

    #[test]
    fn duplicate_and_unknown_ids_fail_construction() {
        let dup = PMGraph::new(vec![("a".into(), 0), ("a".into(), 0)], vec![]);
        assert_eq!(dup.unwrap_err(), Error::DuplicateVertexId("a".into()));
        let unk = PMGraph::new(
            vec![("a".into(), 0)],
            vec![("a".into(), "z".into(), rat("1"))],
        );
        assert_eq!(unk.unwrap_err(), Error::UnknownVertex("z".into()));
    }

    #[test]
    fn empty_graph_is_invalid() {
        let g = PMGraph::new(vec![("a".into(), 1)], vec![]).unwrap();
        let outcome = g.validate(true);
        assert!(outcome.empty);
        assert_eq!(outcome.first_error(&g), Some(Error::EmptyGraph));
    }

    #[test]
    fn genus_ignores_valence_two_insertions() {
        let g = k4_uniform();
        // split edge v0-v1 at an arbitrary interior point
        let mut vertices: Vec<(String, u32)> =
            g.vertices().iter().map(|v| (v.id.clone(), v.q)).collect();
        vertices.push(("m".into(), 0));
        let mut edges: Vec<(String, String, _)> = vec![
            ("v0".into(), "m".into(), rat("1/24")),
            ("m".into(), "v1".into(), rat("1/8")),
        ];
        for e in &g.edges()[1..] {
            edges.push((
                g.vertex_id(e.u).to_string(),
                g.vertex_id(e.v).to_string(),
                e.length.clone(),
            ));
        }
        let split = PMGraph::new(vertices, edges).unwrap();
        assert_eq!(split.genus().g, g.genus().g);
        assert_eq!(split.total_length(), g.total_length());
    }
}
