//! Reduction of an arbitrary pm-graph to an adequate presentation (no
//! self-loops, no parallel edges) plus a correction ledger, and the
//! closed-form corrections that fold loop removals back into the final
//! invariants.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{GenusData, PMGraph, Vertex};
use crate::invariants::InvariantSet;
use crate::scalar::Scalar;

/// How self-loops are turned into matrix-friendly form: analytically (strip
/// the loop, bump q at the anchor, correct the invariants afterwards) or by
/// subdividing each loop with two q = 0 vertices. Both give identical
/// invariants; the analytic route keeps matrices smaller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LoopStrategy {
    #[default]
    Analytic,
    Subdivide,
}

/// Bookkeeping produced by loop stripping and consumed when assembling the
/// final invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionLedger {
    /// Sum of removed self-loop lengths.
    pub loop_length_total: BigRational,
    /// One +1 per removed loop, keyed by anchor vertex id.
    pub q_increments: BTreeMap<String, u32>,
    /// The reduction collapsed to the single-vertex bouquet case.
    pub bouquet: bool,
    /// Genus of the graph the ledger was built for; stripping preserves ḡ.
    pub original_g: i64,
    pub original_gbar: i64,
}

impl CorrectionLedger {
    pub fn empty(genus: GenusData) -> Self {
        CorrectionLedger {
            loop_length_total: Zero::zero(),
            q_increments: BTreeMap::new(),
            bouquet: false,
            original_g: genus.g,
            original_gbar: genus.gbar,
        }
    }

    pub fn loops_removed(&self) -> i64 {
        self.q_increments.values().map(|&k| k as i64).sum()
    }

    pub fn is_trivial(&self) -> bool {
        Zero::is_zero(&self.loop_length_total) && self.q_increments.is_empty()
    }
}

/// Repeatedly merge eliminable vertices: q = 0, valence 2, and the two
/// incident edge-ends on distinct edges. A vertex whose only incidence is a
/// single self-loop is kept, so a circle always retains one vertex.
pub fn eliminate_valence2(graph: &PMGraph) -> PMGraph {
    let mut vertices: Vec<Vertex> = graph.vertices().to_vec();
    let mut edges: Vec<(usize, usize, BigRational)> = graph
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.length.clone()))
        .collect();

    loop {
        let v = vertices.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); v];
        for (ei, &(u, w, _)) in edges.iter().enumerate() {
            incident[u].push(ei);
            if u != w {
                incident[w].push(ei);
            } else {
                incident[u].push(ei);
            }
        }
        let target = (0..v).find_map(|s| {
            if vertices[s].q != 0 || incident[s].len() != 2 {
                return None;
            }
            let (e0, e1) = (incident[s][0], incident[s][1]);
            (e0 != e1).then_some((s, e0, e1))
        });
        let Some((s, e0, e1)) = target else { break };

        let other = |e: &(usize, usize, BigRational)| if e.0 == s { e.1 } else { e.0 };
        let x = other(&edges[e0]);
        let y = other(&edges[e1]);
        let merged = edges[e0].2.clone() + edges[e1].2.clone();
        edges[e0] = (x, y, merged);
        edges.remove(e1);
        vertices.remove(s);
        for (u, w, _) in edges.iter_mut() {
            if *u > s {
                *u -= 1;
            }
            if *w > s {
                *w -= 1;
            }
        }
    }
    PMGraph::rebuild(vertices, edges)
}

/// Remove every self-loop, crediting its length to the ledger and bumping q
/// at its anchor (which keeps ḡ fixed). A single-vertex graph is left alone
/// and flagged as a bouquet instead.
pub fn strip_self_loops(graph: &PMGraph) -> (PMGraph, CorrectionLedger) {
    let mut ledger = CorrectionLedger::empty(graph.genus());
    if graph.vertex_count() == 1 {
        ledger.bouquet = !graph.edges().is_empty();
        return (graph.clone(), ledger);
    }
    let mut vertices: Vec<Vertex> = graph.vertices().to_vec();
    let mut kept = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        if e.is_loop() {
            debug_assert!(
                graph.valence(e.u) >= 3,
                "loop anchor must have valence >= 3"
            );
            ledger.loop_length_total += &e.length;
            *ledger
                .q_increments
                .entry(vertices[e.u].id.clone())
                .or_insert(0) += 1;
            vertices[e.u].q += 1;
        } else {
            kept.push((e.u, e.v, e.length.clone()));
        }
    }
    (PMGraph::rebuild(vertices, kept), ledger)
}

fn fresh_id(used: &mut BTreeSet<String>, counter: &mut usize, prefix: &str) -> String {
    loop {
        let candidate = format!("{prefix}{}", *counter);
        *counter += 1;
        if used.insert(candidate.clone()) {
            return candidate;
        }
    }
}

/// Split k - 1 of every class of k parallel edges at their midpoint through
/// a fresh q = 0 vertex. Requires a loop-free graph; total length is
/// preserved.
pub fn subdivide_parallel_edges(graph: &PMGraph) -> PMGraph {
    debug_assert!(graph.edges().iter().all(|e| !e.is_loop()));
    let mut vertices: Vec<Vertex> = graph.vertices().to_vec();
    let mut edges: Vec<(usize, usize, BigRational)> = graph
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.length.clone()))
        .collect();
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (ei, e) in graph.edges().iter().enumerate() {
        groups.entry(e.key()).or_default().push(ei);
    }
    let mut used: BTreeSet<String> = vertices.iter().map(|v| v.id.clone()).collect();
    let mut counter = 0usize;
    let two = BigRational::from_integer(2.into());
    let mut appended = Vec::new();
    for idxs in groups.values().filter(|idxs| idxs.len() >= 2) {
        for &ei in &idxs[1..] {
            let (u, v, len) = edges[ei].clone();
            let half = len / &two;
            let id = fresh_id(&mut used, &mut counter, "m");
            let m = vertices.len();
            vertices.push(Vertex { id, q: 0 });
            edges[ei] = (u, m, half.clone());
            appended.push((m, v, half));
        }
    }
    edges.extend(appended);
    PMGraph::rebuild(vertices, edges)
}

/// Replace every self-loop by three arcs through two fresh q = 0 vertices.
/// This is the subdivision route for loops; no ledger is produced.
pub fn subdivide_self_loops(graph: &PMGraph) -> PMGraph {
    let mut vertices: Vec<Vertex> = graph.vertices().to_vec();
    let mut edges: Vec<(usize, usize, BigRational)> = graph
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.length.clone()))
        .collect();
    let mut used: BTreeSet<String> = vertices.iter().map(|v| v.id.clone()).collect();
    let mut counter = 0usize;
    let three = BigRational::from_integer(3.into());
    let mut appended = Vec::new();
    for ei in 0..edges.len() {
        let (u, v, len) = edges[ei].clone();
        if u != v {
            continue;
        }
        let third = len / &three;
        let x = vertices.len();
        vertices.push(Vertex {
            id: fresh_id(&mut used, &mut counter, "s"),
            q: 0,
        });
        let y = vertices.len();
        vertices.push(Vertex {
            id: fresh_id(&mut used, &mut counter, "s"),
            q: 0,
        });
        edges[ei] = (u, x, third.clone());
        appended.push((x, y, third.clone()));
        appended.push((y, u, third));
    }
    edges.extend(appended);
    PMGraph::rebuild(vertices, edges)
}

/// Full normalization: eliminate valence-2 vertices, handle self-loops per
/// the strategy, then break parallel edges. The output is adequate unless
/// the bouquet flag is set, in which case it is a single vertex with loops.
pub fn reduce_to_adequate(graph: &PMGraph, strategy: LoopStrategy) -> (PMGraph, CorrectionLedger) {
    let merged = eliminate_valence2(graph);
    match strategy {
        LoopStrategy::Analytic => {
            let (stripped, ledger) = strip_self_loops(&merged);
            if ledger.bouquet {
                return (stripped, ledger);
            }
            (subdivide_parallel_edges(&stripped), ledger)
        }
        LoopStrategy::Subdivide => {
            let ledger = CorrectionLedger::empty(merged.genus());
            let no_loops = subdivide_self_loops(&merged);
            (subdivide_parallel_edges(&no_loops), ledger)
        }
    }
}

/// Closed forms for a graph with one vertex and e >= 1 self-loops:
/// τ = ℓ/12, θ = 0, and the four derived invariants in ḡ and ℓ alone.
pub fn bouquet_invariants<S: Scalar>(
    total_loop_length: &S,
    gbar: i64,
    loops: i64,
) -> Result<InvariantSet<S>> {
    if gbar < 1 {
        return Err(Error::InvalidGenus(gbar));
    }
    let len = total_loop_length.clone();
    let gb = S::from_i64(gbar);
    let tau = len.clone() / S::from_i64(12);
    let phi = S::from_i64(gbar - 1) * len.clone() / (S::from_i64(6) * gb.clone());
    let z = S::from_i64(2 * gbar - 1) * len.clone() / (S::from_i64(12) * gb.clone() * gb.clone());
    let lambda = gb * len.clone() / S::from_i64(8 * gbar + 4);
    let epsilon = S::from_i64(gbar - 1) * len.clone() / S::from_i64(3 * gbar);
    Ok(InvariantSet {
        length: len,
        g: loops,
        gbar,
        tau,
        theta: S::zero(),
        epsilon,
        phi,
        lambda,
        z,
    })
}

/// Fold stripped self-loops back in: with A the total removed length and ḡ
/// shared by both sides,
/// τ += A/12, ℓ += A, θ fixed, and the four derived invariants shift by
/// their ḡ-dependent multiples of A.
pub fn apply_corrections<S: Scalar>(
    core: &InvariantSet<S>,
    ledger: &CorrectionLedger,
    digits: u32,
) -> Result<InvariantSet<S>> {
    if core.gbar != ledger.original_gbar {
        return Err(Error::GenusMismatch {
            ledger: ledger.original_gbar,
            core: core.gbar,
        });
    }
    if ledger.is_trivial() {
        let mut out = core.clone();
        out.g = ledger.original_g;
        return Ok(out);
    }
    if core.g + ledger.loops_removed() != ledger.original_g {
        return Err(Error::GenusMismatch {
            ledger: ledger.original_g,
            core: core.g + ledger.loops_removed(),
        });
    }
    let gbar = core.gbar;
    if gbar < 1 {
        return Err(Error::InvalidGenus(gbar));
    }
    let a = S::from_rational(&ledger.loop_length_total, digits);
    let gb = S::from_i64(gbar);
    Ok(InvariantSet {
        length: core.length.clone() + a.clone(),
        g: ledger.original_g,
        gbar,
        tau: core.tau.clone() + a.clone() / S::from_i64(12),
        theta: core.theta.clone(),
        epsilon: core.epsilon.clone() + S::from_i64(gbar - 1) * a.clone() / S::from_i64(3 * gbar),
        phi: core.phi.clone() + S::from_i64(gbar - 1) * a.clone() / (S::from_i64(6) * gb.clone()),
        lambda: core.lambda.clone() + gb.clone() * a.clone() / S::from_i64(8 * gbar + 4),
        z: core.z.clone() + S::from_i64(2 * gbar - 1) * a / (S::from_i64(12) * gb.clone() * gb),
    })
}
