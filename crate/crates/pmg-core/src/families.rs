//! Deterministic generators for the graph families used in tests and
//! benchmarks: complete graphs, ladders, bouquets, circles, and the mixed
//! fixture with a loop, polarization, and parallel edges.

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::graph::PMGraph;

fn check_positive(lengths: &[BigRational]) -> Result<()> {
    if let Some(bad) = lengths.iter().find(|l| !l.is_positive()) {
        return Err(Error::BadParameter(format!(
            "lengths must be positive, got {bad}"
        )));
    }
    Ok(())
}

/// K_n with the given edge lengths in lexicographic vertex-pair order and
/// per-vertex polarization. Vertices are named v0..v(n-1).
pub fn complete_graph(n: usize, lengths: &[BigRational], q: &[u32]) -> Result<PMGraph> {
    if n < 2 {
        return Err(Error::BadParameter("complete graph needs n >= 2".into()));
    }
    let expected = n * (n - 1) / 2;
    if lengths.len() != expected {
        return Err(Error::BadParameterCount {
            expected,
            got: lengths.len(),
        });
    }
    if q.len() != n {
        return Err(Error::BadParameterCount {
            expected: n,
            got: q.len(),
        });
    }
    check_positive(lengths)?;
    let vertices = (0..n).map(|i| (format!("v{i}"), q[i])).collect();
    let mut edges = Vec::with_capacity(expected);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            edges.push((format!("v{i}"), format!("v{j}"), lengths[k].clone()));
            k += 1;
        }
    }
    PMGraph::new(vertices, edges)
}

/// Ladder with n rungs of length b and 2(n-1) rails of length a:
/// 2n vertices, 3n-2 edges, genus n-1, all q = 0. Vertices v0..v(n-1) form
/// the top rail, v(n)..v(2n-1) the bottom.
pub fn ladder(n: usize, a: &BigRational, b: &BigRational) -> Result<PMGraph> {
    if n < 2 {
        return Err(Error::BadParameter("ladder needs n >= 2".into()));
    }
    check_positive(std::slice::from_ref(a))?;
    check_positive(std::slice::from_ref(b))?;
    let vertices = (0..2 * n).map(|i| (format!("v{i}"), 0)).collect();
    let mut edges = Vec::with_capacity(3 * n - 2);
    for i in 0..n - 1 {
        edges.push((format!("v{i}"), format!("v{}", i + 1), a.clone()));
    }
    for i in 0..n - 1 {
        edges.push((format!("v{}", n + i), format!("v{}", n + i + 1), a.clone()));
    }
    for i in 0..n {
        edges.push((format!("v{i}"), format!("v{}", n + i), b.clone()));
    }
    PMGraph::new(vertices, edges)
}

/// One vertex with the given self-loop lengths and polarization.
pub fn bouquet(loop_lengths: &[BigRational], q_at_vertex: u32) -> Result<PMGraph> {
    if loop_lengths.is_empty() {
        return Err(Error::BadParameter(
            "bouquet needs at least one loop".into(),
        ));
    }
    check_positive(loop_lengths)?;
    let edges = loop_lengths
        .iter()
        .map(|l| ("v0".to_string(), "v0".to_string(), l.clone()))
        .collect();
    PMGraph::new(vec![("v0".to_string(), q_at_vertex)], edges)
}

/// A circle of circumference l, presented as one vertex with a self-loop.
pub fn circle(l: &BigRational) -> Result<PMGraph> {
    bouquet(std::slice::from_ref(l), 0)
}

/// The mixed fixture: a triangle of a-edges at a hub with q = 4 (a circle
/// of length 3a once its two q = 0 corners are merged), a b-edge parallel
/// to a c,c-path through a q = 0 midpoint down to a junction, and leaf
/// segments d, e ending in q = 3 vertices. Genus 2, polarized genus 12,
/// total length 3a + b + 2c + d + e.
pub fn example3(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
    e: &BigRational,
) -> Result<PMGraph> {
    check_positive(&[a.clone(), b.clone(), c.clone(), d.clone(), e.clone()])?;
    let vertices = vec![
        ("hub".to_string(), 4),
        ("t1".to_string(), 0),
        ("t2".to_string(), 0),
        ("mid".to_string(), 0),
        ("jct".to_string(), 0),
        ("w1".to_string(), 3),
        ("w2".to_string(), 3),
    ];
    let edges = vec![
        ("hub".to_string(), "t1".to_string(), a.clone()),
        ("t1".to_string(), "t2".to_string(), a.clone()),
        ("t2".to_string(), "hub".to_string(), a.clone()),
        ("hub".to_string(), "jct".to_string(), b.clone()),
        ("hub".to_string(), "mid".to_string(), c.clone()),
        ("mid".to_string(), "jct".to_string(), c.clone()),
        ("jct".to_string(), "w1".to_string(), d.clone()),
        ("jct".to_string(), "w2".to_string(), e.clone()),
    ];
    PMGraph::new(vertices, edges)
}
