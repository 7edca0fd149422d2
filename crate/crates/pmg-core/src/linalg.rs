//! Discrete Laplacian assembly, Moore-Penrose pseudo-inverse through the
//! rank-one shift L⁺ = (L - J/v)⁻¹ + J/v, and effective resistance.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::graph::PMGraph;
use crate::matrix::{invert, ldlt_inverse, Matrix};
use crate::scalar::Scalar;

/// Which shifted matrix gets inverted. Both give the same L⁺:
/// (L - J/v)⁻¹ + J/v = (L + J/v)⁻¹ - J/v. The minus form is the default;
/// the plus form is positive definite and solved by LDLᵀ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PinvVariant {
    #[default]
    Shifted,
    ShiftedSpd,
}

/// Residual diagnostics for float backends: max |M·x_j - e_j| over sampled
/// inverse columns, where M is the shifted matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionReport {
    pub max_residual: f64,
    pub tolerance: f64,
    pub flagged: bool,
}

/// One edge of the system, with its length already in the scalar backend.
#[derive(Clone, Debug, PartialEq)]
pub struct SysEdge<S> {
    pub u: usize,
    pub v: usize,
    pub length: S,
}

/// Result of deleting an edge's interior: the resistance between its
/// endpoints through the rest of the graph, or unbounded for a bridge.
#[derive(Clone, Debug, PartialEq)]
pub enum Complement<S> {
    Finite(S),
    Unbounded,
}

/// Vertex ordering, discrete Laplacian, and its pseudo-inverse for one
/// adequate connected graph.
#[derive(Clone, Debug)]
pub struct LaplacianSystem<S> {
    pub ordering: Vec<String>,
    pub edges: Vec<SysEdge<S>>,
    pub lap: Matrix<S>,
    pub pinv: Matrix<S>,
    pub precision: Option<PrecisionReport>,
}

/// Vertex ordering, scalar-converted edges, and the Laplacian itself.
pub type AssembledLaplacian<S> = (Vec<String>, Vec<SysEdge<S>>, Matrix<S>);

/// Assemble L = D - A with conductances 1/length. The graph must be
/// adequate (no self-loops, no parallel edges) and have at least two
/// vertices.
pub fn build_laplacian<S: Scalar>(graph: &PMGraph, digits: u32) -> Result<AssembledLaplacian<S>> {
    let v = graph.vertex_count();
    if v < 2 {
        return Err(Error::NotAdequate(format!("{v} vertices; need at least 2")));
    }
    let mut seen = BTreeSet::new();
    for e in graph.edges() {
        if e.is_loop() {
            return Err(Error::NotAdequate(format!(
                "self-loop at `{}`",
                graph.vertex_id(e.u)
            )));
        }
        if !seen.insert(e.key()) {
            return Err(Error::NotAdequate(format!(
                "parallel edges between `{}` and `{}`",
                graph.vertex_id(e.u),
                graph.vertex_id(e.v)
            )));
        }
    }

    let ordering = graph.vertices().iter().map(|x| x.id.clone()).collect();
    let mut lap = Matrix::zeros(v);
    let mut edges = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let conductance = BigRational::new(1.into(), 1.into()) / &e.length;
        let c = S::from_rational(&conductance, digits);
        lap.set(e.u, e.v, -c.clone());
        lap.set(e.v, e.u, -c.clone());
        lap.set(e.u, e.u, lap.get(e.u, e.u).clone() + c.clone());
        lap.set(e.v, e.v, lap.get(e.v, e.v).clone() + c);
        edges.push(SysEdge {
            u: e.u,
            v: e.v,
            length: S::from_rational(&e.length, digits),
        });
    }
    Ok((ordering, edges, lap))
}

/// L⁺ from the shift formula. For float backends a sampled residual check
/// of the inner inversion is reported; exact arithmetic needs none.
pub fn pseudo_inverse<S: Scalar>(
    lap: &Matrix<S>,
    variant: PinvVariant,
    tolerance: f64,
) -> Result<(Matrix<S>, Option<PrecisionReport>)> {
    let v = lap.n();
    let inv_v = S::one() / S::from_i64(v as i64);
    let shifted = match variant {
        PinvVariant::Shifted => Matrix::from_fn(v, |i, j| lap.get(i, j).clone() - inv_v.clone()),
        PinvVariant::ShiftedSpd => Matrix::from_fn(v, |i, j| lap.get(i, j).clone() + inv_v.clone()),
    };
    let inner = match variant {
        PinvVariant::Shifted => invert(&shifted)?,
        PinvVariant::ShiftedSpd => ldlt_inverse(&shifted)?,
    };
    let precision = if S::EXACT {
        None
    } else {
        Some(residual_report(&shifted, &inner, tolerance))
    };
    let pinv = match variant {
        PinvVariant::Shifted => Matrix::from_fn(v, |i, j| inner.get(i, j).clone() + inv_v.clone()),
        PinvVariant::ShiftedSpd => {
            Matrix::from_fn(v, |i, j| inner.get(i, j).clone() - inv_v.clone())
        }
    };
    Ok((pinv, precision))
}

/// Check up to eight evenly spaced columns of M·M⁻¹ against the identity,
/// relative to the magnitude of M.
fn residual_report<S: Scalar>(m: &Matrix<S>, inv: &Matrix<S>, tolerance: f64) -> PrecisionReport {
    let n = m.n();
    let samples = n.clamp(1, 8);
    let scale = m.max_abs_f64().max(1e-300);
    let mut max_residual = 0.0f64;
    for s in 0..samples {
        let c = s * n / samples;
        let col: Vec<S> = (0..n).map(|i| inv.get(i, c).clone()).collect();
        let prod = m.mul_vec(&col);
        for (i, p) in prod.iter().enumerate() {
            let target = if i == c { 1.0 } else { 0.0 };
            let r = (p.to_f64() - target).abs() / scale;
            max_residual = max_residual.max(r);
        }
    }
    PrecisionReport {
        max_residual,
        tolerance,
        flagged: max_residual > tolerance,
    }
}

impl<S: Scalar> LaplacianSystem<S> {
    pub fn build(
        graph: &PMGraph,
        digits: u32,
        variant: PinvVariant,
        tolerance: f64,
    ) -> Result<Self> {
        let (ordering, edges, lap) = build_laplacian(graph, digits)?;
        let (pinv, precision) = pseudo_inverse(&lap, variant, tolerance)?;
        Ok(LaplacianSystem {
            ordering,
            edges,
            lap,
            pinv,
            precision,
        })
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.ordering
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// r(p,q) = l⁺_pp - 2 l⁺_pq + l⁺_qq.
    pub fn resistance_idx(&self, p: usize, q: usize) -> S {
        self.pinv.get(p, p).clone() - S::from_i64(2) * self.pinv.get(p, q).clone()
            + self.pinv.get(q, q).clone()
    }

    pub fn resistance(&self, p: &str, q: &str) -> Result<S> {
        Ok(self.resistance_idx(self.vertex_index(p)?, self.vertex_index(q)?))
    }

    /// Resistance between the endpoints of edge `e` with its interior
    /// deleted, recovered from r = L·R/(L + R). A bridge gives Unbounded.
    pub fn resistance_complement(&self, e: usize) -> Result<Complement<S>> {
        let edge = self
            .edges
            .get(e)
            .ok_or_else(|| Error::UnknownEdge(e.to_string()))?;
        let r = self.resistance_idx(edge.u, edge.v);
        let gap = edge.length.clone() - r.clone();
        let bridge = if S::EXACT {
            gap.is_zero()
        } else {
            gap.to_f64().abs() <= edge.length.to_f64().abs() * 1e-9
        };
        if bridge {
            return Ok(Complement::Unbounded);
        }
        Ok(Complement::Finite(edge.length.clone() * r / gap))
    }
}
