//! Graph file format and report emission.
//!
//! Graphs travel as JSON documents with string ids, nonnegative integer
//! polarization, and lengths given as `p/q`, integer, or decimal literals.
//! Reports carry every number as a string: rationals verbatim in exact
//! mode, significant-figure decimals in float modes, so the JSON and CSV
//! payloads are identical.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PMGraph, ValidationOutcome};
use crate::invariants::{compute_all, Computation, ComputeOptions, MeasureReport};
use crate::scalar::{parse_rational, BigFloat, Scalar, ScalarMode};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    #[serde(default)]
    pub q: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    pub length: LengthLit,
}

/// Length literal: a string (`"1/6"`, `"0.25"`, `"3"`) or a bare integer.
/// Floating JSON numbers are rejected to keep lengths exact.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthLit {
    Text(String),
    Int(i64),
}

impl LengthLit {
    fn to_rational(&self) -> Result<BigRational> {
        match self {
            LengthLit::Text(s) => parse_rational(s),
            LengthLit::Int(n) => Ok(BigRational::from_integer((*n).into())),
        }
    }
}

/// Parse a JSON graph document. Structural problems surface here with
/// line/column positions; semantic problems wait for `validate`.
pub fn parse_graph(text: &str) -> Result<PMGraph> {
    let doc: GraphDocument = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
    document_to_graph(&doc)
}

pub fn document_to_graph(doc: &GraphDocument) -> Result<PMGraph> {
    let vertices = doc
        .vertices
        .iter()
        .map(|v| (v.id.clone(), v.q))
        .collect::<Vec<_>>();
    let mut edges = Vec::with_capacity(doc.edges.len());
    for e in &doc.edges {
        edges.push((e.u.clone(), e.v.clone(), e.length.to_rational()?));
    }
    PMGraph::new(vertices, edges)
}

pub fn graph_to_document(graph: &PMGraph) -> GraphDocument {
    GraphDocument {
        vertices: graph
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id.clone(),
                q: v.q,
            })
            .collect(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                u: graph.vertex_id(e.u).to_string(),
                v: graph.vertex_id(e.v).to_string(),
                length: LengthLit::Text(e.length.display(0)),
            })
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ratios {
    pub tau: String,
    pub theta: String,
    pub phi: String,
    pub lambda: String,
    pub epsilon: String,
    pub z: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointMassOut {
    pub vertex: String,
    pub mass: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeDensityOut {
    pub u: String,
    pub v: String,
    pub length: String,
    pub density: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureOut {
    pub point_masses: Vec<PointMassOut>,
    pub edge_densities: Vec<EdgeDensityOut>,
    pub total_mass: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasuresOut {
    pub canonical: MeasureOut,
    pub admissible: MeasureOut,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrecisionOut {
    pub max_residual: f64,
    pub tolerance: f64,
    pub flagged: bool,
}

/// Display-ready result of one computation.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub mode: String,
    pub g: i64,
    pub gbar: i64,
    pub length: String,
    pub tau: String,
    pub theta: String,
    pub epsilon: String,
    pub phi: String,
    pub lambda: String,
    pub z: String,
    pub ratios: Ratios,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measures: Option<MeasuresOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionOut>,
}

fn measure_out<S: Scalar>(m: &MeasureReport<S>, digits: u32) -> MeasureOut {
    MeasureOut {
        point_masses: m
            .point_masses
            .iter()
            .map(|(vertex, mass)| PointMassOut {
                vertex: vertex.clone(),
                mass: mass.display(digits),
            })
            .collect(),
        edge_densities: m
            .edge_densities
            .iter()
            .map(|e| EdgeDensityOut {
                u: e.u.clone(),
                v: e.v.clone(),
                length: e.length.display(digits),
                density: e.density.display(digits),
            })
            .collect(),
        total_mass: m.total_mass().display(digits),
    }
}

/// Build the display report from a finished computation.
pub fn build_report<S: Scalar>(
    comp: &Computation<S>,
    mode_name: &str,
    digits: u32,
    include_measures: bool,
) -> Report {
    let inv = &comp.invariants;
    let over_l = |x: &S| (x.clone() / inv.length.clone()).display(digits);
    Report {
        mode: mode_name.to_string(),
        g: inv.g,
        gbar: inv.gbar,
        length: inv.length.display(digits),
        tau: inv.tau.display(digits),
        theta: inv.theta.display(digits),
        epsilon: inv.epsilon.display(digits),
        phi: inv.phi.display(digits),
        lambda: inv.lambda.display(digits),
        z: inv.z.display(digits),
        ratios: Ratios {
            tau: over_l(&inv.tau),
            theta: over_l(&inv.theta),
            phi: over_l(&inv.phi),
            lambda: over_l(&inv.lambda),
            epsilon: over_l(&inv.epsilon),
            z: over_l(&inv.z),
        },
        measures: include_measures.then(|| MeasuresOut {
            canonical: measure_out(&comp.canonical, digits),
            admissible: measure_out(&comp.admissible, digits),
        }),
        precision: comp.precision.map(|p| PrecisionOut {
            max_residual: p.max_residual,
            tolerance: p.tolerance,
            flagged: p.flagged,
        }),
    }
}

/// Run the pipeline under the selected arithmetic backend and produce the
/// display report.
pub fn compute_report(
    graph: &PMGraph,
    mode: ScalarMode,
    opts: &ComputeOptions,
    display_digits: u32,
    include_measures: bool,
) -> Result<Report> {
    match mode {
        ScalarMode::Exact => {
            let comp = compute_all::<BigRational>(graph, 0, opts)?;
            Ok(build_report(
                &comp,
                "exact",
                display_digits,
                include_measures,
            ))
        }
        ScalarMode::BigFloat { digits } => {
            let comp = compute_all::<BigFloat>(graph, digits, opts)?;
            let shown = display_digits.min(digits);
            Ok(build_report(&comp, "bigfloat", shown, include_measures))
        }
        ScalarMode::Machine => {
            let comp = compute_all::<f64>(graph, 0, opts)?;
            Ok(build_report(
                &comp,
                "machine",
                display_digits,
                include_measures,
            ))
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn emit(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            ReportFormat::Csv => self.emit_csv(),
            ReportFormat::Table => self.emit_table(),
        }
    }

    /// Fixed three-column layout: kind,key,value.
    fn emit_csv(&self) -> String {
        let mut rows: Vec<(String, String, String)> = vec![
            ("meta".into(), "mode".into(), self.mode.clone()),
            ("genus".into(), "g".into(), self.g.to_string()),
            ("genus".into(), "gbar".into(), self.gbar.to_string()),
            ("invariant".into(), "length".into(), self.length.clone()),
            ("invariant".into(), "tau".into(), self.tau.clone()),
            ("invariant".into(), "theta".into(), self.theta.clone()),
            ("invariant".into(), "epsilon".into(), self.epsilon.clone()),
            ("invariant".into(), "phi".into(), self.phi.clone()),
            ("invariant".into(), "lambda".into(), self.lambda.clone()),
            ("invariant".into(), "z".into(), self.z.clone()),
            ("ratio".into(), "tau/length".into(), self.ratios.tau.clone()),
            (
                "ratio".into(),
                "theta/length".into(),
                self.ratios.theta.clone(),
            ),
            ("ratio".into(), "phi/length".into(), self.ratios.phi.clone()),
            (
                "ratio".into(),
                "lambda/length".into(),
                self.ratios.lambda.clone(),
            ),
            (
                "ratio".into(),
                "epsilon/length".into(),
                self.ratios.epsilon.clone(),
            ),
            ("ratio".into(), "z/length".into(), self.ratios.z.clone()),
        ];
        if let Some(m) = &self.measures {
            for (name, out) in [("canonical", &m.canonical), ("admissible", &m.admissible)] {
                for p in &out.point_masses {
                    rows.push((
                        "measure_point".into(),
                        format!("{name}:{}", p.vertex),
                        p.mass.clone(),
                    ));
                }
                for (i, e) in out.edge_densities.iter().enumerate() {
                    rows.push((
                        "measure_edge".into(),
                        format!("{name}:{i}:{}-{}", e.u, e.v),
                        e.density.clone(),
                    ));
                }
                rows.push((
                    "measure_total".into(),
                    name.to_string(),
                    out.total_mass.clone(),
                ));
            }
        }
        if let Some(p) = &self.precision {
            rows.push((
                "precision".into(),
                "max_residual".into(),
                format!("{:e}", p.max_residual),
            ));
            rows.push(("precision".into(), "flagged".into(), p.flagged.to_string()));
        }
        let mut out = String::from("kind,key,value\n");
        for (kind, key, value) in rows {
            out.push_str(&format!(
                "{},{},{}\n",
                csv_field(&kind),
                csv_field(&key),
                csv_field(&value)
            ));
        }
        out
    }

    fn emit_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "mode: {}    g = {}    gbar = {}    length = {}\n\n",
            self.mode, self.g, self.gbar, self.length
        ));
        let rows = [
            ("tau", &self.tau, &self.ratios.tau),
            ("theta", &self.theta, &self.ratios.theta),
            ("phi", &self.phi, &self.ratios.phi),
            ("lambda", &self.lambda, &self.ratios.lambda),
            ("epsilon", &self.epsilon, &self.ratios.epsilon),
            ("z", &self.z, &self.ratios.z),
        ];
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(8).max(8);
        let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(12).max(12);
        out.push_str(&format!(
            "{:<10} {:>w1$} {:>w2$}\n",
            "invariant", "value", "value/length"
        ));
        for (name, value, ratio) in rows {
            out.push_str(&format!("{name:<10} {value:>w1$} {ratio:>w2$}\n"));
        }
        if let Some(m) = &self.measures {
            for (name, out_m) in [("canonical", &m.canonical), ("admissible", &m.admissible)] {
                out.push_str(&format!("\n{name} measure (total {}):\n", out_m.total_mass));
                for p in &out_m.point_masses {
                    out.push_str(&format!("  point {:<12} {}\n", p.vertex, p.mass));
                }
                for e in &out_m.edge_densities {
                    out.push_str(&format!(
                        "  edge {}-{} (length {}): density {}\n",
                        e.u, e.v, e.length, e.density
                    ));
                }
            }
        }
        if let Some(p) = &self.precision {
            out.push_str(&format!(
                "\nresidual: {:e} (tolerance {:e}{})\n",
                p.max_residual,
                p.tolerance,
                if p.flagged { ", FLAGGED" } else { "" }
            ));
        }
        out
    }
}

/// JSON summary of validation plus genus, for the `check` subcommand.
pub fn validation_report(graph: &PMGraph, outcome: &ValidationOutcome) -> String {
    let genus = outcome.connected.then(|| graph.genus());
    let value = serde_json::json!({
        "valid": outcome.is_valid(),
        "connected": outcome.connected,
        "empty": outcome.empty,
        "nonpositive_edges": outcome.nonpositive_edges,
        "non_effective_vertices": outcome.non_effective,
        "g": genus.map(|x| x.g),
        "gbar": genus.map(|x| x.gbar),
        "deg_k": genus.map(|x| x.deg_k),
        "length": graph.total_length().display(0),
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
    });
    serde_json::to_string_pretty(&value).expect("validation report serializes")
}
