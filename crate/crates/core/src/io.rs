//! JSON graph documents, DOT export and the CSV tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::NashCurve;
use crate::generators::Provenance;
use crate::graph::{Graph, GraphError, Truncation, VertexId};
use crate::spinal::{Fiber, FiberSpec, SpinalError, SpinalGraph};
use crate::walk::ReturnProbSeries;

pub const GRAPH_FORMAT: &str = "spinal-lab/graph-v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format tag {0:?}, expected \"{GRAPH_FORMAT}\"")]
    Format(String),
    #[error("document has no spine and projection")]
    NotSpinal,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spinal(#[from] SpinalError),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

/// A graph, optionally with spine, projection, provenance and truncation.
/// Edges are written as `[u, v]` with `u < v`, lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub format: String,
    pub vertex_count: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spine: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<VertexId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Truncation::is_none")]
    pub truncation: Truncation,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        GraphDocument {
            format: GRAPH_FORMAT.to_string(),
            vertex_count: g.vertex_count(),
            edges: g.edges().collect(),
            spine: None,
            pi: None,
            provenance: None,
            truncation: Truncation::none(),
        }
    }

    pub fn from_spinal(sg: &SpinalGraph) -> Self {
        GraphDocument {
            spine: Some(sg.spine().to_vec()),
            pi: Some(sg.projection().to_vec()),
            truncation: sg.truncation().clone(),
            ..Self::from_graph(sg.graph())
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    /// Compact JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        if doc.format != GRAPH_FORMAT {
            return Err(IoError::Format(doc.format));
        }
        Ok(doc)
    }

    pub fn graph(&self) -> Result<Graph, GraphError> {
        Graph::with_vertex_count(self.vertex_count, &self.edges)
    }

    pub fn spinal(&self) -> Result<SpinalGraph, IoError> {
        let (Some(spine), Some(pi)) = (&self.spine, &self.pi) else {
            return Err(IoError::NotSpinal);
        };
        Ok(SpinalGraph::new(self.graph()?, spine.clone(), pi.clone())?
            .with_truncation(self.truncation.clone()))
    }
}

/// Input of the glue command: a skeleton document and one fiber per
/// skeleton vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlueInput {
    pub skeleton: GraphDocument,
    pub fibers: Vec<FiberSpec>,
}

impl GlueInput {
    pub fn fibers(&self) -> Result<Vec<Fiber>, SpinalError> {
        self.fibers.iter().enumerate().map(|(i, f)| f.to_fiber(i)).collect()
    }
}

pub fn read_file(path: &str) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.to_string(), source })
}

pub fn write_file(path: &str, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::File { path: path.to_string(), source })
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Graphviz rendering; spine vertices are boxed and spine edges bold.
pub fn to_dot(g: &Graph, spinal: Option<&SpinalGraph>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle, width=0.2, label=\"\"];\n");
    if let Some(sg) = spinal {
        for &s in sg.spine() {
            writeln!(out, "  {s} [shape=box, style=filled, fillcolor=gray];").unwrap();
        }
    }
    for (u, v) in g.edges() {
        let bold = spinal.is_some_and(|sg| sg.is_spine(u) && sg.is_spine(v));
        if bold {
            writeln!(out, "  {u} -- {v} [penwidth=2];").unwrap();
        } else {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn edges_csv(g: &Graph) -> String {
    let mut out = String::from("u,v\n");
    for (u, v) in g.edges() {
        writeln!(out, "{u},{v}").unwrap();
    }
    out
}

/// `r,volume` rows for `r = 0..`.
pub fn volumes_csv(volumes: &[usize]) -> String {
    let mut out = String::from("r,volume\n");
    for (r, v) in volumes.iter().enumerate() {
        writeln!(out, "{r},{v}").unwrap();
    }
    out
}

pub fn nash_csv(curve: &NashCurve) -> String {
    let mut out = String::from("n,norm1,normp,gradp,ratio\n");
    for e in &curve.entries {
        writeln!(
            out,
            "{},{},{},{},{}",
            e.n,
            fmt_float(e.norm1),
            fmt_float(e.normp),
            fmt_float(e.gradp),
            fmt_float(e.ratio)
        )
        .unwrap();
    }
    out
}

pub fn walk_csv(series: &ReturnProbSeries) -> String {
    let mut out = String::from("t,p_return\n");
    for &(t, p) in &series.entries {
        writeln!(out, "{t},{}", fmt_float(p)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::vicsek;

    #[test]
    fn k2_document_is_bit_exact() {
        let g = Graph::from_edges(&[(1, 0)]).unwrap();
        assert_eq!(
            GraphDocument::from_graph(&g).to_json(),
            "{\"format\":\"spinal-lab/graph-v1\",\"vertex_count\":2,\"edges\":[[0,1]]}\n"
        );
    }

    #[test]
    fn spinal_round_trip() {
        let v = vicsek(2, 1).unwrap();
        let doc = GraphDocument::from_spinal(&v.spinal).with_provenance(v.provenance());
        let text = doc.to_json();
        let back = GraphDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        let sg = back.spinal().unwrap();
        assert_eq!(sg.spine(), v.spinal.spine());
        assert_eq!(sg.truncation(), v.spinal.truncation());
    }

    #[test]
    fn wrong_format_is_rejected() {
        let text = "{\"format\":\"other\",\"vertex_count\":1,\"edges\":[]}";
        assert!(matches!(GraphDocument::from_json(text), Err(IoError::Format(_))));
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 12345.678] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn dot_marks_spine() {
        let v = vicsek(2, 0).unwrap();
        let dot = to_dot(v.spinal.graph(), Some(&v.spinal));
        assert!(dot.starts_with("graph G {"));
        assert_eq!(dot.matches("shape=box").count(), 5);
        assert_eq!(dot.matches(" -- ").count(), 4);
    }
}
