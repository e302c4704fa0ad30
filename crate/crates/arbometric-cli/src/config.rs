//! Model configuration: one TOML file carrying the graph, the per-edge
//! coefficient expressions, the vertex parameters, and numerics.
//!
//! ```toml
//! [graph]
//! vertices = ["u", "v"]
//!
//! [[graph.edges]]
//! name = "e1"
//! tail = "u"
//! head = "v"
//! length = 1.0
//!
//! [coefficients.e1]
//! b = "0.5"
//! sigma = "1"
//!
//! [vertices.u]
//! alpha = 0.7          # sojourn weight, default 0
//! k = 1.0              # node-weight constant, default 1
//! germs = { e1 = 2.0 } # edge-pick weights, default 1; loops need
//!                      # "name.tail" / "name.head" keys
//! ```

use arbometric::coeffs::{EdgeProfile, Expression, QuadOptions, VertexParams};
use arbometric::graph::{EdgeId, End, MetricEdge, MetricGraph, VertexId};
use arbometric::model::{Model, NumericsOptions};
use serde::Deserialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("TOML parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub graph: GraphSection,
    #[serde(default)]
    pub coefficients: BTreeMap<String, CoefficientSection>,
    #[serde(default)]
    pub vertices: BTreeMap<String, VertexSection>,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub compare: CompareSection,
    #[serde(default)]
    pub scaling: Option<ScalingSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSection {
    pub name: String,
    pub tail: String,
    pub head: String,
    pub length: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSection {
    pub b: String,
    pub sigma: String,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct VertexSection {
    #[serde(default)]
    pub alpha: f64,
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default)]
    pub germs: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_order")]
    pub base_order: usize,
    #[serde(default = "default_refinements")]
    pub max_refinements: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSection {
    #[serde(default = "default_compare_tol")]
    pub tolerance: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    #[serde(default = "one")]
    pub c: f64,
    /// Gauge fields F as expressions; admissible fields satisfy ∫F = ∫s
    /// over the ring. Empty means the two built-in gauges (constant mean
    /// of s, and F = s).
    #[serde(default)]
    pub fields: Vec<String>,
}

/// A gauge field for the scaling study, with a short label for reports.
pub type NamedField = (String, Expression);

fn one() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    1e-10
}
fn default_grid() -> usize {
    257
}
fn default_order() -> usize {
    16
}
fn default_refinements() -> usize {
    12
}
fn default_compare_tol() -> f64 {
    1e-6
}

impl Default for NumericsSection {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            grid: default_grid(),
            base_order: default_order(),
            max_refinements: default_refinements(),
        }
    }
}

impl Default for CompareSection {
    fn default() -> Self {
        Self {
            tolerance: default_compare_tol(),
        }
    }
}

impl ConfigFile {
    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_string(),
            source,
        })?;
        Ok(toml::from_str(&text)?)
    }

    /// Validates everything and builds the model. On failure returns every
    /// diagnostic found, each prefixed with its config location.
    pub fn build_model(&self) -> Result<Model, Vec<String>> {
        let mut errors = Vec::new();

        let numerics = NumericsOptions {
            quad: QuadOptions {
                tol: self.numerics.tol,
                base_order: self.numerics.base_order,
                max_refinements: self.numerics.max_refinements,
            },
            grid_points: self.numerics.grid,
        };

        let vertex_index =
            |name: &str| -> Option<usize> { self.graph.vertices.iter().position(|v| v == name) };

        let mut edges = Vec::new();
        for (i, e) in self.graph.edges.iter().enumerate() {
            let tail = vertex_index(&e.tail);
            let head = vertex_index(&e.head);
            if tail.is_none() {
                errors.push(format!(
                    "graph.edges[{i}].tail: unknown vertex `{}`",
                    e.tail
                ));
            }
            if head.is_none() {
                errors.push(format!(
                    "graph.edges[{i}].head: unknown vertex `{}`",
                    e.head
                ));
            }
            if let (Some(t), Some(h)) = (tail, head) {
                edges.push(MetricEdge {
                    name: e.name.clone(),
                    tail: VertexId(t),
                    head: VertexId(h),
                    length: e.length,
                });
            }
        }
        for name in self.vertices.keys() {
            if vertex_index(name).is_none() {
                errors.push(format!("vertices.{name}: unknown vertex"));
            }
        }
        for name in self.coefficients.keys() {
            if !self.graph.edges.iter().any(|e| &e.name == name) {
                errors.push(format!("coefficients.{name}: unknown edge"));
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let graph = match MetricGraph::new(self.graph.vertices.clone(), edges) {
            Ok(g) => g,
            Err(e) => return Err(vec![format!("graph: {e}")]),
        };

        let mut profiles = Vec::new();
        for e in graph.edge_ids() {
            let name = &graph.edge(e).name;
            let Some(section) = self.coefficients.get(name) else {
                errors.push(format!(
                    "coefficients.{name}: missing (b and sigma are required)"
                ));
                continue;
            };
            match EdgeProfile::from_strs(
                &section.b,
                &section.sigma,
                graph.edge(e).length,
                &numerics.quad,
            ) {
                Ok(p) => profiles.push(p),
                Err(err) => errors.push(format!("coefficients.{name}: {err}")),
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let mut alpha_vertex = vec![0.0; graph.vertex_count()];
        let mut k = vec![1.0; graph.vertex_count()];
        let mut germ_alpha = vec![[1.0, 1.0]; graph.edge_count()];
        for (name, section) in &self.vertices {
            let v = VertexId(vertex_index(name).unwrap());
            alpha_vertex[v.0] = section.alpha;
            k[v.0] = section.k;
            for (germ_key, &weight) in &section.germs {
                match resolve_germ(&graph, v, germ_key) {
                    Ok((edge, end)) => match end {
                        End::Tail => germ_alpha[edge.0][0] = weight,
                        End::Head => germ_alpha[edge.0][1] = weight,
                    },
                    Err(msg) => errors.push(format!("vertices.{name}.germs.{germ_key}: {msg}")),
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }

        let params = match VertexParams::new(&graph, alpha_vertex, k, germ_alpha) {
            Ok(p) => p,
            Err(e) => return Err(vec![format!("vertices: {e}")]),
        };
        Model::new(graph, profiles, params, numerics).map_err(|e| vec![format!("model: {e}")])
    }

    /// The gauge fields for the scaling study: configured expressions, or
    /// the two built-in admissible gauges (constant mean of `s`, and
    /// `F = s` itself). Returns the constant `c` and named fields.
    pub fn scaling_fields(&self, model: &Model) -> Result<(f64, Vec<NamedField>), Vec<String>> {
        let c = self.scaling.as_ref().map_or(1.0, |s| s.c);
        let configured = self.scaling.as_ref().map_or(&[][..], |s| &s.fields[..]);
        if configured.is_empty() {
            let profile = model.profile(EdgeId(0));
            let mean = profile.s1_total() / profile.length();
            let s_expr = Expression::Binary(
                arbometric::coeffs::expr::BinOp::Div,
                Box::new(profile.drift_expr().clone()),
                Box::new(Expression::Binary(
                    arbometric::coeffs::expr::BinOp::Pow,
                    Box::new(profile.sigma_expr().clone()),
                    Box::new(Expression::Number(2.0)),
                )),
            );
            return Ok((
                c,
                vec![
                    ("mean".to_string(), Expression::Number(mean)),
                    ("s".to_string(), s_expr),
                ],
            ));
        }
        let mut fields = Vec::new();
        let mut errors = Vec::new();
        for (i, text) in configured.iter().enumerate() {
            match Expression::parse(text) {
                Ok(e) => fields.push((format!("f{}", i + 1), e)),
                Err(err) => errors.push(format!("scaling.fields[{i}]: {err}")),
            }
        }
        if errors.is_empty() {
            Ok((c, fields))
        } else {
            Err(errors)
        }
    }
}

fn resolve_germ(graph: &MetricGraph, vertex: VertexId, key: &str) -> Result<(EdgeId, End), String> {
    let (edge_name, side) = match key.rsplit_once('.') {
        Some((name, "tail")) => (name, Some(End::Tail)),
        Some((name, "head")) => (name, Some(End::Head)),
        _ => (key, None),
    };
    let Some(edge) = graph.edge_ids().find(|e| graph.edge(*e).name == edge_name) else {
        return Err(format!("unknown edge `{edge_name}`"));
    };
    let e = graph.edge(edge);
    match side {
        Some(End::Tail) if e.tail == vertex => Ok((edge, End::Tail)),
        Some(End::Head) if e.head == vertex => Ok((edge, End::Head)),
        Some(_) => Err(format!(
            "edge `{edge_name}` does not touch this vertex on that side"
        )),
        None => {
            if graph.is_loop(edge) {
                Err(format!(
                    "edge `{edge_name}` is a loop; use `{edge_name}.tail` / `{edge_name}.head`"
                ))
            } else if e.tail == vertex {
                Ok((edge, End::Tail))
            } else if e.head == vertex {
                Ok((edge, End::Head))
            } else {
                Err(format!("edge `{edge_name}` is not incident to this vertex"))
            }
        }
    }
}
