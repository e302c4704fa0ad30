//! Vertex parameters of the diffusion: sojourn weights, germ weights, and
//! the free per-vertex constants entering the arborescence node weights.

use crate::graph::{End, MetricGraph};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("alpha for vertex `{vertex}` must be nonnegative, got {value}")]
    NegativeVertexAlpha { vertex: String, value: f64 },
    #[error("K for vertex `{vertex}` must be positive, got {value}")]
    NonpositiveK { vertex: String, value: f64 },
    #[error("germ weight alpha for edge `{edge}` ({side}) must be positive, got {value}")]
    NonpositiveGermAlpha {
        edge: String,
        side: &'static str,
        value: f64,
    },
    #[error("parameter vectors do not match the graph shape")]
    ShapeMismatch,
}

/// Per-vertex and per-germ parameters.
///
/// `alpha_vertex[v]` is the sojourn weight of vertex `v` (zero means the
/// process spends no time there and the vertex carries no atom);
/// `germ_alpha[e] = [tail, head]` are the strictly positive edge-pick
/// weights of the two germs of edge `e`; `k[v]` is the free constant in the
/// exiting node weight `W⁺ = K_v α_{v,e}` (entering germs weigh 1).
#[derive(Debug, Clone)]
pub struct VertexParams {
    alpha_vertex: Vec<f64>,
    k: Vec<f64>,
    germ_alpha: Vec<[f64; 2]>,
}

impl VertexParams {
    pub fn new(
        graph: &MetricGraph,
        alpha_vertex: Vec<f64>,
        k: Vec<f64>,
        germ_alpha: Vec<[f64; 2]>,
    ) -> Result<Self, ParamsError> {
        if alpha_vertex.len() != graph.vertex_count()
            || k.len() != graph.vertex_count()
            || germ_alpha.len() != graph.edge_count()
        {
            return Err(ParamsError::ShapeMismatch);
        }
        for (v, &a) in alpha_vertex.iter().enumerate() {
            if !(a.is_finite() && a >= 0.0) {
                return Err(ParamsError::NegativeVertexAlpha {
                    vertex: graph.vertex_name(crate::graph::VertexId(v)).to_string(),
                    value: a,
                });
            }
        }
        for (v, &kv) in k.iter().enumerate() {
            if !(kv.is_finite() && kv > 0.0) {
                return Err(ParamsError::NonpositiveK {
                    vertex: graph.vertex_name(crate::graph::VertexId(v)).to_string(),
                    value: kv,
                });
            }
        }
        for (e, pair) in germ_alpha.iter().enumerate() {
            for (side, &a) in ["tail", "head"].iter().zip(pair) {
                if !(a.is_finite() && a > 0.0) {
                    return Err(ParamsError::NonpositiveGermAlpha {
                        edge: graph.edge(crate::graph::EdgeId(e)).name.clone(),
                        side,
                        value: a,
                    });
                }
            }
        }
        Ok(Self {
            alpha_vertex,
            k,
            germ_alpha,
        })
    }

    /// Uniform defaults: `α_v = 0`, `K_v = 1`, all germ weights `1`.
    pub fn uniform(graph: &MetricGraph) -> Self {
        Self {
            alpha_vertex: vec![0.0; graph.vertex_count()],
            k: vec![1.0; graph.vertex_count()],
            germ_alpha: vec![[1.0, 1.0]; graph.edge_count()],
        }
    }

    pub fn alpha_vertex(&self, v: crate::graph::VertexId) -> f64 {
        self.alpha_vertex[v.0]
    }

    pub fn k(&self, v: crate::graph::VertexId) -> f64 {
        self.k[v.0]
    }

    pub fn germ_alpha(&self, germ: crate::graph::Germ) -> f64 {
        match germ.end {
            End::Tail => self.germ_alpha[germ.edge.0][0],
            End::Head => self.germ_alpha[germ.edge.0][1],
        }
    }

    pub fn with_alpha_vertex(mut self, v: crate::graph::VertexId, alpha: f64) -> Self {
        self.alpha_vertex[v.0] = alpha;
        self
    }

    pub fn with_germ_alpha(mut self, e: crate::graph::EdgeId, tail: f64, head: f64) -> Self {
        self.germ_alpha[e.0] = [tail, head];
        self
    }

    pub fn with_k(mut self, v: crate::graph::VertexId, k: f64) -> Self {
        self.k[v.0] = k;
        self
    }
}
