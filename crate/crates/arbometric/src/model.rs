//! A complete model: metric graph, edge profiles, vertex parameters.

use crate::coeffs::{EdgeProfile, QuadOptions, VertexParams};
use crate::graph::{EdgeId, Germ, MetricGraph, VertexId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("expected {expected} edge profiles, got {got}")]
    ProfileCount { expected: usize, got: usize },
    #[error(
        "profile for edge `{edge}` has length {profile_length}, edge has length {edge_length}"
    )]
    LengthMismatch {
        edge: String,
        profile_length: f64,
        edge_length: f64,
    },
    #[error("vertex `{vertex}` has alpha = 0 and no incident edges; the process would be stuck")]
    DeadVertex { vertex: String },
}

/// Numerical controls for quadrature and output sampling.
#[derive(Debug, Clone, Copy)]
pub struct NumericsOptions {
    pub quad: QuadOptions,
    /// Number of density samples per edge in reported measures.
    pub grid_points: usize,
}

impl Default for NumericsOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions::default(),
            grid_points: 257,
        }
    }
}

/// Immutable bundle of everything that defines the diffusion.
#[derive(Debug, Clone)]
pub struct Model {
    pub graph: MetricGraph,
    pub profiles: Vec<EdgeProfile>,
    pub params: VertexParams,
    pub numerics: NumericsOptions,
}

impl Model {
    pub fn new(
        graph: MetricGraph,
        profiles: Vec<EdgeProfile>,
        params: VertexParams,
        numerics: NumericsOptions,
    ) -> Result<Self, ModelError> {
        if profiles.len() != graph.edge_count() {
            return Err(ModelError::ProfileCount {
                expected: graph.edge_count(),
                got: profiles.len(),
            });
        }
        for (i, p) in profiles.iter().enumerate() {
            let edge = graph.edge(EdgeId(i));
            if (p.length() - edge.length).abs() > 1e-12 * edge.length.max(1.0) {
                return Err(ModelError::LengthMismatch {
                    edge: edge.name.clone(),
                    profile_length: p.length(),
                    edge_length: edge.length,
                });
            }
        }
        // α_v + Σ_e α_{v,e} > 0: germ weights are strictly positive, so this
        // can only fail at an isolated vertex, which connectivity already
        // excludes for graphs with at least one edge.
        for v in graph.vertices() {
            if graph.germs_at(v).is_empty() && params.alpha_vertex(v) == 0.0 {
                return Err(ModelError::DeadVertex {
                    vertex: graph.vertex_name(v).to_string(),
                });
            }
        }
        Ok(Self {
            graph,
            profiles,
            params,
            numerics,
        })
    }

    pub fn profile(&self, e: EdgeId) -> &EdgeProfile {
        &self.profiles[e.0]
    }

    /// Exiting node weight `W⁺ = K_v α_{v,e}` of a germ.
    pub fn w_plus(&self, germ: Germ) -> f64 {
        let v: VertexId = self.graph.germ_vertex(germ);
        self.params.k(v) * self.params.germ_alpha(germ)
    }
}
