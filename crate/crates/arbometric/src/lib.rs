//! Invariant measures of diffusion processes on metric graphs.
//!
//! A diffusion on a metric graph moves as a one-dimensional diffusion with
//! drift `b_e` and diffusion coefficient `sigma_e` inside each edge and is
//! routed at the vertices by sojourn weights `alpha_v` and edge-pick weights
//! `alpha_{v,e}`. Its unique stationary distribution has an atom on each
//! vertex and a smooth density on each edge.
//!
//! This crate computes that distribution three independent ways and checks
//! them against each other:
//!
//! * [`treemeasure`] sums weights of metric arborescences: spanning trees of
//!   the graph, cut open on the complementary edges and oriented toward the
//!   evaluation point. The cut-position integrals factorize into per-edge
//!   one-dimensional "gate" integrals, with a brute-force tensor quadrature
//!   kept as an oracle.
//! * [`solver`] assembles the per-edge closed-form solution of the
//!   stationarity equation into a small linear system built from current
//!   constancy, vertex flux balance, and the vertex gluing conditions.
//! * For reversible models, [`solver`] also offers a fast path through an
//!   auxiliary Markov chain on the vertex set.
//!
//! [`discrete`] carries the finite-state counterpart (the classical Markov
//! chain tree theorem) and a diffusive scaling study on the ring connecting
//! nearest-neighbour random walks to the continuous formulas.

pub mod coeffs;
pub mod discrete;
pub mod graph;
pub mod linalg;
pub mod measure;
pub mod model;
pub mod solver;
pub mod treemeasure;

pub use measure::{Measure, ResidualReport};
pub use model::{Model, NumericsOptions};
