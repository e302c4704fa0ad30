//! Direct stationarity solver and the reversible fast path.
//!
//! On each edge the stationary density has the closed form
//! `μ_e(x) = (k₁ + k₂ P(x)) e^{2S₁(x)} / σ²(x)` with constant current
//! `-k₂/2`. Stationarity then reduces to a small linear system in the
//! `(k₁, k₂)` pairs and one gluing scale `λ_v` per vertex:
//!
//! * gluing, one row per germ: `½ σ²_e(v) μ_e(v) = λ_v α_{v,e}`;
//! * flux balance, one row per vertex (their sum vanishes identically, so
//!   the last one is replaced by the normalization row);
//! * normalization: atoms plus edge masses sum to one.
//!
//! Reversibility is characterized by an auxiliary chain on the vertex set
//! with rates `α_{v,e} e^{±∫ s_e}`; when that chain passes the Kolmogorov
//! cycle criterion the measure is assembled directly from its stationary
//! distribution and every edge current vanishes.

use crate::discrete::{stationary_linear, ChainError, FiniteChain};
use crate::graph::{EdgeId, End, Germ, VertexId};
use crate::linalg::{lu_solve, DenseMatrix, LinalgError};
use crate::measure::{Measure, ResidualReport};
use crate::model::Model;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("stationarity system is singular beyond the expected rank deficiency: {0}")]
    Singular(#[from] LinalgError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("model is not reversible; violating cycle: {cycle:?}")]
    NotReversible { cycle: Vec<String> },
}

/// Relative tolerance deciding the Kolmogorov cycle criterion.
const REVERSIBILITY_TOL: f64 = 1e-9;

/// Assembles and solves the stationarity conditions, returning the unique
/// normalized invariant measure.
pub fn assemble_and_solve(model: &Model) -> Result<Measure, SolverError> {
    let graph = &model.graph;
    let n_e = graph.edge_count();
    let n_v = graph.vertex_count();
    let n = 2 * n_e + n_v;
    let k1 = |e: EdgeId| 2 * e.0;
    let k2 = |e: EdgeId| 2 * e.0 + 1;
    let lam = |v: VertexId| 2 * n_e + v.0;

    let mut a = DenseMatrix::zeros(n, n);
    let mut rhs = vec![0.0; n];
    let mut row = 0;

    // gluing rows: ½ σ²_e(v) μ_e(v) = λ_v α_{v,e} for both germs of each edge
    for e in graph.edge_ids() {
        let profile = model.profile(e);
        let edge = graph.edge(e);
        // tail germ: σ²(0) μ_e(0) = k₁
        a.set(row, k1(e), 0.5);
        a.add(
            row,
            lam(edge.tail),
            -model.params.germ_alpha(Germ {
                edge: e,
                end: End::Tail,
            }),
        );
        row += 1;
        // head germ: σ²(ℓ) μ_e(ℓ) = (k₁ + k₂ P(ℓ)) e^{2S₁(ℓ)}
        let growth = (2.0 * profile.s1_total()).exp();
        a.set(row, k1(e), 0.5 * growth);
        a.set(row, k2(e), 0.5 * growth * profile.p_total());
        a.add(
            row,
            lam(edge.head),
            -model.params.germ_alpha(Germ {
                edge: e,
                end: End::Head,
            }),
        );
        row += 1;
    }

    // flux balance per vertex (loops cancel); the last row is redundant
    for v in graph.vertices().take(n_v - 1) {
        for germ in graph.germs_at(v) {
            // J_e = -k₂/2; exiting germs count +J, entering ones -J
            let orientation = match germ.end {
                End::Tail => 1.0,
                End::Head => -1.0,
            };
            a.add(row, k2(germ.edge), -0.5 * orientation);
        }
        row += 1;
    }

    // normalization row
    for e in graph.edge_ids() {
        let (m1, m2) = model.profile(e).basis_mass();
        a.set(row, k1(e), m1);
        a.set(row, k2(e), m2);
    }
    for v in graph.vertices() {
        a.set(row, lam(v), model.params.alpha_vertex(v));
    }
    rhs[row] = 1.0;

    let solution = lu_solve(a, &rhs)?;
    let atoms = graph
        .vertices()
        .map(|v| solution[lam(v)] * model.params.alpha_vertex(v))
        .collect::<Vec<_>>();
    let coeffs = graph
        .edge_ids()
        .map(|e| (solution[k1(e)], solution[k2(e)]))
        .collect::<Vec<_>>();
    // the solve already enforced unit mass, so from_raw's z is 1 + rounding
    Ok(Measure::from_raw(model, atoms, coeffs))
}

/// Residual diagnostics of a measure against the stationarity conditions.
pub fn stationarity_residuals(model: &Model, measure: &Measure) -> ResidualReport {
    let graph = &model.graph;
    let total_length: f64 = graph.edge_ids().map(|e| graph.edge(e).length).sum();
    let density_scale = 1.0 / total_length;

    // current constancy via finite differences at interior sample points
    let mut max_current_variation = 0.0_f64;
    let mut fd_currents = Vec::with_capacity(graph.edge_count());
    for e in graph.edge_ids() {
        let len = graph.edge(e).length;
        let samples: Vec<f64> = (1..=9)
            .map(|k| len * k as f64 / 10.0)
            .map(|x| measure.fd_current(model, e, x))
            .collect();
        let mid = samples[4];
        let lo = samples.iter().cloned().fold(f64::MAX, f64::min);
        let hi = samples.iter().cloned().fold(f64::MIN, f64::max);
        let scale = mid.abs().max(density_scale);
        max_current_variation = max_current_variation.max((hi - lo) / scale);
        fd_currents.push(mid);
    }

    // flux balance at the vertices, from the finite-difference currents
    let mut max_vertex_divergence = 0.0_f64;
    for v in graph.vertices() {
        let mut div = 0.0;
        let mut scale = density_scale;
        for germ in graph.germs_at(v) {
            let j = fd_currents[germ.edge.0];
            scale = scale.max(j.abs());
            div += match germ.end {
                End::Tail => j,
                End::Head => -j,
            };
        }
        max_vertex_divergence = max_vertex_divergence.max(div.abs() / scale);
    }

    // gluing ratios at the vertices
    let mut max_germ_ratio_defect = 0.0_f64;
    for v in graph.vertices() {
        let alpha_v = model.params.alpha_vertex(v);
        let boundary: Vec<(f64, f64)> = graph
            .germs_at(v)
            .iter()
            .map(|germ| {
                let profile = model.profile(germ.edge);
                let coord = match germ.end {
                    End::Tail => 0.0,
                    End::Head => profile.length(),
                };
                let flux = profile.sigma2(coord) * measure.density(model, germ.edge, coord);
                (flux, model.params.germ_alpha(*germ))
            })
            .collect();
        if alpha_v > 0.0 && measure.atoms[v.0] > 0.0 {
            for &(flux, alpha_e) in &boundary {
                let defect = (flux * alpha_v / (2.0 * measure.atoms[v.0] * alpha_e) - 1.0).abs();
                max_germ_ratio_defect = max_germ_ratio_defect.max(defect);
            }
        } else {
            for pair in boundary.windows(2) {
                let (f1, a1) = pair[0];
                let (f2, a2) = pair[1];
                let defect = (f1 * a2 / (f2 * a1) - 1.0).abs();
                max_germ_ratio_defect = max_germ_ratio_defect.max(defect);
            }
        }
    }

    ResidualReport {
        max_current_variation,
        max_vertex_divergence,
        max_germ_ratio_defect,
        normalization_defect: (measure.total_mass(model) - 1.0).abs(),
    }
}

/// One directed transition of the auxiliary vertex chain.
#[derive(Debug, Clone, Copy)]
pub struct ChainTransition {
    pub from: VertexId,
    pub to: VertexId,
    pub edge: EdgeId,
    pub rate: f64,
}

/// The auxiliary chain on the vertex set: one transition per germ
/// direction, rate `α_{v,e} e^{+∫s}` leaving through a tail germ and
/// `α_{v,e} e^{-∫s}` leaving through a head germ. Parallel edges stay as
/// parallel transitions; loops become (balanced or unbalanced) self-loops.
#[derive(Debug, Clone)]
pub struct VertexChain {
    pub transitions: Vec<ChainTransition>,
    /// Stationary distribution over the vertices.
    pub pi: Vec<f64>,
}

pub fn vertex_chain(model: &Model) -> Result<VertexChain, SolverError> {
    let graph = &model.graph;
    let mut transitions = Vec::with_capacity(2 * graph.edge_count());
    for e in graph.edge_ids() {
        let edge = graph.edge(e);
        let total = model.profile(e).s1_total();
        transitions.push(ChainTransition {
            from: edge.tail,
            to: edge.head,
            edge: e,
            rate: model.params.germ_alpha(Germ {
                edge: e,
                end: End::Tail,
            }) * total.exp(),
        });
        transitions.push(ChainTransition {
            from: edge.head,
            to: edge.tail,
            edge: e,
            rate: model.params.germ_alpha(Germ {
                edge: e,
                end: End::Head,
            }) * (-total).exp(),
        });
    }
    let pi = if graph.vertex_count() == 1 {
        vec![1.0]
    } else {
        let flat: Vec<(usize, usize, f64)> = transitions
            .iter()
            .filter(|t| t.from != t.to)
            .map(|t| (t.from.0, t.to.0, t.rate))
            .collect();
        stationary_linear(&FiniteChain::new(graph.vertex_count(), flat)?)?
    };
    Ok(VertexChain { transitions, pi })
}

/// Outcome of the reversibility test.
#[derive(Debug, Clone)]
pub struct Reversibility {
    pub reversible: bool,
    /// Max relative detailed-balance defect over all transitions.
    pub max_detailed_balance_residual: f64,
    /// Edges of a violating cycle when not reversible.
    pub certificate: Option<Vec<EdgeId>>,
}

/// Kolmogorov cycle criterion over the transition multigraph, including the
/// 2-cycles of parallel edges and the self-cycles of loop edges (a loop is
/// balanced when its two germ rates coincide).
pub fn is_reversible(model: &Model, chain: &VertexChain) -> Reversibility {
    let graph = &model.graph;
    let mut worst = 0.0_f64;
    let mut certificate: Option<Vec<EdgeId>> = None;

    // loops: the two self-rates must balance
    for e in graph.edge_ids() {
        if !graph.is_loop(e) {
            continue;
        }
        let fwd = loop_rate(model, e, End::Tail);
        let back = loop_rate(model, e, End::Head);
        let defect = (fwd - back).abs() / fwd.max(back);
        worst = worst.max(defect);
        if defect > REVERSIBILITY_TOL && certificate.is_none() {
            certificate = Some(vec![e]);
        }
    }

    // log-potentials along a BFS tree of the non-loop edges, then check
    // every non-loop edge against them
    let n = graph.vertex_count();
    let mut potential = vec![f64::NAN; n];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    potential[0] = 0.0;
    let mut queue = std::collections::VecDeque::from([VertexId(0)]);
    while let Some(v) = queue.pop_front() {
        for germ in graph.germs_at(v) {
            if graph.is_loop(germ.edge) {
                continue;
            }
            let w = graph.germ_vertex(Germ {
                edge: germ.edge,
                end: germ.end.opposite(),
            });
            if potential[w.0].is_nan() {
                let (fwd, back) = edge_rates(model, germ.edge);
                // potential difference along the canonical direction
                let delta = (fwd / back).ln();
                potential[w.0] = match germ.end {
                    End::Tail => potential[v.0] + delta,
                    End::Head => potential[v.0] - delta,
                };
                parent_edge[w.0] = Some(germ.edge);
                parent[w.0] = Some(v);
                queue.push_back(w);
            }
        }
    }
    for e in graph.edge_ids() {
        if graph.is_loop(e) {
            continue;
        }
        let edge = graph.edge(e);
        let (fwd, back) = edge_rates(model, e);
        let delta = (fwd / back).ln();
        let defect = (potential[edge.tail.0] + delta - potential[edge.head.0]).abs();
        // defects are in log space, already relative
        worst = worst.max(defect);
        if defect > REVERSIBILITY_TOL && certificate.is_none() {
            let mut cycle = tree_path(&parent, &parent_edge, edge.tail, edge.head);
            cycle.push(e);
            certificate = Some(cycle);
        }
    }

    // detailed-balance residual against the chain's stationary distribution
    let mut db = 0.0_f64;
    for e in graph.edge_ids() {
        let edge = graph.edge(e);
        if graph.is_loop(e) {
            let fwd = loop_rate(model, e, End::Tail);
            let back = loop_rate(model, e, End::Head);
            db = db.max((fwd - back).abs() / fwd.max(back));
            continue;
        }
        let (fwd, back) = edge_rates(model, e);
        let lhs = chain.pi[edge.tail.0] * fwd;
        let rhs = chain.pi[edge.head.0] * back;
        db = db.max((lhs - rhs).abs() / lhs.max(rhs));
    }

    Reversibility {
        reversible: certificate.is_none(),
        max_detailed_balance_residual: db,
        certificate,
    }
}

fn edge_rates(model: &Model, e: EdgeId) -> (f64, f64) {
    let total = model.profile(e).s1_total();
    let fwd = model.params.germ_alpha(Germ {
        edge: e,
        end: End::Tail,
    }) * total.exp();
    let back = model.params.germ_alpha(Germ {
        edge: e,
        end: End::Head,
    }) * (-total).exp();
    (fwd, back)
}

fn loop_rate(model: &Model, e: EdgeId, end: End) -> f64 {
    let total = model.profile(e).s1_total();
    let alpha = model.params.germ_alpha(Germ { edge: e, end });
    match end {
        End::Tail => alpha * total.exp(),
        End::Head => alpha * (-total).exp(),
    }
}

fn tree_path(
    parent: &[Option<VertexId>],
    parent_edge: &[Option<EdgeId>],
    a: VertexId,
    b: VertexId,
) -> Vec<EdgeId> {
    let ancestors = |mut v: VertexId| -> Vec<(VertexId, Option<EdgeId>)> {
        let mut path = vec![(v, parent_edge[v.0])];
        while let Some(p) = parent[v.0] {
            v = p;
            path.push((v, parent_edge[v.0]));
        }
        path
    };
    let up_a = ancestors(a);
    let up_b = ancestors(b);
    let set_a: Vec<VertexId> = up_a.iter().map(|(v, _)| *v).collect();
    let meet = up_b
        .iter()
        .find(|(v, _)| set_a.contains(v))
        .map(|(v, _)| *v)
        .unwrap();
    let mut edges = Vec::new();
    for (v, e) in &up_a {
        if *v == meet {
            break;
        }
        edges.push(e.unwrap());
    }
    for (v, e) in &up_b {
        if *v == meet {
            break;
        }
        edges.push(e.unwrap());
    }
    edges
}

/// Invariant measure of a reversible model from the vertex chain: zero
/// current on every edge, densities `2c π_v q(v,w) e^{2S₁(x) - S₁(ℓ)}/σ²`,
/// atoms `c π_v α_v`.
pub fn reversible_invariant(model: &Model, chain: &VertexChain) -> Result<Measure, SolverError> {
    let check = is_reversible(model, chain);
    if !check.reversible {
        let cycle = check
            .certificate
            .unwrap_or_default()
            .iter()
            .map(|e| model.graph.edge(*e).name.clone())
            .collect();
        return Err(SolverError::NotReversible { cycle });
    }
    let graph = &model.graph;
    let atoms_raw = graph
        .vertices()
        .map(|v| chain.pi[v.0] * model.params.alpha_vertex(v))
        .collect::<Vec<_>>();
    let coeffs_raw = graph
        .edge_ids()
        .map(|e| {
            let edge = graph.edge(e);
            let total = model.profile(e).s1_total();
            let rate_fwd = model.params.germ_alpha(Germ {
                edge: e,
                end: End::Tail,
            }) * total.exp();
            // k₁ = 2 π_tail q(tail→head) e^{-S₁(ℓ)}; the current vanishes
            (2.0 * chain.pi[edge.tail.0] * rate_fwd * (-total).exp(), 0.0)
        })
        .collect::<Vec<_>>();
    Ok(Measure::from_raw(model, atoms_raw, coeffs_raw))
}
