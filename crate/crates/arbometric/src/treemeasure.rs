//! The arborescence representation of the invariant measure.
//!
//! For a root point `x` on edge `e`, the unnormalized density is a sum over
//! spanning trees `T` of the graph, each integrated over the positions of
//! one cut per complement edge:
//!
//! ```text
//! m_e(x) = Σ_T ∫ dy₁…dy_k  R(τ_x[y])
//! ```
//!
//! where `R(τ) = e^{∫_τ s} / σ²(x) · Π_v 𝒲_v(τ)` weighs the metric
//! arborescence obtained by cutting at `y` and orienting everything toward
//! `x`. Both halves of a cut edge leave their cut point, so they enter their
//! endpoint vertices with weight one and the node-weight product does not
//! depend on the cut positions: the `k`-dimensional integral factorizes into
//! a product of per-edge one-dimensional gate integrals. The only special
//! case is a cut on the root's own edge, which splits at `x` into two
//! sub-integrals carrying different node products. [`TreeFactorization`]
//! holds the factorized coefficients; [`TreeMeasure::density_bruteforce`]
//! keeps the unfactorized tensor quadrature as an oracle.

use crate::coeffs::integrate;
use crate::graph::{
    Arborescence, EdgeId, End, Germ, PointOnEdge, SpanningTree, UnicyclicSubgraph, VertexId,
};
use crate::measure::Measure;
use crate::model::Model;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("cut-space dimension {dim} exceeds the brute-force guard ({max})")]
    DimensionGuard { dim: usize, max: usize },
    #[error("germ limits at vertex `{vertex}` disagree: relative spread {spread:.3e} (values {values:?})")]
    GermMismatch {
        vertex: String,
        spread: f64,
        values: Vec<f64>,
    },
    #[error("graph is not a single-vertex single-loop ring")]
    NotARing,
    #[error(transparent)]
    Quad(#[from] crate::coeffs::QuadError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Maximum cut-space dimension accepted by the brute-force oracle.
pub const BRUTEFORCE_MAX_DIM: usize = 3;

const GERM_AGREEMENT_TOL: f64 = 1e-6;

/// Factorized contribution of one spanning tree to the density on one edge.
///
/// With `S₁` and `P` the cached cumulative integrals of the root edge, the
/// contribution at root coordinate `x` is
///
/// * root edge in the tree: `c · e^{2S₁(x) - S₁(ℓ)}`,
/// * root edge cut: `h · e^{2S₁(x) - S₁(ℓ)} P(x)
///   + t · e^{2S₁(x) + S₁(ℓ)} (P(ℓ) - P(x))`,
///
/// all divided by `σ²(x)`. The scalars fold the node-weight products, the
/// signed exponentials of the other tree edges, and the gate integrals of
/// the other cut edges.
#[derive(Debug, Clone)]
pub struct TreeFactorization {
    pub tree_index: usize,
    pub root_edge: EdgeId,
    pub case: RootEdgeCase,
}

#[derive(Debug, Clone, Copy)]
pub enum RootEdgeCase {
    /// The root edge belongs to the spanning tree (it is not cut).
    InTree { coefficient: f64 },
    /// The root edge is a complement edge and carries a cut; the two
    /// scalars weigh the cut-below-root and cut-above-root sub-cases.
    Cut { head_side: f64, tail_side: f64 },
}

impl TreeFactorization {
    fn build(model: &Model, trees: &[SpanningTree], tree_index: usize, root_edge: EdgeId) -> Self {
        let graph = &model.graph;
        let tree = &trees[tree_index];
        let edge = graph.edge(root_edge);
        let gates = |skip: Option<EdgeId>| -> f64 {
            tree.complement
                .iter()
                .filter(|e| Some(**e) != skip)
                .map(|e| model.profile(*e).gate())
                .product()
        };
        // Node-weight product and signed tree-edge exponential for a given
        // assignment of exit germs (anchors patched in by the caller).
        let assemble = |exit: &[Option<Germ>], anchors: &[(VertexId, Germ)]| -> f64 {
            let mut product = 1.0;
            let mut exponent = 0.0;
            for v in graph.vertices() {
                let germ = anchors
                    .iter()
                    .find(|(a, _)| *a == v)
                    .map(|(_, g)| *g)
                    .or(exit[v.0])
                    .expect("vertex oriented");
                product *= model.w_plus(germ);
                if germ.edge != root_edge {
                    let total = model.profile(germ.edge).s1_total();
                    exponent += match germ.end {
                        End::Tail => total,
                        End::Head => -total,
                    };
                }
            }
            product * exponent.exp()
        };

        let case = if tree.tree.contains(&root_edge) {
            let rest: Vec<EdgeId> = tree
                .tree
                .iter()
                .copied()
                .filter(|e| *e != root_edge)
                .collect();
            let exit = graph
                .orient_toward(&rest, &[edge.tail, edge.head])
                .expect("spanning tree splits into two components at the root edge");
            let anchors = [
                (
                    edge.tail,
                    Germ {
                        edge: root_edge,
                        end: End::Tail,
                    },
                ),
                (
                    edge.head,
                    Germ {
                        edge: root_edge,
                        end: End::Head,
                    },
                ),
            ];
            RootEdgeCase::InTree {
                coefficient: assemble(&exit, &anchors) * gates(None),
            }
        } else {
            let gates = gates(Some(root_edge));
            let toward_head = graph
                .orient_toward(&tree.tree, &[edge.head])
                .expect("spanning tree reaches every vertex");
            let head_side = assemble(
                &toward_head,
                &[(
                    edge.head,
                    Germ {
                        edge: root_edge,
                        end: End::Head,
                    },
                )],
            ) * gates;
            let toward_tail = graph
                .orient_toward(&tree.tree, &[edge.tail])
                .expect("spanning tree reaches every vertex");
            let tail_side = assemble(
                &toward_tail,
                &[(
                    edge.tail,
                    Germ {
                        edge: root_edge,
                        end: End::Tail,
                    },
                )],
            ) * gates;
            RootEdgeCase::Cut {
                head_side,
                tail_side,
            }
        };
        Self {
            tree_index,
            root_edge,
            case,
        }
    }

    /// Contribution of this tree to `m_e(x)` (the `1/σ²(x)` root factor
    /// included).
    pub fn contribution(&self, model: &Model, x: f64) -> f64 {
        let profile = model.profile(self.root_edge);
        let s1x = profile.s1(x);
        let total = profile.s1_total();
        let value = match self.case {
            RootEdgeCase::InTree { coefficient } => coefficient * (2.0 * s1x - total).exp(),
            RootEdgeCase::Cut {
                head_side,
                tail_side,
            } => {
                head_side * (2.0 * s1x - total).exp() * profile.p(x)
                    + tail_side * (2.0 * s1x + total).exp() * (profile.p_total() - profile.p(x))
            }
        };
        value / profile.sigma2(x)
    }

    /// The `(k₁, k₂)` pair of this contribution in the closed density form
    /// `(k₁ + k₂ P(x)) e^{2S₁(x)}/σ²(x)`.
    fn density_coeffs(&self, model: &Model) -> (f64, f64) {
        let profile = model.profile(self.root_edge);
        let total = profile.s1_total();
        match self.case {
            RootEdgeCase::InTree { coefficient } => (coefficient * (-total).exp(), 0.0),
            RootEdgeCase::Cut {
                head_side,
                tail_side,
            } => {
                let up = tail_side * total.exp();
                (up * profile.p_total(), head_side * (-total).exp() - up)
            }
        }
    }
}

/// Weight `R(τ) = e^{∫_τ s} / σ²(x) · Π_v 𝒲_v(τ)` of a metric arborescence.
///
/// Oriented segments contribute `S₁(to) - S₁(from)` each; every vertex
/// contributes `W⁺ = K_v α_{v,e}` through its unique exiting germ, entering
/// germs weigh one.
pub fn arborescence_weight(model: &Model, arb: &Arborescence) -> f64 {
    let mut exponent = 0.0;
    for seg in &arb.segments {
        exponent += model.profile(seg.edge).oriented_integral(seg.from, seg.to);
    }
    let mut product = 1.0;
    for germ in &arb.exit_germ {
        product *= model.w_plus(*germ);
    }
    let root_profile = model.profile(arb.root.edge);
    exponent.exp() * product / root_profile.sigma2(arb.root.coordinate)
}

/// The arborescence measure of a model: factorized per-edge evaluators, the
/// brute-force oracle, vertex atoms, currents, and the assembled measure.
#[derive(Debug)]
pub struct TreeMeasure<'a> {
    model: &'a Model,
    trees: Vec<SpanningTree>,
    factors: Vec<Vec<TreeFactorization>>,
}

impl<'a> TreeMeasure<'a> {
    pub fn new(model: &'a Model) -> Self {
        let trees = model.graph.spanning_trees();
        let factors = model
            .graph
            .edge_ids()
            .map(|e| {
                (0..trees.len())
                    .map(|t| TreeFactorization::build(model, &trees, t, e))
                    .collect()
            })
            .collect();
        Self {
            model,
            trees,
            factors,
        }
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn trees(&self) -> &[SpanningTree] {
        &self.trees
    }

    pub fn factorizations(&self, e: EdgeId) -> &[TreeFactorization] {
        &self.factors[e.0]
    }

    /// Unnormalized density `m_e(x)` via the factorized evaluation.
    pub fn density(&self, e: EdgeId, x: f64) -> f64 {
        self.factors[e.0]
            .iter()
            .map(|f| f.contribution(self.model, x))
            .sum()
    }

    /// Unnormalized density by full tensor-product quadrature over the cut
    /// positions, without the factorization. Guarded by
    /// [`BRUTEFORCE_MAX_DIM`].
    pub fn density_bruteforce(&self, e: EdgeId, x: f64) -> Result<f64, MeasureError> {
        let dim = self.model.graph.cut_space_dimension();
        if dim > BRUTEFORCE_MAX_DIM {
            return Err(MeasureError::DimensionGuard {
                dim,
                max: BRUTEFORCE_MAX_DIM,
            });
        }
        let mut total = 0.0;
        for tree in &self.trees {
            total += self.tree_contribution_bruteforce(tree, e, x)?;
        }
        Ok(total)
    }

    /// Brute-force counterpart of [`TreeFactorization::contribution`] for a
    /// single spanning tree.
    pub fn tree_contribution_bruteforce(
        &self,
        tree: &SpanningTree,
        e: EdgeId,
        x: f64,
    ) -> Result<f64, MeasureError> {
        let root = PointOnEdge {
            edge: e,
            coordinate: x,
        };
        // Integration domains: one axis per complement edge; the root
        // edge's axis is split at x where the integrand switches branch.
        let mut axes: Vec<QuadratureAxis> = Vec::new();
        for &f in &tree.complement {
            let len = self.model.graph.edge(f).length;
            if f == e {
                axes.push((f, vec![(0.0, x), (x, len)]));
            } else {
                axes.push((f, vec![(0.0, len)]));
            }
        }
        let integrand = |cuts: &[(EdgeId, f64)]| -> f64 {
            let cut_set = self
                .model
                .graph
                .cut_set(cuts.to_vec())
                .expect("interior cuts");
            let arb = self
                .model
                .graph
                .arborescence(tree, &cut_set, root)
                .expect("valid arborescence");
            arborescence_weight(self.model, &arb)
        };
        tensor_quadrature(&axes, &integrand)
    }

    /// Atom scale `λ_v` of a vertex: half the boundary limit of
    /// `σ²_e m_e / α_{v,e}`, which must come out the same through every
    /// incident germ. Disagreement beyond `1e-6` relative is reported as a
    /// numerical-consistency failure.
    pub fn vertex_atom_scale(&self, v: VertexId) -> Result<f64, MeasureError> {
        let mut values = Vec::new();
        for germ in self.model.graph.germs_at(v) {
            let profile = self.model.profile(germ.edge);
            let coord = match germ.end {
                End::Tail => 0.0,
                End::Head => profile.length(),
            };
            let m = self.density(germ.edge, coord);
            values.push(profile.sigma2(coord) * m / self.model.params.germ_alpha(*germ));
        }
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        let spread = (max - min) / max.abs().max(1e-300);
        if spread > GERM_AGREEMENT_TOL {
            return Err(MeasureError::GermMismatch {
                vertex: self.model.graph.vertex_name(v).to_string(),
                spread,
                values,
            });
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(0.5 * mean)
    }

    /// The normalized invariant measure: atoms `λ_v α_v / Z` and densities
    /// `m_e / Z`.
    pub fn invariant_measure(&self) -> Result<Measure, MeasureError> {
        let mut atoms_raw = Vec::with_capacity(self.model.graph.vertex_count());
        for v in self.model.graph.vertices() {
            let alpha = self.model.params.alpha_vertex(v);
            if alpha == 0.0 {
                // still run the germ cross-check, but the atom vanishes exactly
                self.vertex_atom_scale(v)?;
                atoms_raw.push(0.0);
            } else {
                atoms_raw.push(self.vertex_atom_scale(v)? * alpha);
            }
        }
        let coeffs_raw: Vec<(f64, f64)> = self
            .model
            .graph
            .edge_ids()
            .map(|e| {
                let mut k1 = 0.0;
                let mut k2 = 0.0;
                for factor in &self.factors[e.0] {
                    let (a, b) = factor.density_coeffs(self.model);
                    k1 += a;
                    k2 += b;
                }
                (k1, k2)
            })
            .collect();
        Ok(Measure::from_raw(self.model, atoms_raw, coeffs_raw))
    }

    /// Constant probability current through `e` of the unnormalized measure
    /// `m`, from the paired unicyclic spanning subgraphs whose cycle passes
    /// through `e`. Positive along the canonical orientation of `e`;
    /// bridges carry zero current.
    pub fn edge_current_unicyclic(&self, e: EdgeId) -> f64 {
        let mut current = 0.0;
        for sub in self.model.graph.unicyclic_subgraphs(e) {
            let w = self.unicyclic_weight(&sub);
            if sub.traverses_canonically(e) {
                current += 0.5 * w;
            } else {
                current -= 0.5 * w;
            }
        }
        current
    }

    /// Weight of one oriented unicyclic spanning subgraph with its cut
    /// edges integrated out: gates × signed exponential × node weights.
    fn unicyclic_weight(&self, sub: &UnicyclicSubgraph) -> f64 {
        let gates: f64 = sub
            .cut_edges
            .iter()
            .map(|f| self.model.profile(*f).gate())
            .product();
        // Each edge of the subgraph is the exit germ of exactly one vertex,
        // so exponent and node product assemble in a single pass.
        let mut exponent = 0.0;
        let mut product = 1.0;
        for germ in &sub.exit_germ {
            product *= self.model.w_plus(*germ);
            let total = self.model.profile(germ.edge).s1_total();
            exponent += match germ.end {
                End::Tail => total,
                End::Head => -total,
            };
        }
        gates * exponent.exp() * product
    }
}

/// Ring closed form: for the single-vertex single-loop graph of length `ℓ`,
/// the unnormalized density `m(x) = σ⁻²(x) ∫_x^{x+ℓ} e^{S(x) - S(y)} dy`
/// with `S = 2S₁` extended periodically. Evaluated by direct quadrature.
pub fn ring_density_closed_form(model: &Model, x: f64) -> Result<f64, MeasureError> {
    let profile = ring_profile(model)?;
    let len = profile.length();
    let sx = 2.0 * profile.s1(x);
    let stot = 2.0 * profile.s1_total();
    let upper = integrate(
        |y| (sx - 2.0 * profile.s1(y)).exp(),
        x,
        len,
        &model.numerics.quad,
    )?;
    let wrapped = integrate(
        |y| (sx - 2.0 * profile.s1(y) - stot).exp(),
        0.0,
        x,
        &model.numerics.quad,
    )?;
    Ok((upper + wrapped) / profile.sigma2(x))
}

/// Total mass of the ring closed form, for normalization.
pub fn ring_closed_form_mass(model: &Model) -> Result<f64, MeasureError> {
    let profile = ring_profile(model)?;
    let len = profile.length();
    // adaptive in x over a pointwise-quadrature integrand is wasteful; a
    // fixed fine composite rule is plenty at these tolerances
    let rule = crate::coeffs::GaussLegendre::new(32);
    let panels = 16;
    let mut total = 0.0;
    for k in 0..panels {
        let a = len * k as f64 / panels as f64;
        let b = len * (k + 1) as f64 / panels as f64;
        total += rule.integrate_panel(a, b, |x| {
            ring_density_closed_form(model, x).expect("ring density evaluation")
        });
    }
    Ok(total)
}

fn ring_profile(model: &Model) -> Result<&crate::coeffs::EdgeProfile, MeasureError> {
    if model.graph.vertex_count() != 1 || model.graph.edge_count() != 1 {
        return Err(MeasureError::NotARing);
    }
    Ok(model.profile(EdgeId(0)))
}

/// One integration axis of the brute-force cut integral: the edge being
/// cut, and the pieces of its coordinate range (two when split at the root).
type QuadratureAxis = (EdgeId, Vec<(f64, f64)>);

/// A tuple of cut positions passed to the brute-force integrand.
type CutPoints = [(EdgeId, f64)];

/// Tensor-product quadrature over a list of axes, each split into one or
/// more panels, with uniform panel doubling until two successive estimates
/// agree. Zero axes means a plain evaluation of the integrand.
fn tensor_quadrature(
    axes: &[QuadratureAxis],
    integrand: &dyn Fn(&CutPoints) -> f64,
) -> Result<f64, MeasureError> {
    if axes.is_empty() {
        return Ok(integrand(&[]));
    }
    let rule = crate::coeffs::GaussLegendre::new(16);
    let mut prev: Option<f64> = None;
    let mut panels = 1usize;
    for _ in 0..=6 {
        let mut point = Vec::with_capacity(axes.len());
        let value = tensor_recurse(axes, 0, panels, &rule, integrand, &mut point);
        if let Some(p) = prev {
            if (value - p).abs() <= 1e-11 * f64::max(1.0, value.abs()) {
                return Ok(value);
            }
        }
        prev = Some(value);
        panels *= 2;
    }
    // smooth integrands converge well before the cap; surface the defect
    Err(MeasureError::Quad(
        crate::coeffs::QuadError::NoConvergence {
            a: 0.0,
            b: 0.0,
            refinements: 6,
            delta: f64::NAN,
            tol: 1e-11,
        },
    ))
}

fn tensor_recurse(
    axes: &[QuadratureAxis],
    depth: usize,
    panels: usize,
    rule: &crate::coeffs::GaussLegendre,
    integrand: &dyn Fn(&CutPoints) -> f64,
    point: &mut Vec<(EdgeId, f64)>,
) -> f64 {
    if depth == axes.len() {
        return integrand(point);
    }
    let (edge, ref pieces) = axes[depth];
    let mut sum = 0.0;
    for &(a, b) in pieces {
        if b <= a {
            continue;
        }
        let h = (b - a) / panels as f64;
        for k in 0..panels {
            let lo = a + k as f64 * h;
            sum += rule.integrate_panel(lo, lo + h, |y| {
                point.push((edge, y));
                let v = tensor_recurse(axes, depth + 1, panels, rule, integrand, point);
                point.pop();
                v
            });
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{EdgeProfile, VertexParams};
    use crate::graph::{MetricEdge, MetricGraph};
    use crate::model::NumericsOptions;

    fn ring_model(b: &str, sigma: &str) -> Model {
        let graph = MetricGraph::new(
            vec!["v".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(0),
                length: 1.0,
            }],
        )
        .unwrap();
        let numerics = NumericsOptions::default();
        let profile = EdgeProfile::from_strs(b, sigma, 1.0, &numerics.quad).unwrap();
        let params = VertexParams::uniform(&graph);
        Model::new(graph, vec![profile], params, numerics).unwrap()
    }

    fn interval_model(b: &str, sigma: &str) -> Model {
        let graph = MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(1),
                length: 1.0,
            }],
        )
        .unwrap();
        let numerics = NumericsOptions::default();
        let profile = EdgeProfile::from_strs(b, sigma, 1.0, &numerics.quad).unwrap();
        let params = VertexParams::uniform(&graph);
        Model::new(graph, vec![profile], params, numerics).unwrap()
    }

    #[test]
    fn flat_ring_density_is_constant() {
        let model = ring_model("0", "1");
        let tm = TreeMeasure::new(&model);
        for x in [0.05, 0.3, 0.62, 0.99] {
            let m = tm.density(EdgeId(0), x);
            assert!((m - 1.0).abs() < 1e-10, "x={x}: {m}");
        }
    }

    #[test]
    fn constant_s_ring_density_is_uniform_with_current() {
        // s constant: the integrand depends on y - x only, so m is constant
        let model = ring_model("0.8", "1");
        let tm = TreeMeasure::new(&model);
        let reference = tm.density(EdgeId(0), 0.123);
        for x in [0.31, 0.5, 0.77] {
            assert!((tm.density(EdgeId(0), x) - reference).abs() < 1e-9 * reference);
        }
        let c = 0.8;
        let expected = 0.5 * (f64::exp(c) - f64::exp(-c));
        let j = tm.edge_current_unicyclic(EdgeId(0));
        assert!(
            (j - expected).abs() < 1e-10 * expected.abs(),
            "{j} vs {expected}"
        );
    }

    #[test]
    fn ring_weight_matches_hand_integration() {
        // b = c, sigma = 1: root x, cut y < x gives
        // e^{c(x-y)} · e^{-c(1-(x-y))} (germ weights are one)
        let model = ring_model("0.6", "1");
        let (x, y) = (0.7, 0.25);
        let tree = &model.graph.spanning_trees()[0];
        let cuts = model.graph.cut_set(vec![(EdgeId(0), y)]).unwrap();
        let arb = model
            .graph
            .arborescence(
                tree,
                &cuts,
                PointOnEdge {
                    edge: EdgeId(0),
                    coordinate: x,
                },
            )
            .unwrap();
        let w = arborescence_weight(&model, &arb);
        let c = 0.6;
        let expected = (c * (x - y)).exp() * (-c * (1.0 - (x - y))).exp();
        assert!((w - expected).abs() < 1e-12, "{w} vs {expected}");
    }

    #[test]
    fn unit_weight_reduces_to_root_factor() {
        let model = interval_model("0", "2");
        let tree = &model.graph.spanning_trees()[0];
        let cuts = model.graph.cut_set(vec![]).unwrap();
        let arb = model
            .graph
            .arborescence(
                tree,
                &cuts,
                PointOnEdge {
                    edge: EdgeId(0),
                    coordinate: 0.4,
                },
            )
            .unwrap();
        let w = arborescence_weight(&model, &arb);
        assert!((w - 0.25).abs() < 1e-14, "{w}");
    }

    #[test]
    fn interval_bruteforce_equals_single_weight() {
        let model = interval_model("-x", "1");
        let tm = TreeMeasure::new(&model);
        let x = 0.35;
        let direct = tm.density(EdgeId(0), x);
        let brute = tm.density_bruteforce(EdgeId(0), x).unwrap();
        assert!((direct - brute).abs() < 1e-11 * direct.max(1.0));
    }

    #[test]
    fn ring_factorization_matches_bruteforce() {
        let model = ring_model("1 + 0.3*sin(2*pi*x)", "1");
        let tm = TreeMeasure::new(&model);
        for x in [0.1, 0.45, 0.8] {
            let fast = tm.density(EdgeId(0), x);
            let brute = tm.density_bruteforce(EdgeId(0), x).unwrap();
            assert!(
                (fast - brute).abs() < 1e-9 * fast.abs().max(1.0),
                "x={x}: {fast} {brute}"
            );
        }
    }

    #[test]
    fn ring_closed_form_matches_factorized_density() {
        let model = ring_model("1 + 0.3*sin(2*pi*x)", "1");
        let tm = TreeMeasure::new(&model);
        let measure = tm.invariant_measure().unwrap();
        let mass = ring_closed_form_mass(&model).unwrap();
        for k in 1..16 {
            let x = k as f64 / 16.0;
            let lhs = measure.density(&model, EdgeId(0), x);
            let rhs = ring_density_closed_form(&model, x).unwrap() / mass;
            assert!((lhs - rhs).abs() < 1e-8 * rhs.abs(), "x={x}: {lhs} {rhs}");
        }
    }

    #[test]
    fn flat_ring_has_zero_current() {
        let model = ring_model("0", "1");
        let tm = TreeMeasure::new(&model);
        assert!(tm.edge_current_unicyclic(EdgeId(0)).abs() < 1e-14);
    }

    #[test]
    fn bridge_current_vanishes() {
        let model = interval_model("0.4", "1");
        let tm = TreeMeasure::new(&model);
        assert_eq!(tm.edge_current_unicyclic(EdgeId(0)), 0.0);
    }

    #[test]
    fn uniform_interval_measure() {
        let model = interval_model("0", "1");
        let tm = TreeMeasure::new(&model);
        let measure = tm.invariant_measure().unwrap();
        assert_eq!(measure.atoms, vec![0.0, 0.0]);
        for x in [0.0, 0.33, 1.0] {
            assert!((measure.density(&model, EdgeId(0), x) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn interval_atom_scales_are_symmetric() {
        let model = interval_model("0", "1");
        let tm = TreeMeasure::new(&model);
        let a = tm.vertex_atom_scale(VertexId(0)).unwrap();
        let b = tm.vertex_atom_scale(VertexId(1)).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn ring_atom_scale_sees_both_loop_germs_agree() {
        let model = ring_model("1 + 0.3*sin(2*pi*x)", "1");
        let tm = TreeMeasure::new(&model);
        tm.vertex_atom_scale(VertexId(0)).unwrap();
    }
}
