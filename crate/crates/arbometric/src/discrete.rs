//! Finite chains and the ring scaling limit.
//!
//! [`mctt_stationary`] computes the invariant distribution of a finite
//! irreducible chain as the normalized sum of arborescence weights (product
//! of the rates of the edges of each in-tree), and [`stationary_linear`]
//! solves the balance equations directly; each oracles the other.
//!
//! The scaling-limit pipeline builds the family of diffusive nearest-
//! neighbour walks on the ring from a macroscopic `(b, σ)` pair and a gauge
//! field `F`: vertex weights `α`, symmetric edge weights `Q`, and the
//! antisymmetric discretized field, with rates `r(x, y) = α(x) Q(x,y)
//! e^{F(x,y)}` rescaled by `N²`. The stationary distribution of the walk,
//! converted to a density, converges to the ring closed form as the mesh
//! refines, and distinct admissible gauges converge to the same limit.

use crate::coeffs::{CumulativeTable, InterpError};
use crate::coeffs::{EdgeProfile, Expression, QuadOptions};
use crate::graph::EdgeId;
use crate::linalg::{lu_solve, DenseMatrix, LinalgError};
use crate::model::Model;
use crate::treemeasure;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("transition {from} -> {to} has nonpositive rate {rate}")]
    BadRate { from: usize, to: usize, rate: f64 },
    #[error("transition references state {state}, chain has {n_states}")]
    BadState { state: usize, n_states: usize },
    #[error("transition graph is not strongly connected")]
    NotStronglyConnected,
    #[error("balance equations are singular beyond the expected rank deficiency")]
    Singular(#[from] LinalgError),
}

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error("field does not integrate to ∫s over the ring: ∫F = {field}, ∫s = {s}")]
    GaugeConstraint { field: f64, s: f64 },
    #[error("mesh must have at least 3 sites, got {0}")]
    MeshTooCoarse(usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Measure(#[from] treemeasure::MeasureError),
    #[error(transparent)]
    Expr(#[from] crate::coeffs::ExprError),
}

/// A finite continuous-time chain given by positive directed rates on a
/// strongly connected transition graph.
#[derive(Debug, Clone)]
pub struct FiniteChain {
    n_states: usize,
    transitions: Vec<(usize, usize, f64)>,
}

impl FiniteChain {
    pub fn new(n_states: usize, transitions: Vec<(usize, usize, f64)>) -> Result<Self, ChainError> {
        for &(from, to, rate) in &transitions {
            if from >= n_states || to >= n_states {
                return Err(ChainError::BadState {
                    state: from.max(to),
                    n_states,
                });
            }
            if !(rate.is_finite() && rate > 0.0) {
                return Err(ChainError::BadRate { from, to, rate });
            }
        }
        let chain = Self {
            n_states,
            transitions,
        };
        if !chain.strongly_connected() {
            return Err(ChainError::NotStronglyConnected);
        }
        Ok(chain)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn transitions(&self) -> &[(usize, usize, f64)] {
        &self.transitions
    }

    fn strongly_connected(&self) -> bool {
        if self.n_states == 0 {
            return false;
        }
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; self.n_states];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for &(from, to, _) in &self.transitions {
                    let (a, b) = if forward { (from, to) } else { (to, from) };
                    if a == v && !seen[b] {
                        seen[b] = true;
                        count += 1;
                        stack.push(b);
                    }
                }
            }
            count
        };
        reach(true) == self.n_states && reach(false) == self.n_states
    }
}

/// Stationary distribution from the balance equations
/// `π(x) Σ_y r(x,y) = Σ_y π(y) r(y,x)` plus normalization.
pub fn stationary_linear(chain: &FiniteChain) -> Result<Vec<f64>, ChainError> {
    let n = chain.n_states();
    let mut a = DenseMatrix::zeros(n, n);
    for &(from, to, rate) in chain.transitions() {
        if from == to {
            continue;
        }
        a.add(from, from, -rate);
        a.add(to, from, rate);
    }
    // replace the redundant last balance row with normalization
    for j in 0..n {
        a.set(n - 1, j, 1.0);
    }
    let mut rhs = vec![0.0; n];
    rhs[n - 1] = 1.0;
    Ok(lu_solve(a, &rhs)?)
}

/// Stationary distribution as the normalized arborescence-weight sums of
/// the Markov chain tree theorem.
pub fn mctt_stationary(chain: &FiniteChain) -> Vec<f64> {
    let n = chain.n_states();
    let mut weights = vec![0.0; n];
    for (root, weight) in weights.iter_mut().enumerate() {
        for arb in arborescences_toward(chain, root) {
            *weight += arb
                .iter()
                .map(|&t| chain.transitions()[t].2)
                .product::<f64>();
        }
    }
    let z: f64 = weights.iter().sum();
    weights.iter().map(|w| w / z).collect()
}

/// All arborescences of the transition graph oriented toward `root`, each
/// as a list of transition indices (one exiting edge per non-root state).
pub fn arborescences_toward(chain: &FiniteChain, root: usize) -> Vec<Vec<usize>> {
    let n = chain.n_states();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, &(from, to, _)) in chain.transitions().iter().enumerate() {
        if from != to {
            out_edges[from].push(idx);
        }
    }
    let states: Vec<usize> = (0..n).filter(|&s| s != root).collect();
    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut found = Vec::new();
    assign(chain, root, &states, 0, &mut choice, &mut found, &out_edges);
    found
}

fn assign(
    chain: &FiniteChain,
    root: usize,
    states: &[usize],
    depth: usize,
    choice: &mut Vec<Option<usize>>,
    found: &mut Vec<Vec<usize>>,
    out_edges: &[Vec<usize>],
) {
    if depth == states.len() {
        found.push(states.iter().map(|&s| choice[s].unwrap()).collect());
        return;
    }
    let state = states[depth];
    for &edge in &out_edges[state] {
        choice[state] = Some(edge);
        // walk the chosen edges from `state`; a return to `state` is a cycle
        let mut at = chain.transitions()[edge].1;
        let mut ok = true;
        while at != root {
            match choice[at] {
                Some(e) => {
                    at = chain.transitions()[e].1;
                    if at == state {
                        ok = false;
                        break;
                    }
                }
                None => break,
            }
        }
        if ok {
            assign(chain, root, states, depth + 1, choice, found, out_edges);
        }
    }
    choice[state] = None;
}

/// A microscopic model of the diffusive walk: vertex weights `α`, edge
/// weights `Q`, and the gauge field `F`, all periodic over the ring.
#[derive(Debug)]
pub struct MicroTriple {
    c: f64,
    length: f64,
    profile: EdgeProfile,
    /// `∫₀ˣ 2 (s - F)` — the exponent shared by `Q` and `α`.
    exponent: CumulativeTable,
    /// `∫₀ˣ F` for the antisymmetric field discretization.
    field_cumulative: CumulativeTable,
}

impl MicroTriple {
    /// `Q(x) = c e^{∫2(s-F)}` evaluated with `x` wrapped into the ring.
    pub fn q(&self, x: f64) -> f64 {
        self.c * self.exponent.eval(self.wrap(x)).exp()
    }

    /// `α(x) = σ²(x) / (2c) e^{-∫2(s-F)}`.
    pub fn alpha(&self, x: f64) -> f64 {
        let x = self.wrap(x);
        self.profile.sigma2(x) / (2.0 * self.c) * (-self.exponent.eval(x)).exp()
    }

    /// Oriented field integral `∫_a^b F` for `0 ≤ a ≤ b ≤ ℓ`.
    pub fn field_integral(&self, a: f64, b: f64) -> f64 {
        self.field_cumulative.eval(b) - self.field_cumulative.eval(a)
    }

    fn wrap(&self, x: f64) -> f64 {
        let mut x = x % self.length;
        if x < 0.0 {
            x += self.length;
        }
        x
    }
}

/// Solves the inverse parametrization on the ring: given the macroscopic
/// `(b, σ)` of `profile`, a gauge field `F` with `∫F = ∫s`, and a positive
/// constant `c`, returns the unique microscopic triple.
pub fn micro_from_macro(
    profile: &EdgeProfile,
    field: &Expression,
    c: f64,
    opts: &QuadOptions,
) -> Result<MicroTriple, ScalingError> {
    assert!(c > 0.0, "c must be positive");
    let length = profile.length();
    let field_cumulative =
        CumulativeTable::build(|x| field.eval(x).unwrap_or(f64::NAN), 0.0, length, opts)?;
    let s_total = profile.s1_total();
    let f_total = field_cumulative.total();
    if (f_total - s_total).abs() > 1e-8 * s_total.abs().max(1.0) {
        return Err(ScalingError::GaugeConstraint {
            field: f_total,
            s: s_total,
        });
    }
    let exponent = CumulativeTable::build(
        |x| 2.0 * (profile.s(x) - field.eval(x).unwrap_or(f64::NAN)),
        0.0,
        length,
        opts,
    )?;
    Ok(MicroTriple {
        c,
        length,
        profile: profile.clone(),
        exponent,
        field_cumulative,
    })
}

/// The nearest-neighbour walk on the ring with `n` sites of mesh `ℓ/n`:
/// rates `α(x) Q(midpoint) e^{±F_N}` under diffusive rescaling by `n²`.
pub fn ring_walk(micro: &MicroTriple, n: usize) -> Result<FiniteChain, ScalingError> {
    if n < 3 {
        return Err(ScalingError::MeshTooCoarse(n));
    }
    let h = micro.length / n as f64;
    let scale = (n * n) as f64;
    let mut transitions = Vec::with_capacity(2 * n);
    // one pass per lattice edge [ih, (i+1)h]; the field integral is shared
    // with opposite signs so F_N stays antisymmetric exactly
    for i in 0..n {
        let a = i as f64 * h;
        let b = a + h;
        let f_edge = micro.field_integral(a, b);
        let q_mid = micro.q(a + 0.5 * h);
        let to = (i + 1) % n;
        transitions.push((i, to, micro.alpha(a) * q_mid * f_edge.exp() * scale));
        transitions.push((to, i, micro.alpha(b) * q_mid * (-f_edge).exp() * scale));
    }
    Ok(FiniteChain::new(n, transitions)?)
}

/// Sup-norm distance between the walk's stationary distribution (converted
/// to a density by the factor `n/ℓ`) and the normalized ring closed form,
/// over the lattice points.
pub fn scaling_error(
    model: &Model,
    field: &Expression,
    c: f64,
    n: usize,
) -> Result<f64, ScalingError> {
    let profile = model.profile(EdgeId(0));
    let micro = micro_from_macro(profile, field, c, &model.numerics.quad)?;
    let walk = ring_walk(&micro, n)?;
    let pi = stationary_linear(&walk)?;
    let mass = treemeasure::ring_closed_form_mass(model)?;
    let h = profile.length() / n as f64;
    let mut sup = 0.0_f64;
    for (i, &p) in pi.iter().enumerate() {
        let x = i as f64 * h;
        let continuous = treemeasure::ring_density_closed_form(model, x)? / mass;
        let density = p * n as f64 / profile.length();
        sup = sup.max((density - continuous).abs());
    }
    Ok(sup)
}
