//! Composite Gauss–Legendre quadrature with panel-doubling refinement.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("quadrature did not converge on [{a}, {b}] after {refinements} refinements (last delta {delta:.3e}, tol {tol:.3e})")]
    NoConvergence {
        a: f64,
        b: f64,
        refinements: usize,
        delta: f64,
        tol: f64,
    },
    #[error("invalid interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
}

/// Gauss–Legendre rule of a given order on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes nodes and weights by Newton iteration on the Legendre
    /// recurrence. Orders up to a few hundred stay accurate to ~1e-15.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi-style initial guess for the i-th positive root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            let (_, d) = legendre_with_derivative(n, 0.0);
            nodes[n / 2] = 0.0;
            weights[n / 2] = 2.0 / (d * d);
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// One-panel integral of `f` over [a, b].
    pub fn integrate_panel<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * t);
        }
        sum * half
    }

    fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, f: &mut F) -> f64 {
        let h = (b - a) / panels as f64;
        let mut sum = 0.0;
        for k in 0..panels {
            sum += self.integrate_panel(a + k as f64 * h, a + (k + 1) as f64 * h, &mut *f);
        }
        sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integration controls shared by all quadrature call sites.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub tol: f64,
    pub base_order: usize,
    pub max_refinements: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            base_order: 16,
            max_refinements: 12,
        }
    }
}

/// Adaptive integral of `f` over [a, b]: composite Gauss–Legendre panels,
/// doubled until two successive estimates agree to within `tol` relative.
///
/// The sign convention is the usual oriented one: callers that integrate
/// against an orientation negate the result themselves.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<f64, QuadError> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(QuadError::BadInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(opts.base_order);
    let mut panels = 1usize;
    let mut prev = rule.composite(a, b, panels, &mut f);
    for _ in 0..opts.max_refinements {
        panels *= 2;
        let next = rule.composite(a, b, panels, &mut f);
        let delta = (next - prev).abs();
        if delta <= opts.tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    let next = rule.composite(a, b, panels * 2, &mut f);
    let delta = (next - prev).abs();
    if delta <= opts.tol * next.abs().max(1.0) {
        return Ok(next);
    }
    Err(QuadError::NoConvergence {
        a,
        b,
        refinements: opts.max_refinements,
        delta,
        tol: opts.tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_symmetric_and_weights_sum_to_two() {
        for order in [1, 2, 3, 8, 16, 33, 64] {
            let rule = GaussLegendre::new(order);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "order {order}: {wsum}");
            for i in 0..order {
                assert!((rule.nodes[i] + rule.nodes[order - 1 - i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exact_on_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(5);
        // degree 9: x^9 integrates to 0 on [-1,1]; x^8 to 2/9
        let v9 = rule.integrate_panel(-1.0, 1.0, |x| x.powi(9));
        assert!(v9.abs() < 1e-14);
        let v8 = rule.integrate_panel(-1.0, 1.0, |x| x.powi(8));
        assert!((v8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_constants_exactly() {
        let opts = QuadOptions::default();
        let v = integrate(|_| 1.0, 0.0, 1.0, &opts).unwrap();
        assert!((v - 1.0).abs() < 1e-15, "{v}");
    }

    #[test]
    fn full_period_of_sine_vanishes() {
        let opts = QuadOptions::default();
        let v = integrate(|x| (2.0 * std::f64::consts::PI * x).sin(), 0.0, 1.0, &opts).unwrap();
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn matches_closed_form_for_exp() {
        let opts = QuadOptions::default();
        let v = integrate(f64::exp, 0.0, 1.0, &opts).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_is_zero_and_reversed_is_error() {
        let opts = QuadOptions::default();
        assert_eq!(integrate(f64::exp, 0.3, 0.3, &opts).unwrap(), 0.0);
        assert!(matches!(
            integrate(f64::exp, 1.0, 0.0, &opts),
            Err(QuadError::BadInterval { .. })
        ));
    }

    #[test]
    fn reports_nonconvergence_when_refinements_run_out() {
        let opts = QuadOptions {
            tol: 1e-14,
            base_order: 1,
            max_refinements: 2,
        };
        let jump = |x: f64| {
            if x < std::f64::consts::FRAC_1_PI {
                0.0
            } else {
                1.0
            }
        };
        assert!(matches!(
            integrate(jump, 0.0, 1.0, &opts),
            Err(QuadError::NoConvergence { .. })
        ));
    }
}
