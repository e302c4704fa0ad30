//! Cached cumulative integrals on Chebyshev–Lobatto grids.
//!
//! `CumulativeTable` stores `F(x) = ∫_a^x f(y) dy` at Lobatto nodes and
//! evaluates anywhere in `[a, b]` by barycentric interpolation. Node counts
//! double until the interpolant reproduces a finer table to within the
//! requested tolerance, so smooth integrands converge spectrally.

use super::quad::{integrate, QuadError, QuadOptions};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InterpError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("integrand produced a non-finite value while tabulating on [{a}, {b}]")]
    NonFinite { a: f64, b: f64 },
    #[error(
        "cumulative table did not stabilize at {max_nodes} nodes (error {err:.3e}, tol {tol:.3e})"
    )]
    NotResolved {
        max_nodes: usize,
        err: f64,
        tol: f64,
    },
}

#[derive(Debug, Clone)]
pub struct CumulativeTable {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

const START_SEGMENTS: usize = 16;
const MAX_SEGMENTS: usize = 1024;

impl CumulativeTable {
    /// Tabulates `∫_a^x f` for `x` in `[a, b]`.
    pub fn build<F: FnMut(f64) -> f64>(
        mut f: F,
        a: f64,
        b: f64,
        opts: &QuadOptions,
    ) -> Result<Self, InterpError> {
        assert!(b > a, "degenerate interval [{a}, {b}]");
        let mut coarse = Self::tabulate(&mut f, a, b, START_SEGMENTS, opts)?;
        let mut segments = START_SEGMENTS;
        while segments < MAX_SEGMENTS {
            segments *= 2;
            let fine = Self::tabulate(&mut f, a, b, segments, opts)?;
            let scale = fine.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let mut err = 0.0_f64;
            for (x, v) in fine.nodes.iter().zip(&fine.values) {
                err = err.max((coarse.eval(*x) - v).abs());
            }
            if err <= opts.tol * scale {
                return Ok(fine);
            }
            coarse = fine;
        }
        // one last self-consistency estimate at the largest size
        let fine = Self::tabulate(&mut f, a, b, 2 * MAX_SEGMENTS, opts)?;
        let scale = fine.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut err = 0.0_f64;
        for (x, v) in fine.nodes.iter().zip(&fine.values) {
            err = err.max((coarse.eval(*x) - v).abs());
        }
        if err <= opts.tol * scale {
            return Ok(fine);
        }
        Err(InterpError::NotResolved {
            max_nodes: MAX_SEGMENTS + 1,
            err,
            tol: opts.tol,
        })
    }

    fn tabulate<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        segments: usize,
        opts: &QuadOptions,
    ) -> Result<Self, InterpError> {
        let n = segments;
        let half = 0.5 * (b - a);
        let mut nodes = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let t = (std::f64::consts::PI * j as f64 / n as f64).cos();
            nodes.push(a + half * (1.0 - t));
        }
        nodes[0] = a;
        nodes[n] = b;

        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        for j in 1..=n {
            let seg = integrate(&mut *f, nodes[j - 1], nodes[j], opts)?;
            values.push(values[j - 1] + seg);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(InterpError::NonFinite { a, b });
        }

        let mut weights = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            weights.push(w);
        }
        Ok(Self {
            a,
            b,
            nodes,
            values,
            weights,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Value of the cumulative integral at the right endpoint.
    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Barycentric evaluation at `x ∈ [a, b]` (tiny overshoot tolerated).
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(
            x >= self.a - 1e-9 * (self.b - self.a) && x <= self.b + 1e-9 * (self.b - self.a),
            "x = {x} outside [{}, {}]",
            self.a,
            self.b
        );
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &vj), &wj) in self.nodes.iter().zip(&self.values).zip(&self.weights) {
            let dx = x - xj;
            if dx.abs() < 1e-14 * (self.b - self.a).max(1.0) {
                return vj;
            }
            let c = wj / dx;
            num += c * vj;
            den += c;
        }
        num / den
    }
}
