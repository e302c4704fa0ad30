//! Per-edge drift/diffusion profiles with cached cumulative integrals.
//!
//! For an edge of length `ℓ` with drift `b` and diffusion coefficient `σ`
//! the recurring quantities are `s = b/σ²`, its cumulative integral
//! `S₁(x) = ∫₀ˣ s`, and `P(x) = ∫₀ˣ e^{-2 S₁(y)} dy`. Everything downstream
//! (arborescence weights, gate integrals, the stationarity solver's
//! closed-form edge solutions) is built from these two tables. `S₁` is the
//! single integral; call sites apply their own factors of two.

use super::expr::{ExprError, Expression};
use super::interp::{CumulativeTable, InterpError};
use super::quad::{integrate, QuadError, QuadOptions};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("sigma is not positive on the edge: sigma({at}) = {value}")]
    SigmaNotPositive { at: f64, value: f64 },
}

#[derive(Debug, Clone)]
pub struct EdgeProfile {
    length: f64,
    drift: Expression,
    sigma: Expression,
    s1: CumulativeTable,
    p: CumulativeTable,
    /// `(∫₀^ℓ e^{2S₁}/σ², ∫₀^ℓ P e^{2S₁}/σ²)`: the mass of the two basis
    /// densities `e^{2S₁}/σ²` and `P e^{2S₁}/σ²`.
    mass: (f64, f64),
}

const SIGMA_SAMPLES: usize = 1024;

impl EdgeProfile {
    pub fn new(
        drift: Expression,
        sigma: Expression,
        length: f64,
        opts: &QuadOptions,
    ) -> Result<Self, ProfileError> {
        assert!(
            length.is_finite() && length > 0.0,
            "edge length must be positive"
        );

        // positivity of sigma, checked by dense sampling plus the endpoints
        for j in 0..=SIGMA_SAMPLES + 1 {
            let x = match j {
                0 => 0.0,
                j if j == SIGMA_SAMPLES + 1 => length,
                j => (j as f64 - 0.5) / SIGMA_SAMPLES as f64 * length,
            };
            let v = sigma.eval(x)?;
            if v <= 0.0 {
                return Err(ProfileError::SigmaNotPositive { at: x, value: v });
            }
            drift.eval(x)?;
        }

        let s = |x: f64| -> f64 {
            let b = drift.eval(x).unwrap_or(f64::NAN);
            let sg = sigma.eval(x).unwrap_or(f64::NAN);
            b / (sg * sg)
        };
        let s1 = CumulativeTable::build(s, 0.0, length, opts)?;
        let p = CumulativeTable::build(|x| (-2.0 * s1.eval(x)).exp(), 0.0, length, opts)?;

        let sigma2 = |x: f64| {
            let v = sigma.eval(x).unwrap_or(f64::NAN);
            v * v
        };
        let mass_1 = integrate(|x| (2.0 * s1.eval(x)).exp() / sigma2(x), 0.0, length, opts)?;
        let mass_p = integrate(
            |x| p.eval(x) * (2.0 * s1.eval(x)).exp() / sigma2(x),
            0.0,
            length,
            opts,
        )?;

        Ok(Self {
            length,
            drift,
            sigma,
            s1,
            p,
            mass: (mass_1, mass_p),
        })
    }

    pub fn from_strs(
        drift: &str,
        sigma: &str,
        length: f64,
        opts: &QuadOptions,
    ) -> Result<Self, ProfileError> {
        Self::new(
            Expression::parse(drift)?,
            Expression::parse(sigma)?,
            length,
            opts,
        )
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn drift_expr(&self) -> &Expression {
        &self.drift
    }

    pub fn sigma_expr(&self) -> &Expression {
        &self.sigma
    }

    pub fn b(&self, x: f64) -> f64 {
        self.drift.eval(x).unwrap_or(f64::NAN)
    }

    pub fn sigma(&self, x: f64) -> f64 {
        self.sigma.eval(x).unwrap_or(f64::NAN)
    }

    pub fn sigma2(&self, x: f64) -> f64 {
        let v = self.sigma(x);
        v * v
    }

    /// `s(x) = b(x)/σ²(x)`.
    pub fn s(&self, x: f64) -> f64 {
        self.b(x) / self.sigma2(x)
    }

    /// Cached `S₁(x) = ∫₀ˣ s(y) dy`.
    pub fn s1(&self, x: f64) -> f64 {
        self.s1.eval(x)
    }

    /// `S₁(ℓ)`.
    pub fn s1_total(&self) -> f64 {
        self.s1.total()
    }

    /// Cached `P(x) = ∫₀ˣ e^{-2 S₁(y)} dy`.
    pub fn p(&self, x: f64) -> f64 {
        self.p.eval(x)
    }

    /// `P(ℓ)`.
    pub fn p_total(&self) -> f64 {
        self.p.total()
    }

    /// Signed integral of `s` from one coordinate to another:
    /// `S₁(to) − S₁(from)`, antisymmetric under swapping the endpoints.
    pub fn oriented_integral(&self, from: f64, to: f64) -> f64 {
        self.s1.eval(to) - self.s1.eval(from)
    }

    /// Gate integral of a cut edge: integrating the weight
    /// `e^{-S₁(y) + (S₁(ℓ) - S₁(y))}` of a cut at `y` over the whole edge
    /// gives `e^{S₁(ℓ)} P(ℓ)`.
    pub fn gate(&self) -> f64 {
        self.s1_total().exp() * self.p_total()
    }

    /// The closed-form stationary density basis on this edge:
    /// `(k₁ + k₂ P(x)) e^{2S₁(x)} / σ²(x)`.
    pub fn density_basis(&self, k1: f64, k2: f64, x: f64) -> f64 {
        (k1 + k2 * self.p.eval(x)) * (2.0 * self.s1.eval(x)).exp() / self.sigma2(x)
    }

    /// Masses `(∫ e^{2S₁}/σ², ∫ P e^{2S₁}/σ²)` of the two density basis
    /// functions, so `∫ μ_e = k₁·mass.0 + k₂·mass.1`.
    pub fn basis_mass(&self) -> (f64, f64) {
        self.mass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> QuadOptions {
        QuadOptions::default()
    }

    #[test]
    fn zero_drift_has_vanishing_cumulative() {
        let p = EdgeProfile::from_strs("0", "1", 1.0, &opts()).unwrap();
        for x in [0.0, 0.25, 0.9, 1.0] {
            assert_eq!(p.s1(x).abs(), 0.0);
        }
        assert!((p.p_total() - 1.0).abs() < 1e-12);
        assert!((p.gate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_drift_gives_linear_cumulative() {
        let p = EdgeProfile::from_strs("0.7", "1", 2.0, &opts()).unwrap();
        for x in [0.0, 0.3, 1.1, 2.0] {
            assert!((p.s1(x) - 0.7 * x).abs() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn sinusoidal_drift_closes_after_a_period() {
        let p = EdgeProfile::from_strs("sin(2*pi*x)", "1", 1.0, &opts()).unwrap();
        let w = 2.0 * std::f64::consts::PI;
        for k in 0..=16 {
            let x = k as f64 / 16.0;
            let expect = (1.0 - (w * x).cos()) / w;
            assert!((p.s1(x) - expect).abs() < 1e-11, "x={x}");
        }
        assert!(p.s1_total().abs() < 1e-11);
    }

    #[test]
    fn oriented_integral_is_antisymmetric() {
        let p = EdgeProfile::from_strs("x^2 - 0.3", "1 + 0.1*x", 1.5, &opts()).unwrap();
        for (a, b) in [(0.0, 1.5), (0.2, 0.9), (1.4, 0.1)] {
            let fwd = p.oriented_integral(a, b);
            let rev = p.oriented_integral(b, a);
            assert_eq!(fwd + rev, 0.0);
        }
        assert_eq!(p.oriented_integral(0.7, 0.7), 0.0);
    }

    #[test]
    fn sigma_positivity_is_enforced() {
        let err = EdgeProfile::from_strs("0", "x - 0.5", 1.0, &opts()).unwrap_err();
        assert!(matches!(err, ProfileError::SigmaNotPositive { .. }));
    }

    #[test]
    fn cumulative_derivative_matches_s() {
        let p = EdgeProfile::from_strs("1 + 0.3*sin(2*pi*x)", "1 + 0.2*cos(2*pi*x)", 1.0, &opts())
            .unwrap();
        let h = 1e-5;
        for k in 1..64 {
            let x = k as f64 / 64.0;
            let d = (p.s1(x + h) - p.s1(x - h)) / (2.0 * h);
            assert!((d - p.s(x)).abs() < 1e-8, "x={x}: {d} vs {}", p.s(x));
        }
    }
}
