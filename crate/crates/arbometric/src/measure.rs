//! Stationary measures: vertex atoms plus per-edge densities.
//!
//! Every route in this crate (arborescence summation, the direct
//! stationarity solver, the reversible fast path) produces edge densities of
//! the closed form `μ_e(x) = (k₁ + k₂ P(x)) e^{2S₁(x)} / σ²(x)`, whose
//! probability current is the constant `-k₂/2`. A [`Measure`] stores the
//! normalized coefficient pairs, the atoms, and a sampled grid per edge.

use crate::graph::EdgeId;
use crate::model::Model;

#[derive(Debug, Clone)]
pub struct Measure {
    /// Atom weight per vertex.
    pub atoms: Vec<f64>,
    /// Normalized `(k₁, k₂)` density coefficients per edge.
    pub edge_coeffs: Vec<(f64, f64)>,
    /// Constant probability current per edge, `-k₂/2`, with respect to the
    /// canonical orientation.
    pub currents: Vec<f64>,
    /// The normalization constant divided out of the raw construction.
    pub z: f64,
    /// Density samples `(x, μ_e(x))` per edge on a uniform grid.
    pub grid: Vec<Vec<(f64, f64)>>,
}

impl Measure {
    /// Normalizes raw atoms and edge coefficients into a probability
    /// measure and samples the output grid.
    pub fn from_raw(model: &Model, atoms_raw: Vec<f64>, coeffs_raw: Vec<(f64, f64)>) -> Self {
        let mut z = atoms_raw.iter().sum::<f64>();
        for (e, &(k1, k2)) in coeffs_raw.iter().enumerate() {
            let (m1, m2) = model.profiles[e].basis_mass();
            z += k1 * m1 + k2 * m2;
        }
        let atoms = atoms_raw.iter().map(|a| a / z).collect();
        let edge_coeffs: Vec<(f64, f64)> = coeffs_raw
            .iter()
            .map(|&(k1, k2)| (k1 / z, k2 / z))
            .collect();
        let currents = edge_coeffs.iter().map(|&(_, k2)| -0.5 * k2).collect();
        let grid = sample_grid(model, &edge_coeffs);
        Self {
            atoms,
            edge_coeffs,
            currents,
            z,
            grid,
        }
    }

    /// Density of the normalized measure at a point of an edge.
    pub fn density(&self, model: &Model, e: EdgeId, x: f64) -> f64 {
        let (k1, k2) = self.edge_coeffs[e.0];
        model.profiles[e.0].density_basis(k1, k2, x)
    }

    /// Total mass (atoms plus edge integrals); 1 up to quadrature error.
    pub fn total_mass(&self, model: &Model) -> f64 {
        let mut total = self.atoms.iter().sum::<f64>();
        for (e, &(k1, k2)) in self.edge_coeffs.iter().enumerate() {
            let (m1, m2) = model.profiles[e].basis_mass();
            total += k1 * m1 + k2 * m2;
        }
        total
    }

    /// Probability current at `x` by a five-point finite-difference stencil
    /// applied to `σ²μ`: `J = -½ ∂ₓ(σ²μ) + bμ`. Used as an independent
    /// check of the stored constant currents.
    pub fn fd_current(&self, model: &Model, e: EdgeId, x: f64) -> f64 {
        let profile = &model.profiles[e.0];
        let len = profile.length();
        let h = (len * 1e-3).min(0.25 * len);
        let x = x.clamp(2.0 * h, len - 2.0 * h);
        let g = |y: f64| profile.sigma2(y) * self.density(model, e, y);
        let d = (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h);
        -0.5 * d + profile.b(x) * self.density(model, e, x)
    }
}

fn sample_grid(model: &Model, coeffs: &[(f64, f64)]) -> Vec<Vec<(f64, f64)>> {
    let n = model.numerics.grid_points.max(2);
    coeffs
        .iter()
        .enumerate()
        .map(|(e, &(k1, k2))| {
            let profile = &model.profiles[e];
            let len = profile.length();
            (0..n)
                .map(|j| {
                    let x = len * j as f64 / (n - 1) as f64;
                    (x, profile.density_basis(k1, k2, x))
                })
                .collect()
        })
        .collect()
}

/// Stationarity diagnostics for a measure; all entries are relative defects.
#[derive(Debug, Clone, Copy)]
pub struct ResidualReport {
    /// Max over edges of the variation of the finite-difference current.
    pub max_current_variation: f64,
    /// Max over vertices of the net current imbalance.
    pub max_vertex_divergence: f64,
    /// Max defect of the vertex gluing ratios.
    pub max_germ_ratio_defect: f64,
    /// Distance of the total mass from 1.
    pub normalization_defect: f64,
}

impl ResidualReport {
    pub fn max_all(&self) -> f64 {
        self.max_current_variation
            .max(self.max_vertex_divergence)
            .max(self.max_germ_ratio_defect)
            .max(self.normalization_defect)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn shared_types_are_safe_for_concurrent_reads() {
        assert_send_sync::<crate::model::Model>();
        assert_send_sync::<Measure>();
        assert_send_sync::<crate::graph::MetricGraph>();
        assert_send_sync::<crate::coeffs::EdgeProfile>();
    }
}
