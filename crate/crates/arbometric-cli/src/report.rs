//! Serializable reports and their CSV renderings.

use arbometric::{Measure, Model, ResidualReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct MeasureReport {
    pub method: String,
    pub normalization: f64,
    pub vertices: Vec<VertexReport>,
    pub edges: Vec<EdgeReport>,
    pub residuals: Residuals,
}

#[derive(Debug, Serialize)]
pub struct VertexReport {
    pub name: String,
    pub atom: f64,
}

#[derive(Debug, Serialize)]
pub struct EdgeReport {
    pub name: String,
    pub current: f64,
    /// `(x, density)` samples along the edge.
    pub densities: Vec<(f64, f64)>,
}

#[derive(Debug, Serialize)]
pub struct Residuals {
    pub current_variation: f64,
    pub vertex_divergence: f64,
    pub germ_ratio: f64,
    pub normalization: f64,
}

impl From<ResidualReport> for Residuals {
    fn from(r: ResidualReport) -> Self {
        Self {
            current_variation: r.max_current_variation,
            vertex_divergence: r.max_vertex_divergence,
            germ_ratio: r.max_germ_ratio_defect,
            normalization: r.normalization_defect,
        }
    }
}

impl MeasureReport {
    pub fn new(model: &Model, method: &str, measure: &Measure, residuals: ResidualReport) -> Self {
        Self {
            method: method.to_string(),
            normalization: measure.z,
            vertices: model
                .graph
                .vertices()
                .map(|v| VertexReport {
                    name: model.graph.vertex_name(v).to_string(),
                    atom: measure.atoms[v.0],
                })
                .collect(),
            edges: model
                .graph
                .edge_ids()
                .map(|e| EdgeReport {
                    name: model.graph.edge(e).name.clone(),
                    current: measure.currents[e.0],
                    densities: measure.grid[e.0].clone(),
                })
                .collect(),
            residuals: residuals.into(),
        }
    }

    /// Density table as CSV with 17-significant-digit values, so parsing
    /// the text recovers the doubles bit for bit.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("edge,x,density\n");
        for edge in &self.edges {
            for &(x, density) in &edge.densities {
                out.push_str(&format!("{},{},{}\n", edge.name, fmt17(x), fmt17(density)));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// 17 significant decimal digits: enough to round-trip any f64.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub tolerance: f64,
    pub methods: Vec<String>,
    /// Pairwise sup-norm relative density differences over the grid.
    pub pairwise_sup_relative: Vec<PairGap>,
    pub residuals: Vec<MethodResiduals>,
    pub within_tolerance: bool,
}

#[derive(Debug, Serialize)]
pub struct PairGap {
    pub a: String,
    pub b: String,
    pub sup_relative: f64,
    pub atom_gap: f64,
}

#[derive(Debug, Serialize)]
pub struct MethodResiduals {
    pub method: String,
    pub residuals: Residuals,
}

#[derive(Debug, Serialize)]
pub struct ScalingReport {
    pub c: f64,
    pub gauges: Vec<String>,
    pub rows: Vec<ScalingRow>,
}

#[derive(Debug, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    /// Per-gauge sup error and ratio to the previous mesh (None on the
    /// first row).
    pub errors: Vec<f64>,
    pub ratios: Vec<Option<f64>>,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut header = String::from("N");
        for g in &self.gauges {
            header.push_str(&format!(",err_{g},ratio_{g}"));
        }
        let mut out = header + "\n";
        for row in &self.rows {
            out.push_str(&row.n.to_string());
            for (err, ratio) in row.errors.iter().zip(&row.ratios) {
                out.push_str(&format!(",{}", fmt17(*err)));
                match ratio {
                    Some(r) => out.push_str(&format!(",{}", fmt17(*r))),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}
