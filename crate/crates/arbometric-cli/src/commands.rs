//! Command implementations behind the CLI dispatch.

use crate::config::ConfigFile;
use crate::report::{
    fmt17, CompareReport, MeasureReport, MethodResiduals, PairGap, ScalingReport, ScalingRow,
};
use arbometric::discrete;
use arbometric::solver;
use arbometric::treemeasure::TreeMeasure;
use arbometric::{Measure, Model};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Config(#[from] crate::config::ConfigError),
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("{0}")]
    Measure(#[from] arbometric::treemeasure::MeasureError),
    #[error("{0}")]
    Solver(#[from] arbometric::solver::SolverError),
    #[error("{0}")]
    Scaling(#[from] arbometric::discrete::ScalingError),
    #[error("{0}")]
    Chain(#[from] arbometric::discrete::ChainError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    BadInput(String),
    #[error("methods disagree beyond tolerance; see report")]
    ComparisonFailed,
}

impl CommandError {
    /// Stable machine-readable tag for the JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            CommandError::Config(_) | CommandError::Invalid(_) => "config",
            CommandError::Measure(_) => "treemeasure",
            CommandError::Solver(_) => "solver",
            CommandError::Scaling(_) | CommandError::Chain(_) => "discrete",
            CommandError::Write { .. } | CommandError::Read { .. } => "io",
            CommandError::BadInput(_) => "input",
            CommandError::ComparisonFailed => "comparison",
        }
    }
}

fn load_model(config_path: &str) -> Result<(ConfigFile, Model), CommandError> {
    let config = ConfigFile::load(config_path)?;
    let model = config.build_model().map_err(CommandError::Invalid)?;
    Ok((config, model))
}

pub fn cmd_validate(config_path: &str) -> Result<String, CommandError> {
    let (_, model) = load_model(config_path)?;
    Ok(format!(
        "ok: {} vertices, {} edges, cut space dimension {}",
        model.graph.vertex_count(),
        model.graph.edge_count(),
        model.graph.cut_space_dimension()
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Tree,
    Direct,
    Reversible,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Tree => "tree",
            Method::Direct => "direct",
            Method::Reversible => "reversible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn compute(model: &Model, method: Method) -> Result<Measure, CommandError> {
    match method {
        Method::Tree => Ok(TreeMeasure::new(model).invariant_measure()?),
        Method::Direct => Ok(solver::assemble_and_solve(model)?),
        Method::Reversible => {
            let chain = solver::vertex_chain(model)?;
            Ok(solver::reversible_invariant(model, &chain)?)
        }
    }
}

pub fn cmd_invariant(
    config_path: &str,
    method: Method,
    out: &str,
    format: Format,
) -> Result<String, CommandError> {
    let (_, model) = load_model(config_path)?;
    log::info!("computing invariant measure via method `{}`", method.name());
    let measure = compute(&model, method)?;
    let residuals = solver::stationarity_residuals(&model, &measure);
    let report = MeasureReport::new(&model, method.name(), &measure, residuals);
    let rendered = match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    std::fs::write(out, rendered).map_err(|source| CommandError::Write {
        path: out.to_string(),
        source,
    })?;
    Ok(format!("wrote {} report to {}", method.name(), out))
}

pub fn cmd_compare(config_path: &str) -> Result<(String, bool), CommandError> {
    let (config, model) = load_model(config_path)?;
    let tolerance = config.compare.tolerance;

    let mut methods: Vec<(String, Measure)> = vec![
        ("tree".into(), compute(&model, Method::Tree)?),
        ("direct".into(), compute(&model, Method::Direct)?),
    ];
    let chain = solver::vertex_chain(&model)?;
    if solver::is_reversible(&model, &chain).reversible {
        methods.push((
            "reversible".into(),
            solver::reversible_invariant(&model, &chain)?,
        ));
    }

    let mut pairwise = Vec::new();
    let mut ok = true;
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            let (gap, atom_gap) = measure_gap(&model, &methods[i].1, &methods[j].1);
            ok &= gap <= tolerance && atom_gap <= tolerance;
            pairwise.push(PairGap {
                a: methods[i].0.clone(),
                b: methods[j].0.clone(),
                sup_relative: gap,
                atom_gap,
            });
        }
    }
    let mut residuals = Vec::new();
    for (name, measure) in &methods {
        let r = solver::stationarity_residuals(&model, measure);
        ok &= r.max_all() <= tolerance;
        residuals.push(MethodResiduals {
            method: name.clone(),
            residuals: r.into(),
        });
    }

    let report = CompareReport {
        tolerance,
        methods: methods.iter().map(|(n, _)| n.clone()).collect(),
        pairwise_sup_relative: pairwise,
        residuals,
        within_tolerance: ok,
    };
    Ok((
        serde_json::to_string_pretty(&report).expect("report serializes"),
        ok,
    ))
}

fn measure_gap(model: &Model, a: &Measure, b: &Measure) -> (f64, f64) {
    let mut sup = 0.0_f64;
    for e in model.graph.edge_ids() {
        for (&(x, va), &(_, vb)) in a.grid[e.0].iter().zip(&b.grid[e.0]) {
            let _ = x;
            sup = sup.max((va - vb).abs() / vb.abs().max(1e-30));
        }
    }
    let mut atom_gap = 0.0_f64;
    for (va, vb) in a.atoms.iter().zip(&b.atoms) {
        let scale = vb.abs().max(1.0);
        atom_gap = atom_gap.max((va - vb).abs() / scale);
    }
    (sup, atom_gap)
}

pub fn cmd_ring_scaling(config_path: &str, meshes: &[usize]) -> Result<String, CommandError> {
    let (config, model) = load_model(config_path)?;
    if model.graph.vertex_count() != 1 || model.graph.edge_count() != 1 {
        return Err(CommandError::BadInput(
            "ring-scaling needs a single-vertex single-loop ring config".into(),
        ));
    }
    let (c, fields) = config
        .scaling_fields(&model)
        .map_err(CommandError::Invalid)?;
    let mut rows: Vec<ScalingRow> = Vec::new();
    for (idx, &n) in meshes.iter().enumerate() {
        let mut errors = Vec::new();
        let mut ratios = Vec::new();
        for (g, (_, field)) in fields.iter().enumerate() {
            let err = discrete::scaling_error(&model, field, c, n)?;
            ratios.push(if idx == 0 {
                None
            } else {
                Some(rows[idx - 1].errors[g] / err)
            });
            errors.push(err);
        }
        rows.push(ScalingRow { n, errors, ratios });
    }
    let report = ScalingReport {
        c,
        gauges: fields.into_iter().map(|(n, _)| n).collect(),
        rows,
    };
    Ok(report.to_csv())
}

#[derive(Debug, Deserialize)]
struct ChainInput {
    states: Vec<String>,
    rates: Vec<ChainRate>,
}

#[derive(Debug, Deserialize)]
struct ChainRate {
    from: String,
    to: String,
    rate: f64,
}

#[derive(Debug, Serialize)]
struct ChainOutput {
    states: Vec<String>,
    mctt: Vec<f64>,
    linear: Vec<f64>,
    max_abs_diff: f64,
}

pub fn cmd_mctt(chain_path: &str) -> Result<String, CommandError> {
    let text = std::fs::read_to_string(chain_path).map_err(|source| CommandError::Read {
        path: chain_path.to_string(),
        source,
    })?;
    let input: ChainInput = serde_json::from_str(&text)
        .map_err(|e| CommandError::BadInput(format!("chain JSON: {e}")))?;
    let index = |name: &str| -> Result<usize, CommandError> {
        input
            .states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| CommandError::BadInput(format!("unknown state `{name}`")))
    };
    let mut transitions = Vec::with_capacity(input.rates.len());
    for r in &input.rates {
        transitions.push((index(&r.from)?, index(&r.to)?, r.rate));
    }
    let chain = discrete::FiniteChain::new(input.states.len(), transitions)?;
    let mctt = discrete::mctt_stationary(&chain);
    let linear = discrete::stationary_linear(&chain)?;
    let max_abs_diff = mctt
        .iter()
        .zip(&linear)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    log::info!("mctt/linear sup difference: {}", fmt17(max_abs_diff));
    let out = ChainOutput {
        states: input.states,
        mctt,
        linear,
        max_abs_diff,
    };
    Ok(serde_json::to_string_pretty(&out).expect("output serializes"))
}
