//! Shared model builders for integration tests.
#![allow(dead_code)] // each test binary uses its own subset

use arbometric::coeffs::{EdgeProfile, VertexParams};
use arbometric::graph::{MetricEdge, MetricGraph, VertexId};
use arbometric::model::{Model, NumericsOptions};

pub fn ring_model(b: &str, sigma: &str) -> Model {
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

pub fn interval_model(b: &str, sigma: &str) -> Model {
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

/// Theta graph: two vertices joined by three parallel edges.
pub fn theta_model(coefficients: [(&str, &str, f64); 3], alpha_u: f64, alpha_v: f64) -> Model {
    let graph = theta_graph([coefficients[0].2, coefficients[1].2, coefficients[2].2]);
    let numerics = NumericsOptions::default();
    let profiles = coefficients
        .iter()
        .map(|(b, sigma, len)| EdgeProfile::from_strs(b, sigma, *len, &numerics.quad).unwrap())
        .collect();
    let params = VertexParams::uniform(&graph)
        .with_alpha_vertex(VertexId(0), alpha_u)
        .with_alpha_vertex(VertexId(1), alpha_v);
    Model::new(graph, profiles, params, numerics).unwrap()
}

pub fn theta_graph(lengths: [f64; 3]) -> MetricGraph {
    MetricGraph::new(
        vec!["u".into(), "v".into()],
        (0..3)
            .map(|i| MetricEdge {
                name: format!("e{}", i + 1),
                tail: VertexId(0),
                head: VertexId(1),
                length: lengths[i],
            })
            .collect(),
    )
    .unwrap()
}

/// A denser multigraph: triangle a-b-c with the a-b edge doubled, a loop at
/// c, and a pendant edge c-d (a bridge). Cut space dimension 3.
pub fn tangle_model() -> Model {
    let e = |name: &str, t: usize, h: usize, len: f64| MetricEdge {
        name: name.into(),
        tail: VertexId(t),
        head: VertexId(h),
        length: len,
    };
    let graph = MetricGraph::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        vec![
            e("ab", 0, 1, 1.0),
            e("ab2", 0, 1, 0.5),
            e("bc", 1, 2, 1.2),
            e("ca", 2, 0, 0.7),
            e("cc", 2, 2, 0.8),
            e("cd", 2, 3, 0.4),
        ],
    )
    .unwrap();
    let numerics = NumericsOptions::default();
    let coefficients: [(&str, &str, f64); 6] = [
        ("0.5", "1", 1.0),
        ("-0.2 + 0.3*x", "1", 0.5),
        ("0.1*sin(2*pi*x)", "1 + 0.1*x", 1.2),
        ("-0.4", "1", 0.7),
        ("0.3*cos(pi*x)", "1", 0.8),
        ("0.2", "1", 0.4),
    ];
    let profiles = coefficients
        .iter()
        .map(|(b, sigma, len)| EdgeProfile::from_strs(b, sigma, *len, &numerics.quad).unwrap())
        .collect();
    let params = VertexParams::uniform(&graph)
        .with_alpha_vertex(VertexId(2), 0.4)
        .with_germ_alpha(arbometric::graph::EdgeId(0), 1.5, 0.8)
        .with_germ_alpha(arbometric::graph::EdgeId(4), 1.2, 0.9)
        .with_k(VertexId(1), 2.0);
    Model::new(graph, profiles, params, numerics).unwrap()
}
