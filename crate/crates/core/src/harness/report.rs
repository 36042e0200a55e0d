use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{default_mesh, HarnessError};
use crate::distortion::{estimate_distortion, DistortionEstimate};
use crate::surfaces::SurfaceSpec;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryPoint {
    pub h_max: f64,
    pub value: f64,
}

/// Serialised result of one distortion estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub schema: u32,
    pub surface: String,
    pub params: Map<String, Value>,
    pub value: f64,
    pub witness_p: Vec<f64>,
    pub witness_q: Vec<f64>,
    pub intrinsic: f64,
    pub euclidean: f64,
    pub h_max: f64,
    pub history: Vec<HistoryPoint>,
}

impl EstimateReport {
    pub fn new(spec: &SurfaceSpec, mut params: Map<String, Value>, est: &DistortionEstimate) -> Self {
        if let Value::Object(surface) = serde_json::to_value(spec).expect("surface spec serialises") {
            for (key, v) in surface {
                if key != "surface" {
                    params.insert(key, v);
                }
            }
        }
        Self {
            schema: SCHEMA_VERSION,
            surface: spec.name().into(),
            params,
            value: est.value,
            witness_p: est.witness_p.clone(),
            witness_q: est.witness_q.clone(),
            intrinsic: est.intrinsic,
            euclidean: est.euclidean,
            h_max: est.h_max,
            history: est.refinement_history.iter().map(|&(h_max, value)| HistoryPoint { h_max, value }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Meshes `spec` (default resolution unless `res` is given) and estimates
/// its distortion.
pub fn estimate_report(
    spec: &SurfaceSpec,
    res: Option<usize>,
    k: usize,
    budget: usize,
) -> Result<EstimateReport, HarnessError> {
    let mesh = default_mesh(spec, res)?;
    let est = estimate_distortion(&mesh, k, budget)?;
    let mut params = Map::new();
    params.insert("k".into(), json!(k));
    params.insert("budget".into(), json!(budget));
    params.insert("vertices".into(), json!(mesh.vertex_count()));
    if let Some(res) = res {
        params.insert("res".into(), json!(res));
    }
    Ok(EstimateReport::new(spec, params, &est))
}
