//! The machine-readable report document.
//!
//! Every command emits one JSON report (schema `alexprobe-report/1`):
//! command echo, tool version, seed, tolerances, wall time, and a tagged
//! payload. Witness and result matrices are inlined as row arrays. Numbers
//! are serialized by serde_json and therefore locale-independent.

use alexprobe::classify::{Classification, Projection2D};
use alexprobe::metric::MetricViolation;
use alexprobe::search::{Census, SearchResult, SearchTarget};
use alexprobe::spaces::{SpaceSpec, RNG_ALGORITHM};
use serde::Serialize;

pub const SCHEMA: &str = "alexprobe-report/1";

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    /// Argv as invoked; combined with `seed`, re-running reproduces the
    /// payload.
    pub command: Vec<String>,
    pub rng: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub wall_time_s: f64,
    pub payload: Payload,
}

impl Report {
    pub fn new(seed: Option<u64>, tol: f64, eps: Option<f64>, wall_time_s: f64, payload: Payload) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().collect(),
            rng: RNG_ALGORITHM,
            seed,
            tol,
            eps,
            wall_time_s,
            payload,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// Full 4-/5-point classification.
    Classification {
        n: usize,
        #[serde(rename = "type")]
        comparison_type: String,
        tag: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        degenerate_reason: Option<String>,
        eigenvalues: Vec<f64>,
        negative_count: usize,
        marginal: bool,
        base: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        hull: Option<Vec<usize>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        projection: Option<Vec<[f64; 2]>>,
    },
    /// 3-point input: metric validity plus the PSD verdict only.
    TriangleCheck { psd: bool, eigenvalues: Vec<f64> },
    Census { census: Census },
    Search {
        space: SpaceSpec,
        target: SearchTarget,
        budget: u64,
        step: f64,
        result: SearchResult,
    },
    EmbedCheck {
        n: usize,
        embeddable: bool,
        eigenvalues: Vec<f64>,
        min_eigenvalue: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        coordinates: Option<Vec<Vec<f64>>>,
    },
    /// The input failed metric validation; every violation is listed.
    InvalidMetric { violations: Vec<MetricViolation> },
}

impl Payload {
    pub fn from_classification(n: usize, c: &Classification) -> Payload {
        let reason = match c.comparison_type {
            alexprobe::ComparisonType::Degenerate(r) => Some(r.to_string()),
            _ => None,
        };
        let (hull, projection) = match &c.projection {
            Some(Projection2D { points, hull }) if !hull.is_empty() => {
                (Some(hull.clone()), Some(points.clone()))
            }
            Some(Projection2D { points, .. }) => (None, Some(points.clone())),
            None => (None, None),
        };
        Payload::Classification {
            n,
            comparison_type: c.comparison_type.label(),
            tag: c.comparison_type.tag().to_string(),
            degenerate_reason: reason,
            eigenvalues: c.eigenvalues.clone(),
            negative_count: c.negative_count,
            marginal: c.marginal,
            base: c.base,
            hull,
            projection,
        }
    }
}
