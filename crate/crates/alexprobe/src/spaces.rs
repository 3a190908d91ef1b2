//! Model metric spaces and array samplers.
//!
//! Each [`SpaceSpec`] variant carries exact geodesic distance formulas:
//! Euclidean boxes, the round sphere (intrinsic great-circle metric), the
//! hyperbolic plane in the hyperboloid model, L^p normed planes, weighted
//! graphs (shortest-path metric), and explicit matrices.
//!
//! Sampling is pure given an explicit RNG state. Batch work derives one
//! seed per array index via [`derive_seed`], so censuses are reproducible
//! and independent of thread count. The generator is ChaCha8 (see
//! [`RNG_ALGORITHM`]); the derivation rule, not the generator, is the
//! stable part of the contract.

use crate::metric::{validate_metric, DistanceMatrix, MetricError, DEFAULT_TRIANGLE_SLACK};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Default cap on the hyperbolic sampling radius. Distances up to ~2 rmax
/// keep squared entries well-conditioned for the spectral tolerance.
pub const DEFAULT_HYPERBOLIC_RMAX: f64 = 3.0;

/// Minimum pairwise separation enforced on sampled arrays, so accidental
/// coincident-projection degeneracies stay rare.
pub const MIN_SEPARATION: f64 = 1e-6;

/// Points off their model surface by more than this (relative) are errors;
/// anything closer is treated as round-off and clamped.
pub const ON_MODEL_TOL: f64 = 1e-9;

/// Name of the random generator, echoed in reports for reproducibility.
pub const RNG_ALGORITHM: &str = "chacha8";

/// The exponent of an L^p norm: a finite p >= 1 or infinity (max norm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub fn parse(text: &str) -> Option<PNorm> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" => Some(PNorm::Infinity),
            other => other.parse::<f64>().ok().map(PNorm::Finite),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PNorm::Finite(p) => s.serialize_f64(*p),
            PNorm::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PNorm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(PNorm::Finite(p)),
            Raw::Text(t) => {
                PNorm::parse(&t).ok_or_else(|| serde::de::Error::custom("invalid p value"))
            }
        }
    }
}

fn default_rmax() -> f64 {
    DEFAULT_HYPERBOLIC_RMAX
}

/// Generator configuration for one model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    /// Points drawn uniformly from the unit cube [0,1]^dim.
    Euclidean { dim: usize },
    /// Round 2-sphere of radius `r`, intrinsic metric; points uniform.
    Sphere { r: f64 },
    /// Hyperbolic plane (hyperboloid model), sampled with uniform angle and
    /// radial density sinh(r) on [0, rmax].
    Hyperbolic {
        #[serde(default = "default_rmax")]
        rmax: f64,
    },
    /// Coordinate plane with the L^p metric; points uniform in [0,1]^2.
    Normed { p: PNorm },
    /// Connected weighted graph with the shortest-path metric; points are
    /// distinct vertices.
    Graph {
        vertices: usize,
        edges: Vec<(usize, usize, f64)>,
    },
    /// A fixed distance matrix; "sampling" returns it unchanged.
    Explicit { matrix: DistanceMatrix },
}

impl SpaceSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceSpec::Euclidean { .. } => "euclidean",
            SpaceSpec::Sphere { .. } => "sphere",
            SpaceSpec::Hyperbolic { .. } => "hyperbolic",
            SpaceSpec::Normed { .. } => "normed",
            SpaceSpec::Graph { .. } => "graph",
            SpaceSpec::Explicit { .. } => "explicit",
        }
    }

    /// Checks the variant's invariants (positive radius, p >= 1, positive
    /// weights, connectivity, ...).
    pub fn validate(&self) -> Result<(), SpaceError> {
        match self {
            SpaceSpec::Euclidean { dim } => {
                if *dim == 0 || *dim > 16 {
                    return Err(SpaceError::InvalidSpec(format!(
                        "euclidean dim must be in 1..=16, got {dim}"
                    )));
                }
            }
            SpaceSpec::Sphere { r } => {
                if !(r.is_finite() && *r > 0.0) {
                    return Err(SpaceError::InvalidSpec(format!(
                        "sphere radius must be positive, got {r}"
                    )));
                }
            }
            SpaceSpec::Hyperbolic { rmax } => {
                if !(rmax.is_finite() && *rmax > 0.0) {
                    return Err(SpaceError::InvalidSpec(format!(
                        "hyperbolic rmax must be positive, got {rmax}"
                    )));
                }
            }
            SpaceSpec::Normed { p } => {
                if let PNorm::Finite(p) = p {
                    if !(p.is_finite() && *p >= 1.0) {
                        return Err(SpaceError::InvalidSpec(format!(
                            "normed p must satisfy p >= 1, got {p}"
                        )));
                    }
                }
            }
            SpaceSpec::Graph { vertices, edges } => {
                if *vertices < 2 {
                    return Err(SpaceError::InvalidSpec(format!(
                        "graph needs at least 2 vertices, got {vertices}"
                    )));
                }
                for &(u, v, w) in edges {
                    if u >= *vertices || v >= *vertices {
                        return Err(SpaceError::InvalidSpec(format!(
                            "edge ({u},{v}) out of range for {vertices} vertices"
                        )));
                    }
                    if u == v {
                        return Err(SpaceError::InvalidSpec(format!("self-loop at vertex {u}")));
                    }
                    if !(w.is_finite() && w > 0.0) {
                        return Err(SpaceError::InvalidSpec(format!(
                            "edge ({u},{v}) has non-positive weight {w}"
                        )));
                    }
                }
                // connectivity via BFS from vertex 0
                let mut seen = vec![false; *vertices];
                let mut queue = vec![0usize];
                seen[0] = true;
                while let Some(u) = queue.pop() {
                    for &(a, b, _) in edges {
                        for (x, y) in [(a, b), (b, a)] {
                            if x == u && !seen[y] {
                                seen[y] = true;
                                queue.push(y);
                            }
                        }
                    }
                }
                if let Some(v) = seen.iter().position(|s| !s) {
                    return Err(SpaceError::Disconnected { u: 0, v });
                }
            }
            SpaceSpec::Explicit { .. } => {}
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("invalid space spec: {0}")]
    InvalidSpec(String),
    #[error("graph is disconnected: no path between vertices {u} and {v}")]
    Disconnected { u: usize, v: usize },
    #[error("graph has {have} vertices but {need} distinct points were requested")]
    TooFewVertices { have: usize, need: usize },
    #[error("point {index} is off the {space} model by {deviation:e}")]
    OffModel {
        space: &'static str,
        index: usize,
        deviation: f64,
    },
    #[error("distance formula argument out of domain by {excess:e}")]
    OutOfDomain { excess: f64 },
    #[error("point dimension {found} does not match the space ({expected})")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("pairwise distances are not defined pointwise for {0} specs")]
    PointsUnsupported(&'static str),
    #[error("explicit spec has {have} points but arity {need} was requested")]
    ExplicitArityMismatch { have: usize, need: usize },
    #[error("could not reach pairwise separation {min_sep:e} after {attempts} redraws")]
    SeparationUnattainable { min_sep: f64, attempts: usize },
    #[error("sampled matrix failed validation: {0}")]
    Metric(#[from] MetricError),
}

fn gauss(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// SplitMix64-style seed derivation: `mix(seed, index)`. Batch item `i`
/// always runs on `derive_seed(seed, i)`, which makes parallel sampling
/// deterministic and independent of scheduling.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The RNG used throughout, seeded for batch item `index`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, index))
}

/// Exact geodesic distance between two points of a coordinate model.
///
/// Points must lie on the model (sphere: |a| = r; hyperbolic: on the upper
/// hyperboloid sheet) within [`ON_MODEL_TOL`]; inverse-trig arguments are
/// clamped to their domain, and clamping beyond the same tolerance is an
/// error rather than round-off.
pub fn pairwise_distance(spec: &SpaceSpec, a: &[f64], b: &[f64]) -> Result<f64, SpaceError> {
    match spec {
        SpaceSpec::Euclidean { dim } => {
            check_dim(a, *dim)?;
            check_dim(b, *dim)?;
            Ok(a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt())
        }
        SpaceSpec::Sphere { r } => {
            check_dim(a, 3)?;
            check_dim(b, 3)?;
            for (index, p) in [a, b].into_iter().enumerate() {
                let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                let deviation = (norm - r).abs();
                if deviation > ON_MODEL_TOL * r.max(1.0) {
                    return Err(SpaceError::OffModel {
                        space: "sphere",
                        index,
                        deviation,
                    });
                }
            }
            let cosine = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (r * r);
            if cosine.abs() > 1.0 + ON_MODEL_TOL {
                return Err(SpaceError::OutOfDomain {
                    excess: cosine.abs() - 1.0,
                });
            }
            Ok(r * cosine.clamp(-1.0, 1.0).acos())
        }
        SpaceSpec::Hyperbolic { .. } => {
            check_dim(a, 3)?;
            check_dim(b, 3)?;
            for (index, p) in [a, b].into_iter().enumerate() {
                let q = p[0] * p[0] + p[1] * p[1] - p[2] * p[2];
                let deviation = (q + 1.0).abs();
                if deviation > ON_MODEL_TOL * p[2].powi(2).max(1.0) || p[2] <= 0.0 {
                    return Err(SpaceError::OffModel {
                        space: "hyperbolic",
                        index,
                        deviation,
                    });
                }
            }
            let minkowski = a[0] * b[0] + a[1] * b[1] - a[2] * b[2];
            let arg = -minkowski;
            if arg < 1.0 - ON_MODEL_TOL * a[2].max(b[2]).powi(2).max(1.0) {
                return Err(SpaceError::OutOfDomain { excess: 1.0 - arg });
            }
            Ok(arg.max(1.0).acosh())
        }
        SpaceSpec::Normed { p } => {
            check_dim(a, 2)?;
            check_dim(b, 2)?;
            let dx = (a[0] - b[0]).abs();
            let dy = (a[1] - b[1]).abs();
            Ok(match p {
                PNorm::Infinity => dx.max(dy),
                PNorm::Finite(p) => {
                    if *p == 1.0 {
                        dx + dy
                    } else if *p == 2.0 {
                        dx.hypot(dy)
                    } else {
                        (dx.powf(*p) + dy.powf(*p)).powf(1.0 / *p)
                    }
                }
            })
        }
        SpaceSpec::Graph { .. } => Err(SpaceError::PointsUnsupported("graph")),
        SpaceSpec::Explicit { .. } => Err(SpaceError::PointsUnsupported("explicit")),
    }
}

fn check_dim(p: &[f64], expected: usize) -> Result<(), SpaceError> {
    if p.len() != expected {
        return Err(SpaceError::DimensionMismatch {
            found: p.len(),
            expected,
        });
    }
    Ok(())
}

/// All-pairs shortest-path metric of a connected weighted graph.
///
/// Floyd-Warshall is iterated to a floating-point fixed point, so the
/// returned matrix satisfies every triangle inequality exactly as computed
/// and passes [`validate_metric`] with zero slack.
pub fn graph_metric(vertices: usize, edges: &[(usize, usize, f64)]) -> Result<DistanceMatrix, SpaceError> {
    let spec = SpaceSpec::Graph {
        vertices,
        edges: edges.to_vec(),
    };
    spec.validate()?;
    let n = vertices;
    let mut d = vec![f64::INFINITY; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    for &(u, v, w) in edges {
        if w < d[u * n + v] {
            d[u * n + v] = w;
            d[v * n + u] = w;
        }
    }
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                let dik = d[i * n + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let through = dik + d[k * n + j];
                    if through < d[i * n + j] {
                        d[i * n + j] = through;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // connectivity was validated, so every entry is finite
    let rows: Vec<Vec<f64>> = (0..n).map(|i| d[i * n..(i + 1) * n].to_vec()).collect();
    // symmetrize pairwise mins exactly (undirected edges keep this a no-op,
    // but floating addition order can differ between directions)
    let mut rows = rows;
    for i in 0..n {
        for j in (i + 1)..n {
            let m = rows[i][j].min(rows[j][i]);
            rows[i][j] = m;
            rows[j][i] = m;
        }
    }
    Ok(validate_metric(&rows, 0.0)?)
}

/// One sampled array configuration: coordinates for continuous models,
/// vertex indices for graphs, nothing for explicit matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum Configuration {
    Points(Vec<Vec<f64>>),
    Vertices(Vec<usize>),
    Explicit,
}

impl Configuration {
    pub fn coordinates(&self) -> Option<&Vec<Vec<f64>>> {
        match self {
            Configuration::Points(pts) => Some(pts),
            _ => None,
        }
    }
}

/// A prepared sampler for one space: validates the spec once and, for
/// graphs, precomputes the shortest-path metric.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: SpaceSpec,
    graph: Option<DistanceMatrix>,
}

impl Sampler {
    pub fn new(spec: &SpaceSpec) -> Result<Self, SpaceError> {
        spec.validate()?;
        let graph = match spec {
            SpaceSpec::Graph { vertices, edges } => Some(graph_metric(*vertices, edges)?),
            _ => None,
        };
        Ok(Sampler {
            spec: spec.clone(),
            graph,
        })
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    /// Draws one point of the model (continuous variants only).
    fn sample_point(&self, rng: &mut impl Rng) -> Vec<f64> {
        match &self.spec {
            SpaceSpec::Euclidean { dim } => (0..*dim).map(|_| rng.random::<f64>()).collect(),
            SpaceSpec::Sphere { r } => {
                let z: f64 = rng.random_range(-1.0..=1.0);
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let s = (1.0 - z * z).max(0.0).sqrt();
                vec![r * s * phi.cos(), r * s * phi.sin(), r * z]
            }
            SpaceSpec::Hyperbolic { rmax } => {
                // radial CDF on [0, rmax] for density sinh: (cosh r - 1)/(cosh rmax - 1)
                let u: f64 = rng.random::<f64>();
                let radius = (1.0 + u * (rmax.cosh() - 1.0)).acosh();
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let s = radius.sinh();
                vec![s * phi.cos(), s * phi.sin(), radius.cosh()]
            }
            SpaceSpec::Normed { .. } => vec![rng.random::<f64>(), rng.random::<f64>()],
            SpaceSpec::Graph { .. } | SpaceSpec::Explicit { .. } => {
                unreachable!("sample_point is only called for coordinate models")
            }
        }
    }

    /// Draws an n-point configuration with pairwise separation at least
    /// [`MIN_SEPARATION`], redrawing whole arrays until it holds.
    pub fn sample_configuration(
        &self,
        n: usize,
        rng: &mut impl Rng,
    ) -> Result<Configuration, SpaceError> {
        match &self.spec {
            SpaceSpec::Explicit { matrix } => {
                if matrix.n() != n {
                    return Err(SpaceError::ExplicitArityMismatch {
                        have: matrix.n(),
                        need: n,
                    });
                }
                Ok(Configuration::Explicit)
            }
            SpaceSpec::Graph { vertices, .. } => {
                if *vertices < n {
                    return Err(SpaceError::TooFewVertices {
                        have: *vertices,
                        need: n,
                    });
                }
                const ATTEMPTS: usize = 10_000;
                for _ in 0..ATTEMPTS {
                    let mut picks: Vec<usize> = Vec::with_capacity(n);
                    while picks.len() < n {
                        let v = rng.random_range(0..*vertices);
                        if !picks.contains(&v) {
                            picks.push(v);
                        }
                    }
                    let g = self.graph.as_ref().expect("graph metric precomputed");
                    let ok = (0..n).all(|i| {
                        (i + 1..n).all(|j| g.get(picks[i], picks[j]) >= MIN_SEPARATION)
                    });
                    if ok {
                        return Ok(Configuration::Vertices(picks));
                    }
                }
                Err(SpaceError::SeparationUnattainable {
                    min_sep: MIN_SEPARATION,
                    attempts: ATTEMPTS,
                })
            }
            _ => {
                const ATTEMPTS: usize = 10_000;
                for _ in 0..ATTEMPTS {
                    let pts: Vec<Vec<f64>> = (0..n).map(|_| self.sample_point(rng)).collect();
                    let mut ok = true;
                    'sep: for i in 0..n {
                        for j in (i + 1)..n {
                            if pairwise_distance(&self.spec, &pts[i], &pts[j])? < MIN_SEPARATION {
                                ok = false;
                                break 'sep;
                            }
                        }
                    }
                    if ok {
                        return Ok(Configuration::Points(pts));
                    }
                }
                Err(SpaceError::SeparationUnattainable {
                    min_sep: MIN_SEPARATION,
                    attempts: ATTEMPTS,
                })
            }
        }
    }

    /// Distance matrix of a configuration, validated at the default slack.
    pub fn distances(&self, config: &Configuration) -> Result<DistanceMatrix, SpaceError> {
        match (config, &self.spec) {
            (Configuration::Explicit, SpaceSpec::Explicit { matrix }) => Ok(matrix.clone()),
            (Configuration::Vertices(picks), SpaceSpec::Graph { .. }) => {
                let g = self.graph.as_ref().expect("graph metric precomputed");
                let n = picks.len();
                let mut rows = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        rows[i][j] = g.get(picks[i], picks[j]);
                    }
                }
                Ok(validate_metric(&rows, DEFAULT_TRIANGLE_SLACK)?)
            }
            (Configuration::Points(pts), _) => {
                let n = pts.len();
                let mut rows = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let dist = pairwise_distance(&self.spec, &pts[i], &pts[j])?;
                        rows[i][j] = dist;
                        rows[j][i] = dist;
                    }
                }
                Ok(validate_metric(&rows, DEFAULT_TRIANGLE_SLACK)?)
            }
            _ => unreachable!("configuration kind matches the sampler's spec"),
        }
    }

    /// Gaussian perturbation of every coordinate by `step`, re-projected
    /// onto the model; graphs reassign one randomly chosen point to a fresh
    /// distinct vertex. Explicit configurations have nothing to perturb.
    pub fn perturb(&self, config: &Configuration, step: f64, rng: &mut impl Rng) -> Configuration {
        match (config, &self.spec) {
            (Configuration::Points(pts), SpaceSpec::Euclidean { .. })
            | (Configuration::Points(pts), SpaceSpec::Normed { .. }) => {
                let moved = pts
                    .iter()
                    .map(|p| p.iter().map(|x| x + step * gauss(rng)).collect())
                    .collect();
                Configuration::Points(moved)
            }
            (Configuration::Points(pts), SpaceSpec::Sphere { r }) => {
                let moved = pts
                    .iter()
                    .map(|p| {
                        let mut q: Vec<f64> =
                            p.iter().map(|x| x + step * r * gauss(rng)).collect();
                        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if norm < 1e-12 {
                            return p.clone();
                        }
                        for x in q.iter_mut() {
                            *x *= r / norm;
                        }
                        q
                    })
                    .collect();
                Configuration::Points(moved)
            }
            (Configuration::Points(pts), SpaceSpec::Hyperbolic { .. }) => {
                let moved = pts
                    .iter()
                    .map(|p| {
                        let x = p[0] + step * gauss(rng);
                        let y = p[1] + step * gauss(rng);
                        vec![x, y, (1.0 + x * x + y * y).sqrt()]
                    })
                    .collect();
                Configuration::Points(moved)
            }
            (Configuration::Vertices(picks), SpaceSpec::Graph { vertices, .. }) => {
                let mut moved = picks.clone();
                let slot = rng.random_range(0..moved.len());
                for _ in 0..64 {
                    let v = rng.random_range(0..*vertices);
                    if !moved.contains(&v) {
                        moved[slot] = v;
                        break;
                    }
                }
                Configuration::Vertices(moved)
            }
            (Configuration::Explicit, _) => Configuration::Explicit,
            _ => unreachable!("configuration kind matches the sampler's spec"),
        }
    }

    /// Draws one n-point array: the validated distance matrix plus raw
    /// coordinates when the model has them.
    pub fn sample_array(
        &self,
        n: usize,
        rng: &mut impl Rng,
    ) -> Result<(DistanceMatrix, Option<Vec<Vec<f64>>>), SpaceError> {
        let config = self.sample_configuration(n, rng)?;
        let d = self.distances(&config)?;
        let coords = config.coordinates().cloned();
        Ok((d, coords))
    }
}

/// A reproducible batch of sampled arrays; array `i` is drawn from
/// `rng_for(seed, i)`.
#[derive(Debug, Clone, Serialize)]
pub struct SampleBatch {
    pub spec: SpaceSpec,
    pub seed: u64,
    pub arrays: Vec<DistanceMatrix>,
    pub coordinates: Option<Vec<Vec<Vec<f64>>>>,
}

/// Samples `count` arrays of `arity` points. With `keep_coordinates`, raw
/// model coordinates ride along for later reproduction.
pub fn sample_batch(
    spec: &SpaceSpec,
    arity: usize,
    count: usize,
    seed: u64,
    keep_coordinates: bool,
) -> Result<SampleBatch, SpaceError> {
    let sampler = Sampler::new(spec)?;
    let mut arrays = Vec::with_capacity(count);
    let mut coords = keep_coordinates.then(Vec::new);
    for i in 0..count {
        let mut rng = rng_for(seed, i as u64);
        let (d, c) = sampler.sample_array(arity, &mut rng)?;
        arrays.push(d);
        if let (Some(all), Some(c)) = (coords.as_mut(), c) {
            all.push(c);
        }
    }
    Ok(SampleBatch {
        spec: spec.clone(),
        seed,
        arrays,
        coordinates: coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn sphere_distances_match_arcs() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let north = [0.0, 0.0, 1.0];
        let south = [0.0, 0.0, -1.0];
        let equator = [1.0, 0.0, 0.0];
        assert!((pairwise_distance(&spec, &north, &south).unwrap() - PI).abs() < 1e-15);
        assert!(
            (pairwise_distance(&spec, &north, &equator).unwrap() - FRAC_PI_2).abs() < 1e-15
        );
    }

    #[test]
    fn sphere_rejects_off_model_points() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let bad = [0.0, 0.0, 1.5];
        assert!(matches!(
            pairwise_distance(&spec, &bad, &[1.0, 0.0, 0.0]),
            Err(SpaceError::OffModel { .. })
        ));
    }

    #[test]
    fn hyperbolic_distance_along_geodesic() {
        let spec = SpaceSpec::Hyperbolic { rmax: 3.0 };
        let origin = [0.0, 0.0, 1.0];
        let p = [1.0_f64.sinh(), 0.0, 1.0_f64.cosh()];
        assert!((pairwise_distance(&spec, &origin, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_law_of_cosines_on_right_triangles() {
        let spec = SpaceSpec::Hyperbolic { rmax: 3.0 };
        for (a, b) in [(0.5, 0.75), (1.0, 2.0), (0.1, 2.5)] {
            let pa = [f64::sinh(a), 0.0, f64::cosh(a)];
            let pb = [0.0, f64::sinh(b), f64::cosh(b)];
            let c = pairwise_distance(&spec, &pa, &pb).unwrap();
            let expected = (f64::cosh(a) * f64::cosh(b)).acosh();
            assert!((c - expected).abs() < 1e-10, "a={a} b={b}");
        }
    }

    #[test]
    fn taxicab_distance() {
        let spec = SpaceSpec::Normed { p: PNorm::Finite(1.0) };
        assert_eq!(
            pairwise_distance(&spec, &[0.0, 0.0], &[1.0, 1.0]).unwrap(),
            2.0
        );
        let spec = SpaceSpec::Normed { p: PNorm::Infinity };
        assert_eq!(
            pairwise_distance(&spec, &[0.0, 0.0], &[1.0, 0.5]).unwrap(),
            1.0
        );
    }

    #[test]
    fn l2_plane_agrees_with_euclidean_plane() {
        let normed = SpaceSpec::Normed { p: PNorm::Finite(2.0) };
        let euclid = SpaceSpec::Euclidean { dim: 2 };
        let mut rng = rng_for(42, 0);
        for _ in 0..1000 {
            let a = [rng.random::<f64>(), rng.random::<f64>()];
            let b = [rng.random::<f64>(), rng.random::<f64>()];
            let dn = pairwise_distance(&normed, &a, &b).unwrap();
            let de = pairwise_distance(&euclid, &a, &b).unwrap();
            assert!((dn - de).abs() <= 1e-14 * de.max(1.0));
        }
    }

    #[test]
    fn graph_metric_path_star_and_shortcut() {
        // path 0-1-2
        let d = graph_metric(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(d.get(0, 2), 2.0);
        // star with three unit legs: tripod
        let d = graph_metric(4, &[(3, 0, 1.0), (3, 1, 1.0), (3, 2, 1.0)]).unwrap();
        assert_eq!(d.get(0, 1), 2.0);
        assert_eq!(d.get(0, 3), 1.0);
        // triangle with one heavy edge: shortest path wins
        let d = graph_metric(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 10.0)]).unwrap();
        assert_eq!(d.get(0, 2), 2.0);
    }

    #[test]
    fn disconnected_graph_names_a_pair() {
        match graph_metric(4, &[(0, 1, 1.0), (2, 3, 1.0)]) {
            Err(SpaceError::Disconnected { u: 0, v }) => assert!(v == 2 || v == 3),
            other => panic!("expected disconnected error, got {other:?}"),
        }
    }

    #[test]
    fn sampled_arrays_validate_and_stay_on_model() {
        let specs = [
            SpaceSpec::Euclidean { dim: 3 },
            SpaceSpec::Sphere { r: 1.0 },
            SpaceSpec::Hyperbolic { rmax: 3.0 },
            SpaceSpec::Normed { p: PNorm::Finite(1.5) },
        ];
        for spec in &specs {
            let sampler = Sampler::new(spec).unwrap();
            let mut rng = rng_for(7, 0);
            for _ in 0..200 {
                let (d, coords) = sampler.sample_array(5, &mut rng).unwrap();
                assert_eq!(d.n(), 5);
                assert!(d.min_off_diagonal() >= MIN_SEPARATION);
                if let SpaceSpec::Sphere { r } = spec {
                    for p in coords.unwrap() {
                        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                        assert!((norm - r).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_distances_bounded_by_pi_r() {
        let sampler = Sampler::new(&SpaceSpec::Sphere { r: 2.0 }).unwrap();
        let mut rng = rng_for(11, 3);
        for _ in 0..500 {
            let (d, _) = sampler.sample_array(4, &mut rng).unwrap();
            assert!(d.max_entry() <= 2.0 * PI + 1e-12);
        }
    }

    #[test]
    fn batches_are_deterministic() {
        let spec = SpaceSpec::Hyperbolic { rmax: 3.0 };
        let a = sample_batch(&spec, 4, 50, 123, true).unwrap();
        let b = sample_batch(&spec, 4, 50, 123, true).unwrap();
        assert_eq!(a.arrays, b.arrays);
        assert_eq!(a.coordinates, b.coordinates);
        let c = sample_batch(&spec, 4, 50, 124, false).unwrap();
        assert_ne!(a.arrays, c.arrays);
    }

    #[test]
    fn explicit_spec_returns_its_matrix() {
        let rows = vec![
            vec![0.0, 2.0, 2.0, 1.0],
            vec![2.0, 0.0, 2.0, 1.0],
            vec![2.0, 2.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        let matrix = validate_metric(&rows, 0.0).unwrap();
        let sampler = Sampler::new(&SpaceSpec::Explicit { matrix: matrix.clone() }).unwrap();
        let mut rng = rng_for(1, 0);
        let (d, coords) = sampler.sample_array(4, &mut rng).unwrap();
        assert_eq!(d, matrix);
        assert!(coords.is_none());
        assert!(matches!(
            sampler.sample_array(5, &mut rng),
            Err(SpaceError::ExplicitArityMismatch { have: 4, need: 5 })
        ));
    }

    #[test]
    fn graph_sampling_needs_enough_vertices() {
        let sampler = Sampler::new(&SpaceSpec::Graph {
            vertices: 3,
            edges: vec![(0, 1, 1.0), (1, 2, 1.0)],
        })
        .unwrap();
        let mut rng = rng_for(5, 0);
        assert!(matches!(
            sampler.sample_configuration(4, &mut rng),
            Err(SpaceError::TooFewVertices { have: 3, need: 4 })
        ));
    }

    #[test]
    fn spec_serde_roundtrip() {
        let specs = vec![
            SpaceSpec::Euclidean { dim: 3 },
            SpaceSpec::Sphere { r: 1.0 },
            SpaceSpec::Hyperbolic { rmax: 2.5 },
            SpaceSpec::Normed { p: PNorm::Infinity },
            SpaceSpec::Graph {
                vertices: 3,
                edges: vec![(0, 1, 1.0), (1, 2, 0.5)],
            },
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: SpaceSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(spec, back);
        }
        // hyperbolic rmax defaults when omitted
        let spec: SpaceSpec = serde_json::from_str(r#"{"kind":"hyperbolic"}"#).unwrap();
        assert_eq!(spec, SpaceSpec::Hyperbolic { rmax: DEFAULT_HYPERBOLIC_RMAX });
    }
}
