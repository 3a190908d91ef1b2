//! Censuses over sampled arrays and targeted counterexample search.
//!
//! A [`census`] classifies a batch of sampled arrays and tallies the
//! outcome tags; [`find_type`] hill-climbs model-space coordinates toward a
//! requested type, restarting from fresh random draws. Both are
//! deterministic given their seed: every batch index and every restart runs
//! on a seed derived with [`crate::spaces::derive_seed`], so thread count
//! and scheduling cannot change the result.
//!
//! A search that exhausts its budget reports *not found within budget* —
//! it never claims absence.

use crate::classify::{
    classify_array, hull_count, project_simplex, ClassifyError, ComparisonType, DegenerateReason,
    HullOutcome, DEFAULT_HULL_EPS,
};
use crate::forms::{associated_form, spectrum, DEFAULT_SPECTRAL_TOL};
use crate::metric::DistanceMatrix;
use crate::spaces::{
    derive_seed, rng_for, Configuration, PNorm, Sampler, SpaceError, SpaceSpec, RNG_ALGORITHM,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Witness matrices stored per tag in a census.
pub const WITNESS_CAP: usize = 10;

/// Default perturbation step for hill climbing, in model coordinates.
pub const DEFAULT_SEARCH_STEP: f64 = 0.25;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("target {0} is not searchable (no spectral gate)")]
    UnsupportedTarget(String),
    #[error("'{0}' is not a searchable type")]
    UnknownTarget(String),
    #[error("array has {found} points but the target needs {expected}")]
    ArityMismatch { found: usize, expected: usize },
    #[error("explicit specs have nothing to perturb unless their size matches the target arity")]
    NothingToPerturb,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// A comparison type that a census or search can aim for: everything except
/// `PSD` and `Degenerate`, which have no negativity margin to climb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchTarget {
    Quadra3,
    Quadra4,
    OneNegative5,
    Penta3,
    Penta4,
    Penta5,
}

impl SearchTarget {
    pub fn parse(text: &str) -> Result<SearchTarget, SearchError> {
        match text.trim().to_ascii_lowercase().as_str() {
            "quadra3" => Ok(SearchTarget::Quadra3),
            "quadra4" => Ok(SearchTarget::Quadra4),
            "onenegative5" => Ok(SearchTarget::OneNegative5),
            "penta3" => Ok(SearchTarget::Penta3),
            "penta4" => Ok(SearchTarget::Penta4),
            "penta5" => Ok(SearchTarget::Penta5),
            other => Err(SearchError::UnknownTarget(other.to_string())),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            SearchTarget::Quadra3 | SearchTarget::Quadra4 => 4,
            _ => 5,
        }
    }

    /// How many certified negative eigenvalues the target requires.
    pub fn negatives(&self) -> usize {
        match self {
            SearchTarget::Penta3 | SearchTarget::Penta4 | SearchTarget::Penta5 => 2,
            _ => 1,
        }
    }

    /// The hull count the target requires, when it constrains one.
    pub fn hull(&self) -> Option<usize> {
        match self {
            SearchTarget::Quadra3 | SearchTarget::Penta3 => Some(3),
            SearchTarget::Quadra4 | SearchTarget::Penta4 => Some(4),
            SearchTarget::Penta5 => Some(5),
            SearchTarget::OneNegative5 => None,
        }
    }

    pub fn comparison_type(&self) -> ComparisonType {
        match self {
            SearchTarget::Quadra3 => ComparisonType::Quadra3,
            SearchTarget::Quadra4 => ComparisonType::Quadra4,
            SearchTarget::OneNegative5 => ComparisonType::OneNegative5,
            SearchTarget::Penta3 => ComparisonType::Penta3,
            SearchTarget::Penta4 => ComparisonType::Penta4,
            SearchTarget::Penta5 => ComparisonType::Penta5,
        }
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchTarget::Quadra3 => "quadra3",
            SearchTarget::Quadra4 => "quadra4",
            SearchTarget::OneNegative5 => "onenegative5",
            SearchTarget::Penta3 => "penta3",
            SearchTarget::Penta4 => "penta4",
            SearchTarget::Penta5 => "penta5",
        })
    }
}

/// Aggregated classification counts over a sampling run.
#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub spec: SpaceSpec,
    pub arity: usize,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub eps: f64,
    pub rng: &'static str,
    /// Non-degenerate outcome tags only; together with the degenerate
    /// reasons these account for every sample.
    pub counts: BTreeMap<ComparisonType, u64>,
    pub degenerate_reasons: BTreeMap<DegenerateReason, u64>,
    /// Distribution of certified negative counts over non-marginal samples.
    pub certified_negatives: BTreeMap<usize, u64>,
    /// Up to [`WITNESS_CAP`] witnesses per non-PSD tag, earliest samples
    /// first.
    pub witnesses: BTreeMap<ComparisonType, Vec<DistanceMatrix>>,
}

impl Census {
    pub fn count(&self, t: ComparisonType) -> u64 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn degenerate_total(&self) -> u64 {
        self.degenerate_reasons.values().sum()
    }
}

#[derive(Default)]
struct CensusAcc {
    counts: BTreeMap<ComparisonType, u64>,
    degenerate: BTreeMap<DegenerateReason, u64>,
    negatives: BTreeMap<usize, u64>,
    witnesses: BTreeMap<ComparisonType, BTreeMap<u64, DistanceMatrix>>,
}

impl CensusAcc {
    fn record(&mut self, index: u64, outcome: ComparisonType, marginal: bool, negatives: usize, d: &DistanceMatrix) {
        match outcome {
            ComparisonType::Degenerate(reason) => {
                *self.degenerate.entry(reason).or_insert(0) += 1;
            }
            tag => {
                *self.counts.entry(tag).or_insert(0) += 1;
            }
        }
        if !marginal {
            *self.negatives.entry(negatives).or_insert(0) += 1;
        }
        if outcome != ComparisonType::Psd {
            let bucket = self.witnesses.entry(outcome).or_default();
            if bucket.len() < WITNESS_CAP
                || bucket.keys().next_back().is_some_and(|&last| index < last)
            {
                bucket.insert(index, d.clone());
                while bucket.len() > WITNESS_CAP {
                    let last = *bucket.keys().next_back().expect("nonempty");
                    bucket.remove(&last);
                }
            }
        }
    }

    fn merge(mut self, other: CensusAcc) -> CensusAcc {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.degenerate {
            *self.degenerate.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.negatives {
            *self.negatives.entry(k).or_insert(0) += v;
        }
        for (tag, bucket) in other.witnesses {
            let mine = self.witnesses.entry(tag).or_default();
            for (i, d) in bucket {
                mine.insert(i, d);
            }
            while mine.len() > WITNESS_CAP {
                let last = *mine.keys().next_back().expect("nonempty");
                mine.remove(&last);
            }
        }
        self
    }
}

/// Classifies `samples` arrays drawn from `spec` and tallies the outcomes.
///
/// Sample `i` runs on `derive_seed(seed, i)`; classification is a pure
/// function; witness selection keeps the earliest indices. The result is
/// therefore identical across runs and worker-thread counts.
pub fn census(
    spec: &SpaceSpec,
    arity: usize,
    samples: u64,
    seed: u64,
    tol: f64,
    eps: f64,
) -> Result<Census, SearchError> {
    let sampler = Sampler::new(spec)?;
    let acc = (0..samples)
        .into_par_iter()
        .try_fold(CensusAcc::default, |mut acc, i| {
            let mut rng = rng_for(seed, i);
            let (d, _) = sampler.sample_array(arity, &mut rng)?;
            let c = classify_array(&d, tol, eps)?;
            acc.record(i, c.comparison_type, c.marginal, c.negative_count, &d);
            Ok::<CensusAcc, SearchError>(acc)
        })
        .try_reduce(CensusAcc::default, |a, b| Ok(a.merge(b)))?;

    Ok(Census {
        spec: spec.clone(),
        arity,
        samples,
        seed,
        tol,
        eps,
        rng: RNG_ALGORITHM,
        counts: acc.counts,
        degenerate_reasons: acc.degenerate,
        certified_negatives: acc.negatives,
        witnesses: acc
            .witnesses
            .into_iter()
            .map(|(tag, bucket)| (tag, bucket.into_values().collect()))
            .collect(),
    })
}

/// The two ingredients of a type margin. `spectral` is the certified
/// negativity of the gate eigenvalue; `hull` (when the gate passes and the
/// target constrains the hull) is the general-position margin of the
/// projection, signed toward the target hull count.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MarginParts {
    pub spectral: f64,
    pub hull: Option<f64>,
}

impl MarginParts {
    pub fn combined(&self) -> f64 {
        self.spectral + self.hull.unwrap_or(0.0)
    }
}

/// Continuous score that is positive exactly when the target's spectral
/// gate is certified, plus a hull term steering the projection toward the
/// target hull count. Used as the hill-climbing objective.
pub fn type_margin(d: &DistanceMatrix, target: SearchTarget) -> Result<f64, SearchError> {
    Ok(margin_parts(d, target)?.combined())
}

/// See [`type_margin`]; exposes the two components separately.
pub fn margin_parts(d: &DistanceMatrix, target: SearchTarget) -> Result<MarginParts, SearchError> {
    let n = d.n();
    if n != target.arity() {
        return Err(SearchError::ArityMismatch {
            found: n,
            expected: target.arity(),
        });
    }
    let form = associated_form(d, n - 1).expect("base n-1 is in range");
    let s = spectrum(&form, DEFAULT_SPECTRAL_TOL);
    if s.scale <= 0.0 {
        // all points coincide; nothing is certified
        return Ok(MarginParts {
            spectral: 0.0,
            hull: None,
        });
    }
    let k = target.negatives();
    let tau = DEFAULT_SPECTRAL_TOL * 1.0_f64.max(s.scale);
    let spectral = -(s.eigenvalues[k - 1] + tau) / s.scale;
    if spectral <= 0.0 {
        return Ok(MarginParts {
            spectral,
            hull: None,
        });
    }
    let Some(target_hull) = target.hull() else {
        return Ok(MarginParts {
            spectral,
            hull: None,
        });
    };

    let subspace: Vec<Vec<f64>> = s.eigenvectors[..k].to_vec();
    let hull = hull_margin(n, &subspace, target_hull);
    Ok(MarginParts {
        spectral,
        hull: Some(hull),
    })
}

/// General-position margin of the projected simplex: the smallest
/// orientation determinant over all vertex triples, normalized by the
/// squared bounding-box diagonal, positive when the hull count matches the
/// target and negative otherwise. Continuous in the array, zero exactly at
/// degenerate projections.
fn hull_margin(n: usize, subspace: &[Vec<f64>], target_hull: usize) -> f64 {
    let Ok(points) = project_simplex(n, subspace) else {
        return -1.0;
    };
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let diag2 = (hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2);
    if diag2 <= 0.0 {
        return 0.0;
    }
    let mut min_det = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
                min_det = min_det.min(det.abs());
            }
        }
    }
    let sign = match hull_count(&points, DEFAULT_HULL_EPS) {
        HullOutcome::Hull { count, .. } if count == target_hull => 1.0,
        _ => -1.0,
    };
    sign * min_det / diag2
}

/// Outcome of a targeted search.
///
/// `found == true` guarantees that `array` re-classifies to the target and
/// that `margin > 0`. `found == false` means *not found within the budget*;
/// `margin` then carries the best score seen, as a progress indicator.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub target: SearchTarget,
    pub found: bool,
    pub array: Option<DistanceMatrix>,
    pub margin: f64,
    pub evaluations: u64,
    /// Degenerate classifications encountered along the way; they never
    /// count toward the target and never abort the search.
    pub degenerate: u64,
}

/// Hill climbing with random restarts toward arrays of type `target`.
///
/// Each restart draws a fresh configuration from the space, then repeatedly
/// perturbs all coordinates with Gaussian noise of scale `step`, accepting
/// moves that increase [`type_margin`]. After 50 consecutive non-improving
/// moves the step halves; after ten halvings the restart is abandoned.
/// Evaluations are counted per classified candidate, and the search stops
/// at the first candidate whose full classification equals the target or
/// when `budget` evaluations are spent.
pub fn find_type(
    spec: &SpaceSpec,
    target: SearchTarget,
    budget: u64,
    seed: u64,
    step: f64,
) -> Result<SearchResult, SearchError> {
    let sampler = Sampler::new(spec)?;
    let arity = target.arity();
    let want = target.comparison_type();

    if let SpaceSpec::Explicit { matrix } = spec {
        if matrix.n() != arity {
            return Err(SearchError::NothingToPerturb);
        }
        let c = classify_array(matrix, crate::forms::DEFAULT_SPECTRAL_TOL, crate::classify::DEFAULT_HULL_EPS)?;
        let found = c.comparison_type == want;
        let margin = type_margin(matrix, target)?;
        return Ok(SearchResult {
            target,
            found,
            array: found.then(|| matrix.clone()),
            margin,
            evaluations: 1,
            degenerate: u64::from(c.comparison_type.is_degenerate()),
        });
    }

    let tol = crate::forms::DEFAULT_SPECTRAL_TOL;
    let eps = crate::classify::DEFAULT_HULL_EPS;
    let mut evaluations: u64 = 0;
    let mut degenerate: u64 = 0;
    let mut best_margin = f64::NEG_INFINITY;

    let evaluate = |config: &Configuration,
                        evaluations: &mut u64,
                        degenerate: &mut u64|
     -> Result<(DistanceMatrix, ComparisonType, f64), SearchError> {
        let d = sampler.distances(config)?;
        let c = classify_array(&d, tol, eps)?;
        *evaluations += 1;
        if c.comparison_type.is_degenerate() {
            *degenerate += 1;
        }
        let margin = type_margin(&d, target)?;
        Ok((d, c.comparison_type, margin))
    };

    for restart in 0.. {
        if evaluations >= budget {
            break;
        }
        let mut rng = rng_for(seed, restart);
        let mut config = sampler.sample_configuration(arity, &mut rng)?;
        let (d, tag, mut margin) = evaluate(&config, &mut evaluations, &mut degenerate)?;
        if tag == want {
            return Ok(SearchResult {
                target,
                found: true,
                array: Some(d),
                margin,
                evaluations,
                degenerate,
            });
        }
        best_margin = best_margin.max(margin);

        let mut current_step = step;
        let mut stale = 0usize;
        let step_floor = step / 1024.0;
        while evaluations < budget && current_step > step_floor {
            let candidate = sampler.perturb(&config, current_step, &mut rng);
            let (d, tag, cand_margin) = evaluate(&candidate, &mut evaluations, &mut degenerate)?;
            if tag == want {
                return Ok(SearchResult {
                    target,
                    found: true,
                    array: Some(d),
                    margin: cand_margin,
                    evaluations,
                    degenerate,
                });
            }
            best_margin = best_margin.max(cand_margin);
            if cand_margin > margin {
                config = candidate;
                margin = cand_margin;
                stale = 0;
            } else {
                stale += 1;
                if stale >= 50 {
                    current_step *= 0.5;
                    stale = 0;
                }
            }
        }
    }

    Ok(SearchResult {
        target,
        found: false,
        array: None,
        margin: best_margin,
        evaluations,
        degenerate,
    })
}

/// Census plus targeted searches for one exponent of the L^p scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub p: PNorm,
    pub census: Census,
    pub searches: Vec<SearchResult>,
}

/// Budget for the per-exponent Penta3/Penta4 searches in the scan.
pub const SCAN_SEARCH_BUDGET: u64 = 10_000;

/// Surveys L^p planes: one census per exponent and, for arity-5 scans,
/// a Penta3 and a Penta4 search per exponent. Outcomes are recorded, not
/// asserted — the scan is an experiment, not a theorem checker.
pub fn normed_plane_scan(
    ps: &[PNorm],
    arity: usize,
    samples_per_p: u64,
    seed: u64,
    tol: f64,
    eps: f64,
) -> Result<Vec<ScanEntry>, SearchError> {
    let mut entries = Vec::with_capacity(ps.len());
    for (i, &p) in ps.iter().enumerate() {
        let spec = SpaceSpec::Normed { p };
        let census = census(&spec, arity, samples_per_p, derive_seed(seed, 3 * i as u64), tol, eps)?;
        let mut searches = Vec::new();
        if arity == 5 {
            for (j, target) in [SearchTarget::Penta3, SearchTarget::Penta4].into_iter().enumerate() {
                let search_seed = derive_seed(seed, 3 * i as u64 + 1 + j as u64);
                searches.push(find_type(
                    &spec,
                    target,
                    SCAN_SEARCH_BUDGET,
                    search_seed,
                    DEFAULT_SEARCH_STEP,
                )?);
            }
        }
        entries.push(ScanEntry { p, census, searches });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;

    fn tripod() -> DistanceMatrix {
        validate_metric(
            &[
                vec![0.0, 2.0, 2.0, 1.0],
                vec![2.0, 0.0, 2.0, 1.0],
                vec![2.0, 2.0, 0.0, 1.0],
                vec![1.0, 1.0, 1.0, 0.0],
            ],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn euclidean_census_is_all_psd() {
        let spec = SpaceSpec::Euclidean { dim: 3 };
        let c = census(&spec, 4, 1000, 99, 1e-9, 1e-9).unwrap();
        assert_eq!(c.count(ComparisonType::Psd), 1000);
        assert_eq!(c.degenerate_total(), 0);
        assert!(c.witnesses.is_empty());
    }

    #[test]
    fn census_accounts_for_every_sample() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let c = census(&spec, 4, 2000, 5, 1e-9, 1e-9).unwrap();
        let total: u64 = c.counts.values().sum::<u64>() + c.degenerate_total();
        assert_eq!(total, 2000);
    }

    #[test]
    fn census_is_deterministic() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let a = census(&spec, 4, 500, 7, 1e-9, 1e-9).unwrap();
        let b = census(&spec, 4, 500, 7, 1e-9, 1e-9).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.witnesses, b.witnesses);
    }

    #[test]
    fn census_witnesses_reclassify_to_their_tag() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let c = census(&spec, 4, 2000, 21, 1e-9, 1e-9).unwrap();
        for (tag, ws) in &c.witnesses {
            assert!(ws.len() <= WITNESS_CAP);
            for w in ws {
                let again = classify_array(w, 1e-9, 1e-9).unwrap();
                assert_eq!(again.comparison_type, *tag);
            }
        }
    }

    #[test]
    fn tripod_margin_is_half_plus_hull_term() {
        let parts = margin_parts(&tripod(), SearchTarget::Quadra3).unwrap();
        // spectrum (-1, 2, 2): scale 2, so the spectral term is 1/2 up to
        // the tolerance shift
        assert!((parts.spectral - 0.5).abs() < 1e-8);
        assert!(parts.hull.unwrap() > 0.0);
        assert!(type_margin(&tripod(), SearchTarget::Quadra3).unwrap() > 0.5);
    }

    #[test]
    fn tetrahedron_margin_is_negative() {
        let rows = vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ];
        let d = validate_metric(&rows, 0.0).unwrap();
        let m = type_margin(&d, SearchTarget::Quadra3).unwrap();
        assert!(m < 0.0, "margin {m} should be negative for a Euclidean array");
    }

    #[test]
    fn great_circle_quintuple_margin_is_positive() {
        let step = 2.0 * std::f64::consts::PI / 5.0;
        let mut rows = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    let gap = (i as i64 - j as i64)
                        .rem_euclid(5)
                        .min((j as i64 - i as i64).rem_euclid(5)) as f64;
                    rows[i][j] = gap * step;
                }
            }
        }
        let d = validate_metric(&rows, 1e-9).unwrap();
        assert!(type_margin(&d, SearchTarget::Penta5).unwrap() > 0.0);
    }

    #[test]
    fn margin_rejects_wrong_arity() {
        assert!(matches!(
            type_margin(&tripod(), SearchTarget::Penta5),
            Err(SearchError::ArityMismatch { found: 4, expected: 5 })
        ));
    }

    #[test]
    fn find_type_quadra3_in_l1_plane() {
        // the L1 plane contains isometric tripods, so this must succeed
        let spec = SpaceSpec::Normed { p: PNorm::Finite(1.0) };
        let r = find_type(&spec, SearchTarget::Quadra3, 20_000, 42, 0.25).unwrap();
        assert!(r.found, "no quadra3 found in the L1 plane");
        let d = r.array.unwrap();
        let c = classify_array(&d, 1e-9, 1e-9).unwrap();
        assert_eq!(c.comparison_type, ComparisonType::Quadra3);
        assert!(r.margin > 0.0);
    }

    #[test]
    fn find_type_explicit_classifies_once() {
        let spec = SpaceSpec::Explicit { matrix: tripod() };
        let r = find_type(&spec, SearchTarget::Quadra3, 100, 0, 0.25).unwrap();
        assert!(r.found);
        assert_eq!(r.evaluations, 1);
        let r = find_type(&spec, SearchTarget::Quadra4, 100, 0, 0.25).unwrap();
        assert!(!r.found);
        let spec5 = SpaceSpec::Explicit { matrix: tripod() };
        assert!(matches!(
            find_type(&spec5, SearchTarget::Penta5, 100, 0, 0.25),
            Err(SearchError::NothingToPerturb)
        ));
    }

    #[test]
    fn found_witness_census_counts_it() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let r = find_type(&spec, SearchTarget::Quadra4, 10_000, 3, 0.25).unwrap();
        assert!(r.found);
        let witness = r.array.unwrap();
        let c = census(
            &SpaceSpec::Explicit { matrix: witness },
            4,
            1,
            0,
            1e-9,
            1e-9,
        )
        .unwrap();
        assert_eq!(c.count(ComparisonType::Quadra4), 1);
    }

    #[test]
    fn search_determinism() {
        let spec = SpaceSpec::Sphere { r: 1.0 };
        let a = find_type(&spec, SearchTarget::Quadra4, 2_000, 17, 0.25).unwrap();
        let b = find_type(&spec, SearchTarget::Quadra4, 2_000, 17, 0.25).unwrap();
        assert_eq!(a.found, b.found);
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.array, b.array);
    }

    #[test]
    fn target_parsing() {
        assert_eq!(SearchTarget::parse("Penta5").unwrap(), SearchTarget::Penta5);
        assert_eq!(SearchTarget::parse("quadra3").unwrap(), SearchTarget::Quadra3);
        assert!(matches!(
            SearchTarget::parse("hexa6"),
            Err(SearchError::UnknownTarget(_))
        ));
    }
}
