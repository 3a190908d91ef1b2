//! Classification of 4- and 5-point arrays by spectral type and projected
//! hull combinatorics.
//!
//! The pipeline: build the associated form, count certified-negative
//! eigenvalues, and
//!
//! * count 0: the array is Euclidean (`PSD`);
//! * count 1 on four points: project the simplex along the negative
//!   direction onto a transversal plane and count convex-hull vertices —
//!   4 on the hull is `Quadra4`, 3 (one vertex interior) is `Quadra3`;
//! * count 1 on five points: `OneNegative5`;
//! * count 2 on five points: project along the negative *plane* and read
//!   the hull count 3/4/5 as `Penta3`/`Penta4`/`Penta5`.
//!
//! A valid 4-point metric admits at most one negative eigenvalue and a
//! 5-point metric at most two; observing more indicates a numerical bug and
//! raises an internal-consistency error rather than a classification.
//!
//! Committing to a quadra or penta type requires certainty about the
//! negative count: if some eigenvalue sits inside the tolerance band while
//! the projection step is about to run, the outcome is an explicit
//! [`ComparisonType::Degenerate`] — never a silently rounded neighbor type.
//! The non-projection tags are deliberately tolerant of in-band zeros:
//! `PSD` claims only embeddability up to tolerance (rank-deficient
//! Euclidean arrays, e.g. planar quintuples, are still `PSD`), and
//! `OneNegative5` claims only that exactly one eigenvalue is certified
//! negative (tree arrays with metrically collinear triples carry exact
//! zeros and are still `OneNegative5`).

use crate::forms::{associated_form, negative_index, spectrum, FormError, Spectrum};
use crate::metric::DistanceMatrix;
use serde::{Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Default tolerance for hull predicates, relative to the squared
/// bounding-box diagonal of the projection. Aligned with the spectral
/// tolerance.
pub const DEFAULT_HULL_EPS: f64 = 1e-9;

/// Why a classification could not commit to a combinatorial type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegenerateReason {
    /// An eigenvalue sits inside the tolerance band while a quadra or penta
    /// commitment was about to be made, so the negative count backing the
    /// projection is in doubt.
    MarginalEigenvalue,
    /// Three projected vertices are collinear within tolerance.
    CollinearProjection,
    /// Two projected vertices coincide within tolerance.
    CoincidentProjection,
}

impl DegenerateReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegenerateReason::MarginalEigenvalue => "MarginalEigenvalue",
            DegenerateReason::CollinearProjection => "CollinearProjection",
            DegenerateReason::CoincidentProjection => "CoincidentProjection",
        }
    }
}

impl fmt::Display for DegenerateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DegenerateReason {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Outcome of classifying a 4- or 5-point array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComparisonType {
    Psd,
    Quadra3,
    Quadra4,
    OneNegative5,
    Penta3,
    Penta4,
    Penta5,
    Degenerate(DegenerateReason),
}

impl ComparisonType {
    /// Short tag without the degenerate reason.
    pub fn tag(&self) -> &'static str {
        match self {
            ComparisonType::Psd => "PSD",
            ComparisonType::Quadra3 => "Quadra3",
            ComparisonType::Quadra4 => "Quadra4",
            ComparisonType::OneNegative5 => "OneNegative5",
            ComparisonType::Penta3 => "Penta3",
            ComparisonType::Penta4 => "Penta4",
            ComparisonType::Penta5 => "Penta5",
            ComparisonType::Degenerate(_) => "Degenerate",
        }
    }

    /// Full label, including the degenerate reason when present.
    pub fn label(&self) -> String {
        match self {
            ComparisonType::Degenerate(r) => format!("Degenerate({r})"),
            other => other.tag().to_string(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, ComparisonType::Degenerate(_))
    }
}

impl fmt::Display for ComparisonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for ComparisonType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("classification needs 4 or 5 points, got {0}")]
    WrongArity(usize),
    #[error("negative subspace needs a certified count of {expected}, spectrum has {actual}")]
    NegativeCountMismatch { expected: usize, actual: usize },
    #[error("spectrum is marginal; negative count cannot be certified")]
    MarginalSpectrum,
    #[error("subspace has {found} vectors, expected {expected} of length {dim}")]
    SubspaceDim {
        found: usize,
        expected: usize,
        dim: usize,
    },
    #[error("restriction of the form to the candidate subspace is not negative definite")]
    RestrictionNotNegative,
    #[error(
        "internal consistency violation: a valid {n}-point metric produced {count} negative \
         eigenvalues ({eigenvalues:?}); this indicates a numerical bug"
    )]
    InertiaBound {
        n: usize,
        count: usize,
        eigenvalues: Vec<f64>,
    },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Planar projection of the simplex vertices, in array-point order, plus the
/// convex hull in cyclic order (empty when the outcome was degenerate).
#[derive(Debug, Clone, Serialize)]
pub struct Projection2D {
    pub points: Vec<[f64; 2]>,
    pub hull: Vec<usize>,
}

/// Everything a classification run learned about one array.
#[derive(Debug, Clone)]
pub struct Classification {
    pub comparison_type: ComparisonType,
    pub base: usize,
    pub eigenvalues: Vec<f64>,
    pub negative_count: usize,
    pub marginal: bool,
    pub projection: Option<Projection2D>,
}

/// Orthonormal basis of the span of the `k` most negative eigenvalues.
///
/// Preconditions: the certified negative count equals `k` and the spectrum
/// is not marginal. The restriction of the form to the returned span is
/// verified to be negative definite.
pub fn negative_subspace(s: &Spectrum, k: usize) -> Result<Vec<Vec<f64>>, ClassifyError> {
    let ni = negative_index(s);
    if ni.count != k {
        return Err(ClassifyError::NegativeCountMismatch {
            expected: k,
            actual: ni.count,
        });
    }
    if ni.marginal {
        return Err(ClassifyError::MarginalSpectrum);
    }
    let basis: Vec<Vec<f64>> = s.eigenvectors[..k].to_vec();

    // Recompute the restriction honestly from the full eigendecomposition
    // instead of trusting that the basis vectors are exact eigenvectors.
    let dim = basis[0].len();
    let apply = |u: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (lambda, vec) in s.eigenvalues.iter().zip(&s.eigenvectors) {
            let coeff: f64 = u.iter().zip(vec).map(|(a, b)| a * b).sum();
            for (o, v) in out.iter_mut().zip(vec) {
                *o += lambda * coeff * v;
            }
        }
        out
    };
    let mut gram = vec![vec![0.0; k]; k];
    for a in 0..k {
        let wa = apply(&basis[a]);
        for b in 0..k {
            gram[a][b] = wa.iter().zip(&basis[b]).map(|(x, y)| x * y).sum();
        }
    }
    let negative_definite = match k {
        1 => gram[0][0] < 0.0,
        2 => gram[0][0] + gram[1][1] < 0.0 && gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0] > 0.0,
        _ => false,
    };
    if !negative_definite {
        return Err(ClassifyError::RestrictionNotNegative);
    }
    Ok(basis)
}

/// Projects the simplex vertices e_1, ..., e_(n-1), 0 of R^(n-1) onto the
/// orthogonal complement of `subspace`, expressed in a deterministic
/// orthonormal 2-D frame of that complement. Points come back in simplex
/// vertex order (the origin last).
pub fn project_simplex(n: usize, subspace: &[Vec<f64>]) -> Result<Vec<[f64; 2]>, ClassifyError> {
    if n != 4 && n != 5 {
        return Err(ClassifyError::WrongArity(n));
    }
    let dim = n - 1;
    let expected = n - 3;
    if subspace.len() != expected || subspace.iter().any(|v| v.len() != dim) {
        return Err(ClassifyError::SubspaceDim {
            found: subspace.len(),
            expected,
            dim,
        });
    }

    // Orthonormalize a copy of the subspace; the projection depends only on
    // its span, so callers may pass any basis of it.
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(expected);
    for v in subspace {
        let mut r = v.clone();
        for b in &ortho {
            let c: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(ClassifyError::SubspaceDim {
                found: subspace.len(),
                expected,
                dim,
            });
        }
        for x in r.iter_mut() {
            *x /= norm;
        }
        ortho.push(r);
    }

    // Pick the 2-D frame of the complement greedily from the standard basis:
    // largest residual norm wins, first index breaking ties. Deterministic,
    // and exact on axis-aligned subspaces.
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(2);
    for _ in 0..2 {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for j in 0..dim {
            let mut r = vec![0.0; dim];
            r[j] = 1.0;
            for b in ortho.iter().chain(frame.iter()) {
                let c: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
            let norm2 = r.iter().map(|x| x * x).sum::<f64>();
            if best.as_ref().map_or(true, |(bn, _)| norm2 > *bn) {
                best = Some((norm2, r));
            }
        }
        let (norm2, mut r) = best.expect("dim > 0");
        if norm2 < 1e-24 {
            return Err(ClassifyError::SubspaceDim {
                found: subspace.len(),
                expected,
                dim,
            });
        }
        // second orthogonalization pass for numerical cleanliness
        for b in ortho.iter().chain(frame.iter()) {
            let c: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in r.iter_mut() {
            *x /= norm;
        }
        frame.push(r);
    }

    let mut points = Vec::with_capacity(n);
    for i in 0..dim {
        // vertex e_(i+1): its coordinates in the frame are just the frame
        // vectors' i-th components
        points.push([frame[0][i], frame[1][i]]);
    }
    points.push([0.0, 0.0]); // the origin vertex
    Ok(points)
}

/// Result of the strict-convex-position count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullOutcome {
    /// `order` lists the hull vertices cyclically; `count == order.len()`.
    Hull { count: usize, order: Vec<usize> },
    /// General position failed within tolerance.
    Degenerate(DegenerateReason),
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Counts how many of the points are vertices of their convex hull, by gift
/// wrapping over orientation determinants.
///
/// Before wrapping, every pair is checked for coincidence (distance at most
/// `eps * diagonal`) and every triple for collinearity (determinant at most
/// `eps * diagonal^2`, with `diagonal` the bounding-box diagonal); either
/// failure is a degenerate outcome, because the count is only meaningful in
/// strictly general position.
pub fn hull_count(points: &[[f64; 2]], eps: f64) -> HullOutcome {
    let n = points.len();
    debug_assert!((4..=5).contains(&n) || n == 3);

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let diag2 = (hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2);

    for i in 0..n {
        for j in (i + 1)..n {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            if dx * dx + dy * dy <= eps * eps * diag2 {
                return HullOutcome::Degenerate(DegenerateReason::CoincidentProjection);
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if orient(points[i], points[j], points[k]).abs() <= eps * diag2 {
                    return HullOutcome::Degenerate(DegenerateReason::CollinearProjection);
                }
            }
        }
    }

    // Gift wrapping; with all triples strictly non-collinear the walk is
    // unambiguous and terminates.
    let start = (0..n)
        .min_by(|&a, &b| {
            (points[a][1], points[a][0])
                .partial_cmp(&(points[b][1], points[b][0]))
                .expect("coordinates are finite")
        })
        .expect("nonempty");
    let mut order = vec![start];
    let mut current = start;
    loop {
        let mut next = if current == 0 { 1 } else { 0 };
        for cand in 0..n {
            if cand == current || cand == next {
                continue;
            }
            if orient(points[current], points[next], points[cand]) < 0.0 {
                next = cand;
            }
        }
        if next == start {
            break;
        }
        order.push(next);
        current = next;
        debug_assert!(order.len() <= n, "gift wrapping failed to close");
    }
    HullOutcome::Hull {
        count: order.len(),
        order,
    }
}

/// Classifies a 4-point array. See the module docs for the decision tree.
pub fn classify_quadruple(
    d: &DistanceMatrix,
    tol: f64,
    eps: f64,
) -> Result<Classification, ClassifyError> {
    if d.n() != 4 {
        return Err(ClassifyError::WrongArity(d.n()));
    }
    classify_at_base(d, d.n() - 1, tol, eps)
}

/// Classifies a 5-point array. See the module docs for the decision tree.
pub fn classify_quintuple(
    d: &DistanceMatrix,
    tol: f64,
    eps: f64,
) -> Result<Classification, ClassifyError> {
    if d.n() != 5 {
        return Err(ClassifyError::WrongArity(d.n()));
    }
    classify_at_base(d, d.n() - 1, tol, eps)
}

/// Dispatches on the point count (4 or 5).
pub fn classify_array(
    d: &DistanceMatrix,
    tol: f64,
    eps: f64,
) -> Result<Classification, ClassifyError> {
    match d.n() {
        4 => classify_quadruple(d, tol, eps),
        5 => classify_quintuple(d, tol, eps),
        n => Err(ClassifyError::WrongArity(n)),
    }
}

/// Classification with an explicit base vertex. All public results are
/// base-independent (the forms at two bases are congruent); the parameter
/// exists so the invariance can be exercised directly.
pub fn classify_at_base(
    d: &DistanceMatrix,
    base: usize,
    tol: f64,
    eps: f64,
) -> Result<Classification, ClassifyError> {
    let n = d.n();
    if n != 4 && n != 5 {
        return Err(ClassifyError::WrongArity(n));
    }
    let form = associated_form(d, base)?;
    let s = spectrum(&form, tol);
    let ni = negative_index(&s);
    let mut out = Classification {
        comparison_type: ComparisonType::Psd,
        base,
        eigenvalues: s.eigenvalues.clone(),
        negative_count: ni.count,
        marginal: ni.marginal,
        projection: None,
    };

    let needed = match (n, ni.count) {
        (_, 0) => {
            out.comparison_type = ComparisonType::Psd;
            return Ok(out);
        }
        (5, 1) => {
            out.comparison_type = ComparisonType::OneNegative5;
            return Ok(out);
        }
        (4, 1) => 1,
        (5, 2) => 2,
        (_, count) => {
            return Err(ClassifyError::InertiaBound {
                n,
                count,
                eigenvalues: s.eigenvalues,
            })
        }
    };
    if ni.marginal {
        // an in-band eigenvalue could change the count the projection is
        // built on; refuse to commit to a quadra/penta type
        out.comparison_type = ComparisonType::Degenerate(DegenerateReason::MarginalEigenvalue);
        return Ok(out);
    }

    let subspace = negative_subspace(&s, needed)?;
    let simplex_points = project_simplex(n, &subspace)?;

    // Reorder from simplex-vertex order into array-point order: vertices
    // e_1.. are the non-base points in their original order, the origin is
    // the base point.
    let mut points = vec![[0.0; 2]; n];
    let mut slot = 0;
    for i in 0..n {
        if i == base {
            points[i] = simplex_points[n - 1];
        } else {
            points[i] = simplex_points[slot];
            slot += 1;
        }
    }

    match hull_count(&points, eps) {
        HullOutcome::Degenerate(reason) => {
            out.comparison_type = ComparisonType::Degenerate(reason);
            out.projection = Some(Projection2D {
                points,
                hull: Vec::new(),
            });
        }
        HullOutcome::Hull { count, order } => {
            out.comparison_type = match (n, count) {
                (4, 3) => ComparisonType::Quadra3,
                (4, 4) => ComparisonType::Quadra4,
                (5, 3) => ComparisonType::Penta3,
                (5, 4) => ComparisonType::Penta4,
                (5, 5) => ComparisonType::Penta5,
                _ => unreachable!("hull of {n} points has 3..={n} vertices"),
            };
            out.projection = Some(Projection2D {
                points,
                hull: order,
            });
        }
    }
    Ok(out)
}
