//! Validated distance matrices for finite point arrays.
//!
//! A [`DistanceMatrix`] is the input to everything else in this crate: a
//! square, symmetric, zero-diagonal array of nonnegative distances whose
//! triples satisfy the triangle inequality up to a small relative slack.
//! Validation collects *every* violation instead of failing on the first,
//! so a broken input file can be repaired in one pass.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Default relative slack for triangle-inequality checks.
///
/// Distances produced by `acos`/`acosh` carry round-off near 1e-15; 1e-9 is
/// safely above that noise and far below anything geometric.
pub const DEFAULT_TRIANGLE_SLACK: f64 = 1e-9;

/// Largest supported point count. Classification needs n <= 5; larger arrays
/// are only accepted for embeddability checks.
pub const MAX_POINTS: usize = 16;

/// What went wrong with a single metric axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    NegativeEntry,
    Asymmetry,
    NonzeroDiagonal,
    TriangleViolation,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::NegativeEntry => "negative entry",
            ViolationKind::Asymmetry => "asymmetry",
            ViolationKind::NonzeroDiagonal => "nonzero diagonal",
            ViolationKind::TriangleViolation => "triangle violation",
        };
        f.write_str(s)
    }
}

/// One violated metric axiom, with the offending indices and by how much.
///
/// For `TriangleViolation` the indices are `[i, j, k]`, meaning
/// `d[i][k] > d[i][j] + d[j][k]` (the violated side goes from `i` to `k`
/// via `j`). For the other kinds they are the offending entry coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricViolation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub magnitude: f64,
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {:?} (magnitude {:e})",
            self.kind, self.indices, self.magnitude
        )
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("input is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("a metric array needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("entry ({i},{j}) is not a finite number")]
    NonFinite { i: usize, j: usize },
    #[error("slack must be nonnegative, got {0}")]
    NegativeSlack(f64),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("{} metric violation(s): {}", .0.len(), format_violations(.0))]
    Violations(Vec<MetricViolation>),
}

fn format_violations(vs: &[MetricViolation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: cannot parse '{token}' as a number")]
    BadNumber {
        line: usize,
        col: usize,
        token: String,
    },
    #[error("shape error at line {line}: row has {found} entries, expected {expected}")]
    RaggedRow {
        line: usize,
        found: usize,
        expected: usize,
    },
    #[error("no matrix rows found")]
    Empty,
}

/// A validated n-point distance matrix.
///
/// Construction goes through [`validate_metric`] (or [`DistanceMatrix::new`]),
/// so every value of this type is square, exactly symmetric, zero on the
/// diagonal, nonnegative, and triangle-valid within the slack it was checked
/// against. Values are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>, // row-major n*n
}

impl DistanceMatrix {
    /// Validates `raw` with the default triangle slack.
    pub fn new(raw: &[Vec<f64>]) -> Result<Self, MetricError> {
        validate_metric(raw, DEFAULT_TRIANGLE_SLACK)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Largest entry (zero only when all points coincide).
    pub fn max_entry(&self) -> f64 {
        self.d.iter().cloned().fold(0.0, f64::max)
    }

    /// Smallest off-diagonal entry.
    pub fn min_off_diagonal(&self) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    m = m.min(self.get(i, j));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.d[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Multiplies every distance by `lambda > 0`. Homothety preserves all
    /// metric axioms, so the result is built directly.
    pub fn scale(&self, lambda: f64) -> Result<DistanceMatrix, MetricError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(MetricError::NonPositiveScale(lambda));
        }
        Ok(DistanceMatrix {
            n: self.n,
            d: self.d.iter().map(|x| x * lambda).collect(),
        })
    }

    /// Relabels points: entry (i,j) of the result is d(perm[i], perm[j]).
    ///
    /// `perm` must be a permutation of 0..n. Relabeling preserves validity.
    pub fn permute(&self, perm: &[usize]) -> DistanceMatrix {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                d[i * self.n + j] = self.get(perm[i], perm[j]);
            }
        }
        DistanceMatrix { n: self.n, d }
    }

    /// Serializes to the matrix text format accepted by [`parse_matrix`].
    /// Entries use the shortest representation that round-trips exactly.
    pub fn to_text(&self) -> String {
        serialize_matrix(&self.rows())
    }
}

impl Serialize for DistanceMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DistanceMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(deserializer)?;
        validate_metric(&rows, DEFAULT_TRIANGLE_SLACK).map_err(serde::de::Error::custom)
    }
}

/// Checks all metric axioms on `raw` and returns a [`DistanceMatrix`] iff
/// they hold. The triangle inequality is allowed `slack * max(d)` of
/// absolute headroom; symmetry and the zero diagonal must hold exactly.
///
/// Every violation found is reported, not just the first.
pub fn validate_metric(raw: &[Vec<f64>], slack: f64) -> Result<DistanceMatrix, MetricError> {
    if !(slack >= 0.0) {
        return Err(MetricError::NegativeSlack(slack));
    }
    let n = raw.len();
    if n < 2 {
        return Err(MetricError::TooFewPoints(n));
    }
    if n > MAX_POINTS {
        return Err(MetricError::TooManyPoints(n));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(MetricError::NotSquare {
                row: i,
                found: row.len(),
                expected: n,
            });
        }
        for (j, x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(MetricError::NonFinite { i, j });
            }
        }
    }

    let mut violations = Vec::new();
    let max_abs = raw
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |a, &x| a.max(x.abs()));
    let tri_slack = slack * max_abs;

    for i in 0..n {
        if raw[i][i] != 0.0 {
            violations.push(MetricViolation {
                kind: ViolationKind::NonzeroDiagonal,
                indices: vec![i],
                magnitude: raw[i][i].abs(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && raw[i][j] < 0.0 {
                violations.push(MetricViolation {
                    kind: ViolationKind::NegativeEntry,
                    indices: vec![i, j],
                    magnitude: -raw[i][j],
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if raw[i][j] != raw[j][i] {
                violations.push(MetricViolation {
                    kind: ViolationKind::Asymmetry,
                    indices: vec![i, j],
                    magnitude: (raw[i][j] - raw[j][i]).abs(),
                });
            }
        }
    }
    // d[i][k] <= d[i][j] + d[j][k] for every ordered triple; report each
    // violated side once per witness j.
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let excess = raw[i][k] - (raw[i][j] + raw[j][k]);
                if excess > tri_slack {
                    violations.push(MetricViolation {
                        kind: ViolationKind::TriangleViolation,
                        indices: vec![i, j, k],
                        magnitude: excess,
                    });
                }
            }
        }
    }

    if !violations.is_empty() {
        return Err(MetricError::Violations(violations));
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = raw[i][j];
        }
    }
    Ok(DistanceMatrix { n, d })
}

/// Parses the matrix text format: one row per line, entries separated by
/// whitespace and/or commas, `#` starting a comment. Returns the raw array;
/// run [`validate_metric`] on it to get a [`DistanceMatrix`].
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, ParseError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut expected: Option<usize> = None;
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut row = Vec::new();
        let mut token_start: Option<usize> = None;
        let bytes = line.as_bytes();
        let flush = |start: usize, end: usize, row: &mut Vec<f64>| -> Result<(), ParseError> {
            let token = &line[start..end];
            match token.parse::<f64>() {
                Ok(x) => {
                    row.push(x);
                    Ok(())
                }
                Err(_) => Err(ParseError::BadNumber {
                    line: lineno + 1,
                    col: start + 1,
                    token: token.to_string(),
                }),
            }
        };
        for (pos, &b) in bytes.iter().enumerate() {
            let is_sep = b == b',' || (b as char).is_ascii_whitespace();
            match (is_sep, token_start) {
                (true, Some(start)) => {
                    flush(start, pos, &mut row)?;
                    token_start = None;
                }
                (false, None) => token_start = Some(pos),
                _ => {}
            }
        }
        if let Some(start) = token_start {
            flush(start, bytes.len(), &mut row)?;
        }
        if row.is_empty() {
            continue; // blank or comment-only line
        }
        match expected {
            None => expected = Some(row.len()),
            Some(e) if e != row.len() => {
                return Err(ParseError::RaggedRow {
                    line: lineno + 1,
                    found: row.len(),
                    expected: e,
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(rows)
}

/// Writes a raw array in the format accepted by [`parse_matrix`]. The `{}`
/// formatting of f64 is shortest-round-trip, so parse(serialize(m)) == m.
pub fn serialize_matrix(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equilateral() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]
    }

    pub(crate) fn tripod_rows() -> Vec<Vec<f64>> {
        // center is point 3, leaves 0..=2 pairwise at 2, center at 1
        vec![
            vec![0.0, 2.0, 2.0, 1.0],
            vec![2.0, 0.0, 2.0, 1.0],
            vec![2.0, 2.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0],
        ]
    }

    #[test]
    fn accepts_equilateral_triple() {
        let d = validate_metric(&equilateral(), 0.0).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.get(0, 2), 1.0);
    }

    #[test]
    fn reports_triangle_violation_with_magnitude() {
        let raw = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        let err = validate_metric(&raw, 0.0).unwrap_err();
        match err {
            MetricError::Violations(vs) => {
                assert_eq!(vs.len(), 1);
                assert_eq!(vs[0].kind, ViolationKind::TriangleViolation);
                assert_eq!(vs[0].indices, vec![0, 1, 2]);
                assert!((vs[0].magnitude - 1.0).abs() < 1e-15);
            }
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn reports_asymmetry() {
        let raw = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        let err = validate_metric(&raw, 0.0).unwrap_err();
        match err {
            MetricError::Violations(vs) => {
                assert_eq!(vs.len(), 1);
                assert_eq!(vs[0].kind, ViolationKind::Asymmetry);
                assert_eq!(vs[0].indices, vec![0, 1]);
                assert_eq!(vs[0].magnitude, 1.0);
            }
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn collects_all_violations_not_just_first() {
        let raw = vec![
            vec![0.5, -1.0, 3.0],
            vec![-1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        match validate_metric(&raw, 0.0).unwrap_err() {
            MetricError::Violations(vs) => {
                let kinds: Vec<_> = vs.iter().map(|v| v.kind).collect();
                assert!(kinds.contains(&ViolationKind::NonzeroDiagonal));
                assert!(kinds.contains(&ViolationKind::NegativeEntry));
                assert!(kinds.contains(&ViolationKind::TriangleViolation));
            }
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let ragged = vec![vec![0.0, 1.0], vec![1.0, 0.0, 2.0]];
        assert!(matches!(
            validate_metric(&ragged, 0.0),
            Err(MetricError::NotSquare { row: 1, .. })
        ));
        let nan = vec![vec![0.0, f64::NAN], vec![f64::NAN, 0.0]];
        assert!(matches!(
            validate_metric(&nan, 0.0),
            Err(MetricError::NonFinite { i: 0, j: 1 })
        ));
    }

    #[test]
    fn rejects_too_small_and_too_large() {
        assert!(matches!(
            validate_metric(&[vec![0.0]], 0.0),
            Err(MetricError::TooFewPoints(1))
        ));
        let n = MAX_POINTS + 1;
        let raw = vec![vec![0.0; n]; n];
        assert!(matches!(
            validate_metric(&raw, 0.0),
            Err(MetricError::TooManyPoints(_))
        ));
    }

    #[test]
    fn slack_admits_borderline_triples() {
        let eps = 1e-12;
        let raw = vec![
            vec![0.0, 1.0, 2.0 + eps],
            vec![1.0, 0.0, 1.0],
            vec![2.0 + eps, 1.0, 0.0],
        ];
        assert!(validate_metric(&raw, 0.0).is_err());
        assert!(validate_metric(&raw, 1e-9).is_ok());
    }

    #[test]
    fn parses_simple_matrix() {
        assert_eq!(
            parse_matrix("0 1\n1 0").unwrap(),
            vec![vec![0.0, 1.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn parses_comments_commas_and_scientific_notation() {
        let text = "# tripod\n0, 1, 1, 1\n1 0 2 2\n1 2 0 2\n1 2 2 0 # trailing\n";
        let rows = parse_matrix(text).unwrap();
        assert_eq!(rows, tripod_rows_permuted());
        let sci = parse_matrix("0 1e-3\n1e-3 0").unwrap();
        assert_eq!(sci[0][1], 1e-3);
    }

    // tripod with the center listed first
    fn tripod_rows_permuted() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![1.0, 2.0, 0.0, 2.0],
            vec![1.0, 2.0, 2.0, 0.0],
        ]
    }

    #[test]
    fn ragged_input_reports_line() {
        match parse_matrix("0 1\n1").unwrap_err() {
            ParseError::RaggedRow { line, found, expected } => {
                assert_eq!((line, found, expected), (2, 1, 2));
            }
            other => panic!("expected ragged row, got {other:?}"),
        }
    }

    #[test]
    fn bad_number_reports_position() {
        match parse_matrix("0 abc\n1 0").unwrap_err() {
            ParseError::BadNumber { line, col, token } => {
                assert_eq!((line, col, token.as_str()), (1, 3, "abc"));
            }
            other => panic!("expected bad number, got {other:?}"),
        }
    }

    #[test]
    fn scale_examples() {
        let d = validate_metric(&equilateral(), 0.0).unwrap();
        let doubled = d.scale(2.0).unwrap();
        assert_eq!(doubled.get(0, 1), 2.0);
        assert_eq!(d.scale(1.0).unwrap(), d);
        let tripod = validate_metric(&tripod_rows(), 0.0).unwrap();
        let half = tripod.scale(0.5).unwrap();
        assert_eq!(half.get(0, 1), 1.0);
        assert_eq!(half.get(0, 3), 0.5);
        assert!(validate_metric(&half.rows(), 0.0).is_ok());
        assert!(matches!(
            d.scale(0.0),
            Err(MetricError::NonPositiveScale(_))
        ));
        assert!(matches!(
            d.scale(-2.0),
            Err(MetricError::NonPositiveScale(_))
        ));
    }

    #[test]
    fn permute_preserves_entries() {
        let tripod = validate_metric(&tripod_rows(), 0.0).unwrap();
        let p = tripod.permute(&[3, 0, 1, 2]);
        assert_eq!(p.rows(), tripod_rows_permuted());
    }

    #[test]
    fn roundtrip_text() {
        let d = validate_metric(&tripod_rows(), 0.0).unwrap();
        let parsed = parse_matrix(&d.to_text()).unwrap();
        assert_eq!(parsed, d.rows());
    }
}
