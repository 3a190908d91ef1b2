//! The quadratic form associated with a point array, and its spectrum.
//!
//! For an n-point array with distances d, fix a nondegenerate simplex in
//! R^(n-1) with vertices v_i = e_i for i < n and v_base = 0. There is a
//! unique quadratic form W with W(v_i - v_j) = d(i,j)^2 for all pairs; its
//! matrix in the basis e_1..e_(n-1) is
//!
//! ```text
//! m[i][j] = (d(i,base)^2 + d(j,base)^2 - d(i,j)^2) / 2
//! ```
//!
//! The array embeds isometrically in Euclidean space iff W is positive
//! semidefinite, and the number of negative eigenvalues of W (its negative
//! inertia index, invariant under the choice of base by Sylvester's law)
//! drives the 4- and 5-point classification in [`crate::classify`].
//!
//! Eigendecompositions use cyclic Jacobi rotations: dimensions never exceed
//! 15, and Jacobi is both dependency-free and unconditionally stable on
//! symmetric input.

use crate::metric::DistanceMatrix;
use thiserror::Error;

/// Default relative tolerance for spectral decisions. Squaring and
/// differencing distances amplifies the ~1e-15 generator round-off; 1e-9
/// stays above that noise without swallowing geometry.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-9;

/// Off-diagonal convergence threshold for the Jacobi sweep, relative to the
/// largest absolute entry of the input matrix.
const JACOBI_OFF_TOL: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("base vertex {base} out of range for {n} points")]
    BaseOutOfRange { base: usize, n: usize },
    #[error("matrix is not symmetric: ({i},{j}) differs by {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("array is not Euclidean-embeddable: most negative eigenvalue {min_eigenvalue:e}")]
    NotEmbeddable { min_eigenvalue: f64 },
}

/// The (n-1) x (n-1) matrix of the associated form, in squared-distance
/// units. Exactly symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociatedForm {
    dim: usize,
    base: usize,
    m: Vec<f64>, // row-major dim*dim
}

impl AssociatedForm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the array point placed at the simplex origin.
    pub fn base(&self) -> usize {
        self.base
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.m[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    /// Evaluates the form on a coefficient vector: v^T M v.
    pub fn evaluate(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim);
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += v[i] * self.entry(i, j) * v[j];
            }
        }
        acc
    }
}

/// Builds the associated form of `d` with the point `base` at the origin.
/// The points other than `base` map to coordinates 0..n-2 in their original
/// order.
pub fn associated_form(d: &DistanceMatrix, base: usize) -> Result<AssociatedForm, FormError> {
    let n = d.n();
    if base >= n {
        return Err(FormError::BaseOutOfRange { base, n });
    }
    let idx: Vec<usize> = (0..n).filter(|&i| i != base).collect();
    let dim = n - 1;
    let mut m = vec![0.0; dim * dim];
    for a in 0..dim {
        for b in a..dim {
            let dia = d.get(idx[a], base);
            let dib = d.get(idx[b], base);
            let dab = d.get(idx[a], idx[b]);
            let val = (dia * dia + dib * dib - dab * dab) / 2.0;
            m[a * dim + b] = val;
            m[b * dim + a] = val;
        }
    }
    Ok(AssociatedForm { dim, base, m })
}

/// Full eigendecomposition of a small symmetric matrix.
///
/// Eigenvalues ascend; `eigenvectors[k]` is the unit eigenvector paired with
/// `eigenvalues[k]`. `scale` is the largest absolute eigenvalue and `tol` the
/// relative tolerance the spectrum was requested with (both feed
/// [`negative_index`]).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    pub scale: f64,
    pub tol: f64,
}

/// Tolerance-aware negative inertia.
///
/// `count` is the number of eigenvalues certified negative, i.e. below
/// `-tol * max(1, scale)`. `marginal` flags a spectrum with some eigenvalue
/// inside the band `[-tau, tau]`; such an eigenvalue could change the count
/// under perturbation, so downstream classification must not commit to a
/// combinatorial type based on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegativeIndex {
    pub count: usize,
    pub marginal: bool,
}

/// Eigendecomposition of the associated form by cyclic Jacobi rotations,
/// iterated until every off-diagonal entry is below `1e-14 * scale`.
pub fn spectrum(form: &AssociatedForm, tol: f64) -> Spectrum {
    jacobi_spectrum(form.dim, &form.m, tol)
}

/// Same decomposition for a free-standing symmetric matrix (used by callers
/// that do not start from a distance matrix). Symmetry must hold exactly.
pub fn symmetric_spectrum(rows: &[Vec<f64>], tol: f64) -> Result<Spectrum, FormError> {
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(FormError::NotSquare {
                row: i,
                found: row.len(),
                expected: n,
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = (rows[i][j] - rows[j][i]).abs();
            if delta != 0.0 {
                return Err(FormError::NotSymmetric { i, j, delta });
            }
        }
    }
    let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    Ok(jacobi_spectrum(n, &flat, tol))
}

fn jacobi_spectrum(n: usize, m: &[f64], tol: f64) -> Spectrum {
    let mut a = m.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    // The largest absolute entry is a lower bound for the spectral radius,
    // so stopping below JACOBI_OFF_TOL * max|entry| is at least as strict as
    // stopping relative to max|eigenvalue|.
    let scale_proxy = a.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    let thresh = JACOBI_OFF_TOL * scale_proxy;

    for _sweep in 0..200 {
        let mut off_max = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off_max = off_max.max(a[p * n + q].abs());
            }
        }
        if off_max == 0.0 || off_max < thresh {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // tan of the rotation angle, smaller root for stability
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    let scale = eigenvalues.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    Spectrum {
        eigenvalues,
        eigenvectors,
        scale,
        tol,
    }
}

/// Counts certified-negative eigenvalues and flags marginal spectra.
pub fn negative_index(s: &Spectrum) -> NegativeIndex {
    let tau = s.tol * 1.0_f64.max(s.scale);
    let count = s.eigenvalues.iter().filter(|&&l| l < -tau).count();
    let marginal = s.eigenvalues.iter().any(|&l| l.abs() <= tau);
    NegativeIndex { count, marginal }
}

/// Whether the array embeds isometrically in Euclidean space: true iff no
/// eigenvalue of the associated form is certified negative. Eigenvalues
/// inside the tolerance band count as zero, so boundary arrays pass.
pub fn is_euclidean(d: &DistanceMatrix, tol: f64) -> bool {
    let form = associated_form(d, d.n() - 1).expect("base n-1 is always in range");
    negative_index(&spectrum(&form, tol)).count == 0
}

/// Realizes an embeddable array as points in R^(n-1): the base point at the
/// origin, the others read off the eigendecomposition as
/// `p_i[k] = sqrt(lambda_k) * u_k[i]`. Eigenvalues inside the tolerance band
/// are clamped to zero before the square root.
///
/// Fails (naming the most negative eigenvalue) when the array does not
/// embed.
pub fn realize_points(d: &DistanceMatrix) -> Result<Vec<Vec<f64>>, FormError> {
    let n = d.n();
    let base = n - 1;
    let form = associated_form(d, base)?;
    let s = spectrum(&form, DEFAULT_SPECTRAL_TOL);
    if negative_index(&s).count > 0 {
        return Err(FormError::NotEmbeddable {
            min_eigenvalue: s.eigenvalues[0],
        });
    }
    let dim = n - 1;
    let roots: Vec<f64> = s
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .collect();
    let mut points = Vec::with_capacity(n);
    for i in 0..dim {
        let p: Vec<f64> = (0..dim).map(|k| roots[k] * s.eigenvectors[k][i]).collect();
        points.push(p);
    }
    points.insert(base, vec![0.0; dim]);
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::validate_metric;

    fn equilateral() -> DistanceMatrix {
        validate_metric(
            &[
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
            0.0,
        )
        .unwrap()
    }

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
    fn equilateral_form_matches_polarization() {
        let f = associated_form(&equilateral(), 2).unwrap();
        assert_eq!(f.rows(), vec![vec![1.0, 0.5], vec![0.5, 1.0]]);
        // W(e_i) = d(i, base)^2 and W(e_1 - e_2) = d(1,2)^2
        assert!((f.evaluate(&[1.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((f.evaluate(&[1.0, -1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coincident_pair_gives_rank_one_form() {
        let d = validate_metric(
            &[
                vec![0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
            0.0,
        )
        .unwrap();
        let f = associated_form(&d, 2).unwrap();
        assert_eq!(f.rows(), vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        // v_1 - v_2 maps to coincident points, so the form vanishes there
        assert!(f.evaluate(&[1.0, -1.0]).abs() < 1e-15);
    }

    #[test]
    fn two_point_form_is_squared_distance() {
        let d = validate_metric(&[vec![0.0, 3.0], vec![3.0, 0.0]], 0.0).unwrap();
        let f = associated_form(&d, 1).unwrap();
        assert_eq!(f.rows(), vec![vec![9.0]]);
    }

    #[test]
    fn base_out_of_range_errors() {
        assert!(matches!(
            associated_form(&equilateral(), 3),
            Err(FormError::BaseOutOfRange { base: 3, n: 3 })
        ));
    }

    #[test]
    fn spectrum_of_identity_and_diagonal() {
        let s = symmetric_spectrum(
            &[
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            1e-9,
        )
        .unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
        let s = symmetric_spectrum(&[vec![2.0, 0.0], vec![0.0, -1.0]], 1e-9).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0]);
        assert_eq!(s.scale, 2.0);
    }

    #[test]
    fn spectrum_of_equilateral_form() {
        // characteristic polynomial (1-l)^2 - 1/4 has roots 1/2 and 3/2
        let f = associated_form(&equilateral(), 2).unwrap();
        let s = spectrum(&f, 1e-9);
        assert!((s.eigenvalues[0] - 0.5).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn tripod_spectrum_is_minus_one_two_two() {
        let f = associated_form(&tripod(), 3).unwrap();
        assert_eq!(
            f.rows(),
            vec![
                vec![1.0, -1.0, -1.0],
                vec![-1.0, 1.0, -1.0],
                vec![-1.0, -1.0, 1.0],
            ]
        );
        let s = spectrum(&f, 1e-9);
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!((s.eigenvalues[2] - 2.0).abs() < 1e-12);
        // eigenvector of the negative eigenvalue is (1,1,1)/sqrt(3)
        let u = &s.eigenvectors[0];
        let dot = (u[0] + u[1] + u[2]).abs() / 3.0_f64.sqrt();
        assert!((dot - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spectrum_reconstructs_and_is_orthonormal() {
        let rows = vec![
            vec![2.0, 1.0, 0.5, -0.3],
            vec![1.0, -1.0, 0.25, 0.0],
            vec![0.5, 0.25, 3.0, 1.5],
            vec![-0.3, 0.0, 1.5, 0.75],
        ];
        let s = symmetric_spectrum(&rows, 1e-9).unwrap();
        let n = 4;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += s.eigenvalues[k] * s.eigenvectors[k][i] * s.eigenvectors[k][j];
                }
                assert!(
                    (acc - rows[i][j]).abs() <= 1e-10 * s.scale,
                    "reconstruction failed at ({i},{j})"
                );
            }
        }
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|k| s.eigenvectors[a][k] * s.eigenvectors[b][k]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn negative_index_counting_and_marginal_band() {
        let mk = |vals: Vec<f64>| Spectrum {
            eigenvectors: vals.iter().map(|_| vec![0.0]).collect(),
            scale: vals.iter().fold(0.0_f64, |a, &x| a.max(x.abs())),
            eigenvalues: vals,
            tol: 1e-9,
        };
        let ni = negative_index(&mk(vec![-1.0, 2.0, 2.0]));
        assert_eq!((ni.count, ni.marginal), (1, false));
        let ni = negative_index(&mk(vec![1e-15, 1.0, 1.0]));
        assert_eq!((ni.count, ni.marginal), (0, true));
        let ni = negative_index(&mk(vec![-3.0, -1.0, 2.0, 5.0]));
        assert_eq!((ni.count, ni.marginal), (2, false));
    }

    #[test]
    fn unit_square_is_euclidean_tripod_is_not() {
        let r2 = 2.0_f64.sqrt();
        let square = validate_metric(
            &[
                vec![0.0, 1.0, r2, 1.0],
                vec![1.0, 0.0, 1.0, r2],
                vec![r2, 1.0, 0.0, 1.0],
                vec![1.0, r2, 1.0, 0.0],
            ],
            1e-9,
        )
        .unwrap();
        assert!(is_euclidean(&square, 1e-9));
        assert!(!is_euclidean(&tripod(), 1e-9));
    }

    #[test]
    fn spherical_square_is_not_euclidean() {
        // four equally spaced points on a great circle of the unit sphere
        let h = std::f64::consts::FRAC_PI_2;
        let p = std::f64::consts::PI;
        let d = validate_metric(
            &[
                vec![0.0, h, p, h],
                vec![h, 0.0, h, p],
                vec![p, h, 0.0, h],
                vec![h, p, h, 0.0],
            ],
            1e-9,
        )
        .unwrap();
        assert!(!is_euclidean(&d, 1e-9));
    }

    #[test]
    fn realize_equilateral_reproduces_distances() {
        let d = equilateral();
        let pts = realize_points(&d).unwrap();
        assert_eq!(pts.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let dist: f64 = pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                assert!((dist - d.get(i, j)).abs() <= 1e-7 * d.max_entry());
            }
        }
    }

    #[test]
    fn realize_collinear_triple_has_rank_one() {
        let d = validate_metric(
            &[
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            1e-9,
        )
        .unwrap();
        let pts = realize_points(&d).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let dist: f64 = pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                assert!((dist - d.get(i, j)).abs() <= 1e-7 * 2.0);
            }
        }
        // one nonzero eigenvalue means the realization lives on a line
        let f = associated_form(&d, 2).unwrap();
        let s = spectrum(&f, 1e-9);
        let nonzero = s.eigenvalues.iter().filter(|&&l| l.abs() > 1e-9).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn realize_tripod_fails_naming_eigenvalue() {
        match realize_points(&tripod()) {
            Err(FormError::NotEmbeddable { min_eigenvalue }) => {
                assert!((min_eigenvalue + 1.0).abs() < 1e-10);
            }
            other => panic!("expected NotEmbeddable, got {other:?}"),
        }
    }

    #[test]
    fn symmetric_spectrum_rejects_asymmetry() {
        assert!(matches!(
            symmetric_spectrum(&[vec![0.0, 1.0], vec![2.0, 0.0]], 1e-9),
            Err(FormError::NotSymmetric { .. })
        ));
    }
}
