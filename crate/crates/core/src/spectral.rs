//! Compact linear problems between finite-dimensional inner-product spaces.
//!
//! A problem is a real matrix `S` together with positive weights `w` on the
//! source, so that the source norm is `‖f‖² = Σ wᵢ² fᵢ²` and the target norm
//! is Euclidean. All weighted questions reduce to a standard SVD of
//! `S · diag(w)⁻¹`: its right singular vectors, pulled back by `diag(w)⁻¹`,
//! are orthonormal in the weighted inner product and satisfy `S eᵢ = σᵢ ẽᵢ`.
//!
//! The n-th minimal worst-case error over the open unit ball is `σ_{n+1}`,
//! achieved by truncating the singular expansion after n terms.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which singular values are treated as zero.
pub const ZERO_SPECTRUM_RTOL: f64 = 1e-14;

/// Relative tolerance for orthonormality and SVD reconstruction checks.
pub const SVD_RTOL: f64 = 1e-10;

/// Suprema over the open unit ball are taken on the closed ball scaled by
/// this factor; for the continuous operators handled here the two agree.
pub const OPEN_BALL_SHRINK: f64 = 1.0 - 1e-9;

/// How a spectrum was generated.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumKind {
    Explicit,
    PowerLaw { exponent: f64 },
}

/// A finite nonincreasing sequence of nonnegative singular values.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    kind: SpectrumKind,
}

impl SingularSpectrum {
    /// Power-law spectrum `σᵢ = i^{-p}` for `i = 1..=len`, `p > 0`.
    pub fn power_law(exponent: f64, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptySpectrum);
        }
        if exponent <= 0.0 || !exponent.is_finite() {
            return Err(Error::NonPositiveExponent(exponent));
        }
        let values = (1..=len).map(|i| (i as f64).powf(-exponent)).collect();
        Ok(Self {
            values,
            kind: SpectrumKind::PowerLaw { exponent },
        })
    }

    /// Explicit spectrum; rejects sequences that are not nonincreasing,
    /// contain negative values, or are empty.
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSpectrum { index: i });
            }
            if i > 0 && values[i - 1] < v {
                return Err(Error::InvalidSpectrum { index: i });
            }
        }
        Ok(Self {
            values,
            kind: SpectrumKind::Explicit,
        })
    }

    /// Wrap singular values coming out of an SVD (already sorted
    /// nonincreasing); values below `ZERO_SPECTRUM_RTOL · σ₁` are clamped
    /// to zero.
    pub(crate) fn from_svd_values(mut values: Vec<f64>) -> Self {
        let top = values.first().copied().unwrap_or(0.0);
        let floor = top * ZERO_SPECTRUM_RTOL;
        for v in &mut values {
            if *v < floor {
                *v = 0.0;
            }
        }
        Self {
            values,
            kind: SpectrumKind::Explicit,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    /// Largest singular value `σ₁`.
    pub fn largest(&self) -> f64 {
        self.values[0]
    }
}

/// Minimal worst-case error over n linear functionals: `σ_{n+1}`, or 0 once
/// the spectrum is exhausted. `n = 0` gives the initial error `σ₁`.
pub fn worst_case_error(spectrum: &SingularSpectrum, n: usize) -> f64 {
    spectrum.values().get(n).copied().unwrap_or(0.0)
}

/// Coefficients of a source element in the right singular basis `eᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    coefficients: DVector<f64>,
}

impl Element {
    pub fn new(coefficients: DVector<f64>) -> Self {
        Self { coefficients }
    }

    pub fn from_slice(coefficients: &[f64]) -> Self {
        Self::new(DVector::from_row_slice(coefficients))
    }

    /// Unit vector along basis direction `index` (0-based) in dimension `len`.
    pub fn basis(index: usize, len: usize) -> Self {
        let mut v = DVector::zeros(len);
        v[index] = 1.0;
        Self::new(v)
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(DVector::zeros(len))
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Source norm of the element; equals the Euclidean norm of the
    /// coefficients since the basis is orthonormal.
    pub fn norm(&self) -> f64 {
        self.coefficients.norm()
    }
}

/// A compact linear operator with weighted source norm and its SVD.
#[derive(Clone, Debug)]
pub struct LinearProblem {
    matrix: DMatrix<f64>,
    source_weights: DVector<f64>,
    // Columns ẽᵢ, orthonormal in the Euclidean target inner product.
    left_basis: DMatrix<f64>,
    // Columns eᵢ in source coordinates, orthonormal in the weighted inner
    // product.
    right_basis: DMatrix<f64>,
    spectrum: SingularSpectrum,
}

impl LinearProblem {
    /// Build a problem from a matrix and source weights, computing the SVD
    /// of `S · diag(w)⁻¹`.
    pub fn new(matrix: DMatrix<f64>, source_weights: DVector<f64>) -> Result<Self> {
        let m_in = matrix.ncols();
        if source_weights.len() != m_in {
            return Err(Error::DimensionMismatch {
                expected: m_in,
                actual: source_weights.len(),
            });
        }
        if m_in == 0 || matrix.nrows() == 0 {
            return Err(Error::EmptySpectrum);
        }
        if source_weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::NonPositiveWeight);
        }

        let inv_w = DMatrix::from_diagonal(&source_weights.map(|w| 1.0 / w));
        let euclid = &matrix * &inv_w;
        let svd = euclid.svd(true, true);
        let u = svd.u.expect("u requested");
        let v_t = svd.v_t.expect("v_t requested");
        let k = svd.singular_values.len();

        // Sort triples by sigma descending and fix signs so the entry of
        // largest magnitude in each right vector is positive.
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

        let mut sigmas = Vec::with_capacity(k);
        let mut left = DMatrix::zeros(matrix.nrows(), k);
        let mut right_euclid = DMatrix::zeros(m_in, k);
        for (new_col, &old) in order.iter().enumerate() {
            sigmas.push(svd.singular_values[old]);
            let mut ucol = u.column(old).clone_owned();
            let mut vcol = v_t.row(old).transpose();
            let pivot = vcol
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
                .map(|(i, _)| i)
                .unwrap_or(0);
            if vcol[pivot] < 0.0 {
                vcol.neg_mut();
                ucol.neg_mut();
            }
            left.set_column(new_col, &ucol);
            right_euclid.set_column(new_col, &vcol);
        }

        let right_basis = &inv_w * right_euclid;
        Ok(Self {
            matrix,
            source_weights,
            left_basis: left,
            right_basis,
            spectrum: SingularSpectrum::from_svd_values(sigmas),
        })
    }

    /// Problem with unit source weights (plain Euclidean source norm).
    pub fn with_unit_weights(matrix: DMatrix<f64>) -> Result<Self> {
        let m = matrix.ncols();
        Self::new(matrix, DVector::from_element(m, 1.0))
    }

    /// Diagonal problem `S = diag(σ)` with unit weights; bases are the
    /// standard ones and no numeric SVD is needed.
    pub fn diagonal(spectrum: SingularSpectrum) -> Self {
        let m = spectrum.len();
        let matrix = DMatrix::from_diagonal(&DVector::from_row_slice(spectrum.values()));
        Self {
            matrix,
            source_weights: DVector::from_element(m, 1.0),
            left_basis: DMatrix::identity(m, m),
            right_basis: DMatrix::identity(m, m),
            spectrum,
        }
    }

    /// Build from known orthonormal parts, skipping the numeric SVD.
    /// Debug builds verify `S eᵢ = σᵢ ẽᵢ`.
    pub(crate) fn from_orthonormal_parts(
        matrix: DMatrix<f64>,
        source_weights: DVector<f64>,
        left_basis: DMatrix<f64>,
        right_basis: DMatrix<f64>,
        spectrum: SingularSpectrum,
    ) -> Self {
        #[cfg(debug_assertions)]
        {
            let top = spectrum.largest().max(1e-300);
            for i in 0..spectrum.len() {
                let lhs = &matrix * right_basis.column(i);
                let rhs = left_basis.column(i) * spectrum.values()[i];
                debug_assert!(
                    (lhs - rhs).norm() <= 1e-9 * top,
                    "orthonormal parts inconsistent at index {i}"
                );
            }
        }
        Self {
            matrix,
            source_weights,
            left_basis,
            right_basis,
            spectrum,
        }
    }

    /// Synthetic square problem with a prescribed spectrum, random
    /// orthonormal bases and the given source weights.
    pub fn synthetic(spectrum: SingularSpectrum, weights: DVector<f64>, seed: u64) -> Result<Self> {
        let m = spectrum.len();
        if weights.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: weights.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_orthogonal(m, &mut rng);
        let v = random_orthogonal(m, &mut rng);
        let sigma = DMatrix::from_diagonal(&DVector::from_row_slice(spectrum.values()));
        let w = DMatrix::from_diagonal(&weights);
        let matrix = &u * sigma * v.transpose() * w;
        LinearProblem::new(matrix, weights)
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn source_weights(&self) -> &DVector<f64> {
        &self.source_weights
    }

    pub fn spectrum(&self) -> &SingularSpectrum {
        &self.spectrum
    }

    /// Columns are the left singular vectors ẽᵢ.
    pub fn left_basis(&self) -> &DMatrix<f64> {
        &self.left_basis
    }

    /// Columns are the right singular vectors eᵢ in source coordinates.
    pub fn right_basis(&self) -> &DMatrix<f64> {
        &self.right_basis
    }

    /// Apply the raw operator matrix to a source vector.
    pub fn apply(&self, f: &DVector<f64>) -> DVector<f64> {
        &self.matrix * f
    }

    /// Weighted source norm `sqrt(Σ wᵢ² fᵢ²)`.
    pub fn source_norm(&self, f: &DVector<f64>) -> f64 {
        f.iter()
            .zip(self.source_weights.iter())
            .map(|(&fi, &wi)| (wi * fi).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Expand a source vector in the right singular basis:
    /// `αᵢ = ⟨f, eᵢ⟩_F`.
    pub fn coefficients_of(&self, f: &DVector<f64>) -> Element {
        let weighted = f.component_mul(&self.source_weights);
        let k = self.spectrum.len();
        let mut alpha = DVector::zeros(k);
        for i in 0..k {
            let ei_weighted = self
                .right_basis
                .column(i)
                .component_mul(&self.source_weights);
            alpha[i] = ei_weighted.dot(&weighted);
        }
        Element::new(alpha)
    }

    /// Source coordinates of `Σ αᵢ eᵢ`.
    pub fn element_to_source(&self, element: &Element) -> DVector<f64> {
        &self.right_basis * element.coefficients()
    }
}

fn random_orthogonal(m: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    qr.q()
}

/// Rank-n truncation of the singular expansion: `Σ_{i≤n} σᵢ αᵢ ẽᵢ`.
///
/// This is the optimal algorithm using n continuous linear functionals; its
/// worst-case error over the unit ball is `σ_{n+1}`.
pub fn apply_optimal_algorithm(
    problem: &LinearProblem,
    n: usize,
    f: &Element,
) -> Result<DVector<f64>> {
    let k = problem.spectrum().len();
    if f.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: f.len(),
        });
    }
    if n > k {
        return Err(Error::CardinalityOutOfRange { n, dim: k });
    }
    let mut out = DVector::zeros(problem.target_dim());
    for i in 0..n {
        let s = problem.spectrum().values()[i] * f.coefficients()[i];
        out.axpy(s, &problem.left_basis.column(i), 1.0);
    }
    Ok(out)
}

/// Empirical check of the `σ_{n+1}` formula: the largest error
/// `‖S f − A_n(f)‖` over random `f` in the open unit ball, always including
/// the deterministic witness `f = (1−10⁻⁹) e_{n+1}`.
///
/// The error is evaluated through the raw matrix, independently of the
/// spectral shortcut, so the result is a genuine lower witness for the
/// worst-case error. `samples` counts additional random draws.
pub fn brute_force_worst_error(
    problem: &LinearProblem,
    n: usize,
    seed: u64,
    samples: usize,
) -> Result<f64> {
    let k = problem.spectrum().len();
    let n_eff = n.min(k);
    let mut best = 0.0_f64;

    let mut record = |alpha: &Element, problem: &LinearProblem| -> Result<()> {
        let f_src = problem.element_to_source(alpha);
        let exact = problem.apply(&f_src);
        let approx = apply_optimal_algorithm(problem, n_eff, alpha)?;
        let err = (exact - approx).norm();
        if err > best {
            best = err;
        }
        Ok(())
    };

    if n_eff < k {
        let mut witness = DVector::zeros(k);
        witness[n_eff] = OPEN_BALL_SHRINK;
        record(&Element::new(witness), problem)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut alpha = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
        let norm = alpha.norm();
        if norm == 0.0 {
            continue;
        }
        alpha.scale_mut(OPEN_BALL_SHRINK / norm);
        record(&Element::new(alpha), problem)?;
    }
    Ok(best)
}

/// JSON description of a spectrum or problem:
/// `{"kind": "power-law", "p": 1.0, "m": 64}`,
/// `{"kind": "explicit", "values": [2.0, 2.0, 1.0]}`, or
/// `{"kind": "matrix", "matrix": [[...]], "weights": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ProblemSpec {
    #[serde(rename = "power-law")]
    PowerLaw { p: f64, m: usize },
    #[serde(rename = "explicit")]
    Explicit { values: Vec<f64> },
    #[serde(rename = "matrix")]
    Matrix {
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
}

impl ProblemSpec {
    pub fn spectrum(&self) -> Result<SingularSpectrum> {
        match self {
            ProblemSpec::PowerLaw { p, m } => SingularSpectrum::power_law(*p, *m),
            ProblemSpec::Explicit { values } => SingularSpectrum::explicit(values.clone()),
            ProblemSpec::Matrix { .. } => Ok(self.problem()?.spectrum().clone()),
        }
    }

    pub fn problem(&self) -> Result<LinearProblem> {
        match self {
            ProblemSpec::PowerLaw { .. } | ProblemSpec::Explicit { .. } => {
                Ok(LinearProblem::diagonal(self.spectrum()?))
            }
            ProblemSpec::Matrix { matrix, weights } => {
                let rows = matrix.len();
                let cols = matrix.first().map(|r| r.len()).unwrap_or(0);
                if rows == 0 || cols == 0 {
                    return Err(Error::EmptySpectrum);
                }
                if matrix.iter().any(|r| r.len() != cols) {
                    return Err(Error::DimensionMismatch {
                        expected: cols,
                        actual: matrix.iter().map(|r| r.len()).find(|&l| l != cols).unwrap(),
                    });
                }
                let m = DMatrix::from_fn(rows, cols, |i, j| matrix[i][j]);
                let w = match weights {
                    Some(w) => DVector::from_row_slice(w),
                    None => DVector::from_element(cols, 1.0),
                };
                LinearProblem::new(m, w)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn power_law_values() {
        let s = SingularSpectrum::power_law(1.0, 4).unwrap();
        assert_eq!(s.values(), &[1.0, 0.5, 1.0 / 3.0, 0.25]);
        assert!(matches!(s.kind(), SpectrumKind::PowerLaw { exponent } if *exponent == 1.0));
    }

    #[test]
    fn explicit_spectrum_roundtrip() {
        let s = SingularSpectrum::explicit(vec![2.0, 2.0, 1.0]).unwrap();
        assert_eq!(s.values(), &[2.0, 2.0, 1.0]);
    }

    #[test]
    fn explicit_rejects_increasing() {
        assert!(matches!(
            SingularSpectrum::explicit(vec![1.0, 2.0]),
            Err(Error::InvalidSpectrum { index: 1 })
        ));
    }

    #[test]
    fn spectrum_rejects_bad_parameters() {
        assert!(matches!(
            SingularSpectrum::power_law(0.0, 3),
            Err(Error::NonPositiveExponent(_))
        ));
        assert!(matches!(
            SingularSpectrum::power_law(1.0, 0),
            Err(Error::EmptySpectrum)
        ));
        assert!(matches!(
            SingularSpectrum::explicit(vec![1.0, -0.5]),
            Err(Error::InvalidSpectrum { index: 1 })
        ));
    }

    #[test]
    fn worst_case_error_examples() {
        let s = SingularSpectrum::power_law(1.0, 5).unwrap();
        assert_relative_eq!(worst_case_error(&s, 2), 1.0 / 3.0);
        assert_relative_eq!(worst_case_error(&s, 0), 1.0);
        let t = SingularSpectrum::explicit(vec![2.0, 2.0, 1.0]).unwrap();
        assert_eq!(worst_case_error(&t, 3), 0.0);
        assert_eq!(worst_case_error(&t, 10), 0.0);
    }

    #[test]
    fn optimal_algorithm_full_rank_is_exact() {
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0]).unwrap());
        let f = Element::from_slice(&[0.3, -0.2, 0.5]);
        let out = apply_optimal_algorithm(&p, 3, &f).unwrap();
        let exact = p.apply(&p.element_to_source(&f));
        assert_relative_eq!((out - exact).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn optimal_algorithm_kills_truncated_directions() {
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0]).unwrap());
        let f = Element::basis(1, 3);
        let out = apply_optimal_algorithm(&p, 1, &f).unwrap();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn optimal_algorithm_matches_truncated_matrix_product() {
        // Oracle: multiply by the rank-2 truncation of the matrix directly.
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0]).unwrap());
        let c = 1.0 / 3.0_f64.sqrt();
        let f = Element::from_slice(&[c, c, c]);
        let out = apply_optimal_algorithm(&p, 2, &f).unwrap();
        let truncated =
            DMatrix::from_diagonal(&DVector::from_row_slice(&[3.0, 2.0, 0.0]));
        let oracle = truncated * DVector::from_row_slice(&[c, c, c]);
        assert_relative_eq!((out.clone() - oracle).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(out[0], 3.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(out[1], 2.0 / 3.0_f64.sqrt(), epsilon = 1e-14);
        assert_eq!(out[2], 0.0);
    }

    #[test]
    fn optimal_algorithm_rejects_bad_dims() {
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0]).unwrap());
        assert!(apply_optimal_algorithm(&p, 4, &Element::zeros(3)).is_err());
        assert!(apply_optimal_algorithm(&p, 1, &Element::zeros(2)).is_err());
    }

    #[test]
    fn brute_force_brackets_sigma() {
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0]).unwrap());
        let err = brute_force_worst_error(&p, 1, 7, 10_000).unwrap();
        assert!(err <= 2.0, "brute force exceeded sigma_2: {err}");
        // The witness pins the value to 2(1 - 1e-9) up to roundoff.
        assert!(err >= 2.0 * (1.0 - 1e-9) - 1e-12, "witness missing: {err}");
    }

    #[test]
    fn brute_force_exhausted_spectrum() {
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![3.0, 2.0, 1.0]).unwrap());
        let err = brute_force_worst_error(&p, 3, 1, 100).unwrap();
        assert!(err <= 1e-12, "full-rank truncation should be exact: {err}");
    }

    #[test]
    fn brute_force_single_direction() {
        let p = LinearProblem::diagonal(SingularSpectrum::explicit(vec![1.0]).unwrap());
        let err = brute_force_worst_error(&p, 0, 1, 100).unwrap();
        assert_relative_eq!(err, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn weighted_svd_recovers_prescribed_spectrum() {
        let spectrum = SingularSpectrum::explicit(vec![2.0, 1.0, 0.25, 0.125]).unwrap();
        let weights = DVector::from_row_slice(&[0.5, 1.0, 2.0, 1.5]);
        let p = LinearProblem::synthetic(spectrum.clone(), weights, 42).unwrap();
        for (got, want) in p.spectrum().values().iter().zip(spectrum.values()) {
            assert_relative_eq!(got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn svd_bases_are_orthonormal_and_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..5 {
            let m = 8;
            let matrix = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
            let weights = DVector::from_fn(m, |i, _| 0.5 + 0.25 * (i as f64 + 1.0));
            let p = LinearProblem::new(matrix.clone(), weights.clone()).unwrap();
            let top = p.spectrum().largest();

            // Weighted orthonormality of the right basis.
            for i in 0..m {
                for j in 0..m {
                    let ip: f64 = (0..m)
                        .map(|k| {
                            weights[k] * weights[k]
                                * p.right_basis().column(i)[k]
                                * p.right_basis().column(j)[k]
                        })
                        .sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (ip - want).abs() <= SVD_RTOL,
                        "trial {trial}: right basis not orthonormal at ({i},{j}): {ip}"
                    );
                }
            }

            // S e_i = sigma_i e~_i and full reconstruction.
            let mut reconstructed = DMatrix::zeros(m, m);
            for i in 0..m {
                let lhs = p.apply(&p.right_basis().column(i).clone_owned());
                let rhs = p.left_basis().column(i) * p.spectrum().values()[i];
                assert!((lhs - rhs).norm() <= SVD_RTOL * top);
                // Row functional of e_i in the weighted metric.
                let dual = p
                    .right_basis()
                    .column(i)
                    .component_mul(&weights)
                    .component_mul(&weights);
                reconstructed += p.left_basis().column(i) * p.spectrum().values()[i] * dual.transpose();
            }
            assert!(
                (reconstructed - matrix).norm() <= SVD_RTOL * top,
                "trial {trial}: reconstruction drift"
            );
        }
    }

    #[test]
    fn coefficients_roundtrip() {
        let spectrum = SingularSpectrum::explicit(vec![2.0, 1.0, 0.5]).unwrap();
        let weights = DVector::from_row_slice(&[1.0, 2.0, 0.5]);
        let p = LinearProblem::synthetic(spectrum, weights, 3).unwrap();
        let f = DVector::from_row_slice(&[0.1, -0.2, 0.3]);
        let alpha = p.coefficients_of(&f);
        let back = p.element_to_source(&alpha);
        assert_relative_eq!((back - f).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn problem_spec_json() {
        let spec: ProblemSpec =
            serde_json::from_str(r#"{"kind": "power-law", "p": 1.0, "m": 4}"#).unwrap();
        assert_eq!(spec.spectrum().unwrap().values()[1], 0.5);

        let spec: ProblemSpec =
            serde_json::from_str(r#"{"kind": "explicit", "values": [2.0, 2.0, 1.0]}"#).unwrap();
        assert_eq!(spec.spectrum().unwrap().len(), 3);

        let spec: ProblemSpec = serde_json::from_str(
            r#"{"kind": "matrix", "matrix": [[3.0, 0.0], [0.0, 1.0]], "weights": [1.0, 1.0]}"#,
        )
        .unwrap();
        let p = spec.problem().unwrap();
        assert_relative_eq!(p.spectrum().values()[0], 3.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn worst_case_error_nonincreasing(
            mut raw in proptest::collection::vec(0.0_f64..10.0, 1..12),
            n in 0usize..14,
        ) {
            raw.sort_by(|a, b| b.total_cmp(a));
            let s = SingularSpectrum::explicit(raw).unwrap();
            prop_assert!(worst_case_error(&s, n + 1) <= worst_case_error(&s, n));
        }

        #[test]
        fn power_law_strictly_decreasing(p in 0.1_f64..3.0, m in 2usize..40) {
            let s = SingularSpectrum::power_law(p, m).unwrap();
            for w in s.values().windows(2) {
                prop_assert!(w[0] > w[1]);
            }
        }
    }
}
