//! Nonadaptive information maps: ordered lists of linear functionals on the
//! source space, their kernels, and radii of information.
//!
//! For a linear problem `S` and linear information `N`, the radius of `N`
//! equals `sup { ‖S f‖ : N f = 0, ‖f‖_F < 1 }`, the top singular value of
//! `S` restricted to the kernel of `N`. It is the minimal worst-case error
//! of any algorithm that uses `N`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spectral::{Element, LinearProblem};

/// Relative tolerance for rank decisions, scaled by the largest functional
/// norm involved.
pub const RANK_RTOL: f64 = 1e-10;

/// An ordered list of linear functionals `Lⱼ(f) = Σᵢ Lⱼᵢ fᵢ`.
///
/// Serialized as a bare JSON array of coefficient arrays.
#[derive(Clone, Debug, PartialEq)]
pub struct InformationMap {
    dim: usize,
    functionals: Vec<DVector<f64>>,
}

impl InformationMap {
    pub fn new(dim: usize, functionals: Vec<DVector<f64>>) -> Result<Self> {
        for l in &functionals {
            if l.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: l.len(),
                });
            }
        }
        Ok(Self { dim, functionals })
    }

    /// Information consisting of no functionals at all.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            functionals: Vec::new(),
        }
    }

    /// Rows of a matrix, one functional per row.
    pub fn from_rows(rows: &DMatrix<f64>) -> Self {
        Self {
            dim: rows.ncols(),
            functionals: (0..rows.nrows())
                .map(|i| rows.row(i).transpose())
                .collect(),
        }
    }

    /// Parse from nested arrays (the JSON wire format). Empty input needs an
    /// explicit dimension, so it is rejected here.
    pub fn from_nested(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map(|r| r.len()).ok_or(Error::EmptySpectrum)?;
        let functionals = rows
            .into_iter()
            .map(|r| {
                if r.len() == dim {
                    Ok(DVector::from_vec(r))
                } else {
                    Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: r.len(),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, functionals })
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        self.functionals
            .iter()
            .map(|l| l.iter().copied().collect())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn functionals(&self) -> &[DVector<f64>] {
        &self.functionals
    }

    /// Copy with one more functional at the end.
    pub fn appended(&self, functional: DVector<f64>) -> Result<Self> {
        if functional.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: functional.len(),
            });
        }
        let mut functionals = self.functionals.clone();
        functionals.push(functional);
        Ok(Self {
            dim: self.dim,
            functionals,
        })
    }

    /// Functionals stacked as rows (0×dim when empty).
    pub fn as_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.functionals.len(), self.dim);
        for (i, l) in self.functionals.iter().enumerate() {
            m.set_row(i, &l.transpose());
        }
        m
    }

    /// Keep only a maximal linearly independent subset, scanning in order;
    /// dependent functionals do not increase the information.
    pub fn canonicalized(&self) -> Self {
        let max_norm = self
            .functionals
            .iter()
            .map(|l| l.norm())
            .fold(0.0_f64, f64::max);
        let tol = RANK_RTOL * max_norm;
        let mut kept: Vec<DVector<f64>> = Vec::new();
        let mut ortho: Vec<DVector<f64>> = Vec::new();
        for l in &self.functionals {
            let mut residual = l.clone();
            for q in &ortho {
                let c = q.dot(&residual);
                residual.axpy(-c, q, 1.0);
            }
            let norm = residual.norm();
            if norm > tol && norm > 0.0 {
                residual.scale_mut(1.0 / norm);
                ortho.push(residual);
                kept.push(l.clone());
            }
        }
        Self {
            dim: self.dim,
            functionals: kept,
        }
    }

    /// Number of linearly independent functionals.
    pub fn rank(&self) -> usize {
        self.canonicalized().len()
    }
}

/// Radius of nonadaptive information, with the kernel direction achieving it.
#[derive(Clone, Debug)]
pub struct RadiusReport {
    pub radius: f64,
    pub kernel_dim: usize,
    /// Unit-norm kernel element maximizing `‖S f‖`; zero when the kernel is
    /// trivial.
    pub witness: Element,
}

/// Orthonormal basis (in the weighted inner product) of `ker N`, returned as
/// columns in source coordinates. The dimension is `m − rank(N)`.
pub fn kernel_basis(info: &InformationMap, weights: &DVector<f64>) -> Result<DMatrix<f64>> {
    let m = info.dim();
    if weights.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: weights.len(),
        });
    }
    if weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
        return Err(Error::NonPositiveWeight);
    }

    // Work in coordinates g = diag(w) f where the source norm is Euclidean:
    // L(f) = (L ∘ diag(w)⁻¹)(g). Padding with zero rows up to m rows makes
    // the SVD return the full right factor, which carries the null space.
    let n = info.len();
    let mut padded = DMatrix::zeros(n.max(m), m);
    for (j, l) in info.functionals().iter().enumerate() {
        for i in 0..m {
            padded[(j, i)] = l[i] / weights[i];
        }
    }

    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let top = svd.singular_values[order[0]];
    let tol = RANK_RTOL * top;
    let rank = order
        .iter()
        .filter(|&&i| svd.singular_values[i] > tol)
        .count();
    let nullity = m - rank;

    let mut basis = DMatrix::zeros(m, nullity);
    for (col, &idx) in order.iter().rev().take(nullity).rev().enumerate() {
        let mut v = v_t.row(idx).transpose();
        canonical_sign(&mut v);
        // Back to source coordinates; stays orthonormal in the weighted
        // inner product.
        for i in 0..m {
            v[i] /= weights[i];
        }
        basis.set_column(col, &v);
    }
    Ok(basis)
}

fn canonical_sign(v: &mut DVector<f64>) {
    let pivot = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if v[pivot] < 0.0 {
        v.neg_mut();
    }
}

/// Radius of nonadaptive information: the top singular value of `S`
/// restricted to `ker N`, with the maximizing kernel direction as witness.
pub fn radius_nonadaptive(problem: &LinearProblem, info: &InformationMap) -> Result<RadiusReport> {
    if info.dim() != problem.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.source_dim(),
            actual: info.dim(),
        });
    }
    let kernel = kernel_basis(info, problem.source_weights())?;
    let k = kernel.ncols();
    if k == 0 {
        return Ok(RadiusReport {
            radius: 0.0,
            kernel_dim: 0,
            witness: Element::zeros(problem.spectrum().len()),
        });
    }
    let restricted = problem.matrix() * &kernel;
    let svd = restricted.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let mut top_idx = 0;
    for i in 1..svd.singular_values.len() {
        if svd.singular_values[i] > svd.singular_values[top_idx] {
            top_idx = i;
        }
    }
    let radius = svd.singular_values[top_idx];
    let mut coeffs = v_t.row(top_idx).transpose();
    canonical_sign(&mut coeffs);
    let witness_src = &kernel * coeffs;
    Ok(RadiusReport {
        radius,
        kernel_dim: k,
        witness: problem.coefficients_of(&witness_src),
    })
}

/// The information achieving the minimal radius `σ_{n+1}`: the functionals
/// `f ↦ ⟨f, eᵢ⟩_F` for the first n right singular vectors.
pub fn truncation_information(problem: &LinearProblem, n: usize) -> Result<InformationMap> {
    let k = problem.spectrum().len();
    if n > k {
        return Err(Error::CardinalityOutOfRange { n, dim: k });
    }
    let w = problem.source_weights();
    let functionals = (0..n)
        .map(|i| {
            problem
                .right_basis()
                .column(i)
                .component_mul(w)
                .component_mul(w)
        })
        .collect();
    InformationMap::new(problem.source_dim(), functionals)
}

/// True when an invertible recombination `T·N` of the functional list leaves
/// the radius unchanged within `10⁻⁹ σ₁`. Individual functional values
/// change; the information content does not.
pub fn radius_recombination_check(
    problem: &LinearProblem,
    info: &InformationMap,
    t: &DMatrix<f64>,
) -> Result<bool> {
    let n = info.len();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: t.nrows().max(t.ncols()),
        });
    }
    if n > 0 {
        let svd = t.clone().svd(false, false);
        let top = svd.singular_values.max();
        let bottom = svd.singular_values.min();
        if bottom <= RANK_RTOL * top {
            return Err(Error::SingularRecombination);
        }
    }
    let recombined = InformationMap::from_rows(&(t * info.as_matrix()));
    let r1 = radius_nonadaptive(problem, info)?;
    let r2 = radius_nonadaptive(problem, &recombined)?;
    Ok((r1.radius - r2.radius).abs() <= 1e-9 * problem.spectrum().largest())
}
