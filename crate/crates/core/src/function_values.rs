//! Standard information — function values — on finite grid models.
//!
//! A grid model carries points in [0,1], a symmetric positive definite
//! inner-product matrix on value vectors, and an operator acting on them.
//! Factoring the Gram matrix as `G = CᵀC` turns everything Euclidean:
//! the operator becomes `S·C⁻¹` and the point evaluation at grid index i
//! becomes the functional `C⁻ᵀ eᵢ`. The best n evaluation points are found
//! by exhaustive subset search, which is its own oracle at this scale, and
//! can only do worse than the best n arbitrary functionals: `e_std ≥ e_all`.

use itertools::Itertools;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::information::{radius_nonadaptive, InformationMap};
use crate::randomized::RandomizedEstimate;
use crate::spectral::{worst_case_error, LinearProblem};

/// Exhaustive subset search is kept to this many grid points.
pub const STD_DIM_LIMIT: usize = 12;

/// Function values on a grid with a general inner product.
#[derive(Clone, Debug)]
pub struct GridModel {
    grid: Vec<f64>,
    gram: DMatrix<f64>,
    operator: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    euclid: LinearProblem,
}

impl GridModel {
    pub fn new(grid: Vec<f64>, gram: DMatrix<f64>, operator: DMatrix<f64>) -> Result<Self> {
        let m = grid.len();
        if m == 0 {
            return Err(Error::EmptySpectrum);
        }
        if grid.iter().any(|&x| !x.is_finite() || !(0.0..=1.0).contains(&x)) {
            return Err(Error::GridOutOfRange);
        }
        if gram.nrows() != m || gram.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: gram.nrows().max(gram.ncols()),
            });
        }
        if operator.ncols() != m || operator.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: operator.ncols(),
            });
        }
        let sym_defect = (&gram - gram.transpose()).norm();
        if sym_defect > 1e-10 * gram.norm().max(1.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let chol = Cholesky::new(gram.clone()).ok_or(Error::NotPositiveDefinite)?;

        // G = L Lᵀ, so ‖f‖² = ‖Lᵀ f‖² and the Euclidean operator is
        // S (Lᵀ)⁻¹, computed by a triangular solve on Sᵀ.
        let l = chol.l();
        let mut rhs = operator.transpose();
        l.solve_lower_triangular_mut(&mut rhs);
        let euclid_matrix = rhs.transpose();
        let euclid = LinearProblem::with_unit_weights(euclid_matrix)?;
        Ok(Self {
            grid,
            gram,
            operator,
            chol,
            euclid,
        })
    }

    /// Random well-conditioned model, deterministic under the seed.
    pub fn random(m: usize, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut grid: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        grid.sort_by(f64::total_cmp);
        let b: DMatrix<f64> = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
        let gram = &b * b.transpose() + DMatrix::identity(m, m) * (0.5 * m as f64);
        let operator: DMatrix<f64> =
            DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
        Self::new(grid, gram, operator)
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn operator(&self) -> &DMatrix<f64> {
        &self.operator
    }

    /// The model as a Euclidean problem (unit weights after the Cholesky
    /// change of coordinates).
    pub fn euclidean_problem(&self) -> &LinearProblem {
        &self.euclid
    }

    /// Minimal worst-case error over arbitrary linear functionals.
    pub fn e_all(&self, n: usize) -> f64 {
        worst_case_error(self.euclid.spectrum(), n)
    }

    // Point evaluation at grid index i in the Euclidean coordinates
    // g = Lᵀ f: the coefficient vector solves L y = eᵢ.
    fn evaluation_functional(&self, i: usize) -> DVector<f64> {
        let m = self.dim();
        let mut e = DVector::zeros(m);
        e[i] = 1.0;
        self.chol.l().solve_lower_triangular_mut(&mut e);
        e
    }
}

/// Outcome of the function-values vs arbitrary-functionals comparison.
#[derive(Clone, Debug)]
pub struct StdAllComparison {
    pub e_std: f64,
    pub e_all: f64,
    /// Grid indices of the best n-point subset.
    pub best_subset: Vec<usize>,
}

/// Best n evaluation points against the best n arbitrary functionals.
/// The subset search is exhaustive; `e_std ≥ e_all` always.
pub fn std_vs_all(model: &GridModel, n: usize) -> Result<StdAllComparison> {
    let m = model.dim();
    if m > STD_DIM_LIMIT {
        return Err(Error::DimensionLimit {
            m,
            limit: STD_DIM_LIMIT,
        });
    }
    if n > m {
        return Err(Error::CardinalityOutOfRange { n, dim: m });
    }
    let problem = model.euclidean_problem();
    let mut best = f64::INFINITY;
    let mut best_subset = Vec::new();
    for subset in (0..m).combinations(n) {
        let functionals = subset
            .iter()
            .map(|&i| model.evaluation_functional(i))
            .collect();
        let info = InformationMap::new(m, functionals)?;
        let radius = radius_nonadaptive(problem, &info)?.radius;
        if radius < best - 1e-15 {
            best = radius;
            best_subset = subset;
        }
    }
    Ok(StdAllComparison {
        e_std: best,
        e_all: model.e_all(n),
        best_subset,
    })
}

/// Monte Carlo integration `n⁻¹ Σ f(xⱼ)` over uniform points in [0,1].
pub fn mc_integration<F: Fn(f64) -> f64>(
    f: F,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RandomizedEstimate> {
    if n == 0 {
        return Err(Error::TooFewSamples { got: 0, needed: 1 });
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let v = f(rng.random::<f64>());
        sum += v;
        sum_sq += v * v;
    }
    let n_f = n as f64;
    let mean = sum / n_f;
    let standard_error = if n > 1 {
        (((sum_sq - n_f * mean * mean) / (n_f - 1.0)).max(0.0) / n_f).sqrt()
    } else {
        0.0
    };
    Ok(RandomizedEstimate {
        value: mean,
        standard_error,
        samples: n,
        seed: 0,
    })
}

/// A polynomial `c₀ + c₁ x + …` on [0,1].
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Exact integral over [0,1]: `Σ cⱼ / (j+1)`.
    pub fn integral_unit(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c / (j as f64 + 1.0))
            .sum()
    }

    /// Residual of the constraint `∫₀¹ f = (f(0) + f(1)) / 2`.
    pub fn two_point_residual(&self) -> f64 {
        self.integral_unit() - 0.5 * (self.eval(0.0) + self.eval(1.0))
    }
}

/// Euclidean least-squares projection of the coefficient vector onto the
/// hyperplane `∫₀¹ f = (f(0) + f(1)) / 2`.
pub fn project_to_two_point_constraint(p: &Polynomial) -> Polynomial {
    // The constraint functional in coefficient space: φⱼ = 1/(j+1) − ½([j=0] + 1).
    let d = p.coeffs.len();
    let phi: Vec<f64> = (0..d)
        .map(|j| {
            let at_zero = if j == 0 { 1.0 } else { 0.0 };
            1.0 / (j as f64 + 1.0) - 0.5 * (at_zero + 1.0)
        })
        .collect();
    let phi_norm_sq: f64 = phi.iter().map(|v| v * v).sum();
    if phi_norm_sq == 0.0 {
        return p.clone();
    }
    let value: f64 = phi.iter().zip(&p.coeffs).map(|(a, b)| a * b).sum();
    let scale = value / phi_norm_sq;
    Polynomial::new(
        p.coeffs
            .iter()
            .zip(&phi)
            .map(|(c, f)| c - scale * f)
            .collect(),
    )
}

/// Exact integration from two function values for members of the constraint
/// subspace: returns `(f(0) + f(1)) / 2`, rejecting inputs whose constraint
/// residual exceeds 10⁻¹⁰.
pub fn two_point_exact(p: &Polynomial) -> Result<f64> {
    let residual = p.two_point_residual();
    let tol = 1e-10;
    if residual.abs() > tol {
        return Err(Error::ConstraintViolated {
            residual: residual.abs(),
            tol,
        });
    }
    Ok(0.5 * (p.eval(0.0) + p.eval(1.0)))
}

/// JSON form of a grid model:
/// `{"grid": [...], "gram": [[...]], "S": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridModelSpec {
    pub grid: Vec<f64>,
    pub gram: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    pub operator: Vec<Vec<f64>>,
}

impl GridModelSpec {
    pub fn build(&self) -> Result<GridModel> {
        let m = self.grid.len();
        let gram = nested_to_matrix(&self.gram, m)?;
        let rows = self.operator.len();
        if rows == 0 {
            return Err(Error::EmptySpectrum);
        }
        let operator = nested_to_matrix(&self.operator, rows.max(1))?;
        GridModel::new(self.grid.clone(), gram, operator)
    }
}

fn nested_to_matrix(rows: &[Vec<f64>], expected_rows: usize) -> Result<DMatrix<f64>> {
    if rows.len() != expected_rows {
        return Err(Error::DimensionMismatch {
            expected: expected_rows,
            actual: rows.len(),
        });
    }
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            actual: 0,
        });
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}
