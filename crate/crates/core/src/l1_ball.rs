//! The map `x ↦ ‖x‖₂²` on the ℓ₁ ball: easy to estimate with random signs,
//! provably hard for any fixed set of linear functionals.
//!
//! The randomized side uses the functional `L(x) = Σ ±xₖ` with independent
//! fair signs, whose variance is `‖x‖₂²`; the sample variance of n
//! independent copies is an unbiased estimator with
//! `Var = (2/n)·(‖x‖₂⁴·n/(n−1) − ‖x‖₄⁴)`, so the root-mean-square error
//! decays like `n^{-1/2}`.
//!
//! The worst-case side is a Gelfand-width computation: the maximum of
//! `‖x‖₂` over the section of the cross-polytope `‖x‖₁ ≤ 1` by the kernel
//! of n functionals. Every vertex of such a section has support of size at
//! most n+1, so the exact maximum is found by enumerating coordinate
//! supports. Any n functionals leave a kernel vector supported on n+1
//! coordinates with `‖x‖₂ ≥ (n+1)^{-1/2}` at unit ℓ₁ norm, which certifies
//! the width lower bound and with it a floor of `(width)²/2` on the
//! worst-case error of any algorithm using n functionals.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::information::InformationMap;
use crate::randomized::replication_rng;

/// Supports up to this source dimension are enumerated exactly.
pub const WIDTH_DIM_LIMIT: usize = 10;

const RANK_TOL: f64 = 1e-10;

/// A point of the open unit ℓ₁ ball.
#[derive(Clone, Debug, PartialEq)]
pub struct L1Vector {
    coords: DVector<f64>,
}

impl L1Vector {
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        let l1: f64 = coords.iter().map(|x| x.abs()).sum();
        if !l1.is_finite() || l1 >= 1.0 {
            return Err(Error::L1NormTooLarge(l1));
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(coords))
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            coords: DVector::zeros(m),
        }
    }

    /// Mass `l1 < 1` spread uniformly over m coordinates.
    pub fn spread(l1: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptySpectrum);
        }
        Self::new(DVector::from_element(m, l1 / m as f64))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.coords.iter().map(|x| x.abs()).sum()
    }

    pub fn l2_norm_squared(&self) -> f64 {
        self.coords.norm_squared()
    }

    pub fn l4_norm_pow4(&self) -> f64 {
        self.coords.iter().map(|x| x.powi(4)).sum()
    }
}

/// One draw of `L(x) = Σ εₖ xₖ` with independent fair signs.
pub fn rademacher_functional(x: &L1Vector, rng: &mut ChaCha8Rng) -> f64 {
    x.coords
        .iter()
        .map(|&xi| if rng.random::<bool>() { xi } else { -xi })
        .sum()
}

/// Unbiased sample variance with the inner mean `(1/n) Σ Lₖ`.
pub fn sample_variance(draws: &[f64]) -> f64 {
    let n = draws.len();
    debug_assert!(n >= 2);
    let mean = draws.iter().sum::<f64>() / n as f64;
    draws.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1) as f64
}

/// The empirical variance of n independent sign draws; an unbiased
/// estimator of `‖x‖₂²`.
pub fn empirical_variance_estimator(
    x: &L1Vector,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewReplications { got: n, needed: 2 });
    }
    let draws: Vec<f64> = (0..n).map(|_| rademacher_functional(x, rng)).collect();
    Ok(sample_variance(&draws))
}

/// Exact variance of the estimator:
/// `(2/n)·(‖x‖₂⁴·n/(n−1) − ‖x‖₄⁴)`, from `E L⁴ = 3‖x‖₂⁴ − 2‖x‖₄⁴`.
pub fn estimator_variance_exact(x: &L1Vector, n: usize) -> f64 {
    let nf = n as f64;
    let a = x.l2_norm_squared().powi(2);
    let b = x.l4_norm_pow4();
    (2.0 / nf) * (a * nf / (nf - 1.0) - b)
}

/// Deterministic envelope `sqrt(2/(n−1))·‖x‖₁²` dominating the exact RMSE.
pub fn rmse_envelope(x: &L1Vector, n: usize) -> f64 {
    (2.0 / (n as f64 - 1.0)).sqrt() * x.l1_norm().powi(2)
}

/// Empirical root-mean-square error of the estimator around `‖x‖₂²` over
/// `reps` replications. Replication r of cardinality n draws from the
/// stream indexed by n, so results do not depend on which other
/// cardinalities are evaluated.
pub fn estimator_rmse(x: &L1Vector, n: usize, reps: usize, master_seed: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewReplications { got: n, needed: 2 });
    }
    if reps == 0 {
        return Err(Error::TooFewReplications { got: 0, needed: 1 });
    }
    let target = x.l2_norm_squared();
    let mut rng = replication_rng(master_seed, n as u64);
    let mut sum_sq = 0.0;
    for _ in 0..reps {
        let est = empirical_variance_estimator(x, n, &mut rng)?;
        sum_sq += (est - target).powi(2);
    }
    Ok((sum_sq / reps as f64).sqrt())
}

/// One row of the RMSE sweep table.
#[derive(Clone, Copy, Debug)]
pub struct RmseRow {
    pub n: usize,
    pub rmse: f64,
    pub envelope: f64,
    pub reps: usize,
    pub seed: u64,
}

/// Empirical RMSE against the deterministic envelope across a cardinality
/// grid.
pub fn rmse_sweep(
    x: &L1Vector,
    n_grid: &[usize],
    reps: usize,
    master_seed: u64,
) -> Result<Vec<RmseRow>> {
    validate_grid(n_grid)?;
    if reps < 100 {
        return Err(Error::TooFewReplications {
            got: reps,
            needed: 100,
        });
    }
    n_grid
        .iter()
        .map(|&n| {
            Ok(RmseRow {
                n,
                rmse: estimator_rmse(x, n, reps, master_seed)?,
                envelope: rmse_envelope(x, n),
                reps,
                seed: master_seed,
            })
        })
        .collect()
}

fn validate_grid(grid: &[usize]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Exact maximum of `‖x‖₂` over `{‖x‖₁ ≤ 1, N x = 0}` with a maximizing
/// vertex.
#[derive(Clone, Debug)]
pub struct PolytopeMax {
    pub value: f64,
    /// A maximizing point with `‖witness‖₁ = 1`, or zero when the kernel is
    /// trivial.
    pub witness: DVector<f64>,
}

/// Exact maximum of `‖x‖₂` over the kernel section of the cross-polytope.
///
/// Every vertex of the section is supported on at most rank(N)+1
/// coordinates: splitting `x` into positive and negative parts turns the
/// section into a standard-form polytope whose basic feasible solutions
/// have that many nonzeros. Supports are enumerated, each contributing the
/// one-dimensional null vector of the corresponding column submatrix.
pub fn kernel_polytope_max_l2(constraints: &DMatrix<f64>) -> Result<PolytopeMax> {
    let m = constraints.ncols();
    if m == 0 {
        return Err(Error::EmptySpectrum);
    }
    if m > WIDTH_DIM_LIMIT {
        return Err(Error::DimensionLimit {
            m,
            limit: WIDTH_DIM_LIMIT,
        });
    }
    let scale = constraints
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);
    let tol = RANK_TOL * scale;

    let rank = m - nullspace_small(constraints, tol).len();
    let max_support = (rank + 1).min(m);

    let mut best_val = f64::NEG_INFINITY;
    let mut best_x: Option<DVector<f64>> = None;
    for size in 1..=max_support {
        for combo in (0..m).combinations(size) {
            let sub = constraints.select_columns(combo.iter());
            let null = nullspace_small(&sub, tol);
            if null.len() != 1 {
                continue;
            }
            let v = &null[0];
            let l1: f64 = v.iter().map(|x| x.abs()).sum();
            if l1 <= tol {
                continue;
            }
            let mut x = DVector::zeros(m);
            for (pos, &ci) in combo.iter().enumerate() {
                x[ci] = v[pos] / l1;
            }
            let val = x.norm();
            if val > best_val + 1e-15 {
                best_val = val;
                best_x = Some(x);
            }
        }
    }

    match best_x {
        Some(mut x) => {
            canonical_sign(&mut x);
            Ok(PolytopeMax {
                value: best_val,
                witness: x,
            })
        }
        None => Ok(PolytopeMax {
            value: 0.0,
            witness: DVector::zeros(m),
        }),
    }
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

// Null-space basis of a small dense matrix by Gaussian elimination with
// partial pivoting; pivots below tol count as zero.
fn nullspace_small(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = a.shape();
    let mut u = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let mut best = row;
        for r in row + 1..rows {
            if u[(r, col)].abs() > u[(best, col)].abs() {
                best = r;
            }
        }
        if u[(best, col)].abs() <= tol {
            continue;
        }
        u.swap_rows(row, best);
        for r in row + 1..rows {
            let factor = u[(r, col)] / u[(row, col)];
            for c in col..cols {
                u[(r, c)] -= factor * u[(row, c)];
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for fc in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut x = DVector::zeros(cols);
        x[fc] = 1.0;
        for &(r, c) in pivots.iter().rev() {
            let mut s = 0.0;
            for j in c + 1..cols {
                s += u[(r, j)] * x[j];
            }
            x[c] = -s / u[(r, c)];
        }
        basis.push(x);
    }
    basis
}

/// `(n+1)^{-1/2}` for `n < m`, else 0: any n functionals admit a kernel
/// vector on n+1 coordinates whose ℓ₂ norm at unit ℓ₁ norm is at least this
/// (Cauchy–Schwarz). Independent of seeds and search quality.
pub fn certified_width_lower_bound(m: usize, n: usize) -> f64 {
    if n >= m {
        0.0
    } else {
        ((n + 1) as f64).recip().sqrt()
    }
}

/// Two-sided width estimate with the best information found.
#[derive(Clone, Debug)]
pub struct WidthEstimate {
    pub m: usize,
    pub n: usize,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub best_information: InformationMap,
    /// Near-maximizer of `‖x‖₂` for the best information, scaled into the
    /// open ℓ₁ ball.
    pub witness: L1Vector,
}

/// Bounds on the Gelfand width of the ℓ₁ ball in ℓ₂ under n functionals:
/// the upper bound is the exact section maximum minimized over randomized
/// restarts of a shrinking coordinate search; the lower bound is the
/// `(n+1)^{-1/2}` certificate.
pub fn gelfand_width_bounds(
    m: usize,
    n: usize,
    restarts: usize,
    seed: u64,
) -> Result<WidthEstimate> {
    if m == 0 {
        return Err(Error::EmptySpectrum);
    }
    if m > WIDTH_DIM_LIMIT {
        return Err(Error::DimensionLimit {
            m,
            limit: WIDTH_DIM_LIMIT,
        });
    }
    if restarts == 0 {
        return Err(Error::NoRestarts);
    }

    let best = if n == 0 {
        DMatrix::zeros(0, m)
    } else {
        let mut best_val = f64::INFINITY;
        let mut best_mat: Option<DMatrix<f64>> = None;
        for restart in 0..restarts {
            let mut rng = replication_rng(seed, restart as u64);
            let init = random_row_orthonormal(n, m, &mut rng);
            let (val, mat) = shrink_search(init);
            if val < best_val - 1e-15 {
                best_val = val;
                best_mat = Some(mat);
            }
        }
        best_mat.expect("at least one restart")
    };

    let polytope = kernel_polytope_max_l2(&best)?;
    let lower_bound = certified_width_lower_bound(m, n);

    if n < m {
        // A kernel vector supported on the first n+1 coordinates realizes
        // the certificate for the chosen information.
        let sub = best.columns(0, (n + 1).min(m)).clone_owned();
        let scale = best.iter().fold(1.0_f64, |a, &v| a.max(v.abs()));
        let null = nullspace_small(&sub, RANK_TOL * scale);
        let v = null.first().expect("n x (n+1) system always has a kernel");
        let l1: f64 = v.iter().map(|x| x.abs()).sum();
        debug_assert!(v.norm() / l1 >= lower_bound - 1e-12);
    }

    let witness = L1Vector::new(polytope.witness.scale(1.0 - 1e-9))
        .expect("scaled vertex lies inside the open ball");
    Ok(WidthEstimate {
        m,
        n,
        lower_bound,
        upper_bound: polytope.value,
        best_information: InformationMap::from_rows(&best),
        witness,
    })
}

fn random_row_orthonormal(n: usize, m: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(m, n, |_, _| StandardNormal.sample(rng));
        let q = g.qr().q();
        if q.ncols() == n {
            return q.transpose();
        }
    }
}

// Coordinate-wise perturbation search, accepting on strict decrease and
// halving the step when a full sweep stalls.
fn shrink_search(mut current: DMatrix<f64>) -> (f64, DMatrix<f64>) {
    let width = |mat: &DMatrix<f64>| {
        kernel_polytope_max_l2(mat)
            .expect("dimensions checked by caller")
            .value
    };
    let mut val = width(&current);
    let mut step = 0.25;
    let mut evals = 0usize;
    while step >= 1e-7 && evals < 20_000 {
        let mut improved = false;
        for i in 0..current.nrows() {
            for j in 0..current.ncols() {
                for delta in [step, -step] {
                    let mut cand = current.clone();
                    cand[(i, j)] += delta;
                    let v = width(&cand);
                    evals += 1;
                    if v < val - 1e-14 {
                        current = cand;
                        val = v;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (val, current)
}

/// A feasible point of `{‖x‖₁ = 1, N x = 0}`, or None when the kernel is
/// trivial. Used to cross-check the exact maximum by sampling.
pub fn kernel_boundary_sample(
    constraints: &DMatrix<f64>,
    rng: &mut ChaCha8Rng,
) -> Option<DVector<f64>> {
    let scale = constraints
        .iter()
        .fold(1.0_f64, |a, &v| a.max(v.abs()));
    let basis = nullspace_small(constraints, RANK_TOL * scale);
    if basis.is_empty() {
        return None;
    }
    let mut x = DVector::zeros(constraints.ncols());
    for b in &basis {
        let c: f64 = StandardNormal.sample(rng);
        x.axpy(c, b, 1.0);
    }
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    if l1 < 1e-12 {
        return None;
    }
    Some(x / l1)
}

/// Certified worst-case floor for estimating `‖x‖₂²` from n functionals:
/// half the squared width lower bound.
pub fn wc_lower_bound_norm_squared(estimate: &WidthEstimate) -> f64 {
    0.5 * estimate.lower_bound.powi(2)
}

/// One row of the worst-case vs randomized comparison.
#[derive(Clone, Copy, Debug)]
pub struct SeparationRow {
    pub n: usize,
    pub wc_floor: f64,
    /// Empirical estimator RMSE; absent for n < 2 where the estimator does
    /// not exist.
    pub ran_rmse: Option<f64>,
}

/// Worst-case floor against randomized RMSE on the default input: mass 0.9
/// spread over all m coordinates.
pub fn separation_report(
    m: usize,
    n_grid: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<SeparationRow>> {
    let x = L1Vector::spread(0.9, m)?;
    separation_report_for(&x, n_grid, reps, seed)
}

/// Same comparison for a caller-chosen input.
pub fn separation_report_for(
    x: &L1Vector,
    n_grid: &[usize],
    reps: usize,
    seed: u64,
) -> Result<Vec<SeparationRow>> {
    validate_grid(n_grid)?;
    if reps < 100 {
        return Err(Error::TooFewReplications {
            got: reps,
            needed: 100,
        });
    }
    let m = x.len();
    n_grid
        .iter()
        .map(|&n| {
            let floor = 0.5 * certified_width_lower_bound(m, n).powi(2);
            let ran_rmse = if n >= 2 {
                Some(estimator_rmse(x, n, reps, seed)?)
            } else {
                None
            };
            Ok(SeparationRow {
                n,
                wc_floor: floor,
                ran_rmse,
            })
        })
        .collect()
}
