//! Average-case errors on spheres and the randomized-error sandwich.
//!
//! The uniform measure on the unit sphere of `span(e₁..e_m)` has coordinate
//! second moments `∫ αᵢ² = 1/m`, which turns the average-case error of the
//! rank-n truncation into the closed form
//! `e_avg(n, m)² = (1/m) Σ_{i=n+1}^m σᵢ²`. Instantiating the average-case
//! lower bound for randomized algorithms at `m = 4n` sandwiches the n-th
//! minimal randomized error between `σ₄ₙ/2` and `σ_{n+1}`.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spectral::{worst_case_error, LinearProblem, SingularSpectrum};

/// Independent stream for a replication index under a master seed. Streams
/// with different indices never overlap, so aggregation by index is
/// bit-identical regardless of execution order.
pub fn replication_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Uniform sampler on the unit sphere `{Σ αᵢ eᵢ : Σ αᵢ² = 1}` of the first
/// `m` coordinates, by normalizing independent standard normal draws.
#[derive(Clone, Debug)]
pub struct SphereSampler {
    dim: usize,
    seed: u64,
    drawn: u64,
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptySpectrum);
        }
        Ok(Self {
            dim,
            seed,
            drawn: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of points drawn so far (the stream position).
    pub fn drawn(&self) -> u64 {
        self.drawn
    }

    pub fn sample(&mut self) -> DVector<f64> {
        loop {
            let mut v = DVector::from_fn(self.dim, |_, _| StandardNormal.sample(&mut self.rng));
            let norm = v.norm();
            if norm > 1e-300 {
                self.drawn += 1;
                v.scale_mut(1.0 / norm);
                return v;
            }
        }
    }
}

/// A Monte Carlo estimate with its provenance.
#[derive(Clone, Copy, Debug)]
pub struct RandomizedEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `sqrt((1/m) Σ_{i=n+1}^m σᵢ²)`: the average-case error of the rank-n
/// truncation under the uniform sphere measure on the first m coordinates.
pub fn avg_case_error_closed_form(
    spectrum: &SingularSpectrum,
    n: usize,
    m: usize,
) -> Result<f64> {
    if m > spectrum.len() {
        return Err(Error::SpectrumTooShort {
            len: spectrum.len(),
            n,
            needed: m,
        });
    }
    if n > m {
        return Err(Error::CardinalityOutOfRange { n, dim: m });
    }
    let sum: f64 = spectrum.values()[n..m].iter().map(|s| s * s).sum();
    // An empty sum is -0.0; keep the sign of zero positive.
    Ok(((sum + 0.0) / m as f64).sqrt())
}

/// Monte Carlo root-mean-square error of the rank-n truncation over sphere
/// samples, evaluated through the raw operator matrix.
pub fn avg_case_error_mc(
    problem: &LinearProblem,
    n: usize,
    sampler: &mut SphereSampler,
    samples: usize,
) -> Result<RandomizedEstimate> {
    let m = sampler.dimension();
    if n > m {
        return Err(Error::CardinalityOutOfRange { n, dim: m });
    }
    Ok(avg_case_error_mc_profile(problem, sampler, samples)?[n])
}

/// Estimates for every cardinality `n = 0..=m` from one shared set of sphere
/// samples; entry `n` is bit-identical to what `avg_case_error_mc` returns
/// for that `n` with the same sampler state.
pub fn avg_case_error_mc_profile(
    problem: &LinearProblem,
    sampler: &mut SphereSampler,
    samples: usize,
) -> Result<Vec<RandomizedEstimate>> {
    if samples < 10 {
        return Err(Error::TooFewSamples {
            got: samples,
            needed: 10,
        });
    }
    let m = sampler.dimension();
    let k = problem.spectrum().len();
    if m > k {
        return Err(Error::CardinalityOutOfRange { n: m, dim: k });
    }
    let sigma = problem.spectrum().values();
    let seed = sampler.seed();

    let mut sum = vec![0.0_f64; m + 1];
    let mut sum_sq = vec![0.0_f64; m + 1];
    for _ in 0..samples {
        let alpha = sampler.sample();
        let f_src = problem.right_basis().columns(0, m) * &alpha;
        let g = problem.apply(&f_src);

        // Squared error of the rank-n truncation, split along the left
        // singular basis: the component outside the basis, the matched
        // coefficients up to n, and the unmatched tail. Both sums accumulate
        // in plain index order so that they cancel exactly when the basis is
        // the standard one.
        let mut beta = DVector::zeros(k);
        let mut beta_sq_sum = 0.0;
        for i in 0..k {
            beta[i] = problem.left_basis().column(i).dot(&g);
            beta_sq_sum += beta[i] * beta[i];
        }
        let mut g_sq_sum = 0.0;
        for j in 0..g.len() {
            g_sq_sum += g[j] * g[j];
        }
        let outside = (g_sq_sum - beta_sq_sum).max(0.0);

        let mut tail: Vec<f64> = vec![0.0; k + 1];
        for i in (0..k).rev() {
            tail[i] = tail[i + 1] + beta[i] * beta[i];
        }

        let mut matched = 0.0;
        for n in 0..=m {
            if n > 0 {
                let i = n - 1;
                let s = sigma[i] * alpha[i];
                let d = beta[i] - s;
                matched += d * d;
            }
            let err_sq = (outside + matched + tail[n]).max(0.0);
            sum[n] += err_sq;
            sum_sq[n] += err_sq * err_sq;
        }
    }

    let n_f = samples as f64;
    let out = (0..=m)
        .map(|n| {
            let mean = sum[n] / n_f;
            let var = ((sum_sq[n] - n_f * mean * mean) / (n_f - 1.0)).max(0.0);
            let se_mean = (var / n_f).sqrt();
            let value = mean.max(0.0).sqrt();
            let standard_error = if value > 0.0 {
                se_mean / (2.0 * value)
            } else {
                0.0
            };
            RandomizedEstimate {
                value,
                standard_error,
                samples,
                seed,
            }
        })
        .collect();
    Ok(out)
}

/// Lower bound for the n-th minimal randomized error: `σ₄ₙ / 2`, from the
/// average-case reduction instantiated on the sphere in `4n` coordinates.
pub fn bakhvalov_lower_bound(spectrum: &SingularSpectrum, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::CardinalityOutOfRange { n, dim: 0 });
    }
    let needed = 4 * n;
    if spectrum.len() < needed {
        return Err(Error::SpectrumTooShort {
            len: spectrum.len(),
            n,
            needed,
        });
    }
    Ok(0.5 * spectrum.values()[needed - 1])
}

/// Two-sided bounds on the n-th minimal randomized error.
#[derive(Clone, Copy, Debug)]
pub struct SandwichBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `σ₄ₙ/2 ≤ (n-th minimal randomized error) ≤ σ_{n+1}`; the upper bound is
/// the deterministic truncation viewed as a one-point randomized algorithm.
pub fn sandwich_report(spectrum: &SingularSpectrum, n: usize) -> Result<SandwichBounds> {
    let lower = bakhvalov_lower_bound(spectrum, n)?;
    let upper = worst_case_error(spectrum, n);
    Ok(SandwichBounds { lower, upper })
}
