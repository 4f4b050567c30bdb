//! A weighted sequence-space model in which discontinuous linear
//! functionals exist and the replacement of information by continuous
//! information is executable.
//!
//! The source space carries the norm `‖f‖² = Σᵢ i^{2q} fᵢ²` (q > 0) and the
//! problem is the embedding into unweighted ℓ₂, with singular values
//! `σᵢ = i^{-q}`. A coefficient functional `L(f) = Σᵢ cᵢ fᵢ` is continuous
//! exactly when its dual series `Σ (cᵢ/i^q)²` converges; for the power-law
//! families `cᵢ = α·i^p` handled here that is decidable: continuous iff
//! every surviving exponent satisfies `p < q − 1/2`. The boundary
//! `p = q − 1/2` diverges like the harmonic series and is classified
//! discontinuous.
//!
//! Continuity of a functional restricted to `∩ⱼ ker Lⱼ` reduces to an exact
//! linear system: some combination `L + Σ aⱼ Lⱼ` must cancel every divergent
//! power-law term. Term coefficients are kept as exact rationals so that the
//! cancellation leaves literally nothing behind — no thresholds decide a
//! verdict.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::information::{radius_nonadaptive, InformationMap};
use crate::spectral::{LinearProblem, SingularSpectrum};

type Rat = BigRational;

fn rat(x: f64) -> Rat {
    BigRational::from_float(x).expect("finite input")
}

/// The weighted sequence space with norm `‖f‖² = Σ i^{2q} fᵢ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpace {
    weight_exponent: f64,
}

impl ModelSpace {
    pub fn new(weight_exponent: f64) -> Result<Self> {
        if weight_exponent <= 0.0 || !weight_exponent.is_finite() {
            return Err(Error::NonPositiveWeightExponent(weight_exponent));
        }
        Ok(Self { weight_exponent })
    }

    pub fn weight_exponent(&self) -> f64 {
        self.weight_exponent
    }

    /// Exponents strictly below this are continuous; the boundary itself is
    /// discontinuous.
    pub fn continuity_threshold(&self) -> f64 {
        self.weight_exponent - 0.5
    }

    fn weight(&self, i: usize) -> f64 {
        (i as f64).powf(self.weight_exponent)
    }

    /// Singular value `σᵢ = i^{-q}` of the embedding (1-based index).
    pub fn singular_value(&self, i: usize) -> f64 {
        self.weight(i).recip()
    }

    /// Truncation to the first `dim` coordinates as a concrete problem:
    /// identity matrix, weights `i^q`.
    pub fn truncated_problem(&self, dim: usize) -> Result<LinearProblem> {
        if dim == 0 {
            return Err(Error::EmptySpectrum);
        }
        let weights = DVector::from_fn(dim, |i, _| self.weight(i + 1));
        let sigmas: Vec<f64> = (1..=dim).map(|i| self.singular_value(i)).collect();
        let right = DMatrix::from_fn(dim, dim, |r, c| if r == c { sigmas[c] } else { 0.0 });
        Ok(LinearProblem::from_orthonormal_parts(
            DMatrix::identity(dim, dim),
            weights,
            DMatrix::identity(dim, dim),
            right,
            SingularSpectrum::explicit(sigmas)?,
        ))
    }
}

/// A coefficient functional `L(f) = Σᵢ cᵢ fᵢ` with
/// `cᵢ = Σ_t α_t i^{p_t} + (finitely supported part)ᵢ`.
///
/// Exponents are pairwise distinct and zero-coefficient terms are removed;
/// the finitely supported part never affects continuity. JSON form:
/// `{"terms": [{"p": 1.0, "alpha": 1.0}], "finite": {"2": 1.0}}`
/// with 1-based indices in `finite`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicFunctional {
    // Sorted ascending by exponent; coefficients are nonzero.
    terms: Vec<(f64, Rat)>,
    // 1-based coordinate index -> nonzero coefficient.
    finite: BTreeMap<usize, Rat>,
}

impl SymbolicFunctional {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            finite: BTreeMap::new(),
        }
    }

    /// Build from power-law terms `(p, α)` and finite entries `(index, value)`.
    pub fn new(terms: &[(f64, f64)], finite: &[(usize, f64)]) -> Result<Self> {
        let mut out = Self::zero();
        for &(p, alpha) in terms {
            if !p.is_finite() || !alpha.is_finite() {
                return Err(Error::NonFiniteTerm {
                    exponent: p,
                    coefficient: alpha,
                });
            }
            out.add_term(p, rat(alpha));
        }
        for &(index, value) in finite {
            if index == 0 {
                return Err(Error::ZeroFiniteIndex(index));
            }
            if !value.is_finite() {
                return Err(Error::NonFiniteTerm {
                    exponent: f64::NAN,
                    coefficient: value,
                });
            }
            out.add_finite(index, rat(value));
        }
        Ok(out)
    }

    /// Single power-law family `cᵢ = α i^p`.
    pub fn power_law(p: f64, alpha: f64) -> Result<Self> {
        Self::new(&[(p, alpha)], &[])
    }

    /// Single coordinate functional `value · e_index*` (1-based index).
    pub fn point_mass(index: usize, value: f64) -> Result<Self> {
        Self::new(&[], &[(index, value)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.finite.is_empty()
    }

    /// Power-law terms as `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.terms
            .iter()
            .map(|(p, a)| (*p, a.to_f64().unwrap_or(f64::NAN)))
    }

    /// Finite part as `(index, value)` pairs, 1-based.
    pub fn finite_part(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.finite
            .iter()
            .map(|(i, a)| (*i, a.to_f64().unwrap_or(f64::NAN)))
    }

    /// Largest exponent carrying a nonzero coefficient.
    pub fn max_exponent(&self) -> Option<f64> {
        self.terms.last().map(|(p, _)| *p)
    }

    fn add_term(&mut self, p: f64, alpha: Rat) {
        if alpha.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(q, _)| q.total_cmp(&p)) {
            Ok(idx) => {
                self.terms[idx].1 += alpha;
                if self.terms[idx].1.is_zero() {
                    self.terms.remove(idx);
                }
            }
            Err(idx) => self.terms.insert(idx, (p, alpha)),
        }
    }

    fn add_finite(&mut self, index: usize, value: Rat) {
        if value.is_zero() {
            return;
        }
        let entry = self.finite.entry(index).or_insert_with(Rat::zero);
        *entry += value;
        if entry.is_zero() {
            self.finite.remove(&index);
        }
    }

    /// Exact sum of two functionals.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::one());
        out
    }

    fn add_scaled(&mut self, other: &Self, factor: &Rat) {
        for (p, alpha) in &other.terms {
            self.add_term(*p, alpha * factor);
        }
        for (i, v) in &other.finite {
            self.add_finite(*i, v * factor);
        }
    }

    fn term_coefficient(&self, p: f64) -> Rat {
        match self.terms.binary_search_by(|(q, _)| q.total_cmp(&p)) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Value of the coefficient `cᵢ` (1-based index).
    pub fn coefficient(&self, index: usize) -> f64 {
        let x = index as f64;
        let mut c = 0.0;
        for (p, alpha) in &self.terms {
            c += alpha.to_f64().unwrap_or(f64::NAN) * pow_idx(x, *p);
        }
        if let Some(v) = self.finite.get(&index) {
            c += v.to_f64().unwrap_or(f64::NAN);
        }
        c
    }

    /// First `dim` coefficients as a dense vector.
    pub fn truncated(&self, dim: usize) -> DVector<f64> {
        let term_f64: Vec<(f64, f64)> = self.terms().collect();
        let mut out = DVector::zeros(dim);
        for i in 1..=dim {
            let x = i as f64;
            let mut c = 0.0;
            for &(p, alpha) in &term_f64 {
                c += alpha * pow_idx(x, p);
            }
            if let Some(v) = self.finite.get(&i) {
                c += v.to_f64().unwrap_or(f64::NAN);
            }
            out[i - 1] = c;
        }
        out
    }
}

// Integer exponents of modest size go through powi so that e.g. i^1 is
// exactly i; everything else uses powf.
fn pow_idx(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p.fract() == 0.0 && p.abs() <= 32.0 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    p: f64,
    alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct FunctionalRepr {
    #[serde(default)]
    terms: Vec<TermRepr>,
    #[serde(default)]
    finite: BTreeMap<usize, f64>,
}

impl Serialize for SymbolicFunctional {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = FunctionalRepr {
            terms: self
                .terms()
                .map(|(p, alpha)| TermRepr { p, alpha })
                .collect(),
            finite: self.finite_part().collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymbolicFunctional {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FunctionalRepr::deserialize(deserializer)?;
        let terms: Vec<(f64, f64)> = repr.terms.iter().map(|t| (t.p, t.alpha)).collect();
        let finite: Vec<(usize, f64)> = repr.finite.iter().map(|(&i, &v)| (i, v)).collect();
        SymbolicFunctional::new(&terms, &finite).map_err(D::Error::custom)
    }
}

/// Continuity verdict for a functional on the whole space or on a
/// restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    Continuous,
    Discontinuous,
}

/// Continuous iff every surviving power-law exponent is below `q − 1/2`.
/// The finitely supported part is always continuous.
pub fn classify_continuity(l: &SymbolicFunctional, space: &ModelSpace) -> Continuity {
    match l.max_exponent() {
        Some(p) if p >= space.continuity_threshold() => Continuity::Discontinuous,
        _ => Continuity::Continuous,
    }
}

/// Verdict for a functional restricted to the joint kernel of prior
/// functionals, with the extension coefficients when continuous.
#[derive(Clone, Debug)]
pub struct RestrictedVerdict {
    pub continuity: Continuity,
    extension: Option<Vec<Rat>>,
}

impl RestrictedVerdict {
    pub fn is_continuous(&self) -> bool {
        self.continuity == Continuity::Continuous
    }

    /// The numbers `aⱼ` with `L + Σ aⱼ Lⱼ` continuous on the whole space,
    /// when they exist.
    pub fn extension_coefficients(&self) -> Option<Vec<f64>> {
        self.extension
            .as_ref()
            .map(|a| a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
    }

    fn extension_exact(&self) -> Option<&[Rat]> {
        self.extension.as_deref()
    }
}

/// Decide whether `l` is continuous on `∩ⱼ ker priors[j]`: equivalent to the
/// existence of `aⱼ` with `l + Σ aⱼ priors[j]` continuous on the whole
/// space. The divergent power-law terms of the combination must all cancel;
/// this is an exact linear system over the term coefficients. When several
/// solutions cancel everything, the one of minimal Euclidean norm is chosen.
pub fn classify_continuity_restricted(
    l: &SymbolicFunctional,
    priors: &[SymbolicFunctional],
    space: &ModelSpace,
) -> RestrictedVerdict {
    let threshold = space.continuity_threshold();
    let mut divergent: Vec<f64> = Vec::new();
    let mut note = |f: &SymbolicFunctional| {
        for (p, _) in &f.terms {
            if *p >= threshold && !divergent.iter().any(|q| q == p) {
                divergent.push(*p);
            }
        }
    };
    note(l);
    for prior in priors {
        note(prior);
    }
    divergent.sort_by(f64::total_cmp);

    if divergent.is_empty() {
        return RestrictedVerdict {
            continuity: Continuity::Continuous,
            extension: Some(vec![Rat::zero(); priors.len()]),
        };
    }

    let rows = divergent.len();
    let cols = priors.len();
    let mut matrix = vec![vec![Rat::zero(); cols]; rows];
    let mut rhs = vec![Rat::zero(); rows];
    for (r, &p) in divergent.iter().enumerate() {
        for (c, prior) in priors.iter().enumerate() {
            matrix[r][c] = prior.term_coefficient(p);
        }
        rhs[r] = -l.term_coefficient(p);
    }

    match exact::min_norm_solution(&matrix, &rhs) {
        Some(a) => RestrictedVerdict {
            continuity: Continuity::Continuous,
            extension: Some(a),
        },
        None => RestrictedVerdict {
            continuity: Continuity::Discontinuous,
            extension: None,
        },
    }
}

/// One step of the transformation; `extension` is empty for discontinuous
/// steps.
#[derive(Clone, Debug, Serialize)]
pub struct TransformStep {
    pub verdict: Continuity,
    pub extension: Vec<f64>,
}

/// Input information, emitted continuous information, and the per-step
/// bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct TransformTrace {
    pub input: Vec<SymbolicFunctional>,
    pub output: Vec<SymbolicFunctional>,
    pub steps: Vec<TransformStep>,
}

/// Replace information by continuous information, one functional at a time:
/// if `L_{k+1}` is continuous on the joint kernel of `L₁..L_k`, emit the
/// combination with all divergent terms cancelled; otherwise emit the zero
/// functional. Every emitted functional is continuous on the whole space.
pub fn transform_information(info: &[SymbolicFunctional], space: &ModelSpace) -> TransformTrace {
    let mut output = Vec::with_capacity(info.len());
    let mut steps = Vec::with_capacity(info.len());
    for (k, l) in info.iter().enumerate() {
        let verdict = classify_continuity_restricted(l, &info[..k], space);
        match verdict.extension_exact() {
            Some(a) => {
                let mut star = l.clone();
                for (j, coeff) in a.iter().enumerate() {
                    star.add_scaled(&info[j], coeff);
                }
                debug_assert_eq!(classify_continuity(&star, space), Continuity::Continuous);
                steps.push(TransformStep {
                    verdict: Continuity::Continuous,
                    extension: verdict.extension_coefficients().unwrap_or_default(),
                });
                output.push(star);
            }
            None => {
                steps.push(TransformStep {
                    verdict: Continuity::Discontinuous,
                    extension: Vec::new(),
                });
                output.push(SymbolicFunctional::zero());
            }
        }
    }
    TransformTrace {
        input: info.to_vec(),
        output,
        steps,
    }
}

/// Radii of the input and transformed information on truncations of the
/// model space.
#[derive(Clone, Debug, Serialize)]
pub struct LadderRow {
    pub dim: usize,
    pub radius_input: f64,
    pub radius_transformed: f64,
}

impl LadderRow {
    /// How much information the discontinuous parts still buy at this
    /// truncation.
    pub fn gap(&self) -> f64 {
        self.radius_transformed - self.radius_input
    }
}

/// Truncate functionals and problem to each dimension in `dims` (strictly
/// increasing) and compare radii. The input information refines the
/// transformed one by construction, so `radius_input ≤ radius_transformed`
/// row by row.
pub fn truncated_radius_ladder(
    info: &[SymbolicFunctional],
    space: &ModelSpace,
    dims: &[usize],
) -> Result<Vec<LadderRow>> {
    if dims.is_empty() || dims.windows(2).any(|w| w[0] >= w[1]) || dims[0] == 0 {
        return Err(Error::InvalidLadder);
    }
    let trace = transform_information(info, space);
    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        let problem = space.truncated_problem(dim)?;
        let truncate = |fs: &[SymbolicFunctional]| -> Result<InformationMap> {
            InformationMap::new(dim, fs.iter().map(|f| f.truncated(dim)).collect())
        };
        let input_info = truncate(info)?;
        let star_info = truncate(&trace.output)?;
        let radius_input = radius_nonadaptive(&problem, &input_info)?.radius;
        let radius_transformed = radius_nonadaptive(&problem, &star_info)?.radius;
        rows.push(LadderRow {
            dim,
            radius_input,
            radius_transformed,
        });
    }
    Ok(rows)
}

mod exact {
    //! Exact rational linear algebra for the cancellation systems. The
    //! systems are tiny (one row per divergent exponent), so clarity wins
    //! over asymptotics.
    #![allow(clippy::needless_range_loop)]

    use super::Rat;
    use num_traits::{One, Signed, Zero};

    /// Solve `M a = rhs` exactly. Returns the minimum-Euclidean-norm
    /// solution when the system is consistent, `None` otherwise.
    pub fn min_norm_solution(matrix: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
        let rows = matrix.len();
        let cols = matrix.first().map(|r| r.len()).unwrap_or(0);

        // Reduced row echelon form of the augmented system.
        let mut aug: Vec<Vec<Rat>> = matrix
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();

        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut pivot_row = 0;
        for col in 0..cols {
            let Some(best) = (pivot_row..rows).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(pivot_row, best);
            let inv = aug[pivot_row][col].clone();
            for entry in aug[pivot_row].iter_mut() {
                *entry = entry.clone() / inv.clone();
            }
            for r in 0..rows {
                if r != pivot_row && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for c in 0..=cols {
                        let delta = factor.clone() * aug[pivot_row][c].clone();
                        aug[r][c] = aug[r][c].clone() - delta;
                    }
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
            if pivot_row == rows {
                break;
            }
        }

        // Inconsistent when a zero row has nonzero right-hand side.
        for r in pivot_row..rows {
            if !aug[r][cols].is_zero() {
                return None;
            }
        }

        // Particular solution: free variables at zero.
        let mut particular = vec![Rat::zero(); cols];
        for (i, &pc) in pivot_cols.iter().enumerate() {
            particular[pc] = aug[i][cols].clone();
        }

        let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        if free_cols.is_empty() {
            return Some(particular);
        }

        // Null-space basis, one vector per free column.
        let mut null_basis: Vec<Vec<Rat>> = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); cols];
            v[fc] = Rat::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -aug[i][fc].clone();
            }
            null_basis.push(v);
        }

        // Minimize ‖particular + Σ tₖ nullₖ‖²: solve (NᵀN) t = −Nᵀ particular.
        let t_dim = null_basis.len();
        let mut gram = vec![vec![Rat::zero(); t_dim]; t_dim];
        let mut target = vec![Rat::zero(); t_dim];
        for i in 0..t_dim {
            for j in 0..t_dim {
                let mut s = Rat::zero();
                for c in 0..cols {
                    s += null_basis[i][c].clone() * null_basis[j][c].clone();
                }
                gram[i][j] = s;
            }
            let mut s = Rat::zero();
            for c in 0..cols {
                s += null_basis[i][c].clone() * particular[c].clone();
            }
            target[i] = -s;
        }
        let t = solve_square(&mut gram, &mut target)?;

        let mut solution = particular;
        for (k, tk) in t.iter().enumerate() {
            for c in 0..cols {
                let delta = tk.clone() * null_basis[k][c].clone();
                solution[c] += delta;
            }
        }
        Some(solution)
    }

    // Gaussian elimination with pivoting by largest absolute value; the Gram
    // matrix of a full-column-rank basis is positive definite, so this never
    // fails in practice.
    fn solve_square(a: &mut [Vec<Rat>], b: &mut [Rat]) -> Option<Vec<Rat>> {
        let n = b.len();
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()))?;
            if a[pivot][col].is_zero() {
                return None;
            }
            a.swap(col, pivot);
            b.swap(col, pivot);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone() / a[col][col].clone();
                    for c in col..n {
                        let delta = factor.clone() * a[col][c].clone();
                        a[r][c] = a[r][c].clone() - delta;
                    }
                    let delta = factor * b[col].clone();
                    b[r] = b[r].clone() - delta;
                }
            }
        }
        Some(
            (0..n)
                .map(|i| b[i].clone() / a[i][i].clone())
                .collect(),
        )
    }

}
