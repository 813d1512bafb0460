//! Schur polynomials at a Schmidt spectrum, and the classical information
//! quantities used throughout the crate.
//!
//! `s_λ(p)` is evaluated with a flagged Jacobi–Trudi determinant
//!
//! ```text
//! s_λ(x_1, …, x_d) = det[ h_{λ_{d+1-j} + j - k}(x_1, …, x_k) ]_{k,j = 1..d}
//! ```
//!
//! where row `k` only sees the first `k` variables and the variables are fed
//! in ascending order. This is the Newton divided-difference form of the
//! bialternant: it is a polynomial identity, so repeated (degenerate)
//! eigenvalues need no special handling, and with ascending variables the
//! diagonal term dominates. The plain Jacobi–Trudi matrix `det[h_{λ_i-i+j}]`
//! cancels catastrophically for skewed spectra once `n` reaches a few dozen;
//! it is kept in [`crate::exact`] where arithmetic is exact.
//!
//! Two evaluation paths share the same table of complete homogeneous
//! polynomials:
//!
//! * the direct path runs Gaussian elimination in double-double arithmetic on
//!   the variables rescaled by `max p`;
//! * the log path runs the same elimination on unscaled values carried as a
//!   double-double mantissa with a separate binary exponent, so it stays
//!   accurate far below the `f64` range (used for `n > 300`).
//!
//! The matrix has nonnegative minors, so elimination runs in natural row
//! order without pivoting.
//!
//! All logarithms are base 2.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::numeric::{stable_sum, ExtFloat};
use crate::young::Partition;

/// Absolute tolerance on `Σ p_i = 1` accepted by [`SchmidtSpectrum::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Above this copy count the distribution uses the log-domain path.
pub const LOG_PATH_THRESHOLD: usize = 300;

// below this a double-double's low word leaves the normal range
const TINY: f64 = 1e-280;

/// Schmidt coefficients of a bipartite pure state, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SchmidtSpectrum {
    p: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Validates a probability vector (sum within `1e-12` of one), then sorts
    /// it descending and renormalizes.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let sum = Self::check_entries(&values)?;
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidSpectrum(format!(
                "entries sum to {sum}, not 1 (tolerance {NORMALIZATION_TOLERANCE:e})"
            )));
        }
        Ok(Self::normalize_sorted(values, sum))
    }

    /// Accepts any nonnegative weights with a positive sum and renormalizes them.
    pub fn from_weights(values: Vec<f64>) -> Result<Self> {
        let sum = Self::check_entries(&values)?;
        Ok(Self::normalize_sorted(values, sum))
    }

    /// The uniform spectrum on `d` levels (a maximally entangled input).
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpectrum(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(SchmidtSpectrum {
            p: vec![1.0 / d as f64; d],
        })
    }

    /// A spectrum drawn uniformly from the probability simplex (flat Dirichlet).
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSpectrum(
                "dimension must be at least 1".into(),
            ));
        }
        let w: Vec<f64> = (0..d).map(|_| Exp1.sample(rng)).collect();
        Self::from_weights(w)
    }

    fn check_entries(values: &[f64]) -> Result<f64> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if let Some(bad) = values.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "entry {bad} is not a nonnegative number"
            )));
        }
        let sum = stable_sum(values.iter().copied());
        if sum <= 0.0 {
            return Err(Error::InvalidSpectrum("entries sum to zero".into()));
        }
        Ok(sum)
    }

    fn normalize_sorted(mut values: Vec<f64>, sum: f64) -> Self {
        values.iter_mut().for_each(|x| *x /= sum);
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        SchmidtSpectrum { p: values }
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }

    /// Local dimension `d`.
    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// Entropy of entanglement `H(p)` in bits.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.p)
    }

    /// Largest coefficient.
    pub fn max(&self) -> f64 {
        self.p[0]
    }
}

impl TryFrom<Vec<f64>> for SchmidtSpectrum {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        SchmidtSpectrum::new(values)
    }
}

impl From<SchmidtSpectrum> for Vec<f64> {
    fn from(s: SchmidtSpectrum) -> Self {
        s.p
    }
}

/// Complete homogeneous symmetric polynomial `h_k(p)`.
pub fn complete_homogeneous(k: usize, p: &SchmidtSpectrum) -> f64 {
    // h_k(x_1..x_j) = h_k(x_1..x_{j-1}) + x_j h_{k-1}(x_1..x_j)
    let mut h = vec![0.0; k + 1];
    h[0] = 1.0;
    for &x in p.values() {
        for m in 1..=k {
            h[m] += x * h[m - 1];
        }
    }
    h[k]
}

/// Evaluates Schur polynomials of a fixed spectrum for shapes up to a given size.
#[derive(Debug, Clone)]
pub struct SchurEvaluator {
    d: usize,
    max_weight: usize,
    log2_scale: f64,
    // scaled[k][m] = h_m(y_1..y_{k+1}) with y = x / scale
    scaled: Vec<Vec<TwoFloat>>,
    // extended[k][m] = h_m(x_1..x_{k+1}), unscaled
    extended: Vec<Vec<ExtFloat>>,
}

impl SchurEvaluator {
    /// Prepares tables for all shapes of weight at most `max_weight`.
    pub fn new(p: &SchmidtSpectrum, max_weight: usize) -> Self {
        // ascending order; pivot-free elimination relies on it
        let mut vars = p.values().to_vec();
        vars.reverse();
        let d = vars.len();
        let degree = max_weight + d;
        let scale = vars.iter().copied().fold(0.0, f64::max);
        let log2_scale = scale.log2();

        let mut scaled = Vec::with_capacity(d);
        let mut extended = Vec::with_capacity(d);
        let mut lin = vec![TwoFloat::from(0.0); degree + 1];
        lin[0] = TwoFloat::from(1.0);
        let mut ext = vec![ExtFloat::ZERO; degree + 1];
        ext[0] = ExtFloat::from_f64(1.0);
        for &x in &vars {
            let y = TwoFloat::from(x) / TwoFloat::from(scale);
            let xe = ExtFloat::from_f64(x);
            for m in 1..=degree {
                lin[m] = lin[m] + y * lin[m - 1];
                ext[m] = ext[m].add(xe.mul(ext[m - 1]));
            }
            scaled.push(lin.clone());
            extended.push(ext.clone());
        }

        SchurEvaluator {
            d,
            max_weight,
            log2_scale,
            scaled,
            extended,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn check(&self, lambda: &Partition) -> Result<Vec<usize>> {
        if lambda.weight() > self.max_weight {
            return Err(Error::InvalidArgument(format!(
                "shape {lambda} exceeds the prepared weight {}",
                self.max_weight
            )));
        }
        lambda.padded(self.d).ok_or_else(|| Error::TooManyRows {
            partition: lambda.to_string(),
            rows: lambda.length(),
            d: self.d,
        })
    }

    fn degree(parts: &[usize], k: usize, j: usize) -> Option<usize> {
        let d = parts.len();
        (parts[d - 1 - j] + j).checked_sub(k)
    }

    /// Determinant of the rescaled flagged matrix in double-double precision,
    /// as `(mantissa, binary exponent)`. `None` when an entry is so small that
    /// the low word of a double-double would be subnormal.
    fn scaled_determinant(&self, parts: &[usize]) -> Option<(TwoFloat, i32)> {
        let d = self.d;
        let zero = TwoFloat::from(0.0);
        let mut a = vec![zero; d * d];
        let mut log2_row_scale = 0i32;
        for k in 0..d {
            let row = &mut a[k * d..(k + 1) * d];
            let mut big = 0.0f64;
            for (j, slot) in row.iter_mut().enumerate() {
                if let Some(m) = Self::degree(parts, k, j) {
                    let v = self.scaled[k][m];
                    let mag = v.hi().abs();
                    if mag != 0.0 && mag < TINY {
                        return None;
                    }
                    big = big.max(mag);
                    *slot = v;
                }
            }
            // equilibrate by a power of two; exact
            if big > 0.0 {
                let e = big.log2().floor() as i32;
                let f = (-e as f64).exp2();
                row.iter_mut().for_each(|x| *x *= f);
                log2_row_scale += e;
            }
        }
        // pivot-free: the flagged matrix has nonnegative minors, so elimination
        // in natural order has no growth, while partial pivoting would pair the
        // full-variable row with the small rows and cancel
        let mut det = TwoFloat::from(1.0);
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| a[r * d + col].hi() != 0.0) else {
                return Some((zero, 0));
            };
            if pivot != col {
                for c in 0..d {
                    a.swap(pivot * d + c, col * d + c);
                }
                det = -det;
            }
            let piv = a[col * d + col];
            det *= piv;
            for r in (col + 1)..d {
                let factor = a[r * d + col] / piv;
                if factor.hi() == 0.0 {
                    continue;
                }
                for c in col..d {
                    let v = a[col * d + c];
                    a[r * d + c] -= factor * v;
                }
            }
        }
        Some((det, log2_row_scale))
    }

    /// `s_λ(p)` by the direct path, falling back to the log path when the
    /// scaled table is too small. Underflows to zero for very large shapes.
    pub fn evaluate(&self, lambda: &Partition) -> Result<f64> {
        let parts = self.check(lambda)?;
        Ok(self.log2_auto_padded(&parts).exp2())
    }

    /// `log2 s_λ(p)` by the log path (`-inf` when the value is zero).
    pub fn log2_evaluate(&self, lambda: &Partition) -> Result<f64> {
        let parts = self.check(lambda)?;
        Ok(self.log2_evaluate_padded(&parts))
    }

    fn log2_evaluate_padded(&self, parts: &[usize]) -> f64 {
        let d = self.d;
        let mut a: Vec<Vec<ExtFloat>> = (0..d)
            .map(|k| {
                (0..d)
                    .map(|j| {
                        Self::degree(parts, k, j).map_or(ExtFloat::ZERO, |m| self.extended[k][m])
                    })
                    .collect()
            })
            .collect();
        let mut det = ExtFloat::from_f64(1.0);
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| !a[r][col].is_zero()) else {
                return f64::NEG_INFINITY;
            };
            if pivot != col {
                a.swap(pivot, col);
                det = det.neg();
            }
            let piv = a[col][col];
            det = det.mul(piv);
            for r in (col + 1)..d {
                let factor = a[r][col].div(piv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..d {
                    let v = a[col][c];
                    a[r][c] = a[r][c].sub(factor.mul(v));
                }
            }
        }
        if det.is_positive() {
            det.log2_abs()
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `log2 s_λ(p)` choosing the path by size: direct for small shapes (falling
    /// back to the log path on underflow), log path above [`LOG_PATH_THRESHOLD`].
    pub fn log2_auto(&self, lambda: &Partition) -> Result<f64> {
        let parts = self.check(lambda)?;
        Ok(self.log2_auto_padded(&parts))
    }

    pub(crate) fn log2_auto_padded(&self, parts: &[usize]) -> f64 {
        let n: usize = parts.iter().sum();
        if n <= LOG_PATH_THRESHOLD {
            if let Some((det, e)) = self.scaled_determinant(parts) {
                let hi = det.hi();
                if hi <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                return hi.log2()
                    + det.lo() / (hi * std::f64::consts::LN_2)
                    + e as f64
                    + n as f64 * self.log2_scale;
            }
        }
        self.log2_evaluate_padded(parts)
    }
}

/// `s_λ(p)` for a single shape.
pub fn schur_polynomial(lambda: &Partition, p: &SchmidtSpectrum) -> Result<f64> {
    SchurEvaluator::new(p, lambda.weight()).evaluate(lambda)
}

/// `log2 s_λ(p)` for a single shape via the log-domain path.
pub fn log2_schur_polynomial(lambda: &Partition, p: &SchmidtSpectrum) -> Result<f64> {
    SchurEvaluator::new(p, lambda.weight()).log2_evaluate(lambda)
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(q: &[f64]) -> f64 {
    let h = -stable_sum(q.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()));
    h.max(0.0)
}

/// Relative entropy `D(q‖p)` in bits; `+inf` when `q` puts mass where `p` has none.
pub fn relative_entropy(q: &[f64], p: &[f64]) -> Result<f64> {
    if q.len() != p.len() {
        return Err(Error::InvalidArgument(format!(
            "relative entropy of vectors with lengths {} and {}",
            q.len(),
            p.len()
        )));
    }
    let mut terms = Vec::with_capacity(q.len());
    for (&qi, &pi) in q.iter().zip(p) {
        if qi == 0.0 {
            continue;
        }
        if pi == 0.0 {
            return Ok(f64::INFINITY);
        }
        terms.push(qi * (qi / pi).log2());
    }
    Ok(stable_sum(terms).max(0.0))
}
