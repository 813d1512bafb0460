//! Exact rational evaluation of Schur polynomials and of the outcome law.
//!
//! Uses the plain Jacobi–Trudi determinant `det[h_{λ_i - i + j}]`, which is
//! exact in rational arithmetic and independent of the flagged floating-point
//! evaluator in [`crate::schur`]. Intended for small `n` oracle comparisons.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::schur::SchmidtSpectrum;
use crate::young::{enumerate_partitions, multiplicity_dim, Partition};

/// A Schmidt spectrum with exact rational entries, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSpectrum {
    p: Vec<BigRational>,
}

impl RationalSpectrum {
    /// Entries must be nonnegative and sum to exactly one.
    pub fn new(mut p: Vec<BigRational>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|x| x < &BigRational::zero()) {
            return Err(Error::InvalidSpectrum("entries must be nonnegative".into()));
        }
        let sum: BigRational = p.iter().cloned().sum();
        if !sum.is_one() {
            return Err(Error::InvalidSpectrum(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        p.sort_by(|a, b| b.cmp(a));
        Ok(RationalSpectrum { p })
    }

    /// Normalizes positive integer weights.
    pub fn from_weights(weights: &[u64]) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(Error::InvalidSpectrum("weights sum to zero".into()));
        }
        Self::new(
            weights
                .iter()
                .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
                .collect(),
        )
    }

    /// Random integer weights in `1..=max_weight`, normalized.
    pub fn random<R: Rng + ?Sized>(d: usize, max_weight: u64, rng: &mut R) -> Self {
        let w: Vec<u64> = (0..d).map(|_| rng.gen_range(1..=max_weight)).collect();
        Self::from_weights(&w).expect("positive weights")
    }

    pub fn values(&self) -> &[BigRational] {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// Nearest floating-point spectrum.
    pub fn to_spectrum(&self) -> SchmidtSpectrum {
        SchmidtSpectrum::from_weights(self.p.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
            .expect("valid rational spectrum")
    }
}

/// `h_0, …, h_max` of the spectrum, exactly.
pub fn complete_homogeneous_exact(max: usize, p: &RationalSpectrum) -> Vec<BigRational> {
    let mut h = vec![BigRational::zero(); max + 1];
    h[0] = BigRational::one();
    for x in p.values() {
        for m in 1..=max {
            let add = x * &h[m - 1];
            h[m] += add;
        }
    }
    h
}

/// `s_λ(p)` exactly, by the plain Jacobi–Trudi determinant.
pub fn schur_polynomial_exact(lambda: &Partition, p: &RationalSpectrum) -> Result<BigRational> {
    if lambda.length() > p.dim() {
        return Err(Error::TooManyRows {
            partition: lambda.to_string(),
            rows: lambda.length(),
            d: p.dim(),
        });
    }
    let l = lambda.length();
    if l == 0 {
        return Ok(BigRational::one());
    }
    let h = complete_homogeneous_exact(lambda.part(0) + l, p);
    let entry = |i: usize, j: usize| -> BigRational {
        let idx = lambda.part(i) as isize - i as isize + j as isize;
        if idx < 0 {
            BigRational::zero()
        } else {
            h[idx as usize].clone()
        }
    };
    let mut a: Vec<Vec<BigRational>> = (0..l)
        .map(|i| (0..l).map(|j| entry(i, j)).collect())
        .collect();
    Ok(rational_determinant(&mut a))
}

fn rational_determinant(a: &mut [Vec<BigRational>]) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &piv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// The outcome law `a_λ = dim V_λ · s_λ(p)` with exact rational probabilities.
pub fn distribution_exact(n: usize, p: &RationalSpectrum) -> Result<Vec<(Partition, BigRational)>> {
    enumerate_partitions(n, p.dim())
        .into_iter()
        .map(|lam| {
            let f: BigUint = multiplicity_dim(&lam);
            let s = schur_polynomial_exact(&lam, p)?;
            Ok((lam, s * BigRational::from_integer(BigInt::from(f))))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn rejects_bad_spectra() {
        assert!(RationalSpectrum::new(vec![r(1, 2), r(1, 3)]).is_err());
        assert!(RationalSpectrum::new(vec![r(3, 2), r(-1, 2)]).is_err());
        assert!(RationalSpectrum::from_weights(&[0, 0]).is_err());
    }

    #[test]
    fn small_values() {
        let p = RationalSpectrum::new(vec![r(1, 2), r(1, 2)]).unwrap();
        assert_eq!(complete_homogeneous_exact(2, &p)[2], r(3, 4));
        let lam = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(schur_polynomial_exact(&lam, &p).unwrap(), r(1, 4));
        let q = RationalSpectrum::from_weights(&[3, 1]).unwrap();
        let lam = Partition::new(vec![1, 1]).unwrap();
        assert_eq!(schur_polynomial_exact(&lam, &q).unwrap(), r(3, 16));
    }

    #[test]
    fn exact_law_sums_to_one() {
        let p = RationalSpectrum::from_weights(&[5, 3, 2]).unwrap();
        for n in [1, 5, 17, 40] {
            let total: BigRational = distribution_exact(n, &p)
                .unwrap()
                .into_iter()
                .map(|(_, a)| a)
                .sum();
            assert!(total.is_one(), "n={n}");
        }
    }

    #[test]
    fn three_copies_of_a_bell_pair() {
        let p = RationalSpectrum::from_weights(&[1, 1]).unwrap();
        let law = distribution_exact(3, &p).unwrap();
        assert_eq!(law.len(), 2);
        assert_eq!(law[0].1, r(1, 2));
        assert_eq!(law[1].1, r(1, 2));
    }
}
