use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::haar::haar_random_unitary;
use super::projector::{IsotypicProjector, Side};
use super::state::{build_tensor_state, PureBipartiteState, StateVector};
use crate::error::{Error, Result};
use crate::young::{enumerate_partitions, multiplicity_dim, weyl_dim, Partition};

/// Largest `d^{2n}` accepted by the twirl.
pub const TWIRL_SIDE_CAP: usize = 256;

/// Samples are split into this many contiguous batches; the split does not
/// depend on the thread count, so results are reproducible.
pub const TWIRL_BATCHES: usize = 20;

fn check_size(d: usize, n: usize, k: usize) -> Result<usize> {
    let side = (d as u128).checked_pow(2 * n as u32).unwrap_or(u128::MAX);
    if side > TWIRL_SIDE_CAP as u128 {
        return Err(Error::BudgetExceeded {
            what: "twirl density side",
            required: side,
            budget: TWIRL_SIDE_CAP as u128,
        });
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "twirl needs at least one sample".into(),
        ));
    }
    Ok(side as usize)
}

// sample k uses stream k of the master seed
fn twirled_sample(base: &StateVector, d: usize, seed: u64, k: usize) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let u = haar_random_unitary(d, &mut rng).expect("d >= 1");
    let v = haar_random_unitary(d, &mut rng).expect("d >= 1");
    let mut s = base.clone();
    s.apply_collective(&u, &v);
    s
}

fn batch_ranges(k: usize) -> Vec<std::ops::Range<usize>> {
    let b = TWIRL_BATCHES.min(k);
    (0..b).map(|i| (i * k / b)..((i + 1) * k / b)).collect()
}

/// Empirical average of `(U⊗V)^{⊗n}|Φ⟩⟨Φ|(U⊗V)^{†⊗n}` over `samples` Haar pairs.
#[derive(Debug, Clone)]
pub struct TwirlAverage {
    pub samples: usize,
    pub density: DMatrix<Complex64>,
}

pub fn twirl_monte_carlo(
    phi: &PureBipartiteState,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<TwirlAverage> {
    let d = phi.dim();
    let side = check_size(d, n, samples)?;
    let base = build_tensor_state(phi, n)?;
    let partial: Vec<DMatrix<Complex64>> = batch_ranges(samples)
        .into_par_iter()
        .map(|range| {
            let mut acc = DMatrix::<Complex64>::zeros(side, side);
            for k in range {
                let s = twirled_sample(&base, d, seed, k);
                let v = nalgebra::DVector::from_column_slice(s.amplitudes());
                acc.gerc(Complex64::new(1.0, 0.0), &v, &v, Complex64::new(1.0, 0.0));
            }
            acc
        })
        .collect();
    let mut density = DMatrix::<Complex64>::zeros(side, side);
    for m in partial {
        density += m;
    }
    density /= Complex64::new(samples as f64, 0.0);
    Ok(TwirlAverage { samples, density })
}

/// Observed and predicted block statistics with Monte Carlo standard errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwirlBlock {
    pub lambda: Vec<usize>,
    pub weight: f64,
    pub weight_expected: f64,
    pub weight_se: f64,
    /// `‖Tr_B ρ_λ − P_λ / dim W_λ‖_F`.
    pub marginal_deviation: f64,
    pub marginal_se: f64,
    pub purity: f64,
    pub purity_expected: f64,
    pub purity_se: f64,
}

impl TwirlBlock {
    /// Each statistic within `sigmas` standard errors, with `floor` as the
    /// smallest tolerance (some statistics have zero variance).
    pub fn passes(&self, sigmas: f64, floor: f64) -> bool {
        (self.weight - self.weight_expected).abs() <= (sigmas * self.weight_se).max(floor)
            && self.marginal_deviation <= (sigmas * self.marginal_se).max(floor)
            && (self.purity - self.purity_expected).abs() <= (sigmas * self.purity_se).max(floor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwirlReport {
    pub samples: usize,
    pub seed: u64,
    pub blocks: Vec<TwirlBlock>,
}

#[derive(Clone)]
struct BlockAccumulator {
    weight: f64,
    weight_sq: f64,
    marginal: DMatrix<Complex64>,
    pairs: Vec<f64>,
}

/// Per-block checks of the twirled state against its predicted structure.
///
/// `expected` supplies `a_λ` for each block, typically from the analytic law.
pub fn twirl_structure(
    phi: &PureBipartiteState,
    n: usize,
    samples: usize,
    seed: u64,
    expected: impl Fn(&Partition) -> f64,
) -> Result<TwirlReport> {
    let d = phi.dim();
    check_size(d, n, samples)?;
    if samples < 2 * TWIRL_BATCHES {
        return Err(Error::InvalidArgument(format!(
            "twirl checks need at least {} samples",
            2 * TWIRL_BATCHES
        )));
    }
    let base = build_tensor_state(phi, n)?;
    let shapes = enumerate_partitions(n, d);
    let pa: Vec<IsotypicProjector> = shapes
        .iter()
        .map(|l| IsotypicProjector::new(l, d, Side::A))
        .collect::<Result<_>>()?;
    let pb: Vec<IsotypicProjector> = shapes
        .iter()
        .map(|l| IsotypicProjector::new(l, d, Side::B))
        .collect::<Result<_>>()?;
    let side = base.side_dim();

    let batches: Vec<Vec<BlockAccumulator>> = batch_ranges(samples)
        .into_par_iter()
        .map(|range| {
            let mut acc = vec![
                BlockAccumulator {
                    weight: 0.0,
                    weight_sq: 0.0,
                    marginal: DMatrix::zeros(side, side),
                    pairs: Vec::new(),
                };
                shapes.len()
            ];
            let mut held: Vec<Option<StateVector>> = vec![None; shapes.len()];
            for k in range {
                let s = twirled_sample(&base, d, seed, k);
                for (i, a) in acc.iter_mut().enumerate() {
                    let proj = pb[i].apply(&pa[i].apply(&s));
                    let w = proj.norm_squared();
                    a.weight += w;
                    a.weight_sq += w * w;
                    let m = proj.as_matrix();
                    a.marginal += &m * m.adjoint();
                    // disjoint pairs give an unbiased purity estimate
                    match held[i].take() {
                        None => held[i] = Some(proj),
                        Some(prev) => {
                            let denom = prev.norm_squared() * w;
                            if denom > 0.0 {
                                a.pairs.push(prev.inner(&proj).norm_sqr() / denom);
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();

    let kf = samples as f64;
    let mut blocks = Vec::with_capacity(shapes.len());
    for (i, lam) in shapes.iter().enumerate() {
        let weight = batches.iter().map(|b| b[i].weight).sum::<f64>() / kf;
        let weight_sq = batches.iter().map(|b| b[i].weight_sq).sum::<f64>() / kf;
        let weight_var = (weight_sq - weight * weight).max(0.0);
        let weight_se = (weight_var / (kf - 1.0)).sqrt();

        let dim_w = (multiplicity_dim(lam) * weyl_dim(lam, d)?)
            .to_f64()
            .expect("small");
        let dim_u = weyl_dim(lam, d)?.to_f64().expect("small");
        let target = pa[i].to_dense().map(|x| Complex64::new(x / dim_w, 0.0));

        let (marginal_deviation, marginal_se) = if weight > 0.0 {
            let total: DMatrix<Complex64> = batches
                .iter()
                .fold(DMatrix::zeros(side, side), |t, b| t + &b[i].marginal);
            let mean = &total / Complex64::new(kf * weight, 0.0);
            let nb = batches.len() as f64;
            let spread: f64 = batches
                .iter()
                .map(|b| {
                    let bw = b[i].weight;
                    let bm = if bw > 0.0 {
                        &b[i].marginal / Complex64::new(bw, 0.0)
                    } else {
                        mean.clone()
                    };
                    (bm - &mean).norm_squared()
                })
                .sum();
            ((mean - &target).norm(), (spread / (nb * (nb - 1.0))).sqrt())
        } else {
            (f64::NAN, f64::NAN)
        };

        let pairs: Vec<f64> = batches
            .iter()
            .flat_map(|b| b[i].pairs.iter().copied())
            .collect();
        let (purity, purity_se) = if pairs.len() > 1 {
            let m = pairs.len() as f64;
            let mean = pairs.iter().sum::<f64>() / m;
            let var = pairs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
            (mean, (var / m).sqrt())
        } else {
            (f64::NAN, f64::NAN)
        };

        blocks.push(TwirlBlock {
            lambda: lam.parts().to_vec(),
            weight,
            weight_expected: expected(lam),
            weight_se,
            marginal_deviation,
            marginal_se,
            purity,
            purity_expected: 1.0 / (dim_u * dim_u),
            purity_se,
        });
    }
    Ok(TwirlReport {
        samples,
        seed,
        blocks,
    })
}
