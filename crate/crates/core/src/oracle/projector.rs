use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::state::{side_dim, StateVector};
use crate::error::{Error, Result};
use crate::young::{factorial, multiplicity_dim, CharacterCache, Partition, Permutation};

/// Largest `n` for which projectors are built from the full `n!` sum.
pub const MAX_PROJECTOR_COPIES: usize = 8;

// cap on n!·d^n stored index entries
const INDEX_BUDGET: u128 = 1 << 26;

/// Which party an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

/// The operator `π(σ)`: `⊗_i |h_i⟩ ↦ ⊗_i |h_{σ^{-1}(i)}⟩` on one side's `n`
/// sites, stored as an index map on `(C^d)^{⊗n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SitePermutation {
    d: usize,
    n: usize,
    map: Vec<u32>,
}

impl SitePermutation {
    pub fn new(sigma: &Permutation, d: usize) -> Result<Self> {
        let n = sigma.degree();
        let side = side_dim(d, n)?;
        let inverse = sigma.inverse();
        let mut map = Vec::with_capacity(side);
        let mut digits = vec![0usize; n];
        for x in 0..side {
            let mut rest = x;
            for slot in digits.iter_mut() {
                *slot = rest % d;
                rest /= d;
            }
            // new digit at site i is the old digit at σ^{-1}(i)
            let mut y = 0usize;
            for i in (0..n).rev() {
                y = y * d + digits[inverse.image(i)];
            }
            map.push(y as u32);
        }
        Ok(SitePermutation { d, n, map })
    }

    pub(crate) fn map(&self) -> &[u32] {
        &self.map
    }

    /// Applies the permutation to a vector on one side.
    pub fn apply_vector(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (x, &y) in self.map.iter().enumerate() {
            out[y as usize] = v[x];
        }
        out
    }

    /// Applies the permutation to one side of a bipartite state.
    pub fn apply(&self, state: &StateVector, side: Side) -> StateVector {
        let mut out = StateVector::from_parts(
            self.d,
            self.n,
            vec![Complex64::new(0.0, 0.0); state.amplitudes().len()],
        );
        accumulate(&self.map, 1.0, state, side, out.amplitudes_mut());
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let side = self.map.len();
        let mut m = DMatrix::zeros(side, side);
        for (x, &y) in self.map.iter().enumerate() {
            m[(y as usize, x)] = 1.0;
        }
        m
    }
}

// out += c · (π ⊗ I or I ⊗ π) state
fn accumulate(map: &[u32], c: f64, state: &StateVector, side: Side, out: &mut [Complex64]) {
    let dim = map.len();
    let amps = state.amplitudes();
    match side {
        Side::A => {
            for b in 0..dim {
                let row = b * dim;
                for (a, &y) in map.iter().enumerate() {
                    out[y as usize + row] += amps[a + row] * c;
                }
            }
        }
        Side::B => {
            for (b, &y) in map.iter().enumerate() {
                let (src, dst) = (b * dim, y as usize * dim);
                for a in 0..dim {
                    out[a + dst] += amps[a + src] * c;
                }
            }
        }
    }
}

/// `P_λ = (dim V_λ / n!) Σ_σ χ_λ(σ) π(σ)` on one side, applied without
/// forming the `d^n × d^n` matrix.
#[derive(Debug, Clone)]
pub struct IsotypicProjector {
    lambda: Partition,
    d: usize,
    side: Side,
    terms: Vec<(f64, SitePermutation)>,
    cycles: Vec<(f64, usize)>,
}

impl IsotypicProjector {
    pub fn new(lambda: &Partition, d: usize, side: Side) -> Result<Self> {
        let n = lambda.weight();
        if n > MAX_PROJECTOR_COPIES {
            return Err(Error::BudgetExceeded {
                what: "projector permutation sum (copies)",
                required: n as u128,
                budget: MAX_PROJECTOR_COPIES as u128,
            });
        }
        let side_len = side_dim(d, n)?;
        let stored = factorial(n)
            .to_u128()
            .unwrap_or(u128::MAX)
            .saturating_mul(side_len as u128);
        if stored > INDEX_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "projector index maps",
                required: stored,
                budget: INDEX_BUDGET,
            });
        }
        let norm = multiplicity_dim(lambda).to_f64().expect("small")
            / factorial(n).to_f64().expect("small");
        let mut cache = CharacterCache::new();
        let mut terms = Vec::new();
        let mut cycles = Vec::new();
        for sigma in Permutation::all(n) {
            let ct = sigma.cycle_type();
            let chi = cache.character(lambda, &ct)?.to_f64().expect("small");
            if chi == 0.0 {
                continue;
            }
            let c = norm * chi;
            cycles.push((c, ct.partition().length()));
            terms.push((c, SitePermutation::new(&sigma, d)?));
        }
        Ok(IsotypicProjector {
            lambda: lambda.clone(),
            d,
            side,
            terms,
            cycles,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.lambda
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn apply_vector(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (c, perm) in &self.terms {
            for (x, &y) in perm.map().iter().enumerate() {
                out[y as usize] += v[x] * *c;
            }
        }
        out
    }

    /// `(P_λ ⊗ I)|ψ⟩` or `(I ⊗ P_λ)|ψ⟩` depending on the side.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        let mut out = vec![Complex64::new(0.0, 0.0); state.amplitudes().len()];
        for (c, perm) in &self.terms {
            accumulate(perm.map(), *c, state, self.side, &mut out);
        }
        StateVector::from_parts(state.local_dim(), state.copies(), out)
    }

    /// `Tr P_λ = Σ_σ c_σ d^{#cycles(σ)}`.
    pub fn trace(&self) -> f64 {
        self.cycles
            .iter()
            .map(|&(c, k)| c * (self.d as f64).powi(k as i32))
            .sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let side = self.terms.first().map_or(1, |t| t.1.map().len());
        let mut m = DMatrix::zeros(side, side);
        for (c, perm) in &self.terms {
            for (x, &y) in perm.map().iter().enumerate() {
                m[(y as usize, x)] += *c;
            }
        }
        m
    }
}
