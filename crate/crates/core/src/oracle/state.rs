use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::haar::{haar_random_unitary, unitarity_defect};
use crate::error::{Error, Result};
use crate::schur::SchmidtSpectrum;

/// Largest state vector the oracle will allocate, in amplitudes.
pub const AMPLITUDE_CAP: usize = 1 << 26;

/// Accepted deviation from unitarity for local bases.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

/// `|φ⟩ = Σ_i √p_i |e_i⟩_A |e_i⟩_B`, where the Schmidt vectors are the
/// columns of the two basis matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBipartiteState {
    schmidt: SchmidtSpectrum,
    basis_a: DMatrix<Complex64>,
    basis_b: DMatrix<Complex64>,
}

impl PureBipartiteState {
    /// Schmidt vectors along the computational basis.
    pub fn new(schmidt: SchmidtSpectrum) -> Self {
        let d = schmidt.dim();
        PureBipartiteState {
            schmidt,
            basis_a: DMatrix::identity(d, d),
            basis_b: DMatrix::identity(d, d),
        }
    }

    pub fn with_bases(
        schmidt: SchmidtSpectrum,
        basis_a: DMatrix<Complex64>,
        basis_b: DMatrix<Complex64>,
    ) -> Result<Self> {
        let d = schmidt.dim();
        for (name, m) in [("A", &basis_a), ("B", &basis_b)] {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::InvalidArgument(format!(
                    "basis {name} must be {d}x{d}"
                )));
            }
            let defect = unitarity_defect(m);
            if defect > UNITARITY_TOLERANCE {
                return Err(Error::InvalidArgument(format!(
                    "basis {name} is not unitary (defect {defect:e})"
                )));
            }
        }
        Ok(PureBipartiteState {
            schmidt,
            basis_a,
            basis_b,
        })
    }

    /// A flat-Dirichlet spectrum with independent Haar bases on both sides.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        let schmidt = SchmidtSpectrum::random(d, rng)?;
        let a = haar_random_unitary(d, rng)?;
        let b = haar_random_unitary(d, rng)?;
        Self::with_bases(schmidt, a, b)
    }

    /// The same spectrum in new local bases.
    pub fn rebased(
        &self,
        basis_a: DMatrix<Complex64>,
        basis_b: DMatrix<Complex64>,
    ) -> Result<Self> {
        Self::with_bases(self.schmidt.clone(), basis_a, basis_b)
    }

    pub fn dim(&self) -> usize {
        self.schmidt.dim()
    }

    pub fn schmidt(&self) -> &SchmidtSpectrum {
        &self.schmidt
    }

    pub fn basis_a(&self) -> &DMatrix<Complex64> {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &DMatrix<Complex64> {
        &self.basis_b
    }

    /// Amplitudes of the single pair, index `a + d·b`.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for (i, &p) in self.schmidt.values().iter().enumerate() {
            let w = p.sqrt();
            for b in 0..d {
                for a in 0..d {
                    out[a + d * b] += self.basis_a[(a, i)] * self.basis_b[(b, i)] * w;
                }
            }
        }
        out
    }
}

/// A pure state on `(C^d)^{⊗n}_A ⊗ (C^d)^{⊗n}_B`.
///
/// Index convention: the `n` A-sites come first, then the `n` B-sites, each
/// little-endian in site order, so amplitude `a + d^n·b` pairs the A-string
/// `a` with the B-string `b`. Read as a `d^n × d^n` matrix with A on rows,
/// its squared singular values are the Schmidt coefficients across A|B.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d: usize,
    n: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn side_dim(d: usize, n: usize) -> Result<usize> {
    let side = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let total = side.saturating_mul(side);
    if total > AMPLITUDE_CAP as u128 {
        return Err(Error::BudgetExceeded {
            what: "state vector",
            required: total,
            budget: AMPLITUDE_CAP as u128,
        });
    }
    Ok(side as usize)
}

impl StateVector {
    pub(crate) fn from_parts(d: usize, n: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), d.pow(2 * n as u32));
        StateVector { d, n, amps }
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.n
    }

    /// `d^n`, the dimension of one side.
    pub fn side_dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Rescales to unit norm; a zero vector is left as is.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.amps.iter_mut().for_each(|z| *z /= norm);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The amplitude matrix with A on rows and B on columns.
    pub fn as_matrix(&self) -> DMatrix<Complex64> {
        let side = self.side_dim();
        DMatrix::from_column_slice(side, side, &self.amps)
    }

    /// Squared singular values of [`StateVector::as_matrix`], descending.
    pub fn schmidt_coefficients(&self) -> Vec<f64> {
        let svd = self.as_matrix().svd(false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().map(|x| x * x).collect();
        s.sort_unstable_by(|a, b| b.total_cmp(a));
        s
    }

    /// Applies a `d × d` unitary to one site; sites `0..n` are on A and
    /// `n..2n` on B.
    pub fn apply_local(&mut self, site: usize, u: &DMatrix<Complex64>) {
        let d = self.d;
        let stride = d.pow(site as u32);
        let block = stride * d;
        let mut column = vec![Complex64::new(0.0, 0.0); d];
        for base in (0..self.amps.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (k, slot) in column.iter_mut().enumerate() {
                    *slot = self.amps[start + k * stride];
                }
                for r in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, c) in column.iter().enumerate() {
                        acc += u[(r, k)] * c;
                    }
                    self.amps[start + r * stride] = acc;
                }
            }
        }
    }

    /// `(U^{⊗n} ⊗ V^{⊗n})|self⟩`.
    pub fn apply_collective(&mut self, u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) {
        for site in 0..self.n {
            self.apply_local(site, u);
            self.apply_local(self.n + site, v);
        }
    }
}

/// `|φ⟩^{⊗n}` in the [`StateVector`] index convention.
pub fn build_tensor_state(phi: &PureBipartiteState, n: usize) -> Result<StateVector> {
    let d = phi.dim();
    side_dim(d, n)?;
    let single = phi.amplitudes();
    // grow copy by copy: the new copy becomes the most significant A and B digit
    let mut side = 1usize;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..n {
        let new_side = side * d;
        let mut next = vec![Complex64::new(0.0, 0.0); new_side * new_side];
        for bk in 0..d {
            for ak in 0..d {
                let w = single[ak + d * bk];
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..side {
                    for a in 0..side {
                        next[(a + side * ak) + new_side * (b + side * bk)] = amps[a + side * b] * w;
                    }
                }
            }
        }
        side = new_side;
        amps = next;
    }
    let mut state = StateVector::from_parts(d, n, amps);
    state.normalize();
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_copies() {
        let product = PureBipartiteState::new(SchmidtSpectrum::new(vec![1.0, 0.0]).unwrap());
        let s = build_tensor_state(&product, 1).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let bell = PureBipartiteState::new(SchmidtSpectrum::uniform(2).unwrap());
        let s = build_tensor_state(&bell, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(h)).norm() < 1e-15);
        assert!((s.amplitudes()[3] - c(h)).norm() < 1e-15);
        assert_eq!(s.amplitudes()[1], c(0.0));
    }

    #[test]
    fn two_bell_pairs() {
        let bell = PureBipartiteState::new(SchmidtSpectrum::uniform(2).unwrap());
        let s = build_tensor_state(&bell, 2).unwrap();
        assert_eq!(s.amplitudes().len(), 16);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let nonzero: Vec<usize> = (0..16)
            .filter(|&i| s.amplitudes()[i].norm() > 0.0)
            .collect();
        assert_eq!(nonzero.len(), 4);
        for i in nonzero {
            assert!((s.amplitudes()[i] - c(0.5)).norm() < 1e-15);
            // A-string equals B-string
            assert_eq!(i % 4, i / 4);
        }
    }

    #[test]
    fn schmidt_coefficients_of_a_power_are_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi = PureBipartiteState::random(3, &mut rng).unwrap();
        let s = build_tensor_state(&phi, 2).unwrap();
        let p = phi.schmidt().values();
        let mut want: Vec<f64> = p
            .iter()
            .flat_map(|x| p.iter().map(move |y| x * y))
            .collect();
        want.sort_unstable_by(|a, b| b.total_cmp(a));
        for (a, b) in s.schmidt_coefficients().iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn local_unitaries_keep_the_norm_and_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = PureBipartiteState::random(2, &mut rng).unwrap();
        let mut s = build_tensor_state(&phi, 3).unwrap();
        let before = s.schmidt_coefficients();
        let u = haar_random_unitary(2, &mut rng).unwrap();
        let v = haar_random_unitary(2, &mut rng).unwrap();
        s.apply_collective(&u, &v);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        for (a, b) in s.schmidt_coefficients().iter().zip(&before) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rebasing_matches_local_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let phi = PureBipartiteState::new(SchmidtSpectrum::new(vec![0.6, 0.3, 0.1]).unwrap());
        let u = haar_random_unitary(3, &mut rng).unwrap();
        let v = haar_random_unitary(3, &mut rng).unwrap();
        let mut rotated = build_tensor_state(&phi, 2).unwrap();
        rotated.apply_collective(&u, &v);
        let direct = build_tensor_state(&phi.rebased(u, v).unwrap(), 2).unwrap();
        assert!((rotated.inner(&direct).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_and_basis_validation() {
        let phi = PureBipartiteState::new(SchmidtSpectrum::uniform(3).unwrap());
        assert!(build_tensor_state(&phi, 9).unwrap_err().is_budget());
        let bad = DMatrix::from_element(3, 3, c(1.0));
        assert!(phi.rebased(bad.clone(), bad).is_err());
    }
}
