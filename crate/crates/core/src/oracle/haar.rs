use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A Haar-distributed `d × d` unitary: QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal moved into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DMatrix<Complex64>> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "unitary dimension must be at least 1".into(),
        ));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// `max |U†U - I|` entrywise.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let g = u.adjoint() * u;
    let mut worst: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn outputs_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=6 {
            for _ in 0..20 {
                let u = haar_random_unitary(d, &mut rng).unwrap();
                assert!(unitarity_defect(&u) < 1e-12);
            }
        }
        let u = haar_random_unitary(1, &mut rng).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(haar_random_unitary(0, &mut rng).is_err());
    }

    #[test]
    fn first_moment_of_an_entry() {
        // |U_11|² is Beta(1, d-1): mean 1/d, variance (d-1)/(d²(d+1))
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = 10_000;
        for d in [2usize, 3, 5] {
            let mean: f64 = (0..k)
                .map(|_| haar_random_unitary(d, &mut rng).unwrap()[(0, 0)].norm_sqr())
                .sum::<f64>()
                / k as f64;
            let df = d as f64;
            let sigma = ((df - 1.0) / (df * df * (df + 1.0)) / k as f64).sqrt();
            assert!((mean - 1.0 / df).abs() < 3.0 * sigma, "d={d}: {mean}");
        }
    }

    #[test]
    fn phases_are_uniform() {
        // without the phase correction arg(U_11) would not be uniform; check E[U_11] ≈ 0
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = 10_000;
        let mean: Complex64 = (0..k)
            .map(|_| haar_random_unitary(2, &mut rng).unwrap()[(0, 0)])
            .sum::<Complex64>()
            / k as f64;
        // E|U_11|² = 1/2, so each component of the mean has sd ≤ 0.5/√k
        assert!(mean.norm() < 4.0 * 0.5 / (k as f64).sqrt());
    }
}
