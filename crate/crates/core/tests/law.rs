mod common;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use schurweyl::exact::{distribution_exact, schur_polynomial_exact, RationalSpectrum};
use schurweyl::measure::{
    distribution, failure_probability, sample_outcomes, total_probability, Threshold,
};
use schurweyl::schur::{
    complete_homogeneous, log2_schur_polynomial, relative_entropy, schur_polynomial,
    SchmidtSpectrum,
};
use schurweyl::young::{enumerate_partitions, multiplicity_dim, weyl_dim, Partition};

fn p(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn spec(v: &[f64]) -> SchmidtSpectrum {
    SchmidtSpectrum::new(v.to_vec()).unwrap()
}

fn weights(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, d)
}

#[test]
fn schur_examples_against_tableaux() {
    let cases: [(&[usize], &[f64]); 4] = [
        (&[1, 1], &[0.75, 0.25]),
        (&[2, 1], &[0.5, 0.5]),
        (&[3, 1], &[0.5, 0.3, 0.2]),
        (&[2, 2, 1], &[0.4, 0.3, 0.2, 0.1]),
    ];
    for (shape, x) in cases {
        let want = common::schur_by_tableaux(shape, x);
        let got = schur_polynomial(&p(shape), &spec(x)).unwrap();
        assert!((got - want).abs() < 1e-15, "{shape:?}: {got} vs {want}");
    }
    assert!((schur_polynomial(&p(&[1, 1]), &spec(&[0.75, 0.25])).unwrap() - 0.1875).abs() < 1e-15);
    assert!((complete_homogeneous(2, &spec(&[0.5, 0.5])) - 0.75).abs() < 1e-15);
}

#[test]
fn uniform_spectrum_gives_dimension_ratio() {
    for d in 1..=4 {
        let u = SchmidtSpectrum::uniform(d).unwrap();
        for n in 0..=8 {
            for lam in enumerate_partitions(n, d) {
                let want = weyl_dim(&lam, d).unwrap().to_f64().unwrap() / (d as f64).powi(n as i32);
                let got = schur_polynomial(&lam, &u).unwrap();
                assert!(
                    (got - want).abs() <= 1e-14 * want.max(1e-300),
                    "{lam} d={d}"
                );
            }
        }
    }
}

#[test]
fn exact_law_sums_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, d) in [(10, 2), (25, 3), (40, 2), (40, 3)] {
        let q = RationalSpectrum::random(d, 9, &mut rng);
        let law = distribution_exact(n, &q).unwrap();
        let total: BigRational = law.iter().map(|(_, a)| a.clone()).sum();
        assert!(total.is_one(), "n={n} d={d}");
        let float = distribution(n, &q.to_spectrum()).unwrap();
        for (lam, a) in &law {
            let x = float.get(lam).unwrap().probability();
            assert!((x - a.to_f64().unwrap()).abs() < 1e-12, "{lam}");
        }
    }
}

#[test]
fn exact_schur_matches_tableaux() {
    let q = RationalSpectrum::from_weights(&[5, 3, 2]).unwrap();
    let x: Vec<f64> = q.values().iter().map(|v| v.to_f64().unwrap()).collect();
    for n in 0..=6 {
        for lam in enumerate_partitions(n, 3) {
            let exact = schur_polynomial_exact(&lam, &q).unwrap().to_f64().unwrap();
            assert!(
                (exact - common::schur_by_tableaux(lam.parts(), &x)).abs() < 1e-15,
                "{lam}"
            );
        }
    }
}

#[test]
fn distribution_examples() {
    let law = distribution(3, &spec(&[0.5, 0.5])).unwrap();
    assert_eq!(law.entries().len(), 2);
    for (shape, dim) in [(&[3usize][..], 1u32), (&[2, 1][..], 2)] {
        let o = law.get(&p(shape)).unwrap();
        assert!((o.probability() - 0.5).abs() < 1e-15);
        assert_eq!(o.output_dim(), BigUint::from(dim));
    }
    let law = distribution(2, &spec(&[1.0, 0.0])).unwrap();
    assert_eq!(law.get(&p(&[2])).unwrap().probability(), 1.0);
    assert_eq!(law.get(&p(&[1, 1])).map_or(0.0, |o| o.probability()), 0.0);

    let bell = spec(&[0.5, 0.5]);
    let at =
        |s: u32| failure_probability(3, &bell, &Threshold::Dimension(BigUint::from(s))).unwrap();
    assert_eq!(at(1), 0.0);
    assert!((at(2) - 0.5).abs() < 1e-15);
    assert!((at(3) - 1.0).abs() < 1e-15);
}

#[test]
fn failure_probability_decays_below_entropy() {
    // R < H(p): the trend over n is downward
    let q = spec(&[0.6, 0.3, 0.1]);
    let rate = 0.9 * q.entropy();
    let ps: Vec<f64> = [25, 50, 100, 200, 400]
        .iter()
        .map(|&n| failure_probability(n, &q, &Threshold::Rate(rate)).unwrap())
        .collect();
    assert!(ps.windows(2).all(|w| w[1] < w[0]), "{ps:?}");
    assert!(ps[4] < 0.05, "{ps:?}");
}

fn chi_square(
    observed: &BTreeMap<Vec<usize>, usize>,
    expected: &[(Vec<usize>, f64)],
    count: usize,
) -> (f64, usize) {
    // pool bins below 5 expected counts into one
    let (mut stat, mut bins) = (0.0, 0);
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (lam, a) in expected {
        let e = a * count as f64;
        let o = *observed.get(lam).unwrap_or(&0) as f64;
        if e < 5.0 {
            pool_o += o;
            pool_e += e;
        } else {
            stat += (o - e).powi(2) / e;
            bins += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        bins += 1;
    }
    (stat, bins)
}

#[test]
fn sampler_matches_law() {
    let k = 100_000;
    for (n, w, seed) in [
        (3, vec![0.5, 0.5], 1u64),
        (12, vec![0.7, 0.3], 2),
        (20, vec![0.5, 0.3, 0.2], 3),
    ] {
        let q = spec(&w);
        let law = distribution(n, &q).unwrap();
        let expected: Vec<(Vec<usize>, f64)> = law
            .entries()
            .iter()
            .map(|o| (o.partition().parts().to_vec(), o.probability()))
            .collect();
        let mut observed = BTreeMap::new();
        for lam in sample_outcomes(n, &q, k, seed) {
            *observed.entry(lam.parts().to_vec()).or_insert(0) += 1;
        }
        let (stat, bins) = chi_square(&observed, &expected, k);
        let critical = ChiSquared::new((bins - 1) as f64)
            .unwrap()
            .inverse_cdf(0.99);
        assert!(stat < critical, "n={n}: chi2={stat} critical={critical}");
    }
    let hits = sample_outcomes(3, &spec(&[0.5, 0.5]), k, 4)
        .iter()
        .filter(|l| **l == p(&[2, 1]))
        .count();
    let freq = hits as f64 / k as f64;
    assert!((freq - 0.5).abs() < 3.0 * (0.25 / k as f64).sqrt());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schur_agrees_with_tableaux_in_any_order(w in weights(3), n in 0usize..=6) {
        let q = SchmidtSpectrum::from_weights(w.clone()).unwrap();
        let total: f64 = w.iter().sum();
        let unsorted: Vec<f64> = w.iter().map(|x| x / total).collect();
        for lam in enumerate_partitions(n, 3) {
            let want = common::schur_by_tableaux(lam.parts(), &unsorted);
            let got = schur_polynomial(&lam, &q).unwrap();
            prop_assert!(got >= 0.0);
            prop_assert!((got - want).abs() <= 1e-13 * want.max(1e-12), "{} {} {}", lam, got, want);
        }
    }

    #[test]
    fn law_is_normalized(w in weights(6), d in 2usize..=6, n in 1usize..=120) {
        let q = SchmidtSpectrum::from_weights(w[..d].to_vec()).unwrap();
        prop_assert!((total_probability(n, &q) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn log_path_agrees_with_direct(w in weights(4), n in 1usize..=40, pick in any::<prop::sample::Index>()) {
        let q = SchmidtSpectrum::from_weights(w).unwrap();
        let shapes = enumerate_partitions(n, 4);
        let lam = pick.get(&shapes);
        let direct = schur_polynomial(lam, &q).unwrap();
        let logged = log2_schur_polynomial(lam, &q).unwrap();
        prop_assume!(direct > 0.0 && direct.is_finite());
        prop_assert!((logged.exp2() / direct - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn law_weights_are_dimension_times_schur(w in weights(3), n in 1usize..=8) {
        let q = SchmidtSpectrum::from_weights(w).unwrap();
        let law = distribution(n, &q).unwrap();
        for o in law.entries() {
            let f = multiplicity_dim(o.partition()).to_f64().unwrap();
            let s = common::schur_by_tableaux(o.partition().parts(), q.values());
            prop_assert!((o.probability() - f * s).abs() <= 1e-13);
        }
    }

    #[test]
    fn relative_entropy_is_nonnegative(a in weights(4), b in weights(4)) {
        let qa = SchmidtSpectrum::from_weights(a).unwrap();
        let qb = SchmidtSpectrum::from_weights(b).unwrap();
        prop_assert!(relative_entropy(qa.values(), qb.values()).unwrap() >= 0.0);
        prop_assert!(relative_entropy(qa.values(), qa.values()).unwrap().abs() < 1e-15);
    }
}
