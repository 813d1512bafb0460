//! The large-deviation exponent of the failure probability.
//!
//! The limit of `-(1/n) log2 P` at threshold `2^{nR}` is
//! `min { D(q‖p) : H(q) ≤ R }`. Stationarity puts the minimizer on the
//! tilted family `q ∝ p^β`, `β ≥ 1`, along which `H` decreases from `H(p)` to
//! `log2 m` (`m` the multiplicity of the largest coefficient), so a bisection
//! on `β` solves every rate above `log2 m`. Below it the minimum is
//! `-log2 p_1 - R`, reached by any `q` on the top block with entropy `R`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{log2_failure_and_success, output_dimension_law, Threshold};
use crate::numeric::NeumaierSum;
use crate::schur::{relative_entropy, SchmidtSpectrum, SchurEvaluator};
use crate::young::{Log2Factorials, PartitionStream};

/// Target on `|H(q(β)) - R|` for the bisection.
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

const MAX_ITERATIONS: usize = 400;

/// `q_i = p_i^β / Σ_j p_j^β`, computed in the log domain. Zero entries stay
/// zero for every `β`, including `β = 0`.
pub fn tilted_spectrum(p: &SchmidtSpectrum, beta: f64) -> Result<SchmidtSpectrum> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tilt {beta} must be finite and nonnegative"
        )));
    }
    if beta == 1.0 {
        return Ok(p.clone());
    }
    let logs: Vec<f64> = p
        .values()
        .iter()
        .map(|&x| {
            if x > 0.0 {
                beta * x.log2()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SchmidtSpectrum::from_weights(logs.iter().map(|&l| (l - max).exp2()).collect())
}

/// How [`exponent_rate`] reached its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    /// `R ≥ H(p)`: the constraint is slack and the exponent is zero.
    Inactive,
    /// Bisection on the tilt.
    Bisection,
    /// `R ≤ log2 m`: closed form on the block of largest coefficients.
    TopBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub method: SolverMethod,
    pub iterations: usize,
    /// `|H(q*) - R|`, zero when the constraint is slack.
    pub residual: f64,
}

/// The exponent at one rate together with its minimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentResult {
    #[serde(rename = "R")]
    pub rate: f64,
    pub p: SchmidtSpectrum,
    pub value: f64,
    pub q_star: SchmidtSpectrum,
    /// The tilt of `q*`; absent on the top-block branch, where `q*` is not
    /// a tilt of `p`.
    pub beta_star: Option<f64>,
    pub solver: SolverDiagnostics,
}

// coefficients within a relative 1e-12 of the largest count as tied; the tilt
// cannot separate them at any reachable β
fn multiplicity_of_max(p: &SchmidtSpectrum) -> usize {
    p.values()
        .iter()
        .take_while(|&&x| x >= p.max() * (1.0 - 1e-12))
        .count()
}

/// `min { D(q‖p) : H(q) ≤ R }` in bits, for `0 ≤ R ≤ log2 d`.
pub fn exponent_rate(rate: f64, p: &SchmidtSpectrum) -> Result<ExponentResult> {
    let max_rate = (p.dim() as f64).log2();
    if !rate.is_finite() || rate < 0.0 || rate > max_rate {
        return Err(Error::RateOutOfRange {
            rate,
            max: max_rate,
        });
    }
    let h = p.entropy();
    if rate >= h {
        return Ok(ExponentResult {
            rate,
            p: p.clone(),
            value: 0.0,
            q_star: p.clone(),
            beta_star: Some(1.0),
            solver: SolverDiagnostics {
                method: SolverMethod::Inactive,
                iterations: 0,
                residual: 0.0,
            },
        });
    }
    let m = multiplicity_of_max(p);
    if rate <= (m as f64).log2() {
        return Ok(top_block(rate, p, m));
    }

    let entropy_at = |beta: f64| -> Result<(f64, SchmidtSpectrum)> {
        let q = tilted_spectrum(p, beta)?;
        Ok((q.entropy(), q))
    };
    let mut iterations = 0;
    let mut lo = 1.0;
    let mut hi = 2.0;
    while entropy_at(hi)?.0 > rate {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::InvalidArgument(format!(
                "no tilt reaches entropy {rate}"
            )));
        }
    }
    let (mut best_beta, mut best) = (hi, entropy_at(hi)?);
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (hm, q) = entropy_at(mid)?;
        if (hm - rate).abs() < (best.0 - rate).abs() {
            best_beta = mid;
            best = (hm, q);
        }
        if (hm - rate).abs() <= ENTROPY_TOLERANCE || mid == lo || mid == hi {
            break;
        }
        if hm > rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (hq, q) = best;
    Ok(ExponentResult {
        rate,
        p: p.clone(),
        value: relative_entropy(q.values(), p.values())?,
        q_star: q,
        beta_star: Some(best_beta),
        solver: SolverDiagnostics {
            method: SolverMethod::Bisection,
            iterations,
            residual: (hq - rate).abs(),
        },
    })
}

// D(q‖p) ≥ -H(q) - log2 p_1 ≥ -R - log2 p_1, with equality for q on the top
// block with H(q) = R; q = (1-t)·δ_1 + t·uniform_m is found by bisection on t
fn top_block(rate: f64, p: &SchmidtSpectrum, m: usize) -> ExponentResult {
    let d = p.dim();
    let mix = |t: f64| -> Vec<f64> {
        let mut q = vec![0.0; d];
        q[..m].iter_mut().for_each(|x| *x = t / m as f64);
        q[0] += 1.0 - t;
        q
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut iterations = 0;
    let mut q = mix(0.0);
    if rate > 0.0 {
        while iterations < MAX_ITERATIONS {
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            q = mix(mid);
            let hq = crate::schur::shannon_entropy(&q);
            if (hq - rate).abs() <= ENTROPY_TOLERANCE || mid == lo || mid == hi {
                break;
            }
            if hq < rate {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let q_star = SchmidtSpectrum::from_weights(q).expect("mixture is a distribution");
    ExponentResult {
        rate,
        p: p.clone(),
        value: -p.max().log2() - rate,
        solver: SolverDiagnostics {
            method: SolverMethod::TopBlock,
            iterations,
            residual: (q_star.entropy() - rate).abs(),
        },
        q_star,
        beta_star: None,
    }
}

/// `-(1/n) log2 P` at threshold `⌈2^{nR}⌉`; `+inf` when nothing fails.
pub fn empirical_exponent(n: usize, p: &SchmidtSpectrum, rate: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the empirical exponent needs n ≥ 1".into(),
        ));
    }
    let (log2_fail, _) = log2_failure_and_success(n, p, &Threshold::Rate(rate))?;
    if log2_fail == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((-log2_fail / n as f64).max(0.0))
}

fn check_same_dim(a: &SchmidtSpectrum, b: &SchmidtSpectrum) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidArgument(format!(
            "spectra of dimensions {} and {} are not comparable",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

// Σ 2^{a}(a - b), +inf when some a is finite and b is not
fn divergence_of_logs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> f64 {
    let mut acc = NeumaierSum::default();
    for (a, b) in pairs {
        if a == f64::NEG_INFINITY {
            continue;
        }
        if b == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        acc.add(a.exp2() * (a - b));
    }
    acc.total().max(0.0)
}

/// `D(Q^ψ‖Q^φ)` between the two outcome laws over Young indices, in bits.
pub fn distribution_relative_entropy(
    n: usize,
    psi: &SchmidtSpectrum,
    phi: &SchmidtSpectrum,
) -> Result<f64> {
    check_same_dim(psi, phi)?;
    let d = psi.dim();
    crate::measure::MeasureConfig::default().check(n, d)?;
    let ev_psi = SchurEvaluator::new(psi, n);
    let ev_phi = SchurEvaluator::new(phi, n);
    let factorials = Log2Factorials::new(n + d);
    let mut stream = PartitionStream::new(n, d);
    let mut pairs = Vec::new();
    while let Some(parts) = stream.next_padded() {
        let f = factorials.log2_multiplicity_dim_padded(parts);
        pairs.push((
            f + ev_psi.log2_auto_padded(parts),
            f + ev_phi.log2_auto_padded(parts),
        ));
    }
    Ok(divergence_of_logs(pairs))
}

/// `D(Q^ψ‖Q^φ)` between the laws of the output dimension `L`, in bits. By
/// data processing this never exceeds [`distribution_relative_entropy`].
pub fn output_law_relative_entropy(
    n: usize,
    psi: &SchmidtSpectrum,
    phi: &SchmidtSpectrum,
) -> Result<f64> {
    check_same_dim(psi, phi)?;
    let a = output_dimension_law(n, psi)?;
    let b = output_dimension_law(n, phi)?;
    let pairs = a.iter().zip(&b).map(|((la, x), (lb, y))| {
        debug_assert_eq!(la, lb);
        (*x, *y)
    });
    Ok(divergence_of_logs(pairs))
}

/// One row of a strong-converse table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub n: usize,
    pub failure_probability: f64,
    pub log2_failure_probability: f64,
    pub log2_success_probability: f64,
}

/// Failure probabilities at a fixed rate along an ascending grid of copy counts.
pub fn strong_converse_probe(
    n_grid: &[usize],
    p: &SchmidtSpectrum,
    rate: f64,
) -> Result<Vec<ProbeRow>> {
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "copy counts must be strictly ascending".into(),
        ));
    }
    n_grid
        .iter()
        .map(|&n| {
            let (fail, success) = log2_failure_and_success(n, p, &Threshold::Rate(rate))?;
            Ok(ProbeRow {
                n,
                failure_probability: fail.exp2(),
                log2_failure_probability: fail,
                log2_success_probability: success,
            })
        })
        .collect()
}

/// `h(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("{x} is not a probability")));
    }
    Ok(crate::schur::shannon_entropy(&[x, 1.0 - x]))
}

/// One row of the convergence table; the CSV columns follow the field order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    #[serde(rename = "R")]
    pub rate: f64,
    pub failure_prob_log2: f64,
    pub empirical_exponent: f64,
    pub analytic_exponent: f64,
    pub gap: f64,
}

/// Empirical exponents along `n_grid` next to the limit.
pub fn convergence_table(
    p: &SchmidtSpectrum,
    rate: f64,
    n_grid: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let analytic = exponent_rate(rate, p)?.value;
    n_grid
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "copy counts must be positive".into(),
                ));
            }
            let (fail, _) = log2_failure_and_success(n, p, &Threshold::Rate(rate))?;
            let empirical = if fail == f64::NEG_INFINITY {
                f64::INFINITY
            } else {
                (-fail / n as f64).max(0.0)
            };
            Ok(ConvergenceRow {
                n,
                rate,
                failure_prob_log2: fail,
                empirical_exponent: empirical,
                analytic_exponent: analytic,
                gap: (empirical - analytic).abs(),
            })
        })
        .collect()
}

/// Both sides of the finite-`n` Bahadur-type bound
///
/// ```text
/// -(1/n) log2 p_n ≤ (D(Q^ψ_n‖Q^φ_n) + h(q_n) + (1 - q_n) log2(1 - p_n)) / (n q_n)
/// ```
///
/// with `p_n`, `q_n` the failure probabilities of `φ` and `ψ` at rate `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BahadurCheck {
    pub n: usize,
    pub p_n: f64,
    pub q_n: f64,
    /// `D` between the output-dimension laws.
    pub divergence: f64,
    /// The binary divergence `d(q_n‖p_n)`, the middle of the chain.
    pub binary_divergence: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl BahadurCheck {
    pub fn holds(&self, slack: f64) -> bool {
        self.divergence + slack >= self.binary_divergence && self.lhs <= self.rhs + slack
    }
}

pub fn bahadur_check(
    n: usize,
    psi: &SchmidtSpectrum,
    phi: &SchmidtSpectrum,
    rate: f64,
) -> Result<BahadurCheck> {
    check_same_dim(psi, phi)?;
    let threshold = Threshold::Rate(rate);
    let (lp, lp_c) = log2_failure_and_success(n, phi, &threshold)?;
    let (lq, lq_c) = log2_failure_and_success(n, psi, &threshold)?;
    let (p_n, q_n) = (lp.exp2(), lq.exp2());
    let divergence = output_law_relative_entropy(n, psi, phi)?;
    let term = |x: f64, lx: f64, ly: f64| if x == 0.0 { 0.0 } else { x * (lx - ly) };
    let binary_divergence = term(q_n, lq, lp) + term(lq_c.exp2(), lq_c, lp_c);
    let h = binary_entropy(q_n.clamp(0.0, 1.0))?;
    let lhs = -lp / n as f64;
    let rhs = (divergence + h + lq_c.exp2() * lp_c) / (n as f64 * q_n);
    Ok(BahadurCheck {
        n,
        p_n,
        q_n,
        divergence,
        binary_divergence,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(v: &[f64]) -> SchmidtSpectrum {
        SchmidtSpectrum::new(v.to_vec()).unwrap()
    }

    /// Dense search over the ordered simplex for `min D(q‖p)` subject to
    /// `H(q) ≤ R`, refined along the boundary `H(q) = R` where the minimum
    /// sits whenever the constraint binds. Boundary points are found by
    /// root-finding in one coordinate, never through the tilted family.
    pub(crate) fn grid_search(rate: f64, p: &SchmidtSpectrum, step: f64) -> f64 {
        let d = p.dim();
        let objective = |q: &[f64]| -> f64 {
            if q.iter().any(|&x| x < 0.0) || crate::schur::shannon_entropy(q) > rate + 1e-13 {
                return f64::INFINITY;
            }
            relative_entropy(q, p.values()).unwrap()
        };
        let k = (1.0 / step).round() as usize;
        let mut best = f64::INFINITY;
        let mut best_q1 = 0.0;
        // root of H(q1, ·) = R on [a, b] where H is monotone in the free coordinate
        let root = |build: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64| -> Option<Vec<f64>> {
            let g = |t: f64| crate::schur::shannon_entropy(&build(t)) - rate;
            let (mut lo, mut hi) = (a, b);
            let (glo, ghi) = (g(lo), g(hi));
            if glo.signum() == ghi.signum() {
                return None;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid).signum() == glo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            // the feasible side of the bracket
            Some(if g(lo) <= 0.0 { build(lo) } else { build(hi) })
        };
        let boundary = |q1: f64| -> Vec<Vec<f64>> {
            match d {
                2 => vec![vec![q1, 1.0 - q1]],
                3 => {
                    let rest = 1.0 - q1;
                    let build = move |q2: f64| vec![q1, q2, rest - q2];
                    [(0.0, rest / 2.0), (rest / 2.0, rest)]
                        .iter()
                        .filter_map(|&(a, b)| root(&build, a, b))
                        .collect()
                }
                _ => unimplemented!("grid oracle covers d = 2, 3"),
            }
        };
        let value_at = |q1: f64| -> f64 {
            boundary(q1)
                .iter()
                .map(|q| objective(q))
                .fold(f64::INFINITY, f64::min)
        };
        // coarse pass over the ordered simplex
        for i in 0..=k {
            let q1 = i as f64 / k as f64;
            if d == 2 {
                let v = objective(&[q1, 1.0 - q1]);
                if v < best {
                    best = v;
                    best_q1 = q1;
                }
                continue;
            }
            for j in 0..=(k - i) {
                let q = [q1, j as f64 / k as f64, (k - i - j) as f64 / k as f64];
                if q[0] < q[1] || q[1] < q[2] {
                    continue;
                }
                let v = objective(&q);
                if v < best {
                    best = v;
                    best_q1 = q1;
                }
            }
        }
        if d == 2 {
            // the two boundary points of H(q1) = R, each by bisection
            let build = |t: f64| vec![t, 1.0 - t];
            for (a, b) in [(0.0, 0.5), (0.5, 1.0)] {
                if let Some(q) = root(&build, a, b) {
                    best = best.min(objective(&q));
                }
            }
            return best;
        }
        // scan the boundary over the q1 grid, then refine around its best point
        let mut boundary_best = f64::INFINITY;
        for i in 0..=k {
            let q1 = i as f64 / k as f64;
            let v = value_at(q1);
            if v < boundary_best {
                boundary_best = v;
                best_q1 = q1;
            }
        }
        best = best.min(boundary_best);
        let (mut a, mut b) = (
            (best_q1 - 2.0 * step).max(0.0),
            (best_q1 + 2.0 * step).min(1.0),
        );
        // shrink to the q1 range where the boundary exists; the minimum can sit
        // at its end, where q3 reaches zero
        let feasible = |x: f64| value_at(x).is_finite();
        for (edge, inner) in [(&mut a, best_q1), (&mut b, best_q1)] {
            if !feasible(*edge) {
                let (mut out, mut inn) = (*edge, inner);
                for _ in 0..200 {
                    let mid = 0.5 * (out + inn);
                    if feasible(mid) {
                        inn = mid;
                    } else {
                        out = mid;
                    }
                }
                *edge = inn;
            }
        }
        best = best.min(value_at(a)).min(value_at(b));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let x1 = b - phi * (b - a);
            let x2 = a + phi * (b - a);
            if value_at(x1) <= value_at(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        best.min(value_at(0.5 * (a + b)))
    }

    #[test]
    fn tilt_examples() {
        let p = spec(&[0.9, 0.1]);
        assert_eq!(tilted_spectrum(&p, 1.0).unwrap(), p);
        let q = tilted_spectrum(&p, 2.0).unwrap();
        assert!((q.values()[0] - 81.0 / 82.0).abs() < 1e-15);
        assert!((q.values()[1] - 1.0 / 82.0).abs() < 1e-15);
        let u = tilted_spectrum(&spec(&[0.5, 0.3, 0.2]), 0.0).unwrap();
        assert!(u.values().iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        let z = tilted_spectrum(&spec(&[0.7, 0.3, 0.0]), 0.0).unwrap();
        assert_eq!(z.values(), &[0.5, 0.5, 0.0]);
        assert!(tilted_spectrum(&p, -1.0).is_err());
        let big = tilted_spectrum(&spec(&[0.5, 0.5 - 1e-9, 1e-9]), 5000.0).unwrap();
        assert!(big.values()[2] == 0.0 && big.values()[0] > 0.5);
    }

    #[test]
    fn exponent_examples() {
        let p = spec(&[0.75, 0.25]);
        let at_h = exponent_rate(p.entropy(), &p).unwrap();
        assert_eq!(at_h.value, 0.0);
        assert_eq!(at_h.q_star, p);
        let zero = exponent_rate(0.0, &p).unwrap();
        assert_eq!(zero.value, -(0.75f64).log2());
        assert!((zero.value - 0.415037).abs() < 1e-6);
        assert_eq!(zero.q_star.values(), &[1.0, 0.0]);
        assert_eq!(exponent_rate(0.9, &p).unwrap().value, 0.0);
        assert!(exponent_rate(1.01, &p).is_err());
        assert!(exponent_rate(-0.1, &p).is_err());

        let skew = spec(&[0.9, 0.1]);
        let r = exponent_rate(0.3, &skew).unwrap();
        assert_eq!(r.solver.method, SolverMethod::Bisection);
        assert!(r.solver.residual <= 1e-9);
        assert!(
            (r.value - relative_entropy(r.q_star.values(), skew.values()).unwrap()).abs() < 1e-12
        );
        assert!((r.value - grid_search(0.3, &skew, 1e-5)).abs() < 1e-6);
    }

    #[test]
    fn tied_top_uses_the_closed_form() {
        let p = spec(&[0.4, 0.4, 0.2]);
        for rate in [0.0, 0.3, 1.0] {
            let r = exponent_rate(rate, &p).unwrap();
            assert_eq!(r.solver.method, SolverMethod::TopBlock);
            assert!((r.value - (-(0.4f64).log2() - rate)).abs() < 1e-15);
            assert!(r.solver.residual <= 1e-9);
            assert!(
                (relative_entropy(r.q_star.values(), p.values()).unwrap() - r.value).abs() < 1e-9
            );
            assert!(
                (r.value - grid_search(rate, &p, 1e-3)).abs() < 1e-6,
                "R={rate}"
            );
        }
        let u = SchmidtSpectrum::uniform(3).unwrap();
        let r = exponent_rate(0.5, &u).unwrap();
        assert!((r.value - (3f64.log2() - 0.5)).abs() < 1e-15);
        assert!((r.value - grid_search(0.5, &u, 1e-3)).abs() < 1e-6);
    }

    #[test]
    fn empirical_exponent_examples() {
        let bell = spec(&[0.5, 0.5]);
        let v = empirical_exponent(3, &bell, 1.0 / 3.0 - 1e-6).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(empirical_exponent(3, &bell, 0.0).unwrap(), f64::INFINITY);
        // rates beyond the reach of any outcome fail with certainty
        assert!(empirical_exponent(40, &bell, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn law_divergence_examples() {
        let a = spec(&[0.6, 0.4]);
        let b = spec(&[0.9, 0.1]);
        assert_eq!(distribution_relative_entropy(20, &a, &a).unwrap(), 0.0);
        assert_eq!(distribution_relative_entropy(1, &a, &b).unwrap(), 0.0);
        assert!(distribution_relative_entropy(3, &a, &spec(&[0.5, 0.3, 0.2])).is_err());
        let over_l = output_law_relative_entropy(40, &a, &b).unwrap();
        let over_lambda = distribution_relative_entropy(40, &a, &b).unwrap();
        assert!(over_l <= over_lambda + 1e-12);
        assert_eq!(
            distribution_relative_entropy(2, &a, &spec(&[1.0, 0.0])).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.11).unwrap() - 0.499916).abs() < 5e-7);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn probe_rejects_unsorted_grids() {
        assert!(strong_converse_probe(&[10, 5], &spec(&[0.9, 0.1]), 0.3).is_err());
    }

    #[test]
    fn tilted_solution_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2, 3] {
            for _ in 0..6 {
                let p = SchmidtSpectrum::random(d, &mut rng).unwrap();
                let rate = rand::Rng::gen_range(&mut rng, 0.0..p.entropy());
                let r = exponent_rate(rate, &p).unwrap();
                let step = if d == 2 { 1e-5 } else { 1e-3 };
                let g = grid_search(rate, &p, step);
                assert!(
                    (r.value - g).abs() < 1e-6,
                    "{p:?} R={rate}: {} vs {g}",
                    r.value
                );
            }
        }
    }

    proptest! {
        #[test]
        fn exponent_is_nonincreasing_and_vanishes_above_entropy(
            w in proptest::collection::vec(0.01f64..1.0, 3),
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let p = SchmidtSpectrum::from_weights(w).unwrap();
            let max = 3f64.log2();
            let (lo, hi) = if a < b { (a * max, b * max) } else { (b * max, a * max) };
            let vlo = exponent_rate(lo, &p).unwrap();
            let vhi = exponent_rate(hi, &p).unwrap();
            prop_assert!(vlo.value + 1e-12 >= vhi.value);
            prop_assert!(vlo.value >= 0.0);
            prop_assert_eq!(vhi.value == 0.0, hi >= p.entropy());
            prop_assert!(vlo.q_star.values().windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn tilting_preserves_order(w in proptest::collection::vec(0.0f64..1.0, 4), beta in 0.0f64..50.0) {
            prop_assume!(w.iter().sum::<f64>() > 0.0);
            let p = SchmidtSpectrum::from_weights(w).unwrap();
            let q = tilted_spectrum(&p, beta).unwrap();
            prop_assert!(q.values().windows(2).all(|w| w[0] >= w[1]));
            prop_assert!((q.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
