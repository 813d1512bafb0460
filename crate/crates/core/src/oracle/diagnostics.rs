use num_traits::ToPrimitive;
use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::projector::{IsotypicProjector, Side};
use super::state::{build_tensor_state, PureBipartiteState, StateVector};
use crate::error::{Error, Result};
use crate::schur::shannon_entropy;
use crate::young::{enumerate_partitions, log2_multiplicity_dim, multiplicity_dim, Partition};

/// Outcomes with `a_λ` below this are rejected by the post-measurement ops.
pub const DEGENERATE_OUTCOME: f64 = 1e-12;

/// Consecutive Schmidt coefficients closer than this are one eigenvalue.
pub const GROUPING_TOLERANCE: f64 = 1e-9;

// squared singular values below this are numerical zeros
const SPECTRUM_FLOOR: f64 = 1e-20;

fn check_weight(lambda: &Partition, n: usize) -> Result<()> {
    if lambda.weight() != n {
        return Err(Error::WeightMismatch {
            left: lambda.weight(),
            right: n,
        });
    }
    Ok(())
}

/// Every `P_λ` for `λ ⊢ n` with at most `d` rows, in reverse-lex order.
pub fn projector_family(n: usize, d: usize, side: Side) -> Result<Vec<IsotypicProjector>> {
    enumerate_partitions(n, d)
        .iter()
        .map(|l| IsotypicProjector::new(l, d, side))
        .collect()
}

/// `⟨Φ|P_λ^A ⊗ I|Φ⟩` for `Φ = |φ⟩^{⊗n}`.
pub fn outcome_probability_oracle(
    phi: &PureBipartiteState,
    n: usize,
    lambda: &Partition,
) -> Result<f64> {
    check_weight(lambda, n)?;
    let state = build_tensor_state(phi, n)?;
    let projector = IsotypicProjector::new(lambda, phi.dim(), Side::A)?;
    Ok(expectation(&projector, &state))
}

fn expectation(projector: &IsotypicProjector, state: &StateVector) -> f64 {
    state.inner(&projector.apply(state)).re
}

/// The oracle law over all `λ ⊢ n` with at most `d` rows, evaluated in
/// parallel; the order matches [`enumerate_partitions`].
pub fn oracle_distribution(phi: &PureBipartiteState, n: usize) -> Result<Vec<(Partition, f64)>> {
    let state = build_tensor_state(phi, n)?;
    let family = projector_family(n, phi.dim(), Side::A)?;
    Ok(family
        .par_iter()
        .map(|p| (p.partition().clone(), expectation(p, &state)))
        .collect())
}

/// `‖(P_λ^A ⊗ P_μ^B)|Φ⟩‖`. Zero for `λ ≠ μ`; for `λ = μ` it is `√a_λ`.
pub fn cross_block_residual(
    phi: &PureBipartiteState,
    n: usize,
    lambda: &Partition,
    mu: &Partition,
) -> Result<f64> {
    check_weight(lambda, n)?;
    check_weight(mu, n)?;
    let state = build_tensor_state(phi, n)?;
    let pa = IsotypicProjector::new(lambda, phi.dim(), Side::A)?;
    let pb = IsotypicProjector::new(mu, phi.dim(), Side::B)?;
    Ok(pb.apply(&pa.apply(&state)).norm())
}

fn project_both(state: &StateVector, lambda: &Partition) -> Result<StateVector> {
    let d = state.local_dim();
    let pa = IsotypicProjector::new(lambda, d, Side::A)?;
    let pb = IsotypicProjector::new(lambda, d, Side::B)?;
    Ok(pb.apply(&pa.apply(state)))
}

/// `(P_λ ⊗ P_λ)|Φ⟩`, normalized.
pub fn post_measurement_state(
    phi: &PureBipartiteState,
    n: usize,
    lambda: &Partition,
) -> Result<StateVector> {
    check_weight(lambda, n)?;
    let mut projected = project_both(&build_tensor_state(phi, n)?, lambda)?;
    let weight = projected.norm_squared();
    if weight < DEGENERATE_OUTCOME {
        return Err(Error::DegenerateOutcome(weight));
    }
    projected.normalize();
    Ok(projected)
}

/// Spectral certificate that the post-measurement state is
/// `|φ_λ⟩ ⊗ |V_λ⟩` with `|V_λ⟩` maximally entangled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionDiagnostics {
    pub lambda: Vec<usize>,
    pub probability: f64,
    /// `dim V_λ`.
    pub multiplicity_dim: u64,
    /// Every eigenvalue group has a multiplicity divisible by `dim V_λ`.
    pub schmidt_multiplicity_ok: bool,
    /// Distinct eigenvalues with their multiplicities, descending.
    pub groups: Vec<(f64, usize)>,
    /// The spectrum of `φ_λ`: sums over consecutive `dim V_λ`-blocks of the
    /// descending Schmidt spectrum.
    pub grouped_spectrum: Vec<f64>,
    /// `H(r) + log2 dim V_λ`.
    pub entropy: f64,
    /// Entropy of the full Schmidt spectrum.
    pub spectrum_entropy: f64,
    /// `spectrum_entropy − H(r)`; equals `log2 dim V_λ` when distortion-free.
    pub v_part_entropy: f64,
    /// Largest overlap with any state of the form `|χ⟩ ⊗ |Φ_L⟩`, `L = dim V_λ`.
    pub fidelity: f64,
}

/// Groups a descending spectrum into runs within `tol` of the run's first value.
pub fn group_spectrum(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some((first, sum, count)) if (*first - v).abs() <= tol => {
                *sum += v;
                *count += 1;
            }
            _ => groups.push((v, v, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, s, c)| (s / c as f64, c))
        .collect()
}

/// Max fidelity of a state with descending Schmidt coefficients `s` against
/// states whose coefficients come in `block`-fold degenerate runs.
pub fn block_fidelity(s: &[f64], block: usize) -> f64 {
    s.chunks(block)
        .map(|c| {
            let root: f64 = c.iter().map(|x| x.max(0.0).sqrt()).sum();
            root * root
        })
        .sum::<f64>()
        / block as f64
}

pub fn distortion_diagnostics(
    phi: &PureBipartiteState,
    n: usize,
    lambda: &Partition,
) -> Result<DistortionDiagnostics> {
    let state = build_tensor_state(phi, n)?;
    let mut projected = project_both(&state, lambda)?;
    let probability = projected.norm_squared();
    if probability < DEGENERATE_OUTCOME {
        return Err(Error::DegenerateOutcome(probability));
    }
    projected.normalize();
    Ok(diagnose(&projected, lambda, probability))
}

pub(crate) fn diagnose(
    post: &StateVector,
    lambda: &Partition,
    probability: f64,
) -> DistortionDiagnostics {
    let f = multiplicity_dim(lambda)
        .to_u64()
        .expect("dim V fits u64 for oracle sizes");
    let spectrum: Vec<f64> = post
        .schmidt_coefficients()
        .into_iter()
        .filter(|&x| x > SPECTRUM_FLOOR)
        .collect();
    let groups = group_spectrum(&spectrum, GROUPING_TOLERANCE);
    let fu = f as usize;
    let ok = groups.iter().all(|&(_, m)| m % fu == 0);
    // blocks of the sorted spectrum rather than tolerance groups: nearby but
    // distinct eigenvalues would otherwise be averaged together
    let r: Vec<f64> = spectrum.chunks(fu).map(|c| c.iter().sum()).collect();
    let h_r = shannon_entropy(&r);
    let full = shannon_entropy(&spectrum);
    DistortionDiagnostics {
        lambda: lambda.parts().to_vec(),
        probability,
        multiplicity_dim: f,
        schmidt_multiplicity_ok: ok,
        groups,
        grouped_spectrum: r,
        entropy: h_r + log2_multiplicity_dim(lambda),
        spectrum_entropy: full,
        v_part_entropy: full - h_r,
        fidelity: block_fidelity(&spectrum, fu),
    }
}

/// Per-outcome fidelities and the two aggregate distortions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityTable {
    pub rows: Vec<FidelityRow>,
    /// `1 − min_L F_L`.
    pub epsilon_worst: f64,
    /// `1 − max_L F_L`.
    pub epsilon_best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityRow {
    pub lambda: Vec<usize>,
    #[serde(rename = "L")]
    pub output_dim: u64,
    pub probability: f64,
    pub fidelity: f64,
}

/// Diagnostics for every outcome with probability above `min_probability`.
pub fn fidelity_table(
    phi: &PureBipartiteState,
    n: usize,
    min_probability: f64,
) -> Result<FidelityTable> {
    let state = build_tensor_state(phi, n)?;
    let shapes = enumerate_partitions(n, phi.dim());
    let diags: Vec<Option<DistortionDiagnostics>> = shapes
        .par_iter()
        .map(|l| {
            let mut post = project_both(&state, l)?;
            let w = post.norm_squared();
            if w <= min_probability.max(DEGENERATE_OUTCOME) {
                return Ok(None);
            }
            post.normalize();
            Ok(Some(diagnose(&post, l, w)))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<FidelityRow> = diags
        .into_iter()
        .flatten()
        .map(|g| FidelityRow {
            lambda: g.lambda,
            output_dim: g.multiplicity_dim,
            probability: g.probability,
            fidelity: g.fidelity,
        })
        .collect();
    let min = rows
        .iter()
        .map(|r| r.fidelity)
        .fold(f64::INFINITY, f64::min);
    let max = rows
        .iter()
        .map(|r| r.fidelity)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(FidelityTable {
        rows,
        epsilon_worst: 1.0 - min,
        epsilon_best: 1.0 - max,
    })
}

/// Draws `count` outcomes of the projective measurement on `|φ⟩^{⊗n}`.
pub fn sample_projective(
    phi: &PureBipartiteState,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Partition>> {
    let law = oracle_distribution(phi, n)?;
    let weights: Vec<f64> = law.iter().map(|(_, a)| a.max(0.0)).collect();
    let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| law[index.sample(&mut rng)].0.clone())
        .collect())
}
