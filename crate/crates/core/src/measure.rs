//! The outcome law of the Young-index measurement on `n` copies, failure
//! probabilities, outcome sampling, and the dimension bounds used for
//! exponent estimates.
//!
//! The law is `a_λ = dim V_λ · s_λ(p)` over partitions of `n` with at most `d`
//! rows; the protocol then holds a maximally entangled state of dimension
//! `L = dim V_λ`. Probabilities are carried as `log2` values alongside the
//! linear ones so that exponent studies at a few thousand copies work without
//! underflow.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log2_sum_exp2, NeumaierSum};
use crate::schur::{shannon_entropy, SchmidtSpectrum, SchurEvaluator};
use crate::young::{
    log2_multiplicity_dim, multiplicity_dim, partition_count, CountTableau, Log2Factorials,
    Partition, PartitionStream,
};

/// Default cap on the number of partitions a full enumeration may visit.
pub const DEFAULT_PARTITION_BUDGET: u128 = 1_000_000;

// partitions handed to the thread pool at a time
const CHUNK: usize = 4096;

// log2-domain slack before a threshold comparison falls back to exact integers
const TIE_WINDOW: f64 = 1e-9;

/// Resource limits for enumeration-based operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureConfig {
    pub partition_budget: u128,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            partition_budget: DEFAULT_PARTITION_BUDGET,
        }
    }
}

impl MeasureConfig {
    pub(crate) fn check(&self, n: usize, d: usize) -> Result<()> {
        let count = partition_count(n, d);
        if count > self.partition_budget {
            return Err(Error::BudgetExceeded {
                what: "partition enumeration",
                required: count,
                budget: self.partition_budget,
            });
        }
        Ok(())
    }
}

/// Streams `(padded λ, log2 a_λ)` in enumeration order. The values are
/// computed in parallel chunks and delivered sequentially, so any reduction
/// done by `visit` is independent of the thread count.
pub(crate) fn for_each_log2_outcome<F>(n: usize, p: &SchmidtSpectrum, mut visit: F)
where
    F: FnMut(&[usize], f64),
{
    let d = p.dim();
    let evaluator = SchurEvaluator::new(p, n);
    let factorials = Log2Factorials::new(n + d);
    let mut stream = PartitionStream::new(n, d);
    let mut buf: Vec<usize> = Vec::with_capacity(CHUNK * d);
    loop {
        buf.clear();
        while buf.len() < CHUNK * d {
            match stream.next_padded() {
                Some(parts) => buf.extend_from_slice(parts),
                None => break,
            }
        }
        if buf.is_empty() {
            break;
        }
        let values: Vec<f64> = buf
            .par_chunks(d)
            .map(|parts| {
                let s = evaluator.log2_auto_padded(parts);
                if s == f64::NEG_INFINITY {
                    s
                } else {
                    factorials.log2_multiplicity_dim_padded(parts) + s
                }
            })
            .collect();
        for (parts, v) in buf.chunks(d).zip(values) {
            visit(parts, v);
        }
        if buf.len() < CHUNK * d {
            break;
        }
    }
}

/// `Σ_λ a_λ` computed by streaming, without storing the law; the budget does
/// not apply. Useful as a normalization check at large partition counts.
pub fn total_probability(n: usize, p: &SchmidtSpectrum) -> f64 {
    let mut acc = NeumaierSum::default();
    for_each_log2_outcome(n, p, |_, lg| acc.add(lg.exp2()));
    acc.total()
}

/// One outcome of the measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    partition: Partition,
    probability: f64,
    log2_probability: f64,
    log2_output_dim: f64,
    rate: f64,
}

impl Outcome {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `a_λ`; zero when it underflows (see [`Outcome::log2_probability`]).
    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn log2_probability(&self) -> f64 {
        self.log2_probability
    }

    /// The exact output dimension `L = dim V_λ`, computed on demand.
    pub fn output_dim(&self) -> BigUint {
        multiplicity_dim(&self.partition)
    }

    pub fn log2_output_dim(&self) -> f64 {
        self.log2_output_dim
    }

    /// `(1/n) log2 L`, the concentrated entanglement per copy.
    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// The full outcome law for `n` copies of a state with spectrum `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurWeylDistribution {
    n: usize,
    p: SchmidtSpectrum,
    entries: Vec<Outcome>,
}

/// Serialized form of one [`Outcome`]; `L` is a decimal string because it
/// outgrows every fixed-width integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub lambda: Vec<usize>,
    pub probability: f64,
    pub log2_probability: Option<f64>,
    #[serde(rename = "L")]
    pub output_dim: String,
    pub rate: f64,
}

/// Serialized form of a [`SchurWeylDistribution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub n: usize,
    pub d: usize,
    pub p: Vec<f64>,
    pub entries: Vec<OutcomeRecord>,
}

impl SchurWeylDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &SchmidtSpectrum {
        &self.p
    }

    /// Outcomes in the order of [`crate::young::enumerate_partitions`].
    pub fn entries(&self) -> &[Outcome] {
        &self.entries
    }

    pub fn get(&self, lambda: &Partition) -> Option<&Outcome> {
        self.entries.iter().find(|o| &o.partition == lambda)
    }

    /// `Σ a_λ` with compensated summation.
    pub fn total_probability(&self) -> f64 {
        self.entries
            .iter()
            .map(|o| o.probability)
            .collect::<NeumaierSum>()
            .total()
    }

    /// `P = Σ_{L < S} a_λ`.
    pub fn failure_probability(&self, threshold: &Threshold) -> Result<f64> {
        Ok(self.log2_failure_probability(threshold)?.exp2())
    }

    /// `log2 P`, `-inf` when no outcome fails.
    pub fn log2_failure_probability(&self, threshold: &Threshold) -> Result<f64> {
        threshold.validate()?;
        let mut logs = Vec::new();
        for o in &self.entries {
            let parts = o
                .partition
                .padded(self.p.dim())
                .expect("enumerated within d rows");
            if threshold.fails(&parts, o.log2_output_dim, self.n) {
                logs.push(o.log2_probability);
            }
        }
        Ok(log2_sum_exp2(logs))
    }

    pub fn report(&self) -> DistributionReport {
        let d = self.p.dim();
        DistributionReport {
            n: self.n,
            d,
            p: self.p.values().to_vec(),
            entries: self
                .entries
                .iter()
                .map(|o| OutcomeRecord {
                    lambda: o.partition.padded(d).expect("enumerated within d rows"),
                    probability: o.probability,
                    log2_probability: o.log2_probability.is_finite().then_some(o.log2_probability),
                    output_dim: o.output_dim().to_string(),
                    rate: o.rate,
                })
                .collect(),
        }
    }
}

impl Serialize for SchurWeylDistribution {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.report().serialize(serializer)
    }
}

/// The outcome law with the default budget.
pub fn distribution(n: usize, p: &SchmidtSpectrum) -> Result<SchurWeylDistribution> {
    distribution_with(n, p, &MeasureConfig::default())
}

/// The outcome law, refusing enumerations above the configured budget.
pub fn distribution_with(
    n: usize,
    p: &SchmidtSpectrum,
    config: &MeasureConfig,
) -> Result<SchurWeylDistribution> {
    config.check(n, p.dim())?;
    let mut entries = Vec::new();
    let factorials = Log2Factorials::new(n + p.dim());
    for_each_log2_outcome(n, p, |parts, lg| {
        let log2_dim = factorials.log2_multiplicity_dim_padded(parts).max(0.0);
        entries.push(Outcome {
            partition: Partition::from_sorted_unchecked(parts.to_vec()),
            probability: lg.exp2(),
            log2_probability: lg,
            log2_output_dim: log2_dim,
            rate: if n == 0 { 0.0 } else { log2_dim / n as f64 },
        });
    });
    Ok(SchurWeylDistribution {
        n,
        p: p.clone(),
        entries,
    })
}

/// The success threshold on the output dimension: an outcome fails when
/// `L < S`, and `L = S` counts as success.
#[derive(Debug, Clone, PartialEq)]
pub enum Threshold {
    /// An explicit integer `S ≥ 1`.
    Dimension(BigUint),
    /// `S = ⌈2^{nR}⌉` for a rate `R ≥ 0` in bits.
    Rate(f64),
}

impl Threshold {
    fn validate(&self) -> Result<()> {
        match self {
            Threshold::Dimension(s) if s.is_zero() => Err(Error::InvalidArgument(
                "threshold S must be at least 1".into(),
            )),
            Threshold::Rate(r) if !r.is_finite() || *r < 0.0 => Err(Error::RateOutOfRange {
                rate: *r,
                max: f64::INFINITY,
            }),
            _ => Ok(()),
        }
    }

    /// The integer threshold for `n` copies. For a rate this is `⌈2^{nR}⌉`,
    /// which needs `nR` below a few thousand bits.
    pub fn dimension(&self, n: usize) -> Result<BigUint> {
        self.validate()?;
        match self {
            Threshold::Dimension(s) => Ok(s.clone()),
            Threshold::Rate(r) => {
                let x = n as f64 * r;
                if x.fract() == 0.0 {
                    return Ok(BigUint::one() << (x as u64));
                }
                // 2^x = 2^k · 2^f with f in (0,1): scale 2^f to 60 bits, exact
                // enough for the ceiling away from integer points
                let k = x.floor() as u64;
                let frac = x - x.floor();
                let mant = (frac.exp2() * (1u64 << 60) as f64).ceil() as u64;
                let scaled = BigUint::from(mant) << k;
                let (q, r) = (
                    scaled.clone() >> 60u32,
                    scaled & ((BigUint::one() << 60u32) - BigUint::one()),
                );
                Ok(if r.is_zero() { q } else { q + BigUint::one() })
            }
        }
    }

    /// Whether an outcome with padded shape `parts` and `log2 L = log2_dim`
    /// falls short of the threshold. Ties in the log domain are settled with
    /// the exact integer `L`.
    pub(crate) fn fails(&self, parts: &[usize], log2_dim: f64, n: usize) -> bool {
        match self {
            Threshold::Dimension(s) => {
                if s.is_one() {
                    return false;
                }
                let log2_s = log2_big(s);
                if log2_dim < log2_s - TIE_WINDOW {
                    true
                } else if log2_dim > log2_s + TIE_WINDOW {
                    false
                } else {
                    &multiplicity_dim(&Partition::from_sorted_unchecked(parts.to_vec())) < s
                }
            }
            Threshold::Rate(r) => {
                // for integer L: L < ⌈2^x⌉ exactly when L < 2^x
                let x = n as f64 * r;
                if log2_dim < x - TIE_WINDOW {
                    true
                } else if log2_dim > x + TIE_WINDOW {
                    false
                } else {
                    let l = multiplicity_dim(&Partition::from_sorted_unchecked(parts.to_vec()));
                    if x.fract() == 0.0 {
                        l < (BigUint::one() << (x as u64))
                    } else {
                        log2_big(&l) < x
                    }
                }
            }
        }
    }
}

/// `log2` of a big integer, accurate to a few ulps of the result.
pub(crate) fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits").to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

/// `log2 P` and `log2 (1 - P)` for a threshold, each summed directly so
/// that neither loses precision when the other is close to one.
pub fn log2_failure_and_success(
    n: usize,
    p: &SchmidtSpectrum,
    threshold: &Threshold,
) -> Result<(f64, f64)> {
    log2_failure_and_success_with(n, p, threshold, &MeasureConfig::default())
}

pub fn log2_failure_and_success_with(
    n: usize,
    p: &SchmidtSpectrum,
    threshold: &Threshold,
    config: &MeasureConfig,
) -> Result<(f64, f64)> {
    threshold.validate()?;
    config.check(n, p.dim())?;
    let factorials = Log2Factorials::new(n + p.dim());
    let mut fail = Vec::new();
    let mut pass = Vec::new();
    for_each_log2_outcome(n, p, |parts, lg| {
        let log2_dim = factorials.log2_multiplicity_dim_padded(parts).max(0.0);
        if threshold.fails(parts, log2_dim, n) {
            fail.push(lg);
        } else {
            pass.push(lg);
        }
    });
    Ok((log2_sum_exp2(fail), log2_sum_exp2(pass)))
}

/// `log2 P` for `n` copies; `-inf` when nothing fails.
pub fn log2_failure_probability(
    n: usize,
    p: &SchmidtSpectrum,
    threshold: &Threshold,
) -> Result<f64> {
    Ok(log2_failure_and_success(n, p, threshold)?.0)
}

/// `P = Σ_{L < S} a_λ`.
pub fn failure_probability(n: usize, p: &SchmidtSpectrum, threshold: &Threshold) -> Result<f64> {
    Ok(log2_failure_probability(n, p, threshold)?.exp2())
}

/// One draw from the outcome law: the RSK shape of an i.i.d. word from `p`.
pub fn sample_outcome<R: Rng + ?Sized>(n: usize, p: &SchmidtSpectrum, rng: &mut R) -> Partition {
    let letters = WeightedIndex::new(p.values()).expect("a spectrum has positive mass");
    let mut tableau = CountTableau::new(p.dim());
    for _ in 0..n {
        tableau.insert(letters.sample(rng));
    }
    tableau.shape()
}

/// `count` draws from a ChaCha8 stream seeded with `seed`.
pub fn sample_outcomes(n: usize, p: &SchmidtSpectrum, count: usize, seed: u64) -> Vec<Partition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_outcome(n, p, &mut rng)).collect()
}

/// `(1/n) log2 dim V_λ`, the entropy estimate read off an outcome.
pub fn entropy_estimate(lambda: &Partition, n: usize) -> Result<f64> {
    if lambda.weight() != n {
        return Err(Error::WeightMismatch {
            left: lambda.weight(),
            right: n,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    Ok(log2_multiplicity_dim(lambda).max(0.0) / n as f64)
}

/// The two sides of `|(1/n) log2 dim V_λ - H(λ/n)| ≤ (d² + 2d)/(2n) · log2(n + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimBoundMargin {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn dim_bound_margin(lambda: &Partition, n: usize, d: usize) -> Result<DimBoundMargin> {
    let estimate = entropy_estimate(lambda, n)?;
    let shape = lambda.normalized(d).ok_or_else(|| Error::TooManyRows {
        partition: lambda.to_string(),
        rows: lambda.length(),
        d,
    })?;
    if n == 0 {
        return Err(Error::InvalidArgument("the bound needs n ≥ 1".into()));
    }
    let lhs = (estimate - shannon_entropy(&shape)).abs();
    let bound = (d * d + 2 * d) as f64 / (2 * n) as f64 * ((n + d) as f64).log2();
    Ok(DimBoundMargin {
        lhs,
        bound,
        holds: lhs <= bound,
    })
}

/// `max_λ (lhs − bound)` of [`dim_bound_margin`] over every `λ ⊢ n` with at
/// most `d` rows; negative when the bound holds everywhere. Streams the
/// partitions, so the budget does not apply.
pub fn max_dim_bound_excess(n: usize, d: usize) -> Result<f64> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument(
            "the bound needs n ≥ 1 and d ≥ 1".into(),
        ));
    }
    let bound = (d * d + 2 * d) as f64 / (2 * n) as f64 * ((n + d) as f64).log2();
    let factorials = Log2Factorials::new(n + d);
    let mut stream = PartitionStream::new(n, d);
    let mut shape = vec![0.0; d];
    let mut worst = f64::NEG_INFINITY;
    while let Some(parts) = stream.next_padded() {
        for (s, &x) in shape.iter_mut().zip(parts) {
            *s = x as f64 / n as f64;
        }
        let estimate = factorials.log2_multiplicity_dim_padded(parts).max(0.0) / n as f64;
        worst = worst.max((estimate - shannon_entropy(&shape)).abs() - bound);
    }
    Ok(worst)
}

/// `-(1/n) log2 Σ_{λ/n ∈ region} a_λ`; `+inf` when the region catches no
/// probability. The region sees `λ/n` padded to `d` entries.
pub fn tail_probability_exponent_check<F>(n: usize, p: &SchmidtSpectrum, region: F) -> Result<f64>
where
    F: Fn(&[f64]) -> bool,
{
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the tail exponent needs n ≥ 1".into(),
        ));
    }
    MeasureConfig::default().check(n, p.dim())?;
    let mut logs = Vec::new();
    let mut shape = vec![0.0; p.dim()];
    for_each_log2_outcome(n, p, |parts, lg| {
        for (x, &k) in shape.iter_mut().zip(parts) {
            *x = k as f64 / n as f64;
        }
        if region(&shape) {
            logs.push(lg);
        }
    });
    let total = log2_sum_exp2(logs);
    if total == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((-total / n as f64).max(0.0))
}

/// The law of the output dimension `L`: outcomes with equal `dim V_λ` merged,
/// as `(L, log2 probability)` in increasing `L`.
pub fn output_dimension_law(n: usize, p: &SchmidtSpectrum) -> Result<Vec<(BigUint, f64)>> {
    MeasureConfig::default().check(n, p.dim())?;
    let mut groups: BTreeMap<BigUint, Vec<f64>> = BTreeMap::new();
    for_each_log2_outcome(n, p, |parts, lg| {
        let l = multiplicity_dim(&Partition::from_sorted_unchecked(parts.to_vec()));
        groups.entry(l).or_default().push(lg);
    });
    Ok(groups
        .into_iter()
        .map(|(l, logs)| (l, log2_sum_exp2(logs)))
        .collect())
}
