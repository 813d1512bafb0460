//! Small floating-point helpers shared across modules.

use twofloat::TwoFloat;

/// `log2(2^a + 2^b)` with `-inf` as the additive identity.
pub fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `log2 Σ 2^{x_i}`; `-inf` for an empty or all-`-inf` input.
pub fn log2_sum_exp2<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut acc = NeumaierSum::default();
    for v in values {
        acc.add((v - max).exp2());
    }
    max + acc.total().log2()
}

/// Compensated summation; the result does not depend on thread count as long
/// as terms are fed in a fixed order.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<T: IntoIterator<Item = f64>>(iter: T) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator.
pub fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<NeumaierSum>().total()
}

/// Double-double mantissa with a separate binary exponent: `m · 2^e`.
///
/// Keeps ~32 significant digits at magnitudes far outside the `f64` range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ExtFloat {
    m: TwoFloat,
    e: i64,
}

// exact 2^k for k in the normal exponent range
fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

impl ExtFloat {
    pub(crate) const ZERO: ExtFloat = ExtFloat {
        m: TwoFloat::from_f64(0.0),
        e: 0,
    };

    pub(crate) fn from_f64(x: f64) -> Self {
        Self::normalized(TwoFloat::from(x), 0)
    }

    // brings |m.hi| into [0.5, 1); m is assumed finite and of moderate size
    fn normalized(m: TwoFloat, e: i64) -> Self {
        let hi = m.hi();
        if hi == 0.0 {
            return Self::ZERO;
        }
        let shift = ((hi.to_bits() >> 52) & 0x7ff) as i64 - 1022;
        ExtFloat {
            m: m * pow2(-shift),
            e: e + shift,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.m.hi() == 0.0
    }

    pub(crate) fn is_positive(&self) -> bool {
        self.m.hi() > 0.0
    }

    pub(crate) fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.m * other.m, self.e + other.e)
    }

    pub(crate) fn div(self, other: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::normalized(self.m / other.m, self.e - other.e)
    }

    pub(crate) fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= other.e {
            (self, other)
        } else {
            (other, self)
        };
        let gap = big.e - small.e;
        if gap > 120 {
            return big;
        }
        Self::normalized(big.m + small.m * pow2(-gap), big.e)
    }

    pub(crate) fn neg(self) -> Self {
        ExtFloat {
            m: -self.m,
            e: self.e,
        }
    }

    pub(crate) fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// `log2 |x|`, `-inf` at zero.
    pub(crate) fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let hi = self.m.hi().abs();
        let lo = self.m.lo() * self.m.hi().signum();
        self.e as f64 + hi.log2() + lo / (hi * std::f64::consts::LN_2)
    }
}
