//! Signed binary-expansion quantizer with a per-budget error guarantee.
//!
//! A real x is written as sign(x)·(Σᵢ 2^i aᵢ + Σᵢ 2^{−i} bᵢ) with integer
//! digits a_k…a₀ and fractional digits b₁, b₂, …  A budget of B bits buys
//! the sign, all k+1 integer digits, and the first B−k−2 fractional
//! digits, where k is the largest integer with 2^k − 1 ≤ |x|.  Dropping
//! the remaining fractional tail costs at most 2^{−(B−k−2)} in absolute
//! error, and choosing the closer of the truncated value and its upward
//! neighbour can only improve on that.
//!
//! Dyadic inputs use their terminating expansion, so digit extraction is
//! deterministic.  Exactness of the digit bookkeeping is guaranteed for
//! inputs in the normal floating-point range; deep-subnormal inputs may
//! round at the 2^{−1074} level.

use crate::{Error, Result};

/// A value rounded onto the B-bit binary-expansion codebook, together
/// with the digits that reconstruct it.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryApproximation {
    /// The reconstructed value x̃_B.
    pub value: f64,
    /// Total budget B: sign + integer digits + retained fractional digits.
    pub bits_used: u32,
    /// Sign bit.
    pub negative: bool,
    /// Integer digits a_k…a₀, most significant first.
    pub integer_digits: Vec<u8>,
    /// Fractional digits b₁…b_{B−k−2}.
    pub fractional_digits: Vec<u8>,
}

impl BinaryApproximation {
    /// Re-sum the stored digits.  Equals `value` exactly: digit weights
    /// are added in decreasing order and every codebook value has its
    /// one-bits within a 53-position window.
    pub fn reconstruct(&self) -> f64 {
        let top = self.integer_digits.len() as i32 - 1;
        let mut total = 0.0;
        for (idx, &a) in self.integer_digits.iter().enumerate() {
            if a == 1 {
                total += ((top - idx as i32) as f64).exp2();
            }
        }
        for (idx, &b) in self.fractional_digits.iter().enumerate() {
            if b == 1 {
                total += (-(idx as i32 + 1) as f64).exp2();
            }
        }
        if self.negative {
            -total
        } else {
            total
        }
    }

    /// The guaranteed ceiling 2^{−(B−k−2)} on |x − x̃_B| for this budget.
    pub fn error_bound(&self) -> f64 {
        (-(self.fractional_digits.len() as i32) as f64).exp2()
    }
}

/// Largest k with 2^k − 1 ≤ m (k = 0 for m < 1): the index of the leading
/// integer digit the expansion must carry.
fn integer_digit_index(m: f64) -> u32 {
    let mut k = 0u32;
    while (f64::from(k + 1)).exp2() - 1.0 <= m {
        k += 1;
    }
    k
}

/// Bit of |v| at weight 2^w, for v ≥ 0 exactly representable.
fn digit_at(v: f64, w: i32) -> u8 {
    let shifted = v * f64::from(-w).exp2();
    if !shifted.is_finite() {
        // Overflow means w lies far below the lowest one-bit of v.
        return 0;
    }
    if (shifted.floor() % 2.0).abs() == 1.0 {
        1
    } else {
        0
    }
}

/// Quantize x onto the B-bit codebook.
///
/// # Algorithm
/// Truncate |x| to B−k−2 fractional digits, then compare against the
/// upward neighbour one grid step higher and keep whichever is closer
/// (ties keep the truncation).  Round-up is skipped in the one corner
/// where the candidate — the all-ones integer 2^{k+1}−1 at a zero
/// fractional budget — would not itself satisfy the bit precondition, so
/// every output re-expands to itself.
///
/// # Errors
/// `InsufficientBits` when B < k+2 (sign, the integer digits, and a
/// non-negative fractional count cannot fit), `Domain` for non-finite x.
pub fn binary_expand(x: f64, bits: u32) -> Result<BinaryApproximation> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "binary_expand requires finite input, got {x}"
        )));
    }
    let m = x.abs();
    let k = integer_digit_index(m);
    let needed = k + 2;
    if bits < needed {
        return Err(Error::InsufficientBits {
            given: bits,
            needed,
        });
    }
    let frac = bits - needed;
    let magnitude = if frac >= 1074 {
        // The retained tail reaches below every representable weight.
        m
    } else {
        let step = f64::from(frac).exp2().recip();
        let scaled = m / step;
        if scaled.is_infinite() {
            // m ≥ 2^{1024−frac}: all one-bits of m sit above weight 2^{−frac}.
            m
        } else {
            let t = scaled.floor() * step;
            let u = (scaled.floor() + 1.0) * step;
            // Round-up must leave a value that re-satisfies the bit
            // precondition at this budget, else truncation is kept.
            let up_ok = bits >= integer_digit_index(u) + 2;
            if (m - t) > (u - m) && up_ok {
                u
            } else {
                t
            }
        }
    };
    let negative = x < 0.0;
    let value = if negative { -magnitude } else { magnitude };
    let integer_digits = (0..=k)
        .rev()
        .map(|i| digit_at(magnitude, i as i32))
        .collect();
    let fractional_digits = (1..=frac)
        .map(|i| digit_at(magnitude, -(i as i32)))
        .collect();
    Ok(BinaryApproximation {
        value,
        bits_used: bits,
        negative,
        integer_digits,
        fractional_digits,
    })
}

/// Smallest budget B with |x − x̃_B| ≤ eps.
///
/// Searches upward from the minimum feasible budget; the truncation
/// bound 2^{−(B−k−2)} guarantees termination and yields the pointwise
/// ceiling B ≤ (log₂|x| ∨ 0) + 1 + log₂(1/eps) + 2, whose expectation
/// over any sampled input is the budget bound quoted to callers.
pub fn bits_for_accuracy(x: f64, eps: f64) -> u32 {
    assert!(
        eps > 0.0 && eps < 1.0,
        "accuracy target must lie in (0,1), got {eps}"
    );
    assert!(x.is_finite(), "bits_for_accuracy requires finite input");
    let mut bits = integer_digit_index(x.abs()) + 2;
    loop {
        let approx = binary_expand(x, bits).expect("budget starts at the precondition");
        if (x - approx.value).abs() <= eps {
            return bits;
        }
        bits += 1;
    }
}
