//! Base-b significand and digit extraction, plus the first-digit law
//! `P(d) = log_b(1 + 1/d)` and its digit-block generalization.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Integer radix, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Base(u32);

impl Base {
    pub fn new(b: u32) -> Result<Self> {
        if b < 2 {
            return Err(Error::domain(format!("base must be at least 2, got {b}")));
        }
        Ok(Base(b))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// Natural log of the radix.
    pub fn ln(self) -> f64 {
        self.as_f64().ln()
    }
}

impl std::fmt::Display for Base {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let b: u32 = s
            .parse()
            .map_err(|_| Error::domain(format!("invalid base {s:?}")))?;
        Base::new(b)
    }
}

/// Decomposition `x = value * b^exponent` with `value` in `[1, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Significand {
    pub value: f64,
    pub exponent: i32,
}

fn check_positive_finite(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(format!("value must be finite, got {x}")));
    }
    if x <= 0.0 {
        return Err(Error::domain(format!("value must be positive, got {x}")));
    }
    Ok(())
}

/// Extract the base-b significand of a positive finite `x`.
///
/// Uses exponent arithmetic rather than string formatting, so it is
/// base-generic. A value within 4 ulps below a power of the radix is
/// snapped to significand 1, making digit assignment at decade
/// boundaries deterministic.
pub fn significand(x: f64, base: Base) -> Result<Significand> {
    check_positive_finite(x)?;
    let b = base.as_f64();
    let mut exponent = (x.ln() / base.ln()).floor() as i32;
    let mut value = x / b.powi(exponent);
    while value < 1.0 {
        value *= b;
        exponent -= 1;
    }
    while value >= b {
        value /= b;
        exponent += 1;
    }
    // 4-ulp snap on either side of a power of the radix
    if value >= b - 4.0 * b * f64::EPSILON {
        value = 1.0;
        exponent += 1;
    } else if value <= 1.0 + 4.0 * f64::EPSILON {
        value = 1.0;
    }
    Ok(Significand { value, exponent })
}

/// First significant digit of `x` in the given base, in `[1, b-1]`.
pub fn first_digit(x: f64, base: Base) -> Result<u32> {
    let s = significand(x, base)?;
    Ok(s.value.floor() as u32)
}

/// Fractional part of `log_b x`, in `[0, 1)`, snapped consistently with
/// [`significand`] so that exact powers of the radix map to 0.
pub fn log_fraction(x: f64, base: Base) -> Result<f64> {
    let s = significand(x, base)?;
    if s.value == 1.0 {
        return Ok(0.0);
    }
    Ok(s.value.ln() / base.ln())
}

/// First-digit law: probability that the leading digit equals `d`.
pub fn benford_first_digit_pmf(d: u32, base: Base) -> Result<f64> {
    if d < 1 || d > base.get() - 1 {
        return Err(Error::domain(format!(
            "digit {d} out of range 1..={} for base {base}",
            base.get() - 1
        )));
    }
    Ok((1.0 / f64::from(d)).ln_1p() / base.ln())
}

/// Joint digit law: probability that the leading digit block equals the
/// given sequence, i.e. `log_b(1 + 1/D)` where `D` is the block read as
/// a base-b integer.
///
/// The block form is the standard closed form from the significant-digit
/// literature; it is consistent with [`benford_first_digit_pmf`] under
/// marginalization of trailing digits.
pub fn benford_block_pmf(digits: &[u32], base: Base) -> Result<f64> {
    let Some((&head, tail)) = digits.split_first() else {
        return Err(Error::domain("digit block must be nonempty".to_string()));
    };
    if head < 1 || head > base.get() - 1 {
        return Err(Error::domain(format!(
            "leading digit {head} out of range 1..={} for base {base}",
            base.get() - 1
        )));
    }
    let mut block = f64::from(head);
    for &d in tail {
        if d > base.get() - 1 {
            return Err(Error::domain(format!(
                "digit {d} out of range 0..={} for base {base}",
                base.get() - 1
            )));
        }
        block = block * base.as_f64() + f64::from(d);
    }
    Ok((1.0 / block).ln_1p() / base.ln())
}
