//! Exact distributions of `frac(log_b X)` on `[0,1)` for a closed family
//! of analytic distributions.
//!
//! Every CDF produced here is a piecewise table whose pieces all have the
//! form `c1*b^s + c2*s + c3`. The family is closed under the decade-folding
//! construction, wrapping of uniform densities, step CDFs (constant pieces)
//! and mod-1 shifts, which lets the distance computations in
//! [`crate::metrics`] locate extrema by calculus instead of grid search.

use crate::digits::{self, Base};
use crate::error::{Error, Result};
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest number of exact atoms a step CDF will store.
pub const MAX_ATOMS: u64 = 1_000_000;

/// Breakpoints closer than this to 0 or 1 after a mod-1 shift are snapped.
const WRAP_SNAP: f64 = 1e-12;

/// A positive distribution with exact closed-form CDF access.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnalyticDistribution {
    /// Uniform on `(0, T)`.
    UniformContinuous { t: f64 },
    /// `X = b^(aY)` with `Y` uniform on `(0,1)`.
    PowerOfUniform { a: f64, base: Base },
    /// Density `1/(x ln b)` on `(b^k, b^(k+1))`.
    BenfordDecade { k: i32, base: Base },
    /// Uniform on `{1, ..., N}`.
    UniformIntegers { n: u64 },
}

impl AnalyticDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticDistribution::UniformContinuous { t } => {
                if !t.is_finite() || t <= 0.0 {
                    return Err(Error::domain(format!(
                        "T must be positive and finite, got {t}"
                    )));
                }
            }
            AnalyticDistribution::PowerOfUniform { a, .. } => {
                if !a.is_finite() || a <= 0.0 {
                    return Err(Error::domain(format!(
                        "a must be positive and finite, got {a}"
                    )));
                }
            }
            AnalyticDistribution::BenfordDecade { k, base } => {
                let hi = base.as_f64().powi(k + 1);
                if !hi.is_finite() || base.as_f64().powi(k) <= 0.0 {
                    return Err(Error::domain(format!(
                        "decade ({base}^{k}, {base}^{}) is not representable",
                        k + 1
                    )));
                }
            }
            AnalyticDistribution::UniformIntegers { n } => {
                if n < 1 {
                    return Err(Error::domain("N must be at least 1".to_string()));
                }
            }
        }
        Ok(())
    }

    /// Support bounds `(inf, sup)`.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            AnalyticDistribution::UniformContinuous { t } => (0.0, t),
            AnalyticDistribution::PowerOfUniform { a, base } => (1.0, base.as_f64().powf(a)),
            AnalyticDistribution::BenfordDecade { k, base } => {
                (base.as_f64().powi(k), base.as_f64().powi(k + 1))
            }
            AnalyticDistribution::UniformIntegers { n } => (1.0, n as f64),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        match *self {
            AnalyticDistribution::UniformContinuous { t } => x / t,
            AnalyticDistribution::PowerOfUniform { a, base } => x.ln() / (a * base.ln()),
            AnalyticDistribution::BenfordDecade { k, base } => x.ln() / base.ln() - f64::from(k),
            AnalyticDistribution::UniformIntegers { n } => x.floor() / n as f64,
        }
    }

    /// Left-continuous inverse CDF; `p` must lie in `[0, 1]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "quantile level must be in [0,1], got {p}"
            )));
        }
        Ok(match *self {
            AnalyticDistribution::UniformContinuous { t } => p * t,
            AnalyticDistribution::PowerOfUniform { a, base } => base.as_f64().powf(a * p),
            AnalyticDistribution::BenfordDecade { k, base } => base.as_f64().powf(f64::from(k) + p),
            AnalyticDistribution::UniformIntegers { n } => (p * n as f64).ceil().max(1.0),
        })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            AnalyticDistribution::UniformContinuous { t } => t / 2.0,
            AnalyticDistribution::PowerOfUniform { a, base } => {
                let c = a * base.ln();
                c.exp_m1() / c
            }
            AnalyticDistribution::BenfordDecade { k, base } => {
                let b = base.as_f64();
                b.powi(k) * (b - 1.0) / base.ln()
            }
            AnalyticDistribution::UniformIntegers { n } => (n as f64 + 1.0) / 2.0,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            AnalyticDistribution::UniformContinuous { t } => t * t / 12.0,
            AnalyticDistribution::PowerOfUniform { a, base } => {
                let c = a * base.ln();
                let mean = c.exp_m1() / c;
                (2.0 * c).exp_m1() / (2.0 * c) - mean * mean
            }
            AnalyticDistribution::BenfordDecade { k, base } => {
                let b = base.as_f64();
                let mean = b.powi(k) * (b - 1.0) / base.ln();
                b.powi(2 * k) * (b * b - 1.0) / (2.0 * base.ln()) - mean * mean
            }
            AnalyticDistribution::UniformIntegers { n } => {
                let nf = n as f64;
                (nf * nf - 1.0) / 12.0
            }
        }
    }
}

/// One `c1*b^s + c2*s + c3` segment of a [`ModOneCdf`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Piece {
    fn eval(&self, b: f64, s: f64) -> f64 {
        self.c1 * b.powf(s) + self.c2 * s + self.c3
    }
}

/// Exact CDF of `frac(log_b X)` on `[0,1]`, stored as a piece table.
///
/// `evaluate` is the right-continuous CDF `P(S <= s)`; step CDFs carry
/// their atoms as jumps at interior breakpoints (or at 0). `evaluate_left`
/// gives `P(S < s)`, which is 0 at `s = 0` for every variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModOneCdf {
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    base: Base,
}

impl ModOneCdf {
    fn new(breakpoints: Vec<f64>, pieces: Vec<Piece>, base: Base) -> Self {
        debug_assert_eq!(breakpoints.len(), pieces.len() + 1);
        debug_assert_eq!(breakpoints[0], 0.0);
        debug_assert_eq!(*breakpoints.last().unwrap(), 1.0);
        ModOneCdf {
            breakpoints,
            pieces,
            base,
        }
    }

    /// The exactly uniform CDF `F(s) = s` (the Benford reference law).
    pub fn uniform(base: Base) -> Self {
        ModOneCdf::new(
            vec![0.0, 1.0],
            vec![Piece {
                c1: 0.0,
                c2: 1.0,
                c3: 0.0,
            }],
            base,
        )
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Right-continuous CDF value `P(S <= s)`; `s` is clamped to `[0,1]`.
    pub fn evaluate(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let idx = self
            .breakpoints
            .partition_point(|&t| t <= s)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        self.pieces[idx].eval(self.base.as_f64(), s)
    }

    /// Left limit `P(S < s)`; `s` is clamped to `[0,1]`, and the value at
    /// 0 is exactly 0 for every variant, atoms included.
    pub fn evaluate_left(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        if s == 0.0 {
            return 0.0;
        }
        let idx = self
            .breakpoints
            .partition_point(|&t| t < s)
            .saturating_sub(1)
            .min(self.pieces.len() - 1);
        self.pieces[idx].eval(self.base.as_f64(), s)
    }

    /// Structural sanity check used after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.breakpoints.len() != self.pieces.len() + 1 || self.pieces.is_empty() {
            return Err(Error::config(
                "piece table and breakpoints do not match".to_string(),
            ));
        }
        if self.breakpoints[0] != 0.0 || *self.breakpoints.last().unwrap() != 1.0 {
            return Err(Error::config("breakpoints must span [0, 1]".to_string()));
        }
        if self.breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(
                "breakpoints must be strictly increasing".to_string(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("piece table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cdf: ModOneCdf = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("invalid piece table: {e}")))?;
        cdf.validate()?;
        Ok(cdf)
    }
}

/// Mod-1 CDF of `log_b X` for `X` uniform on `(0, b^theta)`.
///
/// Only the phase `theta = frac(log_b T)` matters, by radix-scale
/// invariance; decades below the top one contribute the geometric sum
/// `(b^s - 1)/(b - 1)` and the partial top decade `min(b^s, b^theta) - 1`,
/// all divided by `b^theta`.
pub fn uniform_phase_cdf(theta: f64, base: Base) -> Result<ModOneCdf> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::domain(format!(
            "phase must lie in [0,1), got {theta}"
        )));
    }
    let b = base.as_f64();
    if theta == 0.0 {
        let c1 = 1.0 / (b - 1.0);
        return Ok(ModOneCdf::new(
            vec![0.0, 1.0],
            vec![Piece {
                c1,
                c2: 0.0,
                c3: -c1,
            }],
            base,
        ));
    }
    let bt = b.powf(theta);
    let c1_lo = (1.0 / (b - 1.0) + 1.0) / bt;
    let c1_hi = 1.0 / ((b - 1.0) * bt);
    let c3_hi = (bt - 1.0 - 1.0 / (b - 1.0)) / bt;
    Ok(ModOneCdf::new(
        vec![0.0, theta, 1.0],
        vec![
            Piece {
                c1: c1_lo,
                c2: 0.0,
                c3: -c1_lo,
            },
            Piece {
                c1: c1_hi,
                c2: 0.0,
                c3: c3_hi,
            },
        ],
        base,
    ))
}

/// Mod-1 CDF of `frac(U)` for `U` uniform on `(lo, hi)`: the uniform
/// density wrapped around the unit circle. Piecewise linear; the density
/// is `(floor(L) + 1)/L` on an arc of length `frac(L)` starting at
/// `frac(lo)` and `floor(L)/L` elsewhere, `L = hi - lo`.
fn wrapped_uniform_cdf(lo: f64, hi: f64, base: Base) -> ModOneCdf {
    let len = hi - lo;
    debug_assert!(len > 0.0 && len.is_finite());
    let whole = len.floor();
    let rem = len - whole;
    if rem == 0.0 {
        return ModOneCdf::uniform(base);
    }
    let u = lo.rem_euclid(1.0);
    let end = u + rem;
    let in_arc = |s: f64| {
        if end <= 1.0 {
            s >= u && s < end
        } else {
            s >= u || s < end - 1.0
        }
    };
    // exact CDF level: (whole * t + arc overlap with [0, t)) / len
    let level = |t: f64| {
        let overlap = if end <= 1.0 {
            (t - u).clamp(0.0, rem)
        } else {
            t.min(end - 1.0) + (t - u).max(0.0)
        };
        (whole * t + overlap) / len
    };

    let mut breakpoints = vec![0.0];
    for t in [u, if end > 1.0 { end - 1.0 } else { end }] {
        if t > 0.0 && t < 1.0 {
            breakpoints.push(t);
        }
    }
    breakpoints.push(1.0);
    breakpoints.sort_unstable_by(f64::total_cmp);
    breakpoints.dedup();

    let mut pieces = Vec::with_capacity(breakpoints.len() - 1);
    for (i, w) in breakpoints.windows(2).enumerate() {
        let mid = 0.5 * (w[0] + w[1]);
        let slope = if in_arc(mid) {
            (whole + 1.0) / len
        } else {
            whole / len
        };
        let c3 = if i == breakpoints.len() - 2 {
            1.0 - slope
        } else {
            level(w[0]) - slope * w[0]
        };
        pieces.push(Piece {
            c1: 0.0,
            c2: slope,
            c3,
        });
    }
    ModOneCdf::new(breakpoints, pieces, base)
}

/// Mod-1 CDF of `log_b X` for `X` uniform on `(lo, hi)` with `0 < lo < hi`:
/// decade folding restricted to the support.
pub fn log_mod_one_uniform(lo: f64, hi: f64, base: Base) -> Result<ModOneCdf> {
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi <= lo {
        return Err(Error::domain(format!(
            "support must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let b = base.as_f64();
    let log_lo = lo.ln() / base.ln();
    let log_hi = hi.ln() / base.ln();
    let m_lo = log_lo.floor();
    let m_hi = log_hi.floor();
    let alpha = log_lo - m_lo;
    let beta = log_hi - m_hi;
    let len = hi - lo;

    let mut breakpoints = vec![0.0];
    for t in [alpha.min(beta), alpha.max(beta)] {
        if t > 0.0 && t < 1.0 && *breakpoints.last().unwrap() != t {
            breakpoints.push(t);
        }
    }
    breakpoints.push(1.0);

    let decades = (m_hi - m_lo) as i64;
    let mut pieces = Vec::with_capacity(breakpoints.len() - 1);
    for w in breakpoints.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let mut c1 = 0.0;
        let mut c3 = 0.0;
        for step in 0..=decades {
            let scale = b.powf(m_lo + step as f64);
            let first = step == 0;
            let last = step == decades;
            if first && last {
                // single decade: length = clamp(b^s, b^alpha, b^beta) - b^alpha
                if mid < alpha {
                } else if mid < beta {
                    c1 += scale;
                    c3 -= scale * b.powf(alpha);
                } else {
                    c3 += scale * (b.powf(beta) - b.powf(alpha));
                }
            } else if first {
                if mid >= alpha {
                    c1 += scale;
                    c3 -= scale * b.powf(alpha);
                }
            } else if last {
                if mid < beta {
                    c1 += scale;
                    c3 -= scale;
                } else {
                    c3 += scale * (b.powf(beta) - 1.0);
                }
            } else {
                c1 += scale;
                c3 -= scale;
            }
        }
        pieces.push(Piece {
            c1: c1 / len,
            c2: 0.0,
            c3: c3 / len,
        });
    }
    Ok(ModOneCdf::new(breakpoints, pieces, base))
}

/// Step CDF with atoms of mass `1/N` at `frac(log_b j)`, `j = 1..=N`.
fn uniform_integers_cdf(n: u64, base: Base) -> Result<ModOneCdf> {
    if n > MAX_ATOMS {
        return Err(Error::capacity(format!(
            "N = {n} exceeds the {MAX_ATOMS}-atom budget for exact step CDFs; \
             use the counting shortcut leading_one_fraction for digit questions"
        )));
    }
    let mut positions: Vec<f64> = (1..=n)
        .map(|j| digits::log_fraction(j as f64, base).expect("positive integer"))
        .collect();
    positions.sort_unstable_by(f64::total_cmp);

    let nf = n as f64;
    let mut breakpoints = vec![0.0];
    let mut pieces = Vec::new();
    let mut seen = 0u64;
    let mut i = 0usize;
    while i < positions.len() {
        let t = positions[i];
        let mut count = 0u64;
        while i < positions.len() && positions[i] == t {
            count += 1;
            i += 1;
        }
        if t > 0.0 {
            let prev_level = seen as f64 / nf;
            pieces.push(Piece {
                c1: 0.0,
                c2: 0.0,
                c3: prev_level,
            });
            breakpoints.push(t);
        }
        seen += count;
    }
    pieces.push(Piece {
        c1: 0.0,
        c2: 0.0,
        c3: 1.0,
    });
    breakpoints.push(1.0);
    Ok(ModOneCdf::new(breakpoints, pieces, base))
}

/// Exact CDF of `frac(log_b X)` for an analytic distribution.
pub fn log_mod_one(dist: &AnalyticDistribution, base: Base) -> Result<ModOneCdf> {
    dist.validate()?;
    match *dist {
        AnalyticDistribution::UniformContinuous { t } => {
            let theta = digits::log_fraction(t, base)?;
            uniform_phase_cdf(theta, base)
        }
        AnalyticDistribution::PowerOfUniform { a, base: own } => {
            let scaled = a * own.ln() / base.ln();
            Ok(wrapped_uniform_cdf(0.0, scaled, base))
        }
        AnalyticDistribution::BenfordDecade { k, base: own } => {
            let c = own.ln() / base.ln();
            Ok(wrapped_uniform_cdf(
                f64::from(k) * c,
                f64::from(k + 1) * c,
                base,
            ))
        }
        AnalyticDistribution::UniformIntegers { n } => uniform_integers_cdf(n, base),
    }
}

/// CDF of `frac(S + delta)` for `S ~ cdf`; `delta` is reduced mod 1 and
/// the wrap is carried out exactly on the piece descriptors.
pub fn shift_mod_one(cdf: &ModOneCdf, delta: f64) -> ModOneCdf {
    let d = delta.rem_euclid(1.0);
    if d == 0.0 {
        return cdf.clone();
    }
    let b = cdf.base.as_f64();
    let wrap_level = cdf.evaluate_left(1.0 - d);

    let mut breakpoints: Vec<f64> = vec![0.0, d];
    for &t in &cdf.breakpoints[1..cdf.breakpoints.len() - 1] {
        let mut shifted = (t + d).rem_euclid(1.0);
        if !(WRAP_SNAP..=1.0 - WRAP_SNAP).contains(&shifted) {
            shifted = 0.0;
        }
        if shifted > 0.0 {
            breakpoints.push(shifted);
        }
    }
    breakpoints.push(1.0);
    breakpoints.sort_unstable_by(f64::total_cmp);
    breakpoints.dedup();

    let locate = |s: f64| -> &Piece {
        let idx = cdf
            .breakpoints
            .partition_point(|&t| t <= s)
            .saturating_sub(1)
            .min(cdf.pieces.len() - 1);
        &cdf.pieces[idx]
    };

    let mut pieces = Vec::with_capacity(breakpoints.len() - 1);
    for w in breakpoints.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let piece = if mid >= d {
            let src = locate(mid - d);
            Piece {
                c1: src.c1 * b.powf(-d),
                c2: src.c2,
                c3: src.c3 - src.c2 * d + 1.0 - wrap_level,
            }
        } else {
            let sigma = 1.0 - d;
            let src = locate(mid + sigma);
            Piece {
                c1: src.c1 * b.powf(sigma),
                c2: src.c2,
                c3: src.c3 + src.c2 * sigma - wrap_level,
            }
        };
        pieces.push(piece);
    }
    ModOneCdf::new(breakpoints, pieces, cdf.base)
}

/// Map a raw 64-bit word to the open interval `(0, 1)`.
fn unit_from_bits(z: u64) -> f64 {
    ((z >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

/// Deterministic uniform stream: `n` draws in `(0,1)` from a seeded
/// counter-based generator. Distinct `stream` values give independent
/// streams under the same seed.
pub(crate) fn unit_uniforms(seed: u64, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..n).map(|_| unit_from_bits(rng.next_u64())).collect()
}

/// `n` i.i.d. draws via inverse-CDF sampling from a seeded deterministic
/// uniform stream; identical seeds give identical output.
pub fn sample(dist: &AnalyticDistribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::domain("sample count must be at least 1".to_string()));
    }
    let uniforms = unit_uniforms(seed, 0, n);
    uniforms.into_iter().map(|u| dist.quantile(u)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;
    use proptest::prelude::*;

    fn b(x: u32) -> Base {
        Base::new(x).unwrap()
    }

    #[allow(non_snake_case)]
    fn B10() -> Base {
        b(10)
    }

    /// Pointwise tolerance for closed-form identities.
    const TOL_EXACT: f64 = 1e-12;
    /// 99% DKW envelope for 10^6 samples.
    const DKW_1E6_99: f64 = 0.0016276236307187293;

    fn empirical_sup_gap(cdf: &ModOneCdf, samples: &[f64]) -> f64 {
        let base = cdf.base();
        let mut fracs: Vec<f64> = samples
            .iter()
            .map(|&x| digits::log_fraction(x, base).unwrap())
            .collect();
        fracs.sort_unstable_by(f64::total_cmp);
        let n = fracs.len() as f64;
        let mut sup: f64 = 0.0;
        // walk tie blocks: atoms put many samples at one position, and the
        // empirical CDF there is the whole block, not one rank per sample
        let mut i = 0;
        while i < fracs.len() {
            let u = fracs[i];
            let j = i + fracs[i..].partition_point(|&v| v <= u);
            sup = sup.max((j as f64 / n - cdf.evaluate(u)).abs());
            sup = sup.max((cdf.evaluate_left(u) - i as f64 / n).abs());
            i = j;
        }
        for &t in cdf.breakpoints() {
            let right = fracs.partition_point(|&u| u <= t) as f64 / n;
            let left = fracs.partition_point(|&u| u < t) as f64 / n;
            sup = sup.max((right - cdf.evaluate(t)).abs());
            sup = sup.max((left - cdf.evaluate_left(t)).abs());
        }
        sup
    }

    #[test]
    fn power_of_uniform_unit_exponent_is_uniform() {
        let dist = AnalyticDistribution::PowerOfUniform {
            a: 1.0,
            base: b(10),
        };
        let cdf = log_mod_one(&dist, b(10)).unwrap();
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            assert!((cdf.evaluate(s) - s).abs() < TOL_EXACT);
        }
    }

    #[test]
    fn benford_decade_is_uniform() {
        let dist = AnalyticDistribution::BenfordDecade { k: 5, base: b(10) };
        let cdf = log_mod_one(&dist, b(10)).unwrap();
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            assert!((cdf.evaluate(s) - s).abs() < TOL_EXACT);
        }
    }

    #[test]
    fn uniform_continuous_unit_phase_closed_form() {
        let dist = AnalyticDistribution::UniformContinuous { t: 1.0 };
        let cdf = log_mod_one(&dist, b(10)).unwrap();
        // F_0(s) = (10^s - 1)/9; F_0(0.5) = (sqrt(10)-1)/9
        let expected = (10f64.sqrt() - 1.0) / 9.0;
        assert!((cdf.evaluate(0.5) - expected).abs() < TOL_EXACT);
        assert!((cdf.evaluate(0.5) - 0.240253).abs() < 1e-6);
        for i in 0..=50 {
            let s = i as f64 / 50.0;
            assert!((cdf.evaluate(s) - (10f64.powf(s) - 1.0) / 9.0).abs() < TOL_EXACT);
        }
    }

    #[test]
    fn radix_scale_invariance_of_uniform_continuous() {
        let cdf_a = log_mod_one(
            &AnalyticDistribution::UniformContinuous { t: 10f64.powf(2.4) },
            b(10),
        )
        .unwrap();
        let cdf_b = log_mod_one(
            &AnalyticDistribution::UniformContinuous { t: 10f64.powf(0.4) },
            b(10),
        )
        .unwrap();
        for i in 0..=1000 {
            let s = i as f64 / 1000.0;
            assert!((cdf_a.evaluate(s) - cdf_b.evaluate(s)).abs() < TOL_EXACT);
        }
    }

    #[test]
    fn power_of_uniform_three_halves_wraps() {
        let dist = AnalyticDistribution::PowerOfUniform {
            a: 1.5,
            base: b(10),
        };
        let cdf = log_mod_one(&dist, b(10)).unwrap();
        assert!((cdf.evaluate(0.5) - 2.0 / 3.0).abs() < TOL_EXACT);
        assert!((cdf.evaluate(0.25) - 0.25 * 4.0 / 3.0).abs() < TOL_EXACT);
        assert!((cdf.evaluate(0.75) - (2.0 / 3.0 + 0.25 * 2.0 / 3.0)).abs() < TOL_EXACT);
    }

    #[test]
    fn cdf_endpoints_and_monotonicity() {
        let variants = [
            AnalyticDistribution::UniformContinuous { t: 1.0 },
            AnalyticDistribution::UniformContinuous { t: 6.31 },
            AnalyticDistribution::PowerOfUniform {
                a: 1.5,
                base: b(10),
            },
            AnalyticDistribution::PowerOfUniform {
                a: 0.37,
                base: b(2),
            },
            AnalyticDistribution::BenfordDecade { k: -3, base: b(10) },
            AnalyticDistribution::UniformIntegers { n: 1000 },
        ];
        for dist in &variants {
            for eval_base in [2u32, 10] {
                let cdf = log_mod_one(dist, b(eval_base)).unwrap();
                assert_eq!(cdf.evaluate_left(0.0), 0.0, "{dist:?}");
                assert!((cdf.evaluate(1.0) - 1.0).abs() < TOL_EXACT, "{dist:?}");
                let mut prev = -1.0;
                for i in 0..=10_000 {
                    let s = i as f64 / 10_000.0;
                    let v = cdf.evaluate(s);
                    assert!(v >= prev - TOL_EXACT, "{dist:?} at {s}");
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn continuous_variants_have_continuous_cdf() {
        let variants = [
            AnalyticDistribution::UniformContinuous { t: 3.7 },
            AnalyticDistribution::PowerOfUniform {
                a: 2.31,
                base: b(10),
            },
            AnalyticDistribution::BenfordDecade { k: 1, base: b(16) },
        ];
        for dist in &variants {
            let cdf = log_mod_one(dist, b(10)).unwrap();
            for &t in cdf.breakpoints() {
                assert!(
                    (cdf.evaluate(t) - cdf.evaluate_left(t)).abs() < TOL_EXACT || t == 0.0,
                    "{dist:?} jumps at {t}"
                );
            }
        }
    }

    #[test]
    fn uniform_integers_step_cdf() {
        let cdf = log_mod_one(&AnalyticDistribution::UniformIntegers { n: 20 }, B10()).unwrap();
        // atoms at 0 (j = 1, 10) and at log10(2) (j = 2, 20), ...
        assert!((cdf.evaluate(0.0) - 2.0 / 20.0).abs() < TOL_EXACT);
        assert_eq!(cdf.evaluate_left(0.0), 0.0);
        // probe at the stored atom position: log_fraction, not log10, since
        // ln(2)/ln(10) and 2f64.log10() can differ in the last ulp
        let l2 = digits::log_fraction(2.0, B10()).unwrap();
        assert!((cdf.evaluate(l2) - cdf.evaluate_left(l2) - 2.0 / 20.0).abs() < TOL_EXACT);
        // first-digit-1 mass: j in {1, 10..=19} = 11 of 20
        assert!((cdf.evaluate_left(l2) - 11.0 / 20.0).abs() < TOL_EXACT);
        assert!((cdf.evaluate(1.0) - 1.0).abs() < TOL_EXACT);
    }

    #[test]
    fn uniform_integers_capacity_error() {
        let err = log_mod_one(
            &AnalyticDistribution::UniformIntegers { n: MAX_ATOMS + 1 },
            B10(),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("capacity"), "{msg}");
        assert!(msg.contains("leading_one_fraction"), "{msg}");
    }

    #[test]
    fn log_mod_one_uniform_matches_frozen_pieces() {
        // independently derived for X ~ U(0.3, 7), base 10
        let cdf = log_mod_one_uniform(0.3, 7.0, B10()).unwrap();
        assert_eq!(cdf.pieces().len(), 3);
        let expect_bps = [0.0, 0.3f64.log10().rem_euclid(1.0), 7f64.log10(), 1.0];
        for (got, want) in cdf.breakpoints().iter().zip(expect_bps) {
            assert!((got - want).abs() < TOL_EXACT);
        }
        let expect = [
            (0.14925373134328357, -0.14925373134328357),
            (0.16417910447761194, -0.19402985074626866),
            (0.014925373134328358, 0.8507462686567165),
        ];
        for (piece, (c1, c3)) in cdf.pieces().iter().zip(expect) {
            assert!((piece.c1 - c1).abs() < TOL_EXACT, "{piece:?}");
            assert_eq!(piece.c2, 0.0);
            assert!((piece.c3 - c3).abs() < TOL_EXACT, "{piece:?}");
        }
    }

    #[test]
    fn log_mod_one_uniform_rejects_bad_support() {
        assert!(log_mod_one_uniform(0.0, 1.0, B10()).is_err());
        assert!(log_mod_one_uniform(-1.0, 1.0, B10()).is_err());
        assert!(log_mod_one_uniform(2.0, 2.0, B10()).is_err());
    }

    #[test]
    fn shift_identity_and_uniform_invariance() {
        let f = log_mod_one(&AnalyticDistribution::UniformContinuous { t: 1.0 }, B10()).unwrap();
        let same = shift_mod_one(&f, 0.0);
        assert_eq!(f, same);
        let uni = ModOneCdf::uniform(B10());
        let shifted = shift_mod_one(&uni, 0.37);
        for i in 0..=100 {
            let s = i as f64 / 100.0;
            assert!((shifted.evaluate(s) - s).abs() < TOL_EXACT);
        }
    }

    #[test]
    fn shift_of_unit_uniform_continuous() {
        // frac(log10 X + 0.5) for X ~ U(0,1): G(0.5) = 1 - F_0(0.5)
        let f = log_mod_one(&AnalyticDistribution::UniformContinuous { t: 1.0 }, B10()).unwrap();
        let g = shift_mod_one(&f, 0.5);
        let expected = 1.0 - (10f64.sqrt() - 1.0) / 9.0;
        assert!((g.evaluate(0.5) - expected).abs() < TOL_EXACT);
        assert_eq!(g.evaluate_left(0.0), 0.0);
        assert!((g.evaluate(1.0) - 1.0).abs() < TOL_EXACT);
        // Monte Carlo cross-check
        let xs = sample(
            &AnalyticDistribution::UniformContinuous { t: 1.0 },
            1_000_000,
            11,
        )
        .unwrap();
        let shifted: Vec<f64> = xs
            .iter()
            .map(|&x| 10f64.powf((x.log10() + 0.5).rem_euclid(1.0)))
            .collect();
        assert!(empirical_sup_gap(&g, &shifted) < DKW_1E6_99);
    }

    #[test]
    fn shift_wraps_atoms_exactly() {
        let f = log_mod_one(&AnalyticDistribution::UniformIntegers { n: 20 }, B10()).unwrap();
        let l2 = digits::log_fraction(2.0, B10()).unwrap();
        // shift so the atom at the stored position of log10(2) lands on 0
        let g = shift_mod_one(&f, 1.0 - l2);
        assert!((g.evaluate(0.0) - 2.0 / 20.0).abs() < TOL_EXACT);
        assert_eq!(g.evaluate_left(0.0), 0.0);
        assert!((g.evaluate(1.0) - 1.0).abs() < TOL_EXACT);
        // shifting back recovers the original pointwise
        let back = shift_mod_one(&g, l2);
        for i in 0..=1000 {
            let s = i as f64 / 1000.0;
            assert!(
                (back.evaluate(s) - f.evaluate(s)).abs() < TOL_EXACT,
                "at {s}"
            );
        }
    }

    #[test]
    fn shift_composition_is_identity() {
        let f = log_mod_one(
            &AnalyticDistribution::PowerOfUniform {
                a: 1.5,
                base: b(10),
            },
            B10(),
        )
        .unwrap();
        let g = shift_mod_one(&shift_mod_one(&f, 0.3), 0.7);
        for i in 0..=1000 {
            let s = i as f64 / 1000.0;
            assert!((g.evaluate(s) - f.evaluate(s)).abs() < TOL_EXACT, "at {s}");
        }
    }

    #[test]
    fn sampling_is_deterministic_and_in_support() {
        let dist = AnalyticDistribution::UniformContinuous { t: 5.0 };
        let a = sample(&dist, 1000, 42).unwrap();
        let c = sample(&dist, 1000, 42).unwrap();
        assert_eq!(a, c);
        let d = sample(&dist, 1000, 43).unwrap();
        assert_ne!(a, d);
        assert!(a.iter().all(|&x| x > 0.0 && x < 5.0));
    }

    #[test]
    fn sample_mean_of_uniform() {
        let dist = AnalyticDistribution::UniformContinuous { t: 5.0 };
        let xs = sample(&dist, 1_000_000, 7).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sigma = (dist.variance() / xs.len() as f64).sqrt();
        assert!((mean - 2.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn sample_first_digit_one_fraction_of_twenty() {
        let dist = AnalyticDistribution::UniformIntegers { n: 20 };
        let xs = sample(&dist, 1_000_000, 5).unwrap();
        let ones = xs
            .iter()
            .filter(|&&x| digits::first_digit(x, B10()).unwrap() == 1)
            .count();
        let frac = ones as f64 / xs.len() as f64;
        assert!((frac - 0.55).abs() < DKW_1E6_99, "fraction {frac}");
    }

    #[test]
    fn monte_carlo_oracle_every_variant() {
        let cases = [
            (AnalyticDistribution::UniformContinuous { t: 1.0 }, 10u32),
            (
                AnalyticDistribution::UniformContinuous {
                    t: 10f64.powf(0.25),
                },
                10,
            ),
            (
                AnalyticDistribution::UniformContinuous { t: 10f64.powf(0.5) },
                10,
            ),
            (
                AnalyticDistribution::UniformContinuous {
                    t: 10f64.powf(0.801),
                },
                10,
            ),
            (
                AnalyticDistribution::PowerOfUniform {
                    a: 1.5,
                    base: Base::new(10).unwrap(),
                },
                10,
            ),
            (
                AnalyticDistribution::PowerOfUniform {
                    a: 1.0,
                    base: Base::new(10).unwrap(),
                },
                2,
            ),
            (
                AnalyticDistribution::BenfordDecade {
                    k: 2,
                    base: Base::new(10).unwrap(),
                },
                2,
            ),
            (AnalyticDistribution::UniformIntegers { n: 1000 }, 10),
        ];
        for (i, (dist, eval_base)) in cases.iter().enumerate() {
            let cdf = log_mod_one(dist, b(*eval_base)).unwrap();
            let xs = sample(dist, 1_000_000, 1000 + i as u64).unwrap();
            let gap = empirical_sup_gap(&cdf, &xs);
            assert!(gap < DKW_1E6_99, "{dist:?} base {eval_base}: gap {gap}");
        }
    }

    #[test]
    fn piece_table_round_trips_through_json() {
        let cdf = log_mod_one(&AnalyticDistribution::UniformContinuous { t: 3.7 }, B10()).unwrap();
        let text = cdf.to_json();
        let parsed = ModOneCdf::from_json(&text).unwrap();
        assert_eq!(cdf, parsed);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value.get("breakpoints").is_some());
        assert!(value.get("pieces").is_some());
        assert_eq!(value.get("base").unwrap(), 10);
    }

    #[test]
    fn analytic_moments_match_samples() {
        let variants = [
            AnalyticDistribution::UniformContinuous { t: 12.0 },
            AnalyticDistribution::PowerOfUniform {
                a: 1.5,
                base: Base::new(10).unwrap(),
            },
            AnalyticDistribution::BenfordDecade {
                k: 1,
                base: Base::new(10).unwrap(),
            },
            AnalyticDistribution::UniformIntegers { n: 500 },
        ];
        for dist in &variants {
            let xs = sample(dist, 400_000, 99).unwrap();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let se = (dist.variance() / n).sqrt();
            assert!((mean - dist.mean()).abs() < 4.0 * se, "{dist:?} mean");
            assert!(
                (var - dist.variance()).abs() / dist.variance() < 0.05,
                "{dist:?} var"
            );
        }
    }

    proptest! {
        #[test]
        fn uniform_continuous_periodicity(t in 0.001f64..1e6) {
            let c1 = log_mod_one(&AnalyticDistribution::UniformContinuous { t }, B10()).unwrap();
            let c2 = log_mod_one(&AnalyticDistribution::UniformContinuous { t: 10.0 * t }, B10())
                .unwrap();
            for i in 0..=100 {
                let s = i as f64 / 100.0;
                prop_assert!((c1.evaluate(s) - c2.evaluate(s)).abs() < TOL_EXACT);
            }
        }

        #[test]
        fn shift_round_trip(delta in 0.0f64..1.0, theta in 0.0f64..1.0) {
            let f = uniform_phase_cdf(theta, B10()).unwrap();
            let g = shift_mod_one(&shift_mod_one(&f, delta), 1.0 - delta);
            for i in 0..=50 {
                let s = i as f64 / 50.0;
                prop_assert!((g.evaluate(s) - f.evaluate(s)).abs() < 1e-9);
            }
        }

        #[test]
        fn wasserstein_never_exceeds_ks(theta in 0.0f64..1.0) {
            let cdf = uniform_phase_cdf(theta, B10()).unwrap();
            let report = metrics::distance_report(&cdf);
            prop_assert!(report.wasserstein <= report.ks + 1e-12);
        }

        #[test]
        fn integer_exponent_power_is_uniform(a in 1u32..6) {
            let dist = AnalyticDistribution::PowerOfUniform {
                a: f64::from(a),
                base: Base::new(10).unwrap(),
            };
            let cdf = log_mod_one(&dist, B10()).unwrap();
            for i in 0..=100 {
                let s = i as f64 / 100.0;
                prop_assert!((cdf.evaluate(s) - s).abs() < TOL_EXACT);
            }
        }
    }
}
