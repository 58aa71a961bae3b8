//! Distances between a mod-1 CDF and the uniform law `F(s) = s`.
//!
//! Both distances are computed in closed form from the piece table: no
//! grids. Candidate extrema of `h(s) = F(s) - s` are the one-sided values
//! at every breakpoint plus the interior stationary point of each piece,
//! and the Wasserstein integral is an antiderivative evaluated between
//! sign changes of `h`.

use crate::digits::{self, Base};
use crate::error::{Error, Result};
use crate::modone::ModOneCdf;
use serde::{Deserialize, Serialize};

/// Bisection depth for locating sign changes of `h` inside exponential
/// pieces (the crossing equation is transcendental there).
const CROSSING_BISECTIONS: u32 = 200;

/// Kolmogorov-Smirnov distance together with the location achieving it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub location: f64,
}

/// Summary of both distances to uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub ks: f64,
    pub ks_argmax: f64,
    pub wasserstein: f64,
}

/// Exact sup-distance between `cdf` and the uniform CDF, taking one-sided
/// limits at jumps into account. Ties are broken toward the smallest
/// location.
pub fn ks_distance(cdf: &ModOneCdf) -> KsResult {
    let b = cdf.base().as_f64();
    let ln_b = cdf.base().ln();
    let bps = cdf.breakpoints();
    let mut best = KsResult {
        statistic: 0.0,
        location: 0.0,
    };
    let mut offer = |value: f64, location: f64| {
        let gap = value.abs();
        if gap > best.statistic || (gap == best.statistic && location < best.location) {
            best = KsResult {
                statistic: gap,
                location,
            };
        }
    };
    // left limit at 0 is P(S < 0) = 0, gap 0; nothing to offer there
    for (i, piece) in cdf.pieces().iter().enumerate() {
        let (lo, hi) = (bps[i], bps[i + 1]);
        let h = |s: f64| piece.c1 * b.powf(s) + piece.c2 * s + piece.c3 - s;
        offer(h(lo), lo);
        offer(h(hi), hi);
        if piece.c1 != 0.0 {
            let rhs = (1.0 - piece.c2) / (piece.c1 * ln_b);
            if rhs > 0.0 {
                let s0 = rhs.ln() / ln_b;
                if s0 > lo && s0 < hi {
                    offer(h(s0), s0);
                }
            }
        }
    }
    best
}

/// Exact `L1` distance between `cdf` and the uniform CDF (the Wasserstein
/// distance between `frac(log_b X)` and the uniform law on the line,
/// ignoring the circle's wrap-around metric).
pub fn wasserstein_distance(cdf: &ModOneCdf) -> f64 {
    let b = cdf.base().as_f64();
    let ln_b = cdf.base().ln();
    let bps = cdf.breakpoints();
    let mut total = 0.0;
    for (i, piece) in cdf.pieces().iter().enumerate() {
        let (c1, c2, c3) = (piece.c1, piece.c2, piece.c3);
        let h = |s: f64| c1 * b.powf(s) + c2 * s + c3 - s;
        let anti = |s: f64| c1 * b.powf(s) / ln_b + (c2 - 1.0) * s * s / 2.0 + c3 * s;
        // split at the stationary point so each span is monotone in h
        let mut nodes = vec![bps[i]];
        if c1 != 0.0 {
            let rhs = (1.0 - c2) / (c1 * ln_b);
            if rhs > 0.0 {
                let s0 = rhs.ln() / ln_b;
                if s0 > bps[i] && s0 < bps[i + 1] {
                    nodes.push(s0);
                }
            }
        }
        nodes.push(bps[i + 1]);
        for w in nodes.windows(2) {
            let (mut u, mut v) = (w[0], w[1]);
            let (hu, hv) = (h(u), h(v));
            if hu == 0.0 || hv == 0.0 || hu.signum() == hv.signum() {
                total += (anti(v) - anti(u)).abs();
                continue;
            }
            let root = if c1 == 0.0 {
                c3 / (1.0 - c2)
            } else {
                // h is monotone here, so bisection converges
                let positive_left = hu > 0.0;
                for _ in 0..CROSSING_BISECTIONS {
                    let m = 0.5 * (u + v);
                    if m <= u || m >= v {
                        break;
                    }
                    if (h(m) > 0.0) == positive_left {
                        u = m;
                    } else {
                        v = m;
                    }
                }
                0.5 * (u + v)
            };
            let (u, v) = (w[0], w[1]);
            total += (anti(root) - anti(u)).abs() + (anti(v) - anti(root)).abs();
        }
    }
    total
}

pub fn distance_report(cdf: &ModOneCdf) -> DistanceReport {
    let ks = ks_distance(cdf);
    DistanceReport {
        ks: ks.statistic,
        ks_argmax: ks.location,
        wasserstein: wasserstein_distance(cdf),
    }
}

/// KS distance between the empirical law of `frac(log_b x_i)` and uniform.
/// Rejects non-positive or non-finite samples, naming the offending index.
pub fn empirical_ks(samples: &[f64], base: Base) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyData("no samples to test".to_string()));
    }
    let mut fracs = Vec::with_capacity(samples.len());
    for (i, &x) in samples.iter().enumerate() {
        let f = digits::log_fraction(x, base)
            .map_err(|e| Error::domain(format!("sample at index {i}: {e}")))?;
        fracs.push(f);
    }
    fracs.sort_unstable_by(f64::total_cmp);
    let n = fracs.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &u) in fracs.iter().enumerate() {
        sup = sup.max(((i as f64 + 1.0) / n - u).abs());
        sup = sup.max((u - i as f64 / n).abs());
    }
    Ok(sup)
}

/// Pearson chi-square statistic of observed first-digit counts against the
/// Benford first-digit law. `counts[d - 1]` holds the count of digit `d`.
/// Returns the statistic and the degrees of freedom `b - 2`.
pub fn first_digit_chisq_from_counts(counts: &[u64], base: Base) -> Result<(f64, u32)> {
    let digits_expected = (base.get() - 1) as usize;
    if counts.len() != digits_expected {
        return Err(Error::domain(format!(
            "expected {digits_expected} digit counts for base {base}, got {}",
            counts.len()
        )));
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::EmptyData(
            "no observations for the digit test".to_string(),
        ));
    }
    let mut stat = 0.0;
    for (i, &obs) in counts.iter().enumerate() {
        let expected = n as f64 * digits::benford_first_digit_pmf(i as u32 + 1, base)?;
        let diff = obs as f64 - expected;
        stat += diff * diff / expected;
    }
    Ok((stat, base.get() - 2))
}

/// First-digit chi-square for raw positive samples.
pub fn first_digit_chisq(samples: &[f64], base: Base) -> Result<(f64, u32)> {
    if samples.is_empty() {
        return Err(Error::EmptyData("no samples to test".to_string()));
    }
    let mut counts = vec![0u64; (base.get() - 1) as usize];
    for (i, &x) in samples.iter().enumerate() {
        let d = digits::first_digit(x, base)
            .map_err(|e| Error::domain(format!("sample at index {i}: {e}")))?;
        counts[(d - 1) as usize] += 1;
    }
    first_digit_chisq_from_counts(&counts, base)
}

/// Dvoretzky-Kiefer-Wolfowitz envelope: with probability at least
/// `1 - delta` the empirical CDF of `n` i.i.d. draws stays within this
/// band of the truth.
pub fn dkw_bound(n: u64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("sample count must be at least 1".to_string()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!(
            "delta must lie in (0,1), got {delta}"
        )));
    }
    Ok(((2.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}
