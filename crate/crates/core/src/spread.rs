//! Dispersion measures on raw, log and log-log scales.
//!
//! Four measures are reported together: range, central quantile spread,
//! standard deviation and the Gini mean difference `E|X - X'|` (kept
//! unnormalized so all four share the units of the working scale). The
//! analytic variants use closed forms throughout; transformed scales that
//! leave the distribution's support (log of a variable reaching 0, log-log
//! of a variable reaching 1) yield a domain error or an infinite range,
//! never a silently truncated number.

use crate::digits::Base;
use crate::error::{Error, Result};
use crate::modone::AnalyticDistribution;
use serde::{Deserialize, Serialize};

/// Working scale for spread measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scale", content = "base", rename_all = "snake_case")]
pub enum Scale {
    Raw,
    Log(Base),
    LogLog(Base),
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scale::Raw => write!(f, "raw"),
            Scale::Log(b) => write!(f, "log[{b}]"),
            Scale::LogLog(b) => write!(f, "loglog[{b}]"),
        }
    }
}

/// One dispersion number. Infinite values are carried explicitly rather
/// than as JSON-hostile floats; `estimated` marks values not obtained in
/// closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadMeasure {
    pub value: f64,
    pub estimated: bool,
}

impl SpreadMeasure {
    fn exact(value: f64) -> Self {
        SpreadMeasure {
            value,
            estimated: false,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

#[derive(Serialize, Deserialize)]
struct SpreadMeasureRepr {
    value: Option<f64>,
    infinite: bool,
    estimated: bool,
}

impl Serialize for SpreadMeasure {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let repr = SpreadMeasureRepr {
            value: if self.value.is_finite() {
                Some(self.value)
            } else {
                None
            },
            infinite: self.value.is_infinite(),
            estimated: self.estimated,
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpreadMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let repr = SpreadMeasureRepr::deserialize(deserializer)?;
        let value = match (repr.value, repr.infinite) {
            (_, true) => f64::INFINITY,
            (Some(v), false) => v,
            (None, false) => {
                return Err(serde::de::Error::custom("finite measure without a value"))
            }
        };
        Ok(SpreadMeasure {
            value,
            estimated: repr.estimated,
        })
    }
}

/// All four dispersion measures on one scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub scale: String,
    pub alpha: f64,
    pub range: SpreadMeasure,
    pub quantile_spread: SpreadMeasure,
    pub std_dev: SpreadMeasure,
    pub gini_mean_difference: SpreadMeasure,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain(format!(
            "quantile level must lie strictly between 0 and 1/2, got {alpha}"
        )));
    }
    Ok(())
}

/// Spread of `exp(c U)` for `U ~ U(0,1)`: the raw-scale law shared by the
/// power-of-uniform family and (after scaling) single-decade reciprocals.
struct ExpUniform {
    c: f64,
}

impl ExpUniform {
    fn mean(&self) -> f64 {
        self.c.exp_m1() / self.c
    }

    fn range(&self) -> f64 {
        self.c.exp_m1()
    }

    fn quantile_spread(&self, alpha: f64) -> f64 {
        (self.c * (1.0 - alpha)).exp() - (self.c * alpha).exp()
    }

    fn std_dev(&self) -> f64 {
        let m = self.mean();
        ((2.0 * self.c).exp_m1() / (2.0 * self.c) - m * m).sqrt()
    }

    fn gini(&self) -> f64 {
        let c = self.c;
        4.0 * ((c - 1.0) * c.exp() + 1.0) / (c * c) - 2.0 * c.exp_m1() / c
    }
}

fn uniform_interval_report(lo: f64, hi: f64, scale: &Scale, alpha: f64) -> SpreadReport {
    let len = hi - lo;
    SpreadReport {
        scale: scale.to_string(),
        alpha,
        range: SpreadMeasure::exact(len),
        quantile_spread: SpreadMeasure::exact(len * (1.0 - 2.0 * alpha)),
        std_dev: SpreadMeasure::exact(len / 12f64.sqrt()),
        gini_mean_difference: SpreadMeasure::exact(len / 3.0),
    }
}

/// `E|X - X'|` and moments of `ln` of a uniform variable on `(A, B)`,
/// `0 < A < B`, reported in units of `log_base`.
fn log_of_uniform_report(
    a: f64,
    b: f64,
    scale: &Scale,
    alpha: f64,
    log_base: Base,
) -> SpreadReport {
    let len = b - a;
    let ln_b = log_base.ln();
    let lg = |x: f64| x.ln() / ln_b;
    // antiderivatives of ln and ln^2 give the moments of ln X
    let mean_ln = (b * b.ln() - b - a * a.ln() + a) / len;
    let m2_ln = (b * b.ln().powi(2) - 2.0 * b * b.ln() + 2.0 * b
        - (a * a.ln().powi(2) - 2.0 * a * a.ln() + 2.0 * a))
        / len;
    let var_ln = m2_ln - mean_ln * mean_ln;
    // E|ln X - ln X'| = 1 - (2A/len^2) (B ln(B/A) - len), scaled by 2... in
    // nats: 2/len^2 * integral; closed form below checked against quadrature
    let gini_ln = 1.0 - (2.0 * a / (len * len)) * (b * (b / a).ln() - len);
    SpreadReport {
        scale: scale.to_string(),
        alpha,
        range: SpreadMeasure::exact(lg(b) - lg(a)),
        quantile_spread: SpreadMeasure::exact(lg(a + (1.0 - alpha) * len) - lg(a + alpha * len)),
        std_dev: SpreadMeasure::exact(var_ln.sqrt() / ln_b),
        gini_mean_difference: SpreadMeasure::exact(gini_ln / ln_b),
    }
}

/// Report for `s Y + t` where `Y ~ U(0,1)` in the working coordinates;
/// covers every "uniform after transformation" case.
fn affine_uniform_report(s: f64, scale: &Scale, alpha: f64) -> SpreadReport {
    uniform_interval_report(0.0, s, scale, alpha)
}

/// Exponential-of-uniform report in the working coordinates.
fn exp_uniform_report(c: f64, mul: f64, scale: &Scale, alpha: f64) -> SpreadReport {
    let law = ExpUniform { c };
    SpreadReport {
        scale: scale.to_string(),
        alpha,
        range: SpreadMeasure::exact(mul * law.range()),
        quantile_spread: SpreadMeasure::exact(mul * law.quantile_spread(alpha)),
        std_dev: SpreadMeasure::exact(mul * law.std_dev()),
        gini_mean_difference: SpreadMeasure::exact(mul * law.gini()),
    }
}

/// The log scale of a law whose support touches 0: the range diverges, the
/// other three measures still have closed forms.
fn log_touching_zero_report(
    qs: f64,
    std_dev: f64,
    gini: f64,
    scale: &Scale,
    alpha: f64,
) -> SpreadReport {
    SpreadReport {
        scale: scale.to_string(),
        alpha,
        range: SpreadMeasure {
            value: f64::INFINITY,
            estimated: false,
        },
        quantile_spread: SpreadMeasure::exact(qs),
        std_dev: SpreadMeasure::exact(std_dev),
        gini_mean_difference: SpreadMeasure::exact(gini),
    }
}

fn uniform_integers_log_report(
    n: u64,
    scale: &Scale,
    alpha: f64,
    log_base: Base,
) -> Result<SpreadReport> {
    if n > 1_000_000_000 {
        return Err(Error::capacity(format!(
            "log-scale moments of 1..={n} need a pass over all atoms; \
             the budget stops at 1000000000"
        )));
    }
    let ln_b = log_base.ln();
    let nf = n as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut weighted = 0.0;
    for j in 1..=n {
        let l = (j as f64).ln();
        sum += l;
        sum_sq += l * l;
        // sorted order is the integer order, so the Gini U-statistic
        // weights are (2j - n - 1)
        weighted += (2.0 * j as f64 - nf - 1.0) * l;
    }
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0);
    // population form: E|L - L'| over independent uniform picks
    let gini = 2.0 * weighted / (nf * nf);
    let q = |p: f64| ((p * nf).ceil().max(1.0)).ln();
    Ok(SpreadReport {
        scale: scale.to_string(),
        alpha,
        range: SpreadMeasure::exact(nf.ln() / ln_b),
        quantile_spread: SpreadMeasure::exact((q(1.0 - alpha) - q(alpha)) / ln_b),
        std_dev: SpreadMeasure::exact(var.sqrt() / ln_b),
        gini_mean_difference: SpreadMeasure::exact(gini / ln_b),
    })
}

/// Closed-form spread of an analytic distribution on the requested scale.
pub fn spread_analytic(
    dist: &AnalyticDistribution,
    scale: Scale,
    alpha: f64,
) -> Result<SpreadReport> {
    dist.validate()?;
    check_alpha(alpha)?;
    match (dist, scale) {
        (&AnalyticDistribution::UniformContinuous { t }, Scale::Raw) => {
            Ok(uniform_interval_report(0.0, t, &scale, alpha))
        }
        (&AnalyticDistribution::UniformContinuous { .. }, Scale::Log(lb)) => {
            // log X = log T + log U: exponential tail toward -inf, and
            // dispersion does not depend on T
            let ln_b = lb.ln();
            Ok(log_touching_zero_report(
                ((1.0 - alpha) / alpha).ln() / ln_b,
                1.0 / ln_b,
                1.0 / ln_b,
                &scale,
                alpha,
            ))
        }
        (&AnalyticDistribution::UniformContinuous { .. }, Scale::LogLog(_)) => Err(Error::domain(
            "log of a uniform variable takes negative values, so the log-log scale is undefined"
                .to_string(),
        )),
        (&AnalyticDistribution::PowerOfUniform { a, base }, Scale::Raw) => {
            Ok(exp_uniform_report(a * base.ln(), 1.0, &scale, alpha))
        }
        (&AnalyticDistribution::PowerOfUniform { a, base }, Scale::Log(lb)) => {
            // log_lb X is uniform on (0, a ln(base)/ln(lb))
            Ok(affine_uniform_report(
                a * base.ln() / lb.ln(),
                &scale,
                alpha,
            ))
        }
        (&AnalyticDistribution::PowerOfUniform { .. }, Scale::LogLog(lb)) => {
            // log X is uniform touching 0, so the second log diverges at
            // the lower end; same shape as the log of a uniform variable
            let ln_b = lb.ln();
            Ok(log_touching_zero_report(
                ((1.0 - alpha) / alpha).ln() / ln_b,
                1.0 / ln_b,
                1.0 / ln_b,
                &scale,
                alpha,
            ))
        }
        (&AnalyticDistribution::BenfordDecade { k, base }, Scale::Raw) => Ok(exp_uniform_report(
            base.ln(),
            base.as_f64().powi(k),
            &scale,
            alpha,
        )),
        (&AnalyticDistribution::BenfordDecade { base, .. }, Scale::Log(lb)) => {
            // log_lb X is uniform on an interval of width ln(base)/ln(lb);
            // its position does not affect dispersion
            Ok(affine_uniform_report(base.ln() / lb.ln(), &scale, alpha))
        }
        (&AnalyticDistribution::BenfordDecade { k, base }, Scale::LogLog(lb)) => {
            let c = base.ln();
            let lo = f64::from(k) * c;
            if k < 0 {
                return Err(Error::domain(format!(
                    "log values of a decade below 1 are negative (k = {k}), \
                     so the log-log scale is undefined"
                )));
            }
            if k == 0 {
                // log X uniform on (0, ln base): touches 0
                let ln_b = lb.ln();
                return Ok(log_touching_zero_report(
                    ((1.0 - alpha) / alpha).ln() / ln_b,
                    1.0 / ln_b,
                    1.0 / ln_b,
                    &scale,
                    alpha,
                ));
            }
            Ok(log_of_uniform_report(lo, lo + c, &scale, alpha, lb))
        }
        (&AnalyticDistribution::UniformIntegers { n }, Scale::Raw) => {
            let nf = n as f64;
            let q = |p: f64| (p * nf).ceil().max(1.0);
            Ok(SpreadReport {
                scale: scale.to_string(),
                alpha,
                range: SpreadMeasure::exact(nf - 1.0),
                quantile_spread: SpreadMeasure::exact(q(1.0 - alpha) - q(alpha)),
                std_dev: SpreadMeasure::exact(((nf * nf - 1.0) / 12.0).sqrt()),
                gini_mean_difference: SpreadMeasure::exact((nf * nf - 1.0) / (3.0 * nf)),
            })
        }
        (&AnalyticDistribution::UniformIntegers { n }, Scale::Log(lb)) => {
            uniform_integers_log_report(n, &scale, alpha, lb)
        }
        (&AnalyticDistribution::UniformIntegers { .. }, Scale::LogLog(_)) => Err(Error::domain(
            "the atom at 1 maps to log value 0, so the log-log scale is undefined".to_string(),
        )),
    }
}

fn transform_samples(samples: &[f64], scale: Scale) -> Result<Vec<f64>> {
    match scale {
        Scale::Raw => Ok(samples.to_vec()),
        Scale::Log(b) => {
            let ln_b = b.ln();
            samples
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if x > 0.0 && x.is_finite() {
                        Ok(x.ln() / ln_b)
                    } else {
                        Err(Error::domain(format!(
                            "sample at index {i} is {x}, not usable on a log scale"
                        )))
                    }
                })
                .collect()
        }
        Scale::LogLog(b) => {
            let ln_b = b.ln();
            samples
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if x > 1.0 && x.is_finite() {
                        Ok((x.ln() / ln_b).ln() / ln_b)
                    } else {
                        Err(Error::domain(format!(
                            "sample at index {i} is {x}, not usable on a log-log scale \
                             (values must exceed 1)"
                        )))
                    }
                })
                .collect()
        }
    }
}

/// Type-7 interpolated quantile of sorted data.
fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let w = h - lo as f64;
    sorted[lo] + w * (sorted[hi] - sorted[lo])
}

/// Dispersion of a sample on the requested scale. Needs at least two
/// observations; quantiles interpolate (type 7), the standard deviation
/// uses the `n - 1` denominator, the Gini mean difference averages over
/// unordered pairs.
pub fn spread_sample(samples: &[f64], scale: Scale, alpha: f64) -> Result<SpreadReport> {
    check_alpha(alpha)?;
    if samples.len() < 2 {
        return Err(Error::EmptyData(format!(
            "spread needs at least 2 observations, got {}",
            samples.len()
        )));
    }
    for (i, &x) in samples.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::domain(format!("sample at index {i} is {x}")));
        }
    }
    let mut xs = transform_samples(samples, scale)?;
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    // Gini mean difference via the sorted representation:
    // sum_{i<j} (x_j - x_i) = sum_j (2j - n - 1) x_(j), 1-indexed
    let weighted: f64 = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    let gini = 2.0 * weighted / (n * (n - 1.0));
    Ok(SpreadReport {
        scale: scale.to_string(),
        alpha,
        range: SpreadMeasure {
            value: xs[xs.len() - 1] - xs[0],
            estimated: true,
        },
        quantile_spread: SpreadMeasure {
            value: quantile_type7(&xs, 1.0 - alpha) - quantile_type7(&xs, alpha),
            estimated: true,
        },
        std_dev: SpreadMeasure {
            value: var.sqrt(),
            estimated: true,
        },
        gini_mean_difference: SpreadMeasure {
            value: gini,
            estimated: true,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modone;
    use proptest::prelude::*;

    fn b(x: u32) -> Base {
        Base::new(x).unwrap()
    }

    const TOL_EXACT: f64 = 1e-12;
    /// Monte Carlo agreement for 10^6-sample estimates of smooth measures.
    const TOL_MC: f64 = 0.01;
    const ALPHA: f64 = 0.25;

    #[test]
    fn uniform_continuous_raw() {
        let dist = AnalyticDistribution::UniformContinuous { t: 12.0 };
        let r = spread_analytic(&dist, Scale::Raw, ALPHA).unwrap();
        assert!((r.range.value - 12.0).abs() < TOL_EXACT);
        assert!((r.quantile_spread.value - 6.0).abs() < TOL_EXACT);
        assert!((r.std_dev.value - 12.0 / 12f64.sqrt()).abs() < TOL_EXACT);
        assert!((r.gini_mean_difference.value - 4.0).abs() < TOL_EXACT);
        assert!(!r.range.estimated);
    }

    #[test]
    fn uniform_continuous_log_scale_touches_zero() {
        let dist = AnalyticDistribution::UniformContinuous { t: 12.0 };
        let r = spread_analytic(&dist, Scale::Log(b(10)), ALPHA).unwrap();
        assert!(r.range.is_infinite());
        assert!(!r.range.estimated);
        let ln10 = 10f64.ln();
        assert!((r.quantile_spread.value - 3f64.ln() / ln10).abs() < TOL_EXACT);
        assert!((r.std_dev.value - 1.0 / ln10).abs() < TOL_EXACT);
        assert!((r.gini_mean_difference.value - 1.0 / ln10).abs() < TOL_EXACT);
    }

    #[test]
    fn uniform_continuous_rejects_loglog() {
        let dist = AnalyticDistribution::UniformContinuous { t: 12.0 };
        let err = spread_analytic(&dist, Scale::LogLog(b(10)), ALPHA).unwrap_err();
        assert!(err.to_string().contains("log-log"), "{err}");
    }

    #[test]
    fn power_of_uniform_nonmonotone_pair() {
        // the X / Z pair from the headline nonmonotonicity study
        let x = AnalyticDistribution::PowerOfUniform {
            a: 1.0,
            base: b(10),
        };
        let z = AnalyticDistribution::PowerOfUniform {
            a: 1.5,
            base: b(10),
        };
        let rx = spread_analytic(&x, Scale::Raw, ALPHA).unwrap();
        let rz = spread_analytic(&z, Scale::Raw, ALPHA).unwrap();
        assert!((rx.range.value - 9.0).abs() < TOL_EXACT);
        assert!(
            (rx.quantile_spread.value - (10f64.powf(0.75) - 10f64.powf(0.25))).abs() < TOL_EXACT
        );
        assert!((rx.std_dev.value - 2.49399867607628).abs() < 1e-10);
        assert!((rx.gini_mean_difference.value - 2.7644575094534388).abs() < 1e-10);
        assert!((rz.range.value - 30.622776601683793).abs() < 1e-10);
        assert!((rz.quantile_spread.value - 10.963840615971585).abs() < 1e-10);
        assert!((rz.std_dev.value - 8.124686194979715).abs() < 1e-10);
        assert!((rz.gini_mean_difference.value - 8.622408950763054).abs() < 1e-10);

        let lx = spread_analytic(&x, Scale::Log(b(10)), ALPHA).unwrap();
        let lz = spread_analytic(&z, Scale::Log(b(10)), ALPHA).unwrap();
        assert!((lx.range.value - 1.0).abs() < TOL_EXACT);
        assert!((lx.quantile_spread.value - 0.5).abs() < TOL_EXACT);
        assert!((lx.std_dev.value - 1.0 / 12f64.sqrt()).abs() < TOL_EXACT);
        assert!((lx.gini_mean_difference.value - 1.0 / 3.0).abs() < TOL_EXACT);
        assert!((lz.range.value - 1.5).abs() < TOL_EXACT);
        assert!((lz.quantile_spread.value - 0.75).abs() < TOL_EXACT);
        assert!((lz.std_dev.value - 1.5 / 12f64.sqrt()).abs() < TOL_EXACT);
        assert!((lz.gini_mean_difference.value - 0.5).abs() < TOL_EXACT);

        // all four measures disagree with the mod-1 ordering on both scales
        for (a, c) in [(&rx, &rz), (&lx, &lz)] {
            assert!(a.range.value < c.range.value);
            assert!(a.quantile_spread.value < c.quantile_spread.value);
            assert!(a.std_dev.value < c.std_dev.value);
            assert!(a.gini_mean_difference.value < c.gini_mean_difference.value);
        }
    }

    #[test]
    fn benford_decade_matches_scaled_power_of_uniform() {
        let bd = AnalyticDistribution::BenfordDecade { k: 2, base: b(10) };
        let pu = AnalyticDistribution::PowerOfUniform {
            a: 1.0,
            base: b(10),
        };
        let rb = spread_analytic(&bd, Scale::Raw, ALPHA).unwrap();
        let rp = spread_analytic(&pu, Scale::Raw, ALPHA).unwrap();
        for (x, y) in [
            (rb.range.value, rp.range.value),
            (rb.quantile_spread.value, rp.quantile_spread.value),
            (rb.std_dev.value, rp.std_dev.value),
            (rb.gini_mean_difference.value, rp.gini_mean_difference.value),
        ] {
            assert!(
                (x - 100.0 * y).abs() < 1e-8 * x.abs().max(1.0),
                "{x} vs {y}"
            );
        }
    }

    #[test]
    fn benford_decade_loglog_values() {
        let bd = AnalyticDistribution::BenfordDecade { k: 1, base: b(10) };
        let r = spread_analytic(&bd, Scale::LogLog(b(10)), ALPHA).unwrap();
        assert!((r.range.value - 2f64.log10()).abs() < TOL_EXACT);
        assert!((r.quantile_spread.value - 1.4f64.log10()).abs() < TOL_EXACT);
        assert!((r.std_dev.value - 0.08586955474847215).abs() < 1e-10);
        assert!((r.gini_mean_difference.value - 0.0987634630538307).abs() < 1e-10);

        assert!(spread_analytic(
            &AnalyticDistribution::BenfordDecade { k: -1, base: b(10) },
            Scale::LogLog(b(10)),
            ALPHA
        )
        .is_err());
        let k0 = spread_analytic(
            &AnalyticDistribution::BenfordDecade { k: 0, base: b(10) },
            Scale::LogLog(b(10)),
            ALPHA,
        )
        .unwrap();
        assert!(k0.range.is_infinite());
        assert!((k0.std_dev.value - 1.0 / 10f64.ln()).abs() < TOL_EXACT);
    }

    #[test]
    fn uniform_integers_closed_forms() {
        let dist = AnalyticDistribution::UniformIntegers { n: 20 };
        let r = spread_analytic(&dist, Scale::Raw, ALPHA).unwrap();
        assert!((r.range.value - 19.0).abs() < TOL_EXACT);
        assert!((r.quantile_spread.value - 10.0).abs() < TOL_EXACT);
        assert!((r.std_dev.value - (399.0f64 / 12.0).sqrt()).abs() < TOL_EXACT);
        assert!((r.gini_mean_difference.value - 6.65).abs() < TOL_EXACT);

        let l = spread_analytic(&dist, Scale::Log(b(10)), ALPHA).unwrap();
        assert!((l.range.value - 20f64.log10()).abs() < TOL_EXACT);
        assert!((l.quantile_spread.value - 3f64.log10()).abs() < TOL_EXACT);
        assert!((l.std_dev.value - 0.3440195962975925).abs() < 1e-10);
        assert!((l.gini_mean_difference.value - 0.3694899579235376).abs() < 1e-10);

        assert!(spread_analytic(&dist, Scale::LogLog(b(10)), ALPHA).is_err());
    }

    #[test]
    fn sample_spread_matches_analytic() {
        let dist = AnalyticDistribution::PowerOfUniform {
            a: 1.5,
            base: b(10),
        };
        let xs = modone::sample(&dist, 1_000_000, 21).unwrap();
        for scale in [Scale::Raw, Scale::Log(b(10))] {
            let est = spread_sample(&xs, scale, ALPHA).unwrap();
            let truth = spread_analytic(&dist, scale, ALPHA).unwrap();
            assert!(est.range.estimated);
            for (e, t) in [
                (est.quantile_spread.value, truth.quantile_spread.value),
                (est.std_dev.value, truth.std_dev.value),
                (
                    est.gini_mean_difference.value,
                    truth.gini_mean_difference.value,
                ),
            ] {
                assert!((e - t).abs() / t < TOL_MC, "{scale}: {e} vs {t}");
            }
        }
    }

    #[test]
    fn sample_spread_rejects_bad_values() {
        assert!(spread_sample(&[1.0], Scale::Raw, ALPHA).is_err());
        let err = spread_sample(&[2.0, -1.0, 3.0], Scale::Log(b(10)), ALPHA).unwrap_err();
        assert!(err.to_string().contains("index 1"), "{err}");
        let err = spread_sample(&[2.0, 3.0, 0.5], Scale::LogLog(b(10)), ALPHA).unwrap_err();
        assert!(err.to_string().contains("index 2"), "{err}");
        assert!(spread_sample(&[2.0, f64::NAN], Scale::Raw, ALPHA).is_err());
        assert!(spread_analytic(
            &AnalyticDistribution::UniformContinuous { t: 1.0 },
            Scale::Raw,
            0.5
        )
        .is_err());
    }

    #[test]
    fn quantile_convention_on_small_sample() {
        // type-7 on [1, 2, 3, 4]: Q(0.25) = 1.75, Q(0.75) = 3.25
        let r = spread_sample(&[4.0, 2.0, 1.0, 3.0], Scale::Raw, 0.25).unwrap();
        assert!((r.quantile_spread.value - 1.5).abs() < TOL_EXACT);
        assert!((r.range.value - 3.0).abs() < TOL_EXACT);
        // std of 1..4 with n-1 denominator
        let expect_sd = (5.0f64 / 3.0).sqrt();
        assert!((r.std_dev.value - expect_sd).abs() < TOL_EXACT);
        // mean pairwise gap: pairs (1,2,3)(1,3)(1,4)... sum 10, 6 pairs
        assert!((r.gini_mean_difference.value - 10.0 / 6.0).abs() < TOL_EXACT);
    }

    proptest! {
        #[test]
        fn raw_measures_are_positively_homogeneous(
            scale_factor in 0.01f64..100.0,
            mut xs in proptest::collection::vec(0.1f64..1e4, 2..40),
        ) {
            let base = spread_sample(&xs, Scale::Raw, ALPHA).unwrap();
            for x in &mut xs {
                *x *= scale_factor;
            }
            let scaled = spread_sample(&xs, Scale::Raw, ALPHA).unwrap();
            for (a, c) in [
                (base.range.value, scaled.range.value),
                (base.quantile_spread.value, scaled.quantile_spread.value),
                (base.std_dev.value, scaled.std_dev.value),
                (base.gini_mean_difference.value, scaled.gini_mean_difference.value),
            ] {
                prop_assert!((a * scale_factor - c).abs() <= 1e-9 * c.abs().max(1.0));
            }
        }

        #[test]
        fn log_measures_are_scale_invariant(
            scale_factor in 0.01f64..100.0,
            mut xs in proptest::collection::vec(0.1f64..1e4, 2..40),
        ) {
            let base = spread_sample(&xs, Scale::Log(Base::new(10).unwrap()), ALPHA).unwrap();
            for x in &mut xs {
                *x *= scale_factor;
            }
            let scaled = spread_sample(&xs, Scale::Log(Base::new(10).unwrap()), ALPHA).unwrap();
            for (a, c) in [
                (base.range.value, scaled.range.value),
                (base.quantile_spread.value, scaled.quantile_spread.value),
                (base.std_dev.value, scaled.std_dev.value),
                (base.gini_mean_difference.value, scaled.gini_mean_difference.value),
            ] {
                prop_assert!((a - c).abs() <= 1e-9);
            }
        }

        #[test]
        fn measures_are_translation_aware(
            shift in 0.1f64..100.0,
            xs in proptest::collection::vec(0.1f64..1e4, 2..40),
        ) {
            // raw-scale dispersion ignores translation entirely
            let base = spread_sample(&xs, Scale::Raw, ALPHA).unwrap();
            let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
            let moved = spread_sample(&shifted, Scale::Raw, ALPHA).unwrap();
            prop_assert!((base.range.value - moved.range.value).abs() <= 1e-9);
            prop_assert!((base.std_dev.value - moved.std_dev.value).abs() <= 1e-9);
            prop_assert!(
                (base.gini_mean_difference.value - moved.gini_mean_difference.value).abs()
                    <= 1e-9
            );
        }
    }

    #[test]
    fn measure_serialization_distinguishes_infinite() {
        let finite = SpreadMeasure::exact(1.5);
        let infinite = SpreadMeasure {
            value: f64::INFINITY,
            estimated: false,
        };
        let f_json = serde_json::to_value(finite).unwrap();
        let i_json = serde_json::to_value(infinite).unwrap();
        assert_eq!(f_json["value"], 1.5);
        assert_eq!(f_json["infinite"], false);
        assert_eq!(i_json["value"], serde_json::Value::Null);
        assert_eq!(i_json["infinite"], true);
        let back: SpreadMeasure = serde_json::from_value(i_json).unwrap();
        assert!(back.is_infinite());
    }
}
