//! The prepackaged studies: sharp-bound verification for uniform
//! variables, the integer counterexample, non-monotonicity of distance
//! versus spread, base-change behavior, the log-scale failure of Benford
//! variables, and the unbiased-mixing demonstration.
//!
//! Every operation here returns plain data; judgments (tolerances,
//! pass/fail) live in the test suite and in callers.

use crate::digits::{self, Base};
use crate::error::{Error, Result};
use crate::metrics::{self, DistanceReport};
use crate::modone::{self, AnalyticDistribution};
use crate::spread::{self, Scale, SpreadReport};
use serde::{Deserialize, Serialize};

/// Golden-section refinement stops once the bracket is this narrow.
pub const GOLDEN_SECTION_TOL: f64 = 1e-10;

/// Smallest allowed phase grid. Coarser grids can bracket the wrong basin
/// of the distance curve, whose two global minima sit close together.
pub const MIN_PHASE_GRID: usize = 16;

const INV_PHI: f64 = 0.6180339887498949;

/// KS distance of a uniform variable's mantissa law as a function of its
/// phase `theta = frac(log_b T)`.
fn phase_distance(theta: f64, base: Base) -> f64 {
    let reduced = theta.rem_euclid(1.0);
    let cdf = modone::uniform_phase_cdf(reduced, base).expect("reduced phase");
    metrics::ks_distance(&cdf).statistic
}

/// Sharp lower bound for the KS distance of any positive uniform variable
/// from the Benford law. Base 10 uses the closed form
/// `(-9 + ln 10 + 9 ln 9 - 9 ln ln 10) / (18 ln 10)`; other bases are
/// minimized numerically and carry no closed-form pedigree.
pub fn prop1_bound(base: Base) -> f64 {
    if base.get() == 10 {
        let ln10 = 10f64.ln();
        return (-9.0 + ln10 + 9.0 * 9f64.ln() - 9.0 * ln10.ln()) / (18.0 * ln10);
    }
    minimize_phase(base, 4096).expect("default grid is valid").1
}

/// Grid scan plus golden-section refinement of the phase distance curve.
/// Returns `(theta_star, d_star)`.
pub fn minimize_phase(base: Base, grid_size: usize) -> Result<(f64, f64)> {
    if grid_size < MIN_PHASE_GRID {
        return Err(Error::config(format!(
            "phase grid must have at least {MIN_PHASE_GRID} points, got {grid_size}"
        )));
    }
    let g = grid_size as f64;
    let mut best_idx = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..grid_size {
        let d = phase_distance(i as f64 / g, base);
        if d < best {
            best = d;
            best_idx = i;
        }
    }
    // bracket the argmin with its grid neighbors; the curve is periodic,
    // so the bracket may extend below 0 and phase_distance reduces mod 1
    let mut lo = (best_idx as f64 - 1.0) / g;
    let mut hi = (best_idx as f64 + 1.0) / g;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = phase_distance(x1, base);
    let mut f2 = phase_distance(x2, base);
    while hi - lo > GOLDEN_SECTION_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = phase_distance(x1, base);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = phase_distance(x2, base);
        }
    }
    let theta = (0.5 * (lo + hi)).rem_euclid(1.0);
    let d = phase_distance(theta, base);
    if d <= best {
        Ok((theta, d))
    } else {
        Ok((best_idx as f64 / g, best))
    }
}

/// The full distance curve over a phase grid, with the refined minimum
/// and the sharp bound for comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop1Curve {
    pub thetas: Vec<f64>,
    pub distances: Vec<f64>,
    pub theta_star: f64,
    pub d_star: f64,
    pub bound: f64,
}

pub fn prop1_curve(base: Base, grid_size: usize) -> Result<Prop1Curve> {
    if grid_size < MIN_PHASE_GRID {
        return Err(Error::config(format!(
            "phase grid must have at least {MIN_PHASE_GRID} points, got {grid_size}"
        )));
    }
    let g = grid_size as f64;
    let thetas: Vec<f64> = (0..grid_size).map(|i| i as f64 / g).collect();
    let distances: Vec<f64> = thetas.iter().map(|&t| phase_distance(t, base)).collect();
    let (theta_star, d_star) = minimize_phase(base, grid_size)?;
    Ok(Prop1Curve {
        thetas,
        distances,
        theta_star,
        d_star,
        bound: prop1_bound(base),
    })
}

/// An exact reduced rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactFraction {
    pub numerator: u128,
    pub denominator: u128,
}

impl ExactFraction {
    fn reduced(numerator: u128, denominator: u128) -> Self {
        let g = gcd(numerator, denominator);
        ExactFraction {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl std::fmt::Display for ExactFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl Serialize for ExactFraction {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ExactFraction", 3)?;
        // u128 exceeds JSON's safe integer range, so digits go as strings
        s.serialize_field("numerator", &self.numerator.to_string())?;
        s.serialize_field("denominator", &self.denominator.to_string())?;
        s.serialize_field("value", &self.value())?;
        s.end()
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Exact fraction of `{1, ..., 2 b^n}` whose base-`b` representation
/// starts with the digit 1. Closed-form counting, no enumeration: the
/// qualifying integers are the blocks `[b^j, 2 b^j)` for `j < n`, the
/// block `[b^n, 2 b^n)`, and `2 b^n` itself when `b = 2`.
pub fn leading_one_fraction(n: u32, base: Base) -> Result<ExactFraction> {
    let b = base.get() as u128;
    let overflow = || {
        Error::capacity(format!(
            "2*{base}^{n} overflows 128-bit exact counting; no wider integer path is provided"
        ))
    };
    let pow = b.checked_pow(n).ok_or_else(overflow)?;
    let lower_blocks = (pow - 1) / (b - 1);
    let top_block = pow;
    let endpoint = u128::from(base.get() == 2);
    let numerator = lower_blocks
        .checked_add(top_block)
        .and_then(|s| s.checked_add(endpoint))
        .ok_or_else(overflow)?;
    let denominator = pow.checked_mul(2).ok_or_else(overflow)?;
    Ok(ExactFraction::reduced(numerator, denominator))
}

/// Limiting leading-1 fraction of `{1, ..., 2 b^n}` as `n` grows.
pub fn leading_one_limit(base: Base) -> f64 {
    let b = base.as_f64();
    if base.get() == 2 {
        return 1.0;
    }
    // (1/(b-1) + 1) / 2
    (1.0 / (b - 1.0) + 1.0) / 2.0
}

/// One row of the spread-versus-distance comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpreadComparisonRow {
    pub measure: String,
    pub scale: String,
    pub x_value: f64,
    pub z_value: f64,
}

/// The exact counterexample to "larger spread means farther from
/// Benford": `X = b^Y` is exactly Benford while `Z = b^(3Y/2)` has larger
/// spread in every column yet positive distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonmonotonicityReport {
    pub base: u32,
    pub alpha: f64,
    pub rows: Vec<SpreadComparisonRow>,
    pub ks_x: f64,
    pub ks_z: f64,
    pub wasserstein_x: f64,
    pub wasserstein_z: f64,
}

fn report_measures(r: &SpreadReport) -> [(&'static str, f64); 4] {
    [
        ("range", r.range.value),
        ("quantile_spread", r.quantile_spread.value),
        ("std_dev", r.std_dev.value),
        ("gini_mean_difference", r.gini_mean_difference.value),
    ]
}

pub fn nonmonotonicity_report(base: Base, alpha: f64) -> Result<NonmonotonicityReport> {
    let x = AnalyticDistribution::PowerOfUniform { a: 1.0, base };
    let z = AnalyticDistribution::PowerOfUniform { a: 1.5, base };
    let mut rows = Vec::with_capacity(8);
    for scale in [Scale::Raw, Scale::Log(base)] {
        let rx = spread::spread_analytic(&x, scale, alpha)?;
        let rz = spread::spread_analytic(&z, scale, alpha)?;
        for ((name, xv), (_, zv)) in report_measures(&rx).into_iter().zip(report_measures(&rz)) {
            rows.push(SpreadComparisonRow {
                measure: name.to_string(),
                scale: scale.to_string(),
                x_value: xv,
                z_value: zv,
            });
        }
    }
    let dx = metrics::distance_report(&modone::log_mod_one(&x, base)?);
    let dz = metrics::distance_report(&modone::log_mod_one(&z, base)?);
    Ok(NonmonotonicityReport {
        base: base.get(),
        alpha,
        rows,
        ks_x: dx.ks,
        ks_z: dz.ks,
        wasserstein_x: dx.wasserstein,
        wasserstein_z: dz.wasserstein,
    })
}

/// Distances of one distribution examined in several bases, with the
/// log-scale spread ratio relative to the first base.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseChangeRow {
    pub base: u32,
    pub ks: f64,
    pub ks_argmax: f64,
    pub wasserstein: f64,
    /// spread on the `log_base` scale divided by spread on the first
    /// listed base's log scale; equals `log_base(first)`
    pub log_spread_ratio: f64,
}

pub fn base_change_audit(
    dist: &AnalyticDistribution,
    bases: &[Base],
) -> Result<Vec<BaseChangeRow>> {
    if bases.is_empty() {
        return Err(Error::config("at least one base is required".to_string()));
    }
    let reference = bases[0];
    bases
        .iter()
        .map(|&b| {
            let report = metrics::distance_report(&modone::log_mod_one(dist, b)?);
            Ok(BaseChangeRow {
                base: b.get(),
                ks: report.ks,
                ks_argmax: report.ks_argmax,
                wasserstein: report.wasserstein,
                log_spread_ratio: reference.ln() / b.ln(),
            })
        })
        .collect()
}

/// Distance from Benford of the *log* of a decade-supported reciprocal
/// variable. The variable itself is exactly Benford; its log is uniform
/// on `(k, k+1)` and decidedly is not.
pub fn log_of_benford_audit(k: i32, base: Base) -> Result<DistanceReport> {
    if k < 1 {
        return Err(Error::domain(format!(
            "k must be at least 1 so the log values stay positive, got {k}"
        )));
    }
    let cdf = modone::log_mod_one_uniform(f64::from(k), f64::from(k) + 1.0, base)?;
    Ok(metrics::distance_report(&cdf))
}

/// One mixture ingredient: a named sampler with parameters. Sampler ids
/// follow the registry documented on [`MixtureSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MixtureComponent {
    Uniform { t: f64 },
    Exponential { lambda: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Pareto { xm: f64, alpha: f64 },
    PowerOfUniform { a: f64 },
    BenfordDecade { k: i32 },
}

impl MixtureComponent {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MixtureComponent::Uniform { t } => t.is_finite() && t > 0.0,
            MixtureComponent::Exponential { lambda } => lambda.is_finite() && lambda > 0.0,
            MixtureComponent::Lognormal { mu, sigma } => {
                mu.is_finite() && sigma.is_finite() && sigma > 0.0
            }
            MixtureComponent::Pareto { xm, alpha } => {
                xm.is_finite() && xm > 0.0 && alpha.is_finite() && alpha > 0.0
            }
            MixtureComponent::PowerOfUniform { a } => a.is_finite() && a > 0.0,
            MixtureComponent::BenfordDecade { k } => k.abs() < 300,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!(
                "invalid component parameters: {self:?}"
            )))
        }
    }

    /// Inverse CDF at `u` in (0,1). The registry is decimal: samplers with
    /// a scale family use base 10.
    fn quantile(&self, u: f64) -> f64 {
        match *self {
            MixtureComponent::Uniform { t } => t * u,
            MixtureComponent::Exponential { lambda } => -(-u).ln_1p() / lambda,
            MixtureComponent::Lognormal { mu, sigma } => (mu + sigma * inverse_normal(u)).exp(),
            MixtureComponent::Pareto { xm, alpha } => xm * (1.0 - u).powf(-1.0 / alpha),
            MixtureComponent::PowerOfUniform { a } => 10f64.powf(a * u),
            MixtureComponent::BenfordDecade { k } => 10f64.powf(f64::from(k) + u),
        }
    }
}

fn default_schema_version() -> u32 {
    crate::cli::SCHEMA_VERSION
}

/// A reproducible mixing experiment: which samplers, how many draws each,
/// and the seed that fixes every random choice.
///
/// Sampler registry (all decimal): `uniform {t}`, `exponential {lambda}`,
/// `lognormal {mu, sigma}`, `pareto {xm, alpha}`, `power_of_uniform {a}`,
/// `benford_decade {k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureSpec {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub components: Vec<MixtureComponent>,
    pub samples_per_component: u64,
    pub seed: u64,
}

impl MixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::config(
                "a mixture needs at least one component".to_string(),
            ));
        }
        if self.samples_per_component < 1 {
            return Err(Error::config(
                "samples_per_component must be at least 1".to_string(),
            ));
        }
        for c in &self.components {
            c.validate()?;
        }
        Ok(())
    }
}

/// Parameter ranges for the unbiased randomized mixture, drawn from
/// stream 0 of the experiment seed. Scale parameters are drawn uniformly
/// in log10 so no decade is preferred:
///
/// - uniform:          log10 t in [-0.5, 3.5]
/// - exponential:      log10 lambda in [-2, 1]
/// - lognormal:        mu in [-2, 4], sigma in [1, 3]
/// - pareto:           log10 xm in [-1, 2], alpha in [0.2, 0.6]
/// - power_of_uniform: a in [1.5, 4]
///
/// The pareto shape stays below 1 to keep tails heavy; light-tailed
/// pareto components are individually far from Benford and a handful of
/// them can dominate a small pool.
pub fn randomized_mixture(n_components: u32, samples_per_component: u64, seed: u64) -> MixtureSpec {
    let kinds = n_components as usize;
    let draws = modone::unit_uniforms(seed, 0, 2 * kinds);
    let mut next = draws.into_iter();
    let mut take = |lo: f64, hi: f64| lo + (hi - lo) * next.next().expect("enough draws");
    let components = (0..kinds)
        .map(|i| match i % 5 {
            0 => MixtureComponent::Uniform {
                t: 10f64.powf(take(-0.5, 3.5)),
            },
            1 => MixtureComponent::Exponential {
                lambda: 10f64.powf(take(-2.0, 1.0)),
            },
            2 => MixtureComponent::Lognormal {
                mu: take(-2.0, 4.0),
                sigma: take(1.0, 3.0),
            },
            3 => MixtureComponent::Pareto {
                xm: 10f64.powf(take(-1.0, 2.0)),
                alpha: take(0.2, 0.6),
            },
            _ => MixtureComponent::PowerOfUniform { a: take(1.5, 4.0) },
        })
        .collect();
    MixtureSpec {
        schema_version: crate::cli::SCHEMA_VERSION,
        components,
        samples_per_component,
        seed,
    }
}

/// One prefix of the pooled mixture: conformance after the first
/// `n_components` ingredients are pooled.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceRow {
    pub n_components: u32,
    pub ks: f64,
    pub chisq: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureTrace {
    pub rows: Vec<TraceRow>,
}

/// Run the mixing experiment: sample every component from its own stream
/// (component `i` uses stream `i + 1`; stream 0 is reserved for parameter
/// randomization), pool prefixes in spec order, and report the empirical
/// KS and first-digit chi-square after each addition.
pub fn mixture_experiment(spec: &MixtureSpec, base: Base) -> Result<MixtureTrace> {
    spec.validate()?;
    let per = spec.samples_per_component as usize;
    let mut pooled_fracs: Vec<f64> = Vec::with_capacity(per * spec.components.len());
    let mut digit_counts = vec![0u64; (base.get() - 1) as usize];
    let mut rows = Vec::with_capacity(spec.components.len());
    for (i, component) in spec.components.iter().enumerate() {
        let uniforms = modone::unit_uniforms(spec.seed, i as u64 + 1, per);
        for u in uniforms {
            let x = component.quantile(u);
            pooled_fracs.push(digits::log_fraction(x, base).map_err(|e| {
                Error::domain(format!("component {i} produced an unusable sample: {e}"))
            })?);
            let d = digits::first_digit(x, base)?;
            digit_counts[(d - 1) as usize] += 1;
        }
        let mut sorted = pooled_fracs.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut ks: f64 = 0.0;
        for (j, &u) in sorted.iter().enumerate() {
            ks = ks.max(((j as f64 + 1.0) / n - u).abs());
            ks = ks.max((u - j as f64 / n).abs());
        }
        let (chisq, _) = metrics::first_digit_chisq_from_counts(&digit_counts, base)?;
        rows.push(TraceRow {
            n_components: i as u32 + 1,
            ks,
            chisq,
        });
    }
    Ok(MixtureTrace { rows })
}

/// Lower-tail inverse of the standard normal CDF (Acklam's rational
/// approximation, absolute error below 1.2e-8 on (0,1)). Good enough for
/// the demonstration sampler; nothing downstream needs more.
fn inverse_normal(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (-p).ln_1p()).sqrt();
        -((((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0))
    }
}
