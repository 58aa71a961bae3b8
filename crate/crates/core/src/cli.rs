//! Data ingestion and report plumbing for the `benford-audit` binary.
//!
//! Everything here is ordinary glue: reading values out of text or CSV,
//! assembling serializable reports from the analysis modules, and writing
//! JSON or CSV artifacts. The binary in `main.rs` only parses arguments
//! and dispatches.

use crate::audit::{self, BaseChangeRow, MixtureSpec, NonmonotonicityReport, Prop1Curve, TraceRow};
use crate::digits::{self, Base};
use crate::error::{Error, Result};
use crate::metrics::{self, DistanceReport};
use crate::spread::{self, Scale, SpreadReport};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

/// Version stamp carried by every report this tool emits.
pub const SCHEMA_VERSION: u32 = 1;

/// Wording shipped with every analyze report; the non-monotonicity audit
/// is the exact witness behind it.
pub const SPREAD_ADVISORY: &str = "a large spread on any scale does not by itself move data \
     toward the first-digit law; judge conformance by the distance statistics in this report";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::config(format!(
                "unknown format {other:?}, expected json or csv"
            ))),
        }
    }
}

/// Rejected-row tally. Rows failing several filters count under the first
/// one that fired (non-numeric before finiteness before sign).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipCounts {
    pub non_numeric: u64,
    pub non_positive: u64,
    pub non_finite: u64,
}

impl SkipCounts {
    pub fn total(&self) -> u64 {
        self.non_numeric + self.non_positive + self.non_finite
    }
}

/// Parsed input data. `text_digits` is populated only on the
/// digits-from-text path and holds one first digit per accepted value.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub values: Vec<f64>,
    pub text_digits: Option<Vec<u32>>,
    pub source: String,
    pub skipped: SkipCounts,
    pub total_rows: u64,
}

/// First significant decimal digit straight from the numeral text: the
/// first nonzero digit of the mantissa, immune to float rounding of
/// values like "19.99". Returns None when the text holds no such digit.
pub fn text_first_digit(text: &str) -> Option<u32> {
    let trimmed = text.trim();
    let mantissa = trimmed.split(['e', 'E']).next().unwrap_or(trimmed);
    mantissa
        .chars()
        .find(|c| ('1'..='9').contains(c))
        .map(|c| c as u32 - '0' as u32)
}

enum ColumnSelector {
    Index(usize),
    Name(String),
}

fn parse_column_selector(column: &str) -> ColumnSelector {
    match column.parse::<usize>() {
        Ok(idx) => ColumnSelector::Index(idx),
        Err(_) => ColumnSelector::Name(column.to_string()),
    }
}

fn classify(text: &str, dataset: &mut Dataset, digits_from_text: bool) {
    let trimmed = text.trim();
    let Ok(x) = trimmed.parse::<f64>() else {
        dataset.skipped.non_numeric += 1;
        return;
    };
    if !x.is_finite() {
        dataset.skipped.non_finite += 1;
        return;
    }
    if x <= 0.0 {
        dataset.skipped.non_positive += 1;
        return;
    }
    dataset.values.push(x);
    if digits_from_text {
        let digit = text_first_digit(trimmed)
            .unwrap_or_else(|| digits::first_digit(x, Base::new(10).unwrap()).expect("positive"));
        dataset.text_digits.get_or_insert_with(Vec::new).push(digit);
    }
}

/// Read one value per line, or one CSV column when `column` is given
/// (by header name, or 0-based position if the selector is an integer).
/// Every row ends up used or counted in `skipped`.
pub fn read_dataset(
    reader: impl BufRead,
    source: &str,
    column: Option<&str>,
    digits_from_text: bool,
) -> Result<Dataset> {
    let mut dataset = Dataset {
        values: Vec::new(),
        text_digits: if digits_from_text {
            Some(Vec::new())
        } else {
            None
        },
        source: source.to_string(),
        skipped: SkipCounts::default(),
        total_rows: 0,
    };
    match column {
        None => {
            for line in reader.lines() {
                let line = line?;
                dataset.total_rows += 1;
                classify(&line, &mut dataset, digits_from_text);
            }
        }
        Some(selector) => {
            let selector = parse_column_selector(selector);
            let mut csv_reader = csv::ReaderBuilder::new()
                .has_headers(matches!(selector, ColumnSelector::Name(_)))
                .from_reader(reader);
            let index = match &selector {
                ColumnSelector::Index(i) => *i,
                ColumnSelector::Name(name) => {
                    let headers = csv_reader.headers().map_err(|e| csv_format_error(&e))?;
                    headers.iter().position(|h| h == name).ok_or_else(|| {
                        Error::config(format!(
                            "column {name:?} not found; headers are {:?}",
                            headers.iter().collect::<Vec<_>>()
                        ))
                    })?
                }
            };
            for record in csv_reader.records() {
                let record = record.map_err(|e| csv_format_error(&e))?;
                dataset.total_rows += 1;
                match record.get(index) {
                    Some(field) => classify(field, &mut dataset, digits_from_text),
                    None => {
                        let line = record.position().map(|p| p.line());
                        return Err(Error::Format {
                            line,
                            msg: format!(
                                "row has {} fields, column index {index} is out of range",
                                record.len()
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(dataset)
}

fn csv_format_error(e: &csv::Error) -> Error {
    let line = e.position().map(|p| p.line());
    Error::Format {
        line,
        msg: e.to_string(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigitRow {
    pub digit: u32,
    pub count: u64,
    pub frequency: f64,
    pub benford: f64,
}

/// Conformance report for a user dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub source: String,
    pub base: u32,
    pub total_rows: u64,
    pub used: u64,
    pub skipped: SkipCounts,
    pub first_digits: Vec<DigitRow>,
    pub empirical_ks: f64,
    pub chi_square: f64,
    pub chi_square_dof: u32,
    /// absent when fewer than two values survive ingestion
    pub spread_raw: Option<SpreadReport>,
    pub spread_log: Option<SpreadReport>,
    pub advisory: String,
}

pub fn analyze_dataset(dataset: &Dataset, base: Base, alpha: f64) -> Result<AnalyzeReport> {
    if dataset.values.is_empty() {
        return Err(Error::EmptyData(format!(
            "no usable values in {} ({} rows, all skipped)",
            dataset.source, dataset.total_rows
        )));
    }
    if dataset.text_digits.is_some() && base.get() != 10 {
        return Err(Error::config(
            "digits-from-text reads decimal numerals and only supports base 10".to_string(),
        ));
    }
    let mut counts = vec![0u64; (base.get() - 1) as usize];
    match &dataset.text_digits {
        Some(ds) => {
            for &d in ds {
                counts[(d - 1) as usize] += 1;
            }
        }
        None => {
            for (i, &x) in dataset.values.iter().enumerate() {
                let d = digits::first_digit(x, base)
                    .map_err(|e| Error::domain(format!("value at index {i}: {e}")))?;
                counts[(d - 1) as usize] += 1;
            }
        }
    }
    let n = dataset.values.len() as u64;
    let first_digits = counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let digit = i as u32 + 1;
            Ok(DigitRow {
                digit,
                count,
                frequency: count as f64 / n as f64,
                benford: digits::benford_first_digit_pmf(digit, base)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (chi_square, chi_square_dof) = metrics::first_digit_chisq_from_counts(&counts, base)?;
    let spread = |scale: Scale| match spread::spread_sample(&dataset.values, scale, alpha) {
        Ok(report) => Ok(Some(report)),
        Err(Error::EmptyData(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        source: dataset.source.clone(),
        base: base.get(),
        total_rows: dataset.total_rows,
        used: n,
        skipped: dataset.skipped,
        first_digits,
        empirical_ks: metrics::empirical_ks(&dataset.values, base)?,
        chi_square,
        chi_square_dof,
        spread_raw: spread(Scale::Raw)?,
        spread_log: spread(Scale::Log(base))?,
        advisory: SPREAD_ADVISORY.to_string(),
    })
}

/// Summary block printed by the sharp-bound audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop1Summary {
    pub schema_version: u32,
    pub base: u32,
    pub grid_size: usize,
    pub bound: f64,
    pub theta_star: f64,
    pub d_star: f64,
    pub residual: f64,
}

impl Prop1Summary {
    pub fn from_curve(curve: &Prop1Curve, base: Base, grid_size: usize) -> Self {
        Prop1Summary {
            schema_version: SCHEMA_VERSION,
            base: base.get(),
            grid_size,
            bound: curve.bound,
            theta_star: curve.theta_star,
            d_star: curve.d_star,
            residual: (curve.d_star - curve.bound).abs(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop1Report {
    pub schema_version: u32,
    pub base: u32,
    pub grid_size: usize,
    pub bound: f64,
    pub theta_star: f64,
    pub d_star: f64,
    pub residual: f64,
    pub thetas: Vec<f64>,
    pub distances: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeadingOneRow {
    pub n: u32,
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub schema_version: u32,
    pub base: u32,
    pub rows: Vec<LeadingOneRow>,
    pub limit: f64,
    /// the Benford probability of a leading 1, for contrast
    pub benford_reference: f64,
}

pub fn counterexample_report(n_max: u32, base: Base) -> Result<CounterexampleReport> {
    let rows = (0..=n_max)
        .map(|n| {
            let f = audit::leading_one_fraction(n, base)?;
            Ok(LeadingOneRow {
                n,
                numerator: f.numerator.to_string(),
                denominator: f.denominator.to_string(),
                value: f.value(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CounterexampleReport {
        schema_version: SCHEMA_VERSION,
        base: base.get(),
        rows,
        limit: audit::leading_one_limit(base),
        benford_reference: digits::benford_first_digit_pmf(1, base)?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub schema_version: u32,
    pub distribution: String,
    pub rows: Vec<BaseChangeRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenfordLogReport {
    pub schema_version: u32,
    pub k: i32,
    pub base: u32,
    /// distances of the log values' mantissa law from uniform
    pub log_scale: DistanceReport,
    /// the variable itself is exactly Benford, shown for contrast
    pub raw_scale_ks: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonmonotonicityEnvelope {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: NonmonotonicityReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateReport {
    pub schema_version: u32,
    pub base: u32,
    pub spec: MixtureSpec,
    pub rows: Vec<TraceRow>,
}

/// Parse a mixture spec, reporting schema violations with the JSON path
/// of the offending field.
pub fn parse_mixture_spec(text: &str, source: &str) -> Result<MixtureSpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let spec: MixtureSpec = serde_path_to_error::deserialize(de).map_err(|e| Error::Format {
        line: None,
        msg: format!("{source}: at {}: {}", e.path(), e.inner()),
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn to_json_text(report: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

fn csv_text<F>(fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> std::result::Result<(), csv::Error>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    fill(&mut writer).map_err(|e| Error::Format {
        line: None,
        msg: e.to_string(),
    })?;
    let bytes = writer.into_inner().map_err(|e| Error::Format {
        line: None,
        msg: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn prop1_curve_csv(curve: &Prop1Curve) -> Result<String> {
    csv_text(|w| {
        w.write_record(["theta", "distance"])?;
        for (&theta, &d) in curve.thetas.iter().zip(&curve.distances) {
            w.write_record(&[theta.to_string(), d.to_string()])?;
        }
        Ok(())
    })
}

pub fn counterexample_csv(report: &CounterexampleReport) -> Result<String> {
    csv_text(|w| {
        w.write_record(["n", "numerator", "denominator", "value"])?;
        for row in &report.rows {
            w.write_record(&[
                row.n.to_string(),
                row.numerator.clone(),
                row.denominator.clone(),
                row.value.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn nonmonotonicity_csv(report: &NonmonotonicityReport) -> Result<String> {
    csv_text(|w| {
        w.write_record(["measure", "scale", "X_value", "Z_value", "ks_X", "ks_Z"])?;
        for row in &report.rows {
            w.write_record(&[
                row.measure.clone(),
                row.scale.clone(),
                row.x_value.to_string(),
                row.z_value.to_string(),
                report.ks_x.to_string(),
                report.ks_z.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn base_change_csv(rows: &[BaseChangeRow]) -> Result<String> {
    csv_text(|w| {
        w.write_record(["base", "ks", "ks_argmax", "wasserstein", "log_spread_ratio"])?;
        for row in rows {
            w.write_record(&[
                row.base.to_string(),
                row.ks.to_string(),
                row.ks_argmax.to_string(),
                row.wasserstein.to_string(),
                row.log_spread_ratio.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn benford_log_csv(report: &BenfordLogReport) -> Result<String> {
    csv_text(|w| {
        w.write_record([
            "k",
            "base",
            "ks",
            "ks_argmax",
            "wasserstein",
            "raw_scale_ks",
        ])?;
        w.write_record(&[
            report.k.to_string(),
            report.base.to_string(),
            report.log_scale.ks.to_string(),
            report.log_scale.ks_argmax.to_string(),
            report.log_scale.wasserstein.to_string(),
            report.raw_scale_ks.to_string(),
        ])?;
        Ok(())
    })
}

pub fn trace_csv(rows: &[TraceRow]) -> Result<String> {
    csv_text(|w| {
        w.write_record(["n_components", "ks", "chisq"])?;
        for row in rows {
            w.write_record(&[
                row.n_components.to_string(),
                row.ks.to_string(),
                row.chisq.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn digit_table_csv(report: &AnalyzeReport) -> Result<String> {
    csv_text(|w| {
        w.write_record(["digit", "count", "frequency", "benford"])?;
        for row in &report.first_digits {
            w.write_record(&[
                row.digit.to_string(),
                row.count.to_string(),
                row.frequency.to_string(),
                row.benford.to_string(),
            ])?;
        }
        Ok(())
    })
}

/// Write an artifact to the output path, or to stdout when none is given.
pub fn write_artifact(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn b10() -> Base {
        Base::new(10).unwrap()
    }

    #[test]
    fn plain_lines_with_skips() {
        let input = "19.99\n\n-4\nabc\n7e3\n0\ninf\n0.003\n";
        let ds = read_dataset(Cursor::new(input), "test", None, false).unwrap();
        assert_eq!(ds.total_rows, 8);
        assert_eq!(ds.values, vec![19.99, 7000.0, 0.003]);
        assert_eq!(ds.skipped.non_numeric, 2);
        assert_eq!(ds.skipped.non_positive, 2);
        assert_eq!(ds.skipped.non_finite, 1);
        assert_eq!(ds.values.len() as u64 + ds.skipped.total(), ds.total_rows);
    }

    #[test]
    fn csv_column_by_name_and_index() {
        let input = "city,amount\na,12.5\nb,19\nc,zero\n";
        let ds = read_dataset(Cursor::new(input), "test", Some("amount"), false).unwrap();
        assert_eq!(ds.values, vec![12.5, 19.0]);
        assert_eq!(ds.skipped.non_numeric, 1);
        assert_eq!(ds.total_rows, 3);

        // index mode reads the header row as data, counting it as skipped
        let ds = read_dataset(Cursor::new(input), "test", Some("1"), false).unwrap();
        assert_eq!(ds.values, vec![12.5, 19.0]);
        assert_eq!(ds.skipped.non_numeric, 2);
        assert_eq!(ds.total_rows, 4);
    }

    #[test]
    fn csv_missing_column_and_bad_shape() {
        let input = "a,b\n1,2\n";
        let err = read_dataset(Cursor::new(input), "test", Some("missing"), false).unwrap_err();
        assert!(err.to_string().contains("missing"), "{err}");

        let ragged = "a,b\n1,2\n3\n4,5\n";
        let err = read_dataset(Cursor::new(ragged), "test", Some("b"), false).unwrap_err();
        match err {
            Error::Format { line, .. } => assert_eq!(line, Some(3)),
            other => panic!("expected format error, got {other}"),
        }
    }

    #[test]
    fn text_digit_extraction() {
        assert_eq!(text_first_digit("19.99"), Some(1));
        assert_eq!(text_first_digit("0.00072"), Some(7));
        assert_eq!(text_first_digit("7e3"), Some(7));
        assert_eq!(text_first_digit("0.0"), None);
        assert_eq!(text_first_digit("  3.5E-2 "), Some(3));
        assert_eq!(text_first_digit("-0.042"), Some(4));
    }

    #[test]
    fn digits_from_text_sidesteps_float_artifacts() {
        // 9.999999999999999999 rounds to 10.0 as a float; the text path
        // still reports first digit 9
        let input = "9.999999999999999999\n";
        let ds = read_dataset(Cursor::new(input), "test", None, true).unwrap();
        assert_eq!(ds.text_digits.as_deref(), Some(&[9u32][..]));
        let report = analyze_dataset(&ds, b10(), 0.25).unwrap();
        assert_eq!(report.first_digits[8].count, 1);
        assert_eq!(report.first_digits[0].count, 0);
    }

    #[test]
    fn analyze_constant_sevens() {
        let input = "7\n70\n700\n7000\n";
        let ds = read_dataset(Cursor::new(input), "test", None, false).unwrap();
        let report = analyze_dataset(&ds, b10(), 0.25).unwrap();
        assert_eq!(report.used, 4);
        assert_eq!(report.first_digits[6].count, 4);
        assert!((report.first_digits[6].frequency - 1.0).abs() < 1e-12);
        // all mass at frac(log10 7): KS = max(log10 7, 1 - log10 7)
        let expect_ks = 7f64.log10();
        assert!((report.empirical_ks - expect_ks).abs() < 1e-12);
        // far beyond the chi-square(8) 0.999 critical value
        assert!(
            report.chi_square > 26.12448155837614,
            "chisq {}",
            report.chi_square
        );
        assert_eq!(report.chi_square_dof, 8);
        assert!(report.spread_raw.is_some());
        assert!(!report.advisory.is_empty());
    }

    #[test]
    fn analyze_empty_and_single() {
        let ds = read_dataset(Cursor::new("x\ny\n"), "test", None, false).unwrap();
        let err = analyze_dataset(&ds, b10(), 0.25).unwrap_err();
        assert_eq!(err.exit_code(), 3);

        let ds = read_dataset(Cursor::new("5\n"), "test", None, false).unwrap();
        let report = analyze_dataset(&ds, b10(), 0.25).unwrap();
        assert!(report.spread_raw.is_none());
        assert!(report.spread_log.is_none());
    }

    #[test]
    fn mixture_spec_errors_carry_json_path() {
        let bad = r#"{"components": [{"uniform": {"t": 2.0}}, {"pareto": {"xm": 1.0}}],
                      "samples_per_component": 10, "seed": 1}"#;
        let err = parse_mixture_spec(bad, "spec.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("components[1]"), "{msg}");
        assert_eq!(err.exit_code(), 2);

        let unknown = r#"{"components": [{"cauchy": {"x0": 2.0}}],
                          "samples_per_component": 10, "seed": 1}"#;
        let err = parse_mixture_spec(unknown, "spec.json").unwrap_err();
        assert!(err.to_string().contains("cauchy"), "{err}");
    }

    #[test]
    fn csv_artifacts_have_pinned_headers() {
        let curve = audit::prop1_curve(b10(), 16).unwrap();
        let text = prop1_curve_csv(&curve).unwrap();
        assert!(text.starts_with("theta,distance\n"));
        assert_eq!(text.lines().count(), 17);
        assert!(!text.contains('\r'));

        let report = audit::nonmonotonicity_report(b10(), 0.25).unwrap();
        let text = nonmonotonicity_csv(&report).unwrap();
        assert!(text.starts_with("measure,scale,X_value,Z_value,ks_X,ks_Z\n"));
        assert_eq!(text.lines().count(), 9);

        let ce = counterexample_report(2, b10()).unwrap();
        let text = counterexample_csv(&ce).unwrap();
        assert!(text.starts_with("n,numerator,denominator,value\n"));
        assert!(text.contains("1,11,20,0.55\n"));
    }

    #[test]
    fn json_reports_round_trip() {
        let ds = read_dataset(Cursor::new("1\n2\n3\n"), "test", None, false).unwrap();
        let report = analyze_dataset(&ds, b10(), 0.25).unwrap();
        let text = to_json_text(&report);
        let back: AnalyzeReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.used, report.used);
        assert_eq!(back.schema_version, SCHEMA_VERSION);

        let ce = counterexample_report(3, b10()).unwrap();
        let back: CounterexampleReport = serde_json::from_str(&to_json_text(&ce)).unwrap();
        assert_eq!(back.rows.len(), 4);
    }
}
