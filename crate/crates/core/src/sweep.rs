//! Sweeps of every copier's indicators over a uniform grid of overlaps `f`,
//! with deterministic CSV and JSON serialisation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::copiers::{copy, make_ensemble, ultimate_copier, CopierFamily, CopierOutput};
use crate::error::{Error, Result};
use crate::infomeasures::{i1_baseline, ih_baseline, one_state_info, ultimate_info_from_bloch};
use crate::numeric::check_unit_interval;
use crate::optimizer::maximize_ih;

/// Column header of the CSV output.
pub const CSV_HEADER: [&str; 9] = ["f", "copier", "i1", "i1_ratio", "ih", "f_local", "q", "r", "q_h"];

/// A row label: one copier family, or the uncopied inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Series {
    Copier(CopierFamily),
    Input,
}

impl Series {
    pub fn tag(self) -> &'static str {
        match self {
            Series::Copier(fam) => fam.tag(),
            Series::Input => "input",
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("input") {
            Ok(Series::Input)
        } else {
            s.parse().map(Series::Copier)
        }
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Indicators of one series at one overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub f: f64,
    #[serde(rename = "copier")]
    pub series: Series,
    pub i1: f64,
    pub i1_ratio: f64,
    pub ih: f64,
    pub f_local: f64,
    pub q: f64,
    pub r: f64,
    pub q_h: f64,
}

impl SweepRecord {
    /// Row for a computed copier output.
    pub fn from_output(f: f64, out: &CopierOutput) -> Result<Self> {
        let i1 = one_state_info(out);
        let base = i1_baseline(f)?;
        Ok(Self {
            f,
            series: Series::Copier(out.family),
            i1,
            i1_ratio: if base == 0.0 { 1.0 } else { i1 / base },
            ih: ultimate_info_from_bloch(out.r, out.q_h)?,
            f_local: out.local_fidelity,
            q: out.q,
            r: out.r,
            q_h: out.q_h,
        })
    }

    /// Row for the uncopied inputs.
    pub fn input(f: f64) -> Result<Self> {
        let f = check_unit_interval(f, "f", 0.0)?;
        Ok(Self {
            f,
            series: Series::Input,
            i1: i1_baseline(f)?,
            i1_ratio: 1.0,
            ih: ih_baseline(f)?,
            f_local: 1.0,
            q: (1.0 - f).sqrt(),
            r: 1.0,
            q_h: f.sqrt(),
        })
    }

    fn fields(&self) -> [f64; 8] {
        [self.f, self.i1, self.i1_ratio, self.ih, self.f_local, self.q, self.r, self.q_h]
    }
}

/// Evaluates one series at one overlap.
pub fn evaluate(f: f64, series: Series) -> Result<SweepRecord> {
    match series {
        Series::Input => SweepRecord::input(f),
        Series::Copier(fam) => {
            let ens = make_ensemble(f)?;
            SweepRecord::from_output(ens.f(), &copy(fam, &ens)?)
        }
    }
}

/// Output encoding of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

/// Grid, series selection and encoding of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub f_min: f64,
    pub f_max: f64,
    pub steps: usize,
    pub copiers: Vec<CopierFamily>,
    pub include_baselines: bool,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            f_min: 0.0,
            f_max: 1.0,
            steps: 101,
            copiers: CopierFamily::ALL.to_vec(),
            include_baselines: false,
            format: Format::Csv,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        check_unit_interval(self.f_min, "f_min", 0.0)?;
        check_unit_interval(self.f_max, "f_max", 0.0)?;
        if self.f_min > self.f_max {
            return Err(Error::domain("f_max − f_min", self.f_max - self.f_min, "[0, 1]"));
        }
        if self.steps < 2 {
            return Err(Error::domain("steps", self.steps as f64, "[2, ∞)"));
        }
        Ok(())
    }

    /// Uniform grid including both endpoints exactly.
    pub fn f_grid(&self) -> Vec<f64> {
        uniform_grid(self.f_min, self.f_max, self.steps)
    }

    fn series(&self) -> Vec<Series> {
        let mut out: Vec<Series> = self.copiers.iter().copied().map(Series::Copier).collect();
        if self.include_baselines {
            out.push(Series::Input);
        }
        out.sort_by_key(|s| s.tag());
        out.dedup();
        out
    }
}

/// `steps` equally spaced points from `lo` to `hi`, endpoints exact.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|k| {
                if k == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (k as f64 / (steps - 1) as f64)
                }
            })
            .collect(),
    }
}

fn rows_at(f: f64, series: &[Series]) -> Result<Vec<SweepRecord>> {
    let ens = make_ensemble(f)?;
    let mut rows = Vec::with_capacity(series.len());
    for &s in series {
        rows.push(match s {
            Series::Input => SweepRecord::input(f)?,
            Series::Copier(CopierFamily::Ultimate) => {
                let out = ultimate_copier(&ens, &maximize_ih(f)?)?;
                SweepRecord::from_output(f, &out)?
            }
            Series::Copier(fam) => SweepRecord::from_output(f, &copy(fam, &ens)?)?,
        });
    }
    Ok(rows)
}

/// Computes every requested row, in parallel over `f`, sorted by `f` then tag.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let series = config.series();
    let per_f: Vec<Vec<SweepRecord>> = config
        .f_grid()
        .into_par_iter()
        .map(|f| rows_at(f, &series))
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRecord> = per_f.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.f.total_cmp(&b.f).then_with(|| a.series.tag().cmp(b.series.tag())));
    Ok(rows)
}

/// `x` to 12 significant digits in the shortest of fixed or exponent notation.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-5..12).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!("{sign}{m}e{exp}");
    }
    let fixed = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", trim_fraction(&fixed))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serialises rows as CSV with the fixed header and 12-significant-digit numbers.
pub fn to_csv(rows: &[SweepRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let v = row.fields();
        let mut cells = vec![format_sig12(v[0]), row.series.tag().to_string()];
        cells.extend(v[1..].iter().map(|&x| format_sig12(x)));
        w.write_record(&cells).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads rows written by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e: csv::Error| Error::Parse(e.to_string())))
        .collect()
}

fn round_sig12(x: f64) -> f64 {
    format_sig12(x).parse().unwrap_or(x)
}

#[derive(Serialize)]
struct JsonRow {
    f: f64,
    copier: &'static str,
    i1: f64,
    i1_ratio: f64,
    ih: f64,
    f_local: f64,
    q: f64,
    r: f64,
    q_h: f64,
}

impl From<&SweepRecord> for JsonRow {
    fn from(r: &SweepRecord) -> Self {
        Self {
            f: round_sig12(r.f),
            copier: r.series.tag(),
            i1: round_sig12(r.i1),
            i1_ratio: round_sig12(r.i1_ratio),
            ih: round_sig12(r.ih),
            f_local: round_sig12(r.f_local),
            q: round_sig12(r.q),
            r: round_sig12(r.r),
            q_h: round_sig12(r.q_h),
        }
    }
}

/// One JSON object for a single row.
pub fn record_to_json(row: &SweepRecord) -> Result<String> {
    serde_json::to_string(&JsonRow::from(row)).map_err(|e| Error::Parse(e.to_string()))
}

/// JSON array of rows with the CSV field names, one object per line.
pub fn to_json(rows: &[SweepRecord]) -> Result<String> {
    let rows: Vec<JsonRow> = rows.iter().map(JsonRow::from).collect();
    let mut text = serde_json::to_string_pretty(&rows).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn render(rows: &[SweepRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(-0.0), "0");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(0.5), "0.5");
        assert_eq!(format_sig12(0.399_123_963_307_143_9), "0.399123963307");
        assert_eq!(format_sig12(-2.5e-3), "-0.0025");
        assert_eq!(format_sig12(1.234_567_890_123_4e-7), "1.23456789012e-7");
        assert_eq!(format_sig12(5.0 / 6.0), "0.833333333333");
        assert_eq!(format_sig12(0.999_999_999_999_9), "1");
        assert_eq!(format_sig12(123456.0), "123456");
    }

    #[test]
    fn grid_has_exact_endpoints() {
        let g = uniform_grid(0.0, 1.0, 101);
        assert_eq!((g.len(), g[0], g[100]), (101, 0.0, 1.0));
        assert_eq!(g[50], 0.5);
        assert_eq!(uniform_grid(0.2, 0.2, 3), vec![0.2; 3]);
    }

    #[test]
    fn config_validation() {
        assert!(SweepConfig::default().validate().is_ok());
        let bad = SweepConfig { steps: 1, ..SweepConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { f_min: 0.6, f_max: 0.5, ..SweepConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SweepConfig { f_max: 1.2, ..SweepConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn series_tags_and_parsing() {
        assert_eq!("input".parse::<Series>().unwrap(), Series::Input);
        assert_eq!("uqcm".parse::<Series>().unwrap(), Series::Copier(CopierFamily::Uqcm));
        assert!("nope".parse::<Series>().is_err());
    }

    #[test]
    fn eval_examples() {
        let r = evaluate(0.5, Series::Copier(CopierFamily::Uqcm)).unwrap();
        assert_abs_diff_eq!(r.f_local, 5.0 / 6.0, epsilon = 1e-15);
        let r = evaluate(0.0, Series::Copier(CopierFamily::Wz)).unwrap();
        assert_eq!((r.i1, r.ih, r.f_local), (1.0, 1.0, 1.0));
        let r = evaluate(0.5, Series::Copier(CopierFamily::Wz)).unwrap();
        assert_abs_diff_eq!(r.i1, 0.399_123_963_307_143_9, epsilon = 1e-15);
        assert_eq!(r.f_local, 0.75);
        assert!(evaluate(1.5, Series::Input).is_err());
    }

    #[test]
    fn ratio_convention_at_unit_overlap() {
        for fam in CopierFamily::ALL {
            let r = evaluate(1.0, Series::Copier(fam)).unwrap();
            assert_eq!((r.i1, r.i1_ratio), (0.0, 1.0));
        }
    }

    #[test]
    fn sweep_rows_are_sorted_and_counted() {
        let cfg = SweepConfig {
            steps: 5,
            include_baselines: true,
            ..SweepConfig::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 35);
        for w in rows.windows(2) {
            let key = |r: &SweepRecord| (r.f, r.series.tag());
            assert!(key(&w[0]) < key(&w[1]));
        }
    }

    #[test]
    fn csv_round_trip_is_stable() {
        let cfg = SweepConfig {
            steps: 6,
            include_baselines: true,
            ..SweepConfig::default()
        };
        let text = to_csv(&run_sweep(&cfg).unwrap()).unwrap();
        assert!(text.starts_with("f,copier,i1,i1_ratio,ih,f_local,q,r,q_h\n"));
        let back = parse_csv(&text).unwrap();
        assert_eq!(to_csv(&back).unwrap(), text);
        assert!(parse_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn json_has_csv_field_names() {
        let row = evaluate(0.5, Series::Input).unwrap();
        let v: serde_json::Value = serde_json::from_str(&record_to_json(&row).unwrap()).unwrap();
        let obj = v.as_object().unwrap();
        for key in CSV_HEADER {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj["copier"], "input");
        assert_eq!(obj["ih"].as_f64().unwrap(), 0.600876036693);
    }
}
