use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

pub const JSON_FILE: &str = "report.json";
pub const CSV_FILE: &str = "report.csv";
pub const CSV_COLUMNS: [&str; 7] = ["experiment_id", "dim", "scale", "max_ratio", "mean_ratio", "q95_ratio", "lhs_max"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl FromStr for Format {
    type Err = oplab_core::Error;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            other => Err(oplab_core::Error::Parameter(format!(
                "unknown output format `{other}` (expected json, csv or both)"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Both => "both",
        })
    }
}

/// A real number with 17 significant digits, enough to round-trip every
/// `f64` exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON whose floating-point numbers carry 17 significant digits.
/// Non-finite numbers become `null`, as in plain `serde_json`.
struct PreciseFormatter(PrettyFormatter<'static>);

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes any value with the report number format.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// The manifest without its timestamps: identical configurations and seeds
/// give byte-identical bodies.
pub fn report_body(m: &RunManifest) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        version: &'a str,
        config_digest: &'a str,
        seed: Option<u64>,
        configs: &'a [oplab_core::harness::ExperimentConfig],
        reports: &'a [oplab_core::harness::ExperimentReport],
    }
    to_json(&Body {
        version: &m.version,
        config_digest: &m.config_digest,
        seed: m.seed,
        configs: &m.configs,
        reports: &m.reports,
    })
}

/// One row per (experiment, dim, scale) with the columns of [`CSV_COLUMNS`];
/// cells without completed trials leave the statistics empty.
pub fn to_csv(m: &RunManifest) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory CSV");
    let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
    for r in &m.reports {
        for s in &r.statistics {
            w.write_record([
                r.experiment_id.as_str().to_string(),
                s.dim.to_string(),
                format_f64(s.scale),
                opt(s.max_ratio),
                opt(s.mean_ratio),
                opt(s.q95_ratio),
                opt(s.lhs_max),
            ])
            .expect("in-memory CSV");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("CSV of UTF-8 fields")
}

/// Writes the manifest into `out_dir` (created if missing) and returns the
/// written paths.
pub fn emit(m: &RunManifest, format: Format, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Write { path: out_dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    let mut write = |name: &str, body: String| {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|source| CliError::Write { path: path.clone(), source })?;
        written.push(path);
        Ok::<_, CliError>(())
    };
    if matches!(format, Format::Json | Format::Both) {
        write(JSON_FILE, to_json(m))?;
    }
    if matches!(format, Format::Csv | Format::Both) {
        write(CSV_FILE, to_csv(m))?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xml_is_a_parameter_error() {
        assert!(matches!("xml".parse::<Format>(), Err(oplab_core::Error::Parameter(_))));
        assert_eq!("both".parse::<Format>().unwrap(), Format::Both);
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.powi(-14), 1e-300, 5e-324, f64::MAX, -0.7071067811865476, 123456789.125] {
            let s = format_f64(x);
            let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
            assert_eq!(digits, 17, "{s}");
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let v: serde_json::Value = serde_json::from_str(&to_json(&x)).unwrap();
            assert_eq!(v.as_f64().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(to_json(&[f64::NAN, f64::INFINITY]), "[\n  null,\n  null\n]\n");
    }

    #[test]
    fn integers_stay_integers() {
        assert_eq!(to_json(&(3u64, u64::MAX)), format!("[\n  3,\n  {}\n]\n", u64::MAX));
    }
}
