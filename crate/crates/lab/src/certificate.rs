//! Verdicts, JSON certificates, CSV summaries and OFF surface dumps.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use adslab_core::hull::ConvexSurface;
use adslab_core::Tolerances;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{ExperimentConfig, Kind};
use crate::RunError;

pub const TOOL: &str = "adslab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Below,
    AtMost,
    Above,
    AtLeast,
    Equal,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::Below => value < threshold,
            Relation::AtMost => value <= threshold,
            Relation::Above => value > threshold,
            Relation::AtLeast => value >= threshold,
            Relation::Equal => value == threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::AtMost => "<=",
            Relation::Above => ">",
            Relation::AtLeast => ">=",
            Relation::Equal => "==",
        }
    }
}

/// One checked quantity. Infinite values are written as `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, JsonSchema)]
pub struct Verdict {
    /// Acceptance criterion number, for suite certificates.
    pub criterion: Option<u8>,
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        Self { criterion: None, name: name.into(), value, relation, threshold, pass: relation.holds(value, threshold) }
    }

    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, value, Relation::Below, threshold)
    }

    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, value, Relation::Above, threshold)
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(name, value, Relation::AtLeast, threshold)
    }

    pub fn equal(name: impl Into<String>, value: usize, expected: usize) -> Self {
        Self::new(name, value as f64, Relation::Equal, expected as f64)
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 1.0 } else { 0.0 }, Relation::Equal, 1.0)
    }

    pub fn for_criterion(mut self, c: u8) -> Self {
        self.criterion = Some(c);
        self
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} = {} {} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            fmt_value(self.value),
            self.relation.symbol(),
            fmt_value(self.threshold)
        )
    }
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e6 {
        format!("{v}")
    } else {
        format!("{v:.3e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    RankAmbiguous,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Error => 1,
            Status::Fail => 2,
            Status::RankAmbiguous => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, JsonSchema)]
pub struct Certificate {
    pub tool: String,
    pub version: String,
    pub kind: Kind,
    pub seed: u64,
    pub tolerances: TolerancesRecord,
    pub config: ExperimentConfig,
    pub status: Status,
    pub error: Option<String>,
    pub verdicts: Vec<Verdict>,
    /// Experiment reports, keyed by name.
    pub results: Value,
}

/// Mirror of the library tolerances for the schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TolerancesRecord {
    pub algebraic: f64,
    pub finite_difference: f64,
    pub curvature: f64,
    pub rank_relative: f64,
    pub ambiguity_factor: f64,
    pub plane_fit: f64,
}

impl From<Tolerances> for TolerancesRecord {
    fn from(t: Tolerances) -> Self {
        Self {
            algebraic: t.algebraic,
            finite_difference: t.finite_difference,
            curvature: t.curvature,
            rank_relative: t.rank_relative,
            ambiguity_factor: t.ambiguity_factor,
            plane_fit: t.plane_fit,
        }
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, RunError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for v in &self.verdicts {
            w.serialize(CsvRow {
                criterion: v.criterion,
                name: &v.name,
                value: v.value,
                relation: v.relation.symbol(),
                threshold: v.threshold,
                pass: v.pass,
            })
            .map_err(|e| RunError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| RunError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    criterion: Option<u8>,
    name: &'a str,
    value: f64,
    relation: &'a str,
    threshold: f64,
    pass: bool,
}

/// Chart coordinates of the face representatives of a hull surface, in OFF format.
pub fn off_dump(surface: &ConvexSurface) -> String {
    let mut used: Vec<usize> = surface.faces.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let mut out = String::from("OFF\n");
    writeln!(out, "# {:?} side {:?}, one face per orbit, chart {{x4 = 1}}", surface.geometry, surface.side).unwrap();
    writeln!(out, "{} {} 0", used.len(), surface.faces.len()).unwrap();
    for &i in &used {
        let p = surface.point(i);
        writeln!(out, "{:.17e} {:.17e} {:.17e}", p[0], p[1], p[2]).unwrap();
    }
    for f in &surface.faces {
        write!(out, "{}", f.vertices.len()).unwrap();
        for v in &f.vertices {
            let k = used.binary_search(v).expect("vertex collected above");
            write!(out, " {k}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let io = |e: std::io::Error| RunError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Verdict::below("x", 1e-9, 1e-8).pass);
        assert!(!Verdict::below("x", 1e-8, 1e-8).pass);
        assert!(Verdict::at_least("gap", f64::INFINITY, 1e2).pass);
        assert!(Verdict::equal("dim", 6, 6).pass);
        assert!(!Verdict::holds("ok", false).pass);
    }

    #[test]
    fn lines_are_stable() {
        assert_eq!(Verdict::equal("kernel", 6, 6).line(), "PASS kernel = 6 == 6");
        assert_eq!(Verdict::below("r", 2.5e-12, 1e-7).line(), "PASS r = 2.500e-12 < 1.000e-7");
    }

    #[test]
    fn infinity_serializes_as_null() {
        let v = serde_json::to_value(Verdict::at_least("gap", f64::INFINITY, 1e2)).unwrap();
        assert!(v["value"].is_null());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::Error.exit_code(), 1);
        assert_eq!(Status::Fail.exit_code(), 2);
        assert_eq!(Status::RankAmbiguous.exit_code(), 3);
    }
}
