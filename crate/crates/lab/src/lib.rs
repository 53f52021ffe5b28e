//! Config-driven experiment runner for `adslab-core`.
//!
//! A run reads an [`ExperimentConfig`], computes one experiment kind, and writes a JSON
//! certificate, a CSV summary of its verdicts and OFF dumps of hull surfaces.

pub mod certificate;
pub mod config;
pub mod describe;
pub mod experiments;
pub mod suite;

use std::path::{Path, PathBuf};

pub use certificate::{Certificate, Status, Verdict};
pub use config::{ExperimentConfig, Kind};
pub use experiments::Outcome;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] adslab_core::Error),
    #[error("io error: {0}")]
    Io(String),
}

impl RunError {
    pub fn status(&self) -> Status {
        match self {
            RunError::Core(adslab_core::Error::RankAmbiguous { .. }) => Status::RankAmbiguous,
            _ => Status::Error,
        }
    }
}

/// Runs the experiment and wraps the result, or the error, in a certificate.
pub fn certify(cfg: &ExperimentConfig) -> (Certificate, Outcome) {
    let kind = cfg.kind.unwrap_or(Kind::Suite);
    let (outcome, status, error) = match experiments::run(cfg) {
        Ok(o) => {
            let status = if o.passed() { Status::Pass } else { Status::Fail };
            (o, status, None)
        }
        Err(e) => (Outcome::default(), e.status(), Some(e.to_string())),
    };
    let cert = Certificate {
        tool: certificate::TOOL.into(),
        version: certificate::VERSION.into(),
        kind,
        seed: cfg.seed,
        tolerances: cfg.tolerances().into(),
        config: cfg.clone(),
        status,
        error,
        verdicts: outcome.verdicts.clone(),
        results: serde_json::Value::Object(outcome.results.clone()),
    };
    (cert, outcome)
}

/// Writes the enabled artifacts into the output directory and returns their paths.
pub fn write_artifacts(cert: &Certificate, outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let out = &cert.config.output;
    let stem = cert.kind.name();
    let mut written = Vec::new();
    if out.json {
        let path = dir.join(format!("{stem}.json"));
        certificate::write_atomic(&path, &cert.to_json())?;
        written.push(path);
    }
    if out.csv {
        let path = dir.join(format!("{stem}.csv"));
        certificate::write_atomic(&path, &cert.to_csv()?)?;
        written.push(path);
    }
    if out.off {
        for (name, surface) in &outcome.surfaces {
            let path = dir.join(format!("{stem}_{name}.off"));
            certificate::write_atomic(&path, &certificate::off_dump(surface))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// JSON schemas of the configuration file and of certificates.
pub fn config_schema() -> String {
    serde_json::to_string_pretty(&schemars::schema_for!(ExperimentConfig)).expect("schema serializes")
}

pub fn certificate_schema() -> String {
    serde_json::to_string_pretty(&schemars::schema_for!(Certificate)).expect("schema serializes")
}
