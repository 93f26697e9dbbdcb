//! Configuration-driven runs that write CSV tables and gnuplot scripts.

mod config;
mod output;
mod plot;
mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{
    BathConfig, FiniteBathSection, LorentzianSection, NamiConfig, PhysicsConfig, RunConfig, ScanConfig, Scenario,
    TimesConfig, TrajectoryConfig, TrajectoryStateConfig, WignerConfig,
};
pub use output::{format_value, Provenance, ScanResult};
pub use plot::{emit_plot_script, layout_of, PlotLayout};
pub use scenarios::compute;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("output directory {0} does not exist")]
    MissingOutputDir(PathBuf),
    #[error("unknown column layout `{0}`")]
    UnknownLayout(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Physics(#[from] crate::Error),
}

impl RunError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) | RunError::Invalid { .. } => 2,
            _ => 1,
        }
    }
}

/// Reads and validates a config file, applying a seed override.
pub fn load_config(path: &Path, seed: Option<u64>) -> Result<RunConfig, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Parse(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::from_toml(&text)?;
    if seed.is_some() {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// SHA-256 of the normalized configuration, seed included.
pub fn config_hash(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(cfg.to_toml().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn provenance(cfg: &RunConfig) -> Provenance {
    Provenance { config_hash: config_hash(cfg), seed: cfg.seed.unwrap_or(0), version: VERSION.to_string() }
}

/// Runs `cfg` and writes `<prefix>_<table>.csv` (plus `.gp` where a plot
/// layout exists) into `out_dir`. Returns the written paths.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    cfg.validate()?;
    if !out_dir.is_dir() {
        return Err(RunError::MissingOutputDir(out_dir.to_path_buf()));
    }
    let tables = compute(cfg)?;
    let prov = provenance(cfg);
    let prefix = cfg.prefix();
    let mut written = Vec::new();
    for t in &tables {
        let csv_name = format!("{prefix}_{}.csv", t.name);
        let path = out_dir.join(&csv_name);
        fs::write(&path, t.to_csv(&prov))?;
        written.push(path);
        if layout_of(&t.columns).is_some() {
            let gp = out_dir.join(format!("{prefix}_{}.gp", t.name));
            fs::write(&gp, emit_plot_script(t, &csv_name)?)?;
            written.push(gp);
        }
    }
    Ok(written)
}
