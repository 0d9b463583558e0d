//! Config-driven front end: runs one experiment per invocation and writes
//! `manifest.json`, `summary.json`, per-check CSVs and `plotdata.csv`.

pub mod analytic;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;

use std::path::{Path, PathBuf};

use serde_json::json;

pub use config::{ExperimentConfig, Kind};
pub use error::{CliError, CliResult};
pub use run::{Check, Outcome};

pub const DEFAULT_OUT: &str = "dplab-out";

/// Command-line overrides applied on top of the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub refine: Option<usize>,
    pub strict_pq: bool,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct RunSummary {
    pub out: PathBuf,
    pub outcome: Outcome,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.outcome.passed()
    }
}

pub fn execute(kind: Kind, config: &Path, o: &Overrides) -> CliResult<RunSummary> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(k) = o.refine {
        cfg.domain.refine = k;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    let out =
        o.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    cfg.out = Some(out.display().to_string());
    let resolved = cfg.resolve(kind, o.strict_pq)?;
    let outcome = run::run(&resolved)?;

    let mut dir = output::OutDir::create(&out)?;
    for (name, table) in &outcome.tables {
        dir.write_csv(name, table)?;
    }
    dir.write_json(
        "summary.json",
        &json!({
            "kind": kind,
            "passed": outcome.passed(),
            "checks": outcome.checks,
            "details": outcome.details,
        }),
    )?;
    plot::emit_plotdata(dir.path())?;
    let mut files: Vec<String> = dir.written().to_vec();
    files.push(plot::PLOTDATA.to_string());
    dir.write_json(
        "manifest.json",
        &json!({
            "tool": "dplab",
            "version": env!("CARGO_PKG_VERSION"),
            "kind": kind,
            "config": resolved.config,
            "outputs": files,
        }),
    )?;
    Ok(RunSummary { out, outcome })
}
