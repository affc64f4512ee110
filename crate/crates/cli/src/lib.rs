//! Library side of the `sgp` binary: dataset resolution, the benchmark
//! harness, report rendering and decision-boundary grids.

pub mod bench;
pub mod boundary;
pub mod source;

use std::io;
use std::path::{Path, PathBuf};

use sgp_core::evolve::{ConfigError, EvolveError};
use sgp_core::tree::ParseError;
use sgp_core::{DataError, EvolutionConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("model: {0}")]
    Model(#[from] ParseError),
    #[error("{0}")]
    InvalidModel(String),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{failed} of {total} datasets failed")]
    Partial { failed: usize, total: usize },
}

impl CliError {
    /// 1 usage, 2 data, 3 partial benchmark failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Evolve(EvolveError::Config(_)) => 1,
            CliError::Data(_)
            | CliError::Model(_)
            | CliError::InvalidModel(_)
            | CliError::Evolve(_)
            | CliError::Io { .. } => 2,
            CliError::Partial { .. } => 3,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Which evolution loop to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algo {
    Gp,
    Sgp,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Gp => "gp",
            Algo::Sgp => "sgp",
        }
    }

    pub fn parse(s: &str) -> Result<Algo, CliError> {
        match s {
            "gp" => Ok(Algo::Gp),
            "sgp" => Ok(Algo::Sgp),
            other => Err(CliError::Usage(format!(
                "unknown algorithm `{other}` (expected gp or sgp)"
            ))),
        }
    }

    pub fn default_config(self) -> EvolutionConfig {
        match self {
            Algo::Gp => EvolutionConfig::gp_default(),
            Algo::Sgp => EvolutionConfig::sgp_default(),
        }
    }

    pub fn fit(self, train: &sgp_core::Dataset, cfg: &EvolutionConfig) -> Result<sgp_core::Classifier, EvolveError> {
        match self {
            Algo::Gp => sgp_core::fit_gp(train, cfg),
            Algo::Sgp => sgp_core::fit_sgp(train, cfg),
        }
    }
}

/// Reduced budget for quick benchmark passes.
pub fn fast_overrides(cfg: EvolutionConfig) -> EvolutionConfig {
    EvolutionConfig {
        population_size: 50,
        max_generation: 30,
        ..cfg
    }
}

/// Runs used by `bench --fast`.
pub const FAST_RUNS: usize = 5;

/// Builds the configuration for `algo`: defaults, then the optional config
/// file, then `--fast`, then an explicit seed.
pub fn build_config(
    algo: Algo,
    config_text: Option<&str>,
    fast: bool,
    seed: Option<u64>,
) -> Result<EvolutionConfig, CliError> {
    let mut cfg = algo.default_config();
    if let Some(text) = config_text {
        cfg.apply_text(text)?;
    }
    if fast {
        cfg = fast_overrides(cfg);
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
