//! Turns a dataset argument into a [`Dataset`].
//!
//! Accepted forms, tried in order:
//! - an existing file (`.csv`, `.tsv`, optionally `.gz`) with a target column;
//! - `synth:<kind>:<n>:<noise>:<seed>`, e.g. `synth:circles:200:0.1:7`;
//! - anything else is a PMLB dataset name, fetched through the cache.

use std::path::Path;

use sgp_core::data::{delimiter_for, fetch_pmlb, gen_synthetic, load_table, SyntheticKind};
use sgp_core::Dataset;

use crate::CliError;

pub const DEFAULT_TARGET: &str = "target";

pub fn resolve(arg: &str, target: &str, cache: &Path) -> Result<Dataset, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(load_table(path, delimiter_for(path), target)?);
    }
    if let Some(rest) = arg.strip_prefix("synth:") {
        return synth(rest);
    }
    Ok(fetch_pmlb(arg, cache)?)
}

fn synth(spec: &str) -> Result<Dataset, CliError> {
    let bad = || CliError::Usage(format!("expected synth:<kind>:<n>:<noise>:<seed>, got `synth:{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [kind, n, noise, seed] = parts[..] else {
        return Err(bad());
    };
    let kind: SyntheticKind = kind.parse()?;
    let n = n.parse().map_err(|_| bad())?;
    let noise = noise.parse().map_err(|_| bad())?;
    let seed = seed.parse().map_err(|_| bad())?;
    let mut ds = gen_synthetic(kind, n, noise, seed)?;
    ds.name = format!("{}_{n}_{noise}_{seed}", kind.as_str());
    Ok(ds)
}

/// Short name used in result tables.
pub fn display_name(arg: &str, ds: &Dataset) -> String {
    if arg.starts_with("synth:") || Path::new(arg).is_file() {
        ds.name.clone()
    } else {
        arg.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sgp_core::DataError;

    #[test]
    fn synth_spec() {
        let ds = resolve("synth:moons:40:0.2:3", DEFAULT_TARGET, Path::new("unused")).unwrap();
        assert_eq!(ds.n_rows(), 40);
        assert_eq!(ds.name, "moons_40_0.2_3");
        assert!(matches!(
            resolve("synth:moons:40", DEFAULT_TARGET, Path::new("unused")),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            resolve("synth:spiral:40:0.1:1", DEFAULT_TARGET, Path::new("unused")),
            Err(CliError::Data(DataError::InvalidKind(_)))
        ));
    }

    #[test]
    fn file_source() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("toy.csv");
        std::fs::write(&p, "a,b,target\n0,1,0\n1,0,1\n").unwrap();
        let ds = resolve(p.to_str().unwrap(), DEFAULT_TARGET, dir.path()).unwrap();
        assert_eq!((ds.n_rows(), ds.n_features()), (2, 2));
        assert_eq!(display_name(p.to_str().unwrap(), &ds), "toy");
    }
}
