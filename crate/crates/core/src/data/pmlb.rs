use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;

use super::table::parse_table;
use super::{DataError, Dataset};

pub const PMLB_BASE_URL: &str = "https://github.com/EpistasisLab/pmlb/raw/master/datasets";

const MAX_DOWNLOAD: u64 = 256 * 1024 * 1024;

pub fn pmlb_url(base: &str, name: &str) -> String {
    format!("{}/{name}/{name}.tsv.gz", base.trim_end_matches('/'))
}

/// Fetches a PMLB dataset, caching the raw gzip file as
/// `<cache_dir>/<name>.tsv.gz`. A cache hit performs no network I/O.
pub fn fetch_pmlb(name: &str, cache_dir: &Path) -> Result<Dataset, DataError> {
    fetch_pmlb_from(PMLB_BASE_URL, name, cache_dir)
}

/// As [`fetch_pmlb`], against an arbitrary mirror of the PMLB layout.
pub fn fetch_pmlb_from(base_url: &str, name: &str, cache_dir: &Path) -> Result<Dataset, DataError> {
    if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
        return Err(DataError::UnknownDataset(name.to_string()));
    }
    let cached = cache_dir.join(format!("{name}.tsv.gz"));
    if cached.is_file() {
        let raw = fs::read(&cached).map_err(|source| DataError::Io {
            path: cached.clone(),
            source,
        })?;
        return decode(name, &raw);
    }

    let raw = download(&pmlb_url(base_url, name), name)?;
    let ds = decode(name, &raw)?;
    store_atomically(cache_dir, &cached, &raw)?;
    Ok(ds)
}

fn download(url: &str, name: &str) -> Result<Vec<u8>, DataError> {
    let response = ureq::get(url).call().map_err(|e| match e {
        ureq::Error::StatusCode(404) => DataError::UnknownDataset(name.to_string()),
        other => DataError::Network {
            name: name.to_string(),
            reason: other.to_string(),
        },
    })?;
    response
        .into_body()
        .with_config()
        .limit(MAX_DOWNLOAD)
        .read_to_vec()
        .map_err(|e| DataError::Network {
            name: name.to_string(),
            reason: e.to_string(),
        })
}

fn decode(name: &str, raw: &[u8]) -> Result<Dataset, DataError> {
    let mut tsv = Vec::new();
    GzDecoder::new(raw)
        .read_to_end(&mut tsv)
        .map_err(|e| DataError::Corrupt {
            name: name.to_string(),
            reason: e.to_string(),
        })?;
    parse_table(&tsv, b'\t', name)?.into_dataset(name, "target")
}

// Write to a process-unique temporary name, then rename into place, so
// concurrent fetchers never observe a partial file.
fn store_atomically(dir: &Path, dest: &PathBuf, raw: &[u8]) -> Result<(), DataError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| DataError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        dest.file_name().unwrap_or_default().to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, raw).map_err(io(&tmp))?;
    fs::rename(&tmp, dest).map_err(io(dest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use flate2::write::GzEncoder;
    use flate2::Compression;
    use std::io::Write;

    fn gz(text: &str) -> Vec<u8> {
        let mut e = GzEncoder::new(Vec::new(), Compression::default());
        e.write_all(text.as_bytes()).unwrap();
        e.finish().unwrap()
    }

    #[test]
    fn url_scheme() {
        assert_eq!(
            pmlb_url(PMLB_BASE_URL, "haberman"),
            "https://github.com/EpistasisLab/pmlb/raw/master/datasets/haberman/haberman.tsv.gz"
        );
    }

    #[test]
    fn warm_cache_needs_no_network() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("tiny.tsv.gz"),
            gz("a\tb\ttarget\n1\t2\t1\n3\t4\t2\n5\t6\t1\n"),
        )
        .unwrap();
        // an unroutable base url proves the cache path never touches the network
        let ds = fetch_pmlb_from("http://127.0.0.1:9", "tiny", dir.path()).unwrap();
        assert_eq!(ds.n_rows(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.labels(), &[0, 1, 0]);
    }

    #[test]
    fn corrupt_cache_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.tsv.gz"), b"not gzip at all").unwrap();
        assert!(matches!(
            fetch_pmlb_from("http://127.0.0.1:9", "bad", dir.path()),
            Err(DataError::Corrupt { .. })
        ));
    }

    #[test]
    fn cold_cache_without_network_fails() {
        let dir = tempfile::tempdir().unwrap();
        let err = fetch_pmlb_from("http://127.0.0.1:9", "haberman", dir.path()).unwrap_err();
        assert!(matches!(err, DataError::Network { .. }), "{err}");
        assert!(!dir.path().join("haberman.tsv.gz").exists());
    }

    #[test]
    fn path_like_names_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            fetch_pmlb("../etc", dir.path()),
            Err(DataError::UnknownDataset(_))
        ));
    }
}
