use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;

use super::{DataError, Dataset};

/// Header plus raw cells of a delimited file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Tab for `.tsv` / `.tsv.gz`, comma otherwise.
pub fn delimiter_for(path: &Path) -> u8 {
    let name = path.to_string_lossy().to_ascii_lowercase();
    if name.ends_with(".tsv") || name.ends_with(".tsv.gz") || name.ends_with(".tab") {
        b'\t'
    } else {
        b','
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> DataError + '_ {
    move |source| DataError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>, DataError> {
    let mut raw = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut raw))
        .map_err(io_err(path))?;
    if path.extension().is_some_and(|e| e == "gz") {
        let mut out = Vec::new();
        GzDecoder::new(&raw[..]).read_to_end(&mut out).map_err(io_err(path))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

/// Reads a delimited file with a header row; `.gz` files are decompressed.
pub fn read_table(path: &Path, delimiter: u8) -> Result<RawTable, DataError> {
    let bytes = read_bytes(path)?;
    parse_table(&bytes, delimiter, &path.display().to_string())
}

pub(crate) fn parse_table(bytes: &[u8], delimiter: u8, origin: &str) -> Result<RawTable, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| DataError::Malformed(format!("{origin}: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(DataError::Empty(origin.to_string()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DataError::Malformed(format!("{origin}: {e}")))?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(DataError::Empty(origin.to_string()));
    }
    Ok(RawTable { header, rows })
}

impl RawTable {
    /// Converts to a dataset. All non-target columns become features; the
    /// target must have exactly two distinct values, the larger mapping to 1.
    pub fn into_dataset(self, name: &str, target: &str) -> Result<Dataset, DataError> {
        let t = self
            .header
            .iter()
            .position(|h| h == target)
            .ok_or_else(|| DataError::MissingTarget(target.to_string()))?;
        let columns: Vec<String> = self
            .header
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != t)
            .map(|(_, h)| h.clone())
            .collect();
        let mut rows = Vec::with_capacity(self.rows.len());
        let mut raw_targets = Vec::with_capacity(self.rows.len());
        for (i, record) in self.rows.iter().enumerate() {
            let mut row = Vec::with_capacity(columns.len());
            for (j, cell) in record.iter().enumerate() {
                let v = cell.parse::<f64>().map_err(|_| DataError::NonNumeric {
                    row: i + 1,
                    column: self.header[j].clone(),
                    value: cell.clone(),
                })?;
                if j == t {
                    raw_targets.push(v);
                } else {
                    row.push(v);
                }
            }
            rows.push(row);
        }
        let mut distinct = raw_targets.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        if distinct.len() != 2 {
            return Err(DataError::NotBinary(distinct.len()));
        }
        let positive = distinct[1];
        let labels = raw_targets.iter().map(|&v| u8::from(v == positive)).collect();
        Dataset::new(name, columns, rows, labels)
    }

    /// Feature rows with the named column (if present) removed.
    pub fn features_without(&self, target: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), DataError> {
        let skip = self.header.iter().position(|h| h == target);
        let columns = self
            .header
            .iter()
            .enumerate()
            .filter(|&(j, _)| Some(j) != skip)
            .map(|(_, h)| h.clone())
            .collect();
        let mut rows = Vec::with_capacity(self.rows.len());
        for (i, record) in self.rows.iter().enumerate() {
            let mut row = Vec::with_capacity(record.len());
            for (j, cell) in record.iter().enumerate() {
                if Some(j) == skip {
                    continue;
                }
                row.push(cell.parse::<f64>().map_err(|_| DataError::NonNumeric {
                    row: i + 1,
                    column: self.header[j].clone(),
                    value: cell.clone(),
                })?);
            }
            rows.push(row);
        }
        Ok((columns, rows))
    }
}

/// Loads a labelled dataset from a delimited (optionally gzipped) file.
pub fn load_table(path: &Path, delimiter: u8, target: &str) -> Result<Dataset, DataError> {
    let name = path
        .file_name()
        .map(|f| f.to_string_lossy())
        .unwrap_or_default()
        .split('.')
        .next()
        .unwrap_or_default()
        .to_string();
    read_table(path, delimiter)?.into_dataset(&name, target)
}

/// Writes `x0..,target` style CSV using the dataset's own column names.
pub fn write_csv<W: Write>(ds: &Dataset, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = ds.columns.iter().map(String::as_str).collect();
    header.push("target");
    w.write_record(&header)?;
    for (row, label) in ds.rows().zip(ds.labels()) {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(label.to_string());
        w.write_record(&rec)?;
    }
    w.flush()
}
