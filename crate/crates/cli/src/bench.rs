//! Repeated train/test benchmark over datasets and algorithms, and the
//! summary tables rendered from its results.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sgp_core::data::shuffle_split;
use sha2::{Digest, Sha256};

use crate::source::{display_name, resolve};
use crate::{build_config, write_file, Algo, CliError};

pub const RESULTS_HEADER: [&str; 6] = ["dataset", "run", "algo", "balanced_accuracy", "train_seconds", "seed"];

/// One fitted-and-scored cell of the benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub dataset: String,
    /// 1-based.
    pub run: usize,
    pub algo: Algo,
    pub balanced_accuracy: f64,
    pub train_seconds: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub datasets: Vec<String>,
    pub algos: Vec<Algo>,
    pub runs: usize,
    pub ratio: f64,
    pub master_seed: u64,
    pub config_text: Option<String>,
    pub fast: bool,
    /// When false, `train_seconds` is written as 0 so outputs are byte-stable.
    pub timing: bool,
    pub target: String,
    pub cache: PathBuf,
}

#[derive(Debug, Default)]
pub struct BenchOutcome {
    pub results: Vec<BenchResult>,
    /// `(dataset, reason)` for every skipped cell or dataset.
    pub failures: Vec<(String, String)>,
    pub datasets_failed: usize,
}

/// Seed for one run, independent of which other datasets are benchmarked.
pub fn run_seed(master_seed: u64, dataset: &str, run: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update((dataset.len() as u64).to_le_bytes());
    h.update(dataset.as_bytes());
    h.update((run as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Runs every dataset × run × algorithm cell in order. Failing cells and
/// datasets are recorded and skipped.
pub fn run_bench(opts: &BenchOptions, mut progress: impl FnMut(&str)) -> Result<BenchOutcome, CliError> {
    let mut configs = Vec::new();
    for &algo in &opts.algos {
        configs.push((algo, build_config(algo, opts.config_text.as_deref(), opts.fast, None)?));
    }
    let mut out = BenchOutcome::default();
    for arg in &opts.datasets {
        let ds = match resolve(arg, &opts.target, &opts.cache) {
            Ok(ds) => ds,
            Err(e) => {
                progress(&format!("{arg}: {e}"));
                out.failures.push((arg.clone(), e.to_string()));
                out.datasets_failed += 1;
                continue;
            }
        };
        let name = display_name(arg, &ds);
        let before = out.results.len();
        for run in 1..=opts.runs {
            let seed = run_seed(opts.master_seed, &name, run);
            let split = match shuffle_split(&ds, opts.ratio, seed) {
                Ok(s) => s,
                Err(e) => {
                    out.failures.push((name.clone(), format!("run {run}: {e}")));
                    continue;
                }
            };
            for (algo, cfg) in &configs {
                let cfg = cfg.with_seed(seed);
                let start = Instant::now();
                let scored = algo.fit(&split.train, &cfg).and_then(|cls| cls.score(&split.test));
                let secs = start.elapsed().as_secs_f64();
                match scored {
                    Ok(acc) => {
                        progress(&format!("{name} run {run} {}: {acc:.4}", algo.as_str()));
                        out.results.push(BenchResult {
                            dataset: name.clone(),
                            run,
                            algo: *algo,
                            balanced_accuracy: acc,
                            train_seconds: if opts.timing { secs } else { 0.0 },
                            seed,
                        });
                    }
                    Err(e) => out
                        .failures
                        .push((name.clone(), format!("run {run} {}: {e}", algo.as_str()))),
                }
            }
        }
        if out.results.len() == before {
            out.datasets_failed += 1;
        }
    }
    Ok(out)
}

pub fn results_csv(results: &[BenchResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).expect("in-memory write");
    for r in results {
        let secs = if r.train_seconds == 0.0 {
            "0".to_string()
        } else {
            format!("{:.3}", r.train_seconds)
        };
        w.write_record([
            r.dataset.as_str(),
            &r.run.to_string(),
            r.algo.as_str(),
            &r.balanced_accuracy.to_string(),
            &secs,
            &r.seed.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn parse_results(text: &str) -> Result<Vec<BenchResult>, CliError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::Usage(format!("results: {e}")))?;
    if header.iter().ne(RESULTS_HEADER) {
        return Err(CliError::Usage(format!(
            "results: expected columns {}",
            RESULTS_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let bad = |what: &str| CliError::Usage(format!("results row {}: bad {what}", i + 1));
        let rec = rec.map_err(|e| CliError::Usage(format!("results row {}: {e}", i + 1)))?;
        out.push(BenchResult {
            dataset: rec[0].to_string(),
            run: rec[1].parse().map_err(|_| bad("run"))?,
            algo: Algo::parse(&rec[2])?,
            balanced_accuracy: rec[3].parse().map_err(|_| bad("balanced_accuracy"))?,
            train_seconds: rec[4].parse().map_err(|_| bad("train_seconds"))?,
            seed: rec[5].parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub algo: Algo,
    pub runs: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub stddev: f64,
}

/// Mean and spread per dataset × algorithm, datasets in first-seen order.
pub fn summarize(results: &[BenchResult]) -> Vec<SummaryRow> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, Algo), Vec<f64>> = BTreeMap::new();
    for r in results {
        let idx = match order.iter().position(|d| *d == r.dataset) {
            Some(i) => i,
            None => {
                order.push(&r.dataset);
                order.len() - 1
            }
        };
        groups.entry((idx, r.algo)).or_default().push(r.balanced_accuracy);
    }
    groups
        .into_iter()
        .map(|((idx, algo), xs)| {
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let stddev = if xs.len() > 1 {
                (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                dataset: order[idx].to_string(),
                algo,
                runs: xs.len(),
                mean,
                stddev,
            }
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["dataset", "algo", "runs", "mean", "stddev"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.dataset.as_str(),
            r.algo.as_str(),
            &r.runs.to_string(),
            &format!("{:.4}", r.mean),
            &format!("{:.4}", r.stddev),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Mean balanced accuracy with one column per dataset and one row per
/// algorithm. Each cell carries its rank within the column (1 = best).
pub fn summary_markdown(rows: &[SummaryRow]) -> String {
    let mut datasets: Vec<&str> = Vec::new();
    for r in rows {
        if !datasets.contains(&r.dataset.as_str()) {
            datasets.push(&r.dataset);
        }
    }
    let mut algos: Vec<Algo> = rows.iter().map(|r| r.algo).collect();
    algos.sort();
    algos.dedup();
    let mean_of = |d: &str, a: Algo| rows.iter().find(|r| r.dataset == d && r.algo == a).map(|r| r.mean);

    let mut s = String::from("Mean test balanced accuracy (rank within column).\n\n| algo |");
    for d in &datasets {
        let _ = write!(s, " {d} |");
    }
    s.push_str("\n|---|");
    s.push_str(&"---:|".repeat(datasets.len()));
    s.push('\n');
    for &a in &algos {
        let _ = write!(s, "| {} |", a.as_str());
        for d in &datasets {
            match mean_of(d, a) {
                Some(m) => {
                    let rank = 1 + algos.iter().filter_map(|&o| mean_of(d, o)).filter(|&o| o > m).count();
                    let _ = write!(s, " {m:.4} ({rank}) |");
                }
                None => s.push_str(" - |"),
            }
        }
        s.push('\n');
    }
    s
}

/// Writes `results.csv`, `summary.csv` and `summary.md` into `dir`.
pub fn write_outputs(dir: &Path, results: &[BenchResult]) -> Result<(), CliError> {
    let rows = summarize(results);
    write_file(&dir.join("results.csv"), results_csv(results).as_bytes())?;
    write_summaries(dir, &rows)
}

pub fn write_summaries(dir: &Path, rows: &[SummaryRow]) -> Result<(), CliError> {
    write_file(&dir.join("summary.csv"), summary_csv(rows).as_bytes())?;
    write_file(&dir.join("summary.md"), summary_markdown(rows).as_bytes())
}
