use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sgp_core::data::{delimiter_for, fetch_pmlb, gen_synthetic, read_table, write_csv, SyntheticKind};
use sgp_core::evolve::predict;
use sgp_core::tree::{parse_model, validate};

use sgp_cli::bench::{parse_results, run_bench, summarize, write_outputs, write_summaries, BenchOptions};
use sgp_cli::boundary::{bounds_from_data, parse_bounds, BoundaryGrid};
use sgp_cli::source::{resolve, DEFAULT_TARGET};
use sgp_cli::{build_config, read_to_string, write_file, Algo, CliError, FAST_RUNS};

#[derive(Parser)]
#[command(
    name = "sgp",
    version,
    about = "Evolve logical-tree binary classifiers with GP and soft GP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download PMLB datasets into the local cache.
    Fetch {
        #[arg(required = true)]
        names: Vec<String>,
        #[arg(long, default_value = ".pmlb")]
        cache: PathBuf,
    },
    /// Write a synthetic 2D dataset as CSV.
    Synth {
        #[arg(long)]
        kind: SyntheticKind,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fit a classifier on a whole dataset and write the model.
    Train {
        #[arg(long, value_parser = parse_algo)]
        algo: Algo,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        evo: EvoArgs,
        #[arg(short, long, visible_alias = "model-out")]
        out: PathBuf,
    },
    /// Label every row of a dataset with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Delimited file; a column named like `--target` is ignored.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = DEFAULT_TARGET)]
        target: String,
        /// Defaults to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Repeated train/test benchmark of GP and SGP.
    Bench {
        /// Dataset files, `synth:<kind>:<n>:<noise>:<seed>` specs or PMLB names.
        #[arg(required = true)]
        datasets: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "gp,sgp", value_parser = parse_algo)]
        algos: Vec<Algo>,
        /// Defaults to 20, or 5 with `--fast`.
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, default_value_t = 0.7)]
        ratio: f64,
        #[command(flatten)]
        evo: EvoArgs,
        /// Population 50, 30 generations, 5 runs.
        #[arg(long)]
        fast: bool,
        /// Write 0 for train_seconds so results.csv is reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, default_value = DEFAULT_TARGET)]
        target: String,
        #[arg(long, default_value = ".pmlb")]
        cache: PathBuf,
        #[arg(short, long, default_value = "bench-out")]
        out: PathBuf,
    },
    /// Evaluate a 2-feature model on a lattice and report the strict-border fraction.
    Boundary {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        /// `xmin,xmax,ymin,ymax`; defaults to the padded range of `--data`, else [-1.5, 1.5]².
        #[arg(long, allow_hyphen_values = true)]
        bounds: Option<String>,
        #[arg(long)]
        data: Option<String>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Re-render summary tables from a results.csv.
    Report {
        results: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Dataset file, `synth:<kind>:<n>:<noise>:<seed>` spec or PMLB name.
    #[arg(long)]
    data: String,
    #[arg(long, default_value = DEFAULT_TARGET)]
    target: String,
    #[arg(long, default_value = ".pmlb")]
    cache: PathBuf,
}

#[derive(Args)]
struct EvoArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Flat `key = value` file overriding the default configuration.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl EvoArgs {
    fn config_text(&self) -> Result<Option<String>, CliError> {
        self.config.as_deref().map(read_to_string).transpose()
    }
}

fn parse_algo(s: &str) -> Result<Algo, String> {
    Algo::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Fetch { names, cache } => {
            for name in names {
                let ds = fetch_pmlb(&name, &cache)?;
                let (neg, pos) = ds.class_counts();
                println!(
                    "{name}: {} rows, {} features, classes {neg}/{pos}",
                    ds.n_rows(),
                    ds.n_features()
                );
            }
            Ok(())
        }
        Command::Synth {
            kind,
            n,
            noise,
            seed,
            out,
        } => {
            let ds = gen_synthetic(kind, n, noise, seed)?;
            let mut buf = Vec::new();
            write_csv(&ds, &mut buf).map_err(|e| CliError::io(&out, e))?;
            write_file(&out, &buf)
        }
        Command::Train { algo, data, evo, out } => {
            let ds = resolve(&data.data, &data.target, &data.cache)?;
            let cfg = build_config(algo, evo.config_text()?.as_deref(), false, evo.seed)?;
            let cls = algo.fit(&ds, &cfg)?;
            write_file(&out, cls.model_text().as_bytes())?;
            eprintln!(
                "{}: train balanced accuracy {:.4} after {} generations, {} nodes",
                algo.as_str(),
                cls.train_fitness,
                cls.generations_run,
                cls.model.size()
            );
            Ok(())
        }
        Command::Predict {
            model,
            data,
            target,
            out,
        } => {
            let (tree, n_features) = load_model(&model)?;
            let table = read_table(&data, delimiter_for(&data))?;
            let (_, rows) = table.features_without(&target)?;
            let mut text = String::from("label\n");
            for row in &rows {
                text.push_str(if predict(&tree, n_features, row)? == 1 {
                    "1\n"
                } else {
                    "0\n"
                });
            }
            match out {
                Some(p) => write_file(&p, text.as_bytes()),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Bench {
            datasets,
            algos,
            runs,
            ratio,
            evo,
            fast,
            no_timing,
            target,
            cache,
            out,
        } => {
            let opts = BenchOptions {
                datasets,
                algos,
                runs: runs.unwrap_or(if fast { FAST_RUNS } else { 20 }),
                ratio,
                master_seed: evo.seed.unwrap_or(0),
                config_text: evo.config_text()?,
                fast,
                timing: !no_timing,
                target,
                cache,
            };
            let outcome = run_bench(&opts, |msg| eprintln!("{msg}"))?;
            write_outputs(&out, &outcome.results)?;
            for (ds, why) in &outcome.failures {
                eprintln!("failed: {ds}: {why}");
            }
            if outcome.datasets_failed > 0 {
                return Err(CliError::Partial {
                    failed: outcome.datasets_failed,
                    total: opts.datasets.len(),
                });
            }
            Ok(())
        }
        Command::Boundary {
            model,
            resolution,
            bounds,
            data,
            out,
        } => {
            let (tree, n_features) = load_model(&model)?;
            let (xr, yr) = match (bounds, data) {
                (Some(b), _) => parse_bounds(&b)?,
                (None, Some(d)) => bounds_from_data(&resolve(&d, DEFAULT_TARGET, Path::new(".pmlb"))?)?,
                (None, None) => ((-1.5, 1.5), (-1.5, 1.5)),
            };
            let grid = BoundaryGrid::compute(&tree, n_features, resolution, xr, yr)?;
            write_file(&out, grid.to_csv().as_bytes())?;
            println!("strict_border_fraction = {}", grid.strict_border_fraction());
            Ok(())
        }
        Command::Report { results, out } => {
            let rows = summarize(&parse_results(&read_to_string(&results)?)?);
            let dir = out.unwrap_or_else(|| results.parent().unwrap_or(Path::new(".")).to_path_buf());
            write_summaries(&dir, &rows)?;
            print!("{}", sgp_cli::bench::summary_markdown(&rows));
            Ok(())
        }
    }
}

fn load_model(path: &Path) -> Result<(sgp_core::ExprTree, usize), CliError> {
    let (tree, n_features) = parse_model(&read_to_string(path)?)?;
    let report = validate(&tree, n_features);
    if !report.is_valid() {
        return Err(CliError::InvalidModel(format!(
            "{}: invalid model: {report}",
            path.display()
        )));
    }
    Ok((tree, n_features))
}
