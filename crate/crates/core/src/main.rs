use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use composer_style::bpnn::TrainConfig;
use composer_style::eval::{format_table, TableRow};
use composer_style::gbt::GbtParams;
use composer_style::pipeline::{
    default_styles, evaluate_model, extract_features, gen_synthetic, read_feature_csv, run_compare, scan_dataset,
    stratified_split, train_bpnn, train_gbt, write_feature_csv, write_roc_csv, CompareConfig, ModelFile,
    PipelineError, SplitSpec,
};

/// Composer-style classification from MIDI files.
#[derive(Parser)]
#[command(name = "composer-style", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the eight features of every piece under a dataset directory.
    Extract {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stratified train/test split of a feature CSV.
    Split {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        train_frac: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out_train: PathBuf,
        #[arg(long)]
        out_test: PathBuf,
    },
    /// Train one classifier on a feature CSV.
    Train {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        train: PathBuf,
        #[command(flatten)]
        gbt: GbtArgs,
        #[command(flatten)]
        mlp: MlpArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a trained model on a feature CSV.
    Evaluate {
        #[arg(long)]
        model_file: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        roc: PathBuf,
        /// FPR grid intervals for the macro ROC curve.
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Extract, split, train both classifiers, and write the comparison.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.9)]
        train_frac: f64,
        /// Seed for the split and both models.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        gbt: GbtArgs,
        #[command(flatten)]
        mlp: MlpArgs,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Write a synthetic five-style corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// Pieces per style.
        #[arg(long, default_value_t = 200)]
        pieces: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Gbt,
    Bpnn,
}

#[derive(Args)]
struct GbtArgs {
    #[arg(long, default_value_t = 100)]
    rounds: usize,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0.3)]
    eta: f64,
    /// Split-search threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl GbtArgs {
    fn params(&self, seed: u64) -> GbtParams {
        GbtParams {
            rounds: self.rounds,
            max_depth: self.depth,
            lambda: self.lambda,
            gamma: self.gamma,
            eta: self.eta,
            seed,
            workers: self.workers,
            ..GbtParams::default()
        }
    }
}

#[derive(Args)]
struct MlpArgs {
    #[arg(long, default_value_t = 16)]
    hidden: usize,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
}

impl MlpArgs {
    fn config(&self, seed: u64) -> TrainConfig {
        TrainConfig { learning_rate: self.lr, epochs: self.epochs, seed, hidden_size: self.hidden }
    }
}

fn write(path: &Path, text: &str) -> Result<(), PipelineError> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| PipelineError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn run(command: Command) -> Result<(), PipelineError> {
    match command {
        Command::Extract { data, out } => {
            let manifest = scan_dataset(&data)?;
            let rows = extract_features(&manifest)?;
            write_feature_csv(&out, &rows)?;
            println!("{} pieces, {} labels -> {}", rows.len(), manifest.labels.len(), out.display());
        }
        Command::Split { features, train_frac, seed, out_train, out_test } => {
            let rows = read_feature_csv(&features)?;
            let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
            let (train, test) = stratified_split(&labels, &SplitSpec { train_fraction: train_frac, seed })?;
            let pick = |idx: &[usize]| idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>();
            write_feature_csv(&out_train, &pick(&train))?;
            write_feature_csv(&out_test, &pick(&test))?;
            println!("{} train, {} test", train.len(), test.len());
        }
        Command::Train { model, train, gbt, mlp, seed, out } => {
            let rows = read_feature_csv(&train)?;
            let file = match model {
                ModelKind::Gbt => train_gbt(&rows, &gbt.params(seed))?,
                ModelKind::Bpnn => train_bpnn(&rows, &mlp.config(seed))?,
            };
            write(&out, &file.to_text())?;
            println!("{} trained on {} pieces -> {}", file.name(), rows.len(), out.display());
        }
        Command::Evaluate { model_file, test, report, roc, grid } => {
            let text = fs::read_to_string(&model_file)
                .map_err(|source| PipelineError::Io { path: model_file.clone(), source })?;
            let model = ModelFile::from_text(&text).map_err(|msg| PipelineError::Format { path: model_file, msg })?;
            let rows = read_feature_csv(&test)?;
            let r = evaluate_model(&model, &rows, grid)?;
            let table = format_table(&[TableRow::from_report(model.name(), &r)]);
            write(&report, &table)?;
            write_roc_csv(&roc, &r.roc)?;
            print!("{table}");
        }
        Command::Compare { data, out_dir, train_frac, seed, gbt, mlp, grid } => {
            let config = CompareConfig {
                data,
                out_dir: out_dir.clone(),
                gbt: gbt.params(seed),
                mlp: mlp.config(seed),
                split: SplitSpec { train_fraction: train_frac, seed },
                grid_size: grid,
            };
            let outcome = run_compare(&config)?;
            println!("{} train, {} test pieces; results in {}", outcome.train_size, outcome.test_size, out_dir.display());
            print!("{}", fs::read_to_string(out_dir.join("comparison.txt")).unwrap_or_default());
        }
        Command::Synth { out, pieces, seed } => {
            let manifest = gen_synthetic(&default_styles(), pieces, seed, &out)?;
            println!("{} pieces in {} styles -> {}", manifest.entries.len(), manifest.labels.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
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
