//! Command-line entry point for training, evaluating, and comparing the
//! compression+classification models.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use gqc_core::cli::{self, Overrides};

#[derive(Parser)]
#[command(
    name = "gqc",
    about = "Guided quantum compression experiments: train, evaluate, and compare models",
    version
)]
struct Cli {
    /// Override the training seed from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the output directory from the config file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Drop the high-level btag columns before training or generating folds.
    #[arg(long, global = true)]
    no_btag: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the paradigm configured in the experiment file.
    Train {
        /// Experiment configuration (TOML).
        config: PathBuf,
    },
    /// Score a checkpoint on test folds: fold summary JSON plus ROC CSVs.
    Eval {
        /// Model checkpoint written by `train`.
        checkpoint: PathBuf,
        /// Directory containing fold_*.bin files (written by `train`).
        folds: PathBuf,
        /// Second checkpoint for the latent-separation report
        /// (ratio = first / second).
        #[arg(long, value_name = "CHECKPOINT")]
        kld: Option<PathBuf>,
        /// TPR at which the inverse FPR is reported.
        #[arg(long, default_value_t = 0.8)]
        tpr_target: f64,
        /// Histogram bins for the latent KL divergences.
        #[arg(long, default_value_t = 60)]
        kld_bins: usize,
    },
    /// TPR difference of two evaluated runs on a common FPR grid.
    Compare {
        /// Exactly two run directories that have been evaluated.
        runs: Vec<PathBuf>,
        /// Output CSV path (default compare.csv).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Number of FPR grid points.
        #[arg(long, default_value_t = 201)]
        grid_points: usize,
    },
    /// Generate the hidden-signal synthetic dataset.
    Synth {
        /// Output path (.bin for packed binary, .csv for delimited text).
        #[arg(long, default_value = "synth.bin")]
        file: PathBuf,
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        features: usize,
        /// Number of low-variance class-carrying directions.
        #[arg(long, default_value_t = 2)]
        signal: usize,
        /// Nuisance-to-signal amplitude ratio.
        #[arg(long, default_value_t = 5.0)]
        noise_scale: f64,
        #[arg(long, default_value_t = 0)]
        gen_seed: u64,
    },
    /// Sequential hyperparameter search over the config's candidate lists.
    Gridsearch {
        /// Experiment configuration (TOML).
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out,
        no_btag: cli.no_btag,
    };
    let result = match cli.command {
        Command::Train { config } => cli::cmd_train(&config, &overrides),
        Command::Eval {
            checkpoint,
            folds,
            kld,
            tpr_target,
            kld_bins,
        } => cli::cmd_eval(
            &checkpoint,
            &folds,
            kld.as_deref(),
            overrides.out.as_deref(),
            tpr_target,
            kld_bins,
        ),
        Command::Compare {
            runs,
            file,
            grid_points,
        } => cli::cmd_compare(&runs, file.as_deref(), grid_points),
        Command::Synth {
            file,
            samples,
            features,
            signal,
            noise_scale,
            gen_seed,
        } => {
            let out = overrides.out.clone().map_or(file, |dir| dir.join("synth.bin"));
            cli::cmd_synth(
                samples,
                features,
                signal,
                noise_scale,
                overrides.seed.unwrap_or(gen_seed),
                &out,
            )
        }
        Command::Gridsearch { config } => cli::cmd_gridsearch(&config, &overrides),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
