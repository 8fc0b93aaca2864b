//! Experiment front end: config parsing, run directories, and the command
//! implementations behind the `gqc` binary.
//!
//! Exit codes are a stable contract: 0 success, 2 configuration or input
//! validation failure, 3 training failure, 4 evaluation mismatch.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::data::{
    load_packed, load_tabular, normalize, split, write_packed, Dataset, SplitPlan,
};
use crate::error::Error;
use crate::eval::{
    fold_summary, fpr_inverse_at_tpr, latent_separation_report, roc, roc_band, RocCurve,
};
use crate::mat::Matrix;
use crate::models::{load_model, save_model, ModelKind, TrainedModel};
use crate::train::{
    grid_search, train_classical, train_gqc, train_two_step, GridAxis, Paradigm, TrainConfig,
    TrainRecord,
};

/// Command failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: invalid configuration or unreadable/invalid inputs.
    Config(String),
    /// Exit 3: training failed.
    Training(String),
    /// Exit 4: evaluation inputs are incompatible.
    Eval(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Training(_) => 3,
            CliError::Eval(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Training(msg) => write!(f, "training error: {msg}"),
            CliError::Eval(msg) => write!(f, "evaluation error: {msg}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config_err(err: impl fmt::Display) -> CliError {
    CliError::Config(err.to_string())
}

/// Dataset source and schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataConfig {
    pub path: PathBuf,
    #[serde(default = "default_label_column")]
    pub label_column: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_columns: Option<Vec<String>>,
    #[serde(default = "default_delimiter")]
    pub delimiter: String,
    /// High-level columns by name (delimited text input).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub btag_columns: Vec<String>,
    /// High-level columns by index (packed binary input).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub btag_indices: Vec<usize>,
    /// Cleared by the --no-btag flag; when false the btag columns are dropped.
    #[serde(default = "default_true")]
    pub include_btag: bool,
}

fn default_label_column() -> String {
    "label".to_string()
}

fn default_delimiter() -> String {
    ",".to_string()
}

fn default_true() -> bool {
    true
}

/// Whole-experiment configuration (one TOML file per run).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data: DataConfig,
    pub split: SplitPlan,
    pub train: TrainConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gridsearch: Option<GridSearchConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("runs/experiment"),
        }
    }
}

/// Candidate sets for the sequential search, in its fixed axis order
/// batch size → learning rate → repetitions → λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchConfig {
    #[serde(default = "default_batch_sizes")]
    pub batch_sizes: Vec<usize>,
    #[serde(default = "default_learning_rates")]
    pub learning_rates: Vec<f64>,
    #[serde(default = "default_reps")]
    pub reps: Vec<usize>,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
}

impl Default for GridSearchConfig {
    fn default() -> Self {
        Self {
            batch_sizes: default_batch_sizes(),
            learning_rates: default_learning_rates(),
            reps: default_reps(),
            lambdas: default_lambdas(),
        }
    }
}

fn default_batch_sizes() -> Vec<usize> {
    vec![128, 256, 512, 1024, 2048]
}

fn default_learning_rates() -> Vec<f64> {
    vec![1e-3, 1e-2, 1e-1]
}

fn default_reps() -> Vec<usize> {
    vec![2, 4, 8]
}

fn default_lambdas() -> Vec<f64> {
    vec![0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
}

/// Global flag overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub no_btag: bool,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn apply_overrides(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.train.seed = seed;
        }
        if let Some(out) = &overrides.out {
            self.output.dir = out.clone();
        }
        if overrides.no_btag {
            self.data.include_btag = false;
        }
        // Tuned defaults for fields the file may omit; the resolved snapshot
        // always records the filled-in values.
        if self.train.paradigm != Paradigm::Classical && self.train.vqc.is_none() {
            self.train.vqc = Some(crate::vqc::VqcConfig::default());
        }
        if self.train.paradigm == Paradigm::Gqc && self.train.lambda.is_none() {
            self.train.lambda = Some(crate::train::GQC_DEFAULT_LAMBDA);
        }
    }

    fn validate(&self) -> CliResult<()> {
        self.train.validate().map_err(config_err)?;
        if !self.data.path.exists() {
            return Err(CliError::Config(format!(
                "dataset file {} does not exist",
                self.data.path.display()
            )));
        }
        if self.data.delimiter.len() != 1 {
            return Err(CliError::Config(format!(
                "delimiter must be a single byte, got {:?}",
                self.data.delimiter
            )));
        }
        Ok(())
    }
}

fn is_packed(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("bin") | Some("gqcd")
    )
}

fn load_dataset(cfg: &DataConfig) -> CliResult<Dataset> {
    let ds = if is_packed(&cfg.path) {
        let ds = load_packed(&cfg.path).map_err(config_err)?;
        if cfg.btag_indices.is_empty() {
            ds
        } else {
            Dataset::new(
                ds.features().clone(),
                ds.labels().to_vec(),
                ds.feature_names().to_vec(),
                cfg.btag_indices.clone(),
            )
            .map_err(config_err)?
        }
    } else {
        load_tabular(
            &cfg.path,
            &cfg.label_column,
            cfg.feature_columns.as_deref(),
            cfg.delimiter.as_bytes()[0],
            &cfg.btag_columns,
        )
        .map_err(config_err)?
    };
    if cfg.include_btag {
        Ok(ds)
    } else {
        Ok(ds.drop_btag())
    }
}

fn write_metrics_csv(path: &Path, record: &TrainRecord) -> CliResult<()> {
    let mut body = String::from(
        "epoch,train_loss,val_loss,train_recon,train_class,val_recon,val_class\n",
    );
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for e in &record.epochs {
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.epoch,
            e.train_loss,
            e.val_loss,
            opt(e.train_recon),
            opt(e.train_class),
            opt(e.val_recon),
            opt(e.val_class),
        ));
    }
    fs::write(path, body).map_err(config_err)
}

/// Runs the configured paradigm: splits and normalizes the data, trains,
/// and writes the checkpoint, the per-epoch metrics log, the normalized
/// test folds, and a resolved-config snapshot into the output directory.
pub fn cmd_train(config_path: &Path, overrides: &Overrides) -> CliResult<()> {
    let mut config = ExperimentConfig::load(config_path)?;
    config.apply_overrides(overrides);
    config.validate()?;

    let ds = load_dataset(&config.data)?;
    let splits = split(&ds, &config.split).map_err(config_err)?;
    let (train_ds, stats) = normalize(&splits.train, None).map_err(config_err)?;
    let (val_ds, _) = normalize(&splits.val, Some(&stats)).map_err(config_err)?;
    let folds: Vec<Dataset> = splits
        .folds
        .iter()
        .map(|f| normalize(f, Some(&stats)).map(|(d, _)| d))
        .collect::<crate::error::Result<_>>()
        .map_err(config_err)?;

    let out = config.output.dir.clone();
    fs::create_dir_all(out.join("folds")).map_err(config_err)?;
    let snapshot = toml::to_string_pretty(&config)
        .map_err(|e| CliError::Config(format!("cannot serialize resolved config: {e}")))?;
    fs::write(out.join("resolved_config.toml"), snapshot).map_err(config_err)?;
    stats.save(&out.join("norm_stats.json")).map_err(config_err)?;
    for (i, fold) in folds.iter().enumerate() {
        write_packed(fold, &out.join("folds").join(format!("fold_{i}.bin")))
            .map_err(config_err)?;
    }

    let map_train_err = |e: Error| match e {
        Error::Training(msg) => CliError::Training(msg),
        Error::Numeric(msg) => CliError::Training(msg),
        other => CliError::Config(other.to_string()),
    };
    let (model, record, extra_record) = match config.train.paradigm {
        Paradigm::Classical => {
            let (net, record) = train_classical(&config.train, &train_ds, &val_ds)
                .map_err(map_train_err)?;
            (TrainedModel::Classical(net), record, None)
        }
        Paradigm::TwoStep => {
            let (autoencoder, theta, (ae_record, vqc_record)) =
                train_two_step(&config.train, &train_ds, &val_ds).map_err(map_train_err)?;
            let vqc = config.train.vqc.expect("validated");
            (
                TrainedModel::TwoStep {
                    autoencoder,
                    vqc,
                    theta,
                },
                vqc_record,
                Some(ae_record),
            )
        }
        Paradigm::Gqc => {
            let (model, record) =
                train_gqc(&config.train, &train_ds, &val_ds).map_err(map_train_err)?;
            (TrainedModel::Gqc(model), record, None)
        }
    };

    save_model(
        &out.join("checkpoint.bin"),
        &model,
        config.data.include_btag,
        config.train.seed,
    )
    .map_err(config_err)?;
    write_metrics_csv(&out.join("metrics.csv"), &record)?;
    if let Some(ae_record) = extra_record {
        write_metrics_csv(&out.join("metrics_ae.csv"), &ae_record)?;
    }

    println!(
        "trained {:?} for {} epoch(s); selected epoch {:?}; wall time {:.1}s",
        config.train.paradigm,
        record.epochs.len(),
        record.selected_epoch,
        record.wall_time_secs
    );
    println!("artifacts written to {}", out.display());
    Ok(())
}

fn find_folds(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut folds = Vec::new();
    let read = fs::read_dir(dir)
        .map_err(|e| CliError::Config(format!("cannot read folds dir {}: {e}", dir.display())))?;
    for entry in read {
        let path = entry.map_err(config_err)?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("fold_") && name.ends_with(".bin") {
            folds.push(path);
        }
    }
    folds.sort();
    if folds.is_empty() {
        return Err(CliError::Config(format!(
            "no fold_*.bin files in {}",
            dir.display()
        )));
    }
    Ok(folds)
}

fn write_roc_csv(path: &Path, curve: &RocCurve) -> CliResult<()> {
    let mut body = String::from("threshold,fpr,tpr\n");
    for ((t, f), tp) in curve.thresholds.iter().zip(&curve.fpr).zip(&curve.tpr) {
        body.push_str(&format!("{t},{f},{tp}\n"));
    }
    fs::write(path, body).map_err(config_err)
}

fn read_roc_csv(path: &Path) -> CliResult<RocCurve> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut thresholds = Vec::new();
    let mut fpr = Vec::new();
    let mut tpr = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let mut cells = line.split(',');
        let mut next = |what: &str| -> CliResult<f64> {
            let cell = cells
                .next()
                .ok_or_else(|| CliError::Config(format!("{}: line {} lacks {what}", path.display(), i + 1)))?;
            cell.parse::<f64>().map_err(|e| {
                CliError::Config(format!("{}: line {}: bad {what}: {e}", path.display(), i + 1))
            })
        };
        thresholds.push(next("threshold")?);
        fpr.push(next("fpr")?);
        tpr.push(next("tpr")?);
    }
    RocCurve::from_points(thresholds, fpr, tpr).map_err(config_err)
}

/// Per-fold metric record written by `cmd_eval`.
#[derive(Debug, Serialize, Deserialize)]
pub struct EvalReport {
    pub model_kind: ModelKind,
    pub tpr_target: f64,
    pub summary: crate::eval::FoldSummary,
}

/// Latent-separation report plus the mean ratio recomputed at other bin
/// counts, so binning sensitivity ships with the headline number.
#[derive(Debug, Serialize, Deserialize)]
pub struct KldReport {
    pub n_bins: usize,
    #[serde(flatten)]
    pub report: crate::eval::LatentSeparationReport,
    pub binning_sensitivity: Vec<(usize, Option<f64>)>,
}

/// Scores a checkpoint on every test fold and writes the fold summary and the
/// per-fold ROC points; optionally compares latent-space class separation
/// against a second checkpoint.
pub fn cmd_eval(
    checkpoint: &Path,
    folds_dir: &Path,
    kld_against: Option<&Path>,
    out_dir: Option<&Path>,
    tpr_target: f64,
    kld_bins: usize,
) -> CliResult<()> {
    let (meta, model) = load_model(checkpoint).map_err(config_err)?;
    let fold_paths = find_folds(folds_dir)?;
    let out = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| folds_dir.parent().unwrap_or(folds_dir).join("eval"));
    fs::create_dir_all(&out).map_err(config_err)?;

    let mut per_fold = Vec::new();
    let mut fold_data = Vec::new();
    for (i, path) in fold_paths.iter().enumerate() {
        let fold = load_packed(path).map_err(config_err)?;
        if fold.dim() != meta.feature_count {
            return Err(CliError::Eval(format!(
                "fold {} has {} features, checkpoint was trained with {}",
                path.display(),
                fold.dim(),
                meta.feature_count
            )));
        }
        let scores = model.score(fold.features()).map_err(|e| CliError::Eval(e.to_string()))?;
        let curve = roc(&scores, fold.labels()).map_err(|e| CliError::Eval(e.to_string()))?;
        let fpr_inv = fpr_inverse_at_tpr(&curve, tpr_target)
            .map_err(|e| CliError::Eval(e.to_string()))?;
        write_roc_csv(&out.join(format!("roc_fold_{i}.csv")), &curve)?;
        per_fold.push((curve.auc, fpr_inv));
        fold_data.push(fold);
    }
    let summary = fold_summary(&per_fold).map_err(|e| CliError::Eval(e.to_string()))?;
    let report = EvalReport {
        model_kind: meta.kind,
        tpr_target,
        summary,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Eval(format!("cannot serialize summary: {e}")))?;
    fs::write(out.join("summary.json"), json).map_err(config_err)?;

    // Plot-ready uncertainty band: fold curves interpolated onto a common
    // FPR grid, ±1 sample standard deviation.
    let curves: Vec<RocCurve> = (0..fold_paths.len())
        .map(|i| read_roc_csv(&out.join(format!("roc_fold_{i}.csv"))))
        .collect::<CliResult<_>>()?;
    let grid: Vec<f64> = (0..201).map(|i| i as f64 / 200.0).collect();
    let (band_mean, band_std) =
        roc_band(&curves, &grid).map_err(|e| CliError::Eval(e.to_string()))?;
    let mut band = String::from("fpr,tpr_mean,tpr_std\n");
    for i in 0..grid.len() {
        band.push_str(&format!("{},{},{}\n", grid[i], band_mean[i], band_std[i]));
    }
    fs::write(out.join("roc_band.csv"), band).map_err(config_err)?;

    println!(
        "eval of {:?}: auc {:.4} ± {:.4}, fpr^-1@{tpr_target} {:.4} ± {:.4} over {} fold(s)",
        report.model_kind,
        report.summary.auc_mean,
        report.summary.auc_std,
        report.summary.fpr_inv_mean,
        report.summary.fpr_inv_std,
        report.summary.auc.len()
    );

    if let Some(other_path) = kld_against {
        let (other_meta, other_model) = load_model(other_path).map_err(config_err)?;
        if other_meta.feature_count != meta.feature_count {
            return Err(CliError::Eval(format!(
                "checkpoints disagree on feature count: {} vs {}",
                meta.feature_count, other_meta.feature_count
            )));
        }
        let (a_sig, a_bkg) = latents_by_class(&model, &fold_data)?;
        let (b_sig, b_bkg) = latents_by_class(&other_model, &fold_data)?;
        let report = latent_separation_report(&a_sig, &a_bkg, &b_sig, &b_bkg, kld_bins)
            .map_err(|e| CliError::Eval(e.to_string()))?;
        let mut binning_sensitivity = Vec::new();
        for bins in [kld_bins / 2, kld_bins * 2] {
            if bins == 0 {
                continue;
            }
            let alt = latent_separation_report(&a_sig, &a_bkg, &b_sig, &b_bkg, bins)
                .map_err(|e| CliError::Eval(e.to_string()))?;
            binning_sensitivity.push((bins, alt.mean_ratio));
        }
        let report = KldReport {
            n_bins: kld_bins,
            report,
            binning_sensitivity,
        };
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Eval(format!("cannot serialize kld report: {e}")))?;
        fs::write(out.join("kld_report.json"), json).map_err(config_err)?;
        let report = report.report;
        match report.mean_ratio {
            Some(r) => println!(
                "latent separation ratio R = {r:.3} ({} feature(s) excluded)",
                report.excluded
            ),
            None => println!(
                "latent separation ratio undefined: all {} feature(s) excluded",
                report.excluded
            ),
        }
    }
    println!("reports written to {}", out.display());
    Ok(())
}

/// Latents over all folds concatenated, split into (signal, background) rows.
fn latents_by_class(model: &TrainedModel, folds: &[Dataset]) -> CliResult<(Matrix, Matrix)> {
    let mut signal_rows: Vec<Vec<f64>> = Vec::new();
    let mut background_rows: Vec<Vec<f64>> = Vec::new();
    for fold in folds {
        let z = model
            .latents(fold.features())
            .map_err(|e| CliError::Eval(e.to_string()))?;
        for (r, &y) in fold.labels().iter().enumerate() {
            let row = z.row(r).to_vec();
            if y == 1 {
                signal_rows.push(row);
            } else {
                background_rows.push(row);
            }
        }
    }
    let signal = Matrix::from_rows(&signal_rows).map_err(|e| CliError::Eval(e.to_string()))?;
    let background =
        Matrix::from_rows(&background_rows).map_err(|e| CliError::Eval(e.to_string()))?;
    Ok((signal, background))
}

fn eval_dir_of(run: &Path) -> PathBuf {
    let nested = run.join("eval");
    if nested.is_dir() {
        nested
    } else {
        run.to_path_buf()
    }
}

/// Emits the TPR difference (run A − run B) on a common FPR grid with the
/// fold-propagated uncertainty.
pub fn cmd_compare(runs: &[PathBuf], out_file: Option<&Path>, grid_points: usize) -> CliResult<()> {
    if runs.len() != 2 {
        return Err(CliError::Config(format!(
            "compare needs exactly two run directories, got {}",
            runs.len()
        )));
    }
    if grid_points < 2 {
        return Err(CliError::Config("grid needs at least 2 points".to_string()));
    }
    let mut curves: Vec<Vec<RocCurve>> = Vec::new();
    for run in runs {
        let dir = eval_dir_of(run);
        let mut fold_curves = Vec::new();
        for i in 0.. {
            let path = dir.join(format!("roc_fold_{i}.csv"));
            if !path.exists() {
                break;
            }
            fold_curves.push(read_roc_csv(&path)?);
        }
        if fold_curves.is_empty() {
            return Err(CliError::Config(format!(
                "no roc_fold_*.csv under {} (run eval first)",
                run.display()
            )));
        }
        curves.push(fold_curves);
    }
    if curves[0].len() != curves[1].len() {
        return Err(CliError::Eval(format!(
            "fold counts differ: {} vs {}",
            curves[0].len(),
            curves[1].len()
        )));
    }

    let grid: Vec<f64> = (0..grid_points)
        .map(|i| i as f64 / (grid_points - 1) as f64)
        .collect();
    let (mean_a, std_a) = roc_band(&curves[0], &grid).map_err(|e| CliError::Eval(e.to_string()))?;
    let (mean_b, std_b) = roc_band(&curves[1], &grid).map_err(|e| CliError::Eval(e.to_string()))?;

    let mut body = String::from("fpr,tpr_diff,tpr_diff_std\n");
    for i in 0..grid.len() {
        let diff = mean_a[i] - mean_b[i];
        let std = (std_a[i] * std_a[i] + std_b[i] * std_b[i]).sqrt();
        body.push_str(&format!("{},{},{}\n", grid[i], diff, std));
    }
    let out = out_file
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("compare.csv"));
    fs::write(&out, body).map_err(config_err)?;
    println!("difference curve written to {}", out.display());
    Ok(())
}

/// Generates a hidden-signal synthetic dataset and writes it in the packed
/// binary format (or delimited text for a .csv path).
pub fn cmd_synth(
    n_samples: usize,
    d_total: usize,
    d_signal: usize,
    noise_scale: f64,
    seed: u64,
    out: &Path,
) -> CliResult<()> {
    let ds = crate::data::synth_hidden_signal(n_samples, d_total, d_signal, noise_scale, seed)
        .map_err(config_err)?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(config_err)?;
        }
    }
    if is_packed(out) {
        write_packed(&ds, out).map_err(config_err)?;
    } else {
        let mut body = String::new();
        body.push_str(&ds.feature_names().join(","));
        body.push_str(",label\n");
        for r in 0..ds.len() {
            let row: Vec<String> = ds.features().row(r).iter().map(|v| v.to_string()).collect();
            body.push_str(&format!("{},{}\n", row.join(","), ds.labels()[r]));
        }
        fs::write(out, body).map_err(config_err)?;
    }
    println!(
        "wrote {} samples × {} features ({} signal) to {}",
        n_samples,
        d_total,
        d_signal,
        out.display()
    );
    Ok(())
}

/// Sequential hyperparameter search driven by the config's candidate lists;
/// writes the trial log and the winning configuration.
pub fn cmd_gridsearch(config_path: &Path, overrides: &Overrides) -> CliResult<()> {
    let mut config = ExperimentConfig::load(config_path)?;
    config.apply_overrides(overrides);
    config.validate()?;

    let ds = load_dataset(&config.data)?;
    let splits = split(&ds, &config.split).map_err(config_err)?;
    let (train_ds, stats) = normalize(&splits.train, None).map_err(config_err)?;
    let (val_ds, _) = normalize(&splits.val, Some(&stats)).map_err(config_err)?;

    let grid = config.gridsearch.clone().unwrap_or_default();
    let mut axes = vec![
        GridAxis::BatchSize(grid.batch_sizes.clone()),
        GridAxis::LearningRate(grid.learning_rates.clone()),
    ];
    if config.train.vqc.is_some() {
        axes.push(GridAxis::Reps(grid.reps.clone()));
    }
    if config.train.paradigm == Paradigm::Gqc {
        axes.push(GridAxis::Lambda(grid.lambdas.clone()));
    }

    let map_train_err = |e: Error| match e {
        Error::Training(msg) => CliError::Training(msg),
        Error::Numeric(msg) => CliError::Training(msg),
        other => CliError::Config(other.to_string()),
    };
    let (best, log) =
        grid_search(&config.train, &axes, &train_ds, &val_ds).map_err(map_train_err)?;

    let out = config.output.dir.clone();
    fs::create_dir_all(&out).map_err(config_err)?;
    let mut body = String::from("axis,candidate,val_accuracy,selected\n");
    for t in &log {
        body.push_str(&format!(
            "{},{},{},{}\n",
            t.axis, t.candidate, t.val_accuracy, t.selected
        ));
    }
    fs::write(out.join("trials.csv"), body).map_err(config_err)?;

    let mut best_config = config.clone();
    best_config.train = best;
    let toml_text = toml::to_string_pretty(&best_config)
        .map_err(|e| CliError::Config(format!("cannot serialize best config: {e}")))?;
    fs::write(out.join("best_config.toml"), toml_text).map_err(config_err)?;

    println!("{} trial(s); winners per axis:", log.len());
    for t in log.iter().filter(|t| t.selected) {
        println!("  {} = {} (val accuracy {:.4})", t.axis, t.candidate, t.val_accuracy);
    }
    println!("artifacts written to {}", out.display());
    Ok(())
}
