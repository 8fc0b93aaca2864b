//! End-to-end runs of the `gqc` binary: exit codes, run-directory artifacts,
//! and the eval/compare pipeline.

use std::path::Path;
use std::process::{Command, Output};

fn gqc(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqc"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary should launch")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no exit code")
}

fn write_config(path: &Path, data: &Path, out: &Path, paradigm: &str, extra: &str) {
    let config = format!(
        r#"
[data]
path = {data:?}

[split]
train_size = 160
val_size = 40
test_fold_size = 40
n_folds = 2
seed = 3

[train]
paradigm = "{paradigm}"
batch_size = 32
learning_rate = 0.01
epochs = 2
seed = 4
{extra}

[output]
dir = {out:?}
"#
    );
    std::fs::write(path, config).unwrap();
}

const VQC_SECTION: &str = "lambda = 0.7\n\n[train.vqc]\nn_qubits = 2\nsegments = 2\nreps = 1\n";
const TWO_STEP_SECTION: &str =
    "ae_epochs = 2\n\n[train.vqc]\nn_qubits = 2\nsegments = 2\nreps = 1\n";

#[test]
fn full_pipeline_train_eval_compare() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();

    // Dataset.
    let synth = gqc(
        &[
            "synth",
            "--file",
            "data.bin",
            "--samples",
            "320",
            "--features",
            "10",
            "--signal",
            "2",
            "--noise-scale",
            "5.0",
            "--gen-seed",
            "7",
        ],
        root,
    );
    assert_eq!(exit_code(&synth), 0, "{synth:?}");
    assert!(root.join("data.bin").exists());

    // Train the joint model.
    write_config(
        &root.join("gqc.toml"),
        &root.join("data.bin"),
        &root.join("run_gqc"),
        "gqc",
        VQC_SECTION,
    );
    let train = gqc(&["train", "gqc.toml"], root);
    assert_eq!(exit_code(&train), 0, "{train:?}");
    for artifact in [
        "run_gqc/checkpoint.bin",
        "run_gqc/metrics.csv",
        "run_gqc/resolved_config.toml",
        "run_gqc/norm_stats.json",
        "run_gqc/folds/fold_0.bin",
        "run_gqc/folds/fold_1.bin",
    ] {
        assert!(root.join(artifact).exists(), "missing {artifact}");
    }

    // Train the two-step baseline on the same data.
    write_config(
        &root.join("two_step.toml"),
        &root.join("data.bin"),
        &root.join("run_two_step"),
        "two_step",
        TWO_STEP_SECTION,
    );
    let train2 = gqc(&["train", "two_step.toml"], root);
    assert_eq!(exit_code(&train2), 0, "{train2:?}");
    assert!(root.join("run_two_step/metrics_ae.csv").exists());

    // Evaluate both, with the latent-separation report on the pair.
    let eval = gqc(
        &[
            "eval",
            "run_gqc/checkpoint.bin",
            "run_gqc/folds",
            "--kld",
            "run_two_step/checkpoint.bin",
        ],
        root,
    );
    assert_eq!(exit_code(&eval), 0, "{eval:?}");
    let summary = std::fs::read_to_string(root.join("run_gqc/eval/summary.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(parsed["summary"]["auc"].as_array().unwrap().len(), 2);
    assert!(root.join("run_gqc/eval/roc_fold_0.csv").exists());
    assert!(root.join("run_gqc/eval/roc_fold_1.csv").exists());
    assert!(root.join("run_gqc/eval/kld_report.json").exists());

    let eval2 = gqc(
        &["eval", "run_two_step/checkpoint.bin", "run_two_step/folds"],
        root,
    );
    assert_eq!(exit_code(&eval2), 0, "{eval2:?}");

    // Compare the two evaluated runs.
    let compare = gqc(
        &["compare", "run_gqc", "run_two_step", "--file", "diff.csv"],
        root,
    );
    assert_eq!(exit_code(&compare), 0, "{compare:?}");
    assert!(root.join("diff.csv").exists());

    // Self-comparison is identically zero.
    let self_compare = gqc(
        &["compare", "run_gqc", "run_gqc", "--file", "self.csv"],
        root,
    );
    assert_eq!(exit_code(&self_compare), 0);
    let body = std::fs::read_to_string(root.join("self.csv")).unwrap();
    for line in body.lines().skip(1) {
        let diff: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(diff, 0.0, "self-difference must vanish: {line}");
    }
}

#[test]
fn invalid_lambda_exits_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    gqc(
        &["synth", "--file", "data.bin", "--samples", "320", "--features", "6", "--signal", "1"],
        root,
    );
    write_config(
        &root.join("bad.toml"),
        &root.join("data.bin"),
        &root.join("out"),
        "gqc",
        "lambda = 1.5\n\n[train.vqc]\nn_qubits = 2\nsegments = 2\nreps = 1\n",
    );
    let out = gqc(&["train", "bad.toml"], root);
    assert_eq!(exit_code(&out), 2, "{out:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("lambda"), "diagnostic must name the field: {stderr}");
}

#[test]
fn missing_dataset_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    write_config(
        &root.join("cfg.toml"),
        &root.join("absent.bin"),
        &root.join("out"),
        "gqc",
        VQC_SECTION,
    );
    let out = gqc(&["train", "cfg.toml"], root);
    assert_eq!(exit_code(&out), 2, "{out:?}");
}

#[test]
fn divergent_training_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    gqc(
        &["synth", "--file", "data.bin", "--samples", "320", "--features", "6", "--signal", "1"],
        root,
    );
    write_config(
        &root.join("cfg.toml"),
        &root.join("data.bin"),
        &root.join("out"),
        "classical",
        "",
    );
    let text = std::fs::read_to_string(root.join("cfg.toml")).unwrap();
    std::fs::write(
        root.join("cfg.toml"),
        text.replace("learning_rate = 0.01", "learning_rate = 1e300"),
    )
    .unwrap();
    let out = gqc(&["train", "cfg.toml"], root);
    assert_eq!(exit_code(&out), 3, "{out:?}");
}

#[test]
fn feature_count_mismatch_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    gqc(
        &["synth", "--file", "wide.bin", "--samples", "320", "--features", "10", "--signal", "2"],
        root,
    );
    gqc(
        &["synth", "--file", "narrow.bin", "--samples", "320", "--features", "6", "--signal", "2"],
        root,
    );
    write_config(
        &root.join("wide.toml"),
        &root.join("wide.bin"),
        &root.join("run_wide"),
        "gqc",
        VQC_SECTION,
    );
    write_config(
        &root.join("narrow.toml"),
        &root.join("narrow.bin"),
        &root.join("run_narrow"),
        "gqc",
        VQC_SECTION,
    );
    assert_eq!(exit_code(&gqc(&["train", "wide.toml"], root)), 0);
    assert_eq!(exit_code(&gqc(&["train", "narrow.toml"], root)), 0);

    // Checkpoint trained on 10 features scored on 6-feature folds.
    let out = gqc(
        &["eval", "run_wide/checkpoint.bin", "run_narrow/folds"],
        root,
    );
    assert_eq!(exit_code(&out), 4, "{out:?}");
}

#[test]
fn compare_with_one_run_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = gqc(&["compare", "only_one"], dir.path());
    assert_eq!(exit_code(&out), 2, "{out:?}");
}

#[test]
fn gridsearch_writes_trial_log() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    gqc(
        &["synth", "--file", "data.bin", "--samples", "320", "--features", "6", "--signal", "1"],
        root,
    );
    let config = format!(
        r#"
[data]
path = {:?}

[split]
train_size = 160
val_size = 40
test_fold_size = 40
n_folds = 2
seed = 3

[train]
paradigm = "classical"
batch_size = 32
learning_rate = 0.01
epochs = 1
seed = 4

[output]
dir = {:?}

[gridsearch]
batch_sizes = [32, 64]
learning_rates = [0.01, 0.1]
"#,
        root.join("data.bin"),
        root.join("search")
    );
    std::fs::write(root.join("grid.toml"), config).unwrap();
    let out = gqc(&["gridsearch", "grid.toml"], root);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let trials = std::fs::read_to_string(root.join("search/trials.csv")).unwrap();
    // Sequential search: 2 + 2 trials plus the header line.
    assert_eq!(trials.lines().count(), 1 + 4);
    assert!(root.join("search/best_config.toml").exists());
}

#[test]
fn no_btag_flag_drops_columns() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    // Delimited input with named btag columns.
    let mut body = String::from("k1,k2,k3,b1,b2,label\n");
    let mut state = 17u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 32) as f64) / (u32::MAX as f64)
    };
    for i in 0..240 {
        body.push_str(&format!(
            "{},{},{},{},{},{}\n",
            next(),
            next(),
            next(),
            next(),
            next(),
            i % 2
        ));
    }
    std::fs::write(root.join("data.csv"), body).unwrap();
    let config = format!(
        r#"
[data]
path = {:?}
label_column = "label"
btag_columns = ["b1", "b2"]

[split]
train_size = 120
val_size = 40
test_fold_size = 30
n_folds = 2
seed = 3

[train]
paradigm = "classical"
batch_size = 32
learning_rate = 0.01
epochs = 1
seed = 4

[output]
dir = {:?}
"#,
        root.join("data.csv"),
        root.join("run_nb")
    );
    std::fs::write(root.join("cfg.toml"), config).unwrap();
    let out = gqc(&["--no-btag", "train", "cfg.toml"], root);
    assert_eq!(exit_code(&out), 0, "{out:?}");

    // Folds carry only the 3 kinematic columns.
    let fold = gqc_core::data::load_packed(&root.join("run_nb/folds/fold_0.bin")).unwrap();
    assert_eq!(fold.dim(), 3);
    let (_, model) = gqc_core::models::load_model(&root.join("run_nb/checkpoint.bin")).unwrap();
    assert_eq!(model.feature_count(), 3);
}
