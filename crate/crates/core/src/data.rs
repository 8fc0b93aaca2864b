//! Dataset ingestion, min-max normalization, class-balanced splitting, and a
//! synthetic generator with a deliberately hidden, low-variance class signal.
//!
//! Two on-disk formats are supported. Delimited text: header row, one numeric
//! column per feature plus a label column. Packed binary (all integers
//! little-endian):
//!
//! ```text
//! offset 0   magic     4 bytes = "GQCD"
//!        4   version   u32 = 1
//!        8   rows M    u64
//!       16   cols D    u32
//!       20   features  M×D f32, row-major
//!        .   labels    M × u8
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Matrix;

pub const PACKED_MAGIC: &[u8; 4] = b"GQCD";

/// Feature matrix with binary labels and optional high-level column flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    btag_mask: Vec<usize>,
}

impl Dataset {
    pub fn new(
        features: Matrix,
        labels: Vec<u8>,
        feature_names: Vec<String>,
        btag_mask: Vec<usize>,
    ) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::Shape(format!(
                "{} labels for {} rows",
                labels.len(),
                features.rows()
            )));
        }
        if feature_names.len() != features.cols() {
            return Err(Error::Shape(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.cols()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&y| y > 1) {
            return Err(Error::Domain(format!("label {bad} outside {{0,1}}")));
        }
        let mut btag_mask = btag_mask;
        btag_mask.sort_unstable();
        btag_mask.dedup();
        if let Some(&bad) = btag_mask.iter().find(|&&i| i >= features.cols()) {
            return Err(Error::Index(format!(
                "btag index {bad} out of range for {} features",
                features.cols()
            )));
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            btag_mask,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn btag_mask(&self) -> &[usize] {
        &self.btag_mask
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    /// New dataset restricted to the given rows, in order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            btag_mask: self.btag_mask.clone(),
        }
    }

    /// Copy with the btag-flagged columns removed.
    pub fn drop_btag(&self) -> Dataset {
        if self.btag_mask.is_empty() {
            return self.clone();
        }
        let keep: Vec<usize> = (0..self.dim())
            .filter(|i| !self.btag_mask.contains(i))
            .collect();
        let mut features = Matrix::zeros(self.len(), keep.len());
        for r in 0..self.len() {
            let src = self.features.row(r);
            for (dst_c, &src_c) in keep.iter().enumerate() {
                features.set(r, dst_c, src[src_c]);
            }
        }
        Dataset {
            features,
            labels: self.labels.clone(),
            feature_names: keep.iter().map(|&i| self.feature_names[i].clone()).collect(),
            btag_mask: Vec::new(),
        }
    }

    fn class_indices(&self) -> (Vec<usize>, Vec<usize>) {
        let mut zeros = Vec::new();
        let mut ones = Vec::new();
        for (i, &y) in self.labels.iter().enumerate() {
            if y == 0 {
                zeros.push(i);
            } else {
                ones.push(i);
            }
        }
        (zeros, ones)
    }
}

/// Per-feature min/max fitted on a training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    pub names: Vec<String>,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl NormStats {
    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("stats serialization failed: {e}")))?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad stats file: {e}")))
    }
}

/// Loads a delimited text table with a header row.
///
/// `feature_columns = None` takes every non-label column in header order.
pub fn load_tabular(
    path: &Path,
    label_column: &str,
    feature_columns: Option<&[String]>,
    delimiter: u8,
    btag_columns: &[String],
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Parse(format!("cannot open {}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse(format!("bad header row: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();

    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::Schema(format!("missing label column {label_column:?}")))?;

    let feature_names: Vec<String> = match feature_columns {
        Some(cols) => cols.to_vec(),
        None => headers
            .iter()
            .filter(|h| h.as_str() != label_column)
            .cloned()
            .collect(),
    };
    let feature_idx: Vec<usize> = feature_names
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Schema(format!("missing feature column {name:?}")))
        })
        .collect::<Result<_>>()?;
    let btag_mask: Vec<usize> = btag_columns
        .iter()
        .map(|name| {
            feature_names
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Schema(format!("btag column {name:?} is not a feature")))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("row {}: {e}", row_no + 2)))?;
        let parse_cell = |idx: usize| -> Result<f64> {
            let cell = record.get(idx).ok_or_else(|| {
                Error::Parse(format!("row {}: missing column {idx}", row_no + 2))
            })?;
            cell.trim().parse::<f64>().map_err(|_| {
                Error::Parse(format!(
                    "row {}: non-numeric cell {cell:?} in column {:?}",
                    row_no + 2,
                    headers[idx]
                ))
            })
        };
        let label_value = parse_cell(label_idx)?;
        if label_value != 0.0 && label_value != 1.0 {
            return Err(Error::Domain(format!(
                "row {}: label {label_value} outside {{0,1}}",
                row_no + 2
            )));
        }
        labels.push(label_value as u8);
        rows.push(feature_idx.iter().map(|&i| parse_cell(i)).collect::<Result<_>>()?);
    }
    let features = Matrix::from_rows(&rows)?;
    Dataset::new(features, labels, feature_names, btag_mask)
}

/// Writes the packed binary format documented in the module header.
pub fn write_packed(ds: &Dataset, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(PACKED_MAGIC)?;
    w.write_all(&1u32.to_le_bytes())?;
    w.write_all(&(ds.len() as u64).to_le_bytes())?;
    w.write_all(&(ds.dim() as u32).to_le_bytes())?;
    for v in ds.features.data() {
        w.write_all(&(*v as f32).to_le_bytes())?;
    }
    w.write_all(ds.labels())?;
    w.flush()?;
    Ok(())
}

/// Reads the packed binary format. Feature names are generated as f0, f1, …
pub fn load_packed(path: &Path) -> Result<Dataset> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != PACKED_MAGIC {
        return Err(Error::Parse(format!(
            "bad dataset magic {magic:?} in {}",
            path.display()
        )));
    }
    let mut buf4 = [0u8; 4];
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf4)?;
    let version = u32::from_le_bytes(buf4);
    if version != 1 {
        return Err(Error::Parse(format!("unsupported dataset version {version}")));
    }
    r.read_exact(&mut buf8)?;
    let rows = u64::from_le_bytes(buf8) as usize;
    r.read_exact(&mut buf4)?;
    let cols = u32::from_le_bytes(buf4) as usize;
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        r.read_exact(&mut buf4)?;
        data.push(f32::from_le_bytes(buf4) as f64);
    }
    let mut labels = vec![0u8; rows];
    r.read_exact(&mut labels)?;
    let features = Matrix::from_vec(rows, cols, data)?;
    let names = (0..cols).map(|i| format!("f{i}")).collect();
    Dataset::new(features, labels, names, Vec::new())
}

/// Min-max normalization to [0,1].
///
/// With `stats = None` the min/max are fitted on `ds` (intended to be the
/// training split only) and a constant column is an error. With reused stats
/// the transform is applied as-is and out-of-range values are clipped.
pub fn normalize(ds: &Dataset, stats: Option<&NormStats>) -> Result<(Dataset, NormStats)> {
    let fitted;
    let stats = match stats {
        Some(s) => {
            if s.mins.len() != ds.dim() {
                return Err(Error::Shape(format!(
                    "stats cover {} features, dataset has {}",
                    s.mins.len(),
                    ds.dim()
                )));
            }
            s
        }
        None => {
            let mut mins = vec![f64::INFINITY; ds.dim()];
            let mut maxs = vec![f64::NEG_INFINITY; ds.dim()];
            for r in 0..ds.len() {
                for (c, &v) in ds.features.row(r).iter().enumerate() {
                    mins[c] = mins[c].min(v);
                    maxs[c] = maxs[c].max(v);
                }
            }
            for c in 0..ds.dim() {
                // NaN-tolerant: any non-increasing (or non-comparable) pair
                // means the column cannot be scaled.
                if maxs[c].partial_cmp(&mins[c]) != Some(std::cmp::Ordering::Greater) {
                    return Err(Error::DegenerateFeature(ds.feature_names[c].clone()));
                }
            }
            fitted = NormStats {
                names: ds.feature_names.clone(),
                mins,
                maxs,
            };
            &fitted
        }
    };
    let mut features = ds.features.clone();
    for r in 0..ds.len() {
        let row = features.row_mut(r);
        for (c, v) in row.iter_mut().enumerate() {
            let scaled = (*v - stats.mins[c]) / (stats.maxs[c] - stats.mins[c]);
            *v = scaled.clamp(0.0, 1.0);
        }
    }
    let normalized = Dataset {
        features,
        labels: ds.labels.clone(),
        feature_names: ds.feature_names.clone(),
        btag_mask: ds.btag_mask.clone(),
    };
    Ok((normalized, stats.clone()))
}

/// Sizes and seed for the train/validation/k-fold split. The defaults are
/// the full-scale protocol (20k train, 1.5k validation, five 20k folds);
/// desk-scale runs override them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    #[serde(default = "default_train_size")]
    pub train_size: usize,
    #[serde(default = "default_val_size")]
    pub val_size: usize,
    #[serde(default = "default_fold_size")]
    pub test_fold_size: usize,
    #[serde(default = "default_n_folds")]
    pub n_folds: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_train_size() -> usize {
    20_000
}

fn default_val_size() -> usize {
    1_500
}

fn default_fold_size() -> usize {
    20_000
}

fn default_n_folds() -> usize {
    5
}

/// Disjoint, class-balanced splits.
#[derive(Debug, Clone)]
pub struct Splits {
    pub train: Dataset,
    pub val: Dataset,
    pub folds: Vec<Dataset>,
}

/// Deterministic class-balanced split: each class is shuffled by the plan
/// seed, then train, validation, and the k test folds draw half their size
/// from each class queue (class 0 takes the extra sample of an odd size).
pub fn split(ds: &Dataset, plan: &SplitPlan) -> Result<Splits> {
    let (mut zeros, mut ones) = ds.class_indices();
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    zeros.shuffle(&mut rng);
    ones.shuffle(&mut rng);

    let sizes: Vec<usize> = std::iter::once(plan.train_size)
        .chain(std::iter::once(plan.val_size))
        .chain(std::iter::repeat_n(plan.test_fold_size, plan.n_folds))
        .collect();
    let need0: usize = sizes.iter().map(|s| s.div_ceil(2)).sum();
    let need1: usize = sizes.iter().map(|s| s / 2).sum();
    if zeros.len() < need0 || ones.len() < need1 {
        return Err(Error::Size(format!(
            "split plan needs {need0} class-0 and {need1} class-1 samples, dataset has {} and {}",
            zeros.len(),
            ones.len()
        )));
    }

    let mut next0 = 0;
    let mut next1 = 0;
    let mut take = |size: usize| -> Dataset {
        let n0 = size.div_ceil(2);
        let n1 = size / 2;
        let mut indices = Vec::with_capacity(size);
        // Interleave classes so any prefix is roughly balanced too.
        for k in 0..n0.max(n1) {
            if k < n0 {
                indices.push(zeros[next0 + k]);
            }
            if k < n1 {
                indices.push(ones[next1 + k]);
            }
        }
        next0 += n0;
        next1 += n1;
        ds.subset(&indices)
    };

    let train = take(plan.train_size);
    let val = take(plan.val_size);
    let folds = (0..plan.n_folds).map(|_| take(plan.test_fold_size)).collect();
    Ok(Splits { train, val, folds })
}

/// Generates a binary dataset whose class signal hides in low-variance
/// directions.
///
/// Construction: a diagonal latent vector t has `d_signal` coordinates set to
/// ±1 by the class label plus N(0, 0.2²) jitter, and `d_total − d_signal`
/// class-independent nuisance coordinates drawn from N(0, noise_scale²).
/// Features are x = Q·t for a seeded random orthogonal Q, so every feature
/// marginal is dominated by nuisance variance and a reconstruction-optimal
/// compressor with a narrow bottleneck keeps nuisance directions over the
/// class signal. Labels alternate 0,1,0,1,… and are therefore balanced.
pub fn synth_hidden_signal(
    n_samples: usize,
    d_total: usize,
    d_signal: usize,
    noise_scale: f64,
    seed: u64,
) -> Result<Dataset> {
    if d_signal == 0 || d_signal >= d_total {
        return Err(Error::Size(format!(
            "need 0 < d_signal < d_total, got {d_signal} of {d_total}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::Size("need at least 2 samples".to_string()));
    }
    if !noise_scale.is_finite() || noise_scale <= 0.0 {
        return Err(Error::Numeric(format!(
            "noise_scale must be positive and finite, got {noise_scale}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(d_total, &mut rng);

    let mut rows = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    let mut t = vec![0.0; d_total];
    for i in 0..n_samples {
        let y = (i % 2) as u8;
        let sign = if y == 1 { 1.0 } else { -1.0 };
        for slot in t.iter_mut().take(d_signal) {
            *slot = sign + 0.2 * standard_normal(&mut rng);
        }
        for slot in t.iter_mut().skip(d_signal) {
            *slot = noise_scale * standard_normal(&mut rng);
        }
        let x: Vec<f64> = q
            .iter()
            .map(|row| row.iter().zip(&t).map(|(a, b)| a * b).sum())
            .collect();
        rows.push(x);
        labels.push(y);
    }
    let features = Matrix::from_rows(&rows)?;
    let names = (0..d_total).map(|i| format!("f{i}")).collect();
    Dataset::new(features, labels, names, Vec::new())
}

/// Box-Muller standard normal from a uniform generator.
fn standard_normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Random orthogonal matrix via Gram-Schmidt on a Gaussian matrix; returned
/// as row vectors.
fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
        for b in &basis {
            let proj: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let norm: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for vi in &mut v {
                *vi /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_csv(dir: &tempfile::TempDir, body: &str) -> std::path::PathBuf {
        let path = dir.path().join("toy.csv");
        let mut f = File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    #[test]
    fn load_tabular_toy() {
        let dir = tempfile::tempdir().unwrap();
        let path = toy_csv(&dir, "a,b,label\n1.0,2.0,0\n3.0,4.0,1\n5.0,6.0,0\n");
        let ds = load_tabular(&path, "label", None, b',', &[]).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.labels(), &[0, 1, 0]);
        assert_eq!(ds.feature_names(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn load_tabular_missing_label_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = toy_csv(&dir, "a,b\n1.0,2.0\n");
        assert!(matches!(
            load_tabular(&path, "label", None, b',', &[]),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn load_tabular_non_numeric_cell() {
        let dir = tempfile::tempdir().unwrap();
        let path = toy_csv(&dir, "a,label\nok,1\n");
        assert!(matches!(
            load_tabular(&path, "label", None, b',', &[]),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn btag_mask_from_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = toy_csv(&dir, "k1,k2,b1,label\n1,2,3,0\n4,5,6,1\n");
        let ds = load_tabular(&path, "label", None, b',', &["b1".to_string()]).unwrap();
        assert_eq!(ds.btag_mask(), &[2]);
        let dropped = ds.drop_btag();
        assert_eq!(dropped.dim(), 2);
        assert_eq!(dropped.feature_names(), &["k1".to_string(), "k2".to_string()]);
    }

    #[test]
    fn normalize_min_max() {
        let features = Matrix::from_rows(&[vec![2.0], vec![4.0], vec![6.0]]).unwrap();
        let ds = Dataset::new(features, vec![0, 1, 0], vec!["x".into()], vec![]).unwrap();
        let (norm, stats) = normalize(&ds, None).unwrap();
        assert_eq!(norm.features().column(0), vec![0.0, 0.5, 1.0]);
        assert_eq!(stats.mins, vec![2.0]);
        assert_eq!(stats.maxs, vec![6.0]);
    }

    #[test]
    fn normalize_identity_when_already_unit() {
        let features = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![0.25]]).unwrap();
        let ds = Dataset::new(features, vec![0, 1, 0], vec!["x".into()], vec![]).unwrap();
        let (norm, _) = normalize(&ds, None).unwrap();
        assert_eq!(norm.features(), ds.features());
    }

    #[test]
    fn normalize_clips_with_reused_stats() {
        let stats = NormStats {
            names: vec!["x".into()],
            mins: vec![2.0],
            maxs: vec![6.0],
        };
        let features = Matrix::from_rows(&[vec![7.0], vec![1.0]]).unwrap();
        let ds = Dataset::new(features, vec![0, 1], vec!["x".into()], vec![]).unwrap();
        let (norm, _) = normalize(&ds, Some(&stats)).unwrap();
        assert_eq!(norm.features().column(0), vec![1.0, 0.0]);
    }

    #[test]
    fn normalize_rejects_constant_feature() {
        let features = Matrix::from_rows(&[vec![3.0], vec![3.0]]).unwrap();
        let ds = Dataset::new(features, vec![0, 1], vec!["flat".into()], vec![]).unwrap();
        match normalize(&ds, None) {
            Err(Error::DegenerateFeature(name)) => assert_eq!(name, "flat"),
            other => panic!("expected degenerate feature error, got {other:?}"),
        }
    }

    #[test]
    fn split_sizes_balance_and_determinism() {
        let ds = synth_hidden_signal(400, 6, 2, 3.0, 1).unwrap();
        let plan = SplitPlan {
            train_size: 100,
            val_size: 30,
            test_fold_size: 40,
            n_folds: 3,
            seed: 5,
        };
        let s1 = split(&ds, &plan).unwrap();
        assert_eq!(s1.train.len(), 100);
        assert_eq!(s1.val.len(), 30);
        assert_eq!(s1.folds.len(), 3);
        for fold in &s1.folds {
            assert_eq!(fold.len(), 40);
        }
        for part in std::iter::once(&s1.train)
            .chain(std::iter::once(&s1.val))
            .chain(&s1.folds)
        {
            let ones = part.labels().iter().filter(|&&y| y == 1).count() as i64;
            let zeros = part.len() as i64 - ones;
            assert!((ones - zeros).abs() <= 1);
        }
        let s2 = split(&ds, &plan).unwrap();
        assert_eq!(s1.train, s2.train);
        assert_eq!(s1.val, s2.val);
        assert_eq!(s1.folds, s2.folds);
    }

    #[test]
    fn split_rejects_small_dataset() {
        let ds = synth_hidden_signal(50, 6, 2, 3.0, 1).unwrap();
        let plan = SplitPlan {
            train_size: 100,
            val_size: 10,
            test_fold_size: 10,
            n_folds: 2,
            seed: 5,
        };
        assert!(matches!(split(&ds, &plan), Err(Error::Size(_))));
    }

    #[test]
    fn synth_guards() {
        assert!(matches!(
            synth_hidden_signal(100, 5, 5, 1.0, 0),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            synth_hidden_signal(100, 5, 6, 1.0, 0),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn synth_labels_balanced() {
        let ds = synth_hidden_signal(1001, 8, 2, 5.0, 3).unwrap();
        let ones = ds.labels().iter().filter(|&&y| y == 1).count() as i64;
        assert!((2 * ones - ds.len() as i64).abs() <= 1);
    }

    #[test]
    fn packed_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.bin");
        let ds = synth_hidden_signal(20, 4, 1, 2.0, 9).unwrap();
        let (ds, _) = normalize(&ds, None).unwrap();
        write_packed(&ds, &path).unwrap();
        let rt = load_packed(&path).unwrap();
        assert_eq!(rt.len(), ds.len());
        assert_eq!(rt.dim(), ds.dim());
        assert_eq!(rt.labels(), ds.labels());
        // Stored as f32: round trip is exact only to single precision.
        for (a, b) in rt.features().data().iter().zip(ds.features().data()) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}
