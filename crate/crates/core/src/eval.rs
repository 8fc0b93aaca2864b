//! Classifier quality measures: ROC curves with trapezoidal AUC, inverse
//! false-positive rate at a target TPR, binned Kullback-Leibler divergences
//! (natural log), and fold statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::Matrix;

/// Sentinel returned by [`fpr_inverse_at_tpr`] when the false-positive rate
/// at the target is exactly zero (infinite background rejection).
pub const INFINITE_REJECTION: f64 = f64::INFINITY;

/// ROC curve from a descending threshold sweep. The first point is (0,0) at
/// threshold +inf; the last is (1,1) at the lowest score. Tied scores move
/// across the threshold together.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub thresholds: Vec<f64>,
    pub tpr: Vec<f64>,
    pub fpr: Vec<f64>,
    pub auc: f64,
}

impl RocCurve {
    /// Rebuilds a curve from stored points (e.g. a ROC CSV), recomputing the
    /// trapezoidal AUC. Points must run from (0,0) to (1,1) with
    /// non-decreasing rates.
    pub fn from_points(thresholds: Vec<f64>, fpr: Vec<f64>, tpr: Vec<f64>) -> Result<Self> {
        if thresholds.len() != fpr.len() || fpr.len() != tpr.len() || fpr.len() < 2 {
            return Err(Error::Shape(
                "curve needs equally many thresholds, fpr, and tpr values (at least 2)"
                    .to_string(),
            ));
        }
        for pair in fpr.windows(2).chain(tpr.windows(2)) {
            if pair[1] < pair[0] {
                return Err(Error::Domain("curve rates must be non-decreasing".to_string()));
            }
        }
        if fpr[0] != 0.0 || tpr[0] != 0.0 || *fpr.last().unwrap() != 1.0 || *tpr.last().unwrap() != 1.0 {
            return Err(Error::Domain(
                "curve must start at (0,0) and end at (1,1)".to_string(),
            ));
        }
        let mut auc = 0.0;
        for k in 1..tpr.len() {
            auc += (fpr[k] - fpr[k - 1]) * (tpr[k] + tpr[k - 1]) / 2.0;
        }
        Ok(Self {
            thresholds,
            tpr,
            fpr,
            auc,
        })
    }
}

/// Threshold sweep over unique scores; both classes must be present.
pub fn roc(scores: &[f64], labels: &[u8]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::Domain(
            "roc needs both classes present".to_string(),
        ));
    }
    if let Some(&bad) = labels.iter().find(|&&y| y > 1) {
        return Err(Error::Domain(format!("label {bad} outside {{0,1}}")));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Numeric("scores must not be NaN".to_string()));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());

    let mut thresholds = vec![f64::INFINITY];
    let mut tpr = vec![0.0];
    let mut fpr = vec![0.0];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        thresholds.push(score);
        tpr.push(tp as f64 / positives as f64);
        fpr.push(fp as f64 / negatives as f64);
    }

    let mut auc = 0.0;
    for k in 1..tpr.len() {
        auc += (fpr[k] - fpr[k - 1]) * (tpr[k] + tpr[k - 1]) / 2.0;
    }
    Ok(RocCurve {
        thresholds,
        tpr,
        fpr,
        auc,
    })
}

/// 1 / FPR at the first curve position reaching the target TPR, with the FPR
/// linearly interpolated between the bracketing points. Returns
/// [`INFINITE_REJECTION`] when that FPR is zero.
pub fn fpr_inverse_at_tpr(curve: &RocCurve, tpr_target: f64) -> Result<f64> {
    if !(tpr_target > 0.0 && tpr_target <= 1.0) {
        return Err(Error::Domain(format!(
            "tpr target must lie in (0,1], got {tpr_target}"
        )));
    }
    let idx = curve
        .tpr
        .iter()
        .position(|&t| t >= tpr_target)
        .ok_or_else(|| Error::Domain("curve never reaches the target TPR".to_string()))?;
    let fpr_at_target = if idx == 0 {
        curve.fpr[0]
    } else {
        let (t0, t1) = (curve.tpr[idx - 1], curve.tpr[idx]);
        let (f0, f1) = (curve.fpr[idx - 1], curve.fpr[idx]);
        if t1 > t0 {
            f0 + (tpr_target - t0) * (f1 - f0) / (t1 - t0)
        } else {
            f1
        }
    };
    if fpr_at_target == 0.0 {
        Ok(INFINITE_REJECTION)
    } else {
        Ok(1.0 / fpr_at_target)
    }
}

/// Binned KL divergence Σ_k P_k ln(P_k/Q_k) over shared equal-width bins.
///
/// Bin probabilities are counts over the total sample size; samples outside
/// the range are counted into the edge bins. Bins with P_k = 0 contribute
/// nothing; bins with P_k > 0 but Q_k = 0 use the floor
/// Q_k ← 1/(10·max(|P|,|Q|)).
pub fn kld_binned(
    p_samples: &[f64],
    q_samples: &[f64],
    n_bins: usize,
    range: (f64, f64),
) -> Result<f64> {
    if p_samples.is_empty() || q_samples.is_empty() {
        return Err(Error::Domain("kld needs non-empty sample sets".to_string()));
    }
    if n_bins == 0 {
        return Err(Error::Domain("kld needs at least one bin".to_string()));
    }
    let (lo, hi) = range;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Domain(format!("bad bin range ({lo}, {hi})")));
    }
    let p = histogram(p_samples, n_bins, lo, hi);
    let q = histogram(q_samples, n_bins, lo, hi);
    let floor = 1.0 / (10.0 * p_samples.len().max(q_samples.len()) as f64);
    let mut divergence = 0.0;
    for (pk, qk) in p.iter().zip(&q) {
        if *pk > 0.0 {
            let q_eff = if *qk > 0.0 { *qk } else { floor };
            divergence += pk * (pk / q_eff).ln();
        }
    }
    Ok(divergence)
}

fn histogram(samples: &[f64], n_bins: usize, lo: f64, hi: f64) -> Vec<f64> {
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    for &x in samples {
        let raw = ((x - lo) / width).floor() as isize;
        let idx = raw.clamp(0, n_bins as isize - 1) as usize;
        counts[idx] += 1;
    }
    let total = samples.len() as f64;
    counts.iter().map(|&c| c as f64 / total).collect()
}

/// Per-feature signal/background KL divergences for two models and their mean
/// ratio R = mean(kld_a / kld_b) over features with a nonzero denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentSeparationReport {
    /// D_KL(S‖B) per latent feature of model A (the ratio numerator).
    pub kld_a: Vec<f64>,
    /// D_KL(S‖B) per latent feature of model B (the ratio denominator).
    pub kld_b: Vec<f64>,
    /// Per-feature ratio, None where the denominator divergence is zero.
    pub ratios: Vec<Option<f64>>,
    /// Mean over defined ratios; None when every feature was excluded.
    pub mean_ratio: Option<f64>,
    /// Number of features excluded from the mean.
    pub excluded: usize,
}

/// Compares latent-space class separation of two models over a shared [0,1]
/// latent range. All four matrices must have the same number of columns.
pub fn latent_separation_report(
    a_signal: &Matrix,
    a_background: &Matrix,
    b_signal: &Matrix,
    b_background: &Matrix,
    n_bins: usize,
) -> Result<LatentSeparationReport> {
    let ell = a_signal.cols();
    for (name, m) in [
        ("a_background", a_background),
        ("b_signal", b_signal),
        ("b_background", b_background),
    ] {
        if m.cols() != ell {
            return Err(Error::Shape(format!(
                "{name} has {} latent features, expected {ell}",
                m.cols()
            )));
        }
    }
    let range = (0.0, 1.0);
    let mut kld_a = Vec::with_capacity(ell);
    let mut kld_b = Vec::with_capacity(ell);
    for j in 0..ell {
        kld_a.push(kld_binned(
            &a_signal.column(j),
            &a_background.column(j),
            n_bins,
            range,
        )?);
        kld_b.push(kld_binned(
            &b_signal.column(j),
            &b_background.column(j),
            n_bins,
            range,
        )?);
    }
    let ratios: Vec<Option<f64>> = kld_a
        .iter()
        .zip(&kld_b)
        .map(|(a, b)| if *b > 0.0 { Some(a / b) } else { None })
        .collect();
    let defined: Vec<f64> = ratios.iter().flatten().copied().collect();
    let excluded = ell - defined.len();
    let mean_ratio = if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    };
    Ok(LatentSeparationReport {
        kld_a,
        kld_b,
        ratios,
        mean_ratio,
        excluded,
    })
}

/// Per-fold metrics with sample mean and standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldSummary {
    pub auc: Vec<f64>,
    pub fpr_inv: Vec<f64>,
    pub auc_mean: f64,
    pub auc_std: f64,
    pub fpr_inv_mean: f64,
    pub fpr_inv_std: f64,
}

/// Builds a summary from (auc, fpr_inv) pairs, one per fold.
pub fn fold_summary(per_fold: &[(f64, f64)]) -> Result<FoldSummary> {
    if per_fold.is_empty() {
        return Err(Error::Domain("fold summary needs at least one fold".to_string()));
    }
    let auc: Vec<f64> = per_fold.iter().map(|p| p.0).collect();
    let fpr_inv: Vec<f64> = per_fold.iter().map(|p| p.1).collect();
    let (auc_mean, auc_std) = mean_std(&auc);
    let (fpr_inv_mean, fpr_inv_std) = mean_std(&fpr_inv);
    Ok(FoldSummary {
        auc,
        fpr_inv,
        auc_mean,
        auc_std,
        fpr_inv_mean,
        fpr_inv_std,
    })
}

/// Sample mean and standard deviation (n−1 denominator; 0 for n = 1).
/// Identical values give exactly (value, 0) with no rounding residue.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.windows(2).all(|w| w[0] == w[1]) {
        return (xs.first().copied().unwrap_or(f64::NAN), 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// TPR of a curve interpolated at the given FPR positions. Vertical curve
/// segments (repeated FPR) collapse to their highest TPR.
pub fn interpolate_tpr(curve: &RocCurve, fpr_grid: &[f64]) -> Vec<f64> {
    // Upper envelope: one (fpr, tpr) knot per distinct fpr, keeping the last
    // (largest, since tpr is non-decreasing) tpr seen at that fpr.
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(curve.fpr.len());
    for (&f, &t) in curve.fpr.iter().zip(&curve.tpr) {
        match knots.last_mut() {
            Some((kf, kt)) if *kf == f => *kt = t,
            _ => knots.push((f, t)),
        }
    }
    fpr_grid
        .iter()
        .map(|&g| {
            let g = g.clamp(0.0, 1.0);
            match knots.iter().position(|&(f, _)| f >= g) {
                Some(0) => knots[0].1,
                Some(i) => {
                    let (f0, t0) = knots[i - 1];
                    let (f1, t1) = knots[i];
                    t0 + (g - f0) * (t1 - t0) / (f1 - f0)
                }
                None => knots.last().map_or(0.0, |&(_, t)| t),
            }
        })
        .collect()
}

/// Mean and standard deviation of several curves' TPR on a common FPR grid.
pub fn roc_band(curves: &[RocCurve], fpr_grid: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if curves.is_empty() {
        return Err(Error::Domain("band needs at least one curve".to_string()));
    }
    let per_curve: Vec<Vec<f64>> = curves
        .iter()
        .map(|c| interpolate_tpr(c, fpr_grid))
        .collect();
    let mut means = Vec::with_capacity(fpr_grid.len());
    let mut stds = Vec::with_capacity(fpr_grid.len());
    for k in 0..fpr_grid.len() {
        let column: Vec<f64> = per_curve.iter().map(|c| c[k]).collect();
        let (m, s) = mean_std(&column);
        means.push(m);
        stds.push(s);
    }
    Ok((means, stds))
}
