//! Property tests for the simulator, metrics, and data invariants.

mod common;

use proptest::prelude::*;

use gqc_core::data::{normalize, Dataset, SplitPlan};
use gqc_core::eval::{kld_binned, roc};
use gqc_core::mat::Matrix;
use gqc_core::nn::{bce_loss, mse_loss};
use gqc_core::qsim::{Circuit, Gate};
use gqc_core::vqc::{expectation_to_probability, predict};

fn gate_strategy(n_qubits: usize) -> impl Strategy<Value = Gate> {
    let angle = -std::f64::consts::PI..std::f64::consts::PI;
    (0u8..5, 0..n_qubits, 0..n_qubits, angle).prop_map(move |(kind, a, b, angle)| {
        let b = if a == b { (a + 1) % n_qubits } else { b };
        match kind {
            0 => Gate::H { target: a },
            1 => Gate::Ry { target: a, angle },
            2 => Gate::Rz { target: a, angle },
            3 if n_qubits > 1 => Gate::Cnot {
                control: a,
                target: b,
            },
            _ if n_qubits > 1 => Gate::Rzz { a, b, angle },
            _ => Gate::Ry { target: a, angle },
        }
    })
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(gate_strategy(n), 0..=100).prop_map(move |gates| {
            let mut circuit = Circuit::new(n).unwrap();
            circuit.extend(gates).unwrap();
            circuit
        })
    })
}

/// Mann-Whitney pair counting with ties scored 0.5.
fn auc_by_pair_counting(scores: &[f64], labels: &[u8]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &yi) in labels.iter().enumerate() {
        if yi != 1 {
            continue;
        }
        for (j, &yj) in labels.iter().enumerate() {
            if yj != 0 {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

proptest! {
    #[test]
    fn norm_is_preserved(circuit in circuit_strategy()) {
        let state = circuit.run().unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() <= 1e-12);
        let e = state.expectation_z0();
        prop_assert!((-1.0..=1.0).contains(&e));
    }

    #[test]
    fn trapezoid_auc_equals_pair_counting(
        samples in proptest::collection::vec((0.0f64..1.0, any::<bool>()), 2..200)
    ) {
        let scores: Vec<f64> = samples.iter().map(|(s, _)| {
            // Coarse grid to force plenty of score ties.
            (s * 16.0).round() / 16.0
        }).collect();
        let labels: Vec<u8> = samples.iter().map(|(_, y)| *y as u8).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let curve = roc(&scores, &labels).unwrap();
        let counted = auc_by_pair_counting(&scores, &labels);
        prop_assert!((curve.auc - counted).abs() <= 1e-12,
            "trapezoid {} vs pairs {}", curve.auc, counted);
    }

    #[test]
    fn kld_is_non_negative(
        p in proptest::collection::vec(0.0f64..1.0, 1..80),
        q in proptest::collection::vec(0.0f64..1.0, 1..80),
        n_bins in 1usize..40,
    ) {
        let d = kld_binned(&p, &q, n_bins, (0.0, 1.0)).unwrap();
        prop_assert!(d >= -1e-12, "kld = {d}");
    }

    #[test]
    fn normalization_is_idempotent(
        rows in proptest::collection::vec(
            proptest::collection::vec(-100.0f64..100.0, 3), 4..30
        )
    ) {
        let m = Matrix::from_rows(&rows).unwrap();
        let labels: Vec<u8> = (0..m.rows()).map(|i| (i % 2) as u8).collect();
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let ds = Dataset::new(m, labels, names, vec![]).unwrap();
        let first = match normalize(&ds, None) {
            Ok((n, _)) => n,
            // Constant columns are legitimately rejected while fitting.
            Err(_) => return Ok(()),
        };
        let (second, stats) = normalize(&first, None).unwrap();
        for (a, b) in second.features().data().iter().zip(first.features().data()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
        for (&lo, &hi) in stats.mins.iter().zip(&stats.maxs) {
            prop_assert_eq!(lo, 0.0);
            prop_assert_eq!(hi, 1.0);
        }
    }

    #[test]
    fn probability_map_is_monotone_and_predict_binary(
        a in -1.0f64..1.0, b in -1.0f64..1.0
    ) {
        let (pa, pb) = (expectation_to_probability(a), expectation_to_probability(b));
        if a < b {
            prop_assert!(pa < pb);
        }
        prop_assert!((0.0..=1.0).contains(&pa));
        prop_assert!(matches!(predict(a), 0 | 1));
    }

    #[test]
    fn losses_are_non_negative(
        x in proptest::collection::vec(0.0f64..1.0, 1..40),
        y in proptest::collection::vec(0.0f64..1.0, 1..40),
        labels in proptest::collection::vec(0u8..2, 1..40),
        p in proptest::collection::vec(0.0f64..=1.0, 1..40),
    ) {
        let len = x.len().min(y.len());
        let xm = Matrix::from_vec(1, len, x[..len].to_vec()).unwrap();
        let ym = Matrix::from_vec(1, len, y[..len].to_vec()).unwrap();
        prop_assert!(mse_loss(&xm, &ym).unwrap() >= 0.0);

        let len = labels.len().min(p.len());
        prop_assert!(bce_loss(&labels[..len], &p[..len]).unwrap() >= 0.0);
    }
}

#[test]
fn splits_are_pairwise_disjoint() {
    // Single feature equal to the row index makes membership checkable.
    let rows: Vec<Vec<f64>> = (0..200).map(|i| vec![i as f64]).collect();
    let features = Matrix::from_rows(&rows).unwrap();
    let labels: Vec<u8> = (0..200).map(|i| (i % 2) as u8).collect();
    let ds = Dataset::new(features, labels, vec!["id".to_string()], vec![]).unwrap();
    let plan = SplitPlan {
        train_size: 80,
        val_size: 20,
        test_fold_size: 30,
        n_folds: 3,
        seed: 9,
    };
    let splits = gqc_core::data::split(&ds, &plan).unwrap();
    let mut seen = std::collections::HashSet::new();
    let parts: Vec<&Dataset> = std::iter::once(&splits.train)
        .chain(std::iter::once(&splits.val))
        .chain(splits.folds.iter())
        .collect();
    for part in parts {
        for r in 0..part.len() {
            let id = part.features().get(r, 0) as i64;
            assert!(seen.insert(id), "row {id} appears in two splits");
        }
    }
    assert_eq!(seen.len(), 80 + 20 + 3 * 30);
}
