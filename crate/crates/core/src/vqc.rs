//! Variational classifier circuit: data re-uploading feature maps interleaved
//! with trainable blocks.
//!
//! An input vector z of length ℓ = n·d is split into d segments of n features.
//! Each segment is encoded by a feature map U(z_k) (H + RZ per qubit, then
//! nearest-neighbor RZZ entanglers), followed by a trainable block G(ϑ_k) of r
//! repetitions of RY layer / CNOT chain / RY layer. The classifier output is
//! ⟨Z⟩ on qubit 0 after the final block.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Circuit, Gate, MAX_QUBITS};

/// Circuit shape: n qubits, d input segments, r ansatz repetitions per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VqcConfig {
    pub n_qubits: usize,
    pub segments: usize,
    pub reps: usize,
}

impl Default for VqcConfig {
    /// Tuned default shape: 8 qubits × 2 segments (ℓ = 16) with r = 2.
    fn default() -> Self {
        Self {
            n_qubits: 8,
            segments: 2,
            reps: 2,
        }
    }
}

impl VqcConfig {
    pub fn new(n_qubits: usize, segments: usize, reps: usize) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::Size(format!(
                "n_qubits must be in 2..={MAX_QUBITS} (an entangling pair is required), got {n_qubits}"
            )));
        }
        if segments == 0 {
            return Err(Error::Size("segments must be at least 1".to_string()));
        }
        if reps == 0 {
            return Err(Error::Size("reps must be at least 1".to_string()));
        }
        Ok(Self {
            n_qubits,
            segments,
            reps,
        })
    }

    /// Input dimension ℓ = n·d consumed by the circuit.
    pub fn latent_dim(&self) -> usize {
        self.n_qubits * self.segments
    }

    /// Trainable angles per block: 2·n·r.
    pub fn block_len(&self) -> usize {
        2 * self.n_qubits * self.reps
    }

    /// Total trainable angles: d·2·n·r.
    pub fn param_count(&self) -> usize {
        self.segments * self.block_len()
    }
}

/// Trainable angles, stored flat as d consecutive blocks of 2·n·r radians.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaStore {
    block_len: usize,
    angles: Vec<f64>,
}

impl ThetaStore {
    pub fn zeros(cfg: &VqcConfig) -> Self {
        Self {
            block_len: cfg.block_len(),
            angles: vec![0.0; cfg.param_count()],
        }
    }

    /// Angles drawn uniformly from [-π, π).
    pub fn random(cfg: &VqcConfig, rng: &mut impl Rng) -> Self {
        let angles = (0..cfg.param_count())
            .map(|_| rng.gen_range(-PI..PI))
            .collect();
        Self {
            block_len: cfg.block_len(),
            angles,
        }
    }

    pub fn from_flat(cfg: &VqcConfig, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != cfg.param_count() {
            return Err(Error::Shape(format!(
                "theta length {} does not match d·2·n·r = {}",
                angles.len(),
                cfg.param_count()
            )));
        }
        Ok(Self {
            block_len: cfg.block_len(),
            angles,
        })
    }

    /// Angles of block k (the trainable gates after feature map k).
    pub fn block(&self, k: usize) -> &[f64] {
        &self.angles[k * self.block_len..(k + 1) * self.block_len]
    }

    pub fn n_blocks(&self) -> usize {
        self.angles.len().checked_div(self.block_len).unwrap_or(0)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.angles
    }

    pub fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Entangling phase for a feature pair: (π − a)(π − b).
pub fn interaction_angle(a: f64, b: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Numeric(format!(
            "interaction angle requires finite features, got ({a}, {b})"
        )));
    }
    Ok((PI - a) * (PI - b))
}

/// Feature map U(z_k): H on every qubit, RZ(z_k[j]) per qubit, then an RZZ
/// with the pair interaction angle on each nearest-neighbor pair.
pub fn build_feature_map(z_k: &[f64]) -> Result<Vec<Gate>> {
    let n = z_k.len();
    if n < 2 {
        return Err(Error::Shape(format!(
            "feature map needs at least 2 features (one entangling pair), got {n}"
        )));
    }
    let mut gates = Vec::with_capacity(2 * n + (n - 1));
    for q in 0..n {
        gates.push(Gate::H { target: q });
    }
    for (q, &z) in z_k.iter().enumerate() {
        gates.push(Gate::Rz {
            target: q,
            angle: z,
        });
    }
    for q in 0..n - 1 {
        gates.push(Gate::Rzz {
            a: q,
            b: q + 1,
            angle: interaction_angle(z_k[q], z_k[q + 1])?,
        });
    }
    Ok(gates)
}

/// Trainable block G(ϑ_k): r repetitions of RY layer / CNOT chain / RY layer,
/// consuming 2n angles per repetition in order.
pub fn build_ansatz(n_qubits: usize, theta_block: &[f64]) -> Result<Vec<Gate>> {
    if n_qubits < 2 {
        return Err(Error::Shape(format!(
            "ansatz needs at least 2 qubits, got {n_qubits}"
        )));
    }
    if theta_block.is_empty() || !theta_block.len().is_multiple_of(2 * n_qubits) {
        return Err(Error::Shape(format!(
            "ansatz block length {} is not a positive multiple of 2n = {}",
            theta_block.len(),
            2 * n_qubits
        )));
    }
    let reps = theta_block.len() / (2 * n_qubits);
    let mut gates = Vec::with_capacity(reps * (2 * n_qubits + n_qubits - 1));
    let mut next = 0;
    for _ in 0..reps {
        for q in 0..n_qubits {
            gates.push(Gate::Ry {
                target: q,
                angle: theta_block[next],
            });
            next += 1;
        }
        for q in 0..n_qubits - 1 {
            gates.push(Gate::Cnot {
                control: q,
                target: q + 1,
            });
        }
        for q in 0..n_qubits {
            gates.push(Gate::Ry {
                target: q,
                angle: theta_block[next],
            });
            next += 1;
        }
    }
    Ok(gates)
}

/// Where a parametrized gate's angle comes from, for gradient routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleSource {
    /// Trainable angle at the given flat index of the [`ThetaStore`].
    Theta(usize),
    /// Data-encoding RZ carrying input feature j; the angle is z[j] itself.
    Feature(usize),
    /// Entangling RZZ with angle (π − z[a])(π − z[b]).
    Interaction(usize, usize),
}

/// Full classifier circuit plus, per gate, the origin of its angle
/// (None for H and CNOT).
#[derive(Debug, Clone)]
pub struct CompiledVqc {
    pub circuit: Circuit,
    pub sources: Vec<Option<AngleSource>>,
}

/// Builds the circuit U(z_1) G(ϑ_1) … U(z_d) G(ϑ_d) for input z of length n·d.
pub fn compile(z: &[f64], theta: &ThetaStore, cfg: &VqcConfig) -> Result<CompiledVqc> {
    if z.len() != cfg.latent_dim() {
        return Err(Error::Shape(format!(
            "input length {} does not match n·d = {}",
            z.len(),
            cfg.latent_dim()
        )));
    }
    if theta.len() != cfg.param_count() || theta.block_len != cfg.block_len() {
        return Err(Error::Shape(format!(
            "theta layout ({} angles, block {}) does not match config ({}, {})",
            theta.len(),
            theta.block_len,
            cfg.param_count(),
            cfg.block_len()
        )));
    }
    let n = cfg.n_qubits;
    let mut circuit = Circuit::new(n)?;
    let mut sources = Vec::new();
    for k in 0..cfg.segments {
        let seg = &z[k * n..(k + 1) * n];
        for gate in build_feature_map(seg)? {
            let source = match gate {
                Gate::Rz { target, .. } => Some(AngleSource::Feature(k * n + target)),
                Gate::Rzz { a, b, .. } => Some(AngleSource::Interaction(k * n + a, k * n + b)),
                _ => None,
            };
            circuit.push(gate)?;
            sources.push(source);
        }
        let block_base = k * cfg.block_len();
        let mut used = 0;
        for gate in build_ansatz(n, theta.block(k))? {
            let source = match gate {
                Gate::Ry { .. } => {
                    let s = Some(AngleSource::Theta(block_base + used));
                    used += 1;
                    s
                }
                _ => None,
            };
            circuit.push(gate)?;
            sources.push(source);
        }
    }
    Ok(CompiledVqc { circuit, sources })
}

/// Classifier output ⟨Z on qubit 0⟩ ∈ [-1, 1].
pub fn forward(z: &[f64], theta: &ThetaStore, cfg: &VqcConfig) -> Result<f64> {
    let compiled = compile(z, theta, cfg)?;
    Ok(compiled.circuit.run()?.expectation_z0())
}

/// Hard label (sign(e)+1)/2 with sign(0) defined as +1.
pub fn predict(expectation: f64) -> u8 {
    if expectation >= 0.0 {
        1
    } else {
        0
    }
}

/// Affine map of an expectation in [-1, 1] to a probability in [0, 1].
pub fn expectation_to_probability(expectation: f64) -> f64 {
    (expectation + 1.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interaction_angle_values() {
        assert!((interaction_angle(0.0, 0.0).unwrap() - PI * PI).abs() < 1e-12);
        assert_eq!(interaction_angle(PI, 1.0).unwrap(), 0.0);
        let expected = (PI - 0.5) * (PI - 0.25);
        assert!((interaction_angle(0.5, 0.25).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 7.6385).abs() < 5e-4);
        assert!(matches!(
            interaction_angle(f64::NAN, 0.0),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn feature_map_structure() {
        let gates = build_feature_map(&[0.0, 0.0]).unwrap();
        assert_eq!(
            gates,
            vec![
                Gate::H { target: 0 },
                Gate::H { target: 1 },
                Gate::Rz {
                    target: 0,
                    angle: 0.0
                },
                Gate::Rz {
                    target: 1,
                    angle: 0.0
                },
                Gate::Rzz {
                    a: 0,
                    b: 1,
                    angle: PI * PI
                },
            ]
        );

        let gates3 = build_feature_map(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(gates3.len(), 3 + 3 + 2);

        assert!(matches!(build_feature_map(&[0.5]), Err(Error::Shape(_))));
    }

    #[test]
    fn ansatz_structure() {
        let gates = build_ansatz(2, &[PI, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            gates,
            vec![
                Gate::Ry {
                    target: 0,
                    angle: PI
                },
                Gate::Ry {
                    target: 1,
                    angle: 0.0
                },
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
                Gate::Ry {
                    target: 0,
                    angle: 0.0
                },
                Gate::Ry {
                    target: 1,
                    angle: 0.0
                },
            ]
        );

        // n=4, r=2: per repetition 4 RY + 3 CNOT + 4 RY = 11 gates.
        let block: Vec<f64> = (0..16).map(|i| i as f64 * 0.1).collect();
        assert_eq!(build_ansatz(4, &block).unwrap().len(), 22);

        assert!(matches!(
            build_ansatz(2, &[0.0, 0.0, 0.0]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn parameter_count_matches_layout() {
        let cfg = VqcConfig::new(3, 2, 2).unwrap();
        assert_eq!(cfg.param_count(), 2 * 2 * 3 * 2);
        let theta = ThetaStore::zeros(&cfg);
        assert_eq!(theta.len(), cfg.param_count());
        let compiled = compile(&vec![0.0; cfg.latent_dim()], &theta, &cfg).unwrap();
        let n_theta_gates = compiled
            .sources
            .iter()
            .filter(|s| matches!(s, Some(AngleSource::Theta(_))))
            .count();
        assert_eq!(n_theta_gates, cfg.param_count());
    }

    #[test]
    fn compiled_block_order_is_u_g_u_g() {
        // d=2 segments: the circuit must interleave feature maps and ansatz
        // blocks, ending with a trainable block before measurement.
        let cfg = VqcConfig::new(2, 2, 1).unwrap();
        let theta = ThetaStore::zeros(&cfg);
        let z = [0.1, 0.2, 0.3, 0.4];
        let compiled = compile(&z, &theta, &cfg).unwrap();

        let fm_len = 5; // H,H,RZ,RZ,RZZ for n=2
        let ansatz_len = 5; // RY,RY,CNOT,RY,RY for n=2 r=1
        assert_eq!(compiled.circuit.len(), 2 * (fm_len + ansatz_len));
        let gates = compiled.circuit.gates();
        assert!(matches!(gates[0], Gate::H { .. }));
        assert!(matches!(gates[fm_len], Gate::Ry { .. }));
        assert!(matches!(gates[fm_len + ansatz_len], Gate::H { .. }));
        assert!(matches!(gates[2 * fm_len + ansatz_len], Gate::Ry { .. }));
        // Second feature map encodes z[2..4].
        assert_eq!(
            gates[fm_len + ansatz_len + 2],
            Gate::Rz {
                target: 0,
                angle: 0.3
            }
        );
    }

    #[test]
    fn forward_output_bounded() {
        let cfg = VqcConfig::new(2, 2, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        use rand::SeedableRng;
        for _ in 0..20 {
            let theta = ThetaStore::random(&cfg, &mut rng);
            let z: Vec<f64> = (0..cfg.latent_dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let e = forward(&z, &theta, &cfg).unwrap();
            assert!((-1.0..=1.0).contains(&e));
        }
    }

    #[test]
    fn forward_shape_guard() {
        let cfg = VqcConfig::new(2, 2, 1).unwrap();
        let theta = ThetaStore::zeros(&cfg);
        assert!(matches!(
            forward(&[0.0; 3], &theta, &cfg),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn predict_convention() {
        assert_eq!(predict(0.3), 1);
        assert_eq!(predict(-0.7), 0);
        assert_eq!(predict(0.0), 1);
    }

    #[test]
    fn probability_map_endpoints() {
        assert_eq!(expectation_to_probability(1.0), 1.0);
        assert_eq!(expectation_to_probability(-1.0), 0.0);
        assert_eq!(expectation_to_probability(0.0), 0.5);
    }
}
