//! Exact gradients of the classifier output with respect to every gate angle,
//! trainable and data-derived alike.
//!
//! The workhorse is an adjoint reverse sweep: one forward pass, then a single
//! backward pass that un-applies each gate from both the state and a
//! measurement-weighted adjoint state, costing O(G·2^n) total. A
//! parameter-shift route (two shifted forward passes per angle) is kept as a
//! fully independent check of the same quantities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qsim::{apply_pauli_y, apply_pauli_z, apply_pauli_zz, Circuit, Gate};
use crate::vqc::{compile, AngleSource, CompiledVqc, ThetaStore, VqcConfig};

/// Gradients of ⟨Z0⟩: one entry per trainable angle (flat ThetaStore layout)
/// and one per input feature, chain-ruled through the RZ angles and the RZZ
/// interaction angles.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientTape {
    pub d_theta: Vec<f64>,
    pub d_z: Vec<f64>,
}

/// Work accounting for the adjoint sweep, in units of full passes over the
/// 2^n amplitudes (gate applications, the observable application, and the
/// per-angle generator reductions all count as one pass each).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjointStats {
    pub state_passes: usize,
}

/// Adjoint gradient of the full classifier: returns the forward value and the
/// tape of derivatives with respect to ϑ and z.
pub fn adjoint_gradient(
    z: &[f64],
    theta: &ThetaStore,
    cfg: &VqcConfig,
) -> Result<(f64, GradientTape)> {
    let (value, tape, _) = adjoint_gradient_with_stats(z, theta, cfg)?;
    Ok((value, tape))
}

/// As [`adjoint_gradient`], also reporting the number of state passes.
pub fn adjoint_gradient_with_stats(
    z: &[f64],
    theta: &ThetaStore,
    cfg: &VqcConfig,
) -> Result<(f64, GradientTape, AdjointStats)> {
    let compiled = compile(z, theta, cfg)?;
    let (value, gate_grads, stats) = adjoint_circuit_gradient(&compiled.circuit)?;
    let tape = accumulate_tape(&compiled, &gate_grads, z, cfg)?;
    Ok((value, tape, stats))
}

/// Adjoint sweep over an arbitrary gate list. Returns ⟨Z0⟩ and the derivative
/// of ⟨Z0⟩ with respect to each gate's own angle (0.0 for H and CNOT).
pub fn adjoint_circuit_gradient(circuit: &Circuit) -> Result<(f64, Vec<f64>, AdjointStats)> {
    let mut passes = 0usize;

    // Forward pass: phi = U_G … U_1 |0⟩.
    let mut phi = circuit.run()?;
    passes += circuit.len();
    let value = phi.expectation_z0();

    // Adjoint state: lam = Z0 · phi.
    let mut lam = phi.clone();
    apply_pauli_z(lam.amplitudes_mut(), 0);
    passes += 1;

    let dim = phi.amplitudes().len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
    let mut grads = vec![0.0; circuit.len()];

    // Reverse sweep. At the top of iteration i, phi = U_i … U_1 |0⟩ and
    // lam = U_{i+1}† … U_G† Z0 U_G … U_1 |0⟩, so for a gate exp(-iθP/2)
    // d⟨Z0⟩/dθ_i = 2·Re⟨lam| (-i P/2) |phi⟩ = Im⟨lam| P |phi⟩.
    for (i, gate) in circuit.gates().iter().enumerate().rev() {
        if let Some(generator) = generator_of(gate) {
            scratch.copy_from_slice(phi.amplitudes());
            match generator {
                Generator::Y(q) => apply_pauli_y(&mut scratch, q),
                Generator::Z(q) => apply_pauli_z(&mut scratch, q),
                Generator::Zz(a, b) => apply_pauli_zz(&mut scratch, a, b),
            }
            passes += 1;
            let dot: Complex64 = lam
                .amplitudes()
                .iter()
                .zip(&scratch)
                .map(|(l, m)| l.conj() * m)
                .sum();
            grads[i] = dot.im;
        }
        let inverse = gate.inverse();
        phi.apply(&inverse)?;
        lam.apply(&inverse)?;
        passes += 2;
    }

    Ok((
        value,
        grads,
        AdjointStats {
            state_passes: passes,
        },
    ))
}

enum Generator {
    Y(usize),
    Z(usize),
    Zz(usize, usize),
}

fn generator_of(gate: &Gate) -> Option<Generator> {
    match *gate {
        Gate::Ry { target, .. } => Some(Generator::Y(target)),
        Gate::Rz { target, .. } => Some(Generator::Z(target)),
        Gate::Rzz { a, b, .. } => Some(Generator::Zz(a, b)),
        Gate::H { .. } | Gate::Cnot { .. } => None,
    }
}

/// Routes per-gate angle gradients onto the tape: trainable angles map 1:1,
/// data angles chain-rule through ∂/∂z_a (π−z_a)(π−z_b) = −(π−z_b).
fn accumulate_tape(
    compiled: &CompiledVqc,
    gate_grads: &[f64],
    z: &[f64],
    cfg: &VqcConfig,
) -> Result<GradientTape> {
    let mut d_theta = vec![0.0; cfg.param_count()];
    let mut d_z = vec![0.0; cfg.latent_dim()];
    for (source, &g) in compiled.sources.iter().zip(gate_grads) {
        match *source {
            Some(AngleSource::Theta(l)) => d_theta[l] += g,
            Some(AngleSource::Feature(j)) => d_z[j] += g,
            Some(AngleSource::Interaction(a, b)) => {
                d_z[a] += g * -(std::f64::consts::PI - z[b]);
                d_z[b] += g * -(std::f64::consts::PI - z[a]);
            }
            None => {
                if g != 0.0 {
                    return Err(Error::Numeric(
                        "gradient reported for a non-parametrized gate".to_string(),
                    ));
                }
            }
        }
    }
    Ok(GradientTape { d_theta, d_z })
}

/// Parameter-shift gradient of one gate angle: [f(θ+π/2) − f(θ−π/2)] / 2.
///
/// `which` indexes the parametrized gates of the compiled circuit in
/// application order (H and CNOT are skipped by the numbering).
pub fn parameter_shift_gradient(
    z: &[f64],
    theta: &ThetaStore,
    cfg: &VqcConfig,
    which: usize,
) -> Result<f64> {
    let compiled = compile(z, theta, cfg)?;
    let gate_index = nth_parametrized(&compiled.circuit, which)?;
    parameter_shift_circuit_gradient(&compiled.circuit, gate_index)
}

/// Parameter-shift gradient for the gate at `gate_index` in the list.
pub fn parameter_shift_circuit_gradient(circuit: &Circuit, gate_index: usize) -> Result<f64> {
    let gate = *circuit
        .gates()
        .get(gate_index)
        .ok_or_else(|| Error::Index(format!("gate index {gate_index} out of range")))?;
    let angle = gate.angle().ok_or_else(|| {
        Error::Index(format!("gate at index {gate_index} has no angle to shift"))
    })?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let plus = run_with_angle(circuit, gate_index, &gate, angle + half_pi)?;
    let minus = run_with_angle(circuit, gate_index, &gate, angle - half_pi)?;
    Ok((plus - minus) / 2.0)
}

/// Full tape computed from parameter shifts alone: an independent route used
/// to cross-check the adjoint sweep gate by gate.
pub fn parameter_shift_tape(
    z: &[f64],
    theta: &ThetaStore,
    cfg: &VqcConfig,
) -> Result<GradientTape> {
    let compiled = compile(z, theta, cfg)?;
    let mut gate_grads = vec![0.0; compiled.circuit.len()];
    for (i, source) in compiled.sources.iter().enumerate() {
        if source.is_some() {
            gate_grads[i] = parameter_shift_circuit_gradient(&compiled.circuit, i)?;
        }
    }
    accumulate_tape(&compiled, &gate_grads, z, cfg)
}

fn nth_parametrized(circuit: &Circuit, which: usize) -> Result<usize> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.angle().is_some())
        .map(|(i, _)| i)
        .nth(which)
        .ok_or_else(|| Error::Index(format!("angle index {which} out of range")))
}

fn run_with_angle(
    circuit: &Circuit,
    gate_index: usize,
    gate: &Gate,
    angle: f64,
) -> Result<f64> {
    let mut shifted = Circuit::new(circuit.n_qubits())?;
    for (i, g) in circuit.gates().iter().enumerate() {
        if i == gate_index {
            shifted.push(gate.with_angle(angle)?)?;
        } else {
            shifted.push(*g)?;
        }
    }
    Ok(shifted.run()?.expectation_z0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn single_ry_circuit(angle: f64) -> Circuit {
        let mut c = Circuit::new(1).unwrap();
        c.push(Gate::Ry { target: 0, angle }).unwrap();
        c
    }

    #[test]
    fn single_qubit_ry_analytic() {
        // ⟨Z⟩ = cos θ, d⟨Z⟩/dθ = −sin θ.
        for theta in [0.0, 0.4, FRAC_PI_2, 2.0, PI] {
            let circuit = single_ry_circuit(theta);
            let (value, grads, _) = adjoint_circuit_gradient(&circuit).unwrap();
            assert!((value - theta.cos()).abs() < 1e-12);
            assert!((grads[0] + theta.sin()).abs() < 1e-12);

            let shift = parameter_shift_circuit_gradient(&circuit, 0).unwrap();
            assert!((shift + theta.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_rule_at_zero_and_half_pi() {
        let zero = parameter_shift_circuit_gradient(&single_ry_circuit(0.0), 0).unwrap();
        assert!(zero.abs() < 1e-12);
        let at_half_pi =
            parameter_shift_circuit_gradient(&single_ry_circuit(FRAC_PI_2), 0).unwrap();
        assert!((at_half_pi + 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_index_out_of_range() {
        let cfg = VqcConfig::new(2, 1, 1).unwrap();
        let theta = ThetaStore::zeros(&cfg);
        let z = vec![0.0; 2];
        let n_angles = 2 + 1 + 4; // RZ ×2, RZZ, RY ×4
        assert!(parameter_shift_gradient(&z, &theta, &cfg, n_angles - 1).is_ok());
        assert!(matches!(
            parameter_shift_gradient(&z, &theta, &cfg, n_angles),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn adjoint_matches_shift_tape() {
        let cfg = VqcConfig::new(2, 1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let theta = ThetaStore::random(&cfg, &mut rng);
            let z: Vec<f64> = (0..cfg.latent_dim())
                .map(|_| rng.gen_range(0.0..1.0))
                .collect();
            let (_, tape) = adjoint_gradient(&z, &theta, &cfg).unwrap();
            let shift = parameter_shift_tape(&z, &theta, &cfg).unwrap();
            for (a, s) in tape.d_theta.iter().zip(&shift.d_theta) {
                assert!((a - s).abs() < 1e-9, "theta grad mismatch: {a} vs {s}");
            }
            for (a, s) in tape.d_z.iter().zip(&shift.d_z) {
                assert!((a - s).abs() < 1e-9, "z grad mismatch: {a} vs {s}");
            }
        }
    }

    #[test]
    fn value_matches_forward() {
        let cfg = VqcConfig::new(3, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let theta = ThetaStore::random(&cfg, &mut rng);
        let z: Vec<f64> = (0..cfg.latent_dim())
            .map(|_| rng.gen_range(0.0..1.0))
            .collect();
        let (value, _) = adjoint_gradient(&z, &theta, &cfg).unwrap();
        let fwd = crate::vqc::forward(&z, &theta, &cfg).unwrap();
        assert_eq!(value, fwd);
    }

    #[test]
    fn pass_count_is_linear() {
        let cfg = VqcConfig::new(3, 2, 2).unwrap();
        let theta = ThetaStore::zeros(&cfg);
        let z = vec![0.25; cfg.latent_dim()];
        let compiled = compile(&z, &theta, &cfg).unwrap();
        let gate_count = compiled.circuit.len();
        let (_, _, stats) = adjoint_gradient_with_stats(&z, &theta, &cfg).unwrap();
        assert!(
            stats.state_passes <= 4 * gate_count,
            "{} passes for {} gates",
            stats.state_passes,
            gate_count
        );
    }

    #[test]
    fn zero_input_gradients_finite(){
        let cfg = VqcConfig::new(2, 2, 1).unwrap();
        let theta = ThetaStore::zeros(&cfg);
        let z = vec![0.0; cfg.latent_dim()];
        let (_, tape) = adjoint_gradient(&z, &theta, &cfg).unwrap();
        assert!(tape.d_z.iter().all(|g| g.is_finite()));
        assert!(tape.d_theta.iter().all(|g| g.is_finite()));
    }
}
