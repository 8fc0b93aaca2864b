//! Shared test oracles, kept independent of the simulator's strided-pair
//! implementation: gates are materialized as explicit 2^n × 2^n matrices and
//! applied by dense matrix-vector products.

// Each integration test binary compiles this module separately and uses a
// different subset of it. Matrix loops index by basis state on purpose.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use gqc_core::qsim::{Circuit, Gate};

pub type CMatrix = Vec<Vec<Complex64>>;

fn zeros(dim: usize) -> CMatrix {
    vec![vec![Complex64::new(0.0, 0.0); dim]; dim]
}

/// Explicit unitary of one gate on an n-qubit register (qubit 0 = least
/// significant bit of the basis index).
pub fn gate_matrix(gate: &Gate, n_qubits: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let mut m = zeros(dim);
    match *gate {
        Gate::H { target } => {
            let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let bit = 1usize << target;
            for k in 0..dim {
                if k & bit == 0 {
                    m[k][k] = inv_sqrt2;
                    m[k][k | bit] = inv_sqrt2;
                    m[k | bit][k] = inv_sqrt2;
                    m[k | bit][k | bit] = -inv_sqrt2;
                }
            }
        }
        Gate::Ry { target, angle } => {
            let c = Complex64::new((angle / 2.0).cos(), 0.0);
            let s = Complex64::new((angle / 2.0).sin(), 0.0);
            let bit = 1usize << target;
            for k in 0..dim {
                if k & bit == 0 {
                    m[k][k] = c;
                    m[k][k | bit] = -s;
                    m[k | bit][k] = s;
                    m[k | bit][k | bit] = c;
                }
            }
        }
        Gate::Rz { target, angle } => {
            let bit = 1usize << target;
            for k in 0..dim {
                let sign = if k & bit == 0 { -1.0 } else { 1.0 };
                m[k][k] = Complex64::from_polar(1.0, sign * angle / 2.0);
            }
        }
        Gate::Cnot { control, target } => {
            let cbit = 1usize << control;
            let tbit = 1usize << target;
            for k in 0..dim {
                let dst = if k & cbit != 0 { k ^ tbit } else { k };
                m[dst][k] = Complex64::new(1.0, 0.0);
            }
        }
        Gate::Rzz { a, b, angle } => {
            for k in 0..dim {
                let parity = ((k >> a) ^ (k >> b)) & 1;
                let sign = if parity == 0 { -1.0 } else { 1.0 };
                m[k][k] = Complex64::from_polar(1.0, sign * angle / 2.0);
            }
        }
    }
    m
}

pub fn mat_vec(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Runs a circuit on |0...0⟩ purely through explicit matrices.
pub fn matrix_run(circuit: &Circuit) -> Vec<Complex64> {
    let dim = 1usize << circuit.n_qubits();
    let mut state = vec![Complex64::new(0.0, 0.0); dim];
    state[0] = Complex64::new(1.0, 0.0);
    for gate in circuit.gates() {
        let m = gate_matrix(gate, circuit.n_qubits());
        state = mat_vec(&m, &state);
    }
    state
}

/// ⟨Z on qubit 0⟩ of an explicit state vector.
pub fn matrix_expectation_z0(state: &[Complex64]) -> f64 {
    state
        .iter()
        .enumerate()
        .map(|(k, a)| if k & 1 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

/// Central finite-difference gradient of a scalar function.
pub fn central_differences(mut f: impl FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = f(&probe);
        probe[i] = orig - h;
        let down = f(&probe);
        probe[i] = orig;
        grad.push((up - down) / (2.0 * h));
    }
    grad
}

/// Draws a random circuit over the full gate set (for norm/unitarity checks,
/// not classifier-shaped).
pub fn random_circuit(
    n_qubits: usize,
    n_gates: usize,
    rng: &mut impl rand::Rng,
) -> Circuit {
    let mut circuit = Circuit::new(n_qubits).unwrap();
    for _ in 0..n_gates {
        let q = rng.gen_range(0..n_qubits);
        let q2 = if n_qubits > 1 {
            let mut other = rng.gen_range(0..n_qubits);
            while other == q {
                other = rng.gen_range(0..n_qubits);
            }
            other
        } else {
            q
        };
        let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let gate = match rng.gen_range(0..5) {
            0 => Gate::H { target: q },
            1 => Gate::Ry { target: q, angle },
            2 => Gate::Rz { target: q, angle },
            3 if n_qubits > 1 => Gate::Cnot {
                control: q,
                target: q2,
            },
            _ if n_qubits > 1 => Gate::Rzz {
                a: q,
                b: q2,
                angle,
            },
            _ => Gate::Ry { target: q, angle },
        };
        circuit.push(gate).unwrap();
    }
    circuit
}
