//! Dense state-vector simulator for small qubit registers.
//!
//! Qubit index 0 is the least-significant bit of the amplitude index, so the
//! "first qubit" of the classifier observable acts on bit 0 of each basis
//! state. Gates are applied in place over strided amplitude pairs; the full
//! 2^n x 2^n unitary is never materialized here (an explicit-matrix route
//! exists only as a test oracle).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the simulator accepts (2^24 amplitudes, ~256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Gate set: exactly what the classifier circuits need.
///
/// Rotations follow the generator convention `exp(-i θ P / 2)` with
/// P ∈ {Y, Z, Z⊗Z}; H and CNOT carry no angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Hadamard on one qubit.
    H { target: usize },
    /// `exp(-i θ Y / 2)` on one qubit.
    Ry { target: usize, angle: f64 },
    /// `exp(-i θ Z / 2)` on one qubit.
    Rz { target: usize, angle: f64 },
    /// Controlled-X; flips `target` when `control` is set.
    Cnot { control: usize, target: usize },
    /// `exp(-i θ (Z⊗Z) / 2)` on a qubit pair.
    Rzz { a: usize, b: usize, angle: f64 },
}

impl Gate {
    /// Qubit indices the gate acts on.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H { target } | Gate::Ry { target, .. } | Gate::Rz { target, .. } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Rzz { a, b, .. } => vec![a, b],
        }
    }

    /// Rotation angle, absent for H and CNOT.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Ry { angle, .. } | Gate::Rz { angle, .. } | Gate::Rzz { angle, .. } => {
                Some(angle)
            }
            Gate::H { .. } | Gate::Cnot { .. } => None,
        }
    }

    /// Copy of the gate with the rotation angle replaced.
    ///
    /// Returns an error for the non-parametrized gates.
    pub fn with_angle(&self, angle: f64) -> Result<Gate> {
        match *self {
            Gate::Ry { target, .. } => Ok(Gate::Ry { target, angle }),
            Gate::Rz { target, .. } => Ok(Gate::Rz { target, angle }),
            Gate::Rzz { a, b, .. } => Ok(Gate::Rzz { a, b, angle }),
            Gate::H { .. } | Gate::Cnot { .. } => Err(Error::Domain(
                "gate has no angle to replace".to_string(),
            )),
        }
    }

    /// Inverse gate: rotations negate their angle, H and CNOT are involutions.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Ry { target, angle } => Gate::Ry {
                target,
                angle: -angle,
            },
            Gate::Rz { target, angle } => Gate::Rz {
                target,
                angle: -angle,
            },
            Gate::Rzz { a, b, angle } => Gate::Rzz { a, b, angle: -angle },
            g @ (Gate::H { .. } | Gate::Cnot { .. }) => g,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let targets = self.targets();
        for &t in &targets {
            if t >= n_qubits {
                return Err(Error::Index(format!(
                    "gate target {t} out of range for {n_qubits} qubit(s)"
                )));
            }
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::Index(format!(
                "two-qubit gate targets must be distinct, got {}",
                targets[0]
            )));
        }
        Ok(())
    }
}

/// 2^n complex amplitudes of an n-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros basis state |0...0⟩.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Size(format!(
                "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Squared 2-norm; 1 for any physical state.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::H { target } => self.apply_h(target),
            Gate::Ry { target, angle } => self.apply_ry(target, angle),
            Gate::Rz { target, angle } => self.apply_rz(target, angle),
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
            Gate::Rzz { a, b, angle } => self.apply_rzz(a, b, angle),
        }
        Ok(())
    }

    /// ⟨Z⟩ on qubit 0: Σ_k ±|a_k|² with the sign taken from bit 0 of k.
    /// Clamped to [-1, 1] to absorb accumulation rounding.
    pub fn expectation_z0(&self) -> f64 {
        let mut acc = 0.0;
        for (k, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if k & 1 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
        }
        acc.clamp(-1.0, 1.0)
    }

    /// Visits amplitude pairs (i, i | 1<<q) with bit q clear in i.
    fn for_each_pair(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let bit = 1usize << q;
        let dim = self.amplitudes.len();
        let mut base = 0;
        while base < dim {
            for i0 in base..base + bit {
                let i1 = i0 | bit;
                let (lo, hi) = self.amplitudes.split_at_mut(i1);
                f(&mut lo[i0], &mut hi[0]);
            }
            base += bit << 1;
        }
    }

    fn apply_h(&mut self, q: usize) {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        self.for_each_pair(q, |a0, a1| {
            let (x0, x1) = (*a0, *a1);
            *a0 = (x0 + x1) * inv_sqrt2;
            *a1 = (x0 - x1) * inv_sqrt2;
        });
    }

    fn apply_ry(&mut self, q: usize, angle: f64) {
        let c = (angle / 2.0).cos();
        let s = (angle / 2.0).sin();
        self.for_each_pair(q, |a0, a1| {
            let (x0, x1) = (*a0, *a1);
            *a0 = x0 * c - x1 * s;
            *a1 = x0 * s + x1 * c;
        });
    }

    fn apply_rz(&mut self, q: usize, angle: f64) {
        let phase0 = Complex64::from_polar(1.0, -angle / 2.0);
        let phase1 = Complex64::from_polar(1.0, angle / 2.0);
        let bit = 1usize << q;
        for (k, amp) in self.amplitudes.iter_mut().enumerate() {
            *amp *= if k & bit == 0 { phase0 } else { phase1 };
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for k in 0..self.amplitudes.len() {
            if k & cbit != 0 && k & tbit == 0 {
                self.amplitudes.swap(k, k | tbit);
            }
        }
    }

    fn apply_rzz(&mut self, a: usize, b: usize, angle: f64) {
        // Z⊗Z eigenvalue is +1 when bits a and b agree, -1 otherwise.
        let phase_same = Complex64::from_polar(1.0, -angle / 2.0);
        let phase_diff = Complex64::from_polar(1.0, angle / 2.0);
        for (k, amp) in self.amplitudes.iter_mut().enumerate() {
            let parity = ((k >> a) ^ (k >> b)) & 1;
            *amp *= if parity == 0 { phase_same } else { phase_diff };
        }
    }
}

/// Applies Pauli Y to a raw amplitude buffer: |0⟩ → i|1⟩, |1⟩ → -i|0⟩.
pub(crate) fn apply_pauli_y(amps: &mut [Complex64], q: usize) {
    let bit = 1usize << q;
    let i_unit = Complex64::new(0.0, 1.0);
    let mut base = 0;
    while base < amps.len() {
        for i0 in base..base + bit {
            let i1 = i0 | bit;
            let (x0, x1) = (amps[i0], amps[i1]);
            amps[i0] = -i_unit * x1;
            amps[i1] = i_unit * x0;
        }
        base += bit << 1;
    }
}

/// Applies Pauli Z to a raw amplitude buffer.
pub(crate) fn apply_pauli_z(amps: &mut [Complex64], q: usize) {
    let bit = 1usize << q;
    for (k, amp) in amps.iter_mut().enumerate() {
        if k & bit != 0 {
            *amp = -*amp;
        }
    }
}

/// Applies Z⊗Z to a raw amplitude buffer.
pub(crate) fn apply_pauli_zz(amps: &mut [Complex64], a: usize, b: usize) {
    for (k, amp) in amps.iter_mut().enumerate() {
        if ((k >> a) ^ (k >> b)) & 1 == 1 {
            *amp = -*amp;
        }
    }
}

/// Ordered gate list bound to a fixed register width.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::Size(format!(
                "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for gate in gates {
            self.push(gate)?;
        }
        Ok(())
    }

    /// Runs the circuit on |0...0⟩.
    pub fn run(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.n_qubits)?;
        for gate in &self.gates {
            state.apply(gate)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn assert_amps(state: &StateVector, expected: &[(f64, f64)], tol: f64) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (amp, &(re, im)) in state.amplitudes().iter().zip(expected) {
            assert!(
                (amp.re - re).abs() <= tol && (amp.im - im).abs() <= tol,
                "amplitudes {:?} != expected {:?}",
                state.amplitudes(),
                expected
            );
        }
    }

    #[test]
    fn zero_state_basis() {
        let s1 = StateVector::zero(1).unwrap();
        assert_amps(&s1, &[(1.0, 0.0), (0.0, 0.0)], 0.0);
        let s2 = StateVector::zero(2).unwrap();
        assert_amps(&s2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)], 0.0);
    }

    #[test]
    fn zero_state_size_guard() {
        assert!(matches!(StateVector::zero(25), Err(Error::Size(_))));
        assert!(matches!(StateVector::zero(0), Err(Error::Size(_))));
        assert!(StateVector::zero(24).is_ok());
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&Gate::H { target: 0 }).unwrap();
        assert_amps(&s, &[(FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)], 1e-15);
    }

    #[test]
    fn ry_pi_flips_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply(&Gate::Ry {
            target: 0,
            angle: PI,
        })
        .unwrap();
        assert_amps(&s, &[(0.0, 0.0), (1.0, 0.0)], 1e-15);
    }

    #[test]
    fn cnot_truth_table() {
        // |q0=1, q1=0⟩ is amplitude index 1; control 0 flips qubit 1 → index 3.
        let mut s = StateVector::zero(2).unwrap();
        s.apply(&Gate::Ry {
            target: 0,
            angle: PI,
        })
        .unwrap();
        s.apply(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_amps(&s, &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)], 1e-15);
    }

    #[test]
    fn expectation_z0_eigenstates() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.expectation_z0(), 1.0);

        let mut plus = StateVector::zero(1).unwrap();
        plus.apply(&Gate::H { target: 0 }).unwrap();
        assert!(plus.expectation_z0().abs() < 1e-15);

        // First qubit excited, second left in |0⟩.
        let mut s = StateVector::zero(2).unwrap();
        s.apply(&Gate::Ry {
            target: 0,
            angle: PI,
        })
        .unwrap();
        assert!((s.expectation_z0() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_target_rejected() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply(&Gate::H { target: 2 }),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            s.apply(&Gate::Cnot {
                control: 1,
                target: 1
            }),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn rzz_matches_cnot_rz_cnot() {
        let angle = 0.7431;
        let mut direct = StateVector::zero(3).unwrap();
        direct.apply(&Gate::H { target: 0 }).unwrap();
        direct.apply(&Gate::H { target: 1 }).unwrap();
        direct.apply(&Gate::H { target: 2 }).unwrap();
        let mut decomposed = direct.clone();

        direct.apply(&Gate::Rzz { a: 1, b: 2, angle }).unwrap();

        decomposed
            .apply(&Gate::Cnot {
                control: 1,
                target: 2,
            })
            .unwrap();
        decomposed.apply(&Gate::Rz { target: 2, angle }).unwrap();
        decomposed
            .apply(&Gate::Cnot {
                control: 1,
                target: 2,
            })
            .unwrap();

        for (a, b) in direct.amplitudes().iter().zip(decomposed.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let gates = [
            Gate::H { target: 1 },
            Gate::Ry {
                target: 0,
                angle: 0.3,
            },
            Gate::Rz {
                target: 2,
                angle: -1.1,
            },
            Gate::Cnot {
                control: 0,
                target: 2,
            },
            Gate::Rzz {
                a: 0,
                b: 1,
                angle: 2.2,
            },
        ];
        let mut s = StateVector::zero(3).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        for g in gates.iter().rev() {
            s.apply(&g.inverse()).unwrap();
        }
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-12);
        assert!(s.norm_sqr() - 1.0 < 1e-12);
    }
}
