//! Qubit circuits over a fixed Clifford+T gate set.
//!
//! Qubit 0 is the most significant tensor factor. Two-qubit gates list
//! `[control, target]` (CNOT) or the two qubits they act on (CZ, SWAP).

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::registers::{apply_op_cols, apply_op_vec, qubit_dims};
use crate::{c, check_pure_cap, cr, BipartiteState, CMat, CVec, Error, Result};

/// Gate kinds. `S = T²`; the extra Paulis and two-qubit gates are conveniences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H,
    T,
    Tdg,
    S,
    Sdg,
    X,
    Y,
    Z,
    CNOT,
    CZ,
    SWAP,
}

impl Gate {
    pub const ALL: [Gate; 11] =
        [Gate::H, Gate::T, Gate::Tdg, Gate::S, Gate::Sdg, Gate::X, Gate::Y, Gate::Z, Gate::CNOT, Gate::CZ, Gate::SWAP];

    pub fn arity(self) -> usize {
        match self {
            Gate::CNOT | Gate::CZ | Gate::SWAP => 2,
            _ => 1,
        }
    }

    pub fn inverse(self) -> Gate {
        match self {
            Gate::T => Gate::Tdg,
            Gate::Tdg => Gate::T,
            Gate::S => Gate::Sdg,
            Gate::Sdg => Gate::S,
            g => g,
        }
    }

    /// The gate's matrix on its own qubits, in listed order.
    pub fn matrix(self) -> CMat {
        let o = cr(0.0);
        let l = cr(1.0);
        let h = cr(FRAC_1_SQRT_2);
        let t = c(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        let i = c(0.0, 1.0);
        match self {
            Gate::H => CMat::from_row_slice(2, 2, &[h, h, h, -h]),
            Gate::T => CMat::from_row_slice(2, 2, &[l, o, o, t]),
            Gate::Tdg => CMat::from_row_slice(2, 2, &[l, o, o, t.conj()]),
            Gate::S => CMat::from_row_slice(2, 2, &[l, o, o, i]),
            Gate::Sdg => CMat::from_row_slice(2, 2, &[l, o, o, -i]),
            Gate::X => CMat::from_row_slice(2, 2, &[o, l, l, o]),
            Gate::Y => CMat::from_row_slice(2, 2, &[o, -i, i, o]),
            Gate::Z => CMat::from_row_slice(2, 2, &[l, o, o, -l]),
            Gate::CNOT => CMat::from_row_slice(4, 4, &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o]),
            Gate::CZ => CMat::from_row_slice(4, 4, &[l, o, o, o, o, l, o, o, o, o, l, o, o, o, o, -l]),
            Gate::SWAP => CMat::from_row_slice(4, 4, &[l, o, o, o, o, o, l, o, o, l, o, o, o, o, o, l]),
        }
    }
}

/// One gate application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    #[serde(rename = "g")]
    pub gate: Gate,
    #[serde(rename = "q")]
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: Gate, qubits: &[usize]) -> Self {
        Self { gate, qubits: qubits.to_vec() }
    }
}

/// Ordered gate list on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCircuit {
    pub n_qubits: usize,
    pub gates: Vec<GateOp>,
}

impl GateCircuit {
    /// Empty circuit.
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    /// Appends a gate (builder style). Validation happens in [`GateCircuit::validate`].
    pub fn push(mut self, gate: Gate, qubits: &[usize]) -> Self {
        self.gates.push(GateOp::new(gate, qubits));
        self
    }

    pub fn add(&mut self, gate: Gate, qubits: &[usize]) {
        self.gates.push(GateOp::new(gate, qubits));
    }

    /// Checks qubit indices and arities.
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::InvalidCircuit("n_qubits must be positive".into()));
        }
        for (k, op) in self.gates.iter().enumerate() {
            if op.qubits.len() != op.gate.arity() {
                return Err(Error::InvalidCircuit(format!(
                    "gate {k} ({:?}) takes {} qubits, got {}",
                    op.gate,
                    op.gate.arity(),
                    op.qubits.len()
                )));
            }
            if let Some(&q) = op.qubits.iter().find(|&&q| q >= self.n_qubits) {
                return Err(Error::InvalidCircuit(format!("gate {k} targets qubit {q} of {}", self.n_qubits)));
            }
            if op.qubits.len() == 2 && op.qubits[0] == op.qubits[1] {
                return Err(Error::InvalidCircuit(format!("gate {k} repeats qubit {}", op.qubits[0])));
            }
        }
        Ok(())
    }

    /// Parses and validates the JSON form.
    pub fn from_json(s: &str) -> Result<Self> {
        let c: GateCircuit = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serializes")
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// Applies the circuit to a vector of length `2^n`.
    pub fn apply_vec(&self, v: &CVec) -> Result<CVec> {
        self.validate()?;
        if !v.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(v.len()));
        }
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        check_pure_cap(v.len())?;
        let dims = qubit_dims(self.n_qubits);
        let mut out = v.clone();
        for op in &self.gates {
            out = apply_op_vec(&out, &dims, &op.qubits, &op.gate.matrix())?;
        }
        Ok(out)
    }

    /// Applies the circuit to a bipartite state, keeping its split.
    pub fn apply(&self, input: &BipartiteState) -> Result<BipartiteState> {
        let v = self.apply_vec(input.amplitudes())?;
        BipartiteState::new(v, input.d_a(), input.d_b())
    }

    /// The state `C|x⟩` for a basis label `x`, as a bipartite state with the given split.
    pub fn apply_basis(&self, x: usize, d_a: usize) -> Result<BipartiteState> {
        let d = self.dim();
        if x >= d || !d.is_multiple_of(d_a) {
            return Err(Error::InvalidArgument(format!("basis label {x} or split {d_a} invalid for dimension {d}")));
        }
        let v = self.apply_vec(&crate::linalg::ket(x, d))?;
        BipartiteState::new(v, d_a, d / d_a)
    }

    /// `C|0…0⟩` as a plain vector.
    pub fn state(&self) -> Result<CVec> {
        self.apply_vec(&crate::linalg::ket(0, self.dim()))
    }

    /// The induced `2^n × 2^n` unitary.
    pub fn unitary(&self) -> Result<CMat> {
        self.validate()?;
        crate::check_density_cap(self.dim())?;
        let dims = qubit_dims(self.n_qubits);
        let mut u = CMat::identity(self.dim(), self.dim());
        for op in &self.gates {
            u = apply_op_cols(&u, &dims, &op.qubits, &op.gate.matrix())?;
        }
        Ok(u)
    }

    /// Inverse circuit.
    pub fn dagger(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(|op| GateOp { gate: op.gate.inverse(), qubits: op.qubits.clone() }).collect(),
        }
    }

    /// `other` after `self` on the same qubits.
    pub fn then(&self, other: &GateCircuit) -> Result<Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, got: other.n_qubits });
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Self { n_qubits: self.n_qubits, gates })
    }

    /// The same gates on qubits shifted by `offset` inside an `n_total`-qubit circuit.
    pub fn embedded(&self, offset: usize, n_total: usize) -> Result<Self> {
        if offset + self.n_qubits > n_total {
            return Err(Error::InvalidCircuit(format!(
                "cannot place {} qubits at offset {offset} in {n_total}",
                self.n_qubits
            )));
        }
        Ok(Self {
            n_qubits: n_total,
            gates: self
                .gates
                .iter()
                .map(|op| GateOp { gate: op.gate, qubits: op.qubits.iter().map(|q| q + offset).collect() })
                .collect(),
        })
    }

    /// Relabels qubit `q` as `map[q]` inside an `n_total`-qubit circuit.
    pub fn relabeled(&self, map: &[usize], n_total: usize) -> Result<Self> {
        if map.len() != self.n_qubits || map.iter().any(|&m| m >= n_total) {
            return Err(Error::InvalidCircuit("bad qubit relabeling".into()));
        }
        Ok(Self {
            n_qubits: n_total,
            gates: self
                .gates
                .iter()
                .map(|op| GateOp { gate: op.gate, qubits: op.qubits.iter().map(|&q| map[q]).collect() })
                .collect(),
        })
    }

    /// `self ⊗ other` on disjoint qubits (`self` first).
    pub fn tensor(&self, other: &GateCircuit) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        let mut out = self.embedded(0, n)?;
        out.gates.extend(other.embedded(self.n_qubits, n)?.gates);
        Ok(out)
    }

    /// `k` parallel copies.
    pub fn tensor_power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("tensor power needs k ≥ 1".into()));
        }
        let n = self.n_qubits * k;
        let mut out = GateCircuit::new(n);
        for j in 0..k {
            out.gates.extend(self.embedded(j * self.n_qubits, n)?.gates);
        }
        Ok(out)
    }
}
