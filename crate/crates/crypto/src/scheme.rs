//! Canonical commitments `|ψ_b⟩ = C_b|0…0⟩` on qubits split into a commit
//! register `C` (sent to the receiver) and a reveal register `R`.

use qcore::random::random_circuit;
use qcore::registers::{permute_vec, qubit_dims};
use qcore::state::AmplitudeList;
use qcore::{ensure_pure_cap, BipartiteState, CVec, Error, GateCircuit, Result, Seed};
use serde::{Deserialize, Serialize};

/// How the two commitment states are given.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeStates {
    Circuits { c0: GateCircuit, c1: GateCircuit },
    /// Explicit amplitudes, used when a construction has no exact circuit in the gate set.
    Vectors { psi0: CVec, psi1: CVec },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommitmentScheme {
    n_qubits: usize,
    states: SchemeStates,
    commit: Vec<usize>,
}

impl CommitmentScheme {
    /// Circuit form; `commit` lists the qubits of `C`.
    pub fn from_circuits(c0: GateCircuit, c1: GateCircuit, commit: Vec<usize>) -> Result<Self> {
        if c0.n_qubits != c1.n_qubits {
            return Err(Error::DimensionMismatch { expected: c0.n_qubits, got: c1.n_qubits });
        }
        c0.validate()?;
        c1.validate()?;
        let n = c0.n_qubits;
        Self::checked(n, SchemeStates::Circuits { c0, c1 }, commit)
    }

    /// Vector form on `n_qubits` qubits.
    pub fn from_vectors(n_qubits: usize, psi0: CVec, psi1: CVec, commit: Vec<usize>) -> Result<Self> {
        let d = 1usize << n_qubits;
        for v in [&psi0, &psi1] {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
            if (v.norm() - 1.0).abs() > qcore::TOL_VALIDATE {
                return Err(Error::InvalidState(format!("commitment state has norm {}", v.norm())));
            }
        }
        Self::checked(n_qubits, SchemeStates::Vectors { psi0, psi1 }, commit)
    }

    fn checked(n: usize, states: SchemeStates, mut commit: Vec<usize>) -> Result<Self> {
        ensure_pure_cap(1usize << n)?;
        commit.sort_unstable();
        commit.dedup();
        if commit.iter().any(|&q| q >= n) {
            return Err(Error::InvalidArgument(format!("commit register {commit:?} outside {n} qubits")));
        }
        Ok(Self { n_qubits: n, states, commit })
    }

    /// Random circuit scheme with `n_commit` commit qubits out of `n`.
    pub fn random(n: usize, n_commit: usize, gates: usize, seed: Seed) -> Result<Self> {
        let c0 = random_circuit(n, gates, seed.child("scheme", 0));
        let c1 = random_circuit(n, gates, seed.child("scheme", 1));
        Self::from_circuits(c0, c1, (0..n_commit.min(n)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn states(&self) -> &SchemeStates {
        &self.states
    }

    pub fn commit_registers(&self) -> &[usize] {
        &self.commit
    }

    /// The complement of the commit register.
    pub fn reveal_registers(&self) -> Vec<usize> {
        (0..self.n_qubits).filter(|q| !self.commit.contains(q)).collect()
    }

    /// `|ψ_b⟩` in the scheme's own qubit order.
    pub fn state(&self, b: u8) -> Result<CVec> {
        match (&self.states, b) {
            (SchemeStates::Circuits { c0, .. }, 0) => c0.state(),
            (SchemeStates::Circuits { c1, .. }, 1) => c1.state(),
            (SchemeStates::Vectors { psi0, .. }, 0) => Ok(psi0.clone()),
            (SchemeStates::Vectors { psi1, .. }, 1) => Ok(psi1.clone()),
            _ => Err(Error::InvalidArgument(format!("bit must be 0 or 1, got {b}"))),
        }
    }

    /// `|ψ_b⟩` regrouped as a bipartite state on `C ⊗ R`.
    pub fn split_state(&self, b: u8) -> Result<BipartiteState> {
        let v = self.state(b)?;
        let mut perm = self.commit.clone();
        perm.extend(self.reveal_registers());
        let w = permute_vec(&v, &qubit_dims(self.n_qubits), &perm)?;
        BipartiteState::new(w, 1 << self.commit.len(), 1 << (self.n_qubits - self.commit.len()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: SchemeFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        match f {
            SchemeFile::Circuits { c0, c1, commit } => Self::from_circuits(c0, c1, commit),
            SchemeFile::Vectors { n_qubits, psi0, psi1, commit } => {
                Self::from_vectors(n_qubits, psi0.to_vec(), psi1.to_vec(), commit)
            }
        }
    }

    pub fn to_json(&self) -> String {
        let f = match &self.states {
            SchemeStates::Circuits { c0, c1 } => SchemeFile::Circuits { c0: c0.clone(), c1: c1.clone(), commit: self.commit.clone() },
            SchemeStates::Vectors { psi0, psi1 } => SchemeFile::Vectors {
                n_qubits: self.n_qubits,
                psi0: AmplitudeList::from_vec(psi0),
                psi1: AmplitudeList::from_vec(psi1),
                commit: self.commit.clone(),
            },
        };
        serde_json::to_string(&f).expect("scheme serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SchemeFile {
    Circuits {
        #[serde(rename = "C0")]
        c0: GateCircuit,
        #[serde(rename = "C1")]
        c1: GateCircuit,
        commit: Vec<usize>,
    },
    Vectors {
        n_qubits: usize,
        psi0: AmplitudeList,
        psi1: AmplitudeList,
        commit: Vec<usize>,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::Gate;

    #[test]
    fn registers_partition_qubits() {
        let s = CommitmentScheme::from_circuits(GateCircuit::new(3), GateCircuit::new(3), vec![2, 0]).unwrap();
        assert_eq!(s.commit_registers(), &[0, 2]);
        assert_eq!(s.reveal_registers(), vec![1]);
        assert!(CommitmentScheme::from_circuits(GateCircuit::new(3), GateCircuit::new(2), vec![0]).is_err());
        assert!(CommitmentScheme::from_circuits(GateCircuit::new(2), GateCircuit::new(2), vec![5]).is_err());
    }

    #[test]
    fn split_state_moves_commit_first() {
        // |ψ⟩ = |0⟩|1⟩ with commit = qubit 1 → C ⊗ R = |1⟩|0⟩
        let c = GateCircuit::new(2).push(Gate::X, &[1]);
        let s = CommitmentScheme::from_circuits(c.clone(), c, vec![1]).unwrap();
        let b = s.split_state(0).unwrap();
        assert!((b.amplitudes()[2].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip() {
        let s = CommitmentScheme::random(3, 1, 10, Seed(1)).unwrap();
        assert_eq!(CommitmentScheme::from_json(&s.to_json()).unwrap(), s);
        let v = CommitmentScheme::from_vectors(1, qcore::linalg::ket(0, 2), qcore::linalg::ket(1, 2), vec![0]).unwrap();
        assert_eq!(CommitmentScheme::from_json(&v.to_json()).unwrap(), v);
    }
}
