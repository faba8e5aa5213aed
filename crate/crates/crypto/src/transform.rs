//! Scheme transformations.

use qcore::linalg::{kron_vec, kron_vec_pow, ket};
use qcore::{cr, Error, Result};
use uhlmann::UhlmannInstance;

use crate::scheme::{CommitmentScheme, SchemeStates};

/// `|ψ'_b⟩ = (|0⟩|ψ₀⟩ + (−1)^b |1⟩|ψ₁⟩)/√2` with the new qubit first.
///
/// The new commit register is the old reveal register plus the new qubit; the
/// new reveal register is the old commit register. The result is in vector form
/// because controlled versions of the circuits are not available in the gate set.
pub fn flavor_switch(scheme: &CommitmentScheme) -> Result<CommitmentScheme> {
    let (p0, p1) = (scheme.state(0)?, scheme.state(1)?);
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    let (k0, k1) = (ket(0, 2), ket(1, 2));
    let a = kron_vec(&k0, &p0) * s;
    let b = kron_vec(&k1, &p1) * s;
    let mut commit = vec![0];
    commit.extend(scheme.reveal_registers().iter().map(|q| q + 1));
    CommitmentScheme::from_vectors(scheme.n_qubits() + 1, &a + &b, &a - &b, commit)
}

/// `k` parallel copies; copy `j` occupies qubits `j·n .. (j+1)·n`.
pub fn tensor_amplify(scheme: &CommitmentScheme, k: usize) -> Result<CommitmentScheme> {
    if k == 0 {
        return Err(Error::InvalidArgument("tensor amplification needs k ≥ 1".into()));
    }
    let n = scheme.n_qubits();
    let commit: Vec<usize> = (0..k).flat_map(|j| scheme.commit_registers().iter().map(move |q| q + j * n)).collect();
    qcore::ensure_pure_cap(1usize << (n * k))?;
    match scheme.states() {
        SchemeStates::Circuits { c0, c1 } => CommitmentScheme::from_circuits(c0.tensor_power(k)?, c1.tensor_power(k)?, commit),
        SchemeStates::Vectors { psi0, psi1 } => {
            CommitmentScheme::from_vectors(n * k, kron_vec_pow(psi0, k), kron_vec_pow(psi1, k), commit)
        }
    }
}

/// The instance's two states as a commitment with `C = A`.
pub fn commitment_from_instance(x: &UhlmannInstance) -> Result<CommitmentScheme> {
    match x {
        UhlmannInstance::Circuits { n, c, d } => CommitmentScheme::from_circuits(c.clone(), d.clone(), (0..*n).collect()),
        UhlmannInstance::Raw { psi, phi } => {
            let (da, db) = (psi.d_a(), psi.d_b());
            for d in [da, db] {
                if !d.is_power_of_two() {
                    return Err(Error::NotPowerOfTwo(d));
                }
            }
            let na = da.trailing_zeros() as usize;
            let n = na + db.trailing_zeros() as usize;
            CommitmentScheme::from_vectors(n, psi.amplitudes().clone(), phi.amplitudes().clone(), (0..na).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::Seed;

    #[test]
    fn tensor_one_is_identity_up_to_form() {
        let s = CommitmentScheme::random(3, 2, 12, Seed(5)).unwrap();
        let t = tensor_amplify(&s, 1).unwrap();
        assert_eq!(t.commit_registers(), s.commit_registers());
        assert!((t.state(1).unwrap() - s.state(1).unwrap()).norm() < 1e-15);
        assert!(tensor_amplify(&s, 0).is_err());
    }

    #[test]
    fn flavor_switch_swaps_registers() {
        let s = CommitmentScheme::random(3, 1, 12, Seed(6)).unwrap();
        let f = flavor_switch(&s).unwrap();
        assert_eq!(f.commit_registers(), &[0, 2, 3]);
        assert_eq!(f.reveal_registers(), vec![1]);
    }
}
