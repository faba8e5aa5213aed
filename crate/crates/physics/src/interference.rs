//! Swapping and interference detection for orthogonal state pairs.
//!
//! A swap `U` exchanges `|C⟩ ↔ |D⟩`. A distinguisher `V` writes its guess for
//! `(|C⟩ ± |D⟩)/√2` into its decision qubit, which is always qubit 0: `0` for
//! `+`, `1` for `−`. Ancillas sit in front of the input qubits and start in
//! `|0⟩`.

use serde::{Deserialize, Serialize};

use qcore::linalg::{inner, kron, ket, outer};
use qcore::registers::{permute_vec, qubit_dims};
use qcore::{cr, BipartiteState, CMat, CVec, Error, Gate, GateCircuit, Result, Seed, TOL_EXACT, TOL_STAT};
use uhlmann::{UhlmannInstance, UhlmannSolution};

/// Two `n`-qubit circuits whose output states are orthogonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthPair {
    #[serde(rename = "C")]
    pub c: GateCircuit,
    #[serde(rename = "D")]
    pub d: GateCircuit,
}

impl OrthPair {
    pub fn new(c: GateCircuit, d: GateCircuit) -> Result<Self> {
        if c.n_qubits != d.n_qubits {
            return Err(Error::DimensionMismatch { expected: c.n_qubits, got: d.n_qubits });
        }
        let ov = inner(&c.state()?, &d.state()?).norm();
        if ov > TOL_EXACT {
            return Err(Error::InvalidInstance(format!("states are not orthogonal: |⟨C|D⟩| = {ov:.3e}")));
        }
        Ok(Self { c, d })
    }

    /// `C` is a random circuit and `D = C·X₀`, so `|D⟩ = C|10…0⟩`.
    pub fn random(n: usize, len: usize, seed: Seed) -> Result<Self> {
        let c = qcore::random::random_circuit(n, len, seed);
        let d = GateCircuit::new(n).push(Gate::X, &[0]).then(&c)?;
        Self::new(c, d)
    }

    pub fn n(&self) -> usize {
        self.c.n_qubits
    }

    pub fn states(&self) -> Result<(CVec, CVec)> {
        Ok((self.c.state()?, self.d.state()?))
    }

    /// `(|C⟩ + sign·|D⟩)/√2`.
    pub fn superposition(&self, sign: f64) -> Result<CVec> {
        let (c, d) = self.states()?;
        Ok((c + d * cr(sign)) * cr(std::f64::consts::FRAC_1_SQRT_2))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.c, raw.d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pair serializes")
    }
}

fn check_swaps(u: &CMat, psi: &CVec, phi: &CVec) -> Result<()> {
    if u.nrows() != psi.len() || psi.len() != phi.len() {
        return Err(Error::DimensionMismatch { expected: psi.len(), got: u.nrows() });
    }
    let err = (u * psi - phi).norm().max((u * phi - psi).norm());
    if err > TOL_EXACT {
        return Err(Error::InvalidArgument(format!("U does not swap the pair (error {err:.3e})")));
    }
    Ok(())
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`.
pub fn controlled(u: &CMat) -> CMat {
    let d = u.nrows();
    let p0 = outer(&ket(0, 2), &ket(0, 2));
    let p1 = outer(&ket(1, 2), &ket(1, 2));
    kron(&p0, &CMat::identity(d, d)) + kron(&p1, u)
}

/// Reflection `I − 2|w⟩⟨w|` with `w ∝ ψ − φ`; swaps two orthonormal vectors.
pub fn householder_swap(psi: &CVec, phi: &CVec) -> Result<CMat> {
    let w = psi - phi;
    let norm = w.norm();
    if norm < TOL_EXACT {
        return Err(Error::InvalidArgument("states coincide".into()));
    }
    let w = w / cr(norm);
    Ok(CMat::identity(psi.len(), psi.len()) - outer(&w, &w) * cr(2.0))
}

/// Hadamard test `(H ⊗ I)·cU·(H ⊗ I)` on `1 + n` qubits, after checking that
/// `U` swaps `ψ` and `φ`.
pub fn swap_to_distinguisher(u: &CMat, psi: &CVec, phi: &CVec) -> Result<CMat> {
    check_swaps(u, psi, phi)?;
    let h = kron(&Gate::H.matrix(), &CMat::identity(u.nrows(), u.nrows()));
    Ok(&h * controlled(u) * &h)
}

/// `V†·Z₀·V` for a distinguisher `V` on `n_anc` ancilla qubits followed by the input.
///
/// With the ancillas in `|0…0⟩` this returns them there and swaps the pair.
pub fn distinguisher_to_swap(v: &CMat, n_anc: usize) -> Result<CMat> {
    let d = v.nrows();
    if v.ncols() != d || !d.is_power_of_two() || d < 2 {
        return Err(Error::InvalidArgument(format!("distinguisher must be a square qubit unitary, got {}×{}", d, v.ncols())));
    }
    let n_total = d.trailing_zeros() as usize;
    if n_anc >= n_total {
        return Err(Error::InvalidArgument(format!("{n_anc} ancillas leave no input qubits")));
    }
    let z0 = kron(&Gate::Z.matrix(), &CMat::identity(d / 2, d / 2));
    Ok(v.adjoint() * z0 * v)
}

/// `C̄` on `[A, B]`: `(|0⟩|first⟩ + |1⟩|second⟩)/√2`.
fn bar(first: &CMat, second: &CMat) -> CMat {
    let d = first.nrows();
    let h = kron(&Gate::H.matrix(), &CMat::identity(d, d));
    let prep = kron(&CMat::identity(2, 2), first);
    controlled(second) * controlled(&first.adjoint()) * prep * h
}

/// `X ↦ |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ X` with control `ctrl` among `n_total` qubits and
/// `X` on the qubits `targets` (contiguous, in order).
fn controlled_on(x: &CMat, ctrl: usize, first_target: usize, n_total: usize) -> Result<CMat> {
    let k = x.nrows().trailing_zeros() as usize;
    // build on [ctrl, targets..., rest...] and move back
    let mut order = vec![ctrl];
    order.extend(first_target..first_target + k);
    order.extend((0..n_total).filter(|q| *q != ctrl && !(first_target..first_target + k).contains(q)));
    let rest = 1usize << (n_total - 1 - k);
    let local = kron(&controlled(x), &CMat::identity(rest, rest));
    // local acts on qubits in `order`; conjugate by the permutation to standard order
    let dims = qubit_dims(n_total);
    let p = qcore::registers::permutation_matrix(&dims, &order)?;
    Ok(p.adjoint() * local * p)
}

/// The swap `U` from one Uhlmann call between `C̄|0⟩` and `D̄|0⟩` (split `A | B`).
pub fn swap_from_uhlmann(pair: &OrthPair) -> Result<CMat> {
    let n = pair.n();
    qcore::ensure_density_cap(2 << n)?;
    let (uc, ud) = (pair.c.unitary()?, pair.d.unitary()?);
    let zero = ket(0, 2 << n);
    let cbar = bar(&uc, &ud) * &zero;
    let dbar = bar(&ud, &uc) * &zero;
    let x = UhlmannInstance::raw(BipartiteState::new(cbar, 2, 1 << n)?, BipartiteState::new(dbar, 2, 1 << n)?)?;
    Ok(UhlmannSolution::solve(&x, 0.0)?.unitary().clone())
}

/// `(|C̃⟩, |D̃⟩)` on `[A, B, A', B']` with `B` holding `n` qubits.
pub fn tilde_states(pair: &OrthPair) -> Result<(CVec, CVec)> {
    let n = pair.n();
    let nt = n + 3;
    qcore::ensure_density_cap(1 << nt)?;
    let (uc, ud) = (pair.c.unitary()?, pair.d.unitary()?);
    let cbar = bar(&uc, &ud);
    let dbar = bar(&ud, &uc);
    let (a_prime, b_prime) = (n + 1, n + 2);
    // C̃: C̄ on AB, H on B', CNOT B' -> A'
    let tail = GateCircuit::new(nt).push(Gate::H, &[b_prime]).push(Gate::CNOT, &[b_prime, a_prime]).unitary()?;
    let ctilde = tail * kron(&cbar, &CMat::identity(4, 4));
    // D̃: then C̄† and D̄ on AB, both controlled by B'
    let dtilde = controlled_on(&dbar, b_prime, 0, nt)? * controlled_on(&cbar.adjoint(), b_prime, 0, nt)? * &ctilde;
    let zero = ket(0, 1 << nt);
    Ok((&ctilde * &zero, dtilde * zero))
}

/// The controlled swap `Ũ` on `[B', B]` (control first) from one Uhlmann call
/// between `|C̃⟩` and `|D̃⟩` with split `A A' | B' B`.
pub fn controlled_swap_from_uhlmann(pair: &OrthPair) -> Result<CMat> {
    let n = pair.n();
    let (ct, dt) = tilde_states(pair)?;
    // [A, B, A', B'] -> [A, A', B', B]
    let dims = [2, 1 << n, 2, 2];
    let perm = [0, 2, 3, 1];
    let ct = permute_vec(&ct, &dims, &perm)?;
    let dt = permute_vec(&dt, &dims, &perm)?;
    let db = 2 << n;
    let x = UhlmannInstance::raw(BipartiteState::new(ct, 4, db)?, BipartiteState::new(dt, 4, db)?)?;
    Ok(UhlmannSolution::solve(&x, 0.0)?.unitary().clone())
}

/// Largest violation of `Ũ|b⟩|C⟩ = |b⟩|X^b C⟩`, `Ũ|b⟩|D⟩ = |b⟩|X^b D⟩`.
pub fn controlled_swap_residual(u: &CMat, pair: &OrthPair) -> Result<f64> {
    let (c, d) = pair.states()?;
    let (k0, k1) = (ket(0, 2), ket(1, 2));
    let cases = [(&k0, &c, &c), (&k0, &d, &d), (&k1, &c, &d), (&k1, &d, &c)];
    Ok(cases
        .iter()
        .map(|(b, x, y)| (u * qcore::linalg::kron_vec(b, x) - qcore::linalg::kron_vec(b, y)).norm())
        .fold(0.0, f64::max))
}

/// Outcome probabilities of the decision qubit of `v` on `|0…0⟩ ⊗ input`.
pub fn decision_probabilities(v: &CMat, input: &CVec) -> Result<[f64; 2]> {
    let d = v.nrows();
    if !d.is_multiple_of(input.len()) {
        return Err(Error::DimensionMismatch { expected: d, got: input.len() });
    }
    let out = v * qcore::linalg::kron_vec(&ket(0, d / input.len()), input);
    let p0: f64 = out.rows(0, d / 2).norm_squared();
    Ok([p0, out.rows(d / 2, d / 2).norm_squared()])
}

/// Decides the sign of `input = (|C⟩ ± |D⟩)/√2`: `0` for `+`, `1` for `−`.
///
/// Runs the Hadamard test on the controlled swap. Fails when the outcome is not
/// deterministic, or when `input` leaves the span of the pair.
pub fn interference_detect(pair: &OrthPair, input: &CVec) -> Result<u8> {
    let (c, d) = pair.states()?;
    if input.len() != c.len() {
        return Err(Error::DimensionMismatch { expected: c.len(), got: input.len() });
    }
    let weight = inner(&c, input).norm_sqr() + inner(&d, input).norm_sqr();
    if (weight - input.norm_squared()).abs() > TOL_STAT || (input.norm() - 1.0).abs() > TOL_STAT {
        return Err(Error::InvalidState(format!("input is outside the span of the pair (weight {weight:.6})")));
    }
    let u = controlled_swap_from_uhlmann(pair)?;
    let h = kron(&Gate::H.matrix(), &CMat::identity(c.len(), c.len()));
    let v = &h * u * &h;
    let [p0, p1] = decision_probabilities(&v, input)?;
    if p0 >= 1.0 - TOL_STAT {
        Ok(0)
    } else if p1 >= 1.0 - TOL_STAT {
        Ok(1)
    } else {
        Err(Error::InvalidState(format!("input is not one of the two superpositions (p0 = {p0:.6})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_pair() -> OrthPair {
        OrthPair::new(GateCircuit::new(1), GateCircuit::new(1).push(Gate::X, &[0])).unwrap()
    }

    #[test]
    fn x_swaps_basis_states() {
        let (c, d) = basis_pair().states().unwrap();
        let v = swap_to_distinguisher(&Gate::X.matrix(), &c, &d).unwrap();
        let plus = basis_pair().superposition(1.0).unwrap();
        let minus = basis_pair().superposition(-1.0).unwrap();
        assert!((decision_probabilities(&v, &plus).unwrap()[0] - 1.0).abs() < 1e-12);
        assert!((decision_probabilities(&v, &minus).unwrap()[1] - 1.0).abs() < 1e-12);
        assert!(swap_to_distinguisher(&Gate::Z.matrix(), &c, &d).is_err());
    }

    #[test]
    fn hadamard_distinguisher_gives_x() {
        let u = distinguisher_to_swap(&Gate::H.matrix(), 0).unwrap();
        assert!((u - Gate::X.matrix()).norm() < 1e-12);
    }

    #[test]
    fn basis_pair_gives_controlled_x() {
        let pair = basis_pair();
        let u = controlled_swap_from_uhlmann(&pair).unwrap();
        assert!((u - controlled(&Gate::X.matrix())).norm() < 1e-8);
        assert_eq!(interference_detect(&pair, &pair.superposition(1.0).unwrap()).unwrap(), 0);
        assert_eq!(interference_detect(&pair, &pair.superposition(-1.0).unwrap()).unwrap(), 1);
        assert!(interference_detect(&pair, &ket(0, 2)).is_err());
    }

    #[test]
    fn non_orthogonal_pair_rejected() {
        let c = GateCircuit::new(1);
        let d = GateCircuit::new(1).push(Gate::H, &[0]);
        assert!(matches!(OrthPair::new(c, d), Err(Error::InvalidInstance(_))));
    }
}
