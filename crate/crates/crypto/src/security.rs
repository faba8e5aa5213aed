//! Statistical hiding and binding.

use qcore::linalg::inner;
use qcore::registers::apply_op_vec;
use qcore::{fidelity, trace_distance, ChannelDesc, Error, Result};
use serde::Serialize;
use uhlmann::{UhlmannInstance, UhlmannSolution};

use crate::scheme::CommitmentScheme;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecurityReport {
    /// `td(ρ₀, ρ₁)` on `C`: the optimal distinguishing advantage.
    pub hiding_stat: f64,
    /// `F(ρ₀, ρ₁)` on `C`: the best fidelity any sender map on `R` can reach.
    pub binding_opt: f64,
    /// `F((A ⊗ id_C)(ψ₀), ψ₁)` for a supplied attack `A`.
    pub binding_attack: Option<f64>,
}

/// The commitment pair as an Uhlmann instance with `A = C` and `B = R`.
pub fn scheme_instance(scheme: &CommitmentScheme) -> Result<UhlmannInstance> {
    UhlmannInstance::raw(scheme.split_state(0)?, scheme.split_state(1)?)
}

/// Fidelity reached by a sender channel on `R`.
pub fn attack_fidelity(scheme: &CommitmentScheme, attack: &ChannelDesc) -> Result<f64> {
    let (p0, p1) = (scheme.split_state(0)?, scheme.split_state(1)?);
    let dr = p0.d_b();
    if attack.d_in() != dr || attack.d_out() != dr {
        return Err(Error::DimensionMismatch { expected: dr, got: attack.d_in() });
    }
    let dims = [p0.d_a(), dr];
    let mut f = 0.0;
    for k in attack.kraus() {
        let v = apply_op_vec(p0.amplitudes(), &dims, &[1], &k)?;
        f += inner(p1.amplitudes(), &v).norm_sqr();
    }
    Ok(f.clamp(0.0, 1.0))
}

/// The polar completion of the canonical Uhlmann isometry, as a channel on `R`.
pub fn uhlmann_attack(scheme: &CommitmentScheme) -> Result<ChannelDesc> {
    let sol = UhlmannSolution::solve(&scheme_instance(scheme)?, 0.0)?;
    ChannelDesc::from_unitary(sol.unitary().clone())
}

pub fn evaluate(scheme: &CommitmentScheme, attack: Option<&ChannelDesc>) -> Result<SecurityReport> {
    let (p0, p1) = (scheme.split_state(0)?, scheme.split_state(1)?);
    let (r0, r1) = (p0.reduced_a(), p1.reduced_a());
    Ok(SecurityReport {
        hiding_stat: trace_distance(&r0, &r1)?.clamp(0.0, 1.0),
        binding_opt: fidelity(&r0, &r1)?,
        binding_attack: attack.map(|a| attack_fidelity(scheme, a)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::{Gate, GateCircuit};

    #[test]
    fn identical_commitments() {
        let c = GateCircuit::new(2).push(Gate::H, &[0]).push(Gate::CNOT, &[0, 1]);
        let s = CommitmentScheme::from_circuits(c.clone(), c, vec![0]).unwrap();
        let r = evaluate(&s, None).unwrap();
        assert!(r.hiding_stat < 1e-12 && (r.binding_opt - 1.0).abs() < 1e-12);
    }

    #[test]
    fn revealing_commitments() {
        // |b⟩_R|b⟩_C
        let c1 = GateCircuit::new(2).push(Gate::X, &[0]).push(Gate::X, &[1]);
        let s = CommitmentScheme::from_circuits(GateCircuit::new(2), c1, vec![1]).unwrap();
        let r = evaluate(&s, None).unwrap();
        assert!((r.hiding_stat - 1.0).abs() < 1e-12 && r.binding_opt < 1e-12);
    }

    #[test]
    fn attack_dimension_checked() {
        let s = CommitmentScheme::random(3, 1, 8, qcore::Seed(2)).unwrap();
        let wrong = ChannelDesc::identity(2).unwrap();
        assert!(evaluate(&s, Some(&wrong)).is_err());
    }
}
