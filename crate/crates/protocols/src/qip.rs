//! The verifier of the SZK protocol with two substitutions: test copies come
//! from a state-synthesis oracle with a configurable preparation error, and the
//! final check is [`approx_measure`](crate::measure::approx_measure) against
//! the program `|D⟩^{⊗m}`.

use qcore::linalg::{inner, kron_vec_pow, trace_distance_pure};
use qcore::random::random_state_with;
use qcore::{cr, ensure_density_cap, CMat, CVec, DensityOp, Error, Result, Seed};
use rand::Rng;
use serde::{Deserialize, Serialize};
use uhlmann::UhlmannInstance;

use crate::measure::{default_copies, measure_branches, MeasureMode};
use crate::prover::ProverStrategy;
use crate::szk::{b_registers, check_copies, random_permutation, ProtocolResult, RoundRecord, Setup};

/// Largest measured dimension `(d_A d_B)^m` handed to the dense measurement.
pub const DENSE_MEASURE_CAP: usize = 256;

/// Oracle and measurement settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QipOracle {
    /// Each test copy is `√(1−δ²)|C⟩ + δ|C^⊥⟩`, at trace distance `δ` from `|C⟩`.
    pub prep_error: f64,
    pub mode: MeasureMode,
    /// Program copies for DME mode; derived from `measure_error` when absent.
    pub k_q: Option<usize>,
    pub measure_error: f64,
}

impl Default for QipOracle {
    fn default() -> Self {
        Self { prep_error: 0.0, mode: MeasureMode::IdealReflection, k_q: None, measure_error: 1e-2 }
    }
}

impl QipOracle {
    pub fn copies(&self) -> usize {
        self.k_q.unwrap_or_else(|| default_copies(self.measure_error))
    }
}

/// The oracle's test copy, with `|C^⊥⟩` drawn from `seed`.
pub fn oracle_copy(c: &CVec, delta: f64, seed: Seed) -> Result<CVec> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("preparation error must lie in [0, 1], got {delta}")));
    }
    if delta == 0.0 {
        return Ok(c.clone());
    }
    let mut r = random_state_with(c.len(), &mut seed.child("qip-perp", 0).rng());
    r -= c * inner(c, &r);
    let perp = &r / cr(r.norm());
    Ok(c * cr((1.0 - delta * delta).sqrt()) + perp * cr(delta))
}

/// One execution of the modified verifier.
pub fn qip_run(x: &UhlmannInstance, m: usize, prover: &ProverStrategy, oracle: &QipOracle, seed: Seed) -> Result<ProtocolResult> {
    check_copies(m)?;
    let setup = Setup::new(x)?;
    let mut rng = seed.rng();
    let perm = random_permutation(m + 1, &mut rng);
    let copy = oracle_copy(setup.c.amplitudes(), oracle.prep_error, seed)?;
    let program = kron_vec_pow(setup.d.amplitudes(), m);
    let pair = setup.c.d_a() * setup.c.d_b();
    let k_q = oracle.copies();

    // (Pr[b = 1], unnormalized accepted A₀B₀ state as a matrix)
    let (p_acc, out): (f64, CMat) = match prover.product_unitaries(m + 1) {
        Some(us) => {
            let us = us?;
            let outs: Vec<CVec> = (1..=m).map(|i| setup.dressed(&copy, &us[perm[i]])).collect::<Result<_>>()?;
            let p = if program.len() <= DENSE_MEASURE_CAP {
                let tau = outs.iter().skip(1).fold(outs[0].clone(), |a, b| qcore::linalg::kron_vec(&a, b));
                let tau = DensityOp::from_pure(&tau, &[program.len()])?;
                measure_branches(&tau, &program, k_q, oracle.mode)?.prob_one
            } else if oracle.mode == MeasureMode::IdealReflection {
                // the ideal reflection test on a product state factorizes
                outs.iter().map(|o| inner(setup.d.amplitudes(), o).norm_sqr()).product()
            } else {
                return Err(Error::CapExceeded { what: "DME measurement dimension", size: program.len(), cap: DENSE_MEASURE_CAP });
            };
            let o = setup.dressed(setup.c.amplitudes(), &us[perm[0]])?;
            (p, o.clone() * o.adjoint() * cr(p))
        }
        None => {
            let dims = setup.pair_dims(m + 1);
            ensure_density_cap(pair * program.len())?;
            let v = kron_vec_pow(&copy, m);
            let v = qcore::linalg::kron_vec(setup.c.amplitudes(), &v);
            let v = prover.act(&v, &dims, &b_registers(&perm))?;
            let tau = DensityOp::from_pure(&v, &[pair, program.len()])?;
            let br = measure_branches(&tau, &program, k_q, oracle.mode)?;
            let out = match &br.post_one {
                Some(post) => post.partial_trace(&[0])?.into_matrix() * cr(br.prob_one),
                None => CMat::zeros(pair, pair),
            };
            (br.prob_one, out)
        }
    };
    let accepted = p_acc > 0.0 && rng.random::<f64>() < p_acc;
    let dims = vec![setup.c.d_a(), setup.c.d_b()];
    let (output_state, dist) = if accepted {
        let rho = DensityOp::from_parts_unchecked(out / cr(p_acc), dims.clone());
        let target = DensityOp::from_pure(&setup.target, &dims)?;
        let d = qcore::trace_distance(&rho, &target)?;
        (Some(rho), Some(d))
    } else {
        (None, None)
    };
    let mut metrics = vec![
        ("prep_error".to_string(), oracle.prep_error),
        ("copy_distance".to_string(), trace_distance_pure(&copy, setup.c.amplitudes())),
    ];
    if oracle.mode == MeasureMode::Dme {
        metrics.push(("k_q".to_string(), k_q as f64));
        metrics.push(("measure_bound".to_string(), crate::measure::dme_measure_bound(k_q)));
    }
    Ok(ProtocolResult {
        accepted,
        output_state,
        transcript: vec![RoundRecord { round: 0, permutation: perm, accept_probability: p_acc, accepted, output_distance: dist, metrics }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_copy_has_requested_distance() {
        let x = UhlmannInstance::with_fidelity(2, 0.8, Seed(2)).unwrap();
        let (c, _) = x.states().unwrap();
        for delta in [0.0, 0.05, 0.3] {
            let v = oracle_copy(c.amplitudes(), delta, Seed(9)).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!((trace_distance_pure(&v, c.amplitudes()) - delta).abs() < 1e-12);
        }
        assert!(oracle_copy(c.amplitudes(), 1.5, Seed(0)).is_err());
    }
}
