//! The statistical zero-knowledge verifier for the Uhlmann problem.
//!
//! Register layout for `m` test copies: `A₀ B₀ A₁ B₁ … A_m B_m`. The pair
//! `A₀B₀` carries the input `|C⟩` whose `B₀` must be transformed; the other
//! pairs are the verifier's test copies. `perm[i]` is the block position at
//! which the prover sees `B_i`.

use itertools::Itertools;
use qcore::linalg::{inner, kron_vec_pow, trace_distance_pure};
use qcore::{ensure_density_cap, ensure_pure_cap, BipartiteState, CMat, CVec, DensityOp, Error, Result, Seed};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use uhlmann::{UhlmannInstance, UhlmannSolution};

use crate::prover::ProverStrategy;

/// Largest number of block permutations enumerated by the exact routines.
pub const MAX_EXACT_PERMUTATIONS: usize = 40_320;

/// One line of a protocol transcript.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub permutation: Vec<usize>,
    /// Probability that this round's test accepts, given the permutation.
    pub accept_probability: f64,
    pub accepted: bool,
    /// Trace distance of the output to `(id ⊗ Ũ)|C⟩`, when accepted.
    pub output_distance: Option<f64>,
    /// Extra per-round metrics (preparation error, measurement mode, ...).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub metrics: Vec<(String, f64)>,
}

/// Outcome of one protocol execution.
#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub accepted: bool,
    /// `A₀B₀` after acceptance; `None` on rejection.
    pub output_state: Option<DensityOp>,
    pub transcript: Vec<RoundRecord>,
}

impl ProtocolResult {
    /// The transcript as JSON lines.
    pub fn transcript_jsonl(&self) -> String {
        self.transcript.iter().map(|r| serde_json::to_string(r).expect("record serializes") + "\n").collect()
    }
}

/// Exact acceptance probability and conditional output, averaged over permutations.
#[derive(Clone, Debug)]
pub struct SzkExact {
    pub accept_probability: f64,
    pub conditional_output: Option<DensityOp>,
    /// `td(σ_out, (id ⊗ Ũ)|C⟩⟨C|(id ⊗ Ũ)†)`.
    pub output_distance: Option<f64>,
}

/// Monte-Carlo summary of repeated runs next to the exact values.
#[derive(Clone, Debug)]
pub struct SzkStats {
    pub runs: usize,
    pub accepted: usize,
    pub accept_rate: f64,
    /// Standard error of `accept_rate` under the exact acceptance probability.
    pub std_error: f64,
    pub exact: SzkExact,
}

pub(crate) struct Setup {
    pub c: BipartiteState,
    pub d: BipartiteState,
    /// `(id ⊗ Ũ)|C⟩`.
    pub target: CVec,
}

impl Setup {
    pub fn new(x: &UhlmannInstance) -> Result<Self> {
        let sol = UhlmannSolution::solve(x, 0.0)?;
        let (c, d) = x.states()?;
        let target = qcore::registers::apply_op_vec(c.amplitudes(), &[c.d_a(), c.d_b()], &[1], sol.unitary())?;
        Ok(Self { c, d, target })
    }

    pub fn pair_dims(&self, copies: usize) -> Vec<usize> {
        [self.c.d_a(), self.c.d_b()].repeat(copies)
    }

    pub fn dressed(&self, state: &CVec, u: &CMat) -> Result<CVec> {
        qcore::registers::apply_op_vec(state, &[self.c.d_a(), self.c.d_b()], &[1], u)
    }
}

pub(crate) fn check_copies(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("the protocol needs at least one test copy".into()));
    }
    Ok(())
}

pub(crate) fn random_permutation(len: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}

/// `B` register indices in block-position order: position `perm[i]` holds `B_i`.
pub(crate) fn b_registers(perm: &[usize]) -> Vec<usize> {
    let mut regs = vec![0; perm.len()];
    for (i, &q) in perm.iter().enumerate() {
        regs[q] = 2 * i + 1;
    }
    regs
}

/// `(⟨s|^{⊗m} ⊗ I)` on the trailing `m` pairs of a vector whose leading pair is kept.
pub(crate) fn contract_tail(v: &CVec, s: &CVec, m: usize) -> CVec {
    let tail = kron_vec_pow(s, m);
    let r = tail.len();
    let lead = v.len() / r;
    CVec::from_fn(lead, |k, _| (0..r).map(|j| tail[j].conj() * v[k * r + j]).sum())
}

fn pure_density(v: &CVec, dims: &[usize]) -> Result<DensityOp> {
    let n = v.norm();
    DensityOp::from_pure(&(v / qcore::cr(n)), dims)
}

fn all_permutations(len: usize) -> Result<Vec<Vec<usize>>> {
    let count: usize = (1..=len).product();
    if count > MAX_EXACT_PERMUTATIONS {
        return Err(Error::CapExceeded { what: "block permutations", size: count, cap: MAX_EXACT_PERMUTATIONS });
    }
    Ok((0..len).permutations(len).collect())
}

/// Joint vector after the prover, for a fixed permutation.
fn after_prover(setup: &Setup, m: usize, prover: &ProverStrategy, perm: &[usize]) -> Result<CVec> {
    let dims = setup.pair_dims(m + 1);
    ensure_pure_cap(dims.iter().product())?;
    let v = kron_vec_pow(setup.c.amplitudes(), m + 1);
    prover.act(&v, &dims, &b_registers(perm))
}

/// Unnormalized accepted `A₀B₀` vector for one permutation.
fn accepted_branch(setup: &Setup, m: usize, prover: &ProverStrategy, perm: &[usize]) -> Result<CVec> {
    Ok(contract_tail(&after_prover(setup, m, prover, perm)?, setup.d.amplitudes(), m))
}

/// One execution of the verifier against `prover`.
pub fn szk_run(x: &UhlmannInstance, m: usize, prover: &ProverStrategy, seed: Seed) -> Result<ProtocolResult> {
    check_copies(m)?;
    let setup = Setup::new(x)?;
    let mut rng = seed.rng();
    let perm = random_permutation(m + 1, &mut rng);
    let (p_acc, out) = match prover.product_unitaries(m + 1) {
        Some(us) => {
            let us = us?;
            let mut p = 1.0;
            for i in 1..=m {
                p *= inner(setup.d.amplitudes(), &setup.dressed(setup.c.amplitudes(), &us[perm[i]])?).norm_sqr();
            }
            (p, setup.dressed(setup.c.amplitudes(), &us[perm[0]])?)
        }
        None => {
            let u = accepted_branch(&setup, m, prover, &perm)?;
            (u.norm_squared(), u)
        }
    };
    let accepted = p_acc > 0.0 && rng.random::<f64>() < p_acc;
    let dims = [setup.c.d_a(), setup.c.d_b()];
    let (output_state, output_distance) = if accepted {
        let n = out.norm();
        let unit = &out / qcore::cr(n);
        (Some(DensityOp::from_pure(&unit, &dims)?), Some(trace_distance_pure(&unit, &setup.target)))
    } else {
        (None, None)
    };
    Ok(ProtocolResult {
        accepted,
        output_state,
        transcript: vec![RoundRecord {
            round: 0,
            permutation: perm,
            accept_probability: p_acc,
            accepted,
            output_distance,
            metrics: Vec::new(),
        }],
    })
}

/// Exact acceptance probability and conditional output state.
///
/// Product provers use the closed form: only the position `p` seen by `B₀`
/// matters, and the acceptance weight is `Π_{q≠p} |⟨D|(I ⊗ U_q)|C⟩|²`. Other
/// provers enumerate all `(m+1)!` permutations.
pub fn szk_exact(x: &UhlmannInstance, m: usize, prover: &ProverStrategy) -> Result<SzkExact> {
    check_copies(m)?;
    let setup = Setup::new(x)?;
    let dims = [setup.c.d_a(), setup.c.d_b()];
    let d = dims[0] * dims[1];
    let mut sigma = CMat::zeros(d, d);
    let mut total = 0.0;
    match prover.product_unitaries(m + 1) {
        Some(us) => {
            let us = us?;
            let outs: Vec<CVec> = us.iter().map(|u| setup.dressed(setup.c.amplitudes(), u)).collect::<Result<_>>()?;
            let a: Vec<f64> = outs.iter().map(|o| inner(setup.d.amplitudes(), o).norm_sqr()).collect();
            for (p, o) in outs.iter().enumerate() {
                let w: f64 = a.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, v)| v).product::<f64>() / (m + 1) as f64;
                sigma += o * o.adjoint() * qcore::cr(w);
                total += w;
            }
        }
        None => {
            let perms = all_permutations(m + 1)?;
            let n = perms.len() as f64;
            for perm in &perms {
                let u = accepted_branch(&setup, m, prover, perm)?;
                sigma += &u * u.adjoint() * qcore::cr(1.0 / n);
                total += u.norm_squared() / n;
            }
        }
    }
    if total <= 1e-300 {
        return Ok(SzkExact { accept_probability: 0.0, conditional_output: None, output_distance: None });
    }
    let out = DensityOp::from_parts_unchecked(sigma / qcore::cr(total), dims.to_vec());
    let target = DensityOp::from_pure(&setup.target, &dims)?;
    let dist = qcore::trace_distance(&out, &target)?;
    Ok(SzkExact { accept_probability: total, conditional_output: Some(out), output_distance: Some(dist) })
}

/// Repeats [`szk_run`] with child seeds and compares with [`szk_exact`].
pub fn szk_stats(x: &UhlmannInstance, m: usize, prover: &ProverStrategy, runs: usize, seed: Seed) -> Result<SzkStats> {
    let exact = szk_exact(x, m, prover)?;
    let mut accepted = 0;
    for r in 0..runs {
        if szk_run(x, m, prover, seed.child("szk-run", r as u64))?.accepted {
            accepted += 1;
        }
    }
    let rate = accepted as f64 / runs.max(1) as f64;
    let p = exact.accept_probability;
    Ok(SzkStats { runs, accepted, accept_rate: rate, std_error: (p * (1.0 - p) / runs.max(1) as f64).sqrt(), exact })
}

/// The post-prover state of all `m + 1` pairs, averaged over block permutations.
pub fn post_prover_state(x: &UhlmannInstance, m: usize, prover: &ProverStrategy) -> Result<DensityOp> {
    let setup = Setup::new(x)?;
    let dims = setup.pair_dims(m + 1);
    let d: usize = dims.iter().product();
    ensure_density_cap(d)?;
    let perms = all_permutations(m + 1)?;
    let mut rho = CMat::zeros(d, d);
    for perm in &perms {
        let v = after_prover(&setup, m, prover, perm)?;
        rho += &v * v.adjoint();
    }
    Ok(DensityOp::from_parts_unchecked(rho / qcore::cr(perms.len() as f64), dims))
}

/// The simulator's output `|D⟩⟨D|^{⊗(m+1)}`.
pub fn szk_simulate(x: &UhlmannInstance, m: usize) -> Result<DensityOp> {
    let (_, d) = x.states()?;
    let dims = [d.d_a(), d.d_b()].repeat(m + 1);
    ensure_density_cap(dims.iter().product())?;
    pure_density(&kron_vec_pow(d.amplitudes(), m + 1), &dims)
}

/// The verifier's joint state after an honest prover: `((id ⊗ Ũ)|C⟩⟨C|(id ⊗ Ũ)†)^{⊗(m+1)}`.
pub fn honest_state(x: &UhlmannInstance, m: usize) -> Result<DensityOp> {
    let setup = Setup::new(x)?;
    let dims = setup.pair_dims(m + 1);
    ensure_density_cap(dims.iter().product())?;
    pure_density(&kron_vec_pow(&setup.target, m + 1), &dims)
}

/// `td(simulator, honest)` without forming either state: `√(1 − |⟨D|(id ⊗ Ũ)|C⟩|^{2(m+1)})`.
pub fn simulator_distance(x: &UhlmannInstance, m: usize) -> Result<f64> {
    let setup = Setup::new(x)?;
    let o = inner(setup.d.amplitudes(), &setup.target).norm_sqr();
    Ok((1.0 - o.powi(m as i32 + 1)).max(0.0).sqrt())
}

/// The soundness envelope `√(4/(m+1)) + 5√μ`.
pub fn soundness_envelope(m: usize, mu: f64) -> f64 {
    (4.0 / (m + 1) as f64).sqrt() + 5.0 * mu.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_registers_follow_permutation() {
        assert_eq!(b_registers(&[2, 0, 1]), vec![3, 5, 1]);
    }

    #[test]
    fn contract_tail_picks_matching_block() {
        let s = CVec::from_vec(vec![qcore::cr(0.0), qcore::cr(1.0)]);
        let v = kron_vec_pow(&s, 3);
        let r = contract_tail(&v, &s, 2);
        assert_eq!(r.len(), 2);
        assert!((r[1].re - 1.0).abs() < 1e-15 && r[0].norm() < 1e-15);
    }

    #[test]
    fn zero_copies_rejected() {
        let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(0)).unwrap();
        assert!(szk_run(&x, 0, &ProverStrategy::identity(2), Seed(0)).is_err());
    }
}
