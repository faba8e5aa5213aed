//! Approximate projective measurement by a Hadamard test.
//!
//! An ancilla in `|+⟩` controls `e^{iπ|ψ⟩⟨ψ|} = I − 2|ψ⟩⟨ψ|` on the last
//! register of `τ`; measuring the ancilla in the `±` basis gives `b = 1` with
//! probability `Tr(|ψ⟩⟨ψ|τ)` and leaves the projected state. In DME mode the
//! controlled reflection is replaced by `k_q` controlled partial swaps.

use qcore::linalg::{outer, trace_distance_mat};
use qcore::registers::{conjugate_mat, partial_trace_mat};
use qcore::{c, cr, CMat, CVec, DensityOp, Error, Result, Seed};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dme::{dme_constant, last_dims, lift, swap_step};

/// How the controlled reflection is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMode {
    IdealReflection,
    Dme,
}

/// Both outcomes of the test.
#[derive(Clone, Debug)]
pub struct MeasureBranches {
    /// `Pr[b = 1]`.
    pub prob_one: f64,
    /// Normalized state after `b = 1`, if that outcome has positive probability.
    pub post_one: Option<DensityOp>,
    pub post_zero: Option<DensityOp>,
}

/// One sampled outcome.
#[derive(Clone, Debug)]
pub struct ApproxMeasurement {
    /// `b = 1`, i.e. the state was found in `|ψ⟩`.
    pub accepted: bool,
    pub b: u8,
    pub prob_one: f64,
    pub post_state: Option<DensityOp>,
}

/// Error target at `t = 1/2` for `k_q` copies: `C·t²/k_q` with the calibrated DME constant.
pub fn dme_measure_bound(k_q: usize) -> f64 {
    dme_constant() * 0.25 / k_q.max(1) as f64
}

/// Smallest `k_q` whose [`dme_measure_bound`] is at most `eps`.
pub fn default_copies(eps: f64) -> usize {
    ((dme_constant() * 0.25 / eps.max(1e-12)).ceil() as usize).max(1)
}

fn normalized(m: CMat, p: f64, dims: &[usize]) -> Option<DensityOp> {
    (p > 1e-15).then(|| DensityOp::from_parts_unchecked(m / cr(p), dims.to_vec()))
}

/// Exact outcome distribution of the test on the last register of `tau`.
pub fn measure_branches(tau: &DensityOp, psi: &CVec, k_q: usize, mode: MeasureMode) -> Result<MeasureBranches> {
    let (rest, d) = last_dims(tau.dims());
    if psi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: psi.len() });
    }
    let proj = outer(psi, psi);
    let x = tau.matrix();
    // ancilla blocks X_ab after the controlled operation
    let (x01, x10, x11) = match mode {
        MeasureMode::IdealReflection => {
            let u = CMat::identity(d, d) - &proj * cr(2.0);
            let last = tau.dims().len() - 1;
            let ux = qcore::registers::apply_op_cols(x, tau.dims(), &[last], &u)?;
            let xu = qcore::registers::apply_op_cols(&x.adjoint(), tau.dims(), &[last], &u)?.adjoint();
            (xu, ux, conjugate_mat(x, tau.dims(), &[last], &u)?)
        }
        MeasureMode::Dme => {
            if k_q == 0 {
                return Err(Error::InvalidArgument("DME mode needs k_q ≥ 1".into()));
            }
            let theta = -std::f64::consts::PI / k_q as f64;
            let (cs, sn) = (theta.cos(), theta.sin());
            let lifted = lift(&proj, rest);
            let (mut x01, mut x10, mut x11) = (x.clone(), x.clone(), x.clone());
            for _ in 0..k_q {
                x11 = swap_step(&x11, &proj, &lifted, rest, theta)?;
                x10 = &x10 * cr(cs) - &lifted * &x10 * c(0.0, sn);
                x01 = &x01 * cr(cs) + &x01 * &lifted * c(0.0, sn);
            }
            (x01, x10, x11)
        }
    };
    // ⟨±|·|±⟩ blocks with X₀₀ = τ and the 1/2 from |+⟩⟨+|
    let one = (x - &x01 - &x10 + &x11) * cr(0.25);
    let zero = (x + &x01 + &x10 + &x11) * cr(0.25);
    let p1 = one.trace().re.clamp(0.0, 1.0);
    let p0 = zero.trace().re.clamp(0.0, 1.0);
    Ok(MeasureBranches {
        prob_one: p1,
        post_one: normalized(one, p1, tau.dims()),
        post_zero: normalized(zero, p0, tau.dims()),
    })
}

/// Samples the test once.
pub fn approx_measure(tau: &DensityOp, psi: &CVec, k_q: usize, mode: MeasureMode, seed: Seed) -> Result<ApproxMeasurement> {
    let br = measure_branches(tau, psi, k_q, mode)?;
    let accepted = seed.rng().random::<f64>() < br.prob_one;
    Ok(ApproxMeasurement {
        accepted,
        b: accepted as u8,
        prob_one: br.prob_one,
        post_state: if accepted { br.post_one } else { br.post_zero },
    })
}

/// `τ` projected onto `|ψ⟩` on the last register and renormalized.
pub fn projected_state(tau: &DensityOp, psi: &CVec) -> Result<Option<DensityOp>> {
    let last = tau.dims().len() - 1;
    let m = conjugate_mat(tau.matrix(), tau.dims(), &[last], &outer(psi, psi))?;
    let p = m.trace().re;
    Ok(normalized(m, p, tau.dims()))
}

/// Trace distance between a post-measurement state and the exact projection.
pub fn projection_error(post: &DensityOp, tau: &DensityOp, psi: &CVec) -> Result<f64> {
    match projected_state(tau, psi)? {
        Some(p) => trace_distance_mat(post.matrix(), p.matrix()),
        None => Ok(1.0),
    }
}

/// `Tr(|ψ⟩⟨ψ| τ)` on the last register.
pub fn overlap_probability(tau: &DensityOp, psi: &CVec) -> Result<f64> {
    let (rest, _) = last_dims(tau.dims());
    let (m, _) = partial_trace_mat(tau.matrix(), &[rest, psi.len()], &[1])?;
    Ok((psi.adjoint() * m * psi)[(0, 0)].re)
}
