//! One-shot entropies in closed form (base 2).

use serde::Serialize;

use qcore::linalg::{herm_eigenvalues, herm_fn, kron};
use qcore::registers::partial_trace_mat;
use qcore::{CMat, DensityOp, Error, Result};

/// Eigenvalues below this are treated as zero.
const EIG_FLOOR: f64 = 1e-13;

/// Unconditional entropies of a single state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `−log λ_max`.
    pub h_min: f64,
    /// `2 log Tr √ρ`.
    pub h_max: f64,
    /// `−log Tr ρ²`.
    pub h2_lower: f64,
    /// `h_max` after eigenvalue-tail truncation of trace-distance budget `epsilon`.
    pub h_max_smoothed: f64,
    pub epsilon: f64,
}

fn spectrum(rho: &CMat) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = herm_eigenvalues(rho)?.into_iter().map(|x| if x > EIG_FLOOR { x } else { 0.0 }).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

fn h_max_of(ev: &[f64]) -> f64 {
    2.0 * ev.iter().map(|x| x.sqrt()).sum::<f64>().log2()
}

/// Drops the smallest eigenvalues while their total mass stays within `eps`,
/// then renormalizes. The result lies within trace distance `eps` of the input.
fn truncate(ev: &[f64], eps: f64) -> Vec<f64> {
    let mut keep = ev.len();
    let mut dropped = 0.0;
    while keep > 1 && dropped + ev[keep - 1] <= eps {
        dropped += ev[keep - 1];
        keep -= 1;
    }
    let total: f64 = ev[..keep].iter().sum();
    ev[..keep].iter().map(|x| x / total).collect()
}

/// Min-, max- and Rényi-2 entropy of `rho` as one register, plus a smoothed max-entropy.
pub fn entropies(rho: &DensityOp, epsilon: f64) -> Result<EntropyReport> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    let ev = spectrum(rho.matrix())?;
    Ok(EntropyReport {
        h_min: -ev[0].log2(),
        h_max: h_max_of(&ev),
        h2_lower: -ev.iter().map(|x| x * x).sum::<f64>().log2(),
        h_max_smoothed: h_max_of(&truncate(&ev, epsilon)),
        epsilon,
    })
}

/// `−log Tr[((id ⊗ σ)^{-1/2} ρ)²]` at `σ = ρ_B`, where `B` is register `cond` of `rho`.
///
/// The inverse is taken on the support of `ρ_B`, which contains the support of
/// `ρ`. Any fixed `σ` lower-bounds the conditional Rényi-2 entropy.
pub fn h2_conditional(rho: &DensityOp, cond: usize) -> Result<f64> {
    let dims = rho.dims().to_vec();
    if cond >= dims.len() {
        return Err(Error::InvalidRegister { index: cond, count: dims.len() });
    }
    let (sigma, _) = partial_trace_mat(rho.matrix(), &dims, &[cond])?;
    let inv_sqrt = herm_fn(&sigma, |x| if x > EIG_FLOOR { x.powf(-0.5) } else { 0.0 })?;
    // id on every other register, in place
    let mut op = CMat::identity(1, 1);
    for (i, &d) in dims.iter().enumerate() {
        op = if i == cond { kron(&op, &inv_sqrt) } else { kron(&op, &CMat::identity(d, d)) };
    }
    let x = op * rho.matrix();
    Ok(-(&x * &x).trace().re.log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::channel::max_entangled;
    use qcore::cr;

    #[test]
    fn two_level_closed_form() {
        let rho = DensityOp::new(CMat::from_diagonal(&qcore::CVec::from_vec(vec![cr(0.75), cr(0.25)])), vec![2]).unwrap();
        let r = entropies(&rho, 0.0).unwrap();
        assert!((r.h_min - 0.415_037_499_278_843_8).abs() < 1e-12);
        assert!((r.h_max - 2.0 * (0.75f64.sqrt() + 0.5).log2()).abs() < 1e-12);
        assert!((r.h2_lower - (-(0.625f64).log2())).abs() < 1e-12);
        // dropping the 1/4 eigenvalue fits a budget of 0.3
        assert!(entropies(&rho, 0.3).unwrap().h_max_smoothed.abs() < 1e-12);
        assert!(entropies(&rho, 1.0).is_err());
    }

    #[test]
    fn maximally_entangled_conditional() {
        let phi = DensityOp::from_pure(&max_entangled(4), &[4, 4]).unwrap();
        assert!((h2_conditional(&phi, 1).unwrap() + 2.0).abs() < 1e-10);
        let prod = DensityOp::new(CMat::identity(4, 4) * cr(0.25), vec![2, 2]).unwrap();
        assert!((h2_conditional(&prod, 1).unwrap() - 1.0).abs() < 1e-10);
    }
}
