//! Density matrix exponentiation by repeated partial swaps.
//!
//! The acted-on register is always the last register of the target. With
//! `V = e^{−iθ·SWAP} = cos θ·I − i sin θ·SWAP`, one step against a fresh program
//! copy `ρ` maps
//! `X ↦ cos²θ·X + sin²θ·(Tr_last X) ⊗ ρ − i cos θ sin θ·[I ⊗ ρ, X]`.

use std::sync::OnceLock;

use qcore::linalg::{expi_hermitian, kron, ket, outer};
use qcore::registers::{conjugate_mat, partial_trace_mat, permutation_matrix};
use qcore::{c, cr, ensure_density_cap, CMat, DensityOp, Error, Result};

/// `Tr_P(e^{−iθS}(ρ_P ⊗ σ_Q)e^{iθS})`, by dense conjugation.
pub fn partial_swap(rho: &DensityOp, sigma: &DensityOp, dt: f64) -> Result<DensityOp> {
    let d = rho.dim();
    if sigma.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: sigma.dim() });
    }
    ensure_density_cap(d * d)?;
    let s = permutation_matrix(&[d, d], &[1, 0])?;
    let v = CMat::identity(d * d, d * d) * cr(dt.cos()) - s * c(0.0, dt.sin());
    let joint = &v * kron(rho.matrix(), sigma.matrix()) * v.adjoint();
    let (m, _) = partial_trace_mat(&joint, &[d, d], &[1])?;
    Ok(DensityOp::from_parts_unchecked(m, sigma.dims().to_vec()))
}

pub(crate) fn last_dims(dims: &[usize]) -> (usize, usize) {
    let d = *dims.last().unwrap_or(&1);
    (dims.iter().product::<usize>() / d, d)
}

/// `I ⊗ ρ` on the trailing register.
pub(crate) fn lift(rho: &CMat, rest: usize) -> CMat {
    kron(&CMat::identity(rest, rest), rho)
}

/// One partial-swap step on the last register, closed form.
pub(crate) fn swap_step(x: &CMat, rho: &CMat, lifted: &CMat, rest: usize, theta: f64) -> Result<CMat> {
    let d = rho.nrows();
    let (cs, sn) = (theta.cos(), theta.sin());
    let (tr, _) = partial_trace_mat(x, &[rest, d], &[0])?;
    let comm = lifted * x - x * lifted;
    Ok(x * cr(cs * cs) + kron(&tr, rho) * cr(sn * sn) - comm * c(0.0, cs * sn))
}

fn check_program(target: &DensityOp, program: &DensityOp) -> Result<(usize, usize)> {
    let (rest, d) = last_dims(target.dims());
    if program.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: program.dim() });
    }
    Ok((rest, d))
}

/// `k` partial-swap steps with `θ = −2πt/k`, approximating `e^{2πitρ}(·)e^{−2πitρ}` on the last register.
pub fn dme(target: &DensityOp, program: &DensityOp, t: f64, k: usize) -> Result<DensityOp> {
    if k == 0 {
        return Err(Error::InvalidArgument("density matrix exponentiation needs k ≥ 1".into()));
    }
    let (rest, _) = check_program(target, program)?;
    let lifted = lift(program.matrix(), rest);
    let theta = -2.0 * std::f64::consts::PI * t / k as f64;
    let mut x = target.matrix().clone();
    for _ in 0..k {
        x = swap_step(&x, program.matrix(), &lifted, rest, theta)?;
    }
    Ok(DensityOp::from_parts_unchecked(x, target.dims().to_vec()))
}

/// The exact conjugation by `e^{2πitρ}` on the last register.
pub fn dme_exact(target: &DensityOp, program: &DensityOp, t: f64) -> Result<DensityOp> {
    check_program(target, program)?;
    let u = expi_hermitian(program.matrix(), 2.0 * std::f64::consts::PI * t)?;
    let last = target.dims().len() - 1;
    let m = conjugate_mat(target.matrix(), target.dims(), &[last], &u)?;
    Ok(DensityOp::from_parts_unchecked(m, target.dims().to_vec()))
}

/// Trace distance between [`dme`] and [`dme_exact`].
pub fn dme_error(target: &DensityOp, program: &DensityOp, t: f64, k: usize) -> Result<f64> {
    qcore::trace_distance(&dme(target, program, t, k)?, &dme_exact(target, program, t)?)
}

/// Least-squares slope of `log error` against `log k`.
pub fn convergence_slope(target: &DensityOp, program: &DensityOp, t: f64, ks: &[usize]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .map(|&k| Ok(((k as f64).ln(), dme_error(target, program, t, k)?.ln())))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Calibration pairs `(target, program)`: `|+⟩` against `|0⟩⟨0|`, and a qubit
/// entangled with a purifier against a tilted pure program.
pub fn calibration_instances() -> Vec<(DensityOp, DensityOp)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = qcore::CVec::from_vec(vec![cr(s), cr(s)]);
    let zero = ket(0, 2);
    let tilt = qcore::CVec::from_vec(vec![cr(0.6), c(0.0, 0.8)]);
    let bell = qcore::CVec::from_vec(vec![cr(0.8), cr(0.0), cr(0.0), cr(0.6)]);
    vec![
        (DensityOp::from_parts_unchecked(outer(&plus, &plus), vec![2]), DensityOp::from_parts_unchecked(outer(&zero, &zero), vec![2])),
        (DensityOp::from_parts_unchecked(outer(&bell, &bell), vec![2, 2]), DensityOp::from_parts_unchecked(outer(&tilt, &tilt), vec![2])),
    ]
}

/// Empirical constant `C` in `error ≤ C·t²/k`, fitted once at `t = 1/2, k = 64`
/// as the largest ratio over [`calibration_instances`].
pub fn dme_constant() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let (t, k) = (0.5, 64);
        calibration_instances()
            .iter()
            .map(|(tg, pr)| dme_error(tg, pr, t, k).expect("calibration instance is valid") * k as f64 / (t * t))
            .fold(0.0, f64::max)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::linalg::max_abs;

    fn pure(v: &[f64]) -> DensityOp {
        let v = qcore::CVec::from_iterator(v.len(), v.iter().map(|&x| cr(x)));
        DensityOp::from_parts_unchecked(outer(&v, &v), vec![v.len()])
    }

    #[test]
    fn closed_form_matches_dense_conjugation() {
        let rho = qcore::random::random_density(3, 2, qcore::Seed(4)).unwrap();
        let sigma = qcore::random::random_density(3, 3, qcore::Seed(5)).unwrap();
        for dt in [0.0, 0.3, 1.1, -0.7] {
            let dense = partial_swap(&rho, &sigma, dt).unwrap();
            let step = swap_step(sigma.matrix(), rho.matrix(), rho.matrix(), 1, dt).unwrap();
            assert!(max_abs(&(dense.matrix() - step)) < 1e-13);
        }
    }

    #[test]
    fn endpoints() {
        let rho = pure(&[1.0, 0.0]);
        let sigma = pure(&[0.6, 0.8]);
        assert!(max_abs(&(partial_swap(&rho, &sigma, 0.0).unwrap().matrix() - sigma.matrix())) < 1e-15);
        let full = partial_swap(&rho, &sigma, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(max_abs(&(full.matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn zero_time_and_zero_copies() {
        let tg = pure(&[0.6, 0.8]);
        let pr = pure(&[1.0, 0.0]);
        assert!(max_abs(&(dme(&tg, &pr, 0.0, 5).unwrap().matrix() - tg.matrix())) < 1e-15);
        assert!(dme(&tg, &pr, 0.5, 0).is_err());
    }

    #[test]
    fn constant_is_positive_and_cached() {
        let c1 = dme_constant();
        assert!(c1 > 0.0 && c1.is_finite());
        assert_eq!(c1, dme_constant());
    }
}
