//! Padding an instance to raise its fidelity.
//!
//! `|E⟩ = √α|0⟩|C⟩|0⟩ + √(1−α)|1⟩|1…1⟩|1⟩` and likewise `|F⟩` from `|D⟩`. The
//! new first register is `a' ⊗ A`, the second `B ⊗ b'`. The result is returned in
//! raw form since `√α|0⟩ + √(1−α)|1⟩` is generally not reachable exactly with the
//! gate set.

use qcore::{cr, BipartiteState, CVec, Error, Result};

use crate::instance::UhlmannInstance;

fn pad_state(s: &BipartiteState, alpha: f64) -> Result<BipartiteState> {
    let (da, db) = (s.d_a(), s.d_b());
    let (na, nb) = (2 * da, 2 * db);
    let mut v = CVec::zeros(na * nb);
    let amp = cr(alpha.sqrt());
    for a in 0..da {
        for b in 0..db {
            // a' = 0, b' = 0
            v[a * nb + b * 2] = amp * s.amplitudes()[a * db + b];
        }
    }
    let last_a = da + (da - 1);
    let last_b = (db - 1) * 2 + 1;
    v[last_a * nb + last_b] += cr((1.0 - alpha).sqrt());
    BipartiteState::new(v, na, nb)
}

/// Pads both states with weight `alpha ∈ (0, 1]` on the original pair.
pub fn pad_instance(x: &UhlmannInstance, alpha: f64) -> Result<UhlmannInstance> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let (c, d) = x.states()?;
    UhlmannInstance::raw(pad_state(&c, alpha)?, pad_state(&d, alpha)?)
}

/// Largest admissible `alpha` for lifting fidelity `kappa1` to `kappa2`: `(1−κ₂)/(1−κ₁)`.
pub fn max_alpha(kappa1: f64, kappa2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa1) || !(kappa1..=1.0).contains(&kappa2) {
        return Err(Error::InvalidArgument(format!("need 0 ≤ κ₁ ≤ κ₂ ≤ 1, got {kappa1}, {kappa2}")));
    }
    if kappa1 >= 1.0 {
        return Ok(1.0);
    }
    Ok(((1.0 - kappa2) / (1.0 - kappa1)).min(1.0))
}

/// Exact fidelity after padding: the root fidelity is affine in `alpha`,
/// `√F' = α√κ₁ + 1 − α`.
pub fn padded_fidelity(kappa1: f64, alpha: f64) -> f64 {
    let r = alpha * kappa1.max(0.0).sqrt() + 1.0 - alpha;
    r * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate_instance;
    use crate::isometry::canonical_uhlmann;
    use qcore::linalg::max_abs;
    use qcore::{CMat, GateCircuit};

    #[test]
    fn alpha_one_keeps_fidelity_and_w() {
        let c = GateCircuit::new(2).push(qcore::Gate::H, &[0]).push(qcore::Gate::CNOT, &[0, 1]);
        let d = GateCircuit::new(2).push(qcore::Gate::H, &[1]);
        let x = UhlmannInstance::circuits(1, c, d).unwrap();
        let k = validate_instance(&x).unwrap().kappa;
        let p = pad_instance(&x, 1.0).unwrap();
        assert!((validate_instance(&p).unwrap().kappa - k).abs() < 1e-10);
        let w = canonical_uhlmann(&x, 0.0).unwrap();
        let wp = canonical_uhlmann(&p, 0.0).unwrap();
        // |0⟩ sector of b' is the even rows and columns
        let block = CMat::from_fn(2, 2, |i, j| wp.matrix()[(2 * i, 2 * j)]);
        assert!(max_abs(&(block - w.matrix())) < 1e-10);
    }

    #[test]
    fn orthogonal_pair_half_padding() {
        let psi = BipartiteState::basis(0, 0, 2, 2).unwrap();
        let phi = BipartiteState::basis(1, 1, 2, 2).unwrap();
        let x = UhlmannInstance::raw(psi, phi).unwrap();
        let p = pad_instance(&x, 0.5).unwrap();
        let f = validate_instance(&p).unwrap().kappa;
        assert!((f - 0.25).abs() < 1e-10);
        assert!((f.sqrt() - 0.5).abs() < 1e-10);
        assert!((padded_fidelity(0.0, 0.5) - f).abs() < 1e-12);
    }

    #[test]
    fn alpha_range() {
        let psi = BipartiteState::basis(0, 0, 2, 2).unwrap();
        let x = UhlmannInstance::raw(psi.clone(), psi).unwrap();
        assert!(pad_instance(&x, 0.0).is_err());
        assert!(pad_instance(&x, 1.5).is_err());
        assert!((max_alpha(0.2, 0.6).unwrap() - 0.5).abs() < 1e-12);
        assert!(max_alpha(0.6, 0.2).is_err());
    }
}
