//! Clifford decoupling: measure the first `n − s` qubits after a random Clifford
//! and compare with the product `ω_E ⊗ ρ_B`.

use serde::Serialize;

use qcore::clifford::random_clifford;
use qcore::linalg::{kron, trace_norm};
use qcore::registers::conjugate_mat;
use qcore::{cr, CMat, DensityOp, Error, Result, Seed};

use crate::entropy::h2_conditional;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecouplingReport {
    /// Mean of `‖(T∘U)(ρ_AB) − ω_E ⊗ ρ_B‖₁` over sampled Cliffords.
    pub lhs_mean: f64,
    pub std_error: f64,
    /// `2^{−½ h₂(A'|E)_ω − ½ h₂(A|B)_ρ}` with both entropies evaluated at the marginal.
    pub rhs_bound: f64,
    pub h2_env: f64,
    pub h2_source: f64,
    pub samples: usize,
    /// `lhs_mean ≤ rhs_bound + 3·std_error`.
    pub holds: bool,
}

/// `ρ` has registers `[A]` or `[A, B]` with `A` of `n` qubits; `s` qubits are kept.
pub fn decoupling_experiment(rho: &DensityOp, s: usize, samples: usize, seed: Seed) -> Result<DecouplingReport> {
    let dims = rho.dims().to_vec();
    let (d_a, d_b) = match dims[..] {
        [a] => (a, 1),
        [a, b] => (a, b),
        _ => return Err(Error::InvalidArgument("state must have one or two registers".into())),
    };
    if !d_a.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("register A must be qubits, got dimension {d_a}")));
    }
    let n = d_a.trailing_zeros() as usize;
    if s > n || samples == 0 {
        return Err(Error::InvalidArgument(format!("need s ≤ {n} and at least one sample")));
    }
    qcore::ensure_density_cap(d_a * d_b)?;
    let (d_e, d_c) = (1usize << (n - s), 1usize << s);
    let rho_b = marginal_b(rho.matrix(), d_a, d_b);
    let target = &rho_b * cr(1.0 / d_e as f64);

    let full = [d_a, d_b];
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let u = random_clifford(n, seed.child("decoupling-clifford", i as u64))?;
        let rotated = conjugate_mat(rho.matrix(), &full, &[0], &u)?;
        let mut total = 0.0;
        for y in 0..d_e {
            let mut block = CMat::zeros(d_b, d_b);
            for c in 0..d_c {
                let a = y * d_c + c;
                block += rotated.view((a * d_b, a * d_b), (d_b, d_b));
            }
            total += trace_norm(&(block - &target))?;
        }
        values.push(total);
    }
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = if samples > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64 } else { 0.0 };
    let std_error = (var / samples as f64).sqrt();

    let h2_env = h2_conditional(&measured_reference(n, s)?, 0)?;
    let h2_source = if d_b == 1 {
        -(rho.matrix() * rho.matrix()).trace().re.log2()
    } else {
        h2_conditional(rho, 1)?
    };
    let rhs_bound = (-0.5 * h2_env - 0.5 * h2_source).exp2();
    Ok(DecouplingReport { lhs_mean: mean, std_error, rhs_bound, h2_env, h2_source, samples, holds: mean <= rhs_bound + 3.0 * std_error + 1e-12 })
}

fn marginal_b(rho: &CMat, d_a: usize, d_b: usize) -> CMat {
    let mut out = CMat::zeros(d_b, d_b);
    for a in 0..d_a {
        out += rho.view((a * d_b, a * d_b), (d_b, d_b));
    }
    out
}

/// `ω_EA' = (T ⊗ id)(Φ_AA')`: `Σ_y |y⟩⟨y|_E ⊗ 2^{−n} |y⟩⟨y| ⊗ id_{2^s}`.
fn measured_reference(n: usize, s: usize) -> Result<DensityOp> {
    let (d_e, d_c) = (1usize << (n - s), 1usize << s);
    let mut m = CMat::zeros(d_e * d_e * d_c, d_e * d_e * d_c);
    let w = cr((-(n as f64)).exp2());
    for y in 0..d_e {
        let proj = CMat::from_fn(d_e, d_e, |i, j| if i == y && j == y { cr(1.0) } else { cr(0.0) });
        m += kron(&proj, &kron(&proj, &CMat::identity(d_c, d_c))) * w;
    }
    DensityOp::new(m, vec![d_e, d_e * d_c])
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::channel::max_entangled;

    #[test]
    fn keeping_everything_is_exact() {
        let rho = qcore::random::random_density(4, 2, Seed(1)).unwrap();
        let r = decoupling_experiment(&rho, 2, 5, Seed(2)).unwrap();
        assert!(r.lhs_mean < 1e-12);
        assert!((r.h2_env - 2.0).abs() < 1e-10);
    }

    #[test]
    fn maximally_entangled_two_plus_two() {
        let rho = DensityOp::from_pure(&max_entangled(4), &[4, 4]).unwrap();
        let r = decoupling_experiment(&rho, 0, 20, Seed(3)).unwrap();
        // each outcome leaves a pure quarter-weight block against id/16
        assert!((r.lhs_mean - 1.5).abs() < 1e-9);
        assert!((r.rhs_bound - 2.0).abs() < 1e-9);
        assert!(r.holds);
    }
}
