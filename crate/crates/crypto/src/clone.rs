//! Cloning attacks on real-valued, clean-output keyed state families.
//!
//! Registers: `K` (key, the Uhlmann `A` side) and `S K' T` (the `B` side), with
//! `|C⟩ = 2^{−λ/2} Σ_k |k⟩|φ_k⟩|0⟩|0⟩` and `|D⟩` the same with `|φ_k⟩^{⊗2}` in `T`.

use qcore::linalg::{herm_fn, inner, kron_vec, ket, outer};
use qcore::registers::apply_op_vec;
use qcore::{cr, ensure_pure_cap, BipartiteState, CMat, CVec, Error, Result, TOL_VALIDATE};
use uhlmann::{UhlmannInstance, UhlmannSolution};

/// The instance and the fidelity guaranteed by the adversary.
#[derive(Clone, Debug)]
pub struct CloneAttack {
    pub instance: UhlmannInstance,
    /// `|2^{−λ} Σ_{k,k'} ε_{k,k'} ⟨φ_k|φ_{k'}⟩²|²`.
    pub kappa_lower: f64,
}

fn check_family(family: &[CVec], lambda: usize) -> Result<usize> {
    let keys = 1usize << lambda;
    if family.len() != keys {
        return Err(Error::DimensionMismatch { expected: keys, got: family.len() });
    }
    let ds = family[0].len();
    for (i, a) in family.iter().enumerate() {
        if a.len() != ds || (a.norm() - 1.0).abs() > TOL_VALIDATE {
            return Err(Error::InvalidState(format!("family member {i} is not a unit vector of length {ds}")));
        }
        for b in &family[i..] {
            if inner(a, b).im.abs() > TOL_VALIDATE {
                return Err(Error::InvalidArgument("family has a complex pairwise inner product".into()));
            }
        }
    }
    Ok(ds)
}

/// An inversion adversary: given `|φ_k⟩` it outputs a guess `k'`.
#[derive(Clone, Debug)]
pub enum Adversary {
    /// A POVM `{E_{k'}}` on the state register, so `ε_{k,k'} = ⟨φ_k|E_{k'}|φ_k⟩`.
    Povm(Vec<CMat>),
    /// Row `k` is the output distribution on `|φ_k⟩`, taken as given. The
    /// bound is only meaningful when some measurement realizes it.
    Distribution(Vec<Vec<f64>>),
}

impl Adversary {
    /// Square-root measurement `E_k = G^{−1/2}|φ_k⟩⟨φ_k|G^{−1/2}` with `G = Σ|φ_k⟩⟨φ_k|`,
    /// completed by the projector onto `ker G` added to the first outcome.
    pub fn pretty_good(family: &[CVec]) -> Result<Self> {
        let ds = family.first().map_or(0, |v| v.len());
        let g = family.iter().fold(CMat::zeros(ds, ds), |acc, v| acc + outer(v, v));
        let inv_sqrt = herm_fn(&g, |x| if x > 1e-12 { 1.0 / x.sqrt() } else { 0.0 })?;
        let support = herm_fn(&g, |x| if x > 1e-12 { 1.0 } else { 0.0 })?;
        let mut ops: Vec<CMat> = family.iter().map(|v| &inv_sqrt * outer(v, v) * &inv_sqrt).collect();
        ops[0] += CMat::identity(ds, ds) - support;
        Ok(Self::Povm(ops))
    }

    /// `ε_{k,k'}`.
    pub fn distribution(&self, family: &[CVec]) -> Result<Vec<Vec<f64>>> {
        match self {
            Self::Distribution(eps) => Ok(eps.clone()),
            Self::Povm(ops) => {
                let ds = family.first().map_or(0, |v| v.len());
                if ops.len() != family.len() || ops.iter().any(|e| e.nrows() != ds || e.ncols() != ds) {
                    return Err(Error::DimensionMismatch { expected: family.len(), got: ops.len() });
                }
                let total = ops.iter().fold(CMat::zeros(ds, ds), |a, e| a + e);
                if qcore::linalg::max_abs(&(total - CMat::identity(ds, ds))) > 1e-9 {
                    return Err(Error::InvalidArgument("POVM elements do not sum to the identity".into()));
                }
                Ok(family.iter().map(|v| ops.iter().map(|e| (v.adjoint() * e * v)[(0, 0)].re).collect()).collect())
            }
        }
    }
}

/// Builds the instance for a family `{|φ_k⟩}` and an inversion adversary.
pub fn clone_attack_states(family: &[CVec], lambda: usize, adversary: &Adversary) -> Result<CloneAttack> {
    let ds = check_family(family, lambda)?;
    let keys = family.len();
    let eps = adversary.distribution(family)?;
    if eps.len() != keys || eps.iter().any(|r| r.len() != keys) {
        return Err(Error::DimensionMismatch { expected: keys, got: eps.len() });
    }
    for row in &eps {
        if row.iter().any(|&p| p < -1e-12) || (row.iter().sum::<f64>() - 1.0).abs() > TOL_VALIDATE {
            return Err(Error::InvalidArgument("adversary rows must be probability distributions".into()));
        }
    }
    let db = ds * keys * ds * ds;
    ensure_pure_cap(keys * db)?;
    let amp = cr(1.0 / (keys as f64).sqrt());
    let zero_t = ket(0, ds * ds);
    let zero_k = ket(0, keys);
    let mut c = CVec::zeros(keys * db);
    let mut d = CVec::zeros(keys * db);
    for (k, phi) in family.iter().enumerate() {
        let head = kron_vec(&ket(k, keys), phi);
        let head = kron_vec(&head, &zero_k);
        c += kron_vec(&head, &zero_t) * amp;
        d += kron_vec(&head, &kron_vec(phi, phi)) * amp;
    }
    let mut sum = 0.0;
    for k in 0..keys {
        for kp in 0..keys {
            sum += eps[k][kp] * inner(&family[k], &family[kp]).re.powi(2);
        }
    }
    let kappa_lower = (sum / keys as f64).powi(2);
    let instance = UhlmannInstance::raw(BipartiteState::new(c, keys, db)?, BipartiteState::new(d, keys, db)?)?;
    Ok(CloneAttack { instance, kappa_lower })
}

/// Average over keys of `F(M(|φ_k⟩|0⟩|0⟩), |φ_k⟩|0⟩|φ_k⟩|φ_k⟩)` for the Uhlmann solver `M = Ũ`.
pub fn clone_fidelity(family: &[CVec], attack: &CloneAttack) -> Result<f64> {
    let sol = UhlmannSolution::solve(&attack.instance, 0.0)?;
    let keys = family.len();
    let ds = family[0].len();
    let zero_k = ket(0, keys);
    let mut total = 0.0;
    for phi in family {
        let input = kron_vec(&kron_vec(phi, &zero_k), &ket(0, ds * ds));
        let want = kron_vec(&kron_vec(phi, &zero_k), &kron_vec(phi, phi));
        let out = apply_op_vec(&input, &[input.len()], &[0], sol.unitary())?;
        total += inner(&want, &out).norm_sqr();
    }
    Ok(total / keys as f64)
}
