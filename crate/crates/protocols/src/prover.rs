//! Provers for the block protocols.
//!
//! A prover only ever sees the `B` registers of the message block, listed by
//! block position, so it cannot touch the verifier's purifiers.

use std::fmt;
use std::sync::Arc;

use qcore::linalg::is_unitary;
use qcore::registers::apply_op_vec;
use qcore::{CMat, CVec, Error, Result, TOL_EXACT};
use serde::Serialize;
use uhlmann::{UhlmannInstance, UhlmannSolution};

/// Coarse classification used in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProverLabel {
    Honest,
    Identity,
    Custom,
}

/// `(state, dims, b_registers) -> state`, with `b_registers` in block-position order.
pub type ActFn = dyn Fn(&CVec, &[usize], &[usize]) -> Result<CVec> + Send + Sync;

#[derive(Clone)]
enum Action {
    /// One unitary per block position; a single entry is used at every position.
    Product(Vec<CMat>),
    /// One unitary on the whole `B` block.
    Joint(CMat),
    Custom(Arc<ActFn>),
}

#[derive(Clone)]
pub struct ProverStrategy {
    label: ProverLabel,
    name: String,
    action: Action,
}

impl fmt::Debug for ProverStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProverStrategy").field("label", &self.label).field("name", &self.name).finish()
    }
}

impl ProverStrategy {
    /// Applies the polar completion `Ũ` of the canonical isometry to every register.
    pub fn honest(x: &UhlmannInstance) -> Result<Self> {
        let sol = UhlmannSolution::solve(x, 0.0)?;
        Ok(Self { label: ProverLabel::Honest, name: "honest".into(), action: Action::Product(vec![sol.unitary().clone()]) })
    }

    /// Does nothing.
    pub fn identity(d_b: usize) -> Self {
        Self { label: ProverLabel::Identity, name: "identity".into(), action: Action::Product(vec![CMat::identity(d_b, d_b)]) }
    }

    /// `Ũ` on the first `j` of `m + 1` positions and the identity elsewhere.
    pub fn partial_uhlmann(x: &UhlmannInstance, j: usize, m: usize) -> Result<Self> {
        if j > m + 1 {
            return Err(Error::InvalidArgument(format!("cannot act on {j} of {} positions", m + 1)));
        }
        let sol = UhlmannSolution::solve(x, 0.0)?;
        let d = x.d_b();
        let us = (0..=m).map(|q| if q < j { sol.unitary().clone() } else { CMat::identity(d, d) }).collect();
        Ok(Self { label: ProverLabel::Custom, name: format!("partial-uhlmann-{j}"), action: Action::Product(us) })
    }

    /// The same unitary on every position.
    pub fn uniform(name: &str, u: CMat) -> Result<Self> {
        Self::per_position(name, vec![u])
    }

    /// Position-dependent product unitaries.
    pub fn per_position(name: &str, us: Vec<CMat>) -> Result<Self> {
        if us.is_empty() || us.iter().any(|u| !is_unitary(u, TOL_EXACT)) {
            return Err(Error::InvalidArgument("prover unitaries must be non-empty and unitary".into()));
        }
        Ok(Self { label: ProverLabel::Custom, name: name.into(), action: Action::Product(us) })
    }

    /// An arbitrary unitary on the whole `B` block.
    pub fn joint(name: &str, u: CMat) -> Result<Self> {
        if !is_unitary(&u, TOL_EXACT) {
            return Err(Error::InvalidArgument("joint prover is not unitary".into()));
        }
        Ok(Self { label: ProverLabel::Custom, name: name.into(), action: Action::Joint(u) })
    }

    /// Arbitrary code; its norm preservation is checked on every call.
    pub fn custom(name: &str, f: Arc<ActFn>) -> Self {
        Self { label: ProverLabel::Custom, name: name.into(), action: Action::Custom(f) }
    }

    pub fn label(&self) -> ProverLabel {
        self.label
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Per-position unitaries for `positions` slots, if the prover is a product.
    pub(crate) fn product_unitaries(&self, positions: usize) -> Option<Result<Vec<CMat>>> {
        let Action::Product(us) = &self.action else { return None };
        Some(match us.len() {
            1 => Ok(vec![us[0].clone(); positions]),
            n if n == positions => Ok(us.clone()),
            n => Err(Error::InvalidArgument(format!("prover has {n} positions, protocol has {positions}"))),
        })
    }

    /// Acts on the registers `b_regs` (block-position order) of a joint pure state.
    pub fn act(&self, state: &CVec, dims: &[usize], b_regs: &[usize]) -> Result<CVec> {
        let out = match &self.action {
            Action::Product(_) => {
                let us = self.product_unitaries(b_regs.len()).expect("product prover")?;
                let mut v = state.clone();
                for (u, &r) in us.iter().zip(b_regs) {
                    v = apply_op_vec(&v, dims, &[r], u)?;
                }
                v
            }
            Action::Joint(u) => apply_op_vec(state, dims, b_regs, u)?,
            Action::Custom(f) => f(state, dims, b_regs)?,
        };
        if out.len() != state.len() || (out.norm() - state.norm()).abs() > TOL_EXACT {
            return Err(Error::InvalidArgument(format!("prover '{}' did not preserve the norm", self.name)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::linalg::kron_vec_pow;
    use qcore::{cr, BipartiteState};

    #[test]
    fn custom_prover_must_preserve_norm() {
        let p = ProverStrategy::custom("shrink", Arc::new(|v: &CVec, _: &[usize], _: &[usize]| Ok(v * cr(0.5))));
        let v = kron_vec_pow(BipartiteState::basis(0, 0, 2, 2).unwrap().amplitudes(), 1);
        assert!(p.act(&v, &[2, 2], &[1]).is_err());
    }

    #[test]
    fn partial_uhlmann_positions() {
        let x = UhlmannInstance::with_fidelity(2, 0.9, qcore::Seed(1)).unwrap();
        let p = ProverStrategy::partial_uhlmann(&x, 2, 3).unwrap();
        let us = p.product_unitaries(4).unwrap().unwrap();
        assert_eq!(us[3], CMat::identity(2, 2));
        assert!(p.product_unitaries(5).unwrap().is_err());
        assert!(ProverStrategy::partial_uhlmann(&x, 5, 3).is_err());
    }
}
