//! The canonical Uhlmann partial isometry and its polar completion.

use qcore::linalg::{herm_eig, is_unitary, max_abs, sgn_eta, singular_values};
use qcore::registers::apply_op_vec;
use qcore::{BipartiteState, CMat, CVec, Error, Result, TOL_EXACT};

use crate::instance::{validate_instance, UhlmannInstance};

/// A matrix with singular values in `{0, 1}`, with its support projector `W†W`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialIsometryOp {
    matrix: CMat,
    support: CMat,
}

impl PartialIsometryOp {
    /// Checks the singular values and idempotence of `W†W` within `1e-9`.
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        for s in singular_values(&matrix)? {
            if s.abs() > TOL_EXACT && (s - 1.0).abs() > TOL_EXACT {
                return Err(Error::InvalidArgument(format!("singular value {s} is not 0 or 1")));
            }
        }
        let support = matrix.adjoint() * &matrix;
        if max_abs(&(&support * &support - &support)) > TOL_EXACT {
            return Err(Error::InvalidArgument("W†W is not a projector".into()));
        }
        Ok(Self { matrix, support })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// `Π = W†W`.
    pub fn support_projector(&self) -> &CMat {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `rank(W) = Tr Π`.
    pub fn rank(&self) -> usize {
        self.support.trace().re.round() as usize
    }
}

/// A unitary `Ũ` with `Ũ Π = W`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompletionChannel {
    unitary: CMat,
}

impl CompletionChannel {
    pub fn unitary(&self) -> &CMat {
        &self.unitary
    }

    pub fn into_unitary(self) -> CMat {
        self.unitary
    }
}

/// `Tr_A |φ⟩⟨ψ|` as a `dB × dB` matrix.
pub fn transition_operator(psi: &BipartiteState, phi: &BipartiteState) -> Result<CMat> {
    if psi.dims() != phi.dims() {
        return Err(Error::DimensionMismatch { expected: psi.amplitudes().len(), got: phi.amplitudes().len() });
    }
    Ok(phi.as_matrix().transpose() * psi.as_matrix().conjugate())
}

/// `W = sgn_η(Tr_A |φ⟩⟨ψ|)` for `(|ψ⟩, |φ⟩) = (|C⟩, |D⟩)`.
pub fn canonical_uhlmann(x: &UhlmannInstance, eta: f64) -> Result<PartialIsometryOp> {
    let (c, d) = x.states()?;
    canonical_uhlmann_states(&c, &d, eta)
}

/// [`canonical_uhlmann`] for a raw pair of states.
pub fn canonical_uhlmann_states(psi: &BipartiteState, phi: &BipartiteState, eta: f64) -> Result<PartialIsometryOp> {
    let m = transition_operator(psi, phi)?;
    PartialIsometryOp::new(sgn_eta(&m, eta)?)
}

/// Polar completion `Ũ = U_f V_f†` from a full SVD of `W`.
///
/// The zero-singular-value block of the SVD is not unique; it is fixed here by
/// mapping `ker W` onto `(ran W)^⊥` with the polar part of `(I − WW†)(I − W†W)`,
/// then pairing any leftover directions by eigenbasis. So `Ũ = W` for unitary
/// `W`, and `Ũ = I` whenever `W` is a projection.
pub fn unitary_completion(w: &PartialIsometryOp) -> Result<CompletionChannel> {
    let m = w.matrix();
    let d = m.nrows();
    let id = CMat::identity(d, d);
    let pl = &id - m * m.adjoint();
    let pr = &id - w.support_projector();
    let x = sgn_eta(&(&pl * &pr), 1e-9)?;
    let rest_r = range_basis(&(&pr - x.adjoint() * &x))?;
    let rest_l = range_basis(&(&pl - &x * x.adjoint()))?;
    if rest_r.len() != rest_l.len() {
        return Err(Error::NoConvergence("unitary completion"));
    }
    let mut unitary = m + x;
    for (l, r) in rest_l.iter().zip(&rest_r) {
        unitary += l * r.adjoint();
    }
    if !is_unitary(&unitary, TOL_EXACT) {
        return Err(Error::NoConvergence("unitary completion"));
    }
    Ok(CompletionChannel { unitary })
}

/// Orthonormal basis of the range of a projector.
fn range_basis(p: &CMat) -> Result<Vec<CVec>> {
    let (vals, vecs) = herm_eig(p)?;
    let mut idx: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
    idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    Ok(idx.into_iter().map(|i| vecs.column(i).into_owned()).collect())
}

/// Everything about one instance at one cutoff.
#[derive(Clone, Debug)]
pub struct UhlmannSolution {
    pub kappa: f64,
    pub eta: f64,
    pub w: PartialIsometryOp,
    pub completion: CompletionChannel,
}

impl UhlmannSolution {
    pub fn solve(x: &UhlmannInstance, eta: f64) -> Result<Self> {
        let info = validate_instance(x)?;
        let w = canonical_uhlmann(x, eta)?;
        let completion = unitary_completion(&w)?;
        Ok(Self { kappa: info.kappa, eta, w, completion })
    }

    /// `Ũ`.
    pub fn unitary(&self) -> &CMat {
        self.completion.unitary()
    }
}

/// Applies `id ⊗ Ũ` to register `reg` of a joint pure state with register dims `dims`.
pub fn apply_uhlmann(x: &UhlmannInstance, eta: f64, target: &CVec, dims: &[usize], reg: usize) -> Result<CVec> {
    let sol = UhlmannSolution::solve(x, eta)?;
    apply_completion(&sol.completion, target, dims, reg)
}

/// Applies a completion to one register.
pub fn apply_completion(u: &CompletionChannel, target: &CVec, dims: &[usize], reg: usize) -> Result<CVec> {
    let d = *dims.get(reg).ok_or(Error::InvalidRegister { index: reg, count: dims.len() })?;
    if d != u.unitary().nrows() {
        return Err(Error::DimensionMismatch { expected: u.unitary().nrows(), got: d });
    }
    apply_op_vec(target, dims, &[reg], u.unitary())
}

/// `(id ⊗ Ũ)|C⟩` for the instance itself.
pub fn transport(x: &UhlmannInstance, eta: f64) -> Result<BipartiteState> {
    let (c, _) = x.states()?;
    let v = apply_uhlmann(x, eta, c.amplitudes(), &[c.d_a(), c.d_b()], 1)?;
    BipartiteState::new(v, c.d_a(), c.d_b())
}

/// `|⟨φ|(id ⊗ W)|ψ⟩|²` for the bare partial isometry.
pub fn uhlmann_overlap(psi: &BipartiteState, phi: &BipartiteState, w: &CMat) -> Result<f64> {
    let v = apply_op_vec(psi.amplitudes(), &[psi.d_a(), psi.d_b()], &[1], w)?;
    Ok(phi.amplitudes().dotc(&v).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::{cr, c};

    #[test]
    fn unitary_w_completes_to_itself() {
        let h = qcore::Gate::H.matrix();
        let w = PartialIsometryOp::new(h.clone()).unwrap();
        assert!(max_abs(&(unitary_completion(&w).unwrap().unitary() - h)) < 1e-12);
    }

    #[test]
    fn diagonal_projection_completes_to_identity() {
        let w = PartialIsometryOp::new(CMat::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(0.0)])).unwrap();
        let u = unitary_completion(&w).unwrap();
        assert!(max_abs(&(u.unitary() - CMat::identity(2, 2))) < 1e-12);
        assert_eq!(w.rank(), 1);
    }

    #[test]
    fn rejects_non_partial_isometry() {
        assert!(PartialIsometryOp::new(CMat::identity(2, 2) * cr(0.5)).is_err());
        assert!(PartialIsometryOp::new(CMat::from_row_slice(1, 2, &[cr(1.0), c(0.0, 0.0)])).is_err());
    }

    #[test]
    fn identical_states_give_support_projector() {
        let v = CVec::from_vec(vec![cr(0.6), cr(0.0), cr(0.0), cr(0.0), cr(0.8), cr(0.0)]);
        let s = BipartiteState::new(v, 2, 3).unwrap();
        let w = canonical_uhlmann_states(&s, &s, 0.0).unwrap();
        let mut p = CMat::zeros(3, 3);
        p[(0, 0)] = cr(1.0);
        p[(1, 1)] = cr(1.0);
        assert!(max_abs(&(w.matrix() - p)) < 1e-12);
    }
}
