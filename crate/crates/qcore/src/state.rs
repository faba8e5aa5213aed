//! Pure bipartite states and density operators.

use serde::{Deserialize, Serialize};

use crate::linalg::{herm_eigenvalues, kron, max_abs};
use crate::registers::{partial_trace_mat, permute_mat, reduce_pure, total_dim};
use crate::{check_density_cap, check_pure_cap, cr, CMat, CVec, Error, Result, TOL_VALIDATE};

/// Normalized amplitude vector with an `(dA, dB)` split; index `a·dB + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    amps: CVec,
    d_a: usize,
    d_b: usize,
}

impl BipartiteState {
    /// Validating constructor: the norm must be 1 within `1e-10`.
    pub fn new(amps: CVec, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidState("register dimensions must be positive".into()));
        }
        if amps.len() != d_a * d_b {
            return Err(Error::DimensionMismatch { expected: d_a * d_b, got: amps.len() });
        }
        check_pure_cap(amps.len())?;
        let n = amps.norm();
        if (n - 1.0).abs() > TOL_VALIDATE {
            return Err(Error::InvalidState(format!("norm is {n}, expected 1")));
        }
        Ok(Self { amps, d_a, d_b })
    }

    /// Normalizes before validating. Fails on the zero vector.
    pub fn normalized(amps: CVec, d_a: usize, d_b: usize) -> Result<Self> {
        let n = amps.norm();
        if n < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amps / cr(n), d_a, d_b)
    }

    /// Basis state `|a⟩|b⟩`.
    pub fn basis(a: usize, b: usize, d_a: usize, d_b: usize) -> Result<Self> {
        if a >= d_a || b >= d_b {
            return Err(Error::InvalidState("basis label out of range".into()));
        }
        let mut v = CVec::zeros(d_a * d_b);
        v[a * d_b + b] = cr(1.0);
        Self::new(v, d_a, d_b)
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVec {
        self.amps
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.d_a, self.d_b]
    }

    /// Amplitudes arranged as a `dA × dB` matrix.
    pub fn as_matrix(&self) -> CMat {
        CMat::from_fn(self.d_a, self.d_b, |a, b| self.amps[a * self.d_b + b])
    }

    /// `ρ_A = Tr_B |ψ⟩⟨ψ|`.
    pub fn reduced_a(&self) -> DensityOp {
        let m = self.as_matrix();
        DensityOp::from_parts_unchecked(&m * m.adjoint(), vec![self.d_a])
    }

    /// `ρ_B = Tr_A |ψ⟩⟨ψ|`.
    pub fn reduced_b(&self) -> DensityOp {
        let m = self.as_matrix();
        DensityOp::from_parts_unchecked(m.transpose() * m.conjugate(), vec![self.d_b])
    }

    /// `|ψ⟩⟨ψ|` with dims `[dA, dB]`.
    pub fn to_density(&self) -> Result<DensityOp> {
        DensityOp::from_pure(&self.amps, &[self.d_a, self.d_b])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &BipartiteState) -> Result<crate::C64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), got: other.amps.len() });
        }
        Ok(self.amps.dotc(&other.amps))
    }
}

/// Hermitian PSD trace-one matrix over a register list.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOp {
    mat: CMat,
    dims: Vec<usize>,
}

impl DensityOp {
    /// Validating constructor (Hermitian, PSD, unit trace within `1e-10`).
    pub fn new(mat: CMat, dims: Vec<usize>) -> Result<Self> {
        let d = total_dim(&dims);
        if !mat.is_square() || mat.nrows() != d {
            return Err(Error::DimensionMismatch { expected: d, got: mat.nrows() });
        }
        check_density_cap(d)?;
        let herm_err = max_abs(&(&mat - mat.adjoint()));
        if herm_err > TOL_VALIDATE {
            return Err(Error::InvalidState(format!("not Hermitian (error {herm_err:.3e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_VALIDATE || tr.im.abs() > TOL_VALIDATE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = herm_eigenvalues(&mat)?.first().copied().unwrap_or(0.0);
        if min < -TOL_VALIDATE {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { mat, dims })
    }

    /// Skips validation; for results of operations that preserve the invariants.
    pub fn from_parts_unchecked(mat: CMat, dims: Vec<usize>) -> Self {
        Self { mat, dims }
    }

    /// `|v⟩⟨v|` for a normalized vector.
    pub fn from_pure(v: &CVec, dims: &[usize]) -> Result<Self> {
        let d = total_dim(dims);
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        check_density_cap(d)?;
        let n = v.norm();
        if (n - 1.0).abs() > TOL_VALIDATE {
            return Err(Error::InvalidState(format!("norm is {n}, expected 1")));
        }
        Ok(Self { mat: v * v.adjoint(), dims: dims.to_vec() })
    }

    /// `I/d` on a single register.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        check_density_cap(d)?;
        Ok(Self { mat: CMat::identity(d, d) * cr(1.0 / d as f64), dims: vec![d] })
    }

    /// Reduced state of a pure vector on `keep` without forming the full projector.
    pub fn reduced_from_pure(v: &CVec, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let m = reduce_pure(v, dims, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        Ok(Self { mat: m, dims: keep.iter().map(|&k| dims[k]).collect() })
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Keeps the listed registers (output in ascending register order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (m, d) = partial_trace_mat(&self.mat, &self.dims, keep)?;
        Ok(Self { mat: m, dims: d })
    }

    /// Reorders registers: output register `j` is input register `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let m = permute_mat(&self.mat, &self.dims, perm)?;
        Ok(Self { mat: m, dims: perm.iter().map(|&p| self.dims[p]).collect() })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityOp) -> Result<Self> {
        check_density_cap(self.dim() * other.dim())?;
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ok(Self { mat: kron(&self.mat, &other.mat), dims })
    }

    /// Same matrix, different register split.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        if total_dim(&dims) != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: total_dim(&dims) });
        }
        self.dims = dims;
        Ok(self)
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        herm_eigenvalues(&self.mat)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }
}

/// Serialized form of a state vector: list of `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(transparent)]
pub struct AmplitudeList(pub Vec<[f64; 2]>);

impl AmplitudeList {
    pub fn from_vec(v: &CVec) -> Self {
        Self(v.iter().map(|z| [z.re, z.im]).collect())
    }

    pub fn to_vec(&self) -> CVec {
        CVec::from_iterator(self.0.len(), self.0.iter().map(|p| crate::c(p[0], p[1])))
    }
}

/// Row-major matrix serialization with interleaved `(re, im)` doubles.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixData {
    pub fn from_mat(m: &CMat) -> Self {
        let mut data = Vec::with_capacity(2 * m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push(m[(i, j)].re);
                data.push(m[(i, j)].im);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_mat(&self) -> Result<CMat> {
        if self.data.len() != 2 * self.rows * self.cols {
            return Err(Error::Parse(format!(
                "matrix data has {} doubles, expected {}",
                self.data.len(),
                2 * self.rows * self.cols
            )));
        }
        Ok(CMat::from_fn(self.rows, self.cols, |i, j| {
            let k = 2 * (i * self.cols + j);
            crate::c(self.data[k], self.data[k + 1])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn epr() -> BipartiteState {
        let s = 0.5f64.sqrt();
        BipartiteState::new(CVec::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)]), 2, 2).unwrap()
    }

    #[test]
    fn epr_marginals_are_maximally_mixed() {
        let e = epr();
        let half = CMat::identity(2, 2) * cr(0.5);
        assert!(max_abs(&(e.reduced_a().matrix() - &half)) < 1e-15);
        assert!(max_abs(&(e.reduced_b().matrix() - &half)) < 1e-15);
        let pt = e.to_density().unwrap().partial_trace(&[1]).unwrap();
        assert!(max_abs(&(pt.matrix() - &half)) < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(BipartiteState::new(CVec::from_vec(vec![cr(1.0), cr(1.0)]), 1, 2).is_err());
        assert!(BipartiteState::normalized(CVec::from_vec(vec![cr(1.0), cr(1.0)]), 1, 2).is_ok());
    }

    #[test]
    fn density_validation() {
        let bad = CMat::from_row_slice(2, 2, &[cr(1.5), cr(0.0), cr(0.0), cr(-0.5)]);
        assert!(matches!(DensityOp::new(bad, vec![2]), Err(Error::NotPsd(_))));
        let nonherm = CMat::from_row_slice(2, 2, &[cr(0.5), c(0.0, 0.1), c(0.0, 0.1), cr(0.5)]);
        assert!(DensityOp::new(nonherm, vec![2]).is_err());
    }

    #[test]
    fn matrix_data_roundtrip() {
        let m = CMat::from_row_slice(1, 2, &[c(1.0, 2.0), c(3.0, -4.0)]);
        let md = MatrixData::from_mat(&m);
        assert_eq!(md.data, vec![1.0, 2.0, 3.0, -4.0]);
        assert_eq!(md.to_mat().unwrap(), m);
    }
}
