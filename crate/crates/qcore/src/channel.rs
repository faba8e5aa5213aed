//! Channels in Stinespring form.
//!
//! A [`ChannelDesc`] is a unitary `U` on `in ⊗ anc` with the ancilla prepared in a
//! fixed basis state, followed by a split of the output space into `out ⊗ env`
//! (output register first). The channel traces out `env`; its complement traces
//! out `out`.

use serde::{Deserialize, Serialize};

use crate::linalg::{complete_orthonormal, is_isometry, is_unitary, kron};
use crate::registers::{apply_map_mat, apply_map_vec, partial_trace_mat, permutation_matrix, qubit_dims};
use crate::state::MatrixData;
use crate::{check_density_cap, cr, CMat, CVec, DensityOp, Error, GateCircuit, Result, TOL_EXACT};

/// Stinespring dilation plus output/environment split.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelDesc {
    dilation: CMat,
    d_in: usize,
    d_anc: usize,
    anc_init: usize,
    d_out: usize,
    d_env: usize,
}

impl ChannelDesc {
    /// Validating constructor. `dilation` acts on `d_in·d_anc` and its output is read as `d_out ⊗ d_env`.
    pub fn new(dilation: CMat, d_in: usize, d_anc: usize, anc_init: usize, d_out: usize, d_env: usize) -> Result<Self> {
        let d = d_in * d_anc;
        if d_in == 0 || d_anc == 0 || d_out == 0 || d_env == 0 {
            return Err(Error::InvalidChannel("register dimensions must be positive".into()));
        }
        if !dilation.is_square() || dilation.nrows() != d {
            return Err(Error::DimensionMismatch { expected: d, got: dilation.nrows() });
        }
        if d_out * d_env != d {
            return Err(Error::InvalidChannel(format!("output split {d_out}×{d_env} does not match dimension {d}")));
        }
        if anc_init >= d_anc {
            return Err(Error::InvalidChannel(format!("ancilla basis state {anc_init} out of range {d_anc}")));
        }
        check_density_cap(d)?;
        if !is_unitary(&dilation, TOL_EXACT) {
            return Err(Error::InvalidChannel("dilation is not unitary".into()));
        }
        Ok(Self { dilation, d_in, d_anc, anc_init, d_out, d_env })
    }

    /// Identity channel on dimension `d` (trivial environment).
    pub fn identity(d: usize) -> Result<Self> {
        Self::new(CMat::identity(d, d), d, 1, 0, d, 1)
    }

    /// `ρ ↦ UρU†`.
    pub fn from_unitary(u: CMat) -> Result<Self> {
        let d = u.nrows();
        Self::new(u, d, 1, 0, d, 1)
    }

    /// Completes an isometry `V: d_in → d_out ⊗ d_env` to a dilation.
    ///
    /// When `d_out·d_env` is not a multiple of `d_in` the environment is enlarged
    /// with unused levels.
    pub fn from_isometry(v: &CMat, d_out: usize, d_env: usize) -> Result<Self> {
        let d_in = v.ncols();
        if v.nrows() != d_out * d_env {
            return Err(Error::DimensionMismatch { expected: d_out * d_env, got: v.nrows() });
        }
        if !is_isometry(v, TOL_EXACT) {
            return Err(Error::InvalidChannel("map is not an isometry".into()));
        }
        let mut env = d_env;
        while !(d_out * env).is_multiple_of(d_in) {
            env += 1;
        }
        let v = if env != d_env {
            let mut w = CMat::zeros(d_out * env, d_in);
            for o in 0..d_out {
                for e in 0..d_env {
                    w.row_mut(o * env + e).copy_from(&v.row(o * d_env + e));
                }
            }
            w
        } else {
            v.clone()
        };
        let d = d_out * env;
        check_density_cap(d)?;
        let d_anc = d / d_in;
        let full = complete_orthonormal(&v);
        // column i·d_anc is V|i⟩; the remaining completion columns fill the other slots
        let mut dil = CMat::zeros(d, d);
        let mut extra = d_in;
        for i in 0..d_in {
            for a in 0..d_anc {
                let src = if a == 0 {
                    i
                } else {
                    extra += 1;
                    extra - 1
                };
                dil.set_column(i * d_anc + a, &full.column(src));
            }
        }
        Self::new(dil, d_in, d_anc, 0, d_out, env)
    }

    /// Kraus form `ρ ↦ Σ K ρ K†`; the environment indexes the operators.
    pub fn from_kraus(ks: &[CMat]) -> Result<Self> {
        let first = ks.first().ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (d_out, d_in) = first.shape();
        let n = ks.len();
        let mut v = CMat::zeros(d_out * n, d_in);
        for (e, k) in ks.iter().enumerate() {
            if k.shape() != (d_out, d_in) {
                return Err(Error::InvalidChannel("Kraus operators differ in shape".into()));
            }
            for o in 0..d_out {
                v.row_mut(o * n + e).copy_from(&k.row(o));
            }
        }
        Self::from_isometry(&v, d_out, n)
    }

    /// Compiles a circuit: the first `n_in` qubits carry the input, the rest start
    /// in `|0⟩`; qubits listed in `env` form the environment and the others, in
    /// order, the output.
    pub fn from_circuit(circuit: &GateCircuit, n_in: usize, env: &[usize]) -> Result<Self> {
        let n = circuit.n_qubits;
        if n_in > n || env.iter().any(|&q| q >= n) {
            return Err(Error::InvalidChannel("channel registers exceed the circuit".into()));
        }
        let out: Vec<usize> = (0..n).filter(|q| !env.contains(q)).collect();
        let mut perm = out.clone();
        perm.extend_from_slice(env);
        let p = permutation_matrix(&qubit_dims(n), &perm)?;
        let u = p * circuit.unitary()?;
        Self::new(u, 1 << n_in, 1 << (n - n_in), 0, 1 << out.len(), 1 << env.len())
    }

    pub fn dilation(&self) -> &CMat {
        &self.dilation
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_anc(&self) -> usize {
        self.d_anc
    }

    pub fn anc_init(&self) -> usize {
        self.anc_init
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_env(&self) -> usize {
        self.d_env
    }

    /// The Stinespring isometry `V = U(· ⊗ |anc_init⟩)`, rows ordered `out ⊗ env`.
    pub fn isometry(&self) -> CMat {
        let mut v = CMat::zeros(self.d_out * self.d_env, self.d_in);
        for i in 0..self.d_in {
            v.set_column(i, &self.dilation.column(i * self.d_anc + self.anc_init));
        }
        v
    }

    /// Kraus operators `(I ⊗ ⟨e|) V`.
    pub fn kraus(&self) -> Vec<CMat> {
        let v = self.isometry();
        (0..self.d_env)
            .map(|e| CMat::from_fn(self.d_out, self.d_in, |o, i| v[(o * self.d_env + e, i)]))
            .collect()
    }

    /// Applies the channel to a state on its input.
    pub fn run(&self, input: &DensityOp) -> Result<DensityOp> {
        if input.dim() != self.d_in {
            return Err(Error::DimensionMismatch { expected: self.d_in, got: input.dim() });
        }
        let v = self.isometry();
        let full = &v * input.matrix() * v.adjoint();
        let (m, _) = partial_trace_mat(&full, &[self.d_out, self.d_env], &[0])?;
        Ok(DensityOp::from_parts_unchecked(m, vec![self.d_out]))
    }

    /// Applies the channel to register `reg` of a joint matrix; the output takes its place.
    pub fn run_on(&self, rho: &CMat, dims: &[usize], reg: usize) -> Result<(CMat, Vec<usize>)> {
        if dims.get(reg) != Some(&self.d_in) {
            return Err(Error::DimensionMismatch { expected: self.d_in, got: dims.get(reg).copied().unwrap_or(0) });
        }
        let (m, d2) = apply_map_mat(rho, dims, reg, &self.isometry(), &[self.d_out, self.d_env])?;
        let keep: Vec<usize> = (0..d2.len()).filter(|&i| i != reg + 1).collect();
        partial_trace_mat(&m, &d2, &keep)
    }

    /// Applies the Stinespring isometry to register `reg` of a pure vector; the
    /// register becomes `out, env` (two consecutive registers).
    pub fn dilate_vec(&self, v: &CVec, dims: &[usize], reg: usize) -> Result<(CVec, Vec<usize>)> {
        if dims.get(reg) != Some(&self.d_in) {
            return Err(Error::DimensionMismatch { expected: self.d_in, got: dims.get(reg).copied().unwrap_or(0) });
        }
        apply_map_vec(v, dims, reg, &self.isometry(), &[self.d_out, self.d_env])
    }

    /// The complementary channel: same dilation with output and environment swapped.
    pub fn complementary(&self) -> Result<Self> {
        let p = permutation_matrix(&[self.d_out, self.d_env], &[1, 0])?;
        Self::new(p * &self.dilation, self.d_in, self.d_anc, self.anc_init, self.d_env, self.d_out)
    }

    /// `other ∘ self`. The environment is `env(other) ⊗ env(self)`.
    pub fn then(&self, other: &ChannelDesc) -> Result<Self> {
        if other.d_in != self.d_out {
            return Err(Error::DimensionMismatch { expected: self.d_out, got: other.d_in });
        }
        let v1 = self.isometry();
        let v2 = other.isometry();
        let v = kron(&v2, &CMat::identity(self.d_env, self.d_env)) * v1;
        Self::from_isometry(&v, other.d_out, other.d_env * self.d_env)
    }

    /// Serializable form.
    pub fn to_data(&self) -> ChannelData {
        ChannelData {
            dilation: MatrixData::from_mat(&self.dilation),
            d_in: self.d_in,
            d_anc: self.d_anc,
            anc_init: self.anc_init,
            d_out: self.d_out,
            d_env: self.d_env,
        }
    }

    pub fn from_data(d: &ChannelData) -> Result<Self> {
        Self::new(d.dilation.to_mat()?, d.d_in, d.d_anc, d.anc_init, d.d_out, d.d_env)
    }
}

/// JSON form of a [`ChannelDesc`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelData {
    pub dilation: MatrixData,
    pub d_in: usize,
    pub d_anc: usize,
    pub anc_init: usize,
    pub d_out: usize,
    pub d_env: usize,
}

/// `|Φ⟩ = Σ|i⟩|i⟩/√d`.
pub fn max_entangled(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    let a = cr(1.0 / (d as f64).sqrt());
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}
