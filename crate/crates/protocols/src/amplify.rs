//! Hardness amplification: a transporter `R` for `k` parallel copies with
//! fidelity `ν` is turned into a single-copy transporter.
//!
//! The algorithm runs on `S = A₁B₁ … A_kB_k G`, plus a flag `F` and history
//! qubits `H₁ … H_T`. The flag and history registers are kept as explicit
//! branches: `branch[f | h₁ << 1 | …]` is the `S` vector with those ancilla
//! values, so `A_{ij}` and `B_i` act exactly as the coherent unitaries.

use qcore::linalg::{inner, kron, kron_vec, kron_vec_pow, ket, outer};
use qcore::registers::{apply_op_vec, reduce_pure};
use qcore::{cr, ensure_pure_cap, ChannelDesc, CMat, CVec, Error, Result, Seed};
use rand::Rng;
use serde::{Deserialize, Serialize};
use uhlmann::{UhlmannInstance, UhlmannSolution};

/// Parameters `k` and `T` of the algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplifierConfig {
    pub k: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub seed: Seed,
}

impl AmplifierConfig {
    pub fn new(k: usize, t: usize, seed: Seed) -> Result<Self> {
        if k == 0 || t == 0 {
            return Err(Error::InvalidArgument(format!("need k ≥ 1 and T ≥ 1, got k = {k}, T = {t}")));
        }
        Ok(Self { k, t, seed })
    }
}

/// Result of [`amplify_run`].
#[derive(Clone, Debug, Serialize)]
pub struct AmplifyReport {
    pub empirical_fidelity: f64,
    pub bound: f64,
    /// Standard error of the empirical mean.
    pub std_error: f64,
    /// `ν = F(R(|C⟩⟨C|^{⊗k}), |D⟩⟨D|^{⊗k})`.
    pub nu: f64,
    /// Exact single-copy fidelity for each sampled index `i`.
    pub per_index: Vec<f64>,
    pub trials: usize,
}

/// `1 − (2(1−ν)^T + 32T/√k)`, clamped to `[0, 1]`.
pub fn amplification_bound(nu: f64, t: usize, k: usize) -> f64 {
    let loss = 2.0 * (1.0 - nu).powi(t as i32) + 32.0 * t as f64 / (k as f64).sqrt();
    (1.0 - loss).clamp(0.0, 1.0)
}

struct Space {
    dims: Vec<usize>,
    k: usize,
    c: CVec,
    d: CVec,
    pc: CMat,
    pd: CMat,
    r: CMat,
    r_dag: CMat,
    r_targets: Vec<usize>,
    g0: CMat,
}

impl Space {
    fn new(x: &UhlmannInstance, r: &ChannelDesc, k: usize) -> Result<Self> {
        let (c, d) = x.states()?;
        let (da, db) = (c.d_a(), c.d_b());
        let bk = db.pow(k as u32);
        if r.d_in() != bk || r.d_out() != bk || r.d_anc() != r.d_env() {
            return Err(Error::DimensionMismatch { expected: bk, got: r.d_in() });
        }
        let dg = r.d_anc();
        let mut dims = [da, db].repeat(k);
        dims.push(dg);
        ensure_pure_cap(dims.iter().product())?;
        let mut r_targets: Vec<usize> = (0..k).map(|j| 2 * j + 1).collect();
        r_targets.push(2 * k);
        let g = ket(r.anc_init(), dg);
        Ok(Self {
            k,
            pc: outer(c.amplitudes(), c.amplitudes()),
            pd: outer(d.amplitudes(), d.amplitudes()),
            c: c.into_amplitudes(),
            d: d.into_amplitudes(),
            r: r.dilation().clone(),
            r_dag: r.dilation().adjoint(),
            r_targets,
            g0: outer(&g, &g),
            dims,
        })
    }

    fn start(&self) -> CVec {
        let g = CVec::from_fn(self.dims[2 * self.k], |i, _| cr((i == self.g0_index()) as u8 as f64));
        kron_vec(&kron_vec_pow(&self.c, self.k), &g)
    }

    fn g0_index(&self) -> usize {
        (0..self.g0.nrows()).find(|&i| self.g0[(i, i)].re > 0.5).unwrap_or(0)
    }

    fn project_pairs(&self, v: &CVec, proj: &CMat, skip: Option<usize>) -> Result<CVec> {
        let mut v = v.clone();
        for j in (0..self.k).filter(|&j| Some(j) != skip) {
            v = apply_op_vec(&v, &self.dims, &[2 * j, 2 * j + 1], proj)?;
        }
        Ok(v)
    }

    /// `P_{−i}` (or `P` when `skip` is `None`).
    fn p(&self, v: &CVec, skip: Option<usize>) -> Result<CVec> {
        let v = self.project_pairs(v, &self.pc, skip)?;
        apply_op_vec(&v, &self.dims, &[2 * self.k], &self.g0)
    }

    fn apply_r(&self, v: &CVec) -> Result<CVec> {
        apply_op_vec(v, &self.dims, &self.r_targets, &self.r)
    }

    /// `Q_{−i}` (or `Q`).
    fn q(&self, v: &CVec, skip: Option<usize>) -> Result<CVec> {
        let w = self.project_pairs(&self.apply_r(v)?, &self.pd, skip)?;
        apply_op_vec(&w, &self.dims, &self.r_targets, &self.r_dag)
    }

    /// Runs the loop; `observe` sees every nonzero branch after every operation.
    fn run(&self, skip: Option<usize>, t: usize, mut observe: impl FnMut(&CVec)) -> Result<Vec<Option<CVec>>> {
        let mut br: Vec<Option<CVec>> = vec![None; 1 << (t + 1)];
        br[0] = Some(self.start());
        for j in 0..t {
            let h = 1 << (j + 1);
            // A_ij: flip H_j on the P outcome when F = 0
            for cfg in (0..br.len()).filter(|c| c & 1 == 0 && c & h == 0) {
                if let Some(v) = br[cfg].take() {
                    let pv = self.p(&v, skip)?;
                    br[cfg] = Some(v - &pv);
                    br[cfg | h] = Some(pv);
                }
            }
            br.iter().flatten().for_each(&mut observe);
            // B_i: set F on the Q outcome when F = 0
            for cfg in (0..br.len()).filter(|c| c & 1 == 0) {
                if let Some(v) = br[cfg].take() {
                    let qv = self.q(&v, skip)?;
                    br[cfg] = Some(v - &qv);
                    br[cfg | 1] = Some(qv);
                }
            }
            br.iter().flatten().for_each(&mut observe);
        }
        Ok(br)
    }

    /// `⟨D|ρ_{A_iB_i}|D⟩` after the loop and the final `R̃`.
    fn output_fidelity(&self, i: usize, t: usize) -> Result<f64> {
        let br = self.run(Some(i), t, |_| {})?;
        let mut f = 0.0;
        for v in br.iter().flatten() {
            let rho = reduce_pure(&self.apply_r(v)?, &self.dims, &[2 * i, 2 * i + 1])?;
            f += (self.d.adjoint() * rho * &self.d)[(0, 0)].re;
        }
        Ok(f)
    }

    fn nu(&self) -> Result<f64> {
        let v = self.start();
        Ok(inner(&v, &self.q(&v, None)?).re)
    }
}

/// `ν = F(R(|C⟩⟨C|^{⊗k}), |D⟩⟨D|^{⊗k}) = Tr(PQ)`.
pub fn transporter_fidelity(x: &UhlmannInstance, r: &ChannelDesc, k: usize) -> Result<f64> {
    Space::new(x, r, k)?.nu()
}

/// Runs the algorithm `trials` times with a uniformly sampled `i` each time.
pub fn amplify_run(x: &UhlmannInstance, r: &ChannelDesc, cfg: &AmplifierConfig, trials: usize) -> Result<AmplifyReport> {
    let cfg = AmplifierConfig::new(cfg.k, cfg.t, cfg.seed)?;
    let space = Space::new(x, r, cfg.k)?;
    let nu = space.nu()?;
    let per_index: Vec<f64> = (0..cfg.k).map(|i| space.output_fidelity(i, cfg.t)).collect::<Result<_>>()?;
    let mut rng = cfg.seed.child("amplify-index", 0).rng();
    let samples: Vec<f64> = (0..trials).map(|_| per_index[rng.random_range(0..cfg.k)]).collect();
    let n = trials.max(1) as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(AmplifyReport {
        empirical_fidelity: mean,
        bound: amplification_bound(nu, cfg.t, cfg.k),
        std_error: (var / n).sqrt(),
        nu,
        per_index,
        trials,
    })
}

/// Largest distance of any intermediate `S` branch from `span{|v⟩, |w⟩}`
/// when the loop uses the full projectors `P` and `Q`.
pub fn jordan_residual(x: &UhlmannInstance, r: &ChannelDesc, cfg: &AmplifierConfig) -> Result<f64> {
    let space = Space::new(x, r, cfg.k)?;
    let v = space.start();
    let qv = space.q(&v, None)?;
    let mut basis = vec![v.clone()];
    let perp = &qv - &v * inner(&v, &qv);
    if perp.norm() > 1e-12 {
        basis.push(&perp / cr(perp.norm()));
    }
    let mut worst: f64 = 0.0;
    space.run(None, cfg.t, |u| {
        let mut res = u.clone();
        for e in &basis {
            res -= e * inner(e, u);
        }
        worst = worst.max(res.norm());
    })?;
    Ok(worst)
}

/// A `k`-copy transporter with fidelity exactly `nu`, when reachable.
///
/// `R̃ = (Ũ^{⊗k} ⊗ I_G)·(I ⊗ |0⟩⟨0| + V ⊗ |1⟩⟨1|)·(I ⊗ Ry(θ))` on `B_[k] G`, where
/// `V` cyclically shifts `B₁`. The two `G` branches are orthogonal, so
/// `ν(θ) = cos²(θ/2)·ν₁ + sin²(θ/2)·ν₀` and `θ` is solved in closed form.
pub fn engineered_transporter(x: &UhlmannInstance, k: usize, nu: f64) -> Result<ChannelDesc> {
    let sol = UhlmannSolution::solve(x, 0.0)?;
    let (c, d) = x.states()?;
    let db = c.d_b();
    let pair = [c.d_a(), db];
    let u = sol.unitary();
    let over = |m: &CMat| -> Result<f64> {
        Ok(inner(d.amplitudes(), &apply_op_vec(c.amplitudes(), &pair, &[1], m)?).norm_sqr())
    };
    let base = over(u)?;
    let nu1 = base.powi(k as i32);
    let (shift, nu0) = (1..db)
        .map(|s| {
            let v = CMat::from_fn(db, db, |i, j| cr(((j + s) % db == i) as u8 as f64));
            let val = over(&(u * &v)).map(|o| o * base.powi(k as i32 - 1));
            (v, val)
        })
        .map(|(v, val)| val.map(|x| (v, x)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::InvalidArgument("need d_B ≥ 2".into()))?;
    if !(nu0 - 1e-12..=nu1 + 1e-12).contains(&nu) {
        return Err(Error::InvalidArgument(format!("ν = {nu} outside the reachable range [{nu0}, {nu1}]")));
    }
    let s2 = if nu1 - nu0 > 1e-15 { ((nu1 - nu) / (nu1 - nu0)).clamp(0.0, 1.0) } else { 0.0 };
    let (sh, ch) = (s2.sqrt(), (1.0 - s2).sqrt());
    let ry = CMat::from_row_slice(2, 2, &[cr(ch), cr(-sh), cr(sh), cr(ch)]);
    let bk = db.pow(k as u32);
    let uk = (1..k).fold(u.clone(), |a, _| kron(&a, u));
    let vk = kron(&shift, &CMat::identity(bk / db, bk / db));
    let id = CMat::identity(bk, bk);
    let p0 = outer(&ket(0, 2), &ket(0, 2));
    let p1 = outer(&ket(1, 2), &ket(1, 2));
    let ctrl = kron(&id, &p0) + kron(&vk, &p1);
    let dil = kron(&uk, &CMat::identity(2, 2)) * ctrl * kron(&id, &ry);
    ChannelDesc::new(dil, bk, 2, 0, bk, 2)
}
