//! One-shot compression from two Uhlmann completions.
//!
//! With a Clifford `U` on `A` (`n` qubits) split as `E' ⊗ C` (`n − s` and `s`
//! qubits), the codec solves the Uhlmann problem between
//!
//! - `|F⟩ = |Φ⟩_EE' ⊗ |ρ⟩_AR` and
//! - `|G⟩ = Σ_y |y⟩_E ⊗ (Π_y U ⊗ id)|ρ⟩_AR ⊗ |0⟩_F`
//!
//! with `E R` untouched. `Ξ` completes `F → G` on `E'A → E'CF`, `Λ` completes
//! `G → F`. The encoder feeds `|y*⟩_E'` into `Ξ` and keeps `C`; the decoder feeds
//! `|y*⟩_E' |0⟩_F` into `Λ` and keeps `A`.

use serde::{Deserialize, Serialize};

use qcore::channel::ChannelData;
use qcore::clifford::random_clifford;
use qcore::linalg::{herm_eig, trace_distance_mat};
use qcore::random::random_state_with;
use qcore::registers::{apply_op_vec, permutation_matrix};
use qcore::{cr, BipartiteState, CMat, CVec, ChannelDesc, DensityOp, Error, GateCircuit, Result, Seed};
use uhlmann::{UhlmannInstance, UhlmannSolution};

use crate::entropy::entropies;

/// The state to compress.
#[derive(Clone, Debug)]
pub enum Source {
    /// A density matrix on `n` qubits.
    Density(DensityOp),
    /// `C|0…0⟩` with the first `n_out` qubits as the source and the rest as purification.
    Circuit { circuit: GateCircuit, n_out: usize },
}

impl Source {
    /// A purification `|ρ⟩_AR`.
    pub fn purification(&self) -> Result<BipartiteState> {
        match self {
            Self::Density(rho) => {
                let (vals, vecs) = herm_eig(rho.matrix())?;
                let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 1e-14).collect();
                let (d, r) = (rho.dim(), keep.len());
                let mut v = CVec::zeros(d * r);
                for (j, &i) in keep.iter().enumerate() {
                    let w = cr(vals[i].sqrt());
                    for a in 0..d {
                        v[a * r + j] = vecs[(a, i)] * w;
                    }
                }
                BipartiteState::normalized(v, d, r)
            }
            Self::Circuit { circuit, n_out } => circuit.apply_basis(0, 1 << n_out),
        }
    }

    pub fn density(&self) -> Result<DensityOp> {
        match self {
            Self::Density(rho) => Ok(rho.clone()),
            Self::Circuit { .. } => Ok(self.purification()?.reduced_a()),
        }
    }

    fn n_qubits(&self) -> Result<usize> {
        let d = self.density()?.dim();
        if !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(d));
        }
        Ok(d.trailing_zeros() as usize)
    }
}

/// Encoder `n → s` qubits and decoder `s → n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressionCodec {
    pub e: ChannelDesc,
    pub d: ChannelDesc,
    pub s: usize,
    /// Measured outcome on the first `n − s` qubits, as a bit string.
    pub y_star: String,
    pub clifford_seed: Seed,
    /// `F` of the two `E R` marginals.
    pub instance_fidelity: f64,
}

#[derive(Serialize, Deserialize)]
struct CodecData {
    #[serde(rename = "E")]
    e: ChannelData,
    #[serde(rename = "D")]
    d: ChannelData,
    s: usize,
    y_star: String,
    clifford_seed: Seed,
    instance_fidelity: f64,
}

impl CompressionCodec {
    /// Keeps the first `s` of `m` qubits and refills the rest with `|0⟩`.
    pub fn truncation(m: usize, s: usize) -> Result<Self> {
        if s > m {
            return Err(Error::InvalidArgument(format!("cannot keep {s} of {m} qubits")));
        }
        let (d, dc) = (1usize << m, 1usize << s);
        let e = ChannelDesc::new(CMat::identity(d, d), d, 1, 0, dc, d / dc)?;
        let dec = ChannelDesc::new(CMat::identity(d, d), dc, d / dc, 0, d, 1)?;
        Ok(Self { e, d: dec, s, y_star: "0".repeat(m - s), clifford_seed: Seed(0), instance_fidelity: f64::NAN })
    }

    pub fn to_json(&self) -> String {
        let data = CodecData {
            e: self.e.to_data(),
            d: self.d.to_data(),
            s: self.s,
            y_star: self.y_star.clone(),
            clifford_seed: self.clifford_seed,
            instance_fidelity: self.instance_fidelity,
        };
        serde_json::to_string(&data).expect("codec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: CodecData = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self {
            e: ChannelDesc::from_data(&c.e)?,
            d: ChannelDesc::from_data(&c.d)?,
            s: c.s,
            y_star: c.y_star,
            clifford_seed: c.clifford_seed,
            instance_fidelity: c.instance_fidelity,
        })
    }
}

/// `ceil(h^ε_max + 8 log(4/δ))` with `ε = (δ/40)⁴`, clamped to `[0, n]`.
pub fn target_size(source: &Source, delta: f64) -> Result<usize> {
    check_delta(delta)?;
    let n = source.n_qubits()?;
    let h = entropies(&source.density()?, (delta / 40.0).powi(4))?.h_max_smoothed;
    let s = (h + 8.0 * (4.0 / delta).log2()).ceil().max(0.0) as usize;
    Ok(s.min(n))
}

/// `20 ν^{1/4}` with `ν = 2^{−(s − h^ε_max)/2} + 8ε` and `ε = (δ/40)⁴`.
pub fn error_bound(source: &Source, s: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let eps = (delta / 40.0).powi(4);
    let h = entropies(&source.density()?, eps)?.h_max_smoothed;
    let nu = (-0.5 * (s as f64 - h)).exp2() + 8.0 * eps;
    Ok(20.0 * nu.powf(0.25))
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// Codec at the size chosen by [`target_size`].
pub fn compress(source: &Source, delta: f64, seed: Seed) -> Result<CompressionCodec> {
    compress_to(source, target_size(source, delta)?, seed)
}

/// Codec with exactly `s` kept qubits.
pub fn compress_to(source: &Source, s: usize, seed: Seed) -> Result<CompressionCodec> {
    let n = source.n_qubits()?;
    if s > n {
        return Err(Error::InvalidArgument(format!("cannot keep {s} of {n} qubits")));
    }
    let rho = source.purification()?;
    let (d_a, d_r) = (rho.d_a(), rho.d_b());
    let (d_e, d_c) = (1usize << (n - s), 1usize << s);
    qcore::ensure_pure_cap(d_e * d_r * d_e * d_a)?;
    qcore::ensure_density_cap(d_e * d_a)?;

    let clifford_seed = seed.child("compress-clifford", 0);
    let u = random_clifford(n, clifford_seed)?;
    let rotated = apply_op_vec(rho.amplitudes(), &[d_a, d_r], &[0], &u)?;

    let (da, db) = (d_e * d_r, d_e * d_a);
    let norm = cr(1.0 / (d_e as f64).sqrt());
    let mut f = CVec::zeros(da * db);
    let mut g = CVec::zeros(da * db);
    for e in 0..d_e {
        for r in 0..d_r {
            let left = (e * d_r + r) * db;
            for a in 0..d_a {
                f[left + e * d_a + a] = norm * rho.amplitudes()[a * d_r + r];
            }
            // G's right side is (E', C, F) with E' = e and F = 0
            for c in 0..d_c {
                g[left + (e * d_c + c) * d_e] = rotated[(e * d_c + c) * d_r + r];
            }
        }
    }
    let (f, g) = (BipartiteState::new(f, da, db)?, BipartiteState::new(g, da, db)?);
    let forward = UhlmannSolution::solve(&UhlmannInstance::raw(f.clone(), g.clone())?, 0.0)?;
    let backward = UhlmannSolution::solve(&UhlmannInstance::raw(g, f)?, 0.0)?;

    let alpha = |y: usize| (0..d_c * d_r).map(|i| rotated[y * d_c * d_r + i].norm_sqr()).sum::<f64>();
    let y_star = (0..d_e).max_by(|&a, &b| alpha(a).total_cmp(&alpha(b)).then(b.cmp(&a))).unwrap_or(0);

    let p_in = permutation_matrix(&[d_a, d_e], &[1, 0])?;
    let p_out = permutation_matrix(&[d_e, d_c, d_e], &[1, 0, 2])?;
    let enc = ChannelDesc::new(p_out * forward.unitary() * p_in, d_a, d_e, y_star, d_c, d_e * d_e)?;
    let p_in = permutation_matrix(&[d_c, d_e, d_e], &[1, 0, 2])?;
    let p_out = permutation_matrix(&[d_e, d_a], &[1, 0])?;
    let dec = ChannelDesc::new(p_out * backward.unitary() * p_in, d_c, d_e * d_e, y_star * d_e, d_a, d_e)?;
    let bits = if n > s { format!("{:0width$b}", y_star, width = n - s) } else { String::new() };
    Ok(CompressionCodec { e: enc, d: dec, s, y_star: bits, clifford_seed, instance_fidelity: forward.kappa })
}

/// `td((D ∘ E)(ψ), ψ)` with the codec acting on register `A` of `ψ_AR`.
pub fn roundtrip(codec: &CompressionCodec, purification: &BipartiteState) -> Result<f64> {
    let dims = [purification.d_a(), purification.d_b()];
    let psi = DensityOp::from_pure(purification.amplitudes(), &dims)?;
    let (mid, mid_dims) = codec.e.run_on(psi.matrix(), &dims, 0)?;
    let (out, _) = codec.d.run_on(&mid, &mid_dims, 0)?;
    trace_distance_mat(&out, psi.matrix())
}

/// Monte-Carlo estimate of `E_θ Tr((D∘E)(θ) θ)` over Haar-random pure `θ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HaarOverlap {
    pub mean: f64,
    pub std_error: f64,
    /// `R/M`: encoder output dimension over input dimension.
    pub bound: f64,
    pub samples: usize,
    /// `mean ≤ bound + 3·std_error`.
    pub holds: bool,
}

pub fn haar_overlap(e: &ChannelDesc, d: &ChannelDesc, samples: usize, seed: Seed) -> Result<HaarOverlap> {
    if d.d_in() != e.d_out() || d.d_out() != e.d_in() || samples == 0 {
        return Err(Error::InvalidArgument("decoder must invert the encoder's dimensions; need a sample".into()));
    }
    let m = e.d_in();
    let mut rng = seed.child("haar-overlap", 0).rng();
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        let theta = random_state_with(m, &mut rng);
        let rho = DensityOp::from_pure(&theta, &[m])?;
        let out = d.run(&e.run(&rho)?)?;
        values.push((theta.adjoint() * out.matrix() * &theta)[(0, 0)].re);
    }
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = if samples > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64 } else { 0.0 };
    let std_error = (var / samples as f64).sqrt();
    let bound = e.d_out() as f64 / m as f64;
    Ok(HaarOverlap { mean, std_error, bound, samples, holds: mean <= bound + 3.0 * std_error + 1e-12 })
}
