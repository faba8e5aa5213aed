//! Decoupling and decoding of channels.
//!
//! For a dilation `V: A → B ⊗ C` (output `B`, environment `C`) and a reference
//! `R ≅ A`, the decoupling fidelity compares `N^c(Φ_AR)` with
//! `N^c(id/d) ⊗ id/d`. The decoder is the Uhlmann completion between
//!
//! - `|E⟩ = (V|Φ⟩_RA) ⊗ |0⟩_A'R'` and
//! - `|F⟩ = |Φ⟩_RA' ⊗ V|Φ⟩_AR'`,
//!
//! acting on `B A' R'` with `C R` untouched.

use serde::{Deserialize, Serialize};

use crypto::CommitmentScheme;
use qcore::channel::max_entangled;
use qcore::linalg::{fidelity_pure, kron};
use qcore::registers::{partial_trace_mat, permutation_matrix, permute_vec, reduce_pure};
use qcore::channel::ChannelData;
use qcore::{cr, fidelity, BipartiteState, CMat, CVec, ChannelDesc, DensityOp, Error, GateCircuit, Result};
use uhlmann::{UhlmannInstance, UhlmannSolution};

/// `|E⟩`, `|F⟩` laid out as `[C, R] ⊗ [B, A', R']`.
fn decoding_states(ch: &ChannelDesc) -> Result<(BipartiteState, BipartiteState)> {
    let (d, d_b, d_c) = (ch.d_in(), ch.d_out(), ch.d_env());
    let phi = max_entangled(d);
    // V|Φ⟩ with the input first: registers [B, C, R]
    let (vphi, _) = ch.dilate_vec(&phi, &[d, d], 0)?;
    let zero = CVec::from_fn(d * d, |i, _| cr(if i == 0 { 1.0 } else { 0.0 }));
    // |E⟩ on [B, C, R, A', R'] -> [C, R, B, A', R']
    let e = permute_vec(&qcore::linalg::kron_vec(&vphi, &zero), &[d_b, d_c, d, d, d], &[1, 2, 0, 3, 4])?;
    // |F⟩ on [R, A', B, C, R'] -> [C, R, B, A', R']
    let f = permute_vec(&qcore::linalg::kron_vec(&phi, &vphi), &[d, d, d_b, d_c, d], &[3, 0, 2, 1, 4])?;
    let (da, db) = (d_c * d, d_b * d * d);
    Ok((BipartiteState::new(e, da, db)?, BipartiteState::new(f, da, db)?))
}

/// `F(N^c(Φ_AR), N^c(id/d) ⊗ id/d)`.
pub fn decoupling_fidelity(ch: &ChannelDesc) -> Result<f64> {
    let d = ch.d_in();
    let (vphi, dims) = ch.dilate_vec(&max_entangled(d), &[d, d], 0)?;
    // dims = [B, C, R]
    let cr_state = reduce_pure(&vphi, &dims, &[1, 2])?;
    let (env, _) = partial_trace_mat(&cr_state, &[dims[1], d], &[0])?;
    let product = kron(&env, &(CMat::identity(d, d) * cr(1.0 / d as f64)));
    fidelity(
        &DensityOp::from_parts_unchecked(cr_state, vec![dims[1], d]),
        &DensityOp::from_parts_unchecked(product, vec![dims[1], d]),
    )
}

/// `F((D ∘ N)(Φ_AR), Φ_A'R)`.
pub fn decoding_fidelity(ch: &ChannelDesc, decoder: &ChannelDesc) -> Result<f64> {
    let d = ch.d_in();
    let phi = max_entangled(d);
    let rho = DensityOp::from_pure(&phi, &[d, d])?;
    let (mid, dims) = ch.run_on(rho.matrix(), &[d, d], 0)?;
    let (out, _) = decoder.run_on(&mid, &dims, 0)?;
    fidelity_pure(&phi, &out)
}

/// A decoder and how well it does.
#[derive(Clone, Debug)]
pub struct DecoderReport {
    pub decoder: ChannelDesc,
    /// Decoding fidelity of `decoder`.
    pub fidelity: f64,
    /// Fidelity of the Uhlmann instance, equal to the decoupling fidelity.
    pub instance_fidelity: f64,
}

/// Reports are plot-ready without the dilation matrix.
impl Serialize for DecoderReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DecoderReport", 3)?;
        st.serialize_field("fidelity", &self.fidelity)?;
        st.serialize_field("instance_fidelity", &self.instance_fidelity)?;
        st.serialize_field("decoder_dims", &[self.decoder.d_in(), self.decoder.d_out()])?;
        st.end()
    }
}

/// Decoder `B → A'`: append `A'R'` in `|0⟩`, apply the completion, keep `A'`.
pub fn decoder_from_uhlmann(ch: &ChannelDesc) -> Result<DecoderReport> {
    let (d, d_b) = (ch.d_in(), ch.d_out());
    qcore::ensure_pure_cap(d * d * d * d_b * ch.d_env())?;
    let (e, f) = decoding_states(ch)?;
    let sol = UhlmannSolution::solve(&UhlmannInstance::raw(e, f)?, 0.0)?;
    // completion output [B, A', R'] -> [A', B, R']
    let p = permutation_matrix(&[d_b, d, d], &[1, 0, 2])?;
    let decoder = ChannelDesc::new(p * sol.unitary(), d_b, d * d, 0, d, d_b * d)?;
    let fidelity = decoding_fidelity(ch, &decoder)?;
    Ok(DecoderReport { decoder, fidelity, instance_fidelity: sol.kappa })
}

/// The qubit channel `|b⟩ ↦ Tr_XR |θ_b⟩⟨θ_b|` with
/// `|θ_b⟩ = 2^{-1/2} Σ_a X^a|b⟩_A |a⟩_X |ψ_a⟩_CR`. Output is `A ⊗ C`.
pub fn commitment_channel(scheme: &CommitmentScheme) -> Result<ChannelDesc> {
    let states = [scheme.split_state(0)?, scheme.split_state(1)?];
    let (d_c, d_r) = (states[0].d_a(), states[0].d_b());
    let (d_out, d_env) = (2 * d_c, 2 * d_r);
    qcore::ensure_density_cap(d_out * d_env)?;
    let amp = cr(std::f64::consts::FRAC_1_SQRT_2);
    let mut v = CMat::zeros(d_out * d_env, 2);
    for b in 0..2 {
        for (x, st) in states.iter().enumerate() {
            let a_out = b ^ x;
            for c in 0..d_c {
                for r in 0..d_r {
                    v[((a_out * d_c + c) * d_env + x * d_r + r, b)] = amp * st.amplitudes()[c * d_r + r];
                }
            }
        }
    }
    ChannelDesc::from_isometry(&v, d_out, d_env)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ChannelFile {
    Circuit { circuit: GateCircuit, n_in: usize, env: Vec<usize> },
    Dilation(ChannelData),
}

/// Parses a channel file: either `{"circuit", "n_in", "env"}` (a dilation
/// circuit with environment qubits listed) or a serialized dilation matrix.
pub fn channel_from_json(s: &str) -> Result<ChannelDesc> {
    let f: ChannelFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    match f {
        ChannelFile::Circuit { circuit, n_in, env } => ChannelDesc::from_circuit(&circuit, n_in, &env),
        ChannelFile::Dilation(d) => ChannelDesc::from_data(&d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::Gate;

    #[test]
    fn identity_channel_is_decoupled() {
        let ch = ChannelDesc::identity(2).unwrap();
        assert!((decoupling_fidelity(&ch).unwrap() - 1.0).abs() < 1e-12);
        assert!((decoder_from_uhlmann(&ch).unwrap().fidelity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unitary_channel_decoder_inverts() {
        let u = Gate::H.matrix() * Gate::T.matrix();
        let ch = ChannelDesc::from_unitary(u).unwrap();
        let r = decoder_from_uhlmann(&ch).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn channel_files() {
        let c = r#"{"circuit":{"n_qubits":2,"gates":[{"g":"CNOT","q":[0,1]}]},"n_in":1,"env":[1]}"#;
        let ch = channel_from_json(c).unwrap();
        assert_eq!((ch.d_in(), ch.d_out(), ch.d_env()), (2, 2, 2));
        // a CNOT copy into the environment dephases
        assert!((decoupling_fidelity(&ch).unwrap() - 0.5).abs() < 1e-10);
        let again = channel_from_json(&serde_json::to_string(&ch.to_data()).unwrap()).unwrap();
        assert_eq!(again.dilation(), ch.dilation());
        assert!(matches!(channel_from_json("{\"circuit\": 3}"), Err(Error::Parse(_))));
    }

    #[test]
    fn erasing_channel_is_not_decodable() {
        // the environment receives the input; the output is a fixed |0⟩
        let swap = qcore::registers::permutation_matrix(&[2, 2], &[1, 0]).unwrap();
        let ch = ChannelDesc::new(swap, 2, 2, 0, 2, 2).unwrap();
        assert!((decoupling_fidelity(&ch).unwrap() - 0.25).abs() < 1e-10);
        assert!(decoder_from_uhlmann(&ch).unwrap().fidelity <= 0.25 + 1e-10);
    }
}
