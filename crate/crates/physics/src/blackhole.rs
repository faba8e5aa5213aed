//! Decoding a qubit from black-hole radiation.
//!
//! A circuit `P` on `n` qubits takes the infalling qubit `A` (qubit 0) and
//! ancillas `G` (qubits `1..n`, all `|0⟩`) to the interior `H` (qubits
//! `0..n−r`) and the radiation `R` (the last `r` qubits). With `A` maximally
//! entangled with an outside qubit `B`, this is the state `|ψ⟩_BHR`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use qcore::channel::max_entangled;
use qcore::linalg::{inner, kron_vec, ket};
use qcore::registers::reduce_pure;
use qcore::{cr, ChannelDesc, CVec, Error, Gate, GateCircuit, Result, Seed};
use shannon::{decoder_from_uhlmann, decoupling_fidelity};

/// `P: A ⊗ G → H ⊗ R` with `r = |R|` in qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlackHoleInstance {
    #[serde(rename = "P")]
    pub p: GateCircuit,
    pub r: usize,
}

impl BlackHoleInstance {
    pub fn new(p: GateCircuit, r: usize) -> Result<Self> {
        p.validate()?;
        if p.n_qubits == 0 || r == 0 || r > p.n_qubits {
            return Err(Error::InvalidInstance(format!("need 1 ≤ r ≤ n, got n = {}, r = {r}", p.n_qubits)));
        }
        Ok(Self { p, r })
    }

    pub fn n(&self) -> usize {
        self.p.n_qubits
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.p, raw.r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    /// The channel `A → R`: append `n − 1` qubits in `|0⟩`, run `P`, discard `H`.
    pub fn channel(&self) -> Result<ChannelDesc> {
        let h: Vec<usize> = (0..self.n() - self.r).collect();
        ChannelDesc::from_circuit(&self.p, 1, &h)
    }

    /// `|ψ⟩` on `[B, H, R]`.
    pub fn state(&self) -> Result<CVec> {
        let n = self.n();
        // EPR on (B, A) followed by G = |0…0⟩; P acts on the last n qubits
        let input = kron_vec(&max_entangled(2), &ket(0, 1 << (n - 1)));
        let p = self.p.embedded(1, n + 1)?;
        p.apply_vec(&input)
    }

    /// A random Clifford-gate scrambler of `depth` gates.
    pub fn clifford_scrambler(n: usize, r: usize, depth: usize, seed: Seed) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("a scrambler needs at least two qubits".into()));
        }
        let mut rng = seed.rng();
        let mut p = GateCircuit::new(n);
        for _ in 0..depth {
            match rng.random_range(0..4) {
                0 => p.add(Gate::H, &[rng.random_range(0..n)]),
                1 => p.add(Gate::S, &[rng.random_range(0..n)]),
                k => {
                    let a = rng.random_range(0..n);
                    let b = (a + rng.random_range(1..n)) % n;
                    p.add(if k == 2 { Gate::CNOT } else { Gate::CZ }, &[a, b]);
                }
            }
        }
        Self::new(p, r)
    }

    /// The first scrambler among `seed.child("scrambler", i)`, `i < tries`, whose
    /// radiation channel has decoupling fidelity at least `min_decoupling`.
    pub fn decodable_scrambler(n: usize, r: usize, depth: usize, seed: Seed, min_decoupling: f64, tries: u64) -> Result<(Self, f64)> {
        for i in 0..tries {
            let inst = Self::clifford_scrambler(n, r, depth, seed.child("scrambler", i))?;
            let f = decoupling_fidelity(&inst.channel()?)?;
            if f >= min_decoupling {
                return Ok((inst, f));
            }
        }
        Err(Error::NoConvergence("scrambler search"))
    }
}

/// Result of [`bh_decode`].
#[derive(Clone, Debug)]
pub struct BlackHoleReport {
    pub decoder: ChannelDesc,
    /// Decoupling fidelity of the radiation channel.
    pub decoupling: f64,
    /// `⟨EPR|ρ_BA|EPR⟩` after decoding.
    pub epr_fidelity: f64,
    /// Bell-basis outcome probabilities on `BA`: `Φ+, Φ−, Ψ+, Ψ−`.
    pub bell: [f64; 4],
    /// What the channel decoder reports for the same map.
    pub channel_fidelity: f64,
}

impl Serialize for BlackHoleReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BlackHoleReport", 4)?;
        st.serialize_field("decoupling", &self.decoupling)?;
        st.serialize_field("epr_fidelity", &self.epr_fidelity)?;
        st.serialize_field("bell", &self.bell)?;
        st.serialize_field("channel_fidelity", &self.channel_fidelity)?;
        st.end()
    }
}

fn bell_basis() -> [CVec; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: [f64; 4]| CVec::from_iterator(4, a.iter().map(|&x| cr(x * h)));
    [v([1.0, 0.0, 0.0, 1.0]), v([1.0, 0.0, 0.0, -1.0]), v([0.0, 1.0, 1.0, 0.0]), v([0.0, 1.0, -1.0, 0.0])]
}

/// Decodes `A` from `R` with the Uhlmann decoder of the radiation channel and
/// measures the recovered pair `BA` in the Bell basis.
pub fn bh_decode(inst: &BlackHoleInstance) -> Result<BlackHoleReport> {
    let ch = inst.channel()?;
    let decoupling = decoupling_fidelity(&ch)?;
    let rep = decoder_from_uhlmann(&ch)?;

    let (n, r) = (inst.n(), inst.r);
    let psi = inst.state()?;
    // [B, H, R] -> decoder on R -> [B, H, A', env]
    let dims = [2, 1 << (n - r), 1 << r];
    let (out, out_dims) = rep.decoder.dilate_vec(&psi, &dims, 2)?;
    let rho = reduce_pure(&out, &out_dims, &[0, 2])?;
    let bell = bell_basis().map(|b| inner(&b, &(&rho * &b)).re);
    Ok(BlackHoleReport {
        decoder: rep.decoder,
        decoupling,
        epr_fidelity: bell[0],
        bell,
        channel_fidelity: rep.fidelity,
    })
}

/// [`bh_decode`] under the promise that the decoupling fidelity is at least
/// `1 − epsilon`; instances outside it are rejected before decoding.
pub fn bh_decode_promised(inst: &BlackHoleInstance, epsilon: f64) -> Result<BlackHoleReport> {
    let f = decoupling_fidelity(&inst.channel()?)?;
    if f < 1.0 - epsilon {
        return Err(Error::InvalidInstance(format!("decoupling fidelity {f:.6} is below 1 − ε = {:.6}", 1.0 - epsilon)));
    }
    bh_decode(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radiation_holding_everything_decodes() {
        let inst = BlackHoleInstance::new(GateCircuit::new(2), 2).unwrap();
        let rep = bh_decode(&inst).unwrap();
        assert!((rep.epr_fidelity - 1.0).abs() < 1e-9);
        assert!((rep.decoupling - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infalling_qubit_kept_inside_is_lost() {
        let inst = BlackHoleInstance::new(GateCircuit::new(2), 1).unwrap();
        let rep = bh_decode(&inst).unwrap();
        assert!(rep.epr_fidelity <= 0.5 + 1e-8);
        assert!((rep.bell.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(bh_decode_promised(&inst, 0.01).is_err());
    }

    #[test]
    fn bad_split_rejected() {
        assert!(BlackHoleInstance::new(GateCircuit::new(2), 3).is_err());
        assert!(BlackHoleInstance::new(GateCircuit::new(2), 0).is_err());
    }
}
