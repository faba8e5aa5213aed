//! Uhlmann instances: a pair of bipartite pure states with a common split.

use serde::{Deserialize, Serialize};

use qcore::linalg::kron;
use qcore::random::random_unitary;
use qcore::state::AmplitudeList;
use qcore::{cr, fidelity, BipartiteState, CVec, Error, GateCircuit, Result, Seed};

/// A pair `(|ψ⟩, |φ⟩)` on `A ⊗ B`, given either by two `2n`-qubit circuits
/// (`|C⟩ = C|0…0⟩`, `A` = first `n` qubits) or directly by amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub enum UhlmannInstance {
    Circuits { n: usize, c: GateCircuit, d: GateCircuit },
    Raw { psi: BipartiteState, phi: BipartiteState },
}

/// Summary returned by [`validate_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InstanceInfo {
    /// `F(ρ_A, σ_A)`.
    pub kappa: f64,
    pub d_a: usize,
    pub d_b: usize,
}

impl UhlmannInstance {
    /// Circuit form; both circuits must act on exactly `2n` qubits.
    pub fn circuits(n: usize, c: GateCircuit, d: GateCircuit) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("n must be positive".into()));
        }
        for (name, circ) in [("C", &c), ("D", &d)] {
            if circ.n_qubits != 2 * n {
                return Err(Error::InvalidInstance(format!(
                    "circuit {name} acts on {} qubits, expected {}",
                    circ.n_qubits,
                    2 * n
                )));
            }
            circ.validate().map_err(|e| Error::InvalidInstance(format!("circuit {name}: {e}")))?;
        }
        Ok(Self::Circuits { n, c, d })
    }

    /// Raw form; both states must share a split.
    pub fn raw(psi: BipartiteState, phi: BipartiteState) -> Result<Self> {
        if psi.dims() != phi.dims() {
            return Err(Error::InvalidInstance(format!(
                "splits differ: {:?} vs {:?}",
                psi.dims(),
                phi.dims()
            )));
        }
        Ok(Self::Raw { psi, phi })
    }

    pub fn d_a(&self) -> usize {
        match self {
            Self::Circuits { n, .. } => 1 << n,
            Self::Raw { psi, .. } => psi.d_a(),
        }
    }

    pub fn d_b(&self) -> usize {
        match self {
            Self::Circuits { n, .. } => 1 << n,
            Self::Raw { psi, .. } => psi.d_b(),
        }
    }

    /// The two states `(|C⟩, |D⟩)`.
    pub fn states(&self) -> Result<(BipartiteState, BipartiteState)> {
        match self {
            Self::Circuits { n, c, d } => {
                let dn = 1usize << n;
                Ok((c.apply_basis(0, dn)?, d.apply_basis(0, dn)?))
            }
            Self::Raw { psi, phi } => Ok((psi.clone(), phi.clone())),
        }
    }

    /// Random raw instance on `C^d ⊗ C^d` with `F(ρ_A, σ_A) = kappa`.
    ///
    /// Both states have Schmidt rank two, `cos a|00⟩ + sin a|11⟩` and
    /// `cos b|00⟩ + sin b|11⟩` with `cos²(a − b) = κ`, dressed with a shared Haar
    /// unitary on `A` and independent ones on `B`.
    pub fn with_fidelity(d: usize, kappa: f64, seed: Seed) -> Result<Self> {
        if d < 2 || !(0.0..=1.0).contains(&kappa) {
            return Err(Error::InvalidArgument(format!("need d ≥ 2 and κ ∈ [0, 1], got d = {d}, κ = {kappa}")));
        }
        // both angles in [0, π/2] so the Schmidt coefficients stay nonnegative
        let theta = kappa.sqrt().acos();
        let u = 0.1 + 0.8 * (seed.0 % 1000) as f64 / 1000.0;
        let a = theta + u * (std::f64::consts::FRAC_PI_2 - theta);
        let b = a - theta;
        let schmidt = |t: f64| {
            let mut v = CVec::zeros(d * d);
            v[0] = cr(t.cos());
            v[d + 1] = cr(t.sin());
            v
        };
        let ua = random_unitary(d, seed.child("with-fidelity-a", 0))?;
        let ub = random_unitary(d, seed.child("with-fidelity-b", 0))?;
        let vb = random_unitary(d, seed.child("with-fidelity-b", 1))?;
        let psi = kron(&ua, &ub) * schmidt(a);
        let phi = kron(&ua, &vb) * schmidt(b);
        Self::raw(BipartiteState::normalized(psi, d, d)?, BipartiteState::normalized(phi, d, d)?)
    }

    /// Parses the JSON instance format.
    pub fn from_json(s: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        match f {
            InstanceFile::Circuits { n, c, d } => Self::circuits(n, c, d),
            InstanceFile::Raw { raw } => Self::raw(
                BipartiteState::new(raw.psi.to_vec(), raw.d_a, raw.d_b)?,
                BipartiteState::new(raw.phi.to_vec(), raw.d_a, raw.d_b)?,
            ),
        }
    }

    pub fn to_json(&self) -> String {
        let f = match self {
            Self::Circuits { n, c, d } => InstanceFile::Circuits { n: *n, c: c.clone(), d: d.clone() },
            Self::Raw { psi, phi } => InstanceFile::Raw {
                raw: RawData {
                    d_a: psi.d_a(),
                    d_b: psi.d_b(),
                    psi: AmplitudeList::from_vec(psi.amplitudes()),
                    phi: AmplitudeList::from_vec(phi.amplitudes()),
                },
            },
        };
        serde_json::to_string(&f).expect("instance serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum InstanceFile {
    Circuits {
        n: usize,
        #[serde(rename = "C")]
        c: GateCircuit,
        #[serde(rename = "D")]
        d: GateCircuit,
    },
    Raw {
        raw: RawData,
    },
}

#[derive(Serialize, Deserialize)]
struct RawData {
    #[serde(rename = "dA")]
    d_a: usize,
    #[serde(rename = "dB")]
    d_b: usize,
    psi: AmplitudeList,
    phi: AmplitudeList,
}

/// Computes `κ = F(ρ_A, σ_A)` and the register dimensions.
pub fn validate_instance(x: &UhlmannInstance) -> Result<InstanceInfo> {
    let (c, d) = x.states()?;
    let kappa = fidelity(&c.reduced_a(), &d.reduced_a())?;
    Ok(InstanceInfo { kappa, d_a: x.d_a(), d_b: x.d_b() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcore::Gate;

    #[test]
    fn equal_circuits_have_unit_kappa() {
        let c = GateCircuit::new(2).push(Gate::H, &[0]).push(Gate::CNOT, &[0, 1]);
        let x = UhlmannInstance::circuits(1, c.clone(), c).unwrap();
        assert!((validate_instance(&x).unwrap().kappa - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_marginals_give_zero() {
        let psi = BipartiteState::basis(0, 0, 2, 2).unwrap();
        let phi = BipartiteState::basis(1, 1, 2, 2).unwrap();
        let x = UhlmannInstance::raw(psi, phi).unwrap();
        assert!(validate_instance(&x).unwrap().kappa.abs() < 1e-12);
    }

    #[test]
    fn arity_mismatch_is_typed() {
        let c = GateCircuit::new(3);
        let d = GateCircuit::new(2);
        assert!(matches!(UhlmannInstance::circuits(1, c, d), Err(Error::InvalidInstance(_))));
        let psi = BipartiteState::basis(0, 0, 2, 2).unwrap();
        let phi = BipartiteState::basis(0, 0, 1, 4).unwrap();
        assert!(matches!(UhlmannInstance::raw(psi, phi), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn prescribed_fidelity() {
        for (i, k) in [0.0, 0.3, 0.99, 1.0].into_iter().enumerate() {
            let x = UhlmannInstance::with_fidelity(3, k, Seed(i as u64 * 17)).unwrap();
            assert!((validate_instance(&x).unwrap().kappa - k).abs() < 1e-10);
        }
    }

    #[test]
    fn json_roundtrip_both_forms() {
        let s = r#"{"n":1,"C":{"n_qubits":2,"gates":[{"g":"H","q":[0]}]},"D":{"n_qubits":2,"gates":[]}}"#;
        let x = UhlmannInstance::from_json(s).unwrap();
        assert_eq!(UhlmannInstance::from_json(&x.to_json()).unwrap(), x);
        let r = r#"{"raw":{"dA":1,"dB":2,"psi":[[1,0],[0,0]],"phi":[[0,0],[0,1]]}}"#;
        let y = UhlmannInstance::from_json(r).unwrap();
        assert_eq!(y.d_b(), 2);
        assert_eq!(UhlmannInstance::from_json(&y.to_json()).unwrap(), y);
    }
}
