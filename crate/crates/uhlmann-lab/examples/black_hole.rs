//! Recovering a qubit thrown into a scrambling black hole from its radiation.
//!
//! cargo run -p uhlmann-lab --example black_hole

use uhlmann_lab::physics::{bh_decode, bh_decode_promised, BlackHoleInstance};
use uhlmann_lab::qcore::Seed;
use uhlmann_lab::shannon::decoupling_fidelity;

fn main() {
    for s in 0..8 {
        let inst = BlackHoleInstance::clifford_scrambler(6, 4, 60, Seed(s)).unwrap();
        let r = bh_decode(&inst).unwrap();
        println!("scrambler {s}: decoupling {:.3}  EPR fidelity {:.3}  Bell {:.3?}", r.decoupling, r.epr_fidelity, r.bell);
    }

    let (inst, f) = BlackHoleInstance::decodable_scrambler(6, 4, 60, Seed(2024), 0.99, 64).unwrap();
    let r = bh_decode_promised(&inst, 0.01).unwrap();
    println!("searched instance: decoupling {f:.6}, EPR fidelity {:.6}", r.epr_fidelity);

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/evaporation.json");
    let small = BlackHoleInstance::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    println!("3-qubit evaporation: decoupling {:.3}", decoupling_fidelity(&small.channel().unwrap()).unwrap());
}
