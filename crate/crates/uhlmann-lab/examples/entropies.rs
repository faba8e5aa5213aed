//! Min-, max- and collision entropies and the smoothed max-entropy.
//!
//! cargo run -p uhlmann-lab --example entropies

use uhlmann_lab::qcore::random::random_density;
use uhlmann_lab::qcore::{DensityOp, Seed};
use uhlmann_lab::shannon::entropies;

fn main() {
    let states = [
        ("maximally mixed, 3 qubits", DensityOp::maximally_mixed(8).unwrap()),
        ("random rank 2, 3 qubits", random_density(8, 2, Seed(1)).unwrap()),
        ("random full rank, 2 qubits", random_density(4, 4, Seed(2)).unwrap()),
    ];
    for (name, rho) in &states {
        for eps in [0.0, 0.1] {
            let e = entropies(rho, eps).unwrap();
            println!(
                "{name:<27} eps {eps:<3}  Hmin {:.4}  H2 {:.4}  Hmax {:.4}  Hmax^eps {:.4}",
                e.h_min, e.h2_lower, e.h_max, e.h_max_smoothed
            );
        }
    }
}
