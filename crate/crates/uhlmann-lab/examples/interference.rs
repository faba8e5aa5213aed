//! Detecting the relative sign of (|C> ± |D>)/sqrt(2) is as hard as swapping
//! |C> and |D>. The swap comes from an Uhlmann transformation, and the two
//! tasks convert into each other.
//!
//! cargo run -p uhlmann-lab --example interference

use uhlmann_lab::physics::{
    controlled_swap_from_uhlmann, controlled_swap_residual, distinguisher_to_swap, interference_detect, swap_from_uhlmann,
    swap_to_distinguisher, OrthPair,
};
use uhlmann_lab::qcore::linalg::{ket, kron_vec};
use uhlmann_lab::qcore::Seed;

fn main() {
    let mut correct = 0;
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let pair = OrthPair::random(1 + i as usize % 3, 20, Seed(i)).unwrap();
        for (sign, bit) in [(1.0, 0), (-1.0, 1)] {
            correct += (interference_detect(&pair, &pair.superposition(sign).unwrap()).unwrap() == bit) as usize;
        }
        let u = controlled_swap_from_uhlmann(&pair).unwrap();
        worst = worst.max(controlled_swap_residual(&u, &pair).unwrap());
    }
    println!("sign decisions: {correct}/200, worst controlled-swap residual {worst:.2e}");

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/pair.json");
    let pair = OrthPair::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    let (c, d) = pair.states().unwrap();
    let swap = swap_from_uhlmann(&pair).unwrap();
    println!("||U|C> - |D>|| = {:.2e}", (&swap * &c - &d).norm());
    let back = distinguisher_to_swap(&swap_to_distinguisher(&swap, &c, &d).unwrap(), 1).unwrap();
    let x = pair.superposition(1.0).unwrap();
    let err = (&back * kron_vec(&ket(0, 2), &x) - kron_vec(&ket(0, 2), &(&swap * &x))).norm();
    println!("swap -> distinguisher -> swap on (|C> + |D>)/sqrt(2): error {err:.2e}");
}
