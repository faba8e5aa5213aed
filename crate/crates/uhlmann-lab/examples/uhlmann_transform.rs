//! The canonical Uhlmann partial isometry, its unitary completion, and how
//! discontinuous it is: two states 0.045 apart in norm get transformations
//! that differ by 2 in operator norm.
//!
//! cargo run -p uhlmann-lab --example uhlmann_transform

use uhlmann_lab::qcore::linalg::op_norm;
use uhlmann_lab::qcore::Seed;
use uhlmann_lab::uhlmann::{canonical_uhlmann, transport, uhlmann_overlap, validate_instance, UhlmannInstance, UhlmannSolution};

fn show(name: &str, x: &UhlmannInstance) -> uhlmann_lab::qcore::CMat {
    let info = validate_instance(x).unwrap();
    let w = canonical_uhlmann(x, 0.0).unwrap();
    let (psi, phi) = x.states().unwrap();
    let ov = uhlmann_overlap(&psi, &phi, w.matrix()).unwrap();
    println!("{name}: dA = {}, dB = {}, F = {:.12}, overlap = {ov:.12}, rank W = {}", info.d_a, info.d_b, info.kappa, w.rank());
    w.matrix().clone()
}

fn main() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let read = |f: &str| UhlmannInstance::from_json(&std::fs::read_to_string(format!("{data}/{f}")).unwrap()).unwrap();

    let w = show("psi -> psi      ", &read("qutrit.json"));
    let wt = show("psi~ -> psi     ", &read("qutrit-tilde.json"));
    println!("W  =\n{}", w.map(|z| z.re));
    println!("W~ =\n{}", wt.map(|z| z.re));
    println!("||W - W~|| = {:.12}", op_norm(&(&w - &wt)).unwrap());

    // a random instance with prescribed fidelity, solved and transported
    let x = UhlmannInstance::with_fidelity(3, 0.8, Seed(7)).unwrap();
    show("random, F = 0.8 ", &x);
    let sol = UhlmannSolution::solve(&x, 0.0).unwrap();
    println!("completion is unitary: {}", uhlmann_lab::qcore::linalg::is_unitary(sol.unitary(), 1e-10));
    let out = transport(&x, 0.0).unwrap();
    let (_, phi) = x.states().unwrap();
    println!("|<phi|(id ⊗ U)|psi>|^2 = {:.12}", out.amplitudes().dotc(phi.amplitudes()).norm_sqr());
}
