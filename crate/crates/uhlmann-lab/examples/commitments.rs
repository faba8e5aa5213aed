//! Quantum bit commitments: the hiding/binding tradeoff, the Uhlmann cheating
//! attack, flavor switching and parallel repetition.
//!
//! cargo run -p uhlmann-lab --example commitments

use uhlmann_lab::crypto::{evaluate, flavor_switch, tensor_amplify, uhlmann_attack, CommitmentScheme};
use uhlmann_lab::qcore::Seed;

fn main() {
    let mut worst_slack = f64::INFINITY;
    for s in 0..100 {
        let sc = CommitmentScheme::random(4, 2, 30, Seed(s)).unwrap();
        let r = evaluate(&sc, None).unwrap();
        worst_slack = worst_slack.min(r.hiding_stat - (1.0 - r.binding_opt.sqrt()));
    }
    println!("min over 100 schemes of hiding - (1 - sqrt(binding)) = {worst_slack:.4}");

    let sc = CommitmentScheme::random(3, 1, 25, Seed(5)).unwrap();
    let r = evaluate(&sc, Some(&uhlmann_attack(&sc).unwrap())).unwrap();
    println!("scheme:   hiding {:.4}  binding {:.4}  attack achieves {:.4}", r.hiding_stat, r.binding_opt, r.binding_attack.unwrap());
    let sw = evaluate(&flavor_switch(&sc).unwrap(), None).unwrap();
    println!("switched: hiding {:.4} (sqrt binding {:.4})  binding {:.4}", sw.hiding_stat, r.binding_opt.sqrt(), sw.binding_opt);
    for k in 1..=4 {
        let a = evaluate(&tensor_amplify(&sc, k).unwrap(), None).unwrap();
        println!("{k} copies: binding {:.6} = {:.6}^{k}", a.binding_opt, r.binding_opt);
    }
}
