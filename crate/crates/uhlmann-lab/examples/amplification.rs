//! Turning a transporter that succeeds with k-fold fidelity nu into one with
//! higher single-copy fidelity.
//!
//! cargo run -p uhlmann-lab --example amplification

use uhlmann_lab::protocols::amplify::engineered_transporter;
use uhlmann_lab::protocols::{amplify_run, AmplifierConfig};
use uhlmann_lab::qcore::Seed;
use uhlmann_lab::uhlmann::UhlmannInstance;

fn main() {
    let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(71)).unwrap();
    println!("{:>4} {:>2} {:>2} {:>10} {:>10} {:>8}", "nu", "k", "T", "empirical", "bound", "sigma");
    for nu in [0.4, 0.6, 0.8] {
        for k in [2, 4] {
            let r = engineered_transporter(&x, k, nu).unwrap();
            for t in [2, 5] {
                let cfg = AmplifierConfig::new(k, t, Seed(10 * k as u64 + t as u64)).unwrap();
                let rep = amplify_run(&x, &r, &cfg, 200).unwrap();
                println!("{nu:>4} {k:>2} {t:>2} {:>10.4} {:>10.4} {:>8.4}", rep.empirical_fidelity, rep.bound, rep.std_error);
            }
        }
    }
}
