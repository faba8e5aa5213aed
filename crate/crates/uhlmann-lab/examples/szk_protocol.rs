//! The zero-knowledge protocol for Uhlmann instances: an honest prover, a
//! prover that does nothing, and the simulator.
//!
//! cargo run -p uhlmann-lab --example szk_protocol

use uhlmann_lab::protocols::szk::{simulator_distance, soundness_envelope};
use uhlmann_lab::protocols::{szk_exact, szk_stats, ProverStrategy};
use uhlmann_lab::qcore::Seed;
use uhlmann_lab::uhlmann::UhlmannInstance;

fn main() {
    let m = 5;
    for mu in [0.01, 0.05, 0.1] {
        let x = UhlmannInstance::with_fidelity(2, 1.0 - mu, Seed(40)).unwrap();
        let honest = ProverStrategy::honest(&x).unwrap();
        let s = szk_stats(&x, m, &honest, 500, Seed(1)).unwrap();
        println!(
            "mu = {mu:<4}  honest: accept {:.3} ± {:.3} (floor {:.3})   simulator distance {:.4} (bound {:.4})",
            s.accept_rate,
            s.std_error,
            (1.0 - mu).powi(m as i32),
            simulator_distance(&x, m).unwrap(),
            ((m + 1) as f64 * mu).sqrt()
        );
        let lazy = szk_exact(&x, m, &ProverStrategy::identity(2)).unwrap();
        let td = lazy.output_distance.map_or("-".into(), |d| format!("{d:.4}"));
        println!(
            "           identity: accept {:.3e}, output distance {td} (envelope {:.3})",
            lazy.accept_probability,
            soundness_envelope(m, mu)
        );
    }
}
