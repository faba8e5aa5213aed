//! Density-matrix exponentiation: the error falls like 1/k in the number of
//! program copies, and the two-message protocol can use it in place of an
//! ideal reflection.
//!
//! cargo run -p uhlmann-lab --example qip_dme

use uhlmann_lab::protocols::dme::{calibration_instances, convergence_slope, dme_error};
use uhlmann_lab::protocols::{qip_run, MeasureMode, ProverStrategy, QipOracle};
use uhlmann_lab::qcore::Seed;
use uhlmann_lab::uhlmann::UhlmannInstance;

fn main() {
    let ks = [8, 16, 32, 64, 128];
    for (i, (target, program)) in calibration_instances().iter().enumerate() {
        let errs: Vec<String> = ks.iter().map(|&k| format!("{:.2e}", dme_error(target, program, 0.5, k).unwrap())).collect();
        let slope = convergence_slope(target, program, 0.5, &ks).unwrap();
        println!("instance {i}: errors {} -> log-log slope {slope:.3}", errs.join(" "));
    }

    let x = UhlmannInstance::with_fidelity(2, 0.97, Seed(3)).unwrap();
    let honest = ProverStrategy::honest(&x).unwrap();
    for (mode, k_q) in [(MeasureMode::IdealReflection, None), (MeasureMode::Dme, Some(16)), (MeasureMode::Dme, Some(128))] {
        let oracle = QipOracle { prep_error: 0.0, mode, k_q, measure_error: 1e-2 };
        let runs = 200;
        let accepted = (0..runs).filter(|&i| qip_run(&x, 3, &honest, &oracle, Seed(i)).unwrap().accepted).count();
        let how = match mode {
            MeasureMode::Dme => format!("DME with {} program copies", oracle.copies()),
            _ => "ideal reflection".to_string(),
        };
        println!("{how}: honest prover accepted {accepted}/{runs}");
    }
}
