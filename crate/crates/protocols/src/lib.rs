//! Interactive protocols built on the Uhlmann transformation.

pub mod amplify;
pub mod dme;
pub mod measure;
pub mod prover;
pub mod qip;
pub mod szk;

pub use amplify::{amplification_bound, amplify_run, AmplifierConfig, AmplifyReport};
pub use dme::{dme, partial_swap};
pub use measure::{approx_measure, ApproxMeasurement, MeasureMode};
pub use prover::{ProverLabel, ProverStrategy};
pub use qip::{qip_run, QipOracle};
pub use szk::{szk_exact, szk_run, szk_simulate, szk_stats, ProtocolResult, RoundRecord, SzkExact, SzkStats};
