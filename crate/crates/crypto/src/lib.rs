//! Canonical quantum bit commitments.
//!
//! A scheme is a pair of states on `C ⊗ R`. Its statistical hiding is the trace
//! distance of the two commit-register marginals and its optimal binding is
//! their fidelity, attained by the Uhlmann transformation on `R`.

pub mod clone;
pub mod scheme;
pub mod security;
pub mod transform;

pub use clone::{clone_attack_states, clone_fidelity, Adversary, CloneAttack};
pub use scheme::{CommitmentScheme, SchemeStates};
pub use security::{attack_fidelity, evaluate, scheme_instance, uhlmann_attack, SecurityReport};
pub use transform::{commitment_from_instance, flavor_switch, tensor_amplify};
