//! Canonical Uhlmann transformations.
//!
//! For two pure states `|ψ⟩, |φ⟩` on `A ⊗ B`, the canonical partial isometry
//! `W = sgn_η(Tr_A |φ⟩⟨ψ|)` acts on `B` alone and, at `η = 0`, attains
//! `|⟨φ|(id ⊗ W)|ψ⟩|² = F(ρ_A, σ_A)`. [`unitary_completion`] extends `W` to a
//! unitary by the polar rule `Ũ = U V†`.
//!
//! ```
//! use qcore::{BipartiteState, CVec, cr};
//! use uhlmann::{UhlmannInstance, UhlmannSolution};
//!
//! let s = 0.5f64.sqrt();
//! let epr = BipartiteState::new(CVec::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)]), 2, 2)?;
//! let flipped = BipartiteState::new(CVec::from_vec(vec![cr(0.0), cr(s), cr(s), cr(0.0)]), 2, 2)?;
//! let x = UhlmannInstance::raw(epr, flipped)?;
//! let sol = UhlmannSolution::solve(&x, 0.0)?;
//! assert!((sol.kappa - 1.0).abs() < 1e-12);
//! # Ok::<(), qcore::Error>(())
//! ```

pub mod instance;
pub mod isometry;
pub mod padding;

pub use instance::{validate_instance, InstanceInfo, UhlmannInstance};
pub use isometry::{
    apply_completion, apply_uhlmann, canonical_uhlmann, canonical_uhlmann_states, transition_operator, transport,
    uhlmann_overlap, unitary_completion, CompletionChannel, PartialIsometryOp, UhlmannSolution,
};
pub use padding::{max_alpha, pad_instance, padded_fidelity};
