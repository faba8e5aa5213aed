//! Uhlmann-transformation toolkit: the workspace crates re-exported in one
//! place, plus the seeded scenario runner used by the `uhlmann-lab` binary.

pub use crypto;
pub use physics;
pub use protocols;
pub use qcore;
pub use shannon;
pub use uhlmann;

pub mod cli;
