//! Quantum Shannon tasks driven by Uhlmann transformations.
//!
//! - [`decoder_from_uhlmann`] decodes any channel whose complementary output is
//!   decoupled from the reference, and [`decoupling_fidelity`] measures how well
//!   that holds.
//! - [`entropies`] evaluates one-shot entropies in closed form.
//! - [`decoupling_experiment`] checks the Clifford decoupling inequality.
//! - [`compress`] builds a one-shot compression codec from two Uhlmann
//!   completions, and [`haar_overlap`] estimates how well any codec can preserve
//!   Haar-random states.

pub mod compress;
pub mod decode;
pub mod decouple;
pub mod entropy;

pub use compress::{compress, compress_to, error_bound, haar_overlap, roundtrip, target_size, CompressionCodec, HaarOverlap, Source};
pub use decode::{channel_from_json, commitment_channel, decoder_from_uhlmann, decoding_fidelity, decoupling_fidelity, DecoderReport};
pub use decouple::{decoupling_experiment, DecouplingReport};
pub use entropy::{entropies, h2_conditional, EntropyReport};
