//! Black-hole radiation decoding and interference detection.

pub mod blackhole;
pub mod interference;

pub use blackhole::{bh_decode, bh_decode_promised, BlackHoleInstance, BlackHoleReport};
pub use interference::{
    controlled_swap_from_uhlmann, controlled_swap_residual, distinguisher_to_swap, householder_swap,
    interference_detect, swap_from_uhlmann, swap_to_distinguisher, OrthPair,
};
