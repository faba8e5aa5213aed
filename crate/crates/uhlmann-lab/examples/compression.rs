//! One-shot compression of a source state, the decoupling inequality behind
//! it, and why Haar-random states do not compress.
//!
//! cargo run -p uhlmann-lab --example compression

use uhlmann_lab::qcore::random::random_density;
use uhlmann_lab::qcore::Seed;
use uhlmann_lab::shannon::{compress, compress_to, decoupling_experiment, error_bound, haar_overlap, roundtrip, CompressionCodec, Source};

fn main() {
    let src = Source::Density(random_density(8, 2, Seed(3)).unwrap());
    let p = src.purification().unwrap();
    let codec = compress(&src, 0.1, Seed(3)).unwrap();
    println!("rank-2 source on 3 qubits: chose s = {}, round trip td = {:.2e}", codec.s, roundtrip(&codec, &p).unwrap());
    for s in 0..=3 {
        let c = compress_to(&src, s, Seed(s as u64)).unwrap();
        println!("  s = {s}: td = {:.4}, guarantee {:.3}", roundtrip(&c, &p).unwrap(), error_bound(&src, s, 0.1).unwrap());
    }

    let rho = src.density().unwrap();
    for s in 0..3 {
        let d = decoupling_experiment(&rho, s, 100, Seed(9)).unwrap();
        println!("decoupling, {s} qubits kept: mean {:.4} ± {:.4} <= {:.4}", d.lhs_mean, d.std_error, d.rhs_bound);
    }

    for s in 0..3 {
        let t = CompressionCodec::truncation(3, s).unwrap();
        let h = haar_overlap(&t.e, &t.d, 1000, Seed(s as u64)).unwrap();
        println!("Haar states through {s} qubits: mean overlap {:.4} ± {:.4} <= R/M = {:.4}", h.mean, h.std_error, h.bound);
    }
}
