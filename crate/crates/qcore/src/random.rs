//! Seeded randomness.
//!
//! Every stochastic routine takes a [`Seed`]. Streams come from ChaCha20
//! (`rand_chacha`), and sub-experiments derive child seeds from
//! `(parent, tag, index)` with a SplitMix64 mix, so trial `i` of an experiment is
//! reproducible on its own and independent of scheduling.

use nalgebra::linalg::QR;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, GateCircuit};
use crate::{c, check_density_cap, check_pure_cap, cr, BipartiteState, CMat, CVec, DensityOp, Result};

/// 64-bit experiment seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Seed {
    /// Child seed for operation `tag`, trial `index`.
    pub fn child(self, tag: &str, index: u64) -> Seed {
        let a = splitmix64(self.0 ^ fnv1a(tag));
        Seed(splitmix64(a ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019))))
    }

    /// A fresh ChaCha20 stream.
    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> crate::C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Haar-random unit vector in `C^d` (normalized complex Gaussian).
pub fn random_state_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    loop {
        let v = CVec::from_fn(d, |_, _| gaussian_c(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v / cr(n);
        }
    }
}

/// Haar-random `d×d` unitary: QR of a Ginibre matrix with the phases of `R`'s diagonal absorbed.
pub fn random_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| gaussian_c(rng));
    let qr = QR::new(g);
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..d {
        let z = r[(j, j)];
        let ph = if z.norm() > 0.0 { z / cr(z.norm()) } else { cr(1.0) };
        let mut col = u.column_mut(j);
        col *= ph;
    }
    u
}

/// Random density matrix of the given rank: partial trace of a Haar state on `d·rank`.
pub fn random_density_with<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> CMat {
    let v = random_state_with(d * rank.max(1), rng);
    let x = CMat::from_fn(d, rank.max(1), |i, j| v[i * rank.max(1) + j]);
    &x * x.adjoint()
}

/// Random circuit of `len` gates drawn uniformly from the full gate set.
pub fn random_circuit_with<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> GateCircuit {
    let mut circ = GateCircuit::new(n);
    let pool: Vec<Gate> = Gate::ALL.iter().copied().filter(|g| n >= 2 || g.arity() == 1).collect();
    for _ in 0..len {
        let g = pool[rng.random_range(0..pool.len())];
        if g.arity() == 1 {
            circ.add(g, &[rng.random_range(0..n)]);
        } else {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            circ.add(g, &[a, b]);
        }
    }
    circ
}

/// Haar-random pure state on `d_a·d_b` with that split.
pub fn random_state(d_a: usize, d_b: usize, seed: Seed) -> Result<BipartiteState> {
    check_pure_cap(d_a * d_b)?;
    BipartiteState::new(random_state_with(d_a * d_b, &mut seed.rng()), d_a, d_b)
}

/// Haar-random unitary.
pub fn random_unitary(d: usize, seed: Seed) -> Result<CMat> {
    check_density_cap(d)?;
    Ok(random_unitary_with(d, &mut seed.rng()))
}

/// Random density operator of the given rank on a single register.
pub fn random_density(d: usize, rank: usize, seed: Seed) -> Result<DensityOp> {
    check_density_cap(d)?;
    Ok(DensityOp::from_parts_unchecked(random_density_with(d, rank, &mut seed.rng()), vec![d]))
}

/// Random gate circuit.
pub fn random_circuit(n: usize, len: usize, seed: Seed) -> GateCircuit {
    random_circuit_with(n, len, &mut seed.rng())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_unitary;

    #[test]
    fn child_seeds_differ_and_repeat() {
        let s = Seed(42);
        assert_eq!(s.child("a", 3), s.child("a", 3));
        assert_ne!(s.child("a", 3), s.child("a", 4));
        assert_ne!(s.child("a", 3), s.child("b", 3));
        assert_ne!(s.child("a", 0), s);
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        let u = random_unitary(6, Seed(1)).unwrap();
        assert!(is_unitary(&u, 1e-12));
        assert_eq!(u, random_unitary(6, Seed(1)).unwrap());
    }

    #[test]
    fn random_density_has_rank() {
        let rho = random_density(5, 2, Seed(3)).unwrap();
        let ev = rho.eigenvalues().unwrap();
        assert!(ev[..3].iter().all(|x| x.abs() < 1e-12));
        assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_circuits_validate() {
        for n in 1..4 {
            assert!(random_circuit(n, 30, Seed(n as u64)).validate().is_ok());
        }
    }
}
