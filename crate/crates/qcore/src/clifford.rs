//! Uniform sampling from the n-qubit Clifford group.
//!
//! The symplectic part is drawn with the Koenig–Smolin recursion (a product of
//! symplectic transvections driven by uniform random bits), the Pauli part by
//! uniform signs. The group element is then materialized as a dense unitary,
//! defined up to a global phase, from its action on the stabilizer generators.
//!
//! Pauli vectors are interleaved `(x₁, z₁, x₂, z₂, …)` with `(1,0) = X`,
//! `(0,1) = Z`, `(1,1) = Y` on each qubit.

use rand::Rng;

use crate::{c, check_density_cap, cr, CMat, CVec, Error, Result, Seed};

type Bits = Vec<u8>;

fn sym_inner(v: &[u8], w: &[u8]) -> u8 {
    let mut t = 0u8;
    for i in 0..v.len() / 2 {
        t ^= v[2 * i] & w[2 * i + 1];
        t ^= w[2 * i] & v[2 * i + 1];
    }
    t
}

fn add(a: &[u8], b: &[u8]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn transvection(k: &[u8], v: &[u8]) -> Bits {
    if sym_inner(k, v) == 1 {
        add(v, k)
    } else {
        v.to_vec()
    }
}

/// Two transvections `h₁, h₂` with `t_{h₂} t_{h₁} x = y` for nonzero `x, y`.
fn find_transvection(x: &[u8], y: &[u8]) -> (Bits, Bits) {
    let nn = x.len();
    let zero = vec![0u8; nn];
    if x == y {
        return (zero.clone(), zero);
    }
    if sym_inner(x, y) == 1 {
        return (add(x, y), zero);
    }
    let mut z = vec![0u8; nn];
    for i in 0..nn / 2 {
        let ii = 2 * i;
        if (x[ii] | x[ii + 1]) != 0 && (y[ii] | y[ii + 1]) != 0 {
            z[ii] = x[ii] ^ y[ii];
            z[ii + 1] = x[ii + 1] ^ y[ii + 1];
            if z[ii] == 0 && z[ii + 1] == 0 {
                z[ii + 1] = 1;
                if x[ii] != x[ii + 1] {
                    z[ii] = 1;
                }
            }
            return (add(x, &z), add(y, &z));
        }
    }
    for i in 0..nn / 2 {
        let ii = 2 * i;
        if (x[ii] | x[ii + 1]) != 0 && (y[ii] | y[ii + 1]) == 0 {
            if x[ii] == x[ii + 1] {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = x[ii];
                z[ii] = x[ii + 1];
            }
            break;
        }
    }
    for i in 0..nn / 2 {
        let ii = 2 * i;
        if (x[ii] | x[ii + 1]) == 0 && (y[ii] | y[ii + 1]) != 0 {
            if y[ii] == y[ii + 1] {
                z[ii + 1] = 1;
            } else {
                z[ii + 1] = y[ii];
                z[ii] = y[ii + 1];
            }
            break;
        }
    }
    (add(x, &z), add(y, &z))
}

/// Uniform random `2n × 2n` symplectic matrix over GF(2), as rows.
pub fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Bits> {
    let nn = 2 * n;
    let mut f1: Bits = loop {
        let v: Bits = (0..nn).map(|_| rng.random_range(0..2u8)).collect();
        if v.iter().any(|&b| b != 0) {
            break v;
        }
    };
    let mut e1 = vec![0u8; nn];
    e1[0] = 1;
    let (t0, t1) = find_transvection(&e1, &f1);
    let bits: Bits = (0..nn - 1).map(|_| rng.random_range(0..2u8)).collect();
    let mut eprime = e1.clone();
    eprime[2..nn].copy_from_slice(&bits[1..nn - 1]);
    let h0 = transvection(&t1, &transvection(&t0, &eprime));
    if bits[0] == 1 {
        f1 = vec![0u8; nn];
    }
    let mut g: Vec<Bits> = vec![vec![0u8; nn]; nn];
    g[0][0] = 1;
    g[1][1] = 1;
    if n > 1 {
        let sub = random_symplectic(n - 1, rng);
        for (i, row) in sub.iter().enumerate() {
            g[i + 2][2..].copy_from_slice(row);
        }
    }
    for row in g.iter_mut() {
        let mut r = transvection(&t0, row);
        r = transvection(&t1, &r);
        r = transvection(&h0, &r);
        r = transvection(&f1, &r);
        *row = r;
    }
    g
}

/// Whether rows `g` preserve the symplectic form.
pub fn is_symplectic(g: &[Bits]) -> bool {
    let nn = g.len();
    for i in 0..nn {
        for j in 0..nn {
            let expect = u8::from(i / 2 == j / 2 && i != j);
            if sym_inner(&g[i], &g[j]) != expect {
                return false;
            }
        }
    }
    true
}

/// A Clifford element by its action on generators: row `2j` is the image of `X_j`,
/// row `2j+1` the image of `Z_j`, each with a sign bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordTableau {
    pub n: usize,
    pub rows: Vec<Vec<u8>>,
    pub signs: Vec<u8>,
}

impl CliffordTableau {
    /// Uniformly random element (up to global phase).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let rows = random_symplectic(n, rng);
        let signs = (0..2 * n).map(|_| rng.random_range(0..2u8)).collect();
        Self { n, rows, signs }
    }

    /// Dense unitary, fixed up to a global phase.
    pub fn unitary(&self) -> Result<CMat> {
        let n = self.n;
        let d = 1usize << n;
        check_density_cap(d)?;
        // stabilizer projector product applied to a basis vector with non-zero overlap
        let thresh = 0.5 / d as f64;
        let mut zero_img: Option<CVec> = None;
        for k in 0..d {
            let mut v = CVec::zeros(d);
            v[k] = cr(1.0);
            for j in 0..n {
                let zv = apply_pauli(&v, &self.rows[2 * j + 1], self.signs[2 * j + 1]);
                v = (&v + zv) * cr(0.5);
            }
            if v.norm_squared() > thresh {
                let nv = v.norm();
                zero_img = Some(v / cr(nv));
                break;
            }
        }
        let base = zero_img.ok_or_else(|| Error::InvalidArgument("tableau has no stabilizer state".into()))?;
        let mut u = CMat::zeros(d, d);
        for x in 0..d {
            let mut v = base.clone();
            for j in 0..n {
                if (x >> (n - 1 - j)) & 1 == 1 {
                    v = apply_pauli(&v, &self.rows[2 * j], self.signs[2 * j]);
                }
            }
            u.set_column(x, &v);
        }
        Ok(u)
    }
}

/// Applies `(−1)^sign · P(bits)` to a vector on `len(bits)/2` qubits.
pub fn apply_pauli(v: &CVec, bits: &[u8], sign: u8) -> CVec {
    let n = bits.len() / 2;
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    let mut ny = 0u32;
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        let (x, z) = (bits[2 * q], bits[2 * q + 1]);
        if x == 1 {
            xmask |= bit;
        }
        if z == 1 {
            zmask |= bit;
        }
        if x == 1 && z == 1 {
            ny += 1;
        }
    }
    // Y = iXZ per qubit; X^x Z^z |b⟩ = (−1)^{z·b} |b ⊕ x⟩
    let iy = [cr(1.0), c(0.0, 1.0), cr(-1.0), c(0.0, -1.0)][(ny % 4) as usize];
    let global = if sign == 1 { -iy } else { iy };
    let mut out = CVec::zeros(v.len());
    for b in 0..v.len() {
        let par = (b & zmask).count_ones() & 1;
        let ph = if par == 1 { -global } else { global };
        out[b ^ xmask] += ph * v[b];
    }
    out
}

/// Uniformly random `n`-qubit Clifford unitary (up to global phase).
pub fn random_clifford(n: usize, seed: Seed) -> Result<CMat> {
    check_density_cap(1usize << n)?;
    CliffordTableau::random(n, &mut seed.rng()).unitary()
}

/// Same as [`random_clifford`] but drawing from an existing stream.
pub fn random_clifford_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMat> {
    check_density_cap(1usize << n)?;
    CliffordTableau::random(n, rng).unitary()
}
