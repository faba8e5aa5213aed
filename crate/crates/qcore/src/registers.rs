//! Index bookkeeping for multi-register vectors and matrices.
//!
//! A register list `dims` describes a tensor product with the first register most
//! significant. Operations here act on a subset of registers without materializing
//! identities on the rest.

use crate::{cr, CMat, CVec, Error, Result, C64};

/// Row-major strides for `dims`.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Product of the dimensions.
pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn check_targets(dims: &[usize], targets: &[usize]) -> Result<()> {
    let mut seen = vec![false; dims.len()];
    for &t in targets {
        if t >= dims.len() {
            return Err(Error::InvalidRegister { index: t, count: dims.len() });
        }
        if seen[t] {
            return Err(Error::InvalidArgument(format!("register {t} listed twice")));
        }
        seen[t] = true;
    }
    Ok(())
}

/// Offsets of every multi-index over `regs` (first listed register most significant).
fn offsets(dims: &[usize], st: &[usize], regs: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for &r in regs {
        let mut next = Vec::with_capacity(offs.len() * dims[r]);
        for &o in &offs {
            for k in 0..dims[r] {
                next.push(o + k * st[r]);
            }
        }
        offs = next;
    }
    offs
}

fn complement(n: usize, regs: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !regs.contains(i)).collect()
}

/// Offset tables `(target, rest)` so that every full index is `rest[r] + target[t]`.
pub fn index_tables(dims: &[usize], targets: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    check_targets(dims, targets)?;
    let st = strides(dims);
    let rest = complement(dims.len(), targets);
    Ok((offsets(dims, &st, targets), offsets(dims, &st, &rest)))
}

/// Applies a square operator to the listed registers of a vector.
pub fn apply_op_vec(v: &CVec, dims: &[usize], targets: &[usize], op: &CMat) -> Result<CVec> {
    if v.len() != total_dim(dims) {
        return Err(Error::DimensionMismatch { expected: total_dim(dims), got: v.len() });
    }
    let (toff, roff) = index_tables(dims, targets)?;
    if op.nrows() != toff.len() || op.ncols() != toff.len() {
        return Err(Error::DimensionMismatch { expected: toff.len(), got: op.nrows() });
    }
    let dt = toff.len();
    let mut out = CVec::zeros(v.len());
    let mut buf = vec![C64::new(0.0, 0.0); dt];
    for &r in &roff {
        for (t, b) in buf.iter_mut().enumerate() {
            *b = v[r + toff[t]];
        }
        for i in 0..dt {
            let mut acc = C64::new(0.0, 0.0);
            for (j, b) in buf.iter().enumerate() {
                acc += op[(i, j)] * b;
            }
            out[r + toff[i]] = acc;
        }
    }
    Ok(out)
}

/// Applies a square operator on the listed registers to every column of `m`.
pub fn apply_op_cols(m: &CMat, dims: &[usize], targets: &[usize], op: &CMat) -> Result<CMat> {
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        let col = apply_op_vec(&m.column(j).into_owned(), dims, targets, op)?;
        out.set_column(j, &col);
    }
    Ok(out)
}

/// `ρ ↦ (op on targets) ρ (op on targets)†`.
pub fn conjugate_mat(rho: &CMat, dims: &[usize], targets: &[usize], op: &CMat) -> Result<CMat> {
    let left = apply_op_cols(rho, dims, targets, op)?;
    let both = apply_op_cols(&left.adjoint(), dims, targets, op)?;
    Ok(both.adjoint())
}

/// Reorders registers: register `j` of the output is register `perm[j]` of the input.
pub fn permute_vec(v: &CVec, dims: &[usize], perm: &[usize]) -> Result<CVec> {
    let (map, _) = permutation_map(dims, perm)?;
    let mut out = CVec::zeros(v.len());
    for (new, &old) in map.iter().enumerate() {
        out[new] = v[old];
    }
    Ok(out)
}

/// Matrix version of [`permute_vec`] acting on both indices.
pub fn permute_mat(m: &CMat, dims: &[usize], perm: &[usize]) -> Result<CMat> {
    let (map, _) = permutation_map(dims, perm)?;
    let d = map.len();
    Ok(CMat::from_fn(d, d, |i, j| m[(map[i], map[j])]))
}

/// Old index for every new index, plus the new dimension list.
pub fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if perm.len() != dims.len() {
        return Err(Error::DimensionMismatch { expected: dims.len(), got: perm.len() });
    }
    check_targets(dims, perm)?;
    let st = strides(dims);
    let map = offsets(dims, &st, perm);
    Ok((map, perm.iter().map(|&p| dims[p]).collect()))
}

/// Permutation matrix `P` with `P v = permute_vec(v)`.
pub fn permutation_matrix(dims: &[usize], perm: &[usize]) -> Result<CMat> {
    let (map, _) = permutation_map(dims, perm)?;
    let d = map.len();
    let mut p = CMat::zeros(d, d);
    for (new, &old) in map.iter().enumerate() {
        p[(new, old)] = cr(1.0);
    }
    Ok(p)
}

/// Partial trace of a matrix keeping `keep` (output in ascending register order).
pub fn partial_trace_mat(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<(CMat, Vec<usize>)> {
    let d = total_dim(dims);
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, got: m.nrows() });
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let (koff, toff) = index_tables(dims, &keep)?;
    let dk = koff.len();
    let mut out = CMat::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &toff {
                acc += m[(koff[i] + t, koff[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok((out, keep.iter().map(|&k| dims[k]).collect()))
}

/// Reshapes a vector into a `(kept) × (traced)` matrix, kept registers in ascending order.
pub fn split_matrix(v: &CVec, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    if v.len() != total_dim(dims) {
        return Err(Error::DimensionMismatch { expected: total_dim(dims), got: v.len() });
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    let (koff, toff) = index_tables(dims, &keep)?;
    Ok(CMat::from_fn(koff.len(), toff.len(), |i, j| v[koff[i] + toff[j]]))
}

/// Reduced density matrix of a (possibly unnormalized) pure vector on `keep`.
pub fn reduce_pure(v: &CVec, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let x = split_matrix(v, dims, keep)?;
    Ok(&x * x.adjoint())
}

/// Replaces register `reg` by registers `out_dims` through a linear map
/// `op: Π out_dims × dims[reg]`. The new registers sit where `reg` was.
pub fn apply_map_vec(v: &CVec, dims: &[usize], reg: usize, op: &CMat, out_dims: &[usize]) -> Result<(CVec, Vec<usize>)> {
    if reg >= dims.len() {
        return Err(Error::InvalidRegister { index: reg, count: dims.len() });
    }
    if op.ncols() != dims[reg] || op.nrows() != total_dim(out_dims) {
        return Err(Error::DimensionMismatch { expected: dims[reg], got: op.ncols() });
    }
    let n = dims.len();
    let mut perm: Vec<usize> = (0..n).filter(|&i| i != reg).collect();
    perm.push(reg);
    let moved = permute_vec(v, dims, &perm)?;
    let d_rest = total_dim(dims) / dims[reg];
    let d_in = dims[reg];
    let d_out = op.nrows();
    let mut out = CVec::zeros(d_rest * d_out);
    for r in 0..d_rest {
        let x = moved.rows(r * d_in, d_in);
        let y = op * x;
        out.rows_mut(r * d_out, d_out).copy_from(&y);
    }
    let mut mid_dims: Vec<usize> = perm[..n - 1].iter().map(|&i| dims[i]).collect();
    mid_dims.extend_from_slice(out_dims);
    let m = out_dims.len();
    let back: Vec<usize> = (0..reg).chain((n - 1)..(n - 1 + m)).chain(reg..(n - 1)).collect();
    let final_v = permute_vec(&out, &mid_dims, &back)?;
    let final_dims = back.iter().map(|&i| mid_dims[i]).collect();
    Ok((final_v, final_dims))
}

/// Matrix version of [`apply_map_vec`]: `ρ ↦ K ρ K†` on register `reg`.
pub fn apply_map_mat(rho: &CMat, dims: &[usize], reg: usize, op: &CMat, out_dims: &[usize]) -> Result<(CMat, Vec<usize>)> {
    if reg >= dims.len() {
        return Err(Error::InvalidRegister { index: reg, count: dims.len() });
    }
    if op.ncols() != dims[reg] || op.nrows() != total_dim(out_dims) {
        return Err(Error::DimensionMismatch { expected: dims[reg], got: op.ncols() });
    }
    let n = dims.len();
    let mut perm: Vec<usize> = (0..n).filter(|&i| i != reg).collect();
    perm.push(reg);
    let moved = permute_mat(rho, dims, &perm)?;
    let d_rest = total_dim(dims) / dims[reg];
    let d_in = dims[reg];
    let d_out = op.nrows();
    let opa = op.adjoint();
    let mut out = CMat::zeros(d_rest * d_out, d_rest * d_out);
    for r in 0..d_rest {
        for s in 0..d_rest {
            let block = moved.view((r * d_in, s * d_in), (d_in, d_in));
            let nb = op * block * &opa;
            out.view_mut((r * d_out, s * d_out), (d_out, d_out)).copy_from(&nb);
        }
    }
    let mut mid_dims: Vec<usize> = perm[..n - 1].iter().map(|&i| dims[i]).collect();
    mid_dims.extend_from_slice(out_dims);
    let m = out_dims.len();
    let back: Vec<usize> = (0..reg).chain((n - 1)..(n - 1 + m)).chain(reg..(n - 1)).collect();
    let final_m = permute_mat(&out, &mid_dims, &back)?;
    let final_dims = back.iter().map(|&i| mid_dims[i]).collect();
    Ok((final_m, final_dims))
}

/// Splits a register list into single registers of the given sizes, for use with
/// the functions above: e.g. `[8]` viewed as `[2, 2, 2]`.
pub fn qubit_dims(n: usize) -> Vec<usize> {
    vec![2; n]
}
