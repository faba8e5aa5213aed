//! Matrix functions, distances and the SVD threshold.

use nalgebra::{DVector, SymmetricEigen};

use crate::{cr, CMat, CVec, DensityOp, Error, Result, C64};

/// Singular values at most this far above the cutoff count as below it.
pub const SGN_BAND: f64 = 1e-12;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a list, left to right. The empty list gives the 1×1 identity.
pub fn kron_all(ms: &[CMat]) -> CMat {
    ms.iter().fold(CMat::identity(1, 1), |acc, m| acc.kronecker(m))
}

/// Tensor product of two vectors.
pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    a.kronecker(b)
}

/// Tensor power of a vector. `k = 0` gives the scalar 1.
pub fn kron_vec_pow(a: &CVec, k: usize) -> CVec {
    (0..k).fold(CVec::from_element(1, cr(1.0)), |acc, _| acc.kronecker(a))
}

/// `|a⟩⟨b|`.
pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

/// Computational basis vector `|i⟩` in dimension `d`.
pub fn ket(i: usize, d: usize) -> CVec {
    let mut v = CVec::zeros(d);
    v[i] = cr(1.0);
    v
}

/// `⟨a|b⟩`.
pub fn inner(a: &CVec, b: &CVec) -> C64 {
    a.dotc(b)
}

/// Hermitian part `(m + m†)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * cr(0.5)
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are returned unsorted,
/// eigenvectors as matching columns.
pub fn herm_eig(m: &CMat) -> Result<(DVector<f64>, CMat)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), got: m.ncols() });
    }
    let h = hermitian_part(m);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0).ok_or(Error::NoConvergence("eigendecomposition"))?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn herm_eigenvalues(m: &CMat) -> Result<Vec<f64>> {
    let (vals, _) = herm_eig(m)?;
    let mut v: Vec<f64> = vals.iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    Ok(v)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn herm_fn(m: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, vecs) = herm_eig(m)?;
    let d = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..d {
        let fj = cr(f(vals[j]));
        for i in 0..d {
            scaled[(i, j)] *= fj;
        }
    }
    Ok(scaled * vecs.adjoint())
}

/// Square root of a PSD matrix; negative eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &CMat) -> Result<CMat> {
    herm_fn(m, |x| x.max(0.0).sqrt())
}

/// Eigenvalues at or below this are numerical zeros when taking square roots for
/// fidelities (eigensolver noise of order 1e-16 would otherwise contribute 1e-8).
pub const SPECTRAL_FLOOR: f64 = 1e-14;

fn floored_sqrt(m: &CMat) -> Result<CMat> {
    herm_fn(m, |x| if x > SPECTRAL_FLOOR { x.sqrt() } else { 0.0 })
}

/// `exp(i θ H)` for Hermitian `H`.
pub fn expi_hermitian(h: &CMat, theta: f64) -> Result<CMat> {
    let (vals, vecs) = herm_eig(h)?;
    let d = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..d {
        let ph = C64::from_polar(1.0, theta * vals[j]);
        for i in 0..d {
            scaled[(i, j)] *= ph;
        }
    }
    Ok(scaled * vecs.adjoint())
}

/// Thin SVD `m = u · diag(s) · v_t`, singular values descending.
///
/// One-sided (Hestenes) Jacobi on the columns; small singular values come out
/// with high relative accuracy, which the `sgn_η` band relies on.
pub fn svd(m: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    if m.nrows() < m.ncols() {
        let (u, s, v_t) = svd(&m.adjoint())?;
        return Ok((v_t.adjoint(), s, u.adjoint()));
    }
    let (a, v) = jacobi_columns(m)?;
    let n = m.ncols();
    let floor = (f64::EPSILON * n as f64).powi(2) * m.norm_squared();
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    let mut u_cols: Vec<CVec> = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut v_sorted = CMat::zeros(n, n);
    let mut null_slots = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        let nj = norms[j];
        s.push(nj);
        v_sorted.set_column(k, &v.column(j));
        if nj * nj > floor {
            u_cols.push(a.column(j) / cr(nj));
        } else {
            null_slots.push(k);
            u_cols.push(CVec::zeros(m.nrows()));
        }
    }
    if !null_slots.is_empty() {
        let keep: Vec<CVec> = u_cols.iter().enumerate().filter(|(k, _)| !null_slots.contains(k)).map(|(_, c)| c.clone()).collect();
        let mut kept = CMat::zeros(m.nrows(), keep.len());
        for (j, c) in keep.iter().enumerate() {
            kept.set_column(j, c);
        }
        let full = complete_orthonormal(&kept);
        for (t, &k) in null_slots.iter().enumerate() {
            u_cols[k] = full.column(keep.len() + t).into_owned();
        }
    }
    let mut u = CMat::zeros(m.nrows(), n);
    for (k, c) in u_cols.iter().enumerate() {
        u.set_column(k, c);
    }
    Ok((u, s, v_sorted.adjoint()))
}

/// Orthogonalizes the columns of `m` by plane rotations: returns `(m·V, V)`.
fn jacobi_columns(m: &CMat) -> Result<(CMat, CMat)> {
    let n = m.ncols();
    let mut a = m.clone();
    let mut v = CMat::identity(n, n);
    if n < 2 {
        return Ok((a, v));
    }
    // columns below this squared norm are numerically zero and never rotated
    let floor = (f64::EPSILON * n as f64).powi(2) * m.norm_squared();
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha = a.column(i).norm_squared();
                let beta = a.column(j).norm_squared();
                let gamma = a.column(i).dotc(&a.column(j));
                let g = gamma.norm();
                if g == 0.0 || alpha <= floor || beta <= floor || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ph = gamma / cr(g);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, i, j, cs, sn, ph);
                rotate(&mut v, i, j, cs, sn, ph);
            }
        }
        if !rotated {
            return Ok((a, v));
        }
    }
    Err(Error::NoConvergence("Jacobi SVD"))
}

/// `(x, y) ↦ (c·x − s·ph̄·y, ph·(s·x + c·ph̄·y))` on columns `i, j`.
fn rotate(m: &mut CMat, i: usize, j: usize, c: f64, s: f64, ph: C64) {
    let phc = ph.conj();
    for r in 0..m.nrows() {
        let x = m[(r, i)];
        let y = m[(r, j)] * phc;
        m[(r, i)] = x * c - y * s;
        m[(r, j)] = (x * s + y * c) * ph;
    }
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    Ok(svd(m)?.1)
}

/// Schatten-1 norm.
pub fn trace_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.into_iter().fold(0.0, f64::max))
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `sgn_η(M) = U · sgn_η(Σ) · V†`: keeps singular directions with `σ > η + SGN_BAND`.
pub fn sgn_eta(m: &CMat, eta: f64) -> Result<CMat> {
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidArgument(format!("cutoff must be finite and non-negative, got {eta}")));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let (u, s, v_t) = svd(m)?;
    let mut out = CMat::zeros(m.nrows(), m.ncols());
    for (k, &sk) in s.iter().enumerate() {
        if sk > eta + SGN_BAND {
            out += u.column(k) * v_t.row(k);
        }
    }
    Ok(out)
}

/// `‖U†U − I‖∞ ≤ tol` (entrywise max).
pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs(&(m.adjoint() * m - CMat::identity(m.nrows(), m.ncols()))) <= tol
}

/// `‖V†V − I‖∞ ≤ tol` for a tall matrix.
pub fn is_isometry(m: &CMat, tol: f64) -> bool {
    m.nrows() >= m.ncols() && max_abs(&(m.adjoint() * m - CMat::identity(m.ncols(), m.ncols()))) <= tol
}

/// Squared fidelity of two PSD matrices, `(Σ sᵢ(√ρ √σ))²`, clamped to `[0,1]`.
pub fn fidelity_mat(rho: &CMat, sigma: &CMat) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::DimensionMismatch { expected: rho.nrows(), got: sigma.nrows() });
    }
    let prod = floored_sqrt(rho)? * floored_sqrt(sigma)?;
    let s: f64 = singular_values(&prod)?.iter().sum();
    Ok((s * s).clamp(0.0, 1.0))
}

/// Squared fidelity `F(ρ,σ) = ‖√ρ√σ‖₁²`.
pub fn fidelity(rho: &DensityOp, sigma: &DensityOp) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    fidelity_mat(rho.matrix(), sigma.matrix())
}

/// `⟨ψ|σ|ψ⟩`, the fidelity of a pure state with a mixed one.
pub fn fidelity_pure(psi: &CVec, sigma: &CMat) -> Result<f64> {
    if psi.len() != sigma.nrows() {
        return Err(Error::DimensionMismatch { expected: sigma.nrows(), got: psi.len() });
    }
    Ok((psi.adjoint() * sigma * psi)[(0, 0)].re.clamp(0.0, 1.0))
}

/// Half the trace norm of `ρ − σ` for Hermitian inputs.
pub fn trace_distance_mat(rho: &CMat, sigma: &CMat) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::DimensionMismatch { expected: rho.nrows(), got: sigma.nrows() });
    }
    let (vals, _) = herm_eig(&(rho - sigma))?;
    Ok((0.5 * vals.iter().map(|x| x.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

/// `td(ρ,σ) = ½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityOp, sigma: &DensityOp) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: sigma.dim() });
    }
    trace_distance_mat(rho.matrix(), sigma.matrix())
}

/// Trace distance of two normalized pure states, `√(1 − |⟨a|b⟩|²)`.
pub fn trace_distance_pure(a: &CVec, b: &CVec) -> f64 {
    (1.0 - inner(a, b).norm_sqr()).max(0.0).sqrt()
}

/// Orthonormal completion: returns a `d×d` unitary whose first columns are `cols`
/// (assumed orthonormal), filled out by Gram–Schmidt over the standard basis.
pub fn complete_orthonormal(cols: &CMat) -> CMat {
    let d = cols.nrows();
    let mut basis: Vec<CVec> = (0..cols.ncols()).map(|j| cols.column(j).into_owned()).collect();
    for e in 0..d {
        if basis.len() == d {
            break;
        }
        let mut v = ket(e, d);
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let nv = v.norm();
        if nv > 1e-6 {
            basis.push(v / cr(nv));
        }
    }
    let mut out = CMat::zeros(d, d);
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Projector onto the column span of `m`, via SVD rank with the given cutoff.
pub fn range_projector(m: &CMat, cutoff: f64) -> Result<CMat> {
    let (u, s, _) = svd(m)?;
    let mut p = CMat::zeros(m.nrows(), m.nrows());
    for (k, &sk) in s.iter().enumerate() {
        if sk > cutoff {
            let col = u.column(k);
            p += col * col.adjoint();
        }
    }
    Ok(p)
}
