use proptest::prelude::*;
use qcore::clifford::random_clifford_with;
use qcore::linalg::{kron, kron_all, max_abs, op_norm, outer, psd_sqrt, sgn_eta, singular_values};
use qcore::random::{random_circuit, random_density, random_state_with, random_unitary_with};
use qcore::registers::partial_trace_mat;
use qcore::{cr, fidelity, trace_distance, CMat, CVec, DensityOp, Gate, GateCircuit, Seed, C64};

fn random_pair(d: usize, seed: Seed) -> (DensityOp, DensityOp) {
    let r1 = 1 + (seed.0 as usize % d);
    let r2 = 1 + ((seed.0 >> 8) as usize % d);
    (
        random_density(d, r1, seed.child("rho", 0)).unwrap(),
        random_density(d, r2, seed.child("sigma", 0)).unwrap(),
    )
}

#[test]
fn fuchs_van_de_graaf_on_random_pairs() {
    for i in 0..1000u64 {
        let d = 2 + (i as usize % 5);
        let (rho, sigma) = random_pair(d, Seed(i).child("fvdg", i));
        let f = fidelity(&rho, &sigma).unwrap();
        let td = trace_distance(&rho, &sigma).unwrap();
        assert!(1.0 - f.sqrt() <= td + 1e-9, "lower: f={f} td={td}");
        assert!(td <= (1.0 - f).max(0.0).sqrt() + 1e-9, "upper: f={f} td={td}");
    }
}

#[test]
fn gentle_measurement() {
    let mut rng = Seed(77).rng();
    let mut checked = 0;
    for i in 0..500u64 {
        let d = 4;
        let rho = random_density(d, 1 + (i as usize % 4), Seed(i).child("gm", 0)).unwrap();
        // projector onto the top eigenvectors of a perturbed ρ, so Tr(Λρ) is often large
        let u = random_unitary_with(d, &mut rng);
        let rank = 1 + (i as usize % 3);
        let mut lam = CMat::zeros(d, d);
        let (_, vecs) = qcore::linalg::herm_eig(&(rho.matrix() + (&u * u.adjoint()) * cr(0.0))).unwrap();
        for k in (d - rank)..d {
            lam += outer(&vecs.column(k).into_owned(), &vecs.column(k).into_owned());
        }
        let tilt = random_unitary_with(d, &mut rng);
        let small = qcore::linalg::expi_hermitian(&((&tilt + tilt.adjoint()) * cr(0.5)), 0.05).unwrap();
        let lam = &small * lam * small.adjoint();
        let p = (&lam * rho.matrix()).trace().re;
        let eps = 1.0 - p;
        if p < 1e-6 {
            continue;
        }
        let post = &lam * rho.matrix() * &lam / cr(p);
        let dist: f64 = singular_values(&(rho.matrix() - post)).unwrap().iter().sum();
        assert!(dist <= 2.0 * eps.max(0.0).sqrt() + 1e-9, "dist {dist} eps {eps}");
        checked += 1;
    }
    assert!(checked > 400);
}

#[test]
fn clifford_group_is_a_two_design() {
    let n = 2;
    let d = 1 << n;
    let mut rng = Seed(31).rng();
    let v = random_state_with(d * d, &mut rng);
    let input = outer(&v, &v);
    let samples = 2000;
    let mut acc = CMat::zeros(d * d, d * d);
    for _ in 0..samples {
        let u = random_clifford_with(n, &mut rng).unwrap();
        let uu = kron(&u, &u);
        acc += &uu * &input * uu.adjoint();
    }
    acc /= cr(samples as f64);
    // analytic twirl: projections onto the symmetric and antisymmetric subspaces
    let swap = qcore::registers::permutation_matrix(&[d, d], &[1, 0]).unwrap();
    let id = CMat::identity(d * d, d * d);
    let psym = (&id + &swap) * cr(0.5);
    let panti = (&id - &swap) * cr(0.5);
    let dsym = (d * (d + 1) / 2) as f64;
    let danti = (d * (d - 1) / 2) as f64;
    let a = (v.adjoint() * &psym * &v)[(0, 0)].re / dsym;
    let b = (v.adjoint() * &panti * &v)[(0, 0)].re / danti;
    let twirl = psym * cr(a) + panti * cr(b);
    let err = op_norm(&(acc - twirl)).unwrap();
    assert!(err <= 0.05, "twirl error {err}");
}

fn dense_oracle(c: &GateCircuit) -> CMat {
    let n = c.n_qubits;
    let mut u = CMat::identity(1 << n, 1 << n);
    for op in &c.gates {
        let full = match op.qubits.as_slice() {
            [q] => {
                let fs: Vec<CMat> = (0..n).map(|k| if k == *q { op.gate.matrix() } else { CMat::identity(2, 2) }).collect();
                kron_all(&fs)
            }
            [a, b] => {
                // sum over computational projectors of the first qubit for controlled gates,
                // and explicit basis mapping otherwise
                let g = op.gate.matrix();
                let dim = 1 << n;
                CMat::from_fn(dim, dim, |row, col| {
                    let bit = |x: usize, q: usize| (x >> (n - 1 - q)) & 1;
                    for q in 0..n {
                        if q != *a && q != *b && bit(row, q) != bit(col, q) {
                            return cr(0.0);
                        }
                    }
                    g[(bit(row, *a) * 2 + bit(row, *b), bit(col, *a) * 2 + bit(col, *b))]
                })
            }
            _ => unreachable!(),
        };
        u = full * u;
    }
    u
}

#[test]
fn random_circuit_matches_dense_product() {
    for s in 0..20u64 {
        let c = random_circuit(4, 10, Seed(s));
        let oracle = dense_oracle(&c);
        assert!(max_abs(&(c.unitary().unwrap() - &oracle)) < 1e-12);
        let zero = qcore::linalg::ket(0, 16);
        let v = c.apply_vec(&zero).unwrap();
        assert!(((&oracle * zero) - v).norm() < 1e-12);
    }
}

#[test]
fn partial_trace_matches_index_sum() {
    let mut rng = Seed(4).rng();
    let v = random_state_with(6, &mut rng);
    let rho = outer(&v, &v);
    let (pt, dims) = partial_trace_mat(&rho, &[2, 3], &[1]).unwrap();
    assert_eq!(dims, vec![3]);
    for b in 0..3 {
        for bp in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                acc += v[a * 3 + b] * v[a * 3 + bp].conj();
            }
            assert!((acc - pt[(b, bp)]).norm() < 1e-12);
        }
    }
    // product-state factorization
    let ra = random_density(2, 2, Seed(8)).unwrap();
    let sb = random_density(3, 2, Seed(9)).unwrap();
    let joint = ra.tensor(&sb).unwrap();
    assert!(max_abs(&(joint.partial_trace(&[0]).unwrap().matrix() - ra.matrix())) < 1e-12);
}

#[test]
fn qubit_trace_distance_matches_closed_form_eigenvalues() {
    for s in 0..50u64 {
        let (rho, sigma) = random_pair(2, Seed(s));
        let m = rho.matrix() - sigma.matrix();
        let tr = m.trace().re;
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let oracle = 0.5 * (((tr + disc) / 2.0).abs() + ((tr - disc) / 2.0).abs());
        assert!((trace_distance(&rho, &sigma).unwrap() - oracle).abs() < 1e-12);
    }
}

/// Independent rank via modified Gram–Schmidt on the rows.
fn gs_row_basis(m: &CMat) -> Vec<CVec> {
    let mut basis: Vec<CVec> = Vec::new();
    for i in 0..m.nrows() {
        let mut r: CVec = m.row(i).transpose().map(|z| z.conj());
        for b in &basis {
            let p = b.dotc(&r);
            r -= b * p;
        }
        let nr = r.norm();
        if nr > 1e-8 {
            basis.push(r / cr(nr));
        }
    }
    basis
}

#[test]
fn sgn_zero_of_rank_two_matrix() {
    let mut rng = Seed(12).rng();
    for _ in 0..20 {
        let a = random_state_with(3, &mut rng);
        let b = random_state_with(3, &mut rng);
        let x = random_state_with(3, &mut rng);
        let y = random_state_with(3, &mut rng);
        let m = outer(&a, &b) * cr(0.7) + outer(&x, &y) * cr(0.3);
        let w = sgn_eta(&m, 0.0).unwrap();
        let basis = gs_row_basis(&m);
        assert_eq!(basis.len(), 2);
        let mut proj = CMat::zeros(3, 3);
        for v in &basis {
            proj += outer(v, v);
        }
        assert!(max_abs(&(w.adjoint() * &w - proj)) < 1e-10);
    }
}

#[test]
fn all_gates_exactly_unitary() {
    for g in Gate::ALL {
        let m = g.matrix();
        assert!(max_abs(&(m.adjoint() * &m - CMat::identity(m.nrows(), m.nrows()))) < 1e-15);
    }
}

proptest! {
    #[test]
    fn fidelity_symmetric_and_bounded(seed in any::<u64>(), d in 2usize..6) {
        let (rho, sigma) = random_pair(d, Seed(seed));
        let f1 = fidelity(&rho, &sigma).unwrap();
        let f2 = fidelity(&sigma, &rho).unwrap();
        prop_assert!((f1 - f2).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&f1));
        prop_assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pure_fidelity_is_expectation(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = Seed(seed).rng();
        let psi = random_state_with(d, &mut rng);
        let sigma = random_density(d, 2, Seed(seed).child("s", 0)).unwrap();
        let rho = DensityOp::from_pure(&psi, &[d]).unwrap();
        let expect = (psi.adjoint() * sigma.matrix() * &psi)[(0, 0)].re;
        prop_assert!((fidelity(&rho, &sigma).unwrap() - expect).abs() < 1e-8);
    }

    #[test]
    fn trace_distance_triangle(seed in any::<u64>()) {
        let (a, b) = random_pair(3, Seed(seed));
        let c = random_density(3, 2, Seed(seed).child("c", 0)).unwrap();
        let ab = trace_distance(&a, &b).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), n in 1usize..5, len in 0usize..25) {
        let c = random_circuit(n, len, Seed(seed));
        let mut rng = Seed(seed).child("v", 0).rng();
        let v = random_state_with(1 << n, &mut rng);
        prop_assert!((c.apply_vec(&v).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sgn_output_is_partial_isometry(seed in any::<u64>(), eta in 0.0f64..0.5) {
        let mut rng = Seed(seed).rng();
        let m = random_unitary_with(4, &mut rng) * psd_sqrt(random_density(4, 3, Seed(seed)).unwrap().matrix()).unwrap();
        let w = sgn_eta(&m, eta).unwrap();
        for s in singular_values(&w).unwrap() {
            prop_assert!(s.abs() < 1e-9 || (s - 1.0).abs() < 1e-9);
        }
    }
}
