use std::f64::consts::PI;

use proptest::prelude::*;
use protocols::amplify::{engineered_transporter, jordan_residual, transporter_fidelity};
use protocols::dme::{calibration_instances, convergence_slope, dme_constant, dme_error, dme_exact};
use protocols::measure::{dme_measure_bound, measure_branches, overlap_probability, projection_error};
use protocols::szk::{honest_state, post_prover_state, simulator_distance, soundness_envelope};
use protocols::*;
use qcore::linalg::{expi_hermitian, inner, kron, kron_vec, max_abs, outer};
use qcore::random::{random_state, random_unitary};
use qcore::registers::{partial_trace_mat, permutation_matrix};
use qcore::{c, cr, BipartiteState, CMat, CVec, DensityOp, Seed};
use uhlmann::{UhlmannInstance, UhlmannSolution};

/// Fidelity-1 instance with `|⟨D|C⟩|²` close to one: `|D⟩ = (I ⊗ e^{iεH})|C⟩`.
fn nearby_instance(eps: f64, seed: u64) -> UhlmannInstance {
    let c0 = random_state(2, 2, Seed(seed)).unwrap();
    let h = {
        let g = random_unitary(2, Seed(seed + 1)).unwrap();
        (&g + g.adjoint()) * cr(0.5)
    };
    let v = expi_hermitian(&h, eps).unwrap();
    let d = qcore::registers::apply_op_vec(c0.amplitudes(), &[2, 2], &[1], &v).unwrap();
    UhlmannInstance::raw(c0, BipartiteState::normalized(d, 2, 2).unwrap()).unwrap()
}

fn overlap_cd(x: &UhlmannInstance) -> f64 {
    let (c, d) = x.states().unwrap();
    inner(d.amplitudes(), c.amplitudes()).norm_sqr()
}

fn within(rate: f64, p: f64, runs: usize, sigmas: f64) -> bool {
    let sd = (p * (1.0 - p) / runs as f64).sqrt();
    (rate - p).abs() <= sigmas * sd + 1e-12
}

#[test]
fn fidelity_one_honest_prover_outputs_d() {
    let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(11)).unwrap();
    let honest = ProverStrategy::honest(&x).unwrap();
    let (_, d) = x.states().unwrap();
    for s in 0..20 {
        let r = szk_run(&x, 4, &honest, Seed(s)).unwrap();
        assert!(r.accepted);
        assert!((r.transcript[0].accept_probability - 1.0).abs() < 1e-9);
        let out = r.output_state.unwrap();
        let f = (d.amplitudes().adjoint() * out.matrix() * d.amplitudes())[(0, 0)].re;
        assert!((f - 1.0).abs() < 1e-9);
    }
}

#[test]
fn identity_prover_acceptance_matches_overlap() {
    let x = nearby_instance(0.4, 5);
    let m = 4;
    let expected = overlap_cd(&x).powi(m as i32);
    let stats = szk_stats(&x, m, &ProverStrategy::identity(2), 500, Seed(1)).unwrap();
    assert!((stats.exact.accept_probability - expected).abs() < 1e-12);
    assert!(within(stats.accept_rate, expected, 500, 3.0), "{} vs {expected}", stats.accept_rate);
}

#[test]
fn honest_prover_completeness() {
    for (i, mu) in [0.01, 0.05, 0.1].into_iter().enumerate() {
        let x = UhlmannInstance::with_fidelity(2, 1.0 - mu, Seed(40 + i as u64)).unwrap();
        let m = 5;
        let stats = szk_stats(&x, m, &ProverStrategy::honest(&x).unwrap(), 500, Seed(i as u64)).unwrap();
        let floor = (1.0 - mu).powi(m as i32);
        assert!(stats.exact.accept_probability >= floor - 1e-9);
        assert!(floor >= 1.0 - m as f64 * mu);
        assert!(stats.accept_rate >= floor - 3.0 * stats.std_error - 1e-12, "{} < {floor}", stats.accept_rate);
    }
}

#[test]
fn joint_path_agrees_with_product_path() {
    let x = nearby_instance(0.7, 8);
    let us: Vec<CMat> = (0..3).map(|s| random_unitary(2, Seed(100 + s)).unwrap()).collect();
    let product = ProverStrategy::per_position("product", us.clone()).unwrap();
    let joint = ProverStrategy::joint("joint", kron(&kron(&us[0], &us[1]), &us[2])).unwrap();
    let a = szk_exact(&x, 2, &product).unwrap();
    let b = szk_exact(&x, 2, &joint).unwrap();
    assert!((a.accept_probability - b.accept_probability).abs() < 1e-12);
    let diff = a.conditional_output.unwrap().matrix() - b.conditional_output.unwrap().matrix();
    assert!(max_abs(&diff) < 1e-12);
    for s in 0..10 {
        let ra = szk_run(&x, 2, &product, Seed(s)).unwrap();
        let rb = szk_run(&x, 2, &joint, Seed(s)).unwrap();
        assert_eq!(ra.accepted, rb.accepted);
        assert!((ra.transcript[0].accept_probability - rb.transcript[0].accept_probability).abs() < 1e-12);
    }
}

#[test]
fn simulator_distance_bounds() {
    let mu = 0.01;
    let m = 3;
    let x = UhlmannInstance::with_fidelity(2, 1.0 - mu, Seed(3)).unwrap();
    let sim = szk_simulate(&x, m).unwrap();
    let real = honest_state(&x, m).unwrap();
    let td = qcore::trace_distance(&sim, &real).unwrap();
    assert!(td <= 0.2);
    assert!(td <= ((m + 1) as f64 * mu).sqrt() + 1e-9);
    assert!((td - simulator_distance(&x, m).unwrap()).abs() < 1e-9);

    let exact = UhlmannInstance::with_fidelity(2, 1.0, Seed(4)).unwrap();
    let gap = qcore::trace_distance(&szk_simulate(&exact, 2).unwrap(), &honest_state(&exact, 2).unwrap()).unwrap();
    assert!(gap < 1e-9);
    let (_, d) = x.states().unwrap();
    let single = szk_simulate(&x, 0).unwrap();
    assert!(max_abs(&(single.matrix() - outer(d.amplitudes(), d.amplitudes()))) < 1e-12);
}

#[test]
fn soundness_envelope_for_cheating_provers() {
    for m in [4usize, 8, 16] {
        for (k, eps) in [0.15, 0.3].into_iter().enumerate() {
            let x = nearby_instance(eps, 20 + k as u64);
            let mu = 1.0 - uhlmann::validate_instance(&x).unwrap().kappa;
            let mut provers = vec![ProverStrategy::identity(2)];
            for j in [1, m.div_ceil(2), m] {
                provers.push(ProverStrategy::partial_uhlmann(&x, j, m).unwrap());
            }
            for p in &provers {
                let ex = szk_exact(&x, m, p).unwrap();
                if ex.accept_probability < 0.5 {
                    continue;
                }
                let td = ex.output_distance.unwrap();
                assert!(td <= soundness_envelope(m, mu) + 0.05, "m={m} {}: {td}", p.name());
            }
        }
    }
}

#[test]
fn monte_carlo_conditional_output_tracks_exact() {
    let x = nearby_instance(0.3, 31);
    let m = 8;
    let p = ProverStrategy::partial_uhlmann(&x, 3, m).unwrap();
    let ex = szk_exact(&x, m, &p).unwrap();
    let mut acc = CMat::zeros(4, 4);
    let mut n = 0;
    for s in 0..500 {
        let r = szk_run(&x, m, &p, Seed(1000 + s)).unwrap();
        if let Some(o) = r.output_state {
            acc += o.matrix();
            n += 1;
        }
    }
    let emp = DensityOp::from_parts_unchecked(acc / cr(n as f64), vec![2, 2]);
    let td = qcore::trace_distance(&emp, ex.conditional_output.as_ref().unwrap()).unwrap();
    assert!(td < 3.0 / (n as f64).sqrt(), "td {td} over {n} accepted runs");
}

fn block_perm(perm: &[usize]) -> Vec<usize> {
    perm.iter().flat_map(|&b| [2 * b, 2 * b + 1]).collect()
}

#[test]
fn post_prover_state_is_permutation_invariant() {
    let x = UhlmannInstance::with_fidelity(2, 0.9, Seed(6)).unwrap();
    let m = 2;
    let provers = [
        ProverStrategy::partial_uhlmann(&x, 1, m).unwrap(),
        ProverStrategy::joint("scrambled", random_unitary(8, Seed(77)).unwrap()).unwrap(),
    ];
    for p in &provers {
        let rho = post_prover_state(&x, m, p).unwrap();
        for perm in [[1, 0, 2], [0, 2, 1], [2, 0, 1], [1, 2, 0]] {
            let moved = rho.permute(&block_perm(&perm)).unwrap();
            assert!(max_abs(&(moved.matrix() - rho.matrix())) < 1e-9);
        }
    }
}

#[test]
fn transcript_is_json_lines() {
    let x = nearby_instance(0.2, 2);
    let r = szk_run(&x, 3, &ProverStrategy::identity(2), Seed(5)).unwrap();
    let text = r.transcript_jsonl();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["accepted"], serde_json::Value::Bool(r.accepted));
    assert_eq!(v["permutation"].as_array().unwrap().len(), 4);
    assert_eq!(r.output_state.is_some(), r.accepted);
}

#[test]
fn partial_swap_matches_dense_exponential() {
    let zero = CVec::from_vec(vec![cr(1.0), cr(0.0)]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVec::from_vec(vec![cr(s), cr(s)]);
    let rho = DensityOp::from_pure(&zero, &[2]).unwrap();
    let sigma = DensityOp::from_pure(&plus, &[2]).unwrap();
    let dt = PI / 4.0;
    let swap = permutation_matrix(&[2, 2], &[1, 0]).unwrap();
    let v = expi_hermitian(&swap, -dt).unwrap();
    let joint = &v * kron(rho.matrix(), sigma.matrix()) * v.adjoint();
    let (oracle, _) = partial_trace_mat(&joint, &[2, 2], &[1]).unwrap();
    let got = partial_swap(&rho, &sigma, dt).unwrap();
    assert!(max_abs(&(got.matrix() - oracle)) < 1e-12);
}

#[test]
fn dme_halves_error_per_doubling() {
    let (tg, pr) = &calibration_instances()[0];
    let errs: Vec<f64> = [8, 16, 32].iter().map(|&k| dme_error(tg, pr, 0.5, k).unwrap()).collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.375..=0.625).contains(&ratio), "ratio {ratio}");
    }
}

fn random_purified_qutrit() -> (DensityOp, DensityOp) {
    let v = random_state(2, 3, Seed(91)).unwrap();
    let p = random_state(1, 3, Seed(92)).unwrap();
    (
        DensityOp::from_pure(v.amplitudes(), &[2, 3]).unwrap(),
        DensityOp::from_pure(p.amplitudes(), &[3]).unwrap(),
    )
}

#[test]
fn dme_slope_over_a_decade() {
    let mut cases = calibration_instances();
    cases.push(random_purified_qutrit());
    for (tg, pr) in &cases {
        let slope = convergence_slope(tg, pr, 0.5, &[8, 16, 32, 64, 128]).unwrap();
        assert!((-1.25..=-0.75).contains(&slope), "slope {slope}");
    }
}

#[test]
fn dme_identity_action_on_its_own_program() {
    let (_, pr) = random_purified_qutrit();
    for k in [8, 32] {
        let out = dme(&pr, &pr, 0.5, k).unwrap();
        assert!(qcore::trace_distance(&out, &pr).unwrap() <= dme_constant() * 0.25 / k as f64 + 1e-12);
        let exact = dme_exact(&pr, &pr, 0.5).unwrap();
        assert!(max_abs(&(exact.matrix() - pr.matrix())) < 1e-12);
    }
}

#[test]
fn approx_measure_calibration() {
    for s in 0..10 {
        let v = random_state(3, 4, Seed(200 + s)).unwrap();
        let tau = DensityOp::from_pure(v.amplitudes(), &[3, 4]).unwrap();
        let psi = random_state(1, 4, Seed(300 + s)).unwrap().into_amplitudes();
        let truth = overlap_probability(&tau, &psi).unwrap();
        let ideal = measure_branches(&tau, &psi, 0, MeasureMode::IdealReflection).unwrap();
        assert!((ideal.prob_one - truth).abs() <= 1e-9);
        if let Some(post) = &ideal.post_one {
            assert!(projection_error(post, &tau, &psi).unwrap() < 1e-9);
        }
        for k_q in [16, 64] {
            let br = measure_branches(&tau, &psi, k_q, MeasureMode::Dme).unwrap();
            assert!((br.prob_one - truth).abs() <= dme_measure_bound(k_q), "k_q {k_q}: {} vs {truth}", br.prob_one);
        }
    }
}

#[test]
fn dme_measurement_post_state_when_likely() {
    let psi = random_state(1, 4, Seed(17)).unwrap().into_amplitudes();
    let noise = random_state(1, 4, Seed(18)).unwrap().into_amplitudes();
    let mix = (&psi * cr(0.9) + noise * cr(0.3)).normalize();
    let v = kron_vec(&CVec::from_vec(vec![cr(0.6), c(0.0, 0.8)]), &mix);
    let tau = DensityOp::from_pure(&v, &[2, 4]).unwrap();
    assert!(overlap_probability(&tau, &psi).unwrap() >= 0.5);
    let br = measure_branches(&tau, &psi, 256, MeasureMode::Dme).unwrap();
    assert!(projection_error(br.post_one.as_ref().unwrap(), &tau, &psi).unwrap() < 0.05);
}

#[test]
fn qip_exact_oracle_fidelity_one() {
    let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(12)).unwrap();
    let honest = ProverStrategy::honest(&x).unwrap();
    let (_, d) = x.states().unwrap();
    for mode in [MeasureMode::IdealReflection, MeasureMode::Dme] {
        let oracle = QipOracle { mode, k_q: Some(64), ..QipOracle::default() };
        let r = qip_run(&x, 2, &honest, &oracle, Seed(3)).unwrap();
        let p = r.transcript[0].accept_probability;
        if mode == MeasureMode::IdealReflection {
            assert!(r.accepted && (p - 1.0).abs() < 1e-9);
        } else {
            assert!((p - 1.0).abs() <= dme_measure_bound(64));
        }
        if let Some(out) = r.output_state {
            let f = (d.amplitudes().adjoint() * out.matrix() * d.amplitudes())[(0, 0)].re;
            assert!((f - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn qip_preparation_error_is_bounded() {
    let x = UhlmannInstance::with_fidelity(2, 0.97, Seed(13)).unwrap();
    let honest = ProverStrategy::honest(&x).unwrap();
    for delta in [0.05, 0.2] {
        let oracle = QipOracle { prep_error: delta, ..QipOracle::default() };
        for s in 0..20 {
            let r = qip_run(&x, 3, &honest, &oracle, Seed(s)).unwrap();
            let rec = &r.transcript[0];
            assert!((rec.metrics[1].1 - delta).abs() < 1e-12);
            if let Some(dist) = rec.output_distance {
                assert!(dist <= delta + 1e-9);
            }
        }
    }
}

#[test]
fn qip_identity_prover_envelope() {
    let x = nearby_instance(0.15, 50);
    let m = 8;
    let mu = 1.0 - uhlmann::validate_instance(&x).unwrap().kappa;
    let (c, d) = x.states().unwrap();
    let oracle = QipOracle::default();
    let prover = ProverStrategy::identity(2);
    let mut acc = 0;
    for s in 0..300 {
        let r = qip_run(&x, m, &prover, &oracle, Seed(s)).unwrap();
        if let Some(dist) = r.transcript[0].output_distance {
            acc += 1;
            assert!(dist <= soundness_envelope(m, mu) + 0.05);
        }
    }
    let p = inner(d.amplitudes(), c.amplitudes()).norm_sqr().powi(m as i32);
    assert!(within(acc as f64 / 300.0, p, 300, 3.0));
}

#[test]
fn qip_joint_prover_uses_dense_measurement() {
    let x = nearby_instance(0.3, 60);
    let joint = ProverStrategy::joint("joint", kron(&CMat::identity(2, 2), &random_unitary(2, Seed(1)).unwrap())).unwrap();
    for mode in [MeasureMode::IdealReflection, MeasureMode::Dme] {
        let oracle = QipOracle { mode, k_q: Some(128), ..QipOracle::default() };
        let r = qip_run(&x, 1, &joint, &oracle, Seed(9)).unwrap();
        assert_eq!(r.output_state.is_some(), r.accepted);
        if let Some(o) = &r.output_state {
            assert!((o.matrix().trace().re - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn amplification_with_exact_transporter() {
    let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(70)).unwrap();
    let r = engineered_transporter(&x, 2, 1.0).unwrap();
    let cfg = AmplifierConfig::new(2, 1, Seed(1)).unwrap();
    let rep = amplify_run(&x, &r, &cfg, 50).unwrap();
    assert!((rep.nu - 1.0).abs() < 1e-10);
    assert!((rep.empirical_fidelity - 1.0).abs() < 1e-9);
    assert!(rep.empirical_fidelity >= amplification_bound(1.0, 1, 2));
}

#[test]
fn amplification_grid_meets_bound() {
    let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(71)).unwrap();
    for nu in [0.4, 0.6, 0.8] {
        for k in [2, 4] {
            let r = engineered_transporter(&x, k, nu).unwrap();
            assert!((transporter_fidelity(&x, &r, k).unwrap() - nu).abs() < 1e-10);
            for t in [2, 3, 5] {
                let cfg = AmplifierConfig::new(k, t, Seed(k as u64 * 10 + t as u64)).unwrap();
                let rep = amplify_run(&x, &r, &cfg, 200).unwrap();
                assert!(rep.empirical_fidelity >= rep.bound - 3.0 * rep.std_error);
                assert!(rep.per_index.iter().all(|f| (0.0..=1.0 + 1e-9).contains(f)));
            }
        }
    }
}

#[test]
fn hatted_loop_stays_in_jordan_block() {
    let x = UhlmannInstance::with_fidelity(2, 0.95, Seed(72)).unwrap();
    for (k, nu) in [(2, 0.5), (3, 0.6)] {
        let r = engineered_transporter(&x, k, nu).unwrap();
        let cfg = AmplifierConfig::new(k, 4, Seed(0)).unwrap();
        assert!(jordan_residual(&x, &r, &cfg).unwrap() < 1e-8);
    }
}

#[test]
fn amplifier_rejects_wrong_transporter_dimension() {
    let x = UhlmannInstance::with_fidelity(2, 1.0, Seed(73)).unwrap();
    let r = engineered_transporter(&x, 2, 0.7).unwrap();
    let cfg = AmplifierConfig::new(3, 2, Seed(0)).unwrap();
    assert!(amplify_run(&x, &r, &cfg, 10).is_err());
}

#[test]
fn honest_prover_uses_completion() {
    let x = UhlmannInstance::with_fidelity(3, 0.8, Seed(74)).unwrap();
    let sol = UhlmannSolution::solve(&x, 0.0).unwrap();
    let ex = szk_exact(&x, 2, &ProverStrategy::honest(&x).unwrap()).unwrap();
    assert!((ex.accept_probability - sol.kappa.powi(2)).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn partial_swap_preserves_trace_and_hermiticity(a in 0u64..1000, b in 0u64..1000, dt in -3.0f64..3.0) {
        let rho = qcore::random::random_density(3, 2, Seed(a)).unwrap();
        let sigma = qcore::random::random_density(3, 3, Seed(b)).unwrap();
        let out = partial_swap(&rho, &sigma, dt).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(max_abs(&(out.matrix() - out.matrix().adjoint())) < 1e-12);
    }

    #[test]
    fn product_provers_preserve_norm(seed in 0u64..1000) {
        let x = UhlmannInstance::with_fidelity(2, 0.9, Seed(seed)).unwrap();
        let p = ProverStrategy::honest(&x).unwrap();
        let v = random_state(4, 4, Seed(seed + 1)).unwrap().into_amplitudes();
        let out = p.act(&v, &[2, 2, 2, 2], &[1, 3]).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn acceptance_is_a_probability(seed in 0u64..500, m in 1usize..6) {
        let x = UhlmannInstance::with_fidelity(2, 0.7, Seed(seed)).unwrap();
        let ex = szk_exact(&x, m, &ProverStrategy::partial_uhlmann(&x, 1, m).unwrap()).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ex.accept_probability));
    }
}
