//! One function per scenario. Each fills metrics and bound checks.

use serde_json::json;

use crypto::{evaluate, flavor_switch, tensor_amplify, uhlmann_attack, CommitmentScheme};
use physics::{
    bh_decode, controlled_swap_from_uhlmann, controlled_swap_residual, distinguisher_to_swap, interference_detect,
    swap_from_uhlmann, swap_to_distinguisher, BlackHoleInstance, OrthPair,
};
use protocols::amplify::engineered_transporter;
use protocols::szk::{simulator_distance, soundness_envelope};
use protocols::{amplify_run, qip_run, szk_stats, AmplifierConfig, MeasureMode, ProverStrategy, QipOracle};
use qcore::linalg::{inner, ket, kron_vec, op_norm};
use qcore::random::{random_density, random_state, random_unitary};
use qcore::state::MatrixData;
use qcore::{ChannelDesc, DensityOp};
use serde::Deserialize;
use shannon::{
    channel_from_json, compress as compress_codec, compress_to, decoder_from_uhlmann, decoupling_experiment, decoupling_fidelity,
    entropies, error_bound, haar_overlap, roundtrip, Source,
};
use uhlmann::{canonical_uhlmann, uhlmann_overlap, validate_instance, UhlmannInstance};

use super::report::{matrix_value, Check, Relation::*, Report};
use super::{CliError, Ctx};

type R = Result<(), CliError>;

const EXACT: f64 = 1e-8;

fn load_instance(ctx: &Ctx, path: Option<&std::path::PathBuf>, kappa_key: &str, kappa_default: f64) -> Result<UhlmannInstance, CliError> {
    match path {
        Some(p) => Ok(UhlmannInstance::from_json(&ctx.read(p)?)?),
        None => {
            let d = ctx.get("d", 2usize)?;
            let kappa = ctx.get(kappa_key, kappa_default)?;
            let kappa = if kappa_key == "mu" { 1.0 - kappa } else { kappa };
            Ok(UhlmannInstance::with_fidelity(d, kappa, ctx.seed()?.child("instance", 0))?)
        }
    }
}

fn prover(ctx: &Ctx, x: &UhlmannInstance) -> Result<ProverStrategy, CliError> {
    match ctx.get("prover", "honest".to_string())?.as_str() {
        "honest" => Ok(ProverStrategy::honest(x)?),
        "identity" => Ok(ProverStrategy::identity(x.d_b())),
        other => Err(CliError::Usage(format!("prover must be honest or identity, got {other}"))),
    }
}

/// `|⟨D|C⟩|²`.
fn overlap(x: &UhlmannInstance) -> Result<f64, CliError> {
    let (c, d) = x.states()?;
    Ok(inner(d.amplitudes(), c.amplitudes()).norm_sqr())
}

pub(super) fn uhlmann(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(2)?;
    let eta = ctx.get("eta", 0.0f64)?;
    let tol = ctx.tol(EXACT);
    let xs: Vec<UhlmannInstance> = if inputs.is_empty() {
        vec![load_instance(ctx, None, "kappa", 0.8)?]
    } else {
        inputs.iter().map(|p| load_instance(ctx, Some(p), "kappa", 0.8)).collect::<Result<_, _>>()?
    };
    let mut ws = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        let info = validate_instance(x)?;
        let w = canonical_uhlmann(x, eta)?;
        let (c, d) = x.states()?;
        let ov = uhlmann_overlap(&c, &d, w.matrix())?;
        let tag = if xs.len() == 1 { String::new() } else { format!("[{i}]") };
        rep.metric(&format!("kappa{tag}"), info.kappa);
        rep.metric(&format!("overlap{tag}"), ov);
        rep.metric(&format!("rank{tag}"), w.rank());
        rep.metric(&format!("dims{tag}"), [info.d_a, info.d_b]);
        if info.d_b <= 16 {
            rep.metric(&format!("W{tag}"), matrix_value(w.matrix()));
        }
        if eta == 0.0 {
            rep.check(Check::new(&format!("uhlmann_equality{tag}"), "|<phi|(id ⊗ W)|psi>|^2 = F(rho_A, sigma_A)", ov, Equal, info.kappa, tol));
        }
        ws.push(w.matrix().clone());
    }
    if ws.len() == 2 {
        if ws[0].shape() != ws[1].shape() {
            return Err(CliError::Usage("the two instances have different B dimensions".into()));
        }
        rep.metric("op_norm_difference", op_norm(&(&ws[0] - &ws[1]))?);
    }
    Ok(())
}

pub(super) fn szk(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let x = load_instance(ctx, inputs.first(), "mu", 0.05)?;
    let m = ctx.get("m", 4usize)?;
    let p = prover(ctx, &x)?;
    let runs = ctx.trials(500);
    let seed = ctx.seed()?;
    let mu = 1.0 - validate_instance(&x)?.kappa;
    let stats = szk_stats(&x, m, &p, runs, seed)?;
    let ov = overlap(&x)?;
    let sim = simulator_distance(&x, m)?;
    rep.metric("mu", mu);
    rep.metric("accept_rate", stats.accept_rate);
    rep.metric("accepted", stats.accepted);
    rep.metric("std_error", stats.std_error);
    rep.metric("accept_probability_exact", stats.exact.accept_probability);
    rep.metric("overlap_cd", ov);
    rep.metric("simulator_distance", sim);
    rep.metric("output_distance_exact", stats.exact.output_distance);
    let sigma3 = 3.0 * stats.std_error + 1e-12;
    match p.name() {
        "honest" => rep.check(Check::new("completeness", "accept_rate >= (1 - mu)^m", stats.accept_rate, AtLeast, (1.0 - mu).powi(m as i32), sigma3)),
        _ => {
            let pm = ov.powi(m as i32);
            let sd = (pm * (1.0 - pm) / runs as f64).sqrt();
            rep.check(Check::new("identity_acceptance", "accept_rate = |<D|C>|^(2m)", stats.accept_rate, Equal, pm, 3.0 * sd + 1e-12));
        }
    }
    rep.check(Check::new("zero_knowledge", "td(simulated, real) <= sqrt((m + 1) mu)", sim, AtMost, ((m + 1) as f64 * mu).sqrt(), 1e-9));
    if let (true, Some(td)) = (stats.exact.accept_probability >= 0.5, stats.exact.output_distance) {
        rep.check(Check::new("soundness", "td(output, target) <= sqrt(4/(m+1)) + 5 sqrt(mu) + 0.05", td, AtMost, soundness_envelope(m, mu) + 0.05, 0.0));
    }
    Ok(())
}

pub(super) fn qip(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let x = load_instance(ctx, inputs.first(), "mu", 0.03)?;
    let m = ctx.get("m", 3usize)?;
    let p = prover(ctx, &x)?;
    let mode = match ctx.get("mode", "ideal".to_string())?.as_str() {
        "ideal" => MeasureMode::IdealReflection,
        "dme" => MeasureMode::Dme,
        other => return Err(CliError::Usage(format!("mode must be ideal or dme, got {other}"))),
    };
    let oracle = QipOracle {
        prep_error: ctx.get("prep_error", 0.0f64)?,
        mode,
        k_q: ctx.get_opt("k_q")?,
        measure_error: ctx.get("measure_error", 1e-2f64)?,
    };
    let runs = ctx.trials(200);
    let seed = ctx.seed()?;
    let mu = 1.0 - validate_instance(&x)?.kappa;
    let mut accepted = 0usize;
    let mut worst: f64 = 0.0;
    let mut p_sum = 0.0;
    for i in 0..runs {
        let r = qip_run(&x, m, &p, &oracle, seed.child("qip", i as u64))?;
        p_sum += r.transcript[0].accept_probability;
        if let Some(d) = r.transcript[0].output_distance {
            accepted += 1;
            worst = worst.max(d);
        }
    }
    let rate = accepted as f64 / runs as f64;
    rep.metric("mu", mu);
    rep.metric("accept_rate", rate);
    rep.metric("mean_accept_probability", p_sum / runs as f64);
    rep.metric("max_output_distance", worst);
    rep.metric("k_q", oracle.copies());
    if rate >= 0.5 {
        rep.check(Check::new("soundness", "td(output, target) <= sqrt(4/(m+1)) + 5 sqrt(mu) + 0.05", worst, AtMost, soundness_envelope(m, mu) + 0.05, 0.0));
    }
    if p.name() == "honest" && oracle.prep_error == 0.0 {
        let allowance = if mode == MeasureMode::Dme { protocols::measure::dme_measure_bound(oracle.copies()) } else { 0.0 };
        let se = (rate * (1.0 - rate) / runs as f64).sqrt().max(1.0 / runs as f64);
        rep.check(Check::new("completeness", "accept_rate >= (1 - mu)^m - measurement error", rate, AtLeast, (1.0 - mu).powi(m as i32) - allowance, 3.0 * se));
    }
    Ok(())
}

pub(super) fn amplify(ctx: &Ctx, rep: &mut Report) -> R {
    ctx.inputs(0)?;
    let nu = ctx.get("nu", 0.6f64)?;
    let k = ctx.get("k", 2usize)?;
    let t = ctx.get("T", 3usize)?;
    let d = ctx.get("d", 2usize)?;
    let trials = ctx.trials(200);
    let seed = ctx.seed()?;
    let x = UhlmannInstance::with_fidelity(d, 1.0, seed.child("instance", 0))?;
    let r = engineered_transporter(&x, k, nu)?;
    let rep_a = amplify_run(&x, &r, &AmplifierConfig::new(k, t, seed)?, trials)?;
    rep.metric("nu", rep_a.nu);
    rep.metric("empirical_fidelity", rep_a.empirical_fidelity);
    rep.metric("std_error", rep_a.std_error);
    rep.check(Check::new(
        "amplification",
        "empirical >= 1 - (2(1 - nu)^T + 32T/sqrt(k))",
        rep_a.empirical_fidelity,
        AtLeast,
        rep_a.bound,
        3.0 * rep_a.std_error,
    ));
    Ok(())
}

pub(super) fn commit(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let scheme = match inputs.first() {
        Some(p) => CommitmentScheme::from_json(&ctx.read(p)?)?,
        None => CommitmentScheme::random(ctx.get("n", 4usize)?, ctx.get("n_commit", 2usize)?, ctx.get("gates", 30usize)?, ctx.seed()?)?,
    };
    let k = ctx.get("k", 2usize)?;
    let tol = ctx.tol(EXACT);
    let base = evaluate(&scheme, Some(&uhlmann_attack(&scheme)?))?;
    let switched = evaluate(&flavor_switch(&scheme)?, None)?;
    let amplified = evaluate(&tensor_amplify(&scheme, k)?, None)?;
    rep.metric("scheme", base);
    rep.metric("switched", switched);
    rep.metric("amplified", amplified);
    let b = base.binding_opt;
    rep.check(Check::new("tradeoff", "hiding >= 1 - sqrt(binding)", base.hiding_stat, AtLeast, 1.0 - b.sqrt(), 1e-9));
    rep.check(Check::new("uhlmann_attack", "F(attack) = binding", base.binding_attack.unwrap_or(f64::NAN), Equal, b, tol));
    rep.check(Check::new("flavor_switch", "hiding' <= sqrt(binding)", switched.hiding_stat, AtMost, b.sqrt(), tol));
    rep.check(Check::new("tensor_binding", "binding_k = binding^k", amplified.binding_opt, Equal, b.powi(k as i32), 1e-9));
    Ok(())
}

pub(super) fn channel(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let ch = match inputs.first() {
        Some(p) => channel_from_json(&ctx.read(p)?)?,
        None => {
            let d = ctx.get("d", 2usize)?;
            let env = ctx.get("env", 1usize)?;
            let u = random_unitary(d * env, ctx.seed()?.child("channel", 0))?;
            ChannelDesc::new(u, d, env, 0, d, env)?
        }
    };
    let tol = ctx.tol(EXACT);
    let dec = decoupling_fidelity(&ch)?;
    let r = decoder_from_uhlmann(&ch)?;
    rep.metric("dims", json!({"in": ch.d_in(), "out": ch.d_out(), "env": ch.d_env()}));
    rep.metric("decoupling_fidelity", dec);
    rep.metric("decoder", &r);
    rep.check(Check::new("instance_is_decoupling", "kappa(E, F) = F(N^c(Phi), N^c(id/d) ⊗ id/d)", r.instance_fidelity, Equal, dec, tol));
    rep.check(Check::new("decoder", "F((D∘N)(Phi), Phi) >= decoupling fidelity", r.fidelity, AtLeast, dec, tol));
    Ok(())
}

fn source(ctx: &Ctx, m: usize) -> Result<Source, CliError> {
    let d = 1usize << m;
    let rho = match ctx.get("source", "random".to_string())?.as_str() {
        "mixed" => DensityOp::maximally_mixed(d)?,
        "pure" => {
            let v = random_state(d, 1, ctx.seed()?.child("source", 0))?.into_amplitudes();
            DensityOp::from_pure(&v, &[d])?
        }
        "random" => random_density(d, ctx.get("rank", 2usize)?, ctx.seed()?.child("source", 0))?,
        other => return Err(CliError::Usage(format!("source must be mixed, pure or random, got {other}"))),
    };
    Ok(Source::Density(rho))
}

pub(super) fn compress(ctx: &Ctx, rep: &mut Report) -> R {
    ctx.inputs(0)?;
    let m = ctx.get("m", 3usize)?;
    let delta = ctx.get("delta", 0.1f64)?;
    let src = source(ctx, m)?;
    let seed = ctx.seed()?;
    let codec = match ctx.get_opt::<usize>("s")? {
        Some(s) => compress_to(&src, s, seed)?,
        None => compress_codec(&src, delta, seed)?,
    };
    let samples = ctx.trials(1000);
    let cliffords = ctx.get("cliffords", 100usize)?;
    let td = roundtrip(&codec, &src.purification()?)?;
    let bound = error_bound(&src, codec.s, delta)?;
    let haar = haar_overlap(&codec.e, &codec.d, samples, seed.child("haar", 0))?;
    let dec = decoupling_experiment(&src.density()?, codec.s, cliffords, seed.child("decoupling", 0))?;
    rep.metric("s", codec.s);
    rep.metric("y_star", &codec.y_star);
    rep.metric("roundtrip_td", td);
    rep.metric("error_bound", bound);
    rep.metric("haar", json!({"mean": haar.mean, "std_error": haar.std_error, "samples": haar.samples}));
    rep.metric("decoupling", &dec);
    rep.check(Check::new("roundtrip", "td <= max(delta, 20 nu^(1/4))", td, AtMost, delta.max(bound), 0.0));
    rep.check(Check::new("haar_overlap", "E|<psi|D∘E|psi>|^2 <= R/M", haar.mean, AtMost, haar.bound, 3.0 * haar.std_error + 1e-12));
    rep.check(Check::new(
        "decoupling",
        "E||T∘U(rho) - omega ⊗ rho_B||_1 <= 2^(-h2(A'|E)/2 - h2(A|B)/2)",
        dec.lhs_mean,
        AtMost,
        dec.rhs_bound,
        3.0 * dec.std_error + 1e-12,
    ));
    Ok(())
}

pub(super) fn blackhole(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let min_dec = ctx.get("min_decoupling", 0.99f64)?;
    let tol = ctx.tol(EXACT);
    let inst = match inputs.first() {
        Some(p) => BlackHoleInstance::from_json(&ctx.read(p)?)?,
        None => {
            let (n, r, depth) = (ctx.get("n", 6usize)?, ctx.get("r", 4usize)?, ctx.get("depth", 60usize)?);
            let tries = ctx.get("tries", 64u64)?;
            BlackHoleInstance::decodable_scrambler(n, r, depth, ctx.seed()?, min_dec, tries)?.0
        }
    };
    rep.metric("n", inst.n());
    rep.metric("r", inst.r);
    let dec = decoupling_fidelity(&inst.channel()?)?;
    rep.check(Check::new("decodable", "decoupling fidelity >= 1 - epsilon", dec, AtLeast, min_dec, 0.0));
    if dec < min_dec {
        // outside the promise: report without decoding
        rep.metric("decoupling_fidelity", dec);
        return Ok(());
    }
    let r = bh_decode(&inst)?;
    rep.metric("report", &r);
    rep.check(Check::new("epr", "<EPR|rho_BA|EPR> >= decoupling fidelity", r.epr_fidelity, AtLeast, r.decoupling, tol));
    rep.check(Check::new("channel_consistency", "black-hole fidelity = channel decoder fidelity", r.epr_fidelity, Equal, r.channel_fidelity, 1e-9));
    Ok(())
}

pub(super) fn interfere(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let tol = ctx.tol(EXACT);
    let pairs: Vec<OrthPair> = match inputs.first() {
        Some(p) => vec![OrthPair::from_json(&ctx.read(p)?)?],
        None => {
            let (n, len) = (ctx.get("n", 2usize)?, ctx.get("len", 20usize)?);
            let seed = ctx.seed()?;
            (0..ctx.trials(100)).map(|i| OrthPair::random(n, len, seed.child("pair", i as u64))).collect::<Result<_, _>>()?
        }
    };
    let (mut correct, mut residual, mut round_trip): (usize, f64, f64) = (0, 0.0, 0.0);
    for pair in &pairs {
        let u = controlled_swap_from_uhlmann(pair)?;
        residual = residual.max(controlled_swap_residual(&u, pair)?);
        for (sign, bit) in [(1.0, 0u8), (-1.0, 1u8)] {
            if interference_detect(pair, &pair.superposition(sign)?)? == bit {
                correct += 1;
            }
        }
        let (c, d) = pair.states()?;
        let swap = swap_from_uhlmann(pair)?;
        let back = distinguisher_to_swap(&swap_to_distinguisher(&swap, &c, &d)?, 1)?;
        for x in [&c, &d, &pair.superposition(1.0)?] {
            let lhs = &back * kron_vec(&ket(0, 2), x);
            round_trip = round_trip.max((lhs - kron_vec(&ket(0, 2), &(&swap * x))).norm());
        }
    }
    let decisions = 2 * pairs.len();
    rep.metric("pairs", pairs.len());
    rep.metric("correct", correct);
    rep.check(Check::new("decisions", "correct sign decisions = 2 x pairs", correct as f64, Equal, decisions as f64, 0.0));
    rep.check(Check::new("controlled_swap", "max ||U~|b>|x> - |b>|X^b x>||", residual, AtMost, 0.0, tol));
    rep.check(Check::new("round_trip", "max ||V^+ Z V |0>|x> - |0>U|x>|| on span{C, D}", round_trip, AtMost, 0.0, tol));
    Ok(())
}

#[derive(Deserialize)]
struct DensityFile {
    dims: Vec<usize>,
    matrix: MatrixData,
}

/// `maximally-mixed-<n>q`, `pure-<n>q`, `random-<n>q-r<k>`, or a JSON file.
fn named_state(ctx: &Ctx, name: &str) -> Result<DensityOp, CliError> {
    let qubits = |s: &str| s.strip_suffix('q').and_then(|q| q.parse::<usize>().ok());
    let parts: Vec<&str> = name.rsplitn(2, '-').collect();
    if let Some(n) = name.strip_prefix("maximally-mixed-").and_then(qubits) {
        return Ok(DensityOp::maximally_mixed(1 << n)?);
    }
    if let Some(n) = name.strip_prefix("pure-").and_then(qubits) {
        let v = random_state(1 << n, 1, ctx.seed()?.child("state", 0))?.into_amplitudes();
        return Ok(DensityOp::from_pure(&v, &[1 << n])?);
    }
    if let (Some(rest), [k, _]) = (name.strip_prefix("random-"), parts.as_slice()) {
        if let (Some(n), Some(k)) = (rest.split('-').next().and_then(qubits), k.strip_prefix('r').and_then(|k| k.parse().ok())) {
            return Ok(random_density(1 << n, k, ctx.seed()?.child("state", 0))?);
        }
    }
    let path = std::path::PathBuf::from(name);
    if path.exists() {
        let f: DensityFile = serde_json::from_str(&ctx.read(&path)?).map_err(|e| qcore::Error::Parse(e.to_string()))?;
        return Ok(DensityOp::new(f.matrix.to_mat()?, f.dims)?);
    }
    Err(CliError::Usage(format!("'{name}' is neither a known state name nor a file")))
}

pub(super) fn entropy(ctx: &Ctx, rep: &mut Report) -> R {
    let inputs = ctx.inputs(1)?;
    let name = match inputs.first() {
        Some(p) => p.display().to_string(),
        None => ctx.get("state", "maximally-mixed-3q".to_string())?,
    };
    let eps = ctx.get("epsilon", 0.0f64)?;
    let rho = named_state(ctx, &name)?;
    let e = entropies(&rho, eps)?;
    let log_d = (rho.dim() as f64).log2();
    rep.metric("state", &name);
    rep.metric("entropies", e);
    rep.metric("log_dim", log_d);
    rep.check(Check::new("min_below_collision", "h_min <= h_2", e.h_min, AtMost, e.h2_lower, 1e-9));
    rep.check(Check::new("collision_below_max", "h_2 <= h_max", e.h2_lower, AtMost, e.h_max, 1e-9));
    rep.check(Check::new("max_below_dimension", "h_max <= log d", e.h_max, AtMost, log_d, 1e-9));
    rep.check(Check::new("smoothing", "h_max^eps <= h_max", e.h_max_smoothed, AtMost, e.h_max, 1e-9));
    Ok(())
}
