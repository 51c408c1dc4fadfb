//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qbit_core::algorithms::{classical_distinguish, deutsch_jozsa, ghz_trace, OracleId, Verdict};
use qbit_core::cli::{parse_circuit, run_program};
use qbit_core::decoherence::{
    decohered_density, diagonal_expectation, expectation, qbits_for_number, shor_requirements,
    DecoherenceBudget, EnvironmentModel,
};
use qbit_core::gates::{compose, GateOp};
use qbit_core::nmr::{
    certificate_threshold, make_pseudo_pure, ppt_check, ppt_threshold, separability_certificate,
    PureKind,
};
use qbit_core::qstate::{QbitIndex, StateVector};
use qbit_core::random;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("runtime {elapsed:?} exceeds {limit:?}")
    })
}

fn criterion_1_deutsch_jozsa() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 1.0;
    for id in OracleId::ALL {
        let q = deutsch_jozsa(id).map_err(|e| e.to_string())?;
        let expected = StateVector::from_bits(if id.is_constant() { "00" } else { "10" }).unwrap();
        let overlap = expected.fidelity_amplitude(&q.final_state).unwrap();
        worst = worst.min(overlap);
        ensure(overlap >= 1.0 - 1e-10, || {
            format!("{id}: |⟨expected|final⟩| = {overlap}")
        })?;
        let want = if id.is_constant() {
            Verdict::Constant
        } else {
            Verdict::Balanced
        };
        ensure(q.verdict == want, || {
            format!("{id}: verdict {:?}", q.verdict)
        })?;
        ensure(q.oracle_calls == 1, || {
            format!("{id}: {} quantum calls", q.oracle_calls)
        })?;
        let cl = classical_distinguish(id);
        ensure(cl.oracle_calls == 2 && cl.verdict == want, || {
            format!(
                "{id}: classical {:?} in {} calls",
                cl.verdict, cl.oracle_calls
            )
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("min overlap {worst:.15}, 1 vs 2 oracle calls"))
}

fn criterion_2_ghz() -> Outcome {
    let start = Instant::now();
    let trace = ghz_trace(3).map_err(|e| e.to_string())?;
    let h = FRAC_1_SQRT_2;
    let sparse = |entries: &[(usize, f64)]| {
        let mut v = vec![c(0.0); 8];
        for &(i, a) in entries {
            v[i] = c(a);
        }
        StateVector::new(3, v).unwrap()
    };
    let expected = [
        sparse(&[(7, 1.0)]),
        sparse(&[(7, h), (6, h)]),
        sparse(&[(7, h), (4, h)]),
        sparse(&[(7, h), (0, h)]),
    ];
    ensure(trace.len() == 4, || {
        format!("{} states in trace", trace.len())
    })?;
    for (step, (got, want)) in trace.iter().zip(&expected).enumerate() {
        ensure(got.approx_eq(want, 1e-12), || {
            format!("step {step} differs: {got:?}")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("|111⟩ → (|111⟩+|110⟩)/√2 → (|111⟩+|100⟩)/√2 → (|111⟩+|000⟩)/√2 within 1e-12".into())
}

fn criterion_3_xor() -> Outcome {
    let g = GateOp::xor(1, 2).unwrap();
    for (input, output) in [("00", "10"), ("10", "00"), ("01", "01"), ("11", "11")] {
        let got = g.apply(&StateVector::from_bits(input).unwrap()).unwrap();
        ensure(got == StateVector::from_bits(output).unwrap(), || {
            format!("C(1,2)|{input}⟩ = {got:?}")
        })?;
    }
    let bell = StateVector::normalized(2, vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
    let out = g.apply(&bell).unwrap();
    let want = StateVector::normalized(2, vec![c(0.0), c(0.0), c(1.0), c(1.0)]).unwrap();
    ensure(out.approx_eq(&want, 1e-15), || {
        format!("C(1,2) on Bell gave {out:?}")
    })?;
    ensure(out.is_product_state(1).unwrap(), || {
        "output is entangled".into()
    })?;
    Ok("4/4 rows exact; Bell input disentangled to |1⟩⊗(|0⟩+|1⟩)/√2".into())
}

fn criterion_4_unitarity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let (mut worst_norm, mut worst_ip): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let n = rng.random_range(1..=5);
        let len = rng.random_range(0..=100);
        let gates: Vec<GateOp> = (0..len).map(|_| random::gate(n, &mut rng)).collect();
        let a = random::state(n, &mut rng);
        let b = random::state(n, &mut rng);
        let ga = compose(&gates, &a).unwrap();
        let gb = compose(&gates, &b).unwrap();
        worst_norm = worst_norm.max((ga.norm() - 1.0).abs());
        let before = a.inner_product(&b).unwrap();
        let after = ga.inner_product(&gb).unwrap();
        worst_ip = worst_ip.max((before - after).norm());
    }
    ensure(worst_norm < 1e-9 && worst_ip < 1e-9, || {
        format!("norm defect {worst_norm:e}, inner-product defect {worst_ip:e}")
    })?;
    Ok(format!(
        "1000 sequences: max norm defect {worst_norm:.1e}, max ⟨·|·⟩ defect {worst_ip:.1e}"
    ))
}

/// `Σ_i c_i |φ_i⟩ ⊗ |e_i⟩` with `|e_i⟩` computational basis states of an
/// environment register.
fn system_with_environment(env: &EnvironmentModel) -> StateVector {
    let k = env.branch_count();
    let env_qbits = (usize::BITS - (k.max(2) - 1).leading_zeros()) as usize;
    let mut total = vec![c(0.0); 1 << (env.n_qbits() + env_qbits)];
    for (i, (ci, phi)) in env.amplitudes().iter().zip(env.branches()).enumerate() {
        let e_i = StateVector::basis(env_qbits, i).unwrap();
        for (x, a) in phi.tensor(&e_i).unwrap().amplitudes().iter().enumerate() {
            total[x] += ci * a;
        }
    }
    StateVector::new(env.n_qbits() + env_qbits, total).unwrap()
}

fn criterion_5_decoherence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let (mut worst_exp, mut worst_rho): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let k = rng.random_range(1..=8);
        let env = random::environment(3, k, 0.0, &mut rng).map_err(|e| e.to_string())?;
        let obs = {
            let h = random::state(3, &mut rng).to_density().entries().clone();
            let g = random::state(3, &mut rng).to_density().entries().clone();
            h * c(rng.random_range(-2.0..2.0)) + g * c(rng.random_range(-2.0..2.0))
        };
        let full = expectation(&env, &obs).unwrap();
        let diag = diagonal_expectation(&env, &obs).unwrap();
        worst_exp = worst_exp.max((full - diag).abs());

        let reduced = system_with_environment(&env)
            .to_density()
            .partial_trace(&[1, 2, 3].map(QbitIndex::unchecked))
            .unwrap();
        let direct = decohered_density(&env);
        let diff = (reduced.entries() - direct.entries())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        worst_rho = worst_rho.max(diff);
    }
    ensure(worst_exp < 1e-12, || {
        format!("expectation vs diagonal sum: {worst_exp:e}")
    })?;
    ensure(worst_rho < 1e-10, || {
        format!("density vs partial trace: {worst_rho:e}")
    })?;
    Ok(format!(
        "200 models: expectation gap {worst_exp:.1e}, density gap {worst_rho:.1e}"
    ))
}

fn criterion_6_budget() -> Outcome {
    let four = shor_requirements(4).unwrap();
    let four_hundred = shor_requirements(400).unwrap();
    ensure(four.ops == 1_000_000, || format!("4-bit ops {}", four.ops))?;
    ensure(four_hundred.ops == 1_000_000_000_000, || {
        format!("400-bit ops {}", four_hundred.ops)
    })?;
    let small = DecoherenceBudget::new(1.0, 1e-7, four.ops).unwrap();
    let large = DecoherenceBudget::new(1.0, 1e-7, four_hundred.ops).unwrap();
    ensure(small.max_operations() == 10_000_000, || {
        format!("M = {}", small.max_operations())
    })?;
    ensure(small.feasible(), || "4-bit factoring infeasible".into())?;
    ensure(!large.feasible(), || "400-bit factoring feasible".into())?;
    let q30 = qbits_for_number(30).unwrap();
    let q_million = qbits_for_number(1_000_000).unwrap();
    ensure(q30 == 4, || format!("qbits(30) = {q30}"))?;
    ensure(q_million == 20, || {
        format!("qbits(10^6) = {q_million} under ⌈log2(n/2)⌉, expected 20")
    })?;
    Ok("M = 10^7; 10^6 ops feasible, 10^12 infeasible; qbits(30) = 4, qbits(10^6) = 20".into())
}

fn criterion_7_spectrum() -> Outcome {
    let bell = PureKind::Bell.state(2).unwrap();
    let mut worst: f64 = 0.0;
    for eps in [0.0, 0.25, 0.5, 1.0] {
        let ev = make_pseudo_pure(2, eps, &bell)
            .unwrap()
            .realized()
            .eigenvalues();
        let low = (1.0 - eps) / 4.0;
        let want = [low, low, low, low + eps];
        for (g, w) in ev.iter().zip(want) {
            worst = worst.max((g - w).abs());
        }
    }
    ensure(worst < 1e-10, || format!("eigenvalue error {worst:e}"))?;
    Ok(format!(
        "ε ∈ {{0, 0.25, 0.5, 1}}: max eigenvalue error {worst:.1e}"
    ))
}

fn criterion_8_separability() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst_min = f64::INFINITY;
    for n in [2usize, 3] {
        for i in 0..100 {
            let psi = random::state(n, &mut rng);
            let cert = separability_certificate(&make_pseudo_pure(n, 1e-5, &psi).unwrap()).unwrap();
            worst_min = worst_min.min(cert.min_coefficient);
            ensure(cert.separable_certified, || {
                format!(
                    "N={n} sample {i} not certified (min {:e})",
                    cert.min_coefficient
                )
            })?;
        }
    }
    let bell = PureKind::Bell.state(2).unwrap();
    let cert_eps = certificate_threshold(&bell, 1e-6).unwrap();
    ensure(cert_eps > 0.0 && cert_eps <= 1.0 / 3.0 + 1e-6, || {
        format!("certificate threshold {cert_eps}")
    })?;
    let ppt_eps = ppt_threshold(&bell, 1, 1e-6).unwrap();
    ensure((ppt_eps - 1.0 / 3.0).abs() <= 1e-6, || {
        format!("PPT flips at {ppt_eps}")
    })?;
    let below = ppt_check(
        &make_pseudo_pure(2, 1.0 / 3.0 - 1e-6, &bell)
            .unwrap()
            .realized(),
        1,
    )
    .unwrap();
    let above = ppt_check(
        &make_pseudo_pure(2, 1.0 / 3.0 + 1e-6, &bell)
            .unwrap()
            .realized(),
        1,
    )
    .unwrap();
    ensure(below.ppt && !above.ppt, || {
        "PPT does not flip across 1/3 ± 1e-6".into()
    })?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "200/200 certified at ε=1e-5 (min weight {worst_min:.3e}); Bell ε* = {cert_eps:.6}, PPT flip at {ppt_eps:.6}"
    ))
}

fn criterion_9_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let (mut certified, mut violations) = (0, 0);
    for _ in 0..1000 {
        let psi = random::state(2, &mut rng);
        let eps = rng.random_range(0.0..=1.0);
        let rho = make_pseudo_pure(2, eps, &psi).unwrap();
        let cert = separability_certificate(&rho).unwrap();
        let ppt = ppt_check(&rho.realized(), 1).unwrap();
        if cert.separable_certified {
            certified += 1;
            if !ppt.ppt {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, || {
        format!("{violations} certified states fail PPT")
    })?;
    ensure(certified > 0, || {
        "no state was certified; check is vacuous".into()
    })?;
    Ok(format!(
        "1000 samples, {certified} certified, 0 PPT violations"
    ))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qbit"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "qbit {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out.stdout)
}

fn outcome_map(json: &[u8]) -> Result<Vec<(String, f64)>, String> {
    let v: serde_json::Value = serde_json::from_slice(json).map_err(|e| e.to_string())?;
    Ok(v["outcomes"]
        .as_array()
        .ok_or("no outcomes")?
        .iter()
        .map(|o| {
            (
                o["bitstring"].as_str().unwrap_or("").to_string(),
                o["probability"].as_f64().unwrap_or(-1.0),
            )
        })
        .collect())
}

fn criterion_10_cli() -> Outcome {
    let mut files = vec![(
        "circuits/ghz.qc".to_string(),
        vec![("000", 0.5), ("111", 0.5)],
    )];
    for id in OracleId::ALL {
        let readout = if id.is_constant() { "00" } else { "10" };
        files.push((format!("circuits/dj_{id}.qc"), vec![(readout, 1.0)]));
    }
    for (file, want) in &files {
        let text = std::fs::read_to_string(format!("{}/{file}", env!("CARGO_MANIFEST_DIR")))
            .map_err(|e| format!("{file}: {e}"))?;
        let program = parse_circuit(&text).map_err(|e| format!("{file}: {e}"))?;
        run_program(&program).map_err(|e| format!("{file}: {e}"))?;

        let first = run_cli(&["run", file])?;
        let second = run_cli(&["run", file])?;
        ensure(first == second, || {
            format!("{file}: output differs between runs")
        })?;
        let got = outcome_map(&first)?;
        ensure(got.len() == want.len(), || {
            format!("{file}: outcomes {got:?}")
        })?;
        for ((bits, p), (wbits, wp)) in got.iter().zip(want) {
            ensure(bits == wbits && (p - wp).abs() < 1e-12, || {
                format!("{file}: outcomes {got:?}")
            })?;
        }
    }
    Ok(format!(
        "{} circuit files byte-stable across two runs",
        files.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 Deutsch-Jozsa exactness", criterion_1_deutsch_jozsa),
        ("2 GHZ reproduction", criterion_2_ghz),
        ("3 XOR truth table", criterion_3_xor),
        ("4 unitarity property suite", criterion_4_unitarity),
        ("5 decoherence oracle equivalence", criterion_5_decoherence),
        ("6 budget arithmetic", criterion_6_budget),
        ("7 pseudo-pure spectrum", criterion_7_spectrum),
        ("8 separability at thermal scale", criterion_8_separability),
        ("9 certificate soundness", criterion_9_soundness),
        ("10 CLI round-trip", criterion_10_cli),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  criterion {name}: {reason}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
