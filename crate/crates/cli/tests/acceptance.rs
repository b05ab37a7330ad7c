//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line. All comparisons are exact (zero tolerance); runtime
//! budgets are asserted where stated. The heavy criteria serialize on a
//! global lock so the wall-clock budgets are meaningful.

use std::sync::Mutex;
use std::time::Instant;

use gaudin_core::duality::{quantum_duality, Mutation, Scenario};
use gaudin_core::psdo::Window;
use gaudin_core::report::CheckOutcome;
use gaudin_core::ring::rat;
use gaudin_core::scenario::GaudinConfig;
use gaudin_core::suites;

static LOCK: Mutex<()> = Mutex::new(());

const SHIPPED: [&str; 5] = ["d1m1", "d1n1", "d2m2-xi2", "d2m1n1", "d2p1q1m1n1-xi2"];

fn scenario_path(name: &str) -> String {
    format!("{}/../../scenarios/{}.json", env!("CARGO_MANIFEST_DIR"), name)
}

fn load(name: &str) -> Scenario {
    let text = std::fs::read_to_string(scenario_path(name)).expect("scenario file");
    GaudinConfig::parse_json(&text)
        .unwrap()
        .to_scenario()
        .unwrap()
}

fn report_line(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {}: {} — {}",
        criterion,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
    assert!(pass, "{} failed: {}", criterion, detail);
}

fn failed_names(checks: &[CheckOutcome]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} ({:?})", c.name, c.witness))
        .collect()
}

#[test]
fn criterion_1_quantum_duality() {
    let _guard = LOCK.lock().unwrap();
    let started = Instant::now();
    let mut bad = Vec::new();
    for name in SHIPPED {
        let sc = load(name);
        let art = quantum_duality(&sc).expect(name);
        for c in &art.checks {
            if !c.pass {
                bad.push(format!("{}: {}", name, c.name));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    // falsification control: one flipped sign in the super-side map must
    // fail with a localized witness
    let mut mutated = load("d1m1");
    mutated.mutation = Some(Mutation::FlipXxSign);
    let art = quantum_duality(&mutated).unwrap();
    let identity = art
        .checks
        .iter()
        .find(|c| c.name == "quantum-identity")
        .unwrap();
    let control_ok = !identity.pass && identity.witness.is_some();
    let within_budget = elapsed < 300.0;
    report_line(
        "criterion 1 (quantum duality, five scenarios + sign control)",
        bad.is_empty() && control_ok && within_budget,
        &format!(
            "{} scenarios exact in {:.1}s (budget 300s); control witness {:?}; failures {:?}",
            SHIPPED.len(),
            elapsed,
            identity.witness,
            bad
        ),
    );
}

#[test]
fn criterion_2_classical_duality() {
    let _guard = LOCK.lock().unwrap();
    let started = Instant::now();
    let mut bad = Vec::new();
    for name in SHIPPED {
        let sc = load(name);
        let report = suites::run_classical_suite(&sc).expect(name);
        bad.extend(failed_names(&report.checks));
    }
    let elapsed = started.elapsed().as_secs_f64();
    report_line(
        "criterion 2 (classical duality, five scenarios)",
        bad.is_empty() && elapsed < 60.0,
        &format!("exact in {:.1}s (budget 60s); failures {:?}", elapsed, bad),
    );
}

#[test]
fn criterion_3_homomorphism_sweeps() {
    let _guard = LOCK.lock().unwrap();
    let mut bad = Vec::new();
    for name in SHIPPED {
        let sc = load(name);
        let report = suites::run_homs_suite(&sc).expect(name);
        bad.extend(failed_names(&report.checks));
    }
    report_line(
        "criterion 3 (bracket sweeps and cross-side commuting actions, all basis pairs)",
        bad.is_empty(),
        &format!("failures {:?}", bad),
    );
}

#[test]
fn criterion_4_berezinian_structure() {
    let _guard = LOCK.lock().unwrap();
    let report = suites::run_berezinian_suite(7, 50).unwrap();
    let bad = failed_names(&report.checks);
    report_line(
        "criterion 4 (Berezinian structure suite, 50 randomized matrices + block proofs)",
        bad.is_empty(),
        &format!("checks {:?}; failures {:?}", report.checks.len(), bad),
    );
}

#[test]
fn criterion_5_generator_commutativity() {
    let _guard = LOCK.lock().unwrap();
    let mut bad = Vec::new();
    for name in SHIPPED {
        let sc = load(name);
        let checks = gaudin_core::duality::generator_commutativity(&sc).expect(name);
        bad.extend(failed_names(&checks));
    }
    report_line(
        "criterion 5 (generator families commute: enveloping algebras and Weyl images)",
        bad.is_empty(),
        &format!("failures {:?}", bad),
    );
}

#[test]
fn criterion_6_weight_space_suite() {
    let _guard = LOCK.lock().unwrap();
    let mut bad = Vec::new();
    let mut spaces = 0usize;
    for name in ["spectrum-d2m2", "d2m1n1"] {
        let sc = load(name);
        let report = suites::run_spectrum_suite(&sc, 42).expect(name);
        spaces += report
            .checks
            .iter()
            .filter(|c| c.name.starts_with("basis-dictionary"))
            .count();
        bad.extend(failed_names(&report.checks));
    }
    report_line(
        "criterion 6 (weight spaces: dictionary, commuting, cyclic, simple spectrum)",
        bad.is_empty() && spaces >= 3,
        &format!("{} weight spaces checked; failures {:?}", spaces, bad),
    );
}

#[test]
fn criterion_7_infrastructure() {
    let _guard = LOCK.lock().unwrap();
    let window = suites::window_soundness_trials(3, 100).unwrap();
    let pbw = suites::pbw_associativity_trials(4, 100).unwrap();
    let weyl = suites::weyl_associativity_trials(5, 100).unwrap();
    // byte determinism of reports across two identical runs
    let bin = env!("CARGO_BIN_EXE_gaudin-verify");
    let dir = std::env::temp_dir();
    let out1 = dir.join("gaudin-acceptance-rep1.json");
    let out2 = dir.join("gaudin-acceptance-rep2.json");
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args([
                "spectrum",
                "--config",
                &scenario_path("spectrum-d2m2"),
                "--seed",
                "9",
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .expect("spawn verifier");
        assert!(status.status.success(), "verifier run failed");
    };
    run(&out1);
    run(&out2);
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    let deterministic = b1 == b2;
    let all = [&window, &pbw, &weyl];
    let bad: Vec<_> = all
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect();
    report_line(
        "criterion 7 (window soundness, associativity trials, report determinism)",
        bad.is_empty() && deterministic,
        &format!(
            "100 trials each; report bytes identical: {}; failures {:?}",
            deterministic, bad
        ),
    );
}

#[test]
fn config_validation_exit_codes() {
    let _guard = LOCK.lock().unwrap();
    let bin = env!("CARGO_BIN_EXE_gaudin-verify");
    let dir = std::env::temp_dir();
    // malformed composition: xi does not sum to d -> exit 2
    let bad = dir.join("gaudin-acceptance-bad.json");
    std::fs::write(
        &bad,
        r#"{"d": 2, "p": 0, "q": 0, "m": 1, "n": 0, "xi": [1], "gamma": [1], "w": ["1"], "z": ["2"]}"#,
    )
    .unwrap();
    let out = std::process::Command::new(bin)
        .args(["verify-duality", "--config", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "config errors exit with 2");
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(
        msg.contains("sum"),
        "diagnostic names the composition constraint: {}",
        msg
    );
    // a failing check exits with 1
    let mutated = dir.join("gaudin-acceptance-mutated.json");
    std::fs::write(
        &mutated,
        r#"{"d": 1, "p": 0, "q": 0, "m": 1, "n": 0, "xi": [1], "gamma": [1],
            "w": ["1"], "z": ["1/2"], "mutation": "flip-xx-sign"}"#,
    )
    .unwrap();
    let rep = dir.join("gaudin-acceptance-mut-rep.json");
    let out = std::process::Command::new(bin)
        .args([
            "verify-duality",
            "--config",
            mutated.to_str().unwrap(),
            "--out",
            rep.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "check failures exit with 1");
    println!("acceptance exit-code contract: PASS — config error 2, check failure 1");
}

/// The classical sides of the five scenarios also satisfy the alternate
/// bosonic/fermionic reductions: re-run the smallest two with the roles
/// of the oscillators isolated.
#[test]
fn reduction_smoke() {
    let _guard = LOCK.lock().unwrap();
    // purely bosonic reduction uses only the determinant route
    let sc = load("d1m1");
    let art = gaudin_core::duality::classical_duality(&sc).unwrap();
    assert!(art.checks.iter().all(|c| c.pass));
    // purely fermionic reduction exercises the inverse-determinant route
    let scf = Scenario {
        name: "fermi-2".into(),
        d: 2,
        p: 0,
        q: 0,
        m: 0,
        n: 2,
        xi: vec![1, 1],
        gamma: vec![1, 1],
        w: vec![rat(1, 1), rat(-1, 2)],
        z: vec![rat(2, 1), rat(1, 3)],
        window: Window::working(-6, 4, -6, 4).unwrap(),
        gen_window: Window::working(-3, 2, -3, 2).unwrap(),
        mutation: None,
    };
    let artf = gaudin_core::duality::classical_duality(&scf).unwrap();
    assert!(artf.checks.iter().all(|c| c.pass));
    let artq = quantum_duality(&scf).unwrap();
    assert!(artq.checks.iter().all(|c| c.pass));
    println!("acceptance reduction smoke: PASS — bosonic and fermionic reductions hold");
}
