//! Library-level runs of the smaller shipped scenarios: the duality
//! identity, its classical shadow, the bracket sweeps, and the sign
//! falsification controls.

use gaudin_core::duality::{
    classical_duality, quantum_duality, verify_homomorphisms, Mutation, Scenario,
};
use gaudin_core::psdo::Window;
use gaudin_core::ring::rat;
use gaudin_core::scenario::GaudinConfig;

fn load(name: &str) -> Scenario {
    let path = format!("{}/../../scenarios/{}.json", env!("CARGO_MANIFEST_DIR"), name);
    let text = std::fs::read_to_string(path).expect("scenario file");
    GaudinConfig::parse_json(&text)
        .unwrap()
        .to_scenario()
        .unwrap()
}

fn assert_all_pass(checks: &[gaudin_core::report::CheckOutcome], label: &str) {
    for c in checks {
        assert!(
            c.pass,
            "{}: {} — {} (witness {:?})",
            label, c.name, c.details, c.witness
        );
    }
}

#[test]
fn bosonic_minimal_full_stack() {
    let sc = load("d1m1");
    assert_all_pass(&quantum_duality(&sc).unwrap().checks, "d1m1 quantum");
    assert_all_pass(&classical_duality(&sc).unwrap().checks, "d1m1 classical");
    assert_all_pass(&verify_homomorphisms(&sc).unwrap(), "d1m1 homs");
}

#[test]
fn fermionic_minimal_full_stack() {
    let sc = load("d1n1");
    assert_all_pass(&quantum_duality(&sc).unwrap().checks, "d1n1 quantum");
    assert_all_pass(&classical_duality(&sc).unwrap().checks, "d1n1 classical");
    assert_all_pass(&verify_homomorphisms(&sc).unwrap(), "d1n1 homs");
}

#[test]
fn irregular_w_scenario() {
    let sc = load("d2m2-xi2");
    assert_all_pass(&quantum_duality(&sc).unwrap().checks, "d2m2 quantum");
    assert_all_pass(&classical_duality(&sc).unwrap().checks, "d2m2 classical");
}

#[test]
fn mixed_bf_scenario() {
    let sc = load("d2m1n1");
    assert_all_pass(&quantum_duality(&sc).unwrap().checks, "d2m1n1 quantum");
    assert_all_pass(&classical_duality(&sc).unwrap().checks, "d2m1n1 classical");
    assert_all_pass(&verify_homomorphisms(&sc).unwrap(), "d2m1n1 homs");
}

/// A small shape with both creation kinds present, so the creation-pair
/// sign flip has something to corrupt.
fn mixed_small() -> Scenario {
    Scenario {
        name: "d1-p1-m1".into(),
        d: 1,
        p: 1,
        q: 0,
        m: 1,
        n: 0,
        xi: vec![1],
        gamma: vec![1, 1],
        w: vec![rat(1, 3)],
        z: vec![rat(2, 1), rat(-1, 2)],
        window: Window::working(-6, 3, -6, 3).unwrap(),
        gen_window: Window::working(-3, 2, -3, 2).unwrap(),
        mutation: None,
    }
}

#[test]
fn mixed_small_passes_clean() {
    let sc = mixed_small();
    assert_all_pass(&quantum_duality(&sc).unwrap().checks, "d1p1m1 quantum");
    assert_all_pass(&classical_duality(&sc).unwrap().checks, "d1p1m1 classical");
    assert_all_pass(&verify_homomorphisms(&sc).unwrap(), "d1p1m1 homs");
}

#[test]
fn fuzz_corpus_replays_cleanly() {
    // the checked-in fuzz seeds must exercise the same harness logic
    // without panics: parse, validate, round-trip when accepted
    let root = format!("{}/../../fuzz/corpus", env!("CARGO_MANIFEST_DIR"));
    let mut seen = 0;
    for entry in std::fs::read_dir(format!("{}/fuzz_config_json", root)).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        if let Ok(cfg) = GaudinConfig::parse_json(&text) {
            if let Ok(sc) = cfg.to_scenario() {
                let back = serde_json::to_string(&cfg).unwrap();
                GaudinConfig::parse_json(&back)
                    .unwrap()
                    .to_scenario()
                    .unwrap();
                let _ = sc.describe();
            }
        }
        seen += 1;
    }
    for entry in std::fs::read_dir(format!("{}/fuzz_rational", root)).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        if let Ok(r) = gaudin_core::scenario::parse_rational(&text) {
            assert_eq!(
                gaudin_core::scenario::parse_rational(&r.to_string()).unwrap(),
                r
            );
        }
        seen += 1;
    }
    for entry in std::fs::read_dir(format!("{}/fuzz_window", root)).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        if let Ok(w) = gaudin_core::scenario::parse_window_flag(&text) {
            assert!(!w.to_window().unwrap().is_empty());
        }
        seen += 1;
    }
    assert!(seen >= 14, "corpus should stay populated, found {}", seen);
}

#[test]
fn falsification_controls_fire() {
    // flipping the number-operator quadrant breaks the bosonic scenario
    let mut sc = load("d1m1");
    sc.mutation = Some(Mutation::FlipXxSign);
    let art = quantum_duality(&sc).unwrap();
    let check = art
        .checks
        .iter()
        .find(|c| c.name == "quantum-identity")
        .unwrap();
    assert!(!check.pass);
    assert!(check.witness.as_deref().unwrap_or("").contains("slot"));
    // flipping the creation-pair quadrant breaks the mixed shape
    let mut sc2 = mixed_small();
    sc2.mutation = Some(Mutation::FlipXySign);
    let art2 = quantum_duality(&sc2).unwrap();
    let check2 = art2
        .checks
        .iter()
        .find(|c| c.name == "quantum-identity")
        .unwrap();
    assert!(!check2.pass, "creation-pair flip must be detected");
    assert!(check2.witness.is_some());
}
