//! Fuzz the scenario config loader: arbitrary bytes as JSON text. Both
//! the wire parse and the structural validation must reject bad input
//! with an error, never a panic; accepted configs must survive a
//! serialize/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;

use gaudin_core::scenario::GaudinConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(cfg) = GaudinConfig::parse_json(text) else {
        return;
    };
    // validation may reject, but must not panic
    if let Ok(sc) = cfg.to_scenario() {
        let _ = sc.describe();
        // a config that validated must round-trip through the wire
        let back = serde_json::to_string(&cfg).expect("serialize accepted config");
        let cfg2 = GaudinConfig::parse_json(&back).expect("reparse serialized config");
        cfg2.to_scenario().expect("revalidate round-tripped config");
    }
});
