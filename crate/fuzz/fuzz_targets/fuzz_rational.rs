//! Fuzz the exact-rational wire parser. Any input must either parse to a
//! rational whose printed form parses back to the same value, or fail
//! cleanly (zero denominators included).

#![no_main]

use libfuzzer_sys::fuzz_target;

use gaudin_core::scenario::parse_rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rational(text) {
        let printed = r.to_string();
        let again = parse_rational(&printed).expect("printed rational reparses");
        assert_eq!(r, again, "round trip changed the value");
    }
});
