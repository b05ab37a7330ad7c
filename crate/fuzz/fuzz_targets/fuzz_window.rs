//! Fuzz the command-line window flag parser: four comma-separated
//! integers or a clean error, never a panic, and accepted flags must
//! describe nonempty finite windows.

#![no_main]

use libfuzzer_sys::fuzz_target;

use gaudin_core::scenario::parse_window_flag;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = parse_window_flag(text) {
        assert!(w.z_min <= w.z_max && w.d_min <= w.d_max);
        let win = w.to_window().expect("accepted flag builds a window");
        assert!(!win.is_empty());
    }
});
