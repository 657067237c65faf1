//! The instance parser must never panic, whatever the input. Accepted inputs
//! must survive a write/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = hdr_core::io::parse_tsplib_text(text) {
        // Keep the round trip cheap on pathological dimension counts.
        if inst.n() <= 10_000 {
            let written = hdr_core::io::write_tsplib_string(&inst, "fuzz");
            let again = hdr_core::io::parse_tsplib_text(&written).expect("round trip parses");
            assert_eq!(inst.n(), again.n());
            assert_eq!(inst.metric(), again.metric());
            for v in 0..inst.n() {
                assert_eq!(inst.coord(v), again.coord(v));
            }
        }
    }
});
