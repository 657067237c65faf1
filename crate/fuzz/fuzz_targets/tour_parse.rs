//! The tour parser must never panic. Accepted orders round-trip exactly.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(order) = hdr_core::io::parse_tour_text(text) {
        if order.is_empty() || order.len() > 10_000 {
            return;
        }
        // Rebuild a tour file from the parsed order and parse it back.
        let mut written = String::from("TYPE : TOUR\nTOUR_SECTION\n");
        for v in &order {
            written.push_str(&format!("{}\n", v + 1));
        }
        written.push_str("-1\nEOF\n");
        let again = hdr_core::io::parse_tour_text(&written).expect("round trip parses");
        assert_eq!(order, again);
    }
});
