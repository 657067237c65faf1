//! TSPLIB tour files: a TOUR_SECTION of 1-based vertex ids, one per line,
//! terminated by -1.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Instance, Tour, VertexId};

/// Parses a tour file and binds it to `inst`, checking every id.
pub fn parse_tour(path: impl AsRef<Path>, inst: &Instance) -> Result<Tour> {
    let text = fs::read_to_string(path.as_ref())?;
    let order = parse_tour_text(&text)?;
    if order.len() != inst.n() {
        return Err(Error::malformed(format!(
            "tour lists {} vertices, instance has {}",
            order.len(),
            inst.n()
        )));
    }
    if let Some(&v) = order.iter().find(|&&v| v >= inst.n()) {
        return Err(Error::malformed(format!(
            "tour references unknown vertex {}",
            v + 1
        )));
    }
    Tour::new(inst, order)
}

/// Parses the visiting order (0-based) without an instance. Never panics.
pub fn parse_tour_text(text: &str) -> Result<Vec<VertexId>> {
    let mut order: Vec<VertexId> = Vec::new();
    let mut in_section = false;
    let mut terminated = false;
    for raw_line in text.lines() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if terminated {
            if line.eq_ignore_ascii_case("EOF") {
                break;
            }
            return Err(Error::malformed(format!(
                "content after tour terminator: '{line}'"
            )));
        }
        if !in_section {
            let key = line.split(':').next().unwrap_or("").trim();
            match key.to_ascii_uppercase().as_str() {
                "TOUR_SECTION" => in_section = true,
                "NAME" | "COMMENT" | "DIMENSION" => {}
                "TYPE" => {
                    let value = line.split(':').nth(1).unwrap_or("").trim();
                    if !value.eq_ignore_ascii_case("TOUR") {
                        return Err(Error::unsupported(format!(
                            "TYPE must be TOUR, got '{value}'"
                        )));
                    }
                }
                "EOF" => break,
                _ => {}
            }
            continue;
        }
        for token in line.split_whitespace() {
            if terminated {
                return Err(Error::malformed("vertex id after tour terminator"));
            }
            let id: i64 = token
                .parse()
                .map_err(|_| Error::malformed(format!("bad tour token '{token}'")))?;
            if id == -1 {
                terminated = true;
                continue;
            }
            if id < 1 {
                return Err(Error::malformed(format!("bad vertex id {id}")));
            }
            order.push((id - 1) as VertexId);
        }
    }
    if !in_section {
        return Err(Error::malformed("missing TOUR_SECTION"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &v in &order {
        if !seen.insert(v) {
            return Err(Error::malformed(format!("duplicate vertex id {}", v + 1)));
        }
    }
    Ok(order)
}

/// Writes a tour in the exact layout [`parse_tour`] reads back.
pub fn write_tour(path: impl AsRef<Path>, tour: &Tour, name: &str) -> Result<()> {
    fs::write(path.as_ref(), write_tour_string(tour, name))?;
    Ok(())
}

pub fn write_tour_string(tour: &Tour, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("NAME : {name}\n"));
    out.push_str("TYPE : TOUR\n");
    out.push_str(&format!("DIMENSION : {}\n", tour.len()));
    out.push_str("TOUR_SECTION\n");
    for &v in tour.order() {
        out.push_str(&format!("{}\n", v + 1));
    }
    out.push_str("-1\nEOF\n");
    out
}
