//! TSPLIB instance files: NAME / TYPE / DIMENSION / EDGE_WEIGHT_TYPE headers,
//! a NODE_COORD_SECTION with 1-based ids and two real coordinates per line,
//! terminated by the EOF keyword or end of file.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Instance, Metric};

/// Parses a TSPLIB file from disk. Only `EUC_2D` and `CEIL_2D` edge weights
/// are handled; anything else is an unsupported-format error.
pub fn parse_tsplib(path: impl AsRef<Path>) -> Result<Instance> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_tsplib_text(&text)
}

/// [`parse_tsplib`] over in-memory text. Never panics on malformed input.
pub fn parse_tsplib_text(text: &str) -> Result<Instance> {
    let mut dimension: Option<usize> = None;
    let mut metric: Option<Metric> = None;
    let mut coords_raw: Vec<(usize, f64, f64)> = Vec::new();
    let mut in_coords = false;
    let mut saw_eof = false;

    for raw_line in text.lines() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if saw_eof {
            break;
        }
        if in_coords {
            if line.eq_ignore_ascii_case("EOF") {
                saw_eof = true;
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(id), Some(x), Some(y)) = (it.next(), it.next(), it.next()) else {
                return Err(Error::malformed(format!(
                    "expected 'id x y' in NODE_COORD_SECTION, got '{line}'"
                )));
            };
            if it.next().is_some() {
                return Err(Error::malformed(format!(
                    "trailing tokens on coordinate line '{line}'"
                )));
            }
            let id: usize = id
                .parse()
                .map_err(|_| Error::malformed(format!("bad vertex id '{id}'")))?;
            let x: f64 = x
                .parse()
                .map_err(|_| Error::malformed(format!("bad coordinate '{x}'")))?;
            let y: f64 = y
                .parse()
                .map_err(|_| Error::malformed(format!("bad coordinate '{y}'")))?;
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::malformed(format!(
                    "non-finite coordinate on line '{line}'"
                )));
            }
            coords_raw.push((id, x, y));
            continue;
        }

        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        };
        match key.to_ascii_uppercase().as_str() {
            "NAME" | "COMMENT" => {}
            "TYPE" => {
                if !value.eq_ignore_ascii_case("TSP") {
                    return Err(Error::unsupported(format!(
                        "TYPE must be TSP, got '{value}'"
                    )));
                }
            }
            "DIMENSION" => {
                let d: usize = value
                    .parse()
                    .map_err(|_| Error::malformed(format!("bad DIMENSION '{value}'")))?;
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => {
                metric = Some(match value.to_ascii_uppercase().as_str() {
                    "EUC_2D" => Metric::Euc2d,
                    "CEIL_2D" => Metric::Ceil2d,
                    other => {
                        return Err(Error::unsupported(format!(
                            "EDGE_WEIGHT_TYPE '{other}' (only EUC_2D and CEIL_2D are handled)"
                        )))
                    }
                });
            }
            "NODE_COORD_SECTION" => {
                if dimension.is_none() {
                    return Err(Error::malformed(
                        "NODE_COORD_SECTION before DIMENSION",
                    ));
                }
                in_coords = true;
            }
            "EOF" => saw_eof = true,
            // Unknown headers (DISPLAY_DATA_TYPE and friends) are skipped.
            _ => {}
        }
    }

    let dimension =
        dimension.ok_or_else(|| Error::malformed("missing DIMENSION header"))?;
    let metric =
        metric.ok_or_else(|| Error::malformed("missing EDGE_WEIGHT_TYPE header"))?;
    if coords_raw.len() != dimension {
        return Err(Error::malformed(format!(
            "DIMENSION is {dimension} but {} coordinates were given",
            coords_raw.len()
        )));
    }
    let mut coords: Vec<Option<(f64, f64)>> = vec![None; dimension];
    for (id, x, y) in coords_raw {
        if id == 0 || id > dimension {
            return Err(Error::malformed(format!(
                "vertex id {id} out of range 1..={dimension}"
            )));
        }
        if coords[id - 1].replace((x, y)).is_some() {
            return Err(Error::malformed(format!("duplicate vertex id {id}")));
        }
    }
    let coords: Vec<(f64, f64)> = coords.into_iter().map(|c| c.unwrap()).collect();
    Instance::new(coords, metric)
}

/// Writes an instance in the exact layout [`parse_tsplib`] reads back.
pub fn write_tsplib(inst: &Instance, name: &str, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path.as_ref(), write_tsplib_string(inst, name))?;
    Ok(())
}

pub fn write_tsplib_string(inst: &Instance, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("NAME : {name}\n"));
    out.push_str("TYPE : TSP\n");
    out.push_str(&format!("DIMENSION : {}\n", inst.n()));
    out.push_str(&format!("EDGE_WEIGHT_TYPE : {}\n", inst.metric().name()));
    out.push_str("NODE_COORD_SECTION\n");
    for v in 0..inst.n() {
        let (x, y) = inst.coord(v);
        out.push_str(&format!("{} {} {}\n", v + 1, x, y));
    }
    out.push_str("EOF\n");
    out
}
