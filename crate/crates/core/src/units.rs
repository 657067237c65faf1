//! Contraction of forced-edge paths into rigid units.
//!
//! Every operation that must preserve fixed edges (initial construction, the
//! repair engine, the exact oracle) works on the contracted cycle in which
//! each maximal forced path is one unit with two ports. Moves are generated
//! between units only, so a fixed edge can never be broken.

use crate::error::{Error, Result};
use crate::model::{Instance, Tour, VertexId};

/// A maximal forced path (or a single free vertex). `verts` lists the path in
/// order; `internal_cost` is the sum of its forced edge costs.
#[derive(Clone, Debug)]
pub struct Unit {
    pub verts: Vec<VertexId>,
    pub internal_cost: i64,
}

impl Unit {
    pub fn head(&self) -> VertexId {
        self.verts[0]
    }

    pub fn tail(&self) -> VertexId {
        *self.verts.last().unwrap()
    }

    pub fn is_singleton(&self) -> bool {
        self.verts.len() == 1
    }
}

/// The contracted view of an instance.
#[derive(Clone, Debug)]
pub struct Units {
    pub units: Vec<Unit>,
    /// Vertex id to the unit containing it.
    pub unit_of: Vec<usize>,
}

impl Units {
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

/// Builds the unit decomposition. Units are ordered by their smallest
/// endpoint id and each path starts at its lower-id endpoint, so the result
/// is deterministic.
pub fn build_units(inst: &Instance) -> Units {
    let n = inst.n();
    let mut unit_of = vec![usize::MAX; n];
    let mut units = Vec::new();
    for start in 0..n {
        if unit_of[start] != usize::MAX {
            continue;
        }
        let deg = inst.forced_degree(start);
        if deg == 0 {
            unit_of[start] = units.len();
            units.push(Unit {
                verts: vec![start],
                internal_cost: 0,
            });
            continue;
        }
        if deg == 2 {
            // Path interior; reached later from an endpoint.
            continue;
        }
        // Endpoint of a forced path: walk it to the other endpoint.
        let id = units.len();
        let mut verts = vec![start];
        let mut internal_cost = 0i64;
        unit_of[start] = id;
        let (mut cur, mut cost) = inst.forced_neighbors(start).next().unwrap();
        loop {
            internal_cost += cost;
            unit_of[cur] = id;
            verts.push(cur);
            let prev = verts[verts.len() - 2];
            match inst.forced_neighbors(cur).find(|&(w, _)| w != prev) {
                Some((next, c)) => {
                    cur = next;
                    cost = c;
                }
                None => break,
            }
        }
        units.push(Unit {
            verts,
            internal_cost,
        });
    }
    debug_assert!(unit_of.iter().all(|&u| u != usize::MAX));
    Units { units, unit_of }
}

/// A tour over units: the visiting order plus, per unit, whether it is
/// traversed in reverse of its stored path direction.
#[derive(Clone, Debug)]
pub struct UnitTour {
    pub seq: Vec<usize>,
    pub flipped: Vec<bool>,
}

/// Extracts the unit tour induced by a vertex tour. Errors if any unit's
/// vertices are not contiguous in the cycle, i.e. the tour breaks a forced
/// path.
pub fn unit_tour_of(units: &Units, tour: &Tour) -> Result<UnitTour> {
    let n = tour.len();

    if units.len() == 1 {
        // One forced path covering everything: the cycle must equal the path
        // in one direction or the other.
        let unit = &units.units[0];
        let start = tour.position(unit.head());
        let forward = (0..n).all(|k| tour.at((start + k) % n) == unit.verts[k]);
        let backward = (0..n).all(|k| tour.at((start + n - k) % n) == unit.verts[k]);
        if !forward && !backward {
            return Err(Error::contract("tour breaks the single forced path"));
        }
        return Ok(UnitTour {
            seq: vec![0],
            flipped: vec![backward && !forward],
        });
    }

    // Start the scan at a unit boundary so that no unit straddles the wrap
    // of the order array.
    let begin = (0..n)
        .find(|&i| {
            let prev = tour.at(if i == 0 { n - 1 } else { i - 1 });
            units.unit_of[tour.at(i)] != units.unit_of[prev]
        })
        .ok_or_else(|| Error::contract("tour never leaves a single unit"))?;

    let mut seq = Vec::with_capacity(units.len());
    let mut flipped = vec![false; units.len()];
    let mut i = 0usize;
    while i < n {
        let v = tour.at((begin + i) % n);
        let u = units.unit_of[v];
        let unit = &units.units[u];
        let len = unit.verts.len();
        if len == 1 {
            seq.push(u);
            i += 1;
            continue;
        }
        // The unit must appear as a contiguous run starting here, in either
        // direction.
        let forward = v == unit.head();
        let backward = v == unit.tail();
        if !forward && !backward {
            return Err(Error::contract(format!(
                "tour enters forced path mid-way at vertex {v}"
            )));
        }
        let mut dir_forward = forward;
        if forward && backward {
            // Cannot happen: a multi-vertex path has distinct endpoints.
            dir_forward = true;
        }
        for k in 0..len {
            let expect = if dir_forward {
                unit.verts[k]
            } else {
                unit.verts[len - 1 - k]
            };
            let at = (begin + i + k) % n;
            if tour.at(at) != expect {
                return Err(Error::contract(format!(
                    "tour breaks forced path of unit {u} near vertex {v}"
                )));
            }
        }
        flipped[u] = !dir_forward;
        seq.push(u);
        i += len;
    }
    if seq.len() != units.len() {
        return Err(Error::contract(
            "tour does not traverse every unit exactly once",
        ));
    }
    Ok(UnitTour { seq, flipped })
}

/// Expands a unit tour back to a vertex tour over `inst`.
pub fn vertex_tour_of(inst: &Instance, units: &Units, ut: &UnitTour) -> Result<Tour> {
    let mut order = Vec::with_capacity(inst.n());
    for &u in &ut.seq {
        let unit = &units.units[u];
        if ut.flipped[u] {
            order.extend(unit.verts.iter().rev().copied());
        } else {
            order.extend(unit.verts.iter().copied());
        }
    }
    Tour::new(inst, order)
}
