//! Uniform-grid k-nearest-neighbor index over a subset of instance vertices.
//!
//! The benchmark point sets are bounded-square distributed, so a uniform grid
//! with one expected member per cell answers nearest-neighbor queries in
//! near-constant time and rebuilds trivially per hierarchy level. Queries use
//! exact squared real distances (never the rounded integer metric) and break
//! ties by lower vertex id, so results are fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{Instance, VertexId};

/// Candidate ordered by `(squared distance, id)`, smallest first when wrapped
/// in `Reverse` or popped from the custom heap below.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    d2: f64,
    v: VertexId,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Reversed so that BinaryHeap pops the nearest candidate first.
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .d2
            .total_cmp(&self.d2)
            .then_with(|| other.v.cmp(&self.v))
    }
}

/// Immutable uniform grid over a member subset of an instance.
pub struct GridIndex<'a> {
    inst: &'a Instance,
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<VertexId>>,
    members: usize,
}

impl<'a> GridIndex<'a> {
    /// Builds an index over `members`; errors on an empty member set.
    pub fn build(inst: &'a Instance, members: &[VertexId]) -> Result<GridIndex<'a>> {
        if members.is_empty() {
            return Err(Error::contract("grid index over an empty member set"));
        }
        let mut min_x = f64::INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for &v in members {
            let (x, y) = inst.coord(v);
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
        let side = (max_x - min_x).max(max_y - min_y);
        let per_axis = (members.len() as f64).sqrt().ceil() as usize;
        let (cell, nx, ny) = if side > 0.0 {
            let cell = side / per_axis as f64;
            let nx = grid_extent(max_x - min_x, cell);
            let ny = grid_extent(max_y - min_y, cell);
            (cell, nx, ny)
        } else {
            // All members coincide; one bucket, linear scan.
            (1.0, 1, 1)
        };
        let mut cells = vec![Vec::new(); nx * ny];
        let mut sorted: Vec<VertexId> = members.to_vec();
        sorted.sort_unstable();
        for &v in &sorted {
            let (x, y) = inst.coord(v);
            let (ix, iy) = cell_of(x, y, min_x, min_y, cell, nx, ny);
            cells[iy * nx + ix].push(v);
        }
        Ok(GridIndex {
            inst,
            min_x,
            min_y,
            cell,
            nx,
            ny,
            cells,
            members: members.len(),
        })
    }

    /// Index over every vertex of the instance.
    pub fn build_all(inst: &'a Instance) -> GridIndex<'a> {
        let members: Vec<VertexId> = (0..inst.n()).collect();
        GridIndex::build(inst, &members).expect("instance has at least three vertices")
    }

    pub fn member_count(&self) -> usize {
        self.members
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// The `j` members nearest to `center` (excluding `center` itself),
    /// ordered by nondecreasing distance, ties by lower id. Returns fewer
    /// than `j` only when the member set is exhausted.
    pub fn query_knn(&self, center: VertexId, j: usize) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(j.min(self.members));
        let mut it = self.nearest_iter(center);
        while out.len() < j {
            match it.next() {
                Some((v, _)) => out.push(v),
                None => break,
            }
        }
        out
    }

    /// Streams members in nondecreasing distance from `center`, excluding
    /// `center`. `center` may be any instance vertex, member or not.
    pub fn nearest_iter(&self, center: VertexId) -> NearestIter<'_, 'a> {
        let (x, y) = self.inst.coord(center);
        let (ix, iy) = cell_of(x, y, self.min_x, self.min_y, self.cell, self.nx, self.ny);
        NearestIter {
            grid: self,
            center,
            cx: x,
            cy: y,
            home: (ix, iy),
            ring: 0,
            scanned_rings: 0,
            heap: BinaryHeap::new(),
        }
    }
}

fn grid_extent(span: f64, cell: f64) -> usize {
    ((span / cell).floor() as usize + 1).max(1)
}

fn cell_of(
    x: f64,
    y: f64,
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
) -> (usize, usize) {
    let ix = (((x - min_x) / cell).floor().max(0.0) as usize).min(nx - 1);
    let iy = (((y - min_y) / cell).floor().max(0.0) as usize).min(ny - 1);
    (ix, iy)
}

/// Expanding-ring nearest-first iterator. A candidate is emitted only once
/// every unscanned cell is provably farther, so the stream is a prefix of the
/// full brute-force ordering.
pub struct NearestIter<'g, 'a> {
    grid: &'g GridIndex<'a>,
    center: VertexId,
    cx: f64,
    cy: f64,
    home: (usize, usize),
    ring: usize,
    scanned_rings: usize,
    heap: BinaryHeap<Candidate>,
}

impl NearestIter<'_, '_> {
    fn scan_ring(&mut self, r: usize) {
        let g = self.grid;
        let (hx, hy) = self.home;
        let x_lo = hx.saturating_sub(r);
        let x_hi = (hx + r).min(g.nx - 1);
        let y_lo = hy.saturating_sub(r);
        let y_hi = (hy + r).min(g.ny - 1);
        for iy in y_lo..=y_hi {
            for ix in x_lo..=x_hi {
                // Exact ring membership; clipped rings must not re-scan
                // interior cells.
                let on_ring = r == 0
                    || (hx >= r && ix == hx - r)
                    || ix == hx + r
                    || (hy >= r && iy == hy - r)
                    || iy == hy + r;
                if !on_ring {
                    continue;
                }
                for &v in &g.cells[iy * g.nx + ix] {
                    if v == self.center {
                        continue;
                    }
                    let (x, y) = g.inst.coord(v);
                    let dx = x - self.cx;
                    let dy = y - self.cy;
                    self.heap.push(Candidate {
                        d2: dx * dx + dy * dy,
                        v,
                    });
                }
            }
        }
    }

    fn ring_exhausted(&self) -> bool {
        if self.scanned_rings == 0 {
            return false;
        }
        let g = self.grid;
        let (hx, hy) = self.home;
        let r = self.scanned_rings - 1;
        r >= hx && r >= hy && hx + r >= g.nx - 1 && hy + r >= g.ny - 1
    }
}

impl Iterator for NearestIter<'_, '_> {
    type Item = (VertexId, f64);

    fn next(&mut self) -> Option<(VertexId, f64)> {
        loop {
            // Everything within (scanned_rings - 1) * cell of the center is
            // already buffered: an unscanned cell lies at Chebyshev ring
            // > scanned_rings, hence at least that far away.
            if let Some(top) = self.heap.peek() {
                let safe = if self.scanned_rings == 0 {
                    -1.0
                } else {
                    let d = (self.scanned_rings - 1) as f64 * self.grid.cell;
                    d * d
                };
                // Strict: a point at exactly the safe radius could still be
                // beaten on the id tie rule by an unscanned point.
                if top.d2 < safe || self.ring_exhausted() {
                    let c = self.heap.pop().unwrap();
                    return Some((c.v, c.d2));
                }
            } else if self.ring_exhausted() {
                return None;
            }
            self.scan_ring(self.ring);
            self.ring += 1;
            self.scanned_rings = self.ring;
        }
    }
}

/// Grid with removal, used for nearest-unvisited scans during construction.
/// Same geometry and tie rules as [`GridIndex`].
pub(crate) struct MutableGrid {
    min_x: f64,
    min_y: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<VertexId>>,
    live: usize,
}

impl MutableGrid {
    pub(crate) fn build(inst: &Instance, members: &[VertexId]) -> MutableGrid {
        let idx = GridIndex::build(inst, members).expect("nonempty member set");
        MutableGrid {
            min_x: idx.min_x,
            min_y: idx.min_y,
            cell: idx.cell,
            nx: idx.nx,
            ny: idx.ny,
            cells: idx.cells,
            live: members.len(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.live
    }

    /// Removes and returns the member nearest to `(x, y)`, ties by lower id.
    pub(crate) fn pop_nearest(&mut self, inst: &Instance, x: f64, y: f64) -> Option<VertexId> {
        if self.live == 0 {
            return None;
        }
        let (hx, hy) = cell_of(x, y, self.min_x, self.min_y, self.cell, self.nx, self.ny);
        let mut best: Option<Candidate> = None;
        let mut r = 0usize;
        loop {
            let x_lo = hx.saturating_sub(r);
            let x_hi = (hx + r).min(self.nx - 1);
            let y_lo = hy.saturating_sub(r);
            let y_hi = (hy + r).min(self.ny - 1);
            for iy in y_lo..=y_hi {
                for ix in x_lo..=x_hi {
                    let on_ring = r == 0
                        || (hx >= r && ix == hx - r)
                        || ix == hx + r
                        || (hy >= r && iy == hy - r)
                        || iy == hy + r;
                    if !on_ring {
                        continue;
                    }
                    for &v in &self.cells[iy * self.nx + ix] {
                        let (px, py) = inst.coord(v);
                        let dx = px - x;
                        let dy = py - y;
                        let cand = Candidate {
                            d2: dx * dx + dy * dy,
                            v,
                        };
                        let better = match best {
                            None => true,
                            Some(b) => (cand.d2, cand.v) < (b.d2, b.v),
                        };
                        if better {
                            best = Some(cand);
                        }
                    }
                }
            }
            let exhausted =
                r >= hx && r >= hy && hx + r >= self.nx - 1 && hy + r >= self.ny - 1;
            if let Some(b) = best {
                let safe = r as f64 * self.cell;
                if b.d2 < safe * safe || exhausted {
                    self.remove(b.v, inst);
                    return Some(b.v);
                }
            } else if exhausted {
                return None;
            }
            r += 1;
        }
    }

    fn remove(&mut self, v: VertexId, inst: &Instance) {
        let (x, y) = inst.coord(v);
        let (ix, iy) = cell_of(x, y, self.min_x, self.min_y, self.cell, self.nx, self.ny);
        let bucket = &mut self.cells[iy * self.nx + ix];
        let at = bucket.iter().position(|&w| w == v).expect("member present");
        bucket.remove(at);
        self.live -= 1;
    }
}
