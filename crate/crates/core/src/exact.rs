//! Exact dynamic-programming solver for tiny (sub-)instances.
//!
//! Forced paths are contracted into rigid units first; the subset DP then
//! runs over units with an orientation bit each, so every forced adjacency is
//! honored by construction. Used as the test oracle and to finish hierarchy
//! levels that shrink below seventeen vertices.

use crate::destroy::SubProblem;
use crate::error::{Error, Result};
use crate::model::{Instance, Tour};
use crate::units::{build_units, vertex_tour_of, UnitTour};

/// Largest vertex count the subset DP accepts.
pub const HELD_KARP_MAX: usize = 16;

const INF: i64 = i64::MAX / 4;

/// Minimum-cost Hamiltonian cycle of a sub-problem, honoring every
/// temp-fixed edge. Errors above [`HELD_KARP_MAX`] vertices.
pub fn held_karp_forced(sub: &SubProblem) -> Result<Tour> {
    held_karp_instance(sub.instance())
}

/// [`held_karp_forced`] over a bare instance (forced edges included).
pub fn held_karp_instance(inst: &Instance) -> Result<Tour> {
    let n = inst.n();
    if n > HELD_KARP_MAX {
        return Err(Error::size_limit(format!(
            "exact solver accepts at most {HELD_KARP_MAX} vertices, got {n}"
        )));
    }
    let units = build_units(inst);
    let u = units.len();

    // Port vertex of unit `i` under orientation `o`: entry is the head when
    // not flipped; exit is the other end.
    let entry = |i: usize, o: usize| {
        if o == 0 {
            units.units[i].head()
        } else {
            units.units[i].tail()
        }
    };
    let exit = |i: usize, o: usize| {
        if o == 0 {
            units.units[i].tail()
        } else {
            units.units[i].head()
        }
    };
    let conn = |a: usize, oa: usize, b: usize, ob: usize| -> i64 {
        inst.edge_cost(exit(a, oa), entry(b, ob))
    };
    let internal: i64 = units.units.iter().map(|x| x.internal_cost).sum();

    if u == 1 {
        // One forced path covering everything: close it.
        let ut = UnitTour {
            seq: vec![0],
            flipped: vec![false],
        };
        return vertex_tour_of(inst, &units, &ut);
    }

    // dp[mask][last][orient]: cheapest path of connection costs that starts
    // at unit 0 (orientation fixed, WLOG for a symmetric metric), covers
    // `mask` and ends at `last` with `orient`.
    let states = 1usize << u;
    let idx = |mask: usize, last: usize, o: usize| (mask * u + last) * 2 + o;
    let mut dp = vec![INF; states * u * 2];
    let mut par = vec![u32::MAX; states * u * 2];
    for last in 1..u {
        for o in 0..2 {
            dp[idx(1 | (1 << last), last, o)] = conn(0, 0, last, o);
        }
    }
    for mask in 0..states {
        if mask & 1 == 0 {
            continue;
        }
        for last in 1..u {
            if mask & (1 << last) == 0 {
                continue;
            }
            for o in 0..2 {
                let cur = dp[idx(mask, last, o)];
                if cur >= INF {
                    continue;
                }
                for next in 1..u {
                    if mask & (1 << next) != 0 {
                        continue;
                    }
                    let nmask = mask | (1 << next);
                    for no in 0..2 {
                        let cand = cur + conn(last, o, next, no);
                        let slot = idx(nmask, next, no);
                        if cand < dp[slot] {
                            dp[slot] = cand;
                            par[slot] = (idx(mask, last, o)) as u32;
                        }
                    }
                }
            }
        }
    }

    let full = states - 1;
    let mut best = INF;
    let mut best_end = usize::MAX;
    for last in 1..u {
        for o in 0..2 {
            let cur = dp[idx(full, last, o)];
            if cur >= INF {
                continue;
            }
            let total = cur + conn(last, o, 0, 0);
            if total < best {
                best = total;
                best_end = idx(full, last, o);
            }
        }
    }
    if best >= INF {
        return Err(Error::contract(
            "fixed edges admit no Hamiltonian cycle",
        ));
    }

    // Reconstruct the unit sequence.
    let mut seq_rev = Vec::with_capacity(u);
    let mut flipped = vec![false; u];
    let mut slot = best_end;
    loop {
        let o = slot % 2;
        let last = (slot / 2) % u;
        seq_rev.push(last);
        flipped[last] = o == 1;
        let prev = par[slot];
        if prev == u32::MAX {
            break;
        }
        slot = prev as usize;
    }
    seq_rev.push(0);
    seq_rev.reverse();
    let ut = UnitTour {
        seq: seq_rev,
        flipped,
    };
    let tour = vertex_tour_of(inst, &units, &ut)?;
    debug_assert_eq!(tour.cost(), best + internal);
    Ok(tour)
}
