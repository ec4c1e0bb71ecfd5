//! Depth-first enumeration of internal-edge orientations.
//!
//! Edge `e` joining slots `(s, t)` carries one bit `y_e`: slot `s` reads
//! `y_e`, slot `t` reads `1 − y_e`. Dangling slots read externally supplied
//! bits. Vertices are evaluated as soon as their last edge is fixed, and a
//! zero value prunes the branch.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::{Grid, SlotUse};
use crate::algebra::ExactValue;
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

static ENUMERATION_CAP: AtomicU64 = AtomicU64::new(DEFAULT_ENUMERATION_CAP);

pub fn enumeration_cap() -> u64 {
    ENUMERATION_CAP.load(Ordering::Relaxed)
}

pub fn set_enumeration_cap(cap: u64) {
    ENUMERATION_CAP.store(cap.max(1), Ordering::Relaxed);
}

// Below this many edges the search runs on one thread.
const PARALLEL_EDGES: usize = 14;
const SPLIT_DEPTH: usize = 5;

pub(crate) struct Plan {
    pub order: Vec<usize>,
    /// `ready[k]`: vertices whose slots are all determined once the first `k`
    /// edges of `order` are fixed (and not earlier).
    pub ready: Vec<Vec<usize>>,
    pub sources: Vec<Vec<SlotUse>>,
}

impl Plan {
    pub fn new(grid: &Grid) -> Plan {
        let sources = grid.slot_uses();
        let nv = grid.vertices.len();
        let ne = grid.edges.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (e, (s, t)) in grid.edges.iter().enumerate() {
            incident[s.vertex].push(e);
            if t.vertex != s.vertex {
                incident[t.vertex].push(e);
            }
        }
        // Breadth-first over vertices so neighbouring vertices complete early.
        let mut order = Vec::with_capacity(ne);
        let mut edge_done = vec![false; ne];
        let mut seen = vec![false; nv];
        for start in 0..nv {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &e in &incident[v] {
                    if !edge_done[e] {
                        edge_done[e] = true;
                        order.push(e);
                    }
                    let (s, t) = grid.edges[e];
                    for w in [s.vertex, t.vertex] {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let mut position = vec![0usize; ne];
        for (k, &e) in order.iter().enumerate() {
            position[e] = k + 1;
        }
        let mut ready = vec![Vec::new(); ne + 1];
        for (v, inc) in incident.iter().enumerate() {
            let last = inc.iter().map(|&e| position[e]).max().unwrap_or(0);
            ready[last].push(v);
        }
        Plan {
            order,
            ready,
            sources,
        }
    }

    pub fn local_index(&self, v: usize, y: &[bool], ext: &[bool]) -> u32 {
        let mut a = 0u32;
        for (p, src) in self.sources[v].iter().enumerate() {
            let bit = match *src {
                SlotUse::Edge { edge, first } => y[edge] == first,
                SlotUse::Dangling(k) => ext[k],
                SlotUse::Unused => false,
            };
            a |= (bit as u32) << p;
        }
        a
    }
}

struct Counter {
    nodes: AtomicU64,
    cap: u64,
}

impl Counter {
    fn tick(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cap {
            Err(Error::EnumerationCap(self.cap))
        } else {
            Ok(())
        }
    }
}

/// Weighted sum over all orientations, with the dangling bits fixed to `ext`.
pub(crate) fn sum(grid: &Grid, plan: &Plan, ext: &[bool]) -> Result<ExactValue> {
    sum_with(plan, ext, &|v, a| grid.vertices[v].signature.value(a).clone())
}

/// As [`sum`], with vertex values supplied by `weight(vertex, local index)`.
pub(crate) fn sum_with<W>(plan: &Plan, ext: &[bool], weight: &W) -> Result<ExactValue>
where
    W: Fn(usize, u32) -> ExactValue + Sync,
{
    let counter = Counter {
        nodes: AtomicU64::new(0),
        cap: enumeration_cap(),
    };
    let ne = plan.order.len();
    let mut y = vec![false; ne];
    let mut acc = ExactValue::one();
    for &v in &plan.ready[0] {
        let w = weight(v, plan.local_index(v, &y, ext));
        if w.is_zero() {
            return Ok(ExactValue::zero());
        }
        acc *= &w;
    }
    if ne == 0 {
        return Ok(acc);
    }
    if ne < PARALLEL_EDGES {
        return rec(plan, ext, weight, &counter, 0, &mut y, &acc);
    }
    // Collect live prefixes of the first few edges, then finish them in parallel.
    let depth = SPLIT_DEPTH.min(ne);
    let mut prefixes = Vec::new();
    collect_prefixes(plan, ext, weight, &counter, 0, depth, &mut y, acc, &mut prefixes)?;
    let parts: Result<Vec<ExactValue>> = prefixes
        .into_par_iter()
        .map(|(mut y, acc)| rec(plan, ext, weight, &counter, depth, &mut y, &acc))
        .collect();
    Ok(parts?.into_iter().sum())
}

fn step<W>(plan: &Plan, ext: &[bool], weight: &W, k: usize, y: &[bool], acc: &ExactValue) -> Option<ExactValue>
where
    W: Fn(usize, u32) -> ExactValue,
{
    let mut acc = acc.clone();
    for &v in &plan.ready[k + 1] {
        let w = weight(v, plan.local_index(v, y, ext));
        if w.is_zero() {
            return None;
        }
        acc *= &w;
    }
    Some(acc)
}

#[allow(clippy::too_many_arguments)]
fn collect_prefixes<W>(
    plan: &Plan,
    ext: &[bool],
    weight: &W,
    counter: &Counter,
    k: usize,
    depth: usize,
    y: &mut Vec<bool>,
    acc: ExactValue,
    out: &mut Vec<(Vec<bool>, ExactValue)>,
) -> Result<()>
where
    W: Fn(usize, u32) -> ExactValue,
{
    if k == depth {
        out.push((y.clone(), acc));
        return Ok(());
    }
    let e = plan.order[k];
    for bit in [false, true] {
        counter.tick()?;
        y[e] = bit;
        if let Some(next) = step(plan, ext, weight, k, y, &acc) {
            collect_prefixes(plan, ext, weight, counter, k + 1, depth, y, next, out)?;
        }
    }
    y[e] = false;
    Ok(())
}

fn rec<W>(
    plan: &Plan,
    ext: &[bool],
    weight: &W,
    counter: &Counter,
    k: usize,
    y: &mut Vec<bool>,
    acc: &ExactValue,
) -> Result<ExactValue>
where
    W: Fn(usize, u32) -> ExactValue,
{
    if k == plan.order.len() {
        return Ok(acc.clone());
    }
    let e = plan.order[k];
    let mut total = ExactValue::zero();
    for bit in [false, true] {
        counter.tick()?;
        y[e] = bit;
        if let Some(next) = step(plan, ext, weight, k, y, acc) {
            total += &rec(plan, ext, weight, counter, k + 1, y, &next)?;
        }
    }
    y[e] = false;
    Ok(total)
}

/// First orientation (edge bits indexed by edge id) such that every vertex
/// accepts its local string. Dangling bits are `ext`.
pub(crate) fn find<A>(plan: &Plan, ext: &[bool], accept: &A) -> Result<Option<Vec<bool>>>
where
    A: Fn(usize, u32) -> bool,
{
    let counter = Counter {
        nodes: AtomicU64::new(0),
        cap: enumeration_cap(),
    };
    let mut y = vec![false; plan.order.len()];
    for &v in &plan.ready[0] {
        if !accept(v, plan.local_index(v, &y, ext)) {
            return Ok(None);
        }
    }
    if find_rec(plan, ext, accept, &counter, 0, &mut y)? {
        Ok(Some(y))
    } else {
        Ok(None)
    }
}

fn find_rec<A>(
    plan: &Plan,
    ext: &[bool],
    accept: &A,
    counter: &Counter,
    k: usize,
    y: &mut Vec<bool>,
) -> Result<bool>
where
    A: Fn(usize, u32) -> bool,
{
    if k == plan.order.len() {
        return Ok(true);
    }
    let e = plan.order[k];
    for bit in [false, true] {
        counter.tick()?;
        y[e] = bit;
        let ok = plan.ready[k + 1]
            .iter()
            .all(|&v| accept(v, plan.local_index(v, y, ext)));
        if ok && find_rec(plan, ext, accept, counter, k + 1, y)? {
            return Ok(true);
        }
    }
    y[e] = false;
    Ok(false)
}
