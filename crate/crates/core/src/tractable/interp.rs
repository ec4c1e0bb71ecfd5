//! Removing `Δ` occurrences by polynomial interpolation and by the
//! single-pin two-equation trick.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{vandermonde_solve, ExactValue, RootOrder};
use crate::error::{Error, Result};
use crate::grid::{DeltaOccurrence, Grid, Slot};
use crate::signature::{BinaryDiseq, Signature};

/// Root-order cap used when deciding that an interpolation node is not a
/// root of unity.
const ROOT_CAP: u64 = 1 << 16;

fn check_node(x: &ExactValue) -> Result<()> {
    if x.is_zero() {
        return Err(Error::NotInterpolatable("x = 0".into()));
    }
    match x.root_order(ROOT_CAP)? {
        RootOrder::NotRoot => Ok(()),
        RootOrder::Root(k) => Err(Error::NotInterpolatable(format!("{x} is a root of unity of order {k}"))),
        other => Err(Error::NotInterpolatable(format!("{x}: {other:?}"))),
    }
}

/// Binary weight replacing a `Δ` occurrence: the forced slot keeps weight 1,
/// the other gets `a`.
fn replacement(occ: &DeltaOccurrence, a: &ExactValue) -> Signature {
    let d = if occ.one_port == 1 {
        BinaryDiseq::new(ExactValue::one(), a.clone())
    } else {
        BinaryDiseq::new(a.clone(), ExactValue::one())
    };
    d.to_signature()
}

/// `Z` of a closed grid whose `Δ` vertices are evaluated at weight 0 on the
/// unforced side, computed from `m + 1` evaluations with `Δ ↦ ≠₂^{1,x^j}`.
pub fn interpolate_delta(grid: &Grid, x: &ExactValue) -> Result<ExactValue> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let occ = grid.delta_occurrences();
    if occ.is_empty() {
        return grid.brute_force_partition();
    }
    check_node(x)?;
    let m = occ.len();
    let nodes: Vec<ExactValue> = (1..=m as u64 + 1).map(|j| x.pow(j)).collect();
    let rhs = nodes
        .par_iter()
        .map(|a| {
            let mut g = grid.clone();
            for o in &occ {
                g.vertices[o.vertex].signature = replacement(o, a);
            }
            g.brute_force_partition()
        })
        .collect::<Result<Vec<_>>>()?;
    let c = vandermonde_solve(&nodes, &rhs)?;
    Ok(c[0].clone())
}

/// Same as [`interpolate_delta`], but every `≠₂^{1,x^j}` is realized by a
/// path of `j` copies of an open binary gadget with signature `≠₂^{a,b}`,
/// `x = b/a`. Each evaluation is rescaled by `a^{-jm}`.
pub fn interpolate_delta_with_gadget(grid: &Grid, gadget: &Grid) -> Result<ExactValue> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let sig = gadget.gate_signature()?;
    let bin = sig
        .as_binary_diseq()
        .ok_or_else(|| Error::NotInterpolatable("gadget is not a binary disequality".into()))?;
    if bin.a.is_zero() {
        return Err(Error::NotInterpolatable("gadget has zero weight on 01".into()));
    }
    let x = bin.b.checked_div(&bin.a)?;
    let occ = grid.delta_occurrences();
    if occ.is_empty() {
        return grid.brute_force_partition();
    }
    check_node(&x)?;
    let m = occ.len() as u64;
    let mut reversed = gadget.clone();
    reversed.dangling.swap(0, 1);
    let js: Vec<u64> = (1..=m + 1).collect();
    let rhs = js
        .par_iter()
        .map(|&j| {
            let fwd = Grid::chain(&vec![gadget.clone(); j as usize])?;
            let rev = Grid::chain(&vec![reversed.clone(); j as usize])?;
            // splice from the highest index so earlier indices stay put
            let mut order = occ.clone();
            order.sort_by_key(|o| std::cmp::Reverse(o.vertex));
            let mut g = grid.clone();
            for o in &order {
                g = g.splice(o.vertex, if o.one_port == 1 { &fwd } else { &rev })?;
            }
            let z = g.brute_force_partition()?;
            z.checked_div(&bin.a.pow(j * m))
        })
        .collect::<Result<Vec<_>>>()?;
    let nodes: Vec<ExactValue> = js.iter().map(|&j| x.pow(j)).collect();
    let c = vandermonde_solve(&nodes, &rhs)?;
    Ok(c[0].clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleDeltaReport {
    pub value: ExactValue,
    /// `Δ` replaced by `≠₂`.
    pub z3: ExactValue,
    pub all_dsym: bool,
    /// Asymmetric gate `≠₂^{a,b}` and the value with `Δ` replaced by it.
    pub gate: Option<BinaryDiseq>,
    pub gate_vertices: Option<usize>,
    pub z4: Option<ExactValue>,
    pub gates_tried: u64,
}

/// Largest number of vertices in a searched binary gate.
pub const DEFAULT_GATE_BOUND: usize = 3;
const GATE_BUDGET: u64 = 200_000;

fn is_dsym(f: &Signature) -> bool {
    f.dual().values() == f.values()
}

/// Perfect matchings of `ports`, each reported as a list of pairs.
fn for_each_matching(ports: &[Slot], acc: &mut Vec<(Slot, Slot)>, visit: &mut dyn FnMut(&[(Slot, Slot)]) -> bool) -> bool {
    let Some((&first, rest)) = ports.split_first() else {
        return visit(acc);
    };
    for i in 0..rest.len() {
        let mut remaining = rest.to_vec();
        let partner = remaining.remove(i);
        acc.push((first, partner));
        let stop = for_each_matching(&remaining, acc, visit);
        acc.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Multisets of size `n` over `0..k`, nondecreasing.
fn multisets(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(k, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Searches open binary gates built from `set` with at most `bound`
/// vertices for one whose signature is `≠₂^{a,b}` with `a ≠ b`.
pub fn find_asymmetric_gate(set: &[Signature], bound: usize) -> (Option<(Grid, BinaryDiseq)>, u64) {
    let mut tried = 0u64;
    for n in 1..=bound {
        for pick in multisets(set.len(), n) {
            let total: usize = pick.iter().map(|&i| set[i].arity()).sum();
            if total % 2 == 1 || total < 2 {
                continue;
            }
            let mut base = Grid::new();
            for (k, &i) in pick.iter().enumerate() {
                base.add_vertex(format!("g{k}"), set[i].clone());
            }
            let ports: Vec<Slot> = base
                .vertices
                .iter()
                .enumerate()
                .flat_map(|(v, vert)| (0..vert.signature.arity()).map(move |p| Slot::new(v, p)))
                .collect();
            let mut found = None;
            'pairs: for i in 0..ports.len() {
                for j in i + 1..ports.len() {
                    let rest: Vec<Slot> = ports
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, s)| *s)
                        .collect();
                    let mut visit = |m: &[(Slot, Slot)]| -> bool {
                        tried += 1;
                        if tried > GATE_BUDGET {
                            return true;
                        }
                        let mut g = base.clone();
                        g.edges = m.to_vec();
                        g.dangling = vec![ports[i], ports[j]];
                        if let Ok(sig) = g.gate_signature() {
                            if let Some(bin) = sig.as_binary_diseq() {
                                if bin.a != bin.b {
                                    found = Some((g, bin));
                                    return true;
                                }
                            }
                        }
                        false
                    };
                    if for_each_matching(&rest, &mut Vec::new(), &mut visit) {
                        break 'pairs;
                    }
                }
            }
            if found.is_some() {
                return (found, tried);
            }
            if tried > GATE_BUDGET {
                return (None, tried);
            }
        }
    }
    (None, tried)
}

pub fn reduce_single_delta(grid: &Grid) -> Result<ExactValue> {
    Ok(reduce_single_delta_report(grid, DEFAULT_GATE_BOUND)?.value)
}

/// Evaluates a grid with exactly one `Δ` using only `Δ`-free evaluations.
pub fn reduce_single_delta_report(grid: &Grid, bound: usize) -> Result<SingleDeltaReport> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let occ = grid.delta_occurrences();
    let [o] = occ[..] else {
        return Err(Error::PreconditionViolated(format!(
            "expected exactly one Δ occurrence, found {}",
            occ.len()
        )));
    };
    let z3 = grid.with_signature(o.vertex, Signature::neq2()).brute_force_partition()?;
    let mut set: Vec<Signature> = Vec::new();
    for (i, v) in grid.vertices.iter().enumerate() {
        if i != o.vertex && !set.iter().any(|s| s.values() == v.signature.values() && s.arity() == v.signature.arity()) {
            set.push(v.signature.clone());
        }
    }
    let all_dsym = set.iter().all(is_dsym);
    let mut report = SingleDeltaReport {
        value: ExactValue::zero(),
        z3: z3.clone(),
        all_dsym,
        gate: None,
        gate_vertices: None,
        z4: None,
        gates_tried: 0,
    };
    if all_dsym {
        report.value = z3.checked_div(&ExactValue::from_int(2))?;
        return Ok(report);
    }
    let (found, tried) = find_asymmetric_gate(&set, bound);
    report.gates_tried = tried;
    let Some((gate, bin)) = found else {
        return Err(Error::NoAsymmetricGateFound(bound));
    };
    let z4 = grid.splice(o.vertex, &gate)?.brute_force_partition()?;
    let diff = &bin.a - &bin.b;
    // z3 = Z01 + Z10, z4 = a·Z01 + b·Z10
    let value = if o.one_port == 1 {
        (&z4 - &(&bin.b * &z3)).checked_div(&diff)?
    } else {
        (&(&bin.a * &z3) - &z4).checked_div(&diff)?
    };
    report.value = value;
    report.gate_vertices = Some(gate.vertices.len());
    report.gate = Some(bin);
    report.z4 = Some(z4);
    Ok(report)
}

/// Open gate with `2k` dangling slots realizing `Δ^{⊗k}` from one `Δ` and
/// one `≠_{2k+2}`.
pub fn realize_delta_copies(k: usize) -> Result<Grid> {
    if k == 0 {
        return Err(Error::PreconditionViolated("k must be positive".into()));
    }
    let mut g = Grid::new();
    let p = g.add_vertex("pin", Signature::delta());
    let d = g.add_vertex("d", Signature::diseq(2 * k + 2)?);
    g.connect(p, 0, d, 0);
    g.connect(p, 1, d, k + 1);
    for i in 1..=k {
        g.dangle(d, k + 1 + i);
        g.dangle(d, i);
    }
    Ok(g)
}
