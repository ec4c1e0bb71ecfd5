//! `b`-rebalancing: for every port `x` some partner `y` never shares the value
//! `b` with `x` on the support, and the residual with `x = b, y = 1 − b`
//! pinned is again `b`-rebalancing. Arity 0 imposes nothing.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RebalanceFailure {
    /// Pins `(x, y)` applied on the way down, as port labels.
    pub path: Vec<(String, String)>,
    /// Port of the final residual that has no valid partner.
    pub port: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RebalanceReport {
    pub b: u8,
    pub holds: bool,
    /// Top-level partner map `x ↦ ψ(x)` when the property holds.
    pub psi: Vec<(String, String)>,
    pub failure: Option<RebalanceFailure>,
}

type Memo = HashMap<(usize, Vec<u32>), bool>;

fn partner_ok(supp: &[u32], x: usize, y: usize, b: bool) -> bool {
    let bb = b as u32;
    !supp.iter().any(|a| (a >> x & 1) == bb && (a >> y & 1) == bb)
}

fn residual(f: &Signature, x: usize, y: usize, b: bool) -> Signature {
    f.fix(&[(x, b), (y, !b)]).expect("ports checked by caller")
}

fn holds(f: &Signature, b: bool, memo: &mut Memo) -> bool {
    let k = f.arity();
    if k == 0 {
        return true;
    }
    let supp = f.support();
    let key = (k, supp.clone());
    if let Some(&r) = memo.get(&key) {
        return r;
    }
    let r = (0..k).all(|x| {
        (0..k).any(|y| y != x && partner_ok(&supp, x, y, b) && holds(&residual(f, x, y, b), b, memo))
    });
    memo.insert(key, r);
    r
}

fn explain(f: &Signature, b: bool, memo: &mut Memo, path: &mut Vec<(String, String)>) -> String {
    let k = f.arity();
    let supp = f.support();
    for x in 0..k {
        let candidates: Vec<usize> = (0..k).filter(|&y| y != x && partner_ok(&supp, x, y, b)).collect();
        if candidates.is_empty() {
            return f.ports()[x].clone();
        }
        if candidates.iter().all(|&y| !holds(&residual(f, x, y, b), b, memo)) {
            let y = candidates[0];
            path.push((f.ports()[x].clone(), f.ports()[y].clone()));
            return explain(&residual(f, x, y, b), b, memo, path);
        }
    }
    unreachable!("explain called on a rebalancing signature")
}

pub fn is_rebalancing(f: &Signature, b: u8) -> Result<RebalanceReport> {
    f.require_eo()?;
    let bit = b != 0;
    let mut memo = Memo::new();
    let ok = holds(f, bit, &mut memo);
    let mut report = RebalanceReport {
        b,
        holds: ok,
        psi: Vec::new(),
        failure: None,
    };
    if ok {
        let supp = f.support();
        for x in 0..f.arity() {
            let y = (0..f.arity())
                .find(|&y| y != x && partner_ok(&supp, x, y, bit) && holds(&residual(f, x, y, bit), bit, &mut memo))
                .unwrap();
            report.psi.push((f.ports()[x].clone(), f.ports()[y].clone()));
        }
    } else {
        let mut path = Vec::new();
        let port = explain(f, bit, &mut memo, &mut path);
        report.failure = Some(RebalanceFailure { path, port });
    }
    Ok(report)
}
