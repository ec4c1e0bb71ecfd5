//! Exact evaluation of closed grids whose vertices all lie in `𝒫`.

use crate::algebra::ExactValue;
use crate::classify::product::ParityUf;
use crate::classify::{membership_p, Membership};
use crate::error::{Error, Result};
use crate::grid::{Grid, SlotUse};

/// Partition function of a closed grid over `𝒫` signatures.
///
/// Pins, equalities and disequalities of every certificate become parity
/// relations between edge bits; each connected class then has at most two
/// consistent assignments, weighted by the unary factors that read it.
pub fn eval_product(grid: &Grid) -> Result<ExactValue> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let ne = grid.edges.len();
    // node `ne` is the constant 0
    let zero = ne;
    let mut uf = ParityUf::new(ne + 1);
    let mut scale = ExactValue::one();
    // (edge, negated, w0, w1): factor w0 if the literal is 0, else w1
    let mut unary: Vec<(usize, bool, ExactValue, ExactValue)> = Vec::new();
    for (v, uses) in grid.vertices.iter().zip(grid.slot_uses()) {
        let cert = match membership_p(&v.signature) {
            Err(Error::ZeroSignature) => return Ok(ExactValue::zero()),
            Err(e) => return Err(e),
            Ok(Membership::Refuted(_)) => return Err(Error::NonProductVertex(v.id.clone())),
            Ok(Membership::Member(c)) => c,
        };
        let lit = |p: usize| -> Result<(usize, bool)> {
            match uses[p] {
                SlotUse::Edge { edge, first } => Ok((edge, !first)),
                SlotUse::Dangling(_) => Err(Error::OpenGrid),
                SlotUse::Unused => Err(Error::InvalidGrid(format!("unused port {} of {}", p + 1, v.id))),
            }
        };
        scale *= &cert.lambda;
        for &(p, b) in &cert.pins {
            let (e, neg) = lit(p)?;
            if !uf.relate(e, zero, neg ^ b) {
                return Ok(ExactValue::zero());
            }
        }
        for g in &cert.groups {
            let root = g.ports[0].0;
            let (er, nr) = lit(root)?;
            for &(p, flip) in &g.ports[1..] {
                let (e, n) = lit(p)?;
                if !uf.relate(e, er, n ^ nr ^ flip) {
                    return Ok(ExactValue::zero());
                }
            }
            unary.push((er, nr, g.weights.0.clone(), g.weights.1.clone()));
        }
    }
    // per class root: [sum if root = 0, sum if root = 1]
    let mut class: Vec<Option<[ExactValue; 2]>> = vec![None; ne + 1];
    for e in 0..=ne {
        let (r, _) = uf.find(e);
        class[r].get_or_insert_with(|| [ExactValue::one(), ExactValue::one()]);
    }
    for (e, neg, w0, w1) in &unary {
        let (r, p) = uf.find(*e);
        let slot = class[r].as_mut().unwrap();
        for (x, acc) in slot.iter_mut().enumerate() {
            let bit = (x == 1) ^ p ^ neg;
            *acc *= if bit { w1 } else { w0 };
        }
    }
    let (zr, zp) = uf.find(zero);
    let mut total = scale;
    for (r, c) in class.into_iter().enumerate() {
        let Some([s0, s1]) = c else { continue };
        let factor = if r == zr {
            // the constant node is 0, so the root equals its parity
            if zp {
                s1
            } else {
                s0
            }
        } else {
            s0 + s1
        };
        total *= &factor;
    }
    Ok(total)
}
