//! Reductions to EO signatures: restriction of `EO≥`/`EO≤` signatures and
//! padding of single-weighted ones.

use serde::Serialize;

use crate::algebra::ExactValue;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signature::{hamming, is_balanced, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Weight {
    Single(usize),
    Mixed,
    /// Identically zero.
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeightProfile {
    pub arity: usize,
    pub weight: Weight,
}

impl WeightProfile {
    pub fn is_single_weighted(&self) -> bool {
        matches!(self.weight, Weight::Single(_))
    }

    pub fn is_eo(&self) -> bool {
        matches!(self.weight, Weight::Single(d) if 2 * d == self.arity)
    }
}

pub fn weight_profile(f: &Signature) -> WeightProfile {
    let mut weight = Weight::Empty;
    for a in f.support() {
        let w = hamming(a);
        weight = match weight {
            Weight::Empty => Weight::Single(w),
            Weight::Single(d) if d == w => Weight::Single(d),
            _ => {
                weight = Weight::Mixed;
                break;
            }
        };
    }
    WeightProfile {
        arity: f.arity(),
        weight,
    }
}

/// `f` on balanced strings, zero elsewhere; odd arity gives the zero signature.
pub fn restrict_eo(f: &Signature) -> Signature {
    let k = f.arity();
    let mut out = f.restrict_to(|a| is_balanced(a, k));
    out.set_name(f.name().map(|n| format!("{n}|EO")));
    out
}

/// `f ⊗ Δ₀^{2d−k}` when `2d > k`, `f ⊗ Δ₁^{k−2d}` when `2d < k`, `f` itself
/// when balanced. Padding ports follow `f`'s ports and are labelled
/// `pad1`, `pad2`, ….
pub fn pad_to_eo(f: &Signature) -> Result<Signature> {
    let p = weight_profile(f);
    let d = match p.weight {
        Weight::Single(d) => d,
        Weight::Mixed => return Err(Error::MixedWeights),
        Weight::Empty => return Err(Error::ZeroSignature),
    };
    let k = f.arity();
    let (pad, count) = if 2 * d > k {
        (Signature::delta0(), 2 * d - k)
    } else {
        (Signature::delta1(), k - 2 * d)
    };
    if count == 0 {
        return Ok(f.clone());
    }
    let mut out = f.clone();
    for _ in 0..count {
        out = out.tensor(&pad)?;
    }
    let mut ports = f.ports().to_vec();
    ports.extend((1..=count).map(|t| format!("pad{t}")));
    let out = out.with_ports(ports)?;
    let name = f.name().map(|n| format!("{n}->EO"));
    let mut out = out;
    out.set_name(name);
    Ok(out)
}

/// Replace every vertex signature by its EO restriction.
pub fn grid_restrict_eo(grid: &Grid) -> Grid {
    let mut g = grid.clone();
    for v in g.vertices.iter_mut() {
        v.signature = restrict_eo(&v.signature);
    }
    g
}

/// Pad every vertex of a closed grid over single-weighted signatures (unary
/// `Δ₀`/`Δ₁` included) to an EO signature, then join each new zero-pinned
/// port to a one-pinned port by a fresh edge. `Δ₀` becomes `Δ` and `Δ₁` the
/// reversed `Δ` under this rule.
pub fn grid_pad_single_weighted(grid: &Grid) -> Result<Grid> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let mut out = grid.clone();
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (i, v) in out.vertices.iter_mut().enumerate() {
        let k = v.signature.arity();
        let padded = pad_to_eo(&v.signature)?;
        let extra = padded.arity() - k;
        let zero_pad = match weight_profile(&v.signature).weight {
            Weight::Single(d) => 2 * d > k,
            _ => unreachable!("pad_to_eo accepted it"),
        };
        for p in k..k + extra {
            if zero_pad {
                zeros.push((i, p));
            } else {
                ones.push((i, p));
            }
        }
        v.signature = padded;
    }
    if zeros.len() != ones.len() {
        return Err(Error::UnbalancedPadding {
            delta0: zeros.len(),
            delta1: ones.len(),
        });
    }
    for ((u, p), (w, q)) in zeros.into_iter().zip(ones) {
        out.connect(u, p, w, q);
    }
    Ok(out)
}

/// Grid whose partition function is 0.
pub fn zero_grid() -> Grid {
    let mut g = Grid::new();
    g.add_vertex("zero", Signature::constant(ExactValue::zero()).with_name("zero"));
    g
}

/// [`grid_pad_single_weighted`], mapping the infeasible cases to the zero grid.
/// The second component carries the diagnostic when that happens.
pub fn grid_pad_or_zero(grid: &Grid) -> Result<(Grid, Option<Error>)> {
    match grid_pad_single_weighted(grid) {
        Ok(g) => Ok((g, None)),
        Err(e @ (Error::UnbalancedPadding { .. } | Error::ZeroSignature)) => Ok((zero_grid(), Some(e))),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> ExactValue {
        ExactValue::from_int(n)
    }

    #[test]
    fn restrict_examples() {
        let all = Signature::symmetric(&[v(1), v(1), v(1)]).unwrap();
        assert_eq!(restrict_eo(&all), Signature::neq2());
        let d4 = Signature::diseq(4).unwrap();
        assert_eq!(restrict_eo(&d4), d4);
        let odd = Signature::symmetric(&[v(1), v(2), v(3), v(4)]).unwrap();
        assert!(restrict_eo(&odd).is_zero());
    }

    #[test]
    fn pad_examples() {
        let p = pad_to_eo(&Signature::delta1()).unwrap();
        assert_eq!(p.support(), vec![1]); // "10"
        assert!(p.is_eo());
        let d4 = Signature::diseq(4).unwrap();
        assert_eq!(pad_to_eo(&d4).unwrap(), d4);
        let w1 = Signature::symmetric(&[v(0), v(1), v(0), v(0)]).unwrap();
        let p = pad_to_eo(&w1).unwrap();
        assert_eq!(p, w1.tensor(&Signature::delta1()).unwrap());
        assert_eq!(p.ports()[3], "pad1");
        assert_eq!(pad_to_eo(&Signature::symmetric(&[v(1), v(1)]).unwrap()), Err(Error::MixedWeights));
        assert_eq!(pad_to_eo(&Signature::delta0()).unwrap(), Signature::delta());
    }

    #[test]
    fn grid_pad_examples() {
        let mut g = Grid::new();
        let a = g.add_vertex("a", Signature::delta1());
        let b = g.add_vertex("b", Signature::delta0());
        g.connect(a, 0, b, 0);
        let z = g.brute_force_partition().unwrap();
        assert_eq!(z, v(1));
        let p = grid_pad_single_weighted(&g).unwrap();
        assert!(p.validate().all_eo);
        assert_eq!(p.brute_force_partition().unwrap(), z);

        let mut h = Grid::new();
        let a = h.add_vertex("a", Signature::diseq(4).unwrap());
        h.connect(a, 0, a, 2);
        h.connect(a, 1, a, 3);
        assert_eq!(grid_pad_single_weighted(&h).unwrap(), h);

        let mut bad = Grid::new();
        let a = bad.add_vertex("a", Signature::delta1());
        let b = bad.add_vertex("b", Signature::delta1());
        bad.connect(a, 0, b, 0);
        assert!(matches!(grid_pad_single_weighted(&bad), Err(Error::UnbalancedPadding { .. })));
        let (zg, diag) = grid_pad_or_zero(&bad).unwrap();
        assert!(diag.is_some());
        assert!(zg.brute_force_partition().unwrap().is_zero());
        assert!(bad.brute_force_partition().unwrap().is_zero());
    }
}
