//! Perfect pairings of ports, `EO^P` restriction, and the `τ`/`π` maps.

use std::fmt;

use serde::Serialize;

use super::nontrivial_eo;
use crate::algebra::ExactValue;
use crate::error::{Error, Result};
use crate::signature::Signature;

pub const PAIRING_ARITY_CAP: usize = 12;

/// Perfect matching of ports `0..2d`; pairs are stored `(p, q)` with `p < q`,
/// sorted by `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pairing(pub Vec<(usize, usize)>);

impl Pairing {
    /// `{(0,1), (2,3), …}`.
    pub fn natural(d: usize) -> Pairing {
        Pairing((0..d).map(|i| (2 * i, 2 * i + 1)).collect())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    /// Mask of strings in `EO^P`: every pair takes opposite values.
    pub fn admits(&self, alpha: u32) -> bool {
        self.0.iter().all(|&(p, q)| (alpha >> p & 1) != (alpha >> q & 1))
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(p, q)| format!("(x{},x{})", p + 1, q + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Pairing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All perfect matchings of `0..n` where `allowed(p, q)` holds for each pair.
pub fn matchings_where(n: usize, allowed: &dyn Fn(usize, usize) -> bool) -> Vec<Pairing> {
    fn go(
        free: u32,
        allowed: &dyn Fn(usize, usize) -> bool,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Pairing>,
    ) {
        if free == 0 {
            out.push(Pairing(cur.clone()));
            return;
        }
        let p = free.trailing_zeros() as usize;
        let rest = free & !(1 << p);
        let mut r = rest;
        while r != 0 {
            let q = r.trailing_zeros() as usize;
            r &= r - 1;
            if allowed(p, q) {
                cur.push((p, q));
                go(rest & !(1 << q), allowed, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        let free = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
        go(free, allowed, &mut Vec::new(), &mut out);
    }
    out
}

pub fn all_pairings(n: usize) -> Result<Vec<Pairing>> {
    if n > PAIRING_ARITY_CAP {
        return Err(Error::CapExceeded {
            arity: n,
            cap: PAIRING_ARITY_CAP,
        });
    }
    Ok(matchings_where(n, &|_, _| true))
}

/// A pairing `P` with `supp(f) ⊆ EO^P`, searched over pairs that are unequal
/// on every support string.
pub fn find_pairing(f: &Signature) -> Result<Option<Pairing>> {
    f.require_eo()?;
    let supp = f.support();
    if supp.is_empty() {
        return Ok(None);
    }
    let k = f.arity();
    let unequal = |p: usize, q: usize| supp.iter().all(|a| (a >> p & 1) != (a >> q & 1));
    // Depth-first with early exit instead of collecting every matching.
    fn go(free: u32, ok: &dyn Fn(usize, usize) -> bool, cur: &mut Vec<(usize, usize)>) -> bool {
        if free == 0 {
            return true;
        }
        let p = free.trailing_zeros() as usize;
        let rest = free & !(1 << p);
        let mut r = rest;
        while r != 0 {
            let q = r.trailing_zeros() as usize;
            r &= r - 1;
            if ok(p, q) {
                cur.push((p, q));
                if go(rest & !(1 << q), ok, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    let mut cur = Vec::new();
    let free = if k == 0 { 0 } else { u32::MAX >> (32 - k) };
    Ok(go(free, &unequal, &mut cur).then_some(Pairing(cur)))
}

/// `f` with every string outside `EO^P` zeroed.
pub fn restrict_to_pairing(f: &Signature, p: &Pairing) -> Signature {
    f.restrict_to(|a| p.admits(a))
}

/// The `2^d` arity-`d` signatures obtained by choosing, in each pair, which
/// port carries `x_i` (the other carries `1 − x_i`). Selection bit `i` set
/// means the second port of pair `i` carries `x_i`.
pub fn tau_decompose(f: &Signature, p: &Pairing) -> Result<Vec<Signature>> {
    nontrivial_eo(f).or_else(|e| if e == Error::ZeroSignature { Ok(()) } else { Err(e) })?;
    let d = p.pairs().len();
    if 2 * d != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: 2 * d,
        });
    }
    if f.support().iter().any(|&a| !p.admits(a)) {
        return Err(Error::PairingViolation);
    }
    (0..1u32 << d)
        .map(|sel| {
            Signature::from_fn(d, |x| {
                let mut a = 0u32;
                for (i, &(pp, qq)) in p.pairs().iter().enumerate() {
                    let xi = x >> i & 1;
                    let (carrier, other) = if sel >> i & 1 == 0 { (pp, qq) } else { (qq, pp) };
                    a |= xi << carrier;
                    a |= (1 - xi) << other;
                }
                f.value(a).clone()
            })
        })
        .collect()
}

/// `π_g(x1, y1, x2, y2, …) = g(x) · Π ≠₂(x_i, y_i)`.
pub fn pi_embed(g: &Signature) -> Result<Signature> {
    let d = g.arity();
    Signature::from_fn(2 * d, |a| {
        let mut x = 0u32;
        for i in 0..d {
            let xi = a >> (2 * i) & 1;
            let yi = a >> (2 * i + 1) & 1;
            if xi == yi {
                return ExactValue::zero();
            }
            x |= xi << i;
        }
        g.value(x).clone()
    })
}
