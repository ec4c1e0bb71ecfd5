//! Membership in the product class `𝒫`.

use serde::Serialize;

use super::{Membership, Refutation};
use crate::algebra::f2::bits_to_string;
use crate::algebra::ExactValue;
use crate::error::{Error, Result};
use crate::signature::Signature;

/// Ports tied together by equalities/disequalities. `ports[0]` is the root;
/// each entry records whether the port is the negation of the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductGroup {
    pub ports: Vec<(usize, bool)>,
    /// Weight when the root is 0, and when it is 1.
    pub weights: (ExactValue, ExactValue),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCertificate {
    pub arity: usize,
    pub lambda: ExactValue,
    pub pins: Vec<(usize, bool)>,
    pub groups: Vec<ProductGroup>,
}

impl ProductCertificate {
    pub fn value(&self, alpha: u32) -> ExactValue {
        let bit = |p: usize| alpha >> p & 1 == 1;
        if self.pins.iter().any(|&(p, b)| bit(p) != b) {
            return ExactValue::zero();
        }
        let mut acc = self.lambda.clone();
        for g in &self.groups {
            let root = bit(g.ports[0].0);
            if g.ports.iter().any(|&(p, flip)| bit(p) != (root ^ flip)) {
                return ExactValue::zero();
            }
            acc *= if root { &g.weights.1 } else { &g.weights.0 };
        }
        acc
    }

    pub fn reconstruct(&self) -> Result<Signature> {
        Signature::from_fn(self.arity, |a| self.value(a))
    }

    /// Support point with every group root set by `roots` (bit `g` for group `g`).
    pub fn point(&self, roots: u32) -> u32 {
        let mut a = 0u32;
        for &(p, b) in &self.pins {
            a |= (b as u32) << p;
        }
        for (g, grp) in self.groups.iter().enumerate() {
            let r = roots >> g & 1 == 1;
            for &(p, flip) in &grp.ports {
                a |= ((r ^ flip) as u32) << p;
            }
        }
        a
    }
}

// Union-find with parity to the parent.
pub(crate) struct ParityUf {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUf {
    pub(crate) fn new(n: usize) -> Self {
        ParityUf {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (r, p) = self.find(self.parent[x]);
        self.parent[x] = r;
        self.parity[x] ^= p;
        (r, self.parity[x])
    }

    /// Records `x_a ⊕ x_b = diff`; false if that contradicts earlier relations.
    pub(crate) fn relate(&mut self, a: usize, b: usize, diff: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == diff;
        }
        self.union(a, b, diff);
        true
    }

    fn union(&mut self, a: usize, b: usize, diff: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
            self.parity[hi] = pa ^ pb ^ diff;
        }
    }
}

pub fn membership_p(f: &Signature) -> Result<Membership<ProductCertificate>> {
    let supp = f.support();
    let Some(&first) = supp.first() else {
        return Err(Error::ZeroSignature);
    };
    let k = f.arity();
    let bit = |a: u32, p: usize| a >> p & 1 == 1;
    let mut pins = Vec::new();
    let mut free = Vec::new();
    for p in 0..k {
        if supp.iter().all(|&a| bit(a, p) == bit(first, p)) {
            pins.push((p, bit(first, p)));
        } else {
            free.push(p);
        }
    }
    let mut uf = ParityUf::new(k);
    for (i, &p) in free.iter().enumerate() {
        for &q in &free[i + 1..] {
            let rel = bit(first, p) ^ bit(first, q);
            if supp.iter().all(|&a| (bit(a, p) ^ bit(a, q)) == rel) {
                uf.union(p, q, rel);
            }
        }
    }
    let mut groups: Vec<ProductGroup> = Vec::new();
    let mut group_of_root = std::collections::HashMap::new();
    for &p in &free {
        let (r, flip) = uf.find(p);
        let g = *group_of_root.entry(r).or_insert_with(|| {
            groups.push(ProductGroup {
                ports: Vec::new(),
                weights: (ExactValue::one(), ExactValue::one()),
            });
            groups.len() - 1
        });
        groups[g].ports.push((p, flip));
    }
    let ng = groups.len();
    if ng >= 32 || supp.len() as u64 != 1u64 << ng {
        return Ok(Membership::Refuted(Refutation::new(
            "support is not a product structure",
            format!(
                "{} pins and {} free groups predict {} strings, support has {}",
                pins.len(),
                ng,
                1u64 << ng.min(63),
                supp.len()
            ),
        )));
    }
    let mut cert = ProductCertificate {
        arity: k,
        lambda: ExactValue::one(),
        pins,
        groups,
    };
    let base = cert.point(0);
    let fb = f.value(base).clone();
    if fb.is_zero() {
        return Ok(Membership::Refuted(Refutation::new(
            "support is not a product structure",
            format!("{} missing", bits_to_string(base, k)),
        )));
    }
    if ng == 0 {
        cert.lambda = fb;
    } else {
        for g in 0..ng {
            let fg = f.value(cert.point(1 << g)).clone();
            cert.groups[g].weights = if g == 0 {
                (fb.clone(), fg)
            } else {
                (ExactValue::one(), fg.checked_div(&fb)?)
            };
        }
    }
    for &a in &supp {
        if cert.value(a) != *f.value(a) {
            return Ok(Membership::Refuted(Refutation::new(
                "values do not factor across groups",
                format!("mismatch at {}", bits_to_string(a, k)),
            )));
        }
    }
    Ok(Membership::Member(cert))
}
