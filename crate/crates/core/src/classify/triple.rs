//! Triple classification and purity.

use serde::Serialize;

use super::{nontrivial_eo, Direction};
use crate::algebra::f2_affine_span;
use crate::error::Result;
use crate::signature::{is_balanced, is_heavy, is_light, Signature};

/// `α ⊕ β ⊕ γ = δ` with `α, β, γ` in the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleWitness {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    pub delta: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TripleClass {
    /// `δ` balanced but outside the support.
    pub exists3mid: Option<TripleWitness>,
    /// `δ` has strictly more ones than zeros.
    pub exists3up: Option<TripleWitness>,
    /// `δ` has strictly more zeros than ones.
    pub exists3down: Option<TripleWitness>,
}

impl TripleClass {
    /// `∀3⇑`: no balanced miss and no light `δ`.
    pub fn forall_up(&self) -> bool {
        self.exists3mid.is_none() && self.exists3down.is_none()
    }

    /// `∀3⇓`: no balanced miss and no heavy `δ`.
    pub fn forall_down(&self) -> bool {
        self.exists3mid.is_none() && self.exists3up.is_none()
    }

    pub fn satisfies(&self, d: Direction) -> bool {
        match d {
            Direction::Up => self.forall_up(),
            Direction::Down => self.forall_down(),
        }
    }
}

pub fn triple_class(f: &Signature) -> Result<TripleClass> {
    nontrivial_eo(f)?;
    let k = f.arity();
    let supp = f.support();
    let mut out = TripleClass::default();
    let w = |a, b, c, d| TripleWitness {
        alpha: f.render(a),
        beta: f.render(b),
        gamma: f.render(c),
        delta: f.render(d),
    };
    // δ is symmetric in the triple, so unordered triples with repetition suffice.
    'outer: for (i, &a) in supp.iter().enumerate() {
        for (j, &b) in supp.iter().enumerate().skip(i) {
            for &c in &supp[j..] {
                let d = a ^ b ^ c;
                if is_balanced(d, k) {
                    if out.exists3mid.is_none() && f.value(d).is_zero() {
                        out.exists3mid = Some(w(a, b, c, d));
                    }
                } else if is_heavy(d, k) {
                    if out.exists3up.is_none() {
                        out.exists3up = Some(w(a, b, c, d));
                    }
                } else if out.exists3down.is_none() {
                    out.exists3down = Some(w(a, b, c, d));
                }
                if out.exists3mid.is_some() && out.exists3up.is_some() && out.exists3down.is_some() {
                    break 'outer;
                }
            }
        }
    }
    Ok(out)
}

/// Pure-up: the affine span of the support lies in `EO≥` (pure-down: `EO≤`).
pub fn is_pure(f: &Signature, direction: Direction) -> Result<bool> {
    nontrivial_eo(f)?;
    let k = f.arity();
    let span = f2_affine_span(&f.support(), k)?;
    let pure = span.elements().all(|a| match direction {
        Direction::Up => !is_light(a, k),
        Direction::Down => !is_heavy(a, k),
    });
    Ok(pure)
}
