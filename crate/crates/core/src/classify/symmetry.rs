//! Complement symmetries: `f(ᾱ) = f(α)`, `f(ᾱ) = −f(α)`, or
//! `f(ᾱ) = u · conj(f(α))` for one unimodular `u`.

use serde::Serialize;

use super::nontrivial_eo;
use crate::algebra::ExactValue;
use crate::error::Result;
use crate::signature::{full_mask, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SymmetryClass {
    Dsym,
    DAsym,
    ArsUpToConstant(ExactValue),
    None,
}

impl std::fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymmetryClass::Dsym => write!(f, "D-sym"),
            SymmetryClass::DAsym => write!(f, "D-asym"),
            SymmetryClass::ArsUpToConstant(c) => write!(f, "ARS up to {c}"),
            SymmetryClass::None => write!(f, "none"),
        }
    }
}

pub fn symmetry_class(f: &Signature) -> Result<SymmetryClass> {
    nontrivial_eo(f)?;
    let m = full_mask(f.arity());
    let bar = |a: u32| f.value(a ^ m);
    let all = 0..1u32 << f.arity();
    if all.clone().all(|a| bar(a) == f.value(a)) {
        return Ok(SymmetryClass::Dsym);
    }
    if all.clone().all(|a| *bar(a) == -f.value(a)) {
        return Ok(SymmetryClass::DAsym);
    }
    Ok(match ars_constant(f)? {
        Some(u) => SymmetryClass::ArsUpToConstant(u),
        None => SymmetryClass::None,
    })
}

/// The unimodular `u` with `f(ᾱ) = u · conj(f(α))` everywhere, if one exists.
pub fn ars_constant(f: &Signature) -> Result<Option<ExactValue>> {
    nontrivial_eo(f)?;
    let m = full_mask(f.arity());
    let bar = |a: u32| f.value(a ^ m);
    let a0 = f.support()[0];
    let Ok(u) = bar(a0).checked_div(&f.value(a0).conj()) else {
        return Ok(None);
    };
    let unimodular = (&u * &u.conj()) == ExactValue::one();
    let holds = unimodular && (0..1u32 << f.arity()).all(|a| *bar(a) == &u * &f.value(a).conj());
    Ok(holds.then_some(u))
}
