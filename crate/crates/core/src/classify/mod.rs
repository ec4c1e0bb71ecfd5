//! Decision predicates and certificates for EO signature sets.

pub mod affine;
pub mod eoclass;
pub mod pairing;
pub mod product;
pub mod rebalance;
pub mod symmetry;
pub mod triple;
pub mod verdict;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signature::Signature;

pub use affine::{membership_a, AffineCertificate};
pub use eoclass::{membership_eo_class, EoClassReport};
pub use pairing::{find_pairing, pi_embed, restrict_to_pairing, tau_decompose, Pairing};
pub use product::{membership_p, ProductCertificate, ProductGroup};
pub use rebalance::{is_rebalancing, RebalanceReport};
pub use symmetry::{ars_constant, symmetry_class, SymmetryClass};
pub use triple::{is_pure, triple_class, TripleClass, TripleWitness};
pub use verdict::{dichotomy_verdict, verdict_extended, ExtendedMode, Outcome, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    A,
    P,
}

/// Why a membership test failed: the stage that rejected, plus a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub stage: String,
    pub witness: String,
}

impl Refutation {
    pub fn new(stage: impl Into<String>, witness: impl Into<String>) -> Self {
        Refutation {
            stage: stage.into(),
            witness: witness.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Membership<C> {
    Member(C),
    Refuted(Refutation),
}

impl<C> Membership<C> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::Refuted(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Membership::Member(_) => None,
            Membership::Refuted(r) => Some(r),
        }
    }
}

/// Either certificate kind, for class-generic callers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    A(AffineCertificate),
    P(ProductCertificate),
}

pub fn membership(f: &Signature, class: Class) -> Result<Membership<Certificate>> {
    Ok(match class {
        Class::A => match membership_a(f)? {
            Membership::Member(c) => Membership::Member(Certificate::A(c)),
            Membership::Refuted(r) => Membership::Refuted(r),
        },
        Class::P => match membership_p(f)? {
            Membership::Member(c) => Membership::Member(Certificate::P(c)),
            Membership::Refuted(r) => Membership::Refuted(r),
        },
    })
}

pub(crate) fn nontrivial_eo(f: &Signature) -> Result<()> {
    f.require_eo()?;
    if f.is_zero() {
        return Err(Error::ZeroSignature);
    }
    Ok(())
}
