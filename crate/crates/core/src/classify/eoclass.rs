//! `EO^𝒜` / `EO^𝒫`: membership of every pairing restriction.

use rayon::prelude::*;
use serde::Serialize;

use super::pairing::{all_pairings, restrict_to_pairing, Pairing};
use super::{membership, Certificate, Class, Membership, Refutation};
use crate::error::Result;
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EoClassReport {
    pub class: Class,
    pub member: bool,
    pub pairings_checked: usize,
    /// Pairings whose restriction is identically zero (pass vacuously).
    pub vacuous: usize,
    /// First failing pairing in enumeration order.
    pub failing: Option<(Pairing, Refutation)>,
    /// Certificates for nonvacuous pairings, when every pairing passes.
    pub certificates: Vec<(Pairing, Certificate)>,
}

pub fn membership_eo_class(f: &Signature, class: Class) -> Result<EoClassReport> {
    f.require_eo()?;
    let pairings = all_pairings(f.arity())?;
    let outcomes: Result<Vec<Option<Membership<Certificate>>>> = pairings
        .par_iter()
        .map(|p| {
            let r = restrict_to_pairing(f, p);
            if r.is_zero() {
                Ok(None)
            } else {
                membership(&r, class).map(Some)
            }
        })
        .collect();
    let outcomes = outcomes?;
    let mut report = EoClassReport {
        class,
        member: true,
        pairings_checked: pairings.len(),
        vacuous: 0,
        failing: None,
        certificates: Vec::new(),
    };
    for (p, o) in pairings.into_iter().zip(outcomes) {
        match o {
            None => report.vacuous += 1,
            Some(Membership::Member(c)) => report.certificates.push((p, c)),
            Some(Membership::Refuted(r)) => {
                report.member = false;
                report.failing = Some((p, r));
                report.certificates.clear();
                break;
            }
        }
    }
    Ok(report)
}
