//! Membership in the affine class `𝒜`.
//!
//! A nonzero `f` is in `𝒜` iff its support is an affine space and, writing
//! support points as `offset ⊕ Σ t_i b_i`, the value is
//! `λ · i^(Σ λ_i t_i + 2 Σ_{i<j} μ_ij t_i t_j)` with `λ_i ∈ Z₄`, `μ_ij ∈ {0,1}`.

use serde::Serialize;

use super::{Membership, Refutation};
use crate::algebra::f2::bits_to_string;
use crate::algebra::{f2_affine_span, AffineSpace, ExactValue};
use crate::error::{Error, Result};
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineCertificate {
    pub lambda: ExactValue,
    pub space: AffineSpace,
    /// `λ_i` for each basis vector.
    pub linear: Vec<u8>,
    /// Basis pairs `(i, j)`, `i < j`, with `μ_ij = 1`.
    pub quadratic: Vec<(usize, usize)>,
}

impl AffineCertificate {
    /// Exponent of `i` at coordinates `t`.
    pub fn exponent(&self, t: u32) -> u8 {
        let mut e: u32 = 0;
        for (i, &l) in self.linear.iter().enumerate() {
            if t >> i & 1 == 1 {
                e += l as u32;
            }
        }
        for &(i, j) in &self.quadratic {
            if t >> i & 1 == 1 && t >> j & 1 == 1 {
                e += 2;
            }
        }
        (e % 4) as u8
    }

    pub fn value(&self, alpha: u32) -> ExactValue {
        match self.space.coordinates(alpha) {
            None => ExactValue::zero(),
            Some(t) => &self.lambda * &ExactValue::i_pow(self.exponent(t) as i64),
        }
    }

    /// Table rebuilt from the certificate alone.
    pub fn reconstruct(&self) -> Result<Signature> {
        Signature::from_fn(self.space.dimension, |a| self.value(a))
    }
}

/// Exponent `e` with `r = i^e`, if any.
pub fn power_of_i(r: &ExactValue) -> Option<u8> {
    (0..4u8).find(|&e| *r == ExactValue::i_pow(e as i64))
}

pub fn membership_a(f: &Signature) -> Result<Membership<AffineCertificate>> {
    let supp = f.support();
    if supp.is_empty() {
        return Err(Error::ZeroSignature);
    }
    let k = f.arity();
    let space = f2_affine_span(&supp, k)?;
    if space.size() != supp.len() as u64 {
        let missing = space.elements().find(|a| f.value(*a).is_zero()).unwrap();
        return Ok(Membership::Refuted(Refutation::new(
            "support is not affine",
            format!("{} lies in the span but not in the support", bits_to_string(missing, k)),
        )));
    }
    let base = space.offset;
    let lambda = f.value(base).clone();
    let exp_at = |t: u32| -> std::result::Result<u8, Refutation> {
        let a = space.at(t);
        let r = f.value(a).checked_div(&lambda).map_err(|_| {
            Refutation::new("zero base value", bits_to_string(base, k))
        })?;
        power_of_i(&r).ok_or_else(|| {
            Refutation::new(
                "value ratio is not a power of i",
                format!("f({})/f({}) = {}", bits_to_string(a, k), bits_to_string(base, k), r),
            )
        })
    };
    let n = space.rank();
    let mut linear = Vec::with_capacity(n);
    for i in 0..n {
        match exp_at(1 << i) {
            Ok(e) => linear.push(e),
            Err(r) => return Ok(Membership::Refuted(r)),
        }
    }
    let mut quadratic = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let e = match exp_at(1 << i | 1 << j) {
                Ok(e) => e,
                Err(r) => return Ok(Membership::Refuted(r)),
            };
            let diff = (e as i32 - linear[i] as i32 - linear[j] as i32).rem_euclid(4);
            match diff {
                0 => {}
                2 => quadratic.push((i, j)),
                _ => {
                    return Ok(Membership::Refuted(Refutation::new(
                        "odd quadratic term",
                        format!(
                            "exponents at basis points {} and {} do not combine by a multiple of 2",
                            bits_to_string(space.at(1 << i), k),
                            bits_to_string(space.at(1 << j), k)
                        ),
                    )))
                }
            }
        }
    }
    let cert = AffineCertificate {
        lambda,
        space,
        linear,
        quadratic,
    };
    for t in 0..1u32 << n {
        let a = cert.space.at(t);
        if cert.value(a) != *f.value(a) {
            return Ok(Membership::Refuted(Refutation::new(
                "exponent is not linear plus twice quadratic",
                format!("mismatch at {}", bits_to_string(a, k)),
            )));
        }
    }
    Ok(Membership::Member(cert))
}
