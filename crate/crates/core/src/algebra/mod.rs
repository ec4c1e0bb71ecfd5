//! Exact arithmetic substrate: cyclotomic values, F₂ linear algebra and
//! Vandermonde solving.

pub mod f2;
pub mod literal;
pub mod value;

pub use f2::{f2_affine_span, AffineSpace, F2Row};
pub use literal::{parse_literal, FieldMode};
pub use value::{ExactValue, RootOrder};

use crate::error::{Error, Result};

/// Coefficients `c_0..c_m` with `Σ_j c_j node_k^j = rhs_k` for every `k`.
///
/// Uses Newton divided differences, then expands the Newton form into the
/// monomial basis; everything stays exact.
pub fn vandermonde_solve(nodes: &[ExactValue], rhs: &[ExactValue]) -> Result<Vec<ExactValue>> {
    if nodes.len() != rhs.len() {
        return Err(Error::ArityMismatch {
            expected: nodes.len(),
            found: rhs.len(),
        });
    }
    if nodes.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = nodes.len();
    for a in 0..n {
        for b in a + 1..n {
            if nodes[a] == nodes[b] {
                return Err(Error::SingularSystem(format!(
                    "nodes {a} and {b} coincide ({})",
                    nodes[a]
                )));
            }
        }
    }
    let mut dd: Vec<ExactValue> = rhs.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = &dd[k] - &dd[k - 1];
            let den = &nodes[k] - &nodes[k - level];
            dd[k] = num.checked_div(&den)?;
        }
    }
    // Horner on the Newton form: p = dd0 + (x-x0)(dd1 + (x-x1)(dd2 + ...))
    let mut coeffs = vec![ExactValue::zero(); n];
    coeffs[0] = dd[n - 1].clone();
    let mut deg = 0;
    for k in (0..n - 1).rev() {
        // coeffs := coeffs * (x - nodes[k]) + dd[k]
        deg += 1;
        for j in (1..=deg).rev() {
            let shifted = coeffs[j - 1].clone();
            coeffs[j] = &shifted - &(&coeffs[j] * &nodes[k]);
        }
        coeffs[0] = &dd[k] - &(&coeffs[0] * &nodes[k]);
    }
    Ok(coeffs)
}
