//! Evaluation with an effective-support oracle: prune, then hand the pruned
//! grid to the tractable evaluator of the matching class.

use serde::Serialize;

use super::oracle::{prune_with_report, OracleBackend};
use super::{eval_affine, eval_product};
use crate::algebra::ExactValue;
use crate::classify::{dichotomy_verdict, membership_a, membership_p, Class, Membership, Outcome};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signature::Signature;

#[derive(Clone, Debug, Serialize)]
pub struct FpnpReport {
    pub value: ExactValue,
    pub class: Class,
    pub outcome: Outcome,
    pub oracle_queries: usize,
    /// Occurrences whose support shrank.
    pub pruned_vertices: Vec<String>,
    /// Every occurrence was empty after pruning, so the value is 0.
    pub empty: bool,
    #[serde(skip)]
    pub pruned: Grid,
}

fn distinct(grid: &Grid) -> Vec<Signature> {
    let mut set: Vec<Signature> = Vec::new();
    for v in &grid.vertices {
        if !set.contains(&v.signature) {
            set.push(v.signature.clone());
        }
    }
    set
}

/// Checks the tractability conditions, picks a class (the hint when given),
/// prunes, and evaluates.
pub fn eval_fpnp_report(grid: &Grid, hint: Option<Class>, backend: &OracleBackend) -> Result<FpnpReport> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    for v in &grid.vertices {
        if !v.signature.is_eo() {
            return Err(Error::PreconditionViolated(format!("vertex {} is not EO", v.id)));
        }
    }
    let verdict = dichotomy_verdict(&distinct(grid))?;
    if verdict.outcome.is_hard() {
        return Err(Error::PreconditionViolated(format!(
            "signature set is #P-hard: {}",
            serde_json::to_string(&verdict.outcome).unwrap_or_default()
        )));
    }
    let allowed = verdict.outcome.classes();
    let class = match hint {
        Some(c) if allowed.contains(&c) => c,
        Some(c) => {
            return Err(Error::PreconditionViolated(format!(
                "set is not contained in EO^{c:?}"
            )))
        }
        None => *allowed.first().unwrap_or(&Class::P),
    };
    let (pruned, report) = prune_with_report(grid, backend)?;
    let pruned_vertices = grid
        .vertices
        .iter()
        .zip(&pruned.vertices)
        .filter(|(a, b)| a.signature != b.signature)
        .map(|(a, _)| a.id.clone())
        .collect();
    let mut base = FpnpReport {
        value: ExactValue::zero(),
        class,
        outcome: verdict.outcome,
        oracle_queries: report.queries,
        pruned_vertices,
        empty: false,
        pruned: pruned.clone(),
    };
    if pruned.vertices.iter().any(|v| v.signature.is_zero()) {
        base.empty = true;
        return Ok(base);
    }
    for v in &pruned.vertices {
        let ok = match class {
            Class::A => matches!(membership_a(&v.signature)?, Membership::Member(_)),
            Class::P => matches!(membership_p(&v.signature)?, Membership::Member(_)),
        };
        if !ok {
            return Err(Error::PreconditionViolated(format!(
                "pruned occurrence {} has no {class:?} certificate",
                v.id
            )));
        }
    }
    base.value = match class {
        Class::A => eval_affine(&pruned)?,
        Class::P => eval_product(&pruned)?,
    };
    Ok(base)
}

pub fn eval_fpnp(grid: &Grid, hint: Class, backend: &OracleBackend) -> Result<ExactValue> {
    Ok(eval_fpnp_report(grid, Some(hint), backend)?.value)
}
