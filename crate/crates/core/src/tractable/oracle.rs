//! Effective support strings and the oracle that decides them.
//!
//! A support string `α` of a vertex is effective when some edge orientation
//! gives every vertex a nonzero value while `v` reads `α`. Two backends answer
//! the question: a pruned depth-first search, and an external solver fed a
//! clause-form encoding over the edge bits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::{Command, Stdio};
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::f2::bits_to_string;
use crate::error::{Error, Result};
use crate::grid::engine::{find, Plan};
use crate::grid::{Grid, SlotUse};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OracleBackend {
    Exhaustive,
    /// Program and arguments; the encoding goes to stdin.
    External(Vec<String>),
}

impl FromStr for OracleBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(OracleBackend::Exhaustive);
        }
        match s.strip_prefix("external:") {
            Some(cmd) if !cmd.trim().is_empty() => Ok(OracleBackend::External(
                cmd.split_whitespace().map(str::to_string).collect(),
            )),
            _ => Err(Error::parse(0, format!("unknown backend {s:?}; use exhaustive or external:<cmd>"))),
        }
    }
}

/// Clauses over variables `1..=vars`; variable `e + 1` is the bit of edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Forbid, vertex by vertex, every local orientation with value zero; with
/// `pin = (v, α)` also every orientation at `v` other than `α`.
pub fn support_cnf(grid: &Grid, pin: Option<(usize, u32)>) -> Result<Cnf> {
    let uses = grid.slot_uses();
    let mut clauses = Vec::new();
    for (u, vert) in grid.vertices.iter().enumerate() {
        let mut edges: Vec<usize> = Vec::new();
        for s in &uses[u] {
            match *s {
                SlotUse::Edge { edge, .. } if !edges.contains(&edge) => edges.push(edge),
                SlotUse::Dangling(_) => return Err(Error::OpenGrid),
                _ => {}
            }
        }
        for x in 0..1u32 << edges.len() {
            let bit = |e: usize| x >> edges.iter().position(|&f| f == e).unwrap() & 1 == 1;
            let mut a = 0u32;
            for (p, s) in uses[u].iter().enumerate() {
                if let SlotUse::Edge { edge, first } = *s {
                    a |= ((bit(edge) == first) as u32) << p;
                }
            }
            let allowed = !vert.signature.value(a).is_zero() && pin.is_none_or(|(v, alpha)| v != u || a == alpha);
            if !allowed {
                clauses.push(
                    edges
                        .iter()
                        .enumerate()
                        .map(|(j, &e)| {
                            let var = e as i64 + 1;
                            if x >> j & 1 == 1 {
                                -var
                            } else {
                                var
                            }
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(Cnf {
        vars: grid.edges.len(),
        clauses,
    })
}

/// Parses `SAT <literals> [0]` or `UNSAT`.
pub fn parse_response(text: &str, vars: usize) -> Result<Option<Vec<bool>>> {
    let mut toks = text.split_whitespace();
    match toks.next() {
        Some("UNSAT") => Ok(None),
        Some("SAT") => {
            let mut y = vec![false; vars];
            for t in toks {
                let l: i64 = t
                    .parse()
                    .map_err(|_| Error::Oracle(format!("bad literal {t:?}")))?;
                if l == 0 {
                    break;
                }
                let var = l.unsigned_abs() as usize;
                if var == 0 || var > vars {
                    return Err(Error::Oracle(format!("literal {l} out of range")));
                }
                y[var - 1] = l > 0;
            }
            Ok(Some(y))
        }
        _ => Err(Error::Oracle(format!("unexpected response {:?}", text.trim()))),
    }
}

fn run_external(cmd: &[String], cnf: &Cnf) -> Result<Option<Vec<bool>>> {
    let (prog, args) = cmd.split_first().ok_or_else(|| Error::Oracle("empty command".into()))?;
    let mut child = Command::new(prog)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .map_err(|e| Error::Oracle(format!("{prog}: {e}")))?;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(cnf.to_dimacs().as_bytes())
        .map_err(|e| Error::Oracle(e.to_string()))?;
    let out = child.wait_with_output().map_err(|e| Error::Oracle(e.to_string()))?;
    if !out.status.success() {
        return Err(Error::Oracle(format!("{prog} exited with {}", out.status)));
    }
    parse_response(&String::from_utf8_lossy(&out.stdout), cnf.vars)
}

fn check_witness(grid: &Grid, y: &[bool], v: usize, alpha: u32) -> bool {
    let local = grid.local_strings(y);
    local[v] == alpha
        && grid
            .vertices
            .iter()
            .zip(&local)
            .all(|(u, &a)| !u.signature.value(a).is_zero())
}

/// Edge bits of a nonzero orientation in which `v` reads `alpha`, if any.
pub fn support_oracle(grid: &Grid, v: usize, alpha: u32, backend: &OracleBackend) -> Result<Option<Vec<bool>>> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let sig = &grid
        .vertices
        .get(v)
        .ok_or_else(|| Error::PortError(format!("no vertex {v}")))?
        .signature;
    if sig.value(alpha).is_zero() {
        return Err(Error::StringNotInSupport(bits_to_string(alpha, sig.arity())));
    }
    let y = match backend {
        OracleBackend::Exhaustive => {
            let plan = Plan::new(grid);
            find(&plan, &[], &|u, a| {
                !grid.vertices[u].signature.value(a).is_zero() && (u != v || a == alpha)
            })?
        }
        OracleBackend::External(cmd) => run_external(cmd, &support_cnf(grid, Some((v, alpha)))?)?,
    };
    if let Some(y) = &y {
        if !check_witness(grid, y, v, alpha) {
            return Err(Error::Oracle("returned assignment is not a witness".into()));
        }
    }
    Ok(y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StringStatus {
    pub string: String,
    pub effective: bool,
    /// Edge bits of one witnessing orientation.
    pub witness: Option<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSupport {
    pub vertex: String,
    pub strings: Vec<StringStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectiveSupportReport {
    pub vertices: Vec<VertexSupport>,
    pub queries: usize,
}

impl EffectiveSupportReport {
    pub fn effective(&self, v: usize) -> impl Iterator<Item = &StringStatus> {
        self.vertices[v].strings.iter().filter(|s| s.effective)
    }
}

/// Decide every support string of every vertex. A witness found for one query
/// settles all the local strings it passes through.
pub fn effective_support(grid: &Grid, backend: &OracleBackend) -> Result<EffectiveSupportReport> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let n = grid.vertices.len();
    let mut known: Vec<HashMap<u32, usize>> = vec![HashMap::new(); n];
    let mut witnesses: Vec<Vec<bool>> = Vec::new();
    let mut queries = 0;
    let mut vertices = Vec::with_capacity(n);
    for v in 0..n {
        let sig = &grid.vertices[v].signature;
        let mut strings = Vec::new();
        for alpha in sig.support() {
            let w = match known[v].get(&alpha) {
                Some(&k) => Some(k),
                None => {
                    queries += 1;
                    match support_oracle(grid, v, alpha, backend)? {
                        None => None,
                        Some(y) => {
                            let k = witnesses.len();
                            for (u, a) in grid.local_strings(&y).into_iter().enumerate() {
                                known[u].entry(a).or_insert(k);
                            }
                            witnesses.push(y);
                            Some(k)
                        }
                    }
                }
            };
            strings.push(StringStatus {
                string: bits_to_string(alpha, sig.arity()),
                effective: w.is_some(),
                witness: w.map(|k| witnesses[k].clone()),
            });
        }
        vertices.push(VertexSupport {
            vertex: grid.vertices[v].id.clone(),
            strings,
        });
    }
    Ok(EffectiveSupportReport { vertices, queries })
}

/// Zero every non-effective string, occurrence by occurrence.
pub fn prune_with_report(grid: &Grid, backend: &OracleBackend) -> Result<(Grid, EffectiveSupportReport)> {
    let report = effective_support(grid, backend)?;
    let mut out = grid.clone();
    for (v, vs) in report.vertices.iter().enumerate() {
        let sig = &grid.vertices[v].signature;
        let keep: Vec<u32> = sig
            .support()
            .into_iter()
            .zip(&vs.strings)
            .filter(|(_, s)| s.effective)
            .map(|(a, _)| a)
            .collect();
        if keep.len() != vs.strings.len() {
            out.vertices[v].signature = sig.restrict_to(|a| keep.contains(&a));
        }
    }
    Ok((out, report))
}

pub fn prune_effective(grid: &Grid, backend: &OracleBackend) -> Result<Grid> {
    Ok(prune_with_report(grid, backend)?.0)
}
