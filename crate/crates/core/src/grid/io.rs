//! Text format for grids.
//!
//! ```text
//! use sigs.sig                # signature file, relative to this file
//! signature f arity 4         # inline blocks are allowed too
//! 0101 1
//! 1010 -1
//! vertex a f
//! vertex p delta              # builtins: neq2 delta delta0 delta1 diseq<2d> eq<r>
//! edge a.1 a.3
//! edge a.2 p.1
//! dangle a.4
//! ```
//!
//! Ports are 1-based. The first slot of an `edge` line reads the edge bit,
//! the second its complement; this matters only for asymmetric vertices.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Grid, Slot};
use crate::algebra::FieldMode;
use crate::error::{Error, Result};
use crate::signature::io::{parse_signatures, strip_comment, write_block, BlockReader};
use crate::signature::Signature;

fn parse_slot(lineno: usize, tok: &str, ids: &HashMap<String, usize>, grid: &Grid) -> Result<Slot> {
    let (id, port) = tok
        .rsplit_once('.')
        .ok_or_else(|| Error::parse(lineno, format!("expected <vertex>.<port>, got {tok:?}")))?;
    let &v = ids
        .get(id)
        .ok_or_else(|| Error::parse(lineno, format!("unknown vertex {id:?}")))?;
    let port: usize = port
        .parse()
        .map_err(|_| Error::parse(lineno, format!("bad port in {tok:?}")))?;
    let arity = grid.vertices[v].signature.arity();
    if port == 0 || port > arity {
        return Err(Error::parse(
            lineno,
            format!("port {port} out of range 1..={arity} for vertex {id}"),
        ));
    }
    Ok(Slot::new(v, port - 1))
}

/// Parse a grid; `base` resolves `use` lines.
pub fn parse_grid(text: &str, base: Option<&Path>, mode: FieldMode) -> Result<Grid> {
    let mut library: HashMap<String, Signature> = HashMap::new();
    let mut blocks = BlockReader::new(mode);
    let mut grid = Grid::new();
    let mut ids: HashMap<String, usize> = HashMap::new();

    let absorb = |blocks: &mut BlockReader, library: &mut HashMap<String, Signature>| -> Result<()> {
        blocks.finish_block()?;
        for s in blocks.done.drain(..) {
            library.insert(s.name().unwrap_or_default().to_string(), s);
        }
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "signature" => {
                blocks.header(lineno, line)?;
            }
            "use" | "vertex" | "edge" | "dangle" => {
                absorb(&mut blocks, &mut library)?;
                match toks.as_slice() {
                    ["use", file] => {
                        let path = match base {
                            Some(b) => b.join(file),
                            None => Path::new(file).to_path_buf(),
                        };
                        let text = std::fs::read_to_string(&path).map_err(|e| {
                            Error::Io(format!("{}: {e}", path.display()))
                        })?;
                        for s in parse_signatures(&text, mode)? {
                            library.insert(s.name().unwrap_or_default().to_string(), s);
                        }
                    }
                    ["vertex", id, sig] => {
                        if id.contains('.') && id.rsplit_once('.').unwrap().1.parse::<usize>().is_ok() {
                            return Err(Error::parse(lineno, format!("ambiguous vertex id {id:?}")));
                        }
                        if ids.contains_key(*id) {
                            return Err(Error::parse(lineno, format!("duplicate vertex {id:?}")));
                        }
                        let s = match library.get(*sig) {
                            Some(s) => s.clone(),
                            None => Signature::builtin(sig).map_err(|_| {
                                Error::parse(lineno, format!("unknown signature {sig:?}"))
                            })?,
                        };
                        ids.insert(id.to_string(), grid.add_vertex(*id, s));
                    }
                    ["edge", a, b] => {
                        let s = parse_slot(lineno, a, &ids, &grid)?;
                        let t = parse_slot(lineno, b, &ids, &grid)?;
                        grid.edges.push((s, t));
                    }
                    ["dangle", a] => {
                        let s = parse_slot(lineno, a, &ids, &grid)?;
                        grid.dangling.push(s);
                    }
                    _ => return Err(Error::parse(lineno, format!("malformed {} line", toks[0]))),
                }
            }
            _ => {
                if blocks.in_block() {
                    blocks.entry(lineno, line)?;
                } else {
                    return Err(Error::parse(lineno, format!("unknown directive {:?}", toks[0])));
                }
            }
        }
    }
    absorb(&mut blocks, &mut library)?;
    let d = grid.validate();
    if let Some(issue) = d.issues.first() {
        return Err(Error::InvalidGrid(format!("{issue:?}")));
    }
    Ok(grid)
}

pub fn read_grid(path: impl AsRef<Path>, mode: FieldMode) -> Result<Grid> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_grid(&text, path.parent(), mode)
}

/// Self-contained rendering with inline signature blocks.
pub fn format_grid(grid: &Grid) -> String {
    let mut out = String::new();
    let mut names: Vec<(String, Signature)> = Vec::new();
    let mut vertex_sig = Vec::with_capacity(grid.vertices.len());
    for (k, v) in grid.vertices.iter().enumerate() {
        let base = v
            .signature
            .name()
            .filter(|n| !n.is_empty() && !n.contains(char::is_whitespace))
            .map(str::to_string)
            .unwrap_or_else(|| format!("s{}", k + 1));
        let name = match names.iter().find(|(_, s)| *s == v.signature) {
            Some((n, _)) => n.clone(),
            None => {
                let mut name = base.clone();
                let mut t = 2;
                while names.iter().any(|(n, _)| *n == name) {
                    name = format!("{base}_{t}");
                    t += 1;
                }
                names.push((name.clone(), v.signature.clone()));
                name
            }
        };
        vertex_sig.push(name);
    }
    for (n, s) in &names {
        write_block(&mut out, s, n).unwrap();
    }
    for (v, n) in grid.vertices.iter().zip(&vertex_sig) {
        writeln!(out, "vertex {} {n}", v.id).unwrap();
    }
    let slot = |s: &Slot| format!("{}.{}", grid.vertices[s.vertex].id, s.port + 1);
    for (s, t) in &grid.edges {
        writeln!(out, "edge {} {}", slot(s), slot(t)).unwrap();
    }
    for s in &grid.dangling {
        writeln!(out, "dangle {}", slot(s)).unwrap();
    }
    out
}
