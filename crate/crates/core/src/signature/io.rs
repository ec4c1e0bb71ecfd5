//! Text format for signatures.
//!
//! ```text
//! # comment
//! signature f arity 4
//! 0101 1
//! 1010 -1
//! signature d builtin diseq4
//! ```
//!
//! Omitted strings are zero. The empty string of an arity-0 signature is
//! written as `.`. A file may hold several blocks; a signature set file is the
//! same format.

use std::fmt;
use std::path::Path;

use super::Signature;
use crate::algebra::f2::parse_bits;
use crate::algebra::{ExactValue, FieldMode};
use crate::error::{Error, Result};

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

/// Incremental parser shared with the grid reader, which allows inline
/// signature blocks.
pub(crate) struct BlockReader {
    mode: FieldMode,
    current: Option<(String, usize, Vec<(u32, ExactValue)>, usize)>,
    pub done: Vec<Signature>,
}

impl BlockReader {
    pub fn new(mode: FieldMode) -> Self {
        BlockReader {
            mode,
            current: None,
            done: Vec::new(),
        }
    }

    pub fn in_block(&self) -> bool {
        self.current.is_some()
    }

    pub fn finish_block(&mut self) -> Result<()> {
        if let Some((name, arity, entries, line)) = self.current.take() {
            let sig = Signature::from_entries(arity, &entries)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            self.done.push(sig.with_name(name));
        }
        Ok(())
    }

    /// Handles a `signature …` header. Returns false if the line is not one.
    pub fn header(&mut self, lineno: usize, line: &str) -> Result<bool> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"signature") {
            return Ok(false);
        }
        self.finish_block()?;
        match toks.as_slice() {
            ["signature", name, "arity", k] => {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad arity {k:?}")))?;
                let cap = super::arity_cap();
                if k > cap {
                    return Err(Error::parse(lineno, format!("arity {k} exceeds cap {cap}")));
                }
                self.current = Some((name.to_string(), k, Vec::new(), lineno));
            }
            ["signature", name, "builtin", b] => {
                let sig = Signature::builtin(b).map_err(|e| Error::parse(lineno, e.to_string()))?;
                self.done.push(sig.with_name(*name));
            }
            _ => {
                return Err(Error::parse(
                    lineno,
                    "expected `signature <name> arity <k>` or `signature <name> builtin <kind>`",
                ))
            }
        }
        Ok(true)
    }

    pub fn entry(&mut self, lineno: usize, line: &str) -> Result<()> {
        let Some((_, arity, entries, _)) = self.current.as_mut() else {
            return Err(Error::parse(lineno, "entry line outside a signature block"));
        };
        let (bits, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(lineno, "expected `<bitstring> <value>`"))?;
        let alpha = if bits == "." {
            if *arity != 0 {
                return Err(Error::parse(lineno, "`.` is only valid for arity 0"));
            }
            0
        } else {
            match parse_bits(bits) {
                Some((a, len)) if len == *arity => a,
                _ => {
                    return Err(Error::parse(
                        lineno,
                        format!("{bits:?} is not a bit string of length {arity}"),
                    ))
                }
            }
        };
        let v = self
            .mode
            .parse_value(rest)
            .map_err(|e| Error::parse(lineno, e.to_string()))?;
        if entries.iter().any(|(a, _)| *a == alpha) {
            return Err(Error::parse(lineno, format!("duplicate entry {bits}")));
        }
        entries.push((alpha, v));
        Ok(())
    }
}

pub fn parse_signatures(text: &str, mode: FieldMode) -> Result<Vec<Signature>> {
    let mut reader = BlockReader::new(mode);
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if !reader.header(i + 1, line)? {
            reader.entry(i + 1, line)?;
        }
    }
    reader.finish_block()?;
    if reader.done.is_empty() {
        return Err(Error::parse(0, "no signature blocks found"));
    }
    Ok(reader.done)
}

pub fn read_signatures(path: impl AsRef<Path>, mode: FieldMode) -> Result<Vec<Signature>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_signatures(&text, mode)
}

pub(crate) fn write_block(out: &mut impl fmt::Write, sig: &Signature, name: &str) -> fmt::Result {
    writeln!(out, "signature {name} arity {}", sig.arity())?;
    for a in sig.support() {
        let s = if sig.arity() == 0 {
            ".".to_string()
        } else {
            sig.render(a)
        };
        writeln!(out, "{s} {}", sig.value(a))?;
    }
    Ok(())
}

/// Render signatures in the file format; unnamed ones become `f1`, `f2`, ….
pub fn format_signatures(sigs: &[Signature]) -> String {
    let mut s = String::new();
    for (k, sig) in sigs.iter().enumerate() {
        let fallback = format!("f{}", k + 1);
        write_block(&mut s, sig, sig.name().unwrap_or(&fallback)).unwrap();
    }
    s
}
