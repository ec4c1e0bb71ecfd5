//! Gadget scripts: a running signature transformed step by step.
//!
//! ```text
//! use sigs.sig                 # or inline `signature` blocks
//! start f
//! tensor neq2
//! loop 1 3 w ij                # self-loop through binary w (default neq2)
//! pin 1 2 01
//! permute 2 1
//! ```
//!
//! Ports are 1-based and refer to the current signature.

use std::collections::HashMap;
use std::path::Path;

use crate::algebra::FieldMode;
use crate::error::{Error, Result};
use crate::signature::io::{parse_signatures, strip_comment, BlockReader};
use crate::signature::{BinaryDiseq, LoopOrientation, PinPattern, Signature};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GateTrace {
    pub steps: Vec<String>,
    pub result: Signature,
}

fn port(lineno: usize, tok: &str, arity: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(p) if p >= 1 && p <= arity => Ok(p - 1),
        _ => Err(Error::parse(lineno, format!("port {tok:?} out of range 1..={arity}"))),
    }
}

pub fn run_gate_script(text: &str, base: Option<&Path>, mode: FieldMode) -> Result<GateTrace> {
    let mut library: HashMap<String, Signature> = HashMap::new();
    let mut blocks = BlockReader::new(mode);
    let mut current: Option<Signature> = None;
    let mut steps = Vec::new();

    let lookup = |library: &HashMap<String, Signature>, lineno: usize, name: &str| -> Result<Signature> {
        match library.get(name) {
            Some(s) => Ok(s.clone()),
            None => Signature::builtin(name).map_err(|_| Error::parse(lineno, format!("unknown signature {name:?}"))),
        }
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "signature" {
            blocks.header(lineno, line)?;
            continue;
        }
        if !matches!(toks[0], "use" | "start" | "tensor" | "loop" | "pin" | "permute") {
            if blocks.in_block() {
                blocks.entry(lineno, line)?;
                continue;
            }
            return Err(Error::parse(lineno, format!("unknown directive {:?}", toks[0])));
        }
        blocks.finish_block()?;
        for s in blocks.done.drain(..) {
            library.insert(s.name().unwrap_or_default().to_string(), s);
        }
        if toks[0] == "use" {
            let [_, file] = toks[..] else {
                return Err(Error::parse(lineno, "malformed use line"));
            };
            let path = base.map_or_else(|| Path::new(file).to_path_buf(), |b| b.join(file));
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            for s in parse_signatures(&text, mode)? {
                library.insert(s.name().unwrap_or_default().to_string(), s);
            }
            continue;
        }
        if toks[0] == "start" {
            let [_, name] = toks[..] else {
                return Err(Error::parse(lineno, "malformed start line"));
            };
            current = Some(lookup(&library, lineno, name)?);
            steps.push(line.to_string());
            continue;
        }
        let f = current
            .take()
            .ok_or_else(|| Error::parse(lineno, "no `start` before this step"))?;
        let k = f.arity();
        let next = match toks.as_slice() {
            ["tensor", name] => f.tensor(&lookup(&library, lineno, name)?)?,
            ["loop", i, j, rest @ ..] if rest.len() <= 2 => {
                let (i, j) = (port(lineno, i, k)?, port(lineno, j, k)?);
                let mut w = BinaryDiseq::neq2();
                let mut orient = LoopOrientation::Ij;
                for t in rest {
                    match *t {
                        "ij" => orient = LoopOrientation::Ij,
                        "ji" => orient = LoopOrientation::Ji,
                        name => {
                            w = lookup(&library, lineno, name)?
                                .as_binary_diseq()
                                .ok_or_else(|| Error::parse(lineno, format!("{name} is not a binary disequality")))?
                        }
                    }
                }
                f.self_loop(i, j, &w, orient)?
            }
            ["pin", i, j, pat] => {
                let pattern = match *pat {
                    "01" => PinPattern::P01,
                    "10" => PinPattern::P10,
                    _ => return Err(Error::parse(lineno, format!("pin pattern must be 01 or 10, got {pat:?}"))),
                };
                f.pin_pair(port(lineno, i, k)?, port(lineno, j, k)?, pattern)?
            }
            ["permute", rest @ ..] => {
                let perm = rest.iter().map(|t| port(lineno, t, k)).collect::<Result<Vec<_>>>()?;
                f.permute(&perm)?
            }
            _ => return Err(Error::parse(lineno, format!("malformed {} line", toks[0]))),
        };
        current = Some(next);
        steps.push(line.to_string());
    }
    blocks.finish_block()?;
    let result = current.ok_or_else(|| Error::parse(0, "script has no `start` line"))?;
    Ok(GateTrace { steps, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExactValue;

    #[test]
    fn loop_and_pin() {
        let text = "signature w arity 2\n01 1\n10 2\nstart diseq4\nloop 1 3 w\n";
        let t = run_gate_script(text, None, FieldMode::Gauss).unwrap();
        // x1 = 0, x3 = 1 forces x2 = 0, x4 = 1: weight 1 on "01"
        assert_eq!(t.result.value_at("01").unwrap(), &ExactValue::from_int(1));
        assert_eq!(t.result.value_at("10").unwrap(), &ExactValue::from_int(2));

        let t = run_gate_script("start diseq4\npin 1 3 10\n", None, FieldMode::Gauss).unwrap();
        assert_eq!(t.result.support().len(), 1);
        assert_eq!(t.steps.len(), 2);
    }

    #[test]
    fn errors() {
        assert!(run_gate_script("tensor neq2\n", None, FieldMode::Gauss).is_err());
        assert!(run_gate_script("start neq2\nloop 1 5\n", None, FieldMode::Gauss).is_err());
        assert!(run_gate_script("start nope\n", None, FieldMode::Gauss).is_err());
    }
}
