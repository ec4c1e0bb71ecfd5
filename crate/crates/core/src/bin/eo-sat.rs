//! Minimal DPLL solver for the external oracle backend.
//!
//! Reads DIMACS CNF on stdin, prints `SAT <literals> 0` or `UNSAT`.

use std::io::Read;
use std::process::ExitCode;

struct Cnf {
    vars: usize,
    clauses: Vec<Vec<i64>>,
}

fn parse(text: &str) -> Result<Cnf, String> {
    let mut vars = 0;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let n = rest.split_whitespace().next().ok_or("malformed header")?;
            vars = n.parse().map_err(|_| format!("bad variable count {n:?}"))?;
            continue;
        }
        for t in line.split_whitespace() {
            let l: i64 = t.parse().map_err(|_| format!("bad literal {t:?}"))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                if l.unsigned_abs() as usize > vars {
                    return Err(format!("literal {l} exceeds {vars} variables"));
                }
                cur.push(l);
            }
        }
    }
    if !cur.is_empty() {
        clauses.push(cur);
    }
    Ok(Cnf { vars, clauses })
}

/// `assign[v]`: 0 unset, 1 true, -1 false.
fn value(assign: &[i8], l: i64) -> i8 {
    let a = assign[l.unsigned_abs() as usize];
    if l > 0 {
        a
    } else {
        -a
    }
}

fn solve(cnf: &Cnf, assign: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    // unit propagation to a fixed point
    loop {
        let mut unit = None;
        for c in &cnf.clauses {
            let mut open = None;
            let mut n_open = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        n_open += 1;
                        open = Some(l);
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            if n_open == 0 {
                for v in trail {
                    assign[v] = 0;
                }
                return false;
            }
            if n_open == 1 {
                unit = open;
                break;
            }
        }
        match unit {
            Some(l) => {
                let v = l.unsigned_abs() as usize;
                assign[v] = if l > 0 { 1 } else { -1 };
                trail.push(v);
            }
            None => break,
        }
    }
    let Some(v) = (1..=cnf.vars).find(|&v| assign[v] == 0) else {
        return true;
    };
    for choice in [-1, 1] {
        assign[v] = choice;
        if solve(cnf, assign) {
            return true;
        }
    }
    assign[v] = 0;
    for v in trail {
        assign[v] = 0;
    }
    false
}

fn main() -> ExitCode {
    let mut text = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut text) {
        eprintln!("eo-sat: {e}");
        return ExitCode::from(2);
    }
    let cnf = match parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("eo-sat: {e}");
            return ExitCode::from(2);
        }
    };
    let mut assign = vec![0i8; cnf.vars + 1];
    if solve(&cnf, &mut assign) {
        let lits: Vec<String> = (1..=cnf.vars)
            .map(|v| if assign[v] > 0 { v.to_string() } else { format!("-{v}") })
            .collect();
        println!("SAT {} 0", lits.join(" "));
    } else {
        println!("UNSAT");
    }
    ExitCode::SUCCESS
}
