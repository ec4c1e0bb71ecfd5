//! Exact evaluation of closed grids whose vertices all lie in `𝒜`.
//!
//! Support constraints of every vertex become one affine system over the edge
//! bits; the remaining phase is a `Z₄`-valued quadratic form over the free
//! bits, summed by eliminating one variable at a time.

use crate::algebra::f2::{solve_affine_system, F2Row};
use crate::algebra::ExactValue;
use crate::classify::{membership_a, Membership};
use crate::error::{Error, Result};
use crate::grid::{Grid, SlotUse};

/// `c + Σ λ_j s_j + 2 Σ_{j<l} μ_jl s_j s_l (mod 4)` over `s ∈ F₂^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z4Form {
    pub n: usize,
    pub constant: u8,
    pub linear: Vec<u8>,
    // symmetric, zero diagonal
    quad: Vec<F2Row>,
}

impl Z4Form {
    pub fn new(n: usize) -> Self {
        Z4Form {
            n,
            constant: 0,
            linear: vec![0; n],
            quad: vec![F2Row::zeros(n); n],
        }
    }

    pub fn mu(&self, i: usize, j: usize) -> bool {
        i != j && self.quad[i].get(j)
    }

    /// Adds `2 s_i s_j`; on the diagonal that is `2 s_i`.
    pub fn toggle(&mut self, i: usize, j: usize) {
        if i == j {
            self.linear[i] = (self.linear[i] + 2) % 4;
        } else {
            self.quad[i].flip(j);
            self.quad[j].flip(i);
        }
    }

    /// Adds `l · [t]`, where `[t] ∈ {0, 1}` is the value of the affine form `t`.
    pub fn add_scaled_xor(&mut self, l: u8, t: &F2Row) {
        let l = l % 4;
        if l == 0 {
            return;
        }
        let ones: Vec<usize> = t.ones().collect();
        // c ⊕ s_1 ⊕ … ⊕ s_m = c + Σ s_j − 2c Σ s_j − 2 Σ_{j<l} s_j s_l
        if t.constant {
            self.constant = (self.constant + l) % 4;
        }
        let per = if t.constant { (4 - l) % 4 } else { l };
        for &j in &ones {
            self.linear[j] = (self.linear[j] + per) % 4;
        }
        if l % 2 == 1 {
            for (x, &i) in ones.iter().enumerate() {
                for &j in &ones[x + 1..] {
                    self.toggle(i, j);
                }
            }
        }
    }

    /// Adds `2 [t1] [t2]`.
    pub fn add_twice_product(&mut self, t1: &F2Row, t2: &F2Row) {
        if t1.constant && t2.constant {
            self.constant = (self.constant + 2) % 4;
        }
        if t1.constant {
            for j in t2.ones() {
                self.linear[j] = (self.linear[j] + 2) % 4;
            }
        }
        if t2.constant {
            for j in t1.ones() {
                self.linear[j] = (self.linear[j] + 2) % 4;
            }
        }
        let b: Vec<usize> = t2.ones().collect();
        for i in t1.ones() {
            for &j in &b {
                self.toggle(i, j);
            }
        }
    }

    pub fn eval(&self, s: &[bool]) -> u8 {
        let mut e = self.constant as u32;
        for j in 0..self.n {
            if s[j] {
                e += self.linear[j] as u32;
                for l in j + 1..self.n {
                    if s[l] && self.quad[j].get(l) {
                        e += 2;
                    }
                }
            }
        }
        (e % 4) as u8
    }

    fn clear(&mut self, k: usize) -> F2Row {
        let row = std::mem::replace(&mut self.quad[k], F2Row::zeros(self.n));
        for j in row.ones() {
            self.quad[j].set(k, false);
        }
        self.linear[k] = 0;
        row
    }

    /// `Σ_s i^{Q(s)}` by variable elimination.
    ///
    /// Summing out `s_k` leaves `1 + i^{λ_k} (−1)^{L(s)}` with `L` the
    /// `μ`-row of `k`. For even `λ_k` this is `2·[L = λ_k/2]`, an affine
    /// constraint used to eliminate a second variable. For odd `λ_k` it is
    /// `(1 + i^{λ_k}) · i^{−λ_k · L}`, which folds back into the form.
    pub fn gauss_sum(&self) -> ExactValue {
        let mut f = self.clone();
        let mut active = vec![true; f.n];
        let mut factor = ExactValue::one();
        let two = ExactValue::from_int(2);
        while let Some(k) = active.iter().position(|&a| a) {
            active[k] = false;
            let lambda = f.linear[k];
            let l = f.clear(k);
            if lambda % 2 == 1 {
                factor *= &(ExactValue::one() + ExactValue::i_pow(lambda as i64));
                f.add_scaled_xor((4 - lambda) % 4, &l);
                continue;
            }
            let Some(m) = l.first_one() else {
                if lambda == 0 {
                    factor *= &two;
                    continue;
                }
                return ExactValue::zero();
            };
            factor *= &two;
            // s_m = λ/2 ⊕ Σ_{j ∈ L, j ≠ m} s_j
            let mut t = l;
            t.set(m, false);
            t.constant = lambda == 2;
            let lm = f.linear[m];
            let rm = f.clear(m);
            active[m] = false;
            f.add_scaled_xor(lm, &t);
            for j in rm.ones() {
                f.add_twice_product(&t, &F2Row::unit(f.n, j));
            }
        }
        factor * ExactValue::i_pow(f.constant as i64)
    }

    /// `Σ_s i^{Q(s)}` by enumeration; `n ≤ 24`.
    pub fn gauss_sum_enumerate(&self) -> Result<ExactValue> {
        const MAX: usize = 24;
        if self.n > MAX {
            return Err(Error::CapExceeded { arity: self.n, cap: MAX });
        }
        let mut count = [0i64; 4];
        let mut s = vec![false; self.n];
        for x in 0..1u64 << self.n {
            for (j, b) in s.iter_mut().enumerate() {
                *b = x >> j & 1 == 1;
            }
            count[self.eval(&s) as usize] += 1;
        }
        Ok(ExactValue::gaussian_int(count[0] - count[2], count[1] - count[3]))
    }
}

/// Port bit of every vertex as an affine form over the edge bits.
pub(crate) fn port_forms(grid: &Grid) -> Result<Vec<Vec<F2Row>>> {
    let ne = grid.edges.len();
    grid.slot_uses()
        .into_iter()
        .map(|uses| {
            uses.into_iter()
                .map(|u| match u {
                    SlotUse::Edge { edge, first } => {
                        let mut r = F2Row::unit(ne, edge);
                        r.constant = !first;
                        Ok(r)
                    }
                    SlotUse::Dangling(_) => Err(Error::OpenGrid),
                    SlotUse::Unused => Ok(F2Row::zeros(ne)),
                })
                .collect()
        })
        .collect()
}

fn substitute(form: &F2Row, forms: &[F2Row], nf: usize) -> F2Row {
    let mut out = F2Row::constant(nf, form.constant);
    for j in form.ones() {
        out.xor_assign(&forms[j]);
    }
    out
}

/// The scalar `Π λ_v` and phase form, or `None` when no assignment is in
/// every support.
pub fn affine_system(grid: &Grid) -> Result<Option<(ExactValue, Z4Form)>> {
    if !grid.is_closed() {
        return Err(Error::OpenGrid);
    }
    grid.ensure_valid()?;
    let ne = grid.edges.len();
    let ports = port_forms(grid)?;
    let mut certs = Vec::with_capacity(grid.vertices.len());
    for v in &grid.vertices {
        match membership_a(&v.signature) {
            Err(Error::ZeroSignature) => return Ok(None),
            Err(e) => return Err(e),
            Ok(Membership::Refuted(_)) => return Err(Error::NonAffineVertex(v.id.clone())),
            Ok(Membership::Member(c)) => certs.push(c),
        }
    }
    let mut rows = Vec::new();
    let mut coords: Vec<Vec<F2Row>> = Vec::with_capacity(certs.len());
    for (forms, cert) in ports.iter().zip(&certs) {
        let shifted: Vec<F2Row> = forms
            .iter()
            .enumerate()
            .map(|(p, r)| {
                let mut r = r.clone();
                r.constant ^= cert.space.offset >> p & 1 == 1;
                r
            })
            .collect();
        let pivot_bits: Vec<usize> = cert.space.pivots.iter().map(|p| p.trailing_zeros() as usize).collect();
        for b in 0..forms.len() {
            if pivot_bits.contains(&b) {
                continue;
            }
            let mut row = shifted[b].clone();
            for (basis, &pb) in cert.space.basis.iter().zip(&pivot_bits) {
                if basis >> b & 1 == 1 {
                    row.xor_assign(&shifted[pb]);
                }
            }
            rows.push(row);
        }
        coords.push(pivot_bits.iter().map(|&pb| shifted[pb].clone()).collect());
    }
    let Some(sol) = solve_affine_system(&rows, ne) else {
        return Ok(None);
    };
    let nf = sol.free.len();
    let mut form = Z4Form::new(nf);
    let mut scale = ExactValue::one();
    for (cert, t) in certs.iter().zip(&coords) {
        scale *= &cert.lambda;
        let t: Vec<F2Row> = t.iter().map(|r| substitute(r, &sol.forms, nf)).collect();
        for (k, &l) in cert.linear.iter().enumerate() {
            form.add_scaled_xor(l, &t[k]);
        }
        for &(a, b) in &cert.quadratic {
            form.add_twice_product(&t[a], &t[b]);
        }
    }
    Ok(Some((scale, form)))
}

/// Partition function of a closed grid over `𝒜` signatures.
pub fn eval_affine(grid: &Grid) -> Result<ExactValue> {
    Ok(match affine_system(grid)? {
        None => ExactValue::zero(),
        Some((scale, form)) => scale * form.gauss_sum(),
    })
}

/// As [`eval_affine`], summing the phase by enumeration of the free bits.
pub fn eval_affine_enumerate(grid: &Grid) -> Result<ExactValue> {
    Ok(match affine_system(grid)? {
        None => ExactValue::zero(),
        Some((scale, form)) => scale * form.gauss_sum_enumerate()?,
    })
}
