//! Linear algebra over F₂.
//!
//! Signature-level bit strings are `u32` masks (bit `j` is variable `x_{j+1}`);
//! grid-level systems with many unknowns use [`F2Row`].

use crate::error::{Error, Result};

/// Affine subspace `offset ⊕ span(basis)` of `F₂^dimension`.
///
/// The basis is kept in reduced row-echelon form: each vector owns a pivot bit
/// that is clear in every other basis vector, so coordinates of a member are
/// read directly off the pivot positions.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AffineSpace {
    pub dimension: usize,
    pub offset: u32,
    pub basis: Vec<u32>,
    pub pivots: Vec<u32>,
}

impl AffineSpace {
    pub fn point(dimension: usize, offset: u32) -> Self {
        AffineSpace {
            dimension,
            offset,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.basis.len()
    }

    fn reduce_vector(&self, mut v: u32) -> u32 {
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if v & p != 0 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, alpha: u32) -> bool {
        self.reduce_vector(alpha ^ self.offset) == 0
    }

    /// Coordinates `t` with `alpha = offset ⊕ Σ t_i basis_i`, if `alpha` is a member.
    pub fn coordinates(&self, alpha: u32) -> Option<u32> {
        let v = alpha ^ self.offset;
        if self.reduce_vector(v) != 0 {
            return None;
        }
        let mut t = 0;
        for (i, &p) in self.pivots.iter().enumerate() {
            if v & p != 0 {
                t |= 1 << i;
            }
        }
        Some(t)
    }

    /// Member with the given coordinates.
    pub fn at(&self, t: u32) -> u32 {
        let mut v = self.offset;
        for (i, b) in self.basis.iter().enumerate() {
            if t >> i & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0..(1u32 << self.basis.len())).map(move |t| self.at(t))
    }

    // Inserts a direction vector; returns false when it is already spanned.
    fn insert(&mut self, v: u32) -> bool {
        let v = self.reduce_vector(v);
        if v == 0 {
            return false;
        }
        let pivot = 1u32 << v.trailing_zeros();
        for b in self.basis.iter_mut() {
            if *b & pivot != 0 {
                *b ^= v;
            }
        }
        self.basis.push(v);
        self.pivots.push(pivot);
        // keep basis sorted by pivot for a canonical form
        let mut order: Vec<usize> = (0..self.basis.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        self.basis = order.iter().map(|&i| self.basis[i]).collect();
        self.pivots = order.iter().map(|&i| self.pivots[i]).collect();
        true
    }

    /// Canonical offset: the member whose pivot coordinates are all zero.
    fn canonical_offset(&self) -> u32 {
        self.reduce_vector(self.offset)
    }
}

/// Smallest affine space containing every input string.
///
/// The offset is the first input string, so callers can rely on it being a
/// member of the input set.
pub fn f2_affine_span(strings: &[u32], dimension: usize) -> Result<AffineSpace> {
    let (&first, rest) = strings.split_first().ok_or(Error::EmptyInput)?;
    let mask = if dimension >= 32 { u32::MAX } else { (1u32 << dimension) - 1 };
    if strings.iter().any(|s| s & !mask != 0) {
        return Err(Error::ArityMismatch {
            expected: dimension,
            found: 32 - strings.iter().map(|s| s.leading_zeros()).min().unwrap_or(32) as usize,
        });
    }
    let mut space = AffineSpace::point(dimension, first);
    for &s in rest {
        space.insert(s ^ first);
    }
    Ok(space)
}

impl AffineSpace {
    /// Two spaces are the same set iff they have equal bases and equal
    /// canonical offsets.
    pub fn same_set(&self, other: &AffineSpace) -> bool {
        self.dimension == other.dimension
            && self.basis == other.basis
            && self.canonical_offset() == other.canonical_offset()
    }
}

/// Dense row over F₂ with an appended constant bit, used for affine equations
/// `Σ a_j y_j = c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Row {
    words: Vec<u64>,
    pub constant: bool,
}

impl F2Row {
    pub fn zeros(n: usize) -> Self {
        F2Row {
            words: vec![0; n.div_ceil(64).max(1)],
            constant: false,
        }
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut r = Self::zeros(n);
        r.set(j, true);
        r
    }

    pub fn constant(n: usize, c: bool) -> Self {
        let mut r = Self::zeros(n);
        r.constant = c;
        r
    }

    pub fn get(&self, j: usize) -> bool {
        self.words[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, j: usize, b: bool) {
        if b {
            self.words[j / 64] |= 1 << (j % 64);
        } else {
            self.words[j / 64] &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, j: usize) {
        self.words[j / 64] ^= 1 << (j % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Row) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        self.constant ^= other.constant;
    }

    pub fn is_zero_linear(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Value of the affine form at a point given as a bit slice.
    pub fn eval(&self, point: &[bool]) -> bool {
        self.ones().fold(self.constant, |acc, j| acc ^ point[j])
    }
}

/// Solution set of an affine system: each unknown written as an affine form of
/// the free unknowns (indexed `0..free.len()`).
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub free: Vec<usize>,
    pub forms: Vec<F2Row>,
}

/// Gaussian elimination for `rows` (each `Σ a_j y_j = constant`) over `n`
/// unknowns. Returns `None` when the system is inconsistent.
pub fn solve_affine_system(rows: &[F2Row], n: usize) -> Option<AffineSolution> {
    let mut pivots: Vec<(usize, F2Row)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (p, pr) in &pivots {
            if r.get(*p) {
                r.xor_assign(pr);
            }
        }
        match r.first_one() {
            None => {
                if r.constant {
                    return None;
                }
            }
            Some(p) => {
                for (_, pr) in pivots.iter_mut() {
                    if pr.get(p) {
                        pr.xor_assign(&r);
                    }
                }
                pivots.push((p, r));
            }
        }
    }
    let mut is_pivot = vec![None; n];
    for (idx, (p, _)) in pivots.iter().enumerate() {
        is_pivot[*p] = Some(idx);
    }
    let free: Vec<usize> = (0..n).filter(|j| is_pivot[*j].is_none()).collect();
    let mut free_index = vec![usize::MAX; n];
    for (k, &j) in free.iter().enumerate() {
        free_index[j] = k;
    }
    let nf = free.len();
    let forms = (0..n)
        .map(|j| match is_pivot[j] {
            None => F2Row::unit(nf, free_index[j]),
            Some(idx) => {
                // y_p + Σ_{free} a_f y_f = c  =>  y_p = c + Σ a_f y_f
                let pr = &pivots[idx].1;
                let mut form = F2Row::constant(nf, pr.constant);
                for f in pr.ones() {
                    if f != j {
                        form.flip(free_index[f]);
                    }
                }
                form
            }
        })
        .collect();
    Some(AffineSolution { free, forms })
}

pub fn bits_to_string(alpha: u32, arity: usize) -> String {
    (0..arity)
        .map(|j| if alpha >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub fn parse_bits(s: &str) -> Option<(u32, usize)> {
    if s.is_empty() || s.len() > 32 {
        return None;
    }
    let mut v = 0;
    for (j, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => v |= 1 << j,
            _ => return None,
        }
    }
    Some((v, s.len()))
}
