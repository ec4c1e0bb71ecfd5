//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use eo_core::signature::{full_mask, is_balanced, is_heavy, BinaryDiseq};
use eo_core::{ExactValue, Grid, Signature, Slot};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn v(n: i64) -> ExactValue {
    ExactValue::from_int(n)
}

/// Closed grid on `sigs` with a shuffled pairing of all ports.
pub fn random_closed(sigs: &[Signature], rng: &mut ChaCha8Rng) -> Grid {
    let mut g = Grid::new();
    let mut ports = Vec::new();
    for (i, s) in sigs.iter().enumerate() {
        let id = g.add_vertex(format!("v{i}"), s.clone());
        ports.extend((0..s.arity()).map(|p| Slot::new(id, p)));
    }
    assert!(ports.len() % 2 == 0, "odd total arity");
    ports.shuffle(rng);
    for pair in ports.chunks(2) {
        g.connect(pair[0].vertex, pair[0].port, pair[1].vertex, pair[1].port);
    }
    g
}

/// Between 1 and `max_vertices` arities in `1..=max_arity` with an even sum
/// of at most `2 * max_edges`.
pub fn arities(rng: &mut ChaCha8Rng, max_vertices: usize, max_arity: usize, max_edges: usize) -> Vec<usize> {
    loop {
        let k = rng.gen_range(1..=max_vertices);
        let a: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=max_arity)).collect();
        let s: usize = a.iter().sum();
        if s % 2 == 0 && s <= 2 * max_edges {
            return a;
        }
    }
}

/// `λ · χ_{x ∈ a + span} · i^{L(x) + 2Q(x)}` on `n` bits.
pub fn random_affine(n: usize, rng: &mut ChaCha8Rng) -> Signature {
    let constraints: Vec<(u32, bool)> = (0..rng.gen_range(0..n))
        .map(|_| (rng.gen_range(1..=full_mask(n)), rng.gen()))
        .collect();
    let lin: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let quad: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    let lambda = ExactValue::i_pow(rng.gen_range(0..4)) * v(rng.gen_range(1..3));
    Signature::from_fn(n, |x| {
        if constraints.iter().any(|&(m, c)| ((x & m).count_ones() % 2 == 1) != c) {
            return ExactValue::zero();
        }
        let bit = |i: usize| (x >> i & 1) as i64;
        let mut e: i64 = (0..n).map(|i| lin[i] * bit(i)).sum();
        e += quad.iter().map(|&(i, j)| 2 * bit(i) * bit(j)).sum::<i64>();
        &lambda * &ExactValue::i_pow(e)
    })
    .unwrap()
}

/// Tensor of unaries, binary disequalities and arity-3 generalized
/// disequalities, with a random port order.
pub fn random_product(n: usize, rng: &mut ChaCha8Rng) -> Signature {
    let w = |rng: &mut ChaCha8Rng| v(rng.gen_range(0..4));
    let mut sig = Signature::constant(ExactValue::one());
    let mut left = n;
    while left > 0 {
        let k = rng.gen_range(1..=left.min(3));
        let part = match k {
            1 => Signature::new(1, vec![w(rng), w(rng)]).unwrap(),
            2 => BinaryDiseq::new(w(rng), w(rng)).to_signature(),
            _ => Signature::gen_diseq(rng.gen_range(0..8), 3, w(rng), w(rng)).unwrap(),
        };
        sig = sig.tensor(&part).unwrap();
        left -= k;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    sig.permute(&perm).unwrap()
}

/// Signature with each string passing `keep` set to a value in `1..=2`
/// with probability `p`, zero elsewhere.
pub fn random_supported(arity: usize, p: f64, keep: impl Fn(u32) -> bool, rng: &mut ChaCha8Rng) -> Signature {
    let values = (0..1u32 << arity)
        .map(|a| {
            if keep(a) && rng.gen_bool(p) {
                v(rng.gen_range(1..3))
            } else {
                ExactValue::zero()
            }
        })
        .collect();
    Signature::new(arity, values).unwrap()
}

pub fn random_eo(arity: usize, rng: &mut ChaCha8Rng) -> Signature {
    random_supported(arity, 0.6, |a| is_balanced(a, arity), rng)
}

/// Support on strings with at least as many ones as zeros.
pub fn random_eo_ge(arity: usize, rng: &mut ChaCha8Rng) -> Signature {
    random_supported(arity, 0.5, |a| is_balanced(a, arity) || is_heavy(a, arity), rng)
}

/// Support on strings of Hamming weight `d`.
pub fn random_single_weighted(arity: usize, d: usize, rng: &mut ChaCha8Rng) -> Signature {
    random_supported(arity, 0.7, |a| a.count_ones() as usize == d, rng)
}

/// Support `{1100, 1010, 1001}` with values `(1, 1, 2)`.
pub fn quaternary_up() -> Signature {
    Signature::from_strings(4, &[("1100", v(1)), ("1010", v(1)), ("1001", v(2))]).unwrap()
}
