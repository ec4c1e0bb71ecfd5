//! Binary disequalities reachable from one signature by self-loops and paths.
//!
//! Step `i` closes all but one port pair of `f` with self-loops weighted from
//! the previous reachable set, normalizes every resulting binary to
//! `≠₂^{1,r}`, and then closes the new ratios under multiplication (path
//! composition). Every element keeps a recipe that rebuilds it as a grid.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ExactValue, RootOrder};
use crate::classify::pairing::matchings_where;
use crate::classify::{ars_constant, symmetry_class, SymmetryClass};
use crate::error::{Error, Result};
use crate::grid::{Grid, Slot};
use crate::signature::{BinaryDiseq, LoopOrientation, Signature};

/// Upper bound on loop configurations tried in one step.
const ENUMERATION_BUDGET: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_steps: usize,
    pub max_size: usize,
    pub order_cap: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_steps: 8,
            max_size: 4096,
            order_cap: 64,
        }
    }
}

/// `steps=8,size=4096,order=64`; omitted keys keep their defaults.
impl FromStr for Caps {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("expected key=value, got {part:?}")))?;
            let n: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad number in {part:?}")))?;
            match k.trim() {
                "steps" => caps.max_steps = n as usize,
                "size" => caps.max_size = n as usize,
                "order" => caps.order_cap = n,
                other => return Err(Error::parse(0, format!("unknown cap {other:?}"))),
            }
        }
        Ok(caps)
    }
}

/// One self-loop of a [`Recipe::Loops`] gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopUse {
    pub ports: (usize, usize),
    /// History index of the weight.
    pub weight: usize,
    pub orientation: LoopOrientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathStep {
    pub entry: usize,
    /// Traverse the entry's gadget with its two ports exchanged.
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Recipe {
    /// `≠₂` itself.
    Base,
    /// `f` with every port except `free` closed by a weighted self-loop.
    Loops { free: (usize, usize), loops: Vec<LoopUse> },
    Path { steps: Vec<PathStep> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HistoryEntry {
    pub step: usize,
    /// The binary the recipe realizes, before normalization.
    pub raw: BinaryDiseq,
    /// `r` in the normalized form `≠₂^{1,r}`.
    pub ratio: ExactValue,
    /// True when normalization exchanged the two entries of `raw`.
    pub swapped: bool,
    pub recipe: Recipe,
}

impl HistoryEntry {
    /// `raw`, turned so that the ratio reads `b / a`.
    pub fn oriented(&self) -> BinaryDiseq {
        if self.swapped {
            self.raw.reversed()
        } else {
            self.raw.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingState {
    pub step: usize,
    /// History indices of the current `B_i`.
    pub b: Vec<usize>,
    /// History indices of the last computed `A_i`.
    pub a: Vec<usize>,
    /// `|B_i|` for `i = 0, 1, …`.
    pub b_sizes: Vec<usize>,
    pub history: Vec<HistoryEntry>,
}

impl GeneratingState {
    pub fn b_ratios(&self) -> Vec<ExactValue> {
        self.b.iter().map(|&k| self.history[k].ratio.clone()).collect()
    }

    pub fn a_ratios(&self) -> Vec<ExactValue> {
        self.a.iter().map(|&k| self.history[k].ratio.clone()).collect()
    }

    /// Open two-port gadget whose gate signature is `history[k].raw`.
    pub fn recipe_grid(&self, f: &Signature, k: usize) -> Result<Grid> {
        let entry = self.history.get(k).ok_or(Error::EmptyInput)?;
        match &entry.recipe {
            Recipe::Base => Ok(Grid::single("neq", Signature::neq2())),
            Recipe::Path { steps } => {
                let parts: Result<Vec<Grid>> = steps
                    .iter()
                    .enumerate()
                    .map(|(n, s)| {
                        let mut g = prefixed(&self.recipe_grid(f, s.entry)?, &format!("p{n}"));
                        if s.reversed {
                            g.dangling.swap(0, 1);
                        }
                        Ok(g)
                    })
                    .collect();
                Grid::chain(&parts?)
            }
            Recipe::Loops { free, loops } => {
                let mut g = Grid::single("f", f.clone());
                let port = |p: usize| Slot::new(0, p);
                for (n, l) in loops.iter().enumerate() {
                    let mut w = prefixed(&self.recipe_grid(f, l.weight)?, &format!("w{n}"));
                    if self.history[l.weight].swapped {
                        w.dangling.swap(0, 1);
                    }
                    let (w1, w2) = (w.dangling[0], w.dangling[1]);
                    let offset = g.vertices.len();
                    let shift = |s: Slot| Slot::new(s.vertex + offset, s.port);
                    let keep = g.dangling.clone();
                    g = g.disjoint_union(&w);
                    g.dangling = keep;
                    let (i, j) = l.ports;
                    let (to_i, to_j) = match l.orientation {
                        LoopOrientation::Ij => (w2, w1),
                        LoopOrientation::Ji => (w1, w2),
                    };
                    g.edges.push((port(i), shift(to_i)));
                    g.edges.push((port(j), shift(to_j)));
                }
                g.dangling = vec![port(free.0), port(free.1)];
                Ok(g)
            }
        }
    }
}

fn prefixed(g: &Grid, prefix: &str) -> Grid {
    let mut g = g.clone();
    for v in &mut g.vertices {
        v.id = format!("{prefix}/{}", v.id);
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RootDescriptor {
    /// `B(f)` is the group of `k`-th roots of unity.
    FiniteGroup(u64),
    /// A generated binary whose ratio `v10 / v01` is not a root of unity.
    NonRoot { value: ExactValue, entry: usize },
    /// Orders of the groups seen, each strictly larger than the last.
    OrderGrowth(Vec<u64>),
    CapExhausted,
    /// A generated binary vanishes on one side: `Δ` itself.
    DeltaDirect { entry: usize },
}

impl fmt::Display for RootDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootDescriptor::FiniteGroup(k) => write!(f, "FiniteGroup({k})"),
            RootDescriptor::NonRoot { value, .. } => write!(f, "NonRoot({value})"),
            RootDescriptor::OrderGrowth(o) => write!(f, "OrderGrowth({o:?})"),
            RootDescriptor::CapExhausted => write!(f, "CapExhausted"),
            RootDescriptor::DeltaDirect { .. } => write!(f, "DeltaDirect"),
        }
    }
}

struct Candidate {
    raw: BinaryDiseq,
    free: (usize, usize),
    loops: Vec<LoopUse>,
}

/// Values at `x_p x_q = 01` and `10` after closing `pairs` with `weights`
/// (already turned according to orientation).
fn close_loops(
    f: &Signature,
    free: (usize, usize),
    pairs: &[(usize, usize)],
    weights: &[(&ExactValue, &ExactValue)],
) -> BinaryDiseq {
    let side = |xp: bool| {
        let base = (!xp as u32) << free.1 | (xp as u32) << free.0;
        let mut total = ExactValue::zero();
        for s in 0..1u32 << pairs.len() {
            let mut alpha = base;
            let mut w = ExactValue::one();
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if s >> k & 1 == 0 {
                    alpha |= 1 << j;
                    w *= weights[k].0;
                } else {
                    alpha |= 1 << i;
                    w *= weights[k].1;
                }
            }
            let v = f.value(alpha);
            if !v.is_zero() && !w.is_zero() {
                total += &(v * &w);
            }
        }
        total
    };
    BinaryDiseq::new(side(false), side(true))
}

fn enumerate_step(f: &Signature, state: &GeneratingState) -> Result<Vec<Candidate>> {
    let k = f.arity();
    let d = k / 2;
    let weights: Vec<(usize, LoopOrientation, BinaryDiseq)> = state
        .b
        .iter()
        .flat_map(|&e| {
            let w = state.history[e].oriented();
            [
                (e, LoopOrientation::Ij, w.clone()),
                (e, LoopOrientation::Ji, w.reversed()),
            ]
        })
        .collect();
    let mut jobs = Vec::new();
    for p in 0..k {
        for q in p + 1..k {
            let rest: Vec<usize> = (0..k).filter(|&x| x != p && x != q).collect();
            for m in matchings_where(rest.len(), &|_, _| true) {
                let pairs: Vec<(usize, usize)> = m.pairs().iter().map(|&(u, v)| (rest[u], rest[v])).collect();
                jobs.push(((p, q), pairs));
            }
        }
    }
    let per_job = (weights.len() as u64).checked_pow((d - 1) as u32).unwrap_or(u64::MAX);
    if per_job.saturating_mul(jobs.len() as u64) > ENUMERATION_BUDGET {
        return Err(Error::EnumerationCap(ENUMERATION_BUDGET));
    }
    let out: Vec<Vec<Candidate>> = jobs
        .par_iter()
        .map(|(free, pairs)| {
            let mut found = Vec::new();
            let mut digits = vec![0usize; pairs.len()];
            loop {
                let ws: Vec<(&ExactValue, &ExactValue)> =
                    digits.iter().map(|&x| (&weights[x].2.a, &weights[x].2.b)).collect();
                let raw = close_loops(f, *free, pairs, &ws);
                if !raw.is_zero() {
                    let loops = pairs
                        .iter()
                        .zip(&digits)
                        .map(|(&ports, &x)| LoopUse {
                            ports,
                            weight: weights[x].0,
                            orientation: weights[x].1,
                        })
                        .collect();
                    found.push(Candidate {
                        raw,
                        free: *free,
                        loops,
                    });
                }
                // mixed-radix increment
                let mut pos = 0;
                while pos < digits.len() {
                    digits[pos] += 1;
                    if digits[pos] < weights.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == digits.len() {
                    break;
                }
            }
            found
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

fn cap_outcome(orders: &[u64]) -> RootDescriptor {
    if orders.len() > 3 {
        RootDescriptor::OrderGrowth(orders.to_vec())
    } else {
        RootDescriptor::CapExhausted
    }
}

/// Run the generating process of `f` until a fixed point, a non-root, a
/// vanishing side, or a cap.
pub fn generating_process(f: &Signature, caps: Caps) -> Result<(RootDescriptor, GeneratingState)> {
    f.require_eo()?;
    if f.arity() < 2 {
        return Err(Error::NotEO(f.label()));
    }
    let mut state = GeneratingState {
        step: 0,
        b: vec![0],
        a: Vec::new(),
        b_sizes: vec![1],
        history: vec![HistoryEntry {
            step: 0,
            raw: BinaryDiseq::neq2(),
            ratio: ExactValue::one(),
            swapped: false,
            recipe: Recipe::Base,
        }],
    };
    let mut index: HashMap<ExactValue, usize> = HashMap::from([(ExactValue::one(), 0)]);
    // Orders of B_0, B_1, … whenever the order strictly grows.
    let mut orders = vec![1u64];
    for step in 1..=caps.max_steps {
        state.step = step;
        let candidates = match enumerate_step(f, &state) {
            Ok(c) => c,
            Err(Error::EnumerationCap(_)) => return Ok((cap_outcome(&orders), state)),
            Err(e) => return Err(e),
        };

        // A_i: one entry per distinct normalized ratio, in enumeration order.
        let mut a_seen: HashMap<ExactValue, usize> = HashMap::new();
        state.a.clear();
        let mut order = *orders.last().unwrap();
        for c in candidates {
            let (norm, swapped) = c.raw.normalized().expect("zero binaries are filtered");
            if a_seen.contains_key(&norm.b) {
                continue;
            }
            let id = state.history.len();
            state.history.push(HistoryEntry {
                step,
                raw: c.raw.clone(),
                ratio: norm.b.clone(),
                swapped,
                recipe: Recipe::Loops {
                    free: c.free,
                    loops: c.loops,
                },
            });
            a_seen.insert(norm.b.clone(), id);
            state.a.push(id);
            if norm.b.is_zero() {
                return Ok((RootDescriptor::DeltaDirect { entry: id }, state));
            }
            match norm.b.root_order(caps.order_cap)? {
                RootOrder::NotRoot => {
                    let value = c.raw.b.checked_div(&c.raw.a)?;
                    return Ok((RootDescriptor::NonRoot { value, entry: id }, state));
                }
                RootOrder::Unknown => return Ok((cap_outcome(&orders), state)),
                RootOrder::Root(o) => order = order.lcm(&o),
            }
        }
        if order > caps.order_cap {
            return Ok((cap_outcome(&orders), state));
        }

        // B_i: multiplicative closure of B_{i-1} ∪ A_i.
        let gens: Vec<usize> = state
            .b
            .iter()
            .copied()
            .chain(state.a.iter().copied().filter(|&a| !index.contains_key(&state.history[a].ratio)))
            .collect();
        let mut members = gens.clone();
        for &g in &gens {
            index.entry(state.history[g].ratio.clone()).or_insert(g);
        }
        let mut frontier = members.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for &g in &gens {
                    let r = &state.history[x].ratio * &state.history[g].ratio;
                    if index.contains_key(&r) {
                        continue;
                    }
                    if members.len() >= caps.max_size {
                        state.b = members;
                        state.b_sizes.push(state.b.len());
                        return Ok((cap_outcome(&orders), state));
                    }
                    let mut steps = path_of(&state, x);
                    steps.extend(path_of(&state, g));
                    let raw = steps.iter().fold(BinaryDiseq::neq2(), |acc, s| {
                        let e = &state.history[s.entry];
                        let w = if s.reversed { e.raw.reversed() } else { e.raw.clone() };
                        acc.compose(&w)
                    });
                    let (norm, swapped) = raw.normalized().expect("product of nonzero binaries");
                    debug_assert_eq!(norm.b, r);
                    let id = state.history.len();
                    state.history.push(HistoryEntry {
                        step,
                        raw,
                        ratio: r.clone(),
                        swapped,
                        recipe: Recipe::Path { steps },
                    });
                    index.insert(r, id);
                    members.push(id);
                    next.push(id);
                }
            }
            frontier = next;
        }
        let grew = members.len() > state.b.len();
        state.b = members;
        state.b_sizes.push(state.b.len());
        if order > *orders.last().unwrap() {
            orders.push(order);
        }
        if !grew {
            return Ok((RootDescriptor::FiniteGroup(order), state));
        }
    }
    Ok((cap_outcome(&orders), state))
}

/// Path steps realizing history entry `k` in its oriented form.
fn path_of(state: &GeneratingState, k: usize) -> Vec<PathStep> {
    let e = &state.history[k];
    match &e.recipe {
        Recipe::Path { steps } if !e.swapped => steps.clone(),
        _ => vec![PathStep {
            entry: k,
            reversed: e.swapped,
        }],
    }
}

/// `(r, s)` with `0 ≤ r < a`, `0 ≤ s < b` and `r·c/a + s·d/b ≡ t/(ab)` modulo 1,
/// i.e. `r·c·b + s·d·a ≡ t (mod ab)`.
pub fn combine_roots(a: i64, c: i64, b: i64, d: i64, t: i64) -> Result<(i64, i64)> {
    if a <= 0 || b <= 0 {
        return Err(Error::CoprimalityError(format!("moduli must be positive, got a={a}, b={b}")));
    }
    for (x, y, what) in [(a, c, "gcd(a,c)"), (b, d, "gcd(b,d)"), (a, b, "gcd(a,b)")] {
        let g = x.gcd(&y);
        if g != 1 {
            return Err(Error::CoprimalityError(format!("{what} = {g}")));
        }
    }
    // r ≡ t·(cb)^{-1} (mod a), s ≡ t·(da)^{-1} (mod b)
    let inv = |x: i64, m: i64| -> i64 {
        let e = (x.rem_euclid(m)).extended_gcd(&m);
        e.x.rem_euclid(m)
    };
    let (a128, b128) = (a as i128, b as i128);
    let r = (t as i128).rem_euclid(a128) * inv((c as i128 * b as i128 % a128) as i64, a) as i128 % a128;
    let s = (t as i128).rem_euclid(b128) * inv((d as i128 * a as i128 % b128) as i64, b) as i128 % b128;
    Ok((r as i64, s as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "route")]
pub enum DeltaRoute {
    /// `Δ` is among the generated binaries.
    Direct,
    /// Polynomial interpolation through powers of `≠₂^{1,x}`.
    Interpolation { x: ExactValue },
    /// Interpolation over a growing family of roots of unity.
    RootLattice,
    /// Finite root group of order at least 3; `f` should satisfy ARS up to a constant.
    Ars,
    /// `B(f) = {≠₂}`; `f` should be D-sym.
    DomainSymmetric,
    /// `B(f) = {≠₂, ≠₂^{1,-1}}`; `f` should be DA-sym.
    DomainAntiSymmetric,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub descriptor: RootDescriptor,
    pub route: DeltaRoute,
    pub symmetry: SymmetryClass,
    pub ars: Option<ExactValue>,
    /// Whether the symmetry forced by the root group holds; `None` when the
    /// route makes no such prediction.
    pub expectation_met: Option<bool>,
    /// Arity 4 with support a complementary pair: two copies joined on two
    /// ports give the pairwise-opposite quaternary signature.
    pub pair_gadget: bool,
    pub notes: Vec<String>,
}

pub fn delta_realizability(f: &Signature, caps: Caps) -> Result<(DeltaReport, GeneratingState)> {
    let (descriptor, state) = generating_process(f, caps)?;
    let (symmetry, ars) = if f.is_zero() {
        (SymmetryClass::Dsym, None)
    } else {
        (symmetry_class(f)?, ars_constant(f)?)
    };
    let supp = f.support();
    let m = crate::signature::full_mask(f.arity());
    let pair_gadget = f.arity() == 4 && supp.len() == 2 && supp[0] ^ supp[1] == m;
    let mut notes = Vec::new();
    let (route, expectation_met) = match &descriptor {
        RootDescriptor::DeltaDirect { .. } => (DeltaRoute::Direct, None),
        RootDescriptor::NonRoot { value, .. } => (DeltaRoute::Interpolation { x: value.clone() }, None),
        RootDescriptor::OrderGrowth(_) => (DeltaRoute::RootLattice, None),
        RootDescriptor::CapExhausted => (DeltaRoute::Undetermined, None),
        RootDescriptor::FiniteGroup(1) => (DeltaRoute::DomainSymmetric, Some(symmetry == SymmetryClass::Dsym)),
        RootDescriptor::FiniteGroup(2) => {
            (DeltaRoute::DomainAntiSymmetric, Some(symmetry == SymmetryClass::DAsym))
        }
        RootDescriptor::FiniteGroup(_) => (DeltaRoute::Ars, Some(ars.is_some())),
    };
    if expectation_met == Some(false) {
        notes.push(format!(
            "finding: {descriptor} but symmetry class is {symmetry:?}"
        ));
    }
    if pair_gadget && matches!(route, DeltaRoute::DomainSymmetric | DeltaRoute::DomainAntiSymmetric) {
        notes.push("pin pairs obtainable from the pairwise-opposite gadget".into());
    }
    Ok((
        DeltaReport {
            descriptor,
            route,
            symmetry,
            ars,
            expectation_met,
            pair_gadget,
            notes,
        },
        state,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> ExactValue {
        ExactValue::from_int(n)
    }

    fn gd(b: ExactValue) -> Signature {
        Signature::gen_diseq_str("0101", v(1), b).unwrap()
    }

    fn replay_all(f: &Signature, st: &GeneratingState) {
        for (k, e) in st.history.iter().enumerate() {
            let g = st.recipe_grid(f, k).unwrap();
            assert_eq!(g.gate_signature().unwrap(), e.raw.to_signature(), "entry {k}");
        }
    }

    #[test]
    fn diseq4_is_trivial_group() {
        let f = Signature::diseq(4).unwrap();
        let (d, st) = generating_process(&f, Caps::default()).unwrap();
        assert_eq!(d, RootDescriptor::FiniteGroup(1));
        assert_eq!(st.b_ratios(), vec![v(1)]);
        replay_all(&f, &st);
    }

    #[test]
    fn fourth_roots() {
        let f = gd(ExactValue::i());
        let (d, st) = generating_process(&f, Caps::default()).unwrap();
        assert_eq!(d, RootDescriptor::FiniteGroup(4));
        let mut got = st.b_ratios();
        got.sort_by_key(|x| x.to_string());
        let mut want: Vec<ExactValue> = (0..4).map(ExactValue::i_pow).collect();
        want.sort_by_key(|x| x.to_string());
        assert_eq!(got, want);
        replay_all(&f, &st);
    }

    #[test]
    fn sign_group_and_non_root() {
        let f = gd(v(-1));
        let (d, st) = generating_process(&f, Caps::default()).unwrap();
        assert_eq!(d, RootDescriptor::FiniteGroup(2));
        replay_all(&f, &st);

        let f = gd(v(2));
        let (d, st) = generating_process(&f, Caps::default()).unwrap();
        let RootDescriptor::NonRoot { value, entry } = d else { panic!("{d:?}") };
        assert_eq!(value, v(2));
        assert_eq!(st.history[entry].step, 1);
        assert_eq!(st.recipe_grid(&f, entry).unwrap().gate_signature().unwrap(), st.history[entry].raw.to_signature());
    }

    #[test]
    fn vanishing_side_is_delta() {
        // x1 x2 free, loop on (x3, x4): 01 side gets 0101 + 0110, 10 side nothing
        let g = Signature::from_strings(4, &[("0101", v(1)), ("0110", v(1))]).unwrap();
        let (d, st) = generating_process(&g, Caps::default()).unwrap();
        let RootDescriptor::DeltaDirect { entry } = d else { panic!("{d:?}") };
        assert_eq!(st.history[entry].raw, BinaryDiseq::new(v(2), v(0)));
        replay_all(&g, &st);
        let (rep, _) = delta_realizability(&g, Caps::default()).unwrap();
        assert_eq!(rep.route, DeltaRoute::Direct);
    }

    #[test]
    fn monotone_sizes() {
        for f in [gd(ExactValue::i()), gd(v(-1)), Signature::diseq(6).unwrap()] {
            let (_, st) = generating_process(&f, Caps::default()).unwrap();
            assert!(st.b_sizes.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn arity_six() {
        let f = Signature::gen_diseq_str("010101", v(1), ExactValue::i()).unwrap();
        let (d, st) = generating_process(&f, Caps::default()).unwrap();
        assert_eq!(d, RootDescriptor::FiniteGroup(4));
        replay_all(&f, &st);
    }

    #[test]
    fn caps_parse() {
        let c: Caps = "steps=3, order=16".parse().unwrap();
        assert_eq!(c.max_steps, 3);
        assert_eq!(c.max_size, 4096);
        assert_eq!(c.order_cap, 16);
        assert!("steps".parse::<Caps>().is_err());
        assert!("depth=2".parse::<Caps>().is_err());
    }

    #[test]
    fn not_eo() {
        let f = Signature::from_strings(2, &[("11", v(1))]).unwrap();
        assert!(matches!(generating_process(&f, Caps::default()), Err(Error::NotEO(_))));
    }

    #[test]
    fn roots_combination() {
        let (r, s) = combine_roots(3, 1, 4, 1, 5).unwrap();
        assert_eq!((r, s), (2, 3));
        assert_eq!((4 * r + 3 * s).rem_euclid(12), 5);
        assert_eq!(combine_roots(1, 1, 7, 1, 12).unwrap(), (0, 5));
        assert_eq!(combine_roots(5, 2, 3, 1, 0).unwrap(), (0, 0));
        assert!(matches!(combine_roots(4, 2, 3, 1, 1), Err(Error::CoprimalityError(_))));
        assert!(matches!(combine_roots(4, 1, 6, 1, 1), Err(Error::CoprimalityError(_))));
    }

    #[test]
    fn realizability_routes() {
        let (rep, _) = delta_realizability(&gd(ExactValue::i()), Caps::default()).unwrap();
        assert_eq!(rep.route, DeltaRoute::Ars);
        assert_eq!(rep.ars, Some(ExactValue::i()));
        assert_eq!(rep.expectation_met, Some(true));
        let (rep, _) = delta_realizability(&gd(v(-1)), Caps::default()).unwrap();
        assert_eq!(rep.route, DeltaRoute::DomainAntiSymmetric);
        assert_eq!(rep.symmetry, SymmetryClass::DAsym);
        assert!(rep.pair_gadget);
        let (rep, _) = delta_realizability(&gd(v(2)), Caps::default()).unwrap();
        assert_eq!(rep.route, DeltaRoute::Interpolation { x: v(2) });
        let (rep, _) = delta_realizability(&Signature::diseq(4).unwrap(), Caps::default()).unwrap();
        assert_eq!(rep.route, DeltaRoute::DomainSymmetric);
        assert_eq!(rep.expectation_met, Some(true));
    }
}
