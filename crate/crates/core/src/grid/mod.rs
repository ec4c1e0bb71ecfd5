//! Signature grids and gates.
//!
//! Every internal edge is an implicit `≠₂`; dangling slots are raw external
//! variables in the order they were declared.

pub mod engine;
pub mod io;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::ExactValue;
use crate::error::{Error, Result};
use crate::signature::{BinaryDiseq, Signature};

pub use engine::{enumeration_cap, set_enumeration_cap, DEFAULT_ENUMERATION_CAP};

/// A `(vertex, port)` pair; both indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub vertex: usize,
    pub port: usize,
}

impl Slot {
    pub fn new(vertex: usize, port: usize) -> Self {
        Slot { vertex, port }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub signature: Signature,
}

/// How a slot is wired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotUse {
    /// Endpoint of edge `edge`; `first` slots read the edge bit directly.
    Edge { edge: usize, first: bool },
    Dangling(usize),
    Unused,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Grid {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Slot, Slot)>,
    pub dangling: Vec<Slot>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Issue {
    PortCountMismatch {
        vertex: String,
        arity: usize,
        wired: usize,
    },
    PortOutOfRange {
        vertex: String,
        port: usize,
    },
    DoubleUse {
        vertex: String,
        port: usize,
    },
    UnknownVertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub valid: bool,
    pub closed: bool,
    pub all_eo: bool,
    pub issues: Vec<Issue>,
}

/// A `Δ` vertex; `one_port` is the port forced to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaOccurrence {
    pub vertex: usize,
    pub one_port: usize,
}

impl Grid {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, signature: Signature) -> usize {
        self.vertices.push(Vertex {
            id: id.into(),
            signature,
        });
        self.vertices.len() - 1
    }

    /// Internal edge between two 0-based slots.
    pub fn connect(&mut self, u: usize, p: usize, v: usize, q: usize) {
        self.edges.push((Slot::new(u, p), Slot::new(v, q)));
    }

    pub fn dangle(&mut self, v: usize, p: usize) {
        self.dangling.push(Slot::new(v, p));
    }

    pub fn is_closed(&self) -> bool {
        self.dangling.is_empty()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn validate(&self) -> Diagnostics {
        let mut issues = Vec::new();
        let mut used: HashMap<Slot, usize> = HashMap::new();
        let slots = self
            .edges
            .iter()
            .flat_map(|(s, t)| [*s, *t])
            .chain(self.dangling.iter().copied());
        for s in slots {
            let Some(v) = self.vertices.get(s.vertex) else {
                issues.push(Issue::UnknownVertex(s.vertex));
                continue;
            };
            if s.port >= v.signature.arity() {
                issues.push(Issue::PortOutOfRange {
                    vertex: v.id.clone(),
                    port: s.port + 1,
                });
                continue;
            }
            let n = used.entry(s).or_insert(0);
            *n += 1;
            if *n == 2 {
                issues.push(Issue::DoubleUse {
                    vertex: v.id.clone(),
                    port: s.port + 1,
                });
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let wired = (0..v.signature.arity())
                .filter(|&p| used.contains_key(&Slot::new(i, p)))
                .count();
            if wired != v.signature.arity() {
                issues.push(Issue::PortCountMismatch {
                    vertex: v.id.clone(),
                    arity: v.signature.arity(),
                    wired,
                });
            }
        }
        Diagnostics {
            valid: issues.is_empty(),
            closed: self.dangling.is_empty(),
            all_eo: self.vertices.iter().all(|v| v.signature.is_eo()),
            issues,
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let d = self.validate();
        match d.issues.first() {
            None => Ok(()),
            Some(issue) => Err(Error::InvalidGrid(format!("{issue:?}"))),
        }
    }

    /// Wiring of every slot, indexed `[vertex][port]`.
    pub fn slot_uses(&self) -> Vec<Vec<SlotUse>> {
        let mut uses: Vec<Vec<SlotUse>> = self
            .vertices
            .iter()
            .map(|v| vec![SlotUse::Unused; v.signature.arity()])
            .collect();
        for (e, (s, t)) in self.edges.iter().enumerate() {
            uses[s.vertex][s.port] = SlotUse::Edge { edge: e, first: true };
            uses[t.vertex][t.port] = SlotUse::Edge { edge: e, first: false };
        }
        for (k, s) in self.dangling.iter().enumerate() {
            uses[s.vertex][s.port] = SlotUse::Dangling(k);
        }
        uses
    }

    /// Local string seen by each vertex under edge bits `y` (closed grids).
    pub fn local_strings(&self, y: &[bool]) -> Vec<u32> {
        let plan = engine::Plan::new(self);
        (0..self.vertices.len())
            .map(|v| plan.local_index(v, y, &[]))
            .collect()
    }

    /// Partition function by enumeration of edge orientations.
    pub fn brute_force_partition(&self) -> Result<ExactValue> {
        if !self.is_closed() {
            return Err(Error::OpenGrid);
        }
        self.ensure_valid()?;
        let plan = engine::Plan::new(self);
        engine::sum(self, &plan, &[])
    }

    /// Signature over the dangling slots, in declaration order.
    pub fn gate_signature(&self) -> Result<Signature> {
        if self.is_closed() {
            return Err(Error::ClosedGrid);
        }
        self.ensure_valid()?;
        let m = self.dangling.len();
        let cap = crate::signature::arity_cap();
        if m > cap {
            return Err(Error::CapExceeded { arity: m, cap });
        }
        let plan = engine::Plan::new(self);
        let values: Result<Vec<ExactValue>> = (0..1u32 << m)
            .into_par_iter()
            .map(|a| {
                let ext: Vec<bool> = (0..m).map(|k| a >> k & 1 == 1).collect();
                engine::sum(self, &plan, &ext)
            })
            .collect();
        let ports = self
            .dangling
            .iter()
            .map(|s| format!("{}.{}", self.vertices[s.vertex].id, s.port + 1))
            .collect();
        Signature::new(m, values?)?.with_ports(ports)
    }

    pub fn with_signature(&self, v: usize, sig: Signature) -> Grid {
        let mut g = self.clone();
        g.vertices[v].signature = sig;
        g
    }

    /// Vertices carrying `Δ` (value 1 on exactly one of `01`, `10`).
    pub fn delta_occurrences(&self) -> Vec<DeltaOccurrence> {
        let delta = Signature::delta();
        let reversed = BinaryDiseq::delta().reversed().to_signature();
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                if v.signature == delta {
                    Some(DeltaOccurrence {
                        vertex: i,
                        one_port: 1,
                    })
                } else if v.signature == reversed {
                    Some(DeltaOccurrence {
                        vertex: i,
                        one_port: 0,
                    })
                } else {
                    None
                }
            })
            .collect()
    }

    /// Replace vertex `v` by an open gadget whose `t`-th dangling slot takes
    /// the place of port `t`. Gadget vertex ids are prefixed with `v`'s id.
    pub fn splice(&self, v: usize, gadget: &Grid) -> Result<Grid> {
        let arity = self.vertices[v].signature.arity();
        if gadget.dangling.len() != arity {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: gadget.dangling.len(),
            });
        }
        let mut out = Grid::new();
        let mut remap = vec![usize::MAX; self.vertices.len()];
        for (i, vert) in self.vertices.iter().enumerate() {
            if i != v {
                remap[i] = out.add_vertex(vert.id.clone(), vert.signature.clone());
            }
        }
        let offset = out.vertices.len();
        let prefix = &self.vertices[v].id;
        for vert in &gadget.vertices {
            out.add_vertex(format!("{prefix}/{}", vert.id), vert.signature.clone());
        }
        let inner = |s: Slot| Slot::new(s.vertex + offset, s.port);
        for &(s, t) in &gadget.edges {
            out.edges.push((inner(s), inner(t)));
        }
        let map = |s: Slot| {
            if s.vertex == v {
                inner(gadget.dangling[s.port])
            } else {
                Slot::new(remap[s.vertex], s.port)
            }
        };
        for &(s, t) in &self.edges {
            out.edges.push((map(s), map(t)));
        }
        out.dangling = self.dangling.iter().map(|&s| map(s)).collect();
        Ok(out)
    }

    /// Disjoint union; `other`'s dangling slots follow `self`'s.
    pub fn disjoint_union(&self, other: &Grid) -> Grid {
        let mut out = self.clone();
        let offset = self.vertices.len();
        out.vertices.extend(other.vertices.iter().cloned());
        let shift = |s: Slot| Slot::new(s.vertex + offset, s.port);
        out.edges
            .extend(other.edges.iter().map(|&(s, t)| (shift(s), shift(t))));
        out.dangling.extend(other.dangling.iter().map(|&s| shift(s)));
        out
    }

    /// Join dangling slots `i` and `j` (positions in the dangling list) by an
    /// internal edge.
    pub fn close_pair(&self, i: usize, j: usize) -> Result<Grid> {
        if i == j || i >= self.dangling.len() || j >= self.dangling.len() {
            return Err(Error::PortError(format!("cannot join dangling {i} and {j}")));
        }
        let mut out = self.clone();
        out.edges.push((self.dangling[i], self.dangling[j]));
        out.dangling = self
            .dangling
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && *k != j)
            .map(|(_, s)| *s)
            .collect();
        Ok(out)
    }

    /// One-vertex gate exposing all ports of `sig`.
    pub fn single(id: &str, sig: Signature) -> Grid {
        let mut g = Grid::new();
        let k = sig.arity();
        let v = g.add_vertex(id, sig);
        for p in 0..k {
            g.dangle(v, p);
        }
        g
    }

    /// Path of binary gates: each gate's second dangling slot is joined to the
    /// next gate's first. Composes `≠₂^{a,b}` parameters multiplicatively.
    pub fn chain(gates: &[Grid]) -> Result<Grid> {
        let (first, rest) = gates.split_first().ok_or(Error::EmptyInput)?;
        let mut out = first.clone();
        for g in rest {
            if out.dangling.len() != 2 || g.dangling.len() != 2 {
                return Err(Error::ArityMismatch {
                    expected: 2,
                    found: g.dangling.len().max(out.dangling.len()),
                });
            }
            let joined = out.disjoint_union(g);
            // dangling: [a1, a2, b1, b2]; join a2–b1
            out = joined.close_pair(1, 2)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::{LoopOrientation, PinPattern};

    fn v(n: i64) -> ExactValue {
        ExactValue::from_int(n)
    }

    fn deq4_closed() -> Grid {
        let mut g = Grid::new();
        let a = g.add_vertex("a", Signature::diseq(4).unwrap());
        g.connect(a, 0, a, 2);
        g.connect(a, 1, a, 3);
        g
    }

    #[test]
    fn validation() {
        let d = deq4_closed().validate();
        assert!(d.valid && d.closed && d.all_eo);
        let mut g = Grid::new();
        let a = g.add_vertex("a", Signature::diseq(4).unwrap());
        g.connect(a, 0, a, 2);
        g.dangle(a, 1);
        let d = g.validate();
        assert!(!d.valid);
        assert!(matches!(d.issues[0], Issue::PortCountMismatch { wired: 3, .. }));
        let mut g = Grid::new();
        let a = g.add_vertex("a", Signature::delta0());
        g.dangle(a, 0);
        let d = g.validate();
        assert!(d.valid && !d.closed);
        g.dangle(a, 0);
        assert!(matches!(g.validate().issues[0], Issue::DoubleUse { .. }));
    }

    #[test]
    fn partition_examples() {
        assert_eq!(deq4_closed().brute_force_partition().unwrap(), v(2));
        let mut g = Grid::new();
        let a = g.add_vertex("n", Signature::neq2());
        g.connect(a, 0, a, 1);
        assert_eq!(g.brute_force_partition().unwrap(), v(2));
        let mut g = Grid::new();
        let a = g.add_vertex(
            "f",
            Signature::gen_diseq_str("0101", v(1), ExactValue::i()).unwrap(),
        );
        g.connect(a, 0, a, 1);
        g.connect(a, 2, a, 3);
        assert_eq!(g.brute_force_partition().unwrap(), ExactValue::gaussian_int(1, 1));
        assert_eq!(g.gate_signature(), Err(Error::ClosedGrid));
        let mut open = Grid::new();
        let a = open.add_vertex("a", Signature::delta0());
        open.dangle(a, 0);
        assert_eq!(open.brute_force_partition(), Err(Error::OpenGrid));
    }

    #[test]
    fn gate_examples() {
        let (a, b) = (v(2), v(3));
        let f = Signature::gen_diseq_str("0101", a.clone(), b.clone()).unwrap();
        // two copies joined on ports 3,4 pairwise
        let mut g = Grid::new();
        let u = g.add_vertex("u", f.clone());
        let w = g.add_vertex("w", f.clone());
        g.connect(u, 2, w, 2);
        g.connect(u, 3, w, 3);
        for (x, p) in [(u, 0), (u, 1), (w, 0), (w, 1)] {
            g.dangle(x, p);
        }
        let h = g.gate_signature().unwrap();
        // u reads (x1,x2,y1,y2); w reads (x3,x4,1-y1,1-y2)
        let expect = Signature::gen_diseq_str("0110", &a * &b, &a * &b).unwrap();
        assert_eq!(h, expect);
        assert!(Grid::single("f", f.clone()).gate_signature().unwrap() == f);
        let r = v(5);
        let bin = Grid::single("w", BinaryDiseq::with_ratio(r.clone()).to_signature());
        let c = Grid::chain(&[bin.clone(), bin]).unwrap();
        assert_eq!(
            c.gate_signature().unwrap().as_binary_diseq().unwrap(),
            BinaryDiseq::with_ratio(&r * &r)
        );
    }

    #[test]
    fn loop_gadget_matches_self_loop() {
        // weighted loop (x_i, x_j) through w: x_i to w.port2, x_j to w.port1
        let f = Signature::gen_diseq_str("0110", v(2), v(7)).unwrap();
        let w = BinaryDiseq::new(v(3), v(5));
        let mut g = Grid::new();
        let a = g.add_vertex("f", f.clone());
        let b = g.add_vertex("w", w.to_signature());
        g.connect(a, 1, b, 1);
        g.connect(a, 2, b, 0);
        g.dangle(a, 0);
        g.dangle(a, 3);
        let expect = f.self_loop(1, 2, &w, LoopOrientation::Ij).unwrap();
        assert_eq!(g.gate_signature().unwrap(), expect);
        let pin = f.pin_pair(1, 2, PinPattern::P01).unwrap();
        let g2 = g.with_signature(b, Signature::delta());
        assert_eq!(g2.gate_signature().unwrap(), pin);
    }

    #[test]
    fn splice_preserves_value() {
        // replace a ≠₂ loop vertex by a chain of two ≠₂ (which is again ≠₂)
        let mut g = Grid::new();
        let a = g.add_vertex("a", Signature::diseq(4).unwrap());
        let n = g.add_vertex("n", Signature::neq2());
        g.connect(a, 0, n, 0);
        g.connect(n, 1, a, 2);
        g.connect(a, 1, a, 3);
        let z = g.brute_force_partition().unwrap();
        let neq = Grid::single("m", Signature::neq2());
        let gadget = Grid::chain(&[neq.clone(), neq]).unwrap();
        let s = g.splice(n, &gadget).unwrap();
        s.ensure_valid().unwrap();
        assert_eq!(s.brute_force_partition().unwrap(), z);
    }

    #[test]
    fn delta_detection() {
        let mut g = Grid::new();
        let a = g.add_vertex("a", Signature::delta());
        let b = g.add_vertex("b", Signature::delta().permute(&[1, 0]).unwrap());
        g.connect(a, 0, b, 0);
        g.connect(a, 1, b, 1);
        let occ = g.delta_occurrences();
        assert_eq!(occ[0], DeltaOccurrence { vertex: 0, one_port: 1 });
        assert_eq!(occ[1], DeltaOccurrence { vertex: 1, one_port: 0 });
    }
}
