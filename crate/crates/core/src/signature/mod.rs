//! Signatures over Boolean variables and the single-signature gadget calculus.
//!
//! A table index `α` encodes variable `x_{j+1}` in bit `j`; rendered strings
//! list `x1` first, so the string `"01"` is index `2`.

pub mod io;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

use crate::algebra::f2::{bits_to_string, parse_bits};
use crate::algebra::ExactValue;
use crate::error::{Error, Result};

pub const DEFAULT_ARITY_CAP: usize = 16;

static ARITY_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ARITY_CAP);

pub fn arity_cap() -> usize {
    ARITY_CAP.load(Ordering::Relaxed)
}

/// Raise or lower the maximum table arity. Values above 24 are clamped.
pub fn set_arity_cap(cap: usize) {
    ARITY_CAP.store(cap.min(24), Ordering::Relaxed);
}

pub fn hamming(alpha: u32) -> usize {
    alpha.count_ones() as usize
}

pub fn full_mask(arity: usize) -> u32 {
    if arity == 0 {
        0
    } else {
        u32::MAX >> (32 - arity)
    }
}

/// Balanced string: as many ones as zeros.
pub fn is_balanced(alpha: u32, arity: usize) -> bool {
    2 * hamming(alpha) == arity
}

/// Strictly more ones than zeros.
pub fn is_heavy(alpha: u32, arity: usize) -> bool {
    2 * hamming(alpha) > arity
}

/// Strictly more zeros than ones.
pub fn is_light(alpha: u32, arity: usize) -> bool {
    2 * hamming(alpha) < arity
}

#[derive(Clone)]
pub struct Signature {
    arity: usize,
    values: Vec<ExactValue>,
    name: Option<String>,
    ports: Vec<String>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.values == other.values
    }
}

impl Eq for Signature {}

fn default_ports(arity: usize) -> Vec<String> {
    (1..=arity).map(|j| format!("x{j}")).collect()
}

fn check_arity(arity: usize) -> Result<()> {
    let cap = arity_cap();
    if arity > cap {
        Err(Error::CapExceeded { arity, cap })
    } else {
        Ok(())
    }
}

impl Signature {
    pub fn new(arity: usize, values: Vec<ExactValue>) -> Result<Self> {
        check_arity(arity)?;
        if values.len() != 1usize << arity {
            return Err(Error::ArityMismatch {
                expected: 1 << arity,
                found: values.len(),
            });
        }
        Ok(Signature {
            arity,
            values,
            name: None,
            ports: default_ports(arity),
        })
    }

    pub fn zero(arity: usize) -> Result<Self> {
        Self::new(arity, vec![ExactValue::zero(); 1 << arity])
    }

    pub fn constant(v: ExactValue) -> Self {
        Signature {
            arity: 0,
            values: vec![v],
            name: None,
            ports: Vec::new(),
        }
    }

    pub fn from_entries(arity: usize, entries: &[(u32, ExactValue)]) -> Result<Self> {
        let mut s = Self::zero(arity)?;
        let mask = full_mask(arity);
        for (alpha, v) in entries {
            if alpha & !mask != 0 {
                return Err(Error::PortError(format!(
                    "index {alpha} out of range for arity {arity}"
                )));
            }
            s.values[*alpha as usize] = v.clone();
        }
        Ok(s)
    }

    /// Build from rendered strings such as `("0101", value)`.
    pub fn from_strings(arity: usize, entries: &[(&str, ExactValue)]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(entries.len());
        for (s, v) in entries {
            let (alpha, len) = parse_bits(s)
                .ok_or_else(|| Error::PortError(format!("bad bit string {s:?}")))?;
            if len != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: len,
                });
            }
            parsed.push((alpha, v.clone()));
        }
        Self::from_entries(arity, &parsed)
    }

    /// Table indexed by `α` computed from a closure.
    pub fn from_fn(arity: usize, f: impl Fn(u32) -> ExactValue) -> Result<Self> {
        check_arity(arity)?;
        Self::new(arity, (0..1u32 << arity).map(f).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[ExactValue] {
        &self.values
    }

    pub fn value(&self, alpha: u32) -> &ExactValue {
        &self.values[alpha as usize]
    }

    pub fn value_at(&self, s: &str) -> Result<&ExactValue> {
        match parse_bits(s) {
            Some((alpha, len)) if len == self.arity => Ok(self.value(alpha)),
            _ if s.is_empty() && self.arity == 0 => Ok(&self.values[0]),
            _ => Err(Error::PortError(format!(
                "{s:?} is not a string of length {}",
                self.arity
            ))),
        }
    }

    pub fn set(&mut self, alpha: u32, v: ExactValue) {
        self.values[alpha as usize] = v;
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("<arity {}>", self.arity))
    }

    pub fn ports(&self) -> &[String] {
        &self.ports
    }

    pub fn with_ports(mut self, ports: Vec<String>) -> Result<Self> {
        if ports.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: ports.len(),
            });
        }
        self.ports = ports;
        Ok(self)
    }

    pub fn render(&self, alpha: u32) -> String {
        bits_to_string(alpha, self.arity)
    }

    pub fn support(&self) -> Vec<u32> {
        (0..self.values.len() as u32)
            .filter(|&a| !self.values[a as usize].is_zero())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Even arity with every support string balanced. The zero signature of
    /// even arity counts as EO.
    pub fn is_eo(&self) -> bool {
        self.arity % 2 == 0
            && self
                .values
                .iter()
                .enumerate()
                .all(|(a, v)| v.is_zero() || is_balanced(a as u32, self.arity))
    }

    pub fn require_eo(&self) -> Result<()> {
        if self.is_eo() {
            Ok(())
        } else {
            Err(Error::NotEO(self.label()))
        }
    }

    /// Support inside `EO≥` (at least as many ones as zeros).
    pub fn is_eo_ge(&self) -> bool {
        self.support().iter().all(|&a| !is_light(a, self.arity))
    }

    /// Support inside `EO≤`.
    pub fn is_eo_le(&self) -> bool {
        self.support().iter().all(|&a| !is_heavy(a, self.arity))
    }

    pub fn scale(&self, c: &ExactValue) -> Signature {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v = &*v * c;
        }
        out
    }

    // ---- named constructors ----

    /// `=_r`: value 1 on the all-zeros and all-ones strings.
    pub fn equality(r: usize) -> Result<Self> {
        let mut s = Self::zero(r)?;
        s.values[0] = ExactValue::one();
        s.values[full_mask(r) as usize] = ExactValue::one();
        Ok(s.with_name(format!("eq{r}")))
    }

    /// `≠_{2d}`: value 1 exactly when `x1 = … = xd ≠ x_{d+1} = … = x_{2d}`.
    pub fn diseq(two_d: usize) -> Result<Self> {
        if two_d == 0 || two_d % 2 == 1 {
            return Err(Error::ArityMismatch {
                expected: two_d + two_d % 2,
                found: two_d,
            });
        }
        let d = two_d / 2;
        let low = full_mask(d);
        let s = Self::from_entries(
            two_d,
            &[(low, ExactValue::one()), (low << d, ExactValue::one())],
        )?;
        Ok(s.with_name(format!("diseq{two_d}")))
    }

    /// Value `a` at `α`, `b` at its complement, zero elsewhere.
    pub fn gen_diseq(alpha: u32, arity: usize, a: ExactValue, b: ExactValue) -> Result<Self> {
        let mask = full_mask(arity);
        if alpha & !mask != 0 {
            return Err(Error::PortError(format!("index {alpha} out of range")));
        }
        let mut s = Self::zero(arity)?;
        s.values[alpha as usize] = a;
        s.values[(alpha ^ mask) as usize] = b;
        Ok(s)
    }

    pub fn gen_diseq_str(alpha: &str, a: ExactValue, b: ExactValue) -> Result<Self> {
        let (bits, arity) =
            parse_bits(alpha).ok_or_else(|| Error::PortError(format!("bad bit string {alpha:?}")))?;
        Self::gen_diseq(bits, arity, a, b)
    }

    /// Symmetric signature `[f_0, …, f_r]`: weight-`w` strings get `f_w`.
    pub fn symmetric(list: &[ExactValue]) -> Result<Self> {
        if list.is_empty() {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        let r = list.len() - 1;
        Self::from_fn(r, |a| list[hamming(a)].clone())
    }

    pub fn delta0() -> Self {
        Self::symmetric(&[ExactValue::one(), ExactValue::zero()])
            .unwrap()
            .with_name("delta0")
    }

    pub fn delta1() -> Self {
        Self::symmetric(&[ExactValue::zero(), ExactValue::one()])
            .unwrap()
            .with_name("delta1")
    }

    /// `≠₂`.
    pub fn neq2() -> Self {
        BinaryDiseq::neq2().to_signature().with_name("neq2")
    }

    /// The pin `Δ = ≠₂^{1,0}`: value 1 at `"01"` only.
    pub fn delta() -> Self {
        BinaryDiseq::delta().to_signature().with_name("delta")
    }

    /// Builtin by name: `neq2`, `delta`, `delta0`, `delta1`, `diseq<2d>`, `eq<r>`.
    pub fn builtin(name: &str) -> Result<Self> {
        let bad = || Error::parse(0, format!("unknown builtin signature {name:?}"));
        match name {
            "neq2" => Ok(Self::neq2()),
            "delta" => Ok(Self::delta()),
            "delta0" => Ok(Self::delta0()),
            "delta1" => Ok(Self::delta1()),
            _ => {
                if let Some(n) = name.strip_prefix("diseq") {
                    Self::diseq(n.parse().map_err(|_| bad())?)
                } else if let Some(n) = name.strip_prefix("eq") {
                    Self::equality(n.parse().map_err(|_| bad())?)
                } else {
                    Err(bad())
                }
            }
        }
    }

    // ---- gadget calculus ----

    /// `h(αβ) = f(α) g(β)`; `f`'s variables come first.
    pub fn tensor(&self, other: &Signature) -> Result<Signature> {
        let k = self.arity + other.arity;
        check_arity(k)?;
        let kf = self.arity;
        let fmask = full_mask(kf);
        let values = (0..1u32 << k)
            .map(|a| {
                let x = &self.values[(a & fmask) as usize];
                if x.is_zero() {
                    return ExactValue::zero();
                }
                x * &other.values[(a >> kf) as usize]
            })
            .collect();
        let mut ports = self.ports.clone();
        ports.extend(other.ports.iter().cloned());
        Ok(Signature {
            arity: k,
            values,
            name: None,
            ports,
        })
    }

    /// Fix some ports to constants; the result lives on the remaining ports in
    /// their original order.
    pub fn fix(&self, fixed: &[(usize, bool)]) -> Result<Signature> {
        let mut seen = 0u32;
        for &(p, _) in fixed {
            if p >= self.arity {
                return Err(Error::PortError(format!(
                    "port {} out of range for arity {}",
                    p + 1,
                    self.arity
                )));
            }
            if seen >> p & 1 == 1 {
                return Err(Error::PortError(format!("port {} used twice", p + 1)));
            }
            seen |= 1 << p;
        }
        let rest: Vec<usize> = (0..self.arity).filter(|p| seen >> p & 1 == 0).collect();
        let base: u32 = fixed
            .iter()
            .filter(|(_, b)| *b)
            .map(|(p, _)| 1u32 << p)
            .sum();
        let values = (0..1u32 << rest.len())
            .map(|r| {
                let mut a = base;
                for (t, &p) in rest.iter().enumerate() {
                    a |= (r >> t & 1) << p;
                }
                self.values[a as usize].clone()
            })
            .collect();
        Ok(Signature {
            arity: rest.len(),
            values,
            name: None,
            ports: rest.iter().map(|&p| self.ports[p].clone()).collect(),
        })
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::PortError(format!("loop on a single port {}", i + 1)));
        }
        if i >= self.arity || j >= self.arity {
            return Err(Error::PortError(format!(
                "ports ({}, {}) out of range for arity {}",
                i + 1,
                j + 1,
                self.arity
            )));
        }
        Ok(())
    }

    /// Self-loop through `w = ≠₂^{a,b}`; ports are 0-based.
    ///
    /// Orientation `Ij` yields `a·f[x_i=0,x_j=1] + b·f[x_i=1,x_j=0]`, `Ji`
    /// swaps the roles of `a` and `b`.
    pub fn self_loop(
        &self,
        i: usize,
        j: usize,
        w: &BinaryDiseq,
        orientation: LoopOrientation,
    ) -> Result<Signature> {
        self.check_pair(i, j)?;
        let (a, b) = match orientation {
            LoopOrientation::Ij => (&w.a, &w.b),
            LoopOrientation::Ji => (&w.b, &w.a),
        };
        let h01 = self.fix(&[(i, false), (j, true)])?;
        let h10 = self.fix(&[(i, true), (j, false)])?;
        let values = h01
            .values
            .iter()
            .zip(&h10.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Ok(Signature { values, ..h01 })
    }

    /// `f^{x_i x_j = pattern}`.
    pub fn pin_pair(&self, i: usize, j: usize, pattern: PinPattern) -> Result<Signature> {
        self.check_pair(i, j)?;
        match pattern {
            PinPattern::P01 => self.fix(&[(i, false), (j, true)]),
            PinPattern::P10 => self.fix(&[(i, true), (j, false)]),
        }
    }

    /// `h(α) = f(ᾱ)`.
    pub fn dual(&self) -> Signature {
        let m = full_mask(self.arity) as usize;
        Signature {
            arity: self.arity,
            values: (0..self.values.len()).map(|a| self.values[a ^ m].clone()).collect(),
            name: self.name.as_ref().map(|n| format!("dual({n})")),
            ports: self.ports.clone(),
        }
    }

    /// Reorder ports: new port `t` is old port `perm[t]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Signature> {
        if perm.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.arity];
        for &p in perm {
            if p >= self.arity || std::mem::replace(&mut seen[p], true) {
                return Err(Error::PortError(format!("{perm:?} is not a permutation")));
            }
        }
        let values = (0..1u32 << self.arity)
            .map(|a| {
                let mut old = 0u32;
                for (t, &p) in perm.iter().enumerate() {
                    old |= (a >> t & 1) << p;
                }
                self.values[old as usize].clone()
            })
            .collect();
        Ok(Signature {
            arity: self.arity,
            values,
            name: None,
            ports: perm.iter().map(|&p| self.ports[p].clone()).collect(),
        })
    }

    /// `2^l × 2^(k−l)` matrix: rows are `x1..xl`, columns the rest. Row and
    /// column indices use the same bit convention as table indices.
    pub fn signature_matrix(&self, l: usize) -> Result<Vec<Vec<ExactValue>>> {
        if l > self.arity {
            return Err(Error::PortError(format!(
                "split {l} exceeds arity {}",
                self.arity
            )));
        }
        let rows = 1usize << l;
        let cols = 1usize << (self.arity - l);
        Ok((0..rows)
            .map(|r| (0..cols).map(|c| self.values[r | (c << l)].clone()).collect())
            .collect())
    }

    /// Zero every string outside `keep`.
    pub fn restrict_to(&self, keep: impl Fn(u32) -> bool) -> Signature {
        let mut out = self.clone();
        for (a, v) in out.values.iter_mut().enumerate() {
            if !keep(a as u32) {
                *v = ExactValue::zero();
            }
        }
        out
    }

    /// The binary disequality carried by an arity-2 signature, if `f(00)=f(11)=0`.
    pub fn as_binary_diseq(&self) -> Option<BinaryDiseq> {
        if self.arity != 2 || !self.values[0].is_zero() || !self.values[3].is_zero() {
            return None;
        }
        Some(BinaryDiseq {
            a: self.values[2].clone(),
            b: self.values[1].clone(),
        })
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature[{}", self.label())?;
        for a in self.support() {
            write!(f, " {}:{}", self.render(a), self.values[a as usize])?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        io::write_block(f, self, self.name.as_deref().unwrap_or("f"))
    }
}

#[derive(Serialize)]
struct SignatureDoc<'a> {
    name: Option<&'a str>,
    arity: usize,
    ports: &'a [String],
    entries: Vec<(String, String)>,
}

impl Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SignatureDoc {
            name: self.name.as_deref(),
            arity: self.arity,
            ports: &self.ports,
            entries: self
                .support()
                .into_iter()
                .map(|a| (self.render(a), self.values[a as usize].to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LoopOrientation {
    Ij,
    Ji,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PinPattern {
    P01,
    P10,
}

/// `≠₂^{a,b}`: value `a` at `"01"`, `b` at `"10"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryDiseq {
    pub a: ExactValue,
    pub b: ExactValue,
}

impl BinaryDiseq {
    pub fn new(a: ExactValue, b: ExactValue) -> Self {
        BinaryDiseq { a, b }
    }

    pub fn neq2() -> Self {
        Self::new(ExactValue::one(), ExactValue::one())
    }

    pub fn delta() -> Self {
        Self::new(ExactValue::one(), ExactValue::zero())
    }

    /// `≠₂^{1,r}`.
    pub fn with_ratio(r: ExactValue) -> Self {
        Self::new(ExactValue::one(), r)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Path composition: `≠₂^{a,b}` then `≠₂^{c,d}` gives `≠₂^{ac,bd}`.
    pub fn compose(&self, other: &BinaryDiseq) -> BinaryDiseq {
        Self::new(&self.a * &other.a, &self.b * &other.b)
    }

    pub fn reversed(&self) -> BinaryDiseq {
        Self::new(self.b.clone(), self.a.clone())
    }

    pub fn to_signature(&self) -> Signature {
        Signature::from_entries(2, &[(2, self.a.clone()), (1, self.b.clone())]).unwrap()
    }

    /// Scale so the larger-modulus entry becomes 1 (ties: the `01` entry).
    /// Returns the normalized form and whether the entries were swapped to put
    /// the 1 first. `None` for the zero binary.
    pub fn normalized(&self) -> Option<(BinaryDiseq, bool)> {
        if self.is_zero() {
            return None;
        }
        let swap = self.a.cmp_modulus(&self.b) == std::cmp::Ordering::Less;
        let (big, small) = if swap { (&self.b, &self.a) } else { (&self.a, &self.b) };
        let r = small.checked_div(big).ok()?;
        Some((BinaryDiseq::with_ratio(r), swap))
    }
}

impl Serialize for BinaryDiseq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.a.to_string(), self.b.to_string()).serialize(s)
    }
}

impl fmt::Display for BinaryDiseq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "≠₂^{{{},{}}}", self.a, self.b)
    }
}
