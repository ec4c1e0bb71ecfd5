//! Exact elements of cyclotomic fields `Q(ζ_N)`.
//!
//! A value stores its conductor `N` together with its coordinates in the power
//! basis `1, ζ, …, ζ^(φ(N)-1)`, reduced modulo the `N`-th cyclotomic
//! polynomial. Gaussian rationals are the case `N = 4`; plain rationals are
//! stored with `N = 1`. Operands of different conductors are lifted to the lcm
//! before combining, so values from different sessions still compose exactly.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// obtained by dividing `x^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_int_div(&num, &phi_d);
        }
    }
    let p = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(n, p.clone());
    p
}

// Quotient of `a` by the monic polynomial `b`; the remainder must vanish.
fn exact_int_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let da = rem.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (db..=da).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= &c * bj;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn mobius(n: u32) -> i32 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn reduce(mut poly: Poly, n: u32) -> Poly {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    // x^n = 1 first, then the remaining division by Φ_n.
    if poly.len() > n as usize {
        let mut folded = vec![BigRational::zero(); n as usize];
        for (k, c) in poly.into_iter().enumerate() {
            if !c.is_zero() {
                folded[k % n as usize] += c;
            }
        }
        poly = folded;
    }
    for i in (deg..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[i], BigRational::zero());
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if !pj.is_zero() {
                poly[i - deg + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

/// Exact element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct ExactValue {
    order: u32,
    coeffs: Vec<BigRational>,
}

/// Outcome of [`ExactValue::root_order`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RootOrder {
    Root(u64),
    NotRoot,
    Unknown,
}

impl ExactValue {
    fn from_parts(order: u32, coeffs: Vec<BigRational>) -> Self {
        let mut v = ExactValue { order, coeffs };
        v.canonicalize();
        v
    }

    fn canonicalize(&mut self) {
        if self.order != 1 && self.coeffs.iter().skip(1).all(Zero::is_zero) {
            let c = self.coeffs.first().cloned().unwrap_or_else(BigRational::zero);
            self.order = 1;
            self.coeffs = vec![c];
        }
    }

    pub fn zero() -> Self {
        ExactValue {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ExactValue {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `re + im·i`.
    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Self::from_parts(4, vec![re, im])
    }

    pub fn gaussian_int(re: i64, im: i64) -> Self {
        Self::gaussian(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn i() -> Self {
        Self::gaussian_int(0, 1)
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::gaussian_int(1, 0),
            1 => Self::gaussian_int(0, 1),
            2 => Self::gaussian_int(-1, 0),
            _ => Self::gaussian_int(0, -1),
        }
    }

    /// `ζ_n^k`, the primitive `n`-th root of unity `e^{2πi/n}` raised to `k`.
    pub fn zeta(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Self::from_parts(n, reduce(poly, n))
    }

    /// Conductor of the field the value is currently stored in.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// `(re, im)` when the value lies in `Q(i)` as stored.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        match self.order {
            1 => Some((self.coeffs[0].clone(), BigRational::zero())),
            4 => Some((self.coeffs[0].clone(), self.coeffs[1].clone())),
            _ => None,
        }
    }

    /// Re-express in `Q(ζ_m)`; `m` must be a multiple of the current order.
    pub fn lift(&self, m: u32) -> Self {
        assert!(m % self.order == 0, "cannot lift order {} to {}", self.order, m);
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[k * step] = c.clone();
            }
        }
        ExactValue {
            order: m,
            coeffs: reduce(poly, m),
        }
    }

    fn align(a: &Self, b: &Self) -> (u32, Option<Self>, Option<Self>) {
        if a.order == b.order {
            return (a.order, None, None);
        }
        let m = a.order.lcm(&b.order);
        let la = (a.order != m).then(|| a.lift(m));
        let lb = (b.order != m).then(|| b.lift(m));
        (m, la, lb)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (m, la, lb) = Self::align(self, other);
        let a = la.as_ref().unwrap_or(self);
        let b = lb.as_ref().unwrap_or(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Self::from_parts(m, coeffs)
    }

    fn neg_ref(&self) -> Self {
        ExactValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.order == 1 {
            let s = &self.coeffs[0];
            return Self::from_parts(other.order, other.coeffs.iter().map(|c| c * s).collect());
        }
        if other.order == 1 {
            let s = &other.coeffs[0];
            return Self::from_parts(self.order, self.coeffs.iter().map(|c| c * s).collect());
        }
        let (m, la, lb) = Self::align(self, other);
        let a = la.as_ref().unwrap_or(self);
        let b = lb.as_ref().unwrap_or(other);
        if m == 4 {
            let (p, q) = (&a.coeffs[0], &a.coeffs[1]);
            let (r, s) = (&b.coeffs[0], &b.coeffs[1]);
            return Self::from_parts(4, vec![p * r - q * s, p * s + q * r]);
        }
        let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_parts(m, reduce(prod, m))
    }

    /// Complex conjugate, via `ζ ↦ ζ^(N-1)`.
    pub fn conj(&self) -> Self {
        match self.order {
            1 => self.clone(),
            4 => ExactValue {
                order: 4,
                coeffs: vec![self.coeffs[0].clone(), -&self.coeffs[1]],
            },
            n => {
                let mut poly = vec![BigRational::zero(); n as usize];
                for (k, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        poly[(n as usize - k) % n as usize] += c;
                    }
                }
                Self::from_parts(n, reduce(poly, n))
            }
        }
    }

    /// `x · conj(x)`, a non-negative real number.
    pub fn norm_sq(&self) -> Self {
        self.mul_ref(&self.conj())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        match self.order {
            1 => Some(Self::from_rational(self.coeffs[0].recip())),
            4 => {
                let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
                let n = a * a + b * b;
                Some(Self::from_parts(4, vec![a / &n, -b / &n]))
            }
            n => {
                let phi: Poly = cyclotomic_polynomial(n)
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect();
                let inv = poly_inverse_mod(&self.coeffs, &phi);
                Some(Self::from_parts(n, reduce(inv, n)))
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other.inv().ok_or(Error::ZeroValue)?;
        Ok(self.mul_ref(&inv))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Integer powers, negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv().ok_or(Error::ZeroValue)?.pow(e.unsigned_abs()))
        }
    }

    /// Multiplicative order of the value if it is a root of unity.
    ///
    /// Every root of unity in `Q(ζ_N)` has order dividing `lcm(2, N)`, so the
    /// test is exact; `Unknown` is reported only when that order exceeds `cap`.
    pub fn root_order(&self, cap: u64) -> Result<RootOrder> {
        if self.is_zero() {
            return Err(Error::ZeroValue);
        }
        if !self.norm_sq().is_one() {
            return Ok(RootOrder::NotRoot);
        }
        let n = self.order as u64;
        let bound = if n % 2 == 0 { n } else { 2 * n };
        if !self.pow(bound).is_one() {
            return Ok(RootOrder::NotRoot);
        }
        let mut divisors: Vec<u64> = (1..=bound).filter(|d| bound % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            if self.pow(d).is_one() {
                return Ok(if d <= cap {
                    RootOrder::Root(d)
                } else {
                    RootOrder::Unknown
                });
            }
        }
        unreachable!("x^bound = 1 so some divisor works")
    }

    /// Floating-point approximation `(re, im)`; used only for ordering moduli
    /// that are already known to differ.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        if self.order == 4 {
            return (
                self.coeffs[0].to_f64().unwrap_or(f64::NAN),
                self.coeffs[1].to_f64().unwrap_or(f64::NAN),
            );
        }
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += c * theta.cos();
            im += c * theta.sin();
        }
        (re, im)
    }

    /// Compares `|self|` with `|other|` exactly when equal, numerically otherwise.
    pub fn cmp_modulus(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.norm_sq();
        let b = other.norm_sq();
        if a == b {
            return std::cmp::Ordering::Equal;
        }
        if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
            return x.cmp(y);
        }
        let (x, _) = a.to_f64_pair();
        let (y, _) = b.to_f64_pair();
        x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
    }

    // Tr(x)/[K:Q], invariant under lifting; used for hashing.
    fn normalized_trace(&self) -> BigRational {
        let n = self.order;
        let mut acc = BigRational::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let g = (k as u32).gcd(&n);
            let m = n / g;
            let mu = mobius(m);
            if mu != 0 {
                acc += c * BigRational::new(BigInt::from(mu), BigInt::from(euler_phi(m)));
            }
        }
        acc
    }
}

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let c = &r[i] / &lead;
        for j in 0..=db {
            let t = &c * &b[j];
            r[i - db + j] -= t;
        }
        q[i - db] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect()
}

// Inverse of `a` modulo the irreducible `m` by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &Poly, m: &Poly) -> Poly {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    trim(&mut r1);
    let (mut s0, mut s1): (Poly, Poly) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant
    let c = r0[0].clone();
    s0.iter().map(|x| x / &c).collect()
}

impl PartialEq for ExactValue {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, la, lb) = Self::align(self, other);
        let a = la.as_ref().unwrap_or(self);
        let b = lb.as_ref().unwrap_or(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for ExactValue {}

impl Hash for ExactValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.normalized_trace().hash(state);
    }
}

impl Default for ExactValue {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactValue {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&ExactValue> for &ExactValue {
            type Output = ExactValue;
            fn $m(self, rhs: &ExactValue) -> ExactValue {
                let f: fn(&ExactValue, &ExactValue) -> ExactValue = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $m(self, rhs: ExactValue) -> ExactValue {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $m(self, rhs: &ExactValue) -> ExactValue {
                (&self).$m(rhs)
            }
        }
        impl $tr<ExactValue> for &ExactValue {
            type Output = ExactValue;
            fn $m(self, rhs: ExactValue) -> ExactValue {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_ref(b));
binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
binop!(Mul, mul, |a, b| a.mul_ref(b));
// Panics on division by zero, like the integer operators; use `checked_div` otherwise.
binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        self.neg_ref()
    }
}

impl Neg for &ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        self.neg_ref()
    }
}

impl AddAssign<&ExactValue> for ExactValue {
    fn add_assign(&mut self, rhs: &ExactValue) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
            self.canonicalize();
        } else {
            *self = self.add_ref(rhs);
        }
    }
}

impl AddAssign for ExactValue {
    fn add_assign(&mut self, rhs: ExactValue) {
        *self += &rhs;
    }
}

impl SubAssign<&ExactValue> for ExactValue {
    fn sub_assign(&mut self, rhs: &ExactValue) {
        *self += &rhs.neg_ref();
    }
}

impl MulAssign<&ExactValue> for ExactValue {
    fn mul_assign(&mut self, rhs: &ExactValue) {
        *self = self.mul_ref(rhs);
    }
}

impl std::iter::Sum for ExactValue {
    fn sum<I: Iterator<Item = ExactValue>>(iter: I) -> Self {
        iter.fold(ExactValue::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl std::iter::Product for ExactValue {
    fn product<I: Iterator<Item = ExactValue>>(iter: I) -> Self {
        iter.fold(ExactValue::one(), |acc, x| acc * x)
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            1 => write!(f, "{}", fmt_rat(&self.coeffs[0])),
            4 => {
                let (re, im) = (&self.coeffs[0], &self.coeffs[1]);
                let im_str = |q: &BigRational| -> String {
                    if q.abs().is_one() {
                        "i".to_string()
                    } else {
                        format!("{}i", fmt_rat(&q.abs()))
                    }
                };
                if re.is_zero() {
                    let sign = if im.is_negative() { "-" } else { "" };
                    write!(f, "{}{}", sign, im_str(im))
                } else {
                    let sign = if im.is_negative() { "-" } else { "+" };
                    write!(f, "{}{}{}", fmt_rat(re), sign, im_str(im))
                }
            }
            n => {
                let mut first = true;
                for (k, c) in self.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    first = false;
                    if k == 0 {
                        write!(f, "{}", fmt_rat(&mag))?;
                    } else if mag.is_one() {
                        write!(f, "z{}^{}", n, k)?;
                    } else {
                        write!(f, "{}*z{}^{}", fmt_rat(&mag), n, k)?;
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactValue({})", self)
    }
}

impl serde::Serialize for ExactValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
