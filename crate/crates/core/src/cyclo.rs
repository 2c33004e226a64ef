//! Exact arithmetic in cyclotomic fields Q(ζ_n) and factored q-integer products.
//!
//! Elements are stored in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}` and kept
//! reduced modulo the n-th cyclotomic polynomial. Operands of different
//! conductors are embedded into Q(ζ_lcm) before combining.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use rustc_hash::FxHashMap;

use crate::error::CycloError;

static PHI_CACHE: Lazy<RwLock<FxHashMap<u32, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| RwLock::new(FxHashMap::default()));

/// Sorted divisors of `n`.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Prime factorisation as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coefficients (low to high) of the n-th cyclotomic polynomial, cached per n.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic polynomial of index 0");
    if let Some(p) = PHI_CACHE.read().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d a proper divisor of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n as u64) {
        if d == n as u64 {
            continue;
        }
        let phi_d = cyclotomic_poly(d as u32);
        num = div_monic_exact(&num, &phi_d);
    }
    let arc = Arc::new(num);
    PHI_CACHE.write().insert(n, arc.clone());
    arc
}

fn div_monic_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Remainder of `p` modulo the monic integer polynomial `m`, in place.
fn reduce_mod(p: &mut Vec<BigRational>, m: &[BigInt]) {
    let d = m.len() - 1;
    if p.len() > d {
        for i in (d..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = p[i].clone();
            for (j, mj) in m.iter().enumerate().take(d) {
                if !mj.is_zero() {
                    p[i - d + j] -= &c * BigRational::from_integer(mj.clone());
                }
            }
            p[i] = BigRational::zero();
        }
    }
    p.resize(d, BigRational::zero());
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = &b[db];
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// An exact element of Q(ζ_n).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// Build from an arbitrary-length polynomial in ζ_n; reduces to canonical form.
    pub fn from_poly(conductor: u32, poly: Vec<BigRational>) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let n = conductor as usize;
        let mut folded = vec![BigRational::zero(); n.max(1)];
        for (k, c) in poly.into_iter().enumerate() {
            if !c.is_zero() {
                folded[k % n] += c;
            }
        }
        let phi = cyclotomic_poly(conductor);
        reduce_mod(&mut folded, &phi);
        Cyclotomic { conductor, coeffs: folded }
    }

    /// Build from a coefficient vector already of length φ(n).
    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        let phi = euler_phi(conductor as u64) as usize;
        if coeffs.len() != phi {
            return Err(CycloError::BadCoefficientLength {
                conductor,
                expected: phi,
                found: coeffs.len(),
            });
        }
        Ok(Cyclotomic { conductor, coeffs })
    }

    pub fn zero(conductor: u32) -> Self {
        Self::from_rational(conductor, BigRational::zero())
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, BigRational::one())
    }

    pub fn from_int(conductor: u32, v: i64) -> Self {
        Self::from_rational(conductor, rat(v))
    }

    pub fn from_rational(conductor: u32, v: BigRational) -> Self {
        let phi = euler_phi(conductor as u64) as usize;
        let mut coeffs = vec![BigRational::zero(); phi];
        coeffs[0] = v;
        Cyclotomic { conductor, coeffs }
    }

    /// ζ_n^k in canonical form.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(n, poly)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(ζ_target); `target` must be a multiple of the conductor.
    pub fn embed(&self, target: u32) -> Self {
        assert!(
            target % self.conductor == 0,
            "cannot embed conductor {} into {}",
            self.conductor,
            target
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::from_poly(target, poly)
    }

    fn common(a: &Self, b: &Self) -> (u32, Self, Self) {
        if a.conductor == b.conductor {
            return (a.conductor, a.clone(), b.clone());
        }
        let l = a.conductor.lcm(&b.conductor);
        (l, a.embed(l), b.embed(l))
    }

    /// Complex conjugate (ζ ↦ ζ⁻¹).
    pub fn conjugate(&self) -> Self {
        let n = self.conductor as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        Self::from_poly(self.conductor, poly)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_n.
    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let modulus: Vec<BigRational> = cyclotomic_poly(self.conductor)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // invariant: s_i * a ≡ r_i (mod Φ)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) =
            (vec![], vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Φ_n is irreducible.
        let c = r1[0].clone();
        let scaled: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        Ok(Self::from_poly(self.conductor, scaled))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Floating-point value; used only for cross-checks.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor == rhs.conductor {
            let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
            return Cyclotomic { conductor: self.conductor, coeffs };
        }
        let (_, a, b) = Cyclotomic::common(self, rhs);
        &a + &b
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor == rhs.conductor {
            let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
            return Cyclotomic { conductor: self.conductor, coeffs };
        }
        let (_, a, b) = Cyclotomic::common(self, rhs);
        &a - &b
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor != rhs.conductor {
            let (_, a, b) = Cyclotomic::common(self, rhs);
            return &a * &b;
        }
        let mut prod = poly_mul(&self.coeffs, &rhs.coeffs);
        if prod.is_empty() {
            return Cyclotomic::zero(self.conductor);
        }
        let phi = cyclotomic_poly(self.conductor);
        reduce_mod(&mut prod, &phi);
        Cyclotomic { conductor: self.conductor, coeffs: prod }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = match k {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{}", self.conductor, k),
            };
            let term = if k == 0 {
                c.to_string()
            } else if c.is_one() {
                z
            } else if *c == -BigRational::one() {
                format!("-{z}")
            } else {
                format!("({c})*{z}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Result of evaluating a factored polynomial at a root of unity.
#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Zero,
    Value(Cyclotomic),
}

/// `constant · ∏_d Φ_d(q)^{e_d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFactored {
    constant: BigRational,
    factors: BTreeMap<u64, i64>,
}

impl QFactored {
    pub fn one() -> Self {
        QFactored { constant: BigRational::one(), factors: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        QFactored { constant: c, factors: BTreeMap::new() }
    }

    /// `[a]_q = (1 - q^a)/(1 - q) = ∏_{d | a, d > 1} Φ_d(q)`.
    pub fn q_integer(a: u64) -> Self {
        assert!(a >= 1, "q-integer of 0");
        let factors = divisors(a).into_iter().filter(|&d| d > 1).map(|d| (d, 1)).collect();
        QFactored { constant: BigRational::one(), factors }
    }

    pub fn cyclotomic(d: u64) -> Self {
        QFactored { constant: BigRational::one(), factors: BTreeMap::from([(d, 1)]) }
    }

    pub fn constant_term(&self) -> &BigRational {
        &self.constant
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    pub fn exponent(&self, d: u64) -> i64 {
        self.factors.get(&d).copied().unwrap_or(0)
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let mut factors = self.factors.clone();
        for (&d, &e) in &other.factors {
            let v = factors.entry(d).or_insert(0);
            *v += sign * e;
            if *v == 0 {
                factors.remove(&d);
            }
        }
        let constant = if sign > 0 {
            &self.constant * &other.constant
        } else {
            &self.constant / &other.constant
        };
        QFactored { constant, factors }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.constant.is_zero(), "division by the zero polynomial");
        self.combine(other, -1)
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.values().all(|&e| e >= 0)
    }

    /// Degree in q (Σ e_d φ(d)).
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(&d, &e)| e * euler_phi(d) as i64).sum()
    }

    fn check_polynomial(&self) -> Result<(), CycloError> {
        match self.factors.iter().find(|(_, &e)| e < 0) {
            Some((&d, &e)) => Err(CycloError::NotPolynomial { d, e }),
            None => Ok(()),
        }
    }

    /// Dense integer-or-rational coefficients, low to high.
    pub fn expand(&self) -> Result<Vec<BigRational>, CycloError> {
        self.check_polynomial()?;
        let mut acc = vec![self.constant.clone()];
        for (&d, &e) in &self.factors {
            let phi: Vec<BigRational> = cyclotomic_poly(d as u32)
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect();
            for _ in 0..e {
                acc = poly_mul(&acc, &phi);
            }
        }
        Ok(acc)
    }

    /// Exact value at q = ζ_n^k.
    ///
    /// Each Φ_d(ζ) is rewritten as ∏_{e | d} (ζ^e − 1)^{μ(d/e)}, so the whole
    /// product collapses to powers of the elements ζ^r − 1 for r mod M, where M
    /// is the order of ζ.
    pub fn eval_at_root(&self, n: u64, k: i64) -> Result<RootValue, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        self.check_polynomial()?;
        let kk = k.rem_euclid(n as i64) as u64;
        let g = kk.gcd(&n);
        let order = n / g;
        let j = kk / g;
        if self.exponent(order) > 0 || self.constant.is_zero() {
            return Ok(RootValue::Zero);
        }
        if order == 1 {
            let mut v = self.constant.clone();
            for (&d, &e) in &self.factors {
                let f = factorize(d);
                if f.len() == 1 {
                    v *= rat(f[0].0 as i64).pow(e as i32);
                }
            }
            return Ok(RootValue::Value(Cyclotomic::from_rational(1, v)));
        }
        // Factors q^r - 1 that vanish at ζ cancel in total; each contributes
        // its derivative r·ζ^{-1} to the limit, and the ζ^{-1} parts cancel too.
        let mut expo = vec![0i64; order as usize];
        let mut constant = self.constant.clone();
        for (&d, &e) in &self.factors {
            for dd in divisors(d) {
                let mu = mobius(d / dd);
                if mu == 0 {
                    continue;
                }
                if dd % order == 0 {
                    constant *= rat(dd as i64).pow((e * mu) as i32);
                } else {
                    expo[((dd % order) * j % order) as usize] += e * mu;
                }
            }
        }
        let m32 = order as u32;
        let mut num = Cyclotomic::from_rational(m32, constant);
        let mut den = Cyclotomic::one(m32);
        let one = Cyclotomic::one(m32);
        for (r, &e) in expo.iter().enumerate().skip(1) {
            if e == 0 {
                continue;
            }
            let base = &Cyclotomic::root_of_unity(m32, r as i64) - &one;
            let p = base.pow(e.unsigned_abs());
            if e > 0 {
                num = &num * &p;
            } else {
                den = &den * &p;
            }
        }
        Ok(RootValue::Value(num.checked_div(&den)?))
    }

    /// Value at q = 1.
    pub fn at_one(&self) -> Result<BigRational, CycloError> {
        match self.eval_at_root(1, 0)? {
            RootValue::Zero => Ok(BigRational::zero()),
            RootValue::Value(v) => Ok(v.as_rational().expect("rational at q = 1")),
        }
    }
}

impl fmt::Display for QFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (d, e) in &self.factors {
            if *e == 1 {
                write!(f, "·Φ{d}")?;
            } else {
                write!(f, "·Φ{d}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Whether a rational is an integer, returning it if so.
pub fn as_integer(q: &BigRational) -> Option<BigInt> {
    if q.is_integer() {
        Some(q.to_integer())
    } else {
        None
    }
}

pub fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn phi_polynomials() {
        let v = |n| cyclotomic_poly(n).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(v(1), vec![-1, 1]);
        assert_eq!(v(3), vec![1, 1, 1]);
        assert_eq!(v(6), vec![1, -1, 1]);
        assert_eq!(v(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient of absolute value 2
        assert!(v(105).contains(&-2));
    }

    #[test]
    fn small_identities() {
        let n3 = &(&z(3, 1) + &z(3, 2)) + &Cyclotomic::one(3);
        assert!(n3.is_zero());
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_int(4, -1));
        assert_eq!(z(5, 1).inverse().unwrap(), z(5, 4));
        assert_eq!(z(6, 1).conjugate(), z(6, 5));
        let one = Cyclotomic::one(4);
        assert_eq!(&(&one - &z(4, 1)) * &(&one + &z(4, 1)), Cyclotomic::from_int(4, 2));
        assert_eq!(&z(6, 1) + &z(6, -1), Cyclotomic::one(6));
    }

    #[test]
    fn mixed_conductors() {
        // ζ_6 = -ζ_3^2
        assert_eq!(z(6, 1), -&z(3, 2));
        let s = &z(4, 1) + &z(3, 1);
        assert_eq!(s.conductor(), 12);
        assert_eq!(&s - &z(3, 1), z(12, 3));
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(Cyclotomic::zero(5).inverse(), Err(CycloError::DivisionByZero)));
    }

    #[test]
    fn q_integers() {
        assert!(QFactored::q_integer(1).factors().is_empty());
        let six = QFactored::q_integer(6);
        assert_eq!(six.factors().keys().copied().collect::<Vec<_>>(), vec![2, 3, 6]);
        let four = QFactored::q_integer(4);
        assert_eq!(four.factors().keys().copied().collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(four.eval_at_root(2, 1).unwrap(), RootValue::Zero);
        assert_eq!(six.at_one().unwrap(), rat(6));
        assert_eq!(QFactored::cyclotomic(3).at_one().unwrap(), rat(3));
    }

    #[test]
    fn rejects_non_polynomial() {
        let f = QFactored::q_integer(2).div(&QFactored::q_integer(3));
        assert!(matches!(f.eval_at_root(5, 1), Err(CycloError::NotPolynomial { .. })));
    }

    #[test]
    fn evaluation_matches_dense_expansion() {
        let f = QFactored::q_integer(12).mul(&QFactored::q_integer(10)).div(&QFactored::q_integer(2));
        let dense = f.expand().unwrap();
        for n in [5u64, 7, 12, 15] {
            for k in 0..n as i64 {
                let zeta = z(n as u32, k);
                let mut acc = Cyclotomic::zero(n as u32);
                for c in dense.iter().rev() {
                    acc = &(&acc * &zeta) + &Cyclotomic::from_rational(n as u32, c.clone());
                }
                let got = match f.eval_at_root(n, k).unwrap() {
                    RootValue::Zero => Cyclotomic::zero(1),
                    RootValue::Value(v) => v,
                };
                assert_eq!(got, acc, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn single_cyclotomics_at_every_root() {
        // Φ_6(-1) = 3 and Φ_4(-1) = 2: the vanishing q^r - 1 terms carry a constant
        let at = |d: u64, n: u64, k: i64| match QFactored::cyclotomic(d).eval_at_root(n, k).unwrap() {
            RootValue::Zero => Cyclotomic::zero(1),
            RootValue::Value(v) => v,
        };
        assert_eq!(at(6, 2, 1), Cyclotomic::from_int(1, 3));
        assert_eq!(at(4, 2, 1), Cyclotomic::from_int(1, 2));
        for d in 1..=12u64 {
            let dense = QFactored::cyclotomic(d).expand().unwrap();
            for n in 1..=12u64 {
                for k in 0..n as i64 {
                    let zeta = z(n as u32, k);
                    let mut acc = Cyclotomic::zero(n as u32);
                    for c in dense.iter().rev() {
                        acc = &(&acc * &zeta) + &Cyclotomic::from_rational(n as u32, c.clone());
                    }
                    assert_eq!(at(d, n, k), acc, "Φ_{d} at ζ_{n}^{k}");
                }
            }
        }
    }
}
