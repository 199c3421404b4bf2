//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! An element is a rational polynomial in `zeta` (a fixed primitive N-th
//! root of unity) reduced modulo the N-th cyclotomic polynomial Phi_N, so
//! the representation is canonical and equality is coefficient equality.
//! All coefficients are arbitrary-precision rationals; there is no floating
//! point anywhere.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Euler's totient, by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    for d in 1..=n {
        if d * d > n {
            break;
        }
        if n % d == 0 {
            ds.push(d);
            if d != n / d {
                ds.push(n / d);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Exact division of integer polynomials, `num / den`, which must be exact.
/// Polynomials are coefficient vectors, lowest degree first.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(!den.is_empty() && !den.last().unwrap().is_zero());
    let mut rem: Vec<BigInt> = num.to_vec();
    let dlead = den.last().unwrap().clone();
    let ddeg = den.len() - 1;
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![BigInt::zero()];
    }
    let qdeg = rem.len() - den.len();
    let mut quot = vec![BigInt::zero(); qdeg + 1];
    for k in (0..=qdeg).rev() {
        let coef = &rem[k + ddeg] / &dlead;
        assert_eq!(&coef * &dlead, rem[k + ddeg], "inexact polynomial division");
        for (i, d) in den.iter().enumerate() {
            let t = &coef * d;
            rem[k + i] -= t;
        }
        quot[k] = coef;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
    quot
}

/// The N-th cyclotomic polynomial Phi_N as an integer coefficient vector,
/// lowest degree first, monic of degree phi(N).
///
/// Computed by exact division of x^N - 1 by the product of all Phi_d with
/// d | N, d < N. Results are cached for reuse across threads.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial needs N >= 1");
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^N - 1
        let mut num = vec![BigInt::zero(); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::from(1);
        let mut quot = num;
        for d in divisors(n) {
            if d < n {
                let phi_d = cyclotomic_polynomial(d);
                quot = poly_div_exact(&quot, &phi_d);
            }
        }
        quot
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// An exact element of Q(zeta_N), in canonical reduced form.
///
/// `coeffs` has length exactly phi(N) and holds the coefficients of
/// 1, zeta, ..., zeta^(phi(N)-1) of the unique residue modulo Phi_N.
/// Order 1 is the rational field itself; values of order 1 interoperate
/// with any other order through the canonical embedding of Q, while two
/// orders both >= 2 never mix implicitly.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

// Equality respects the canonical embedding of the rationals: two rational
// values agree regardless of the ambient order, anything else requires the
// same order and identical reduced coefficients.
impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self.as_rational() {
            Some(r) => {
                1u64.hash(state);
                r.hash(state);
            }
            None => {
                self.order.hash(state);
                self.coeffs.hash(state);
            }
        }
    }
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        let phi = euler_phi(order) as usize;
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(order: u64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = BigRational::one();
        z
    }

    pub fn from_rational(order: u64, r: BigRational) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = r;
        z
    }

    pub fn from_i64(order: u64, n: i64) -> Self {
        Self::from_rational(order, BigRational::from(BigInt::from(n)))
    }

    /// The chosen primitive root zeta itself.
    pub fn zeta(order: u64) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// zeta^k for any integer k (negative exponents wrap around).
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        Self::reduce(order, raw)
    }

    /// Reduce an arbitrary polynomial in zeta to the canonical residue.
    fn reduce(order: u64, mut raw: Vec<BigRational>) -> Self {
        let phi_n = cyclotomic_polynomial(order);
        let deg = phi_n.len() - 1;
        // raw mod Phi_N, using that Phi_N is monic.
        while raw.len() > deg {
            let k = raw.len() - 1;
            let coef = raw[k].clone();
            if !coef.is_zero() {
                for (i, c) in phi_n.iter().enumerate() {
                    let t = &coef * BigRational::from(c.clone());
                    raw[k - deg + i] -= t;
                }
            }
            raw.pop();
        }
        raw.resize(deg, BigRational::zero());
        Cyclotomic {
            order,
            coeffs: raw,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rational content if the element lies in Q, else None.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Lift both operands to a common order. Only the canonical embedding
    /// of order 1 (the rationals) is performed; anything else is an error.
    fn common(a: &Self, b: &Self) -> Result<(Self, Self)> {
        if a.order == b.order {
            return Ok((a.clone(), b.clone()));
        }
        if a.order == 1 {
            let r = a.coeffs[0].clone();
            return Ok((Self::from_rational(b.order, r), b.clone()));
        }
        if b.order == 1 {
            let r = b.coeffs[0].clone();
            return Ok((a.clone(), Self::from_rational(a.order, r)));
        }
        Err(Error::OrderMismatch(a.order, b.order))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common(self, other).expect("cyclotomic order mismatch");
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut a = self.clone();
        for c in a.coeffs.iter_mut() {
            *c = -c.clone();
        }
        a
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other).expect("cyclotomic order mismatch");
        let mut raw = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[i + j] += x * y;
            }
        }
        Self::reduce(a.order, raw)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut a = self.clone();
        for c in a.coeffs.iter_mut() {
            *c *= r;
        }
        a
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    /// against Phi_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Self::from_rational(1, self.coeffs[0].recip()));
        }
        let phi_n: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(BigRational::from)
            .collect();
        // Invariants: r0 = s0 * self (mod Phi_N), r1 = s1 * self (mod Phi_N).
        let mut r0 = phi_n;
        let mut r1: Vec<BigRational> = self.coeffs.clone();
        trim(&mut r1);
        let mut s0 = vec![BigRational::zero()];
        let mut s1 = vec![BigRational::one()];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is now a nonzero constant gcd.
        assert_eq!(r0.len(), 1, "Phi_N must be coprime to any nonzero residue");
        let c = r0[0].recip();
        let inv_raw: Vec<BigRational> = s0.iter().map(|x| x * &c).collect();
        Ok(Self::reduce(self.order, inv_raw))
    }

    /// Checked field operations for the public arithmetic interface:
    /// both operands must carry literally the same order.
    pub fn checked_arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        match op {
            ArithOp::Add => Ok(self.add(other)),
            ArithOp::Mul => Ok(self.mul(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
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

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder in Q[x]; returns (quotient, remainder).
fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    let dlead = den.last().unwrap().clone();
    assert!(!dlead.is_zero());
    if rem.len() < den.len() {
        return (vec![BigRational::zero()], rem);
    }
    let qdeg = rem.len() - den.len();
    let mut quot = vec![BigRational::zero(); qdeg + 1];
    for k in (0..=qdeg).rev() {
        let coef = &rem[k + den.len() - 1] / &dlead;
        if !coef.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let t = &coef * d;
                rem[k + i] -= t;
            }
        }
        quot[k] = coef;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(N={}, {})", self.order, self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
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
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{k}")?;
                }
            }
        }
        Ok(())
    }
}

// JSON form: {"order": N, "coeffs": [["num","den"], ...]} with decimal strings.
impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("order", &self.order)?;
        let coeffs: Vec<[String; 2]> = self
            .coeffs
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            order: u64,
            coeffs: Vec<[String; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.order == 0 {
            return Err(D::Error::custom("order must be positive"));
        }
        let phi = euler_phi(raw.order) as usize;
        if raw.coeffs.len() != phi {
            return Err(D::Error::custom(format!(
                "expected {} coefficients for order {}, got {}",
                phi,
                raw.order,
                raw.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(phi);
        for [n, d] in &raw.coeffs {
            let n: BigInt = n.parse().map_err(D::Error::custom)?;
            let d: BigInt = d.parse().map_err(D::Error::custom)?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, d));
        }
        Ok(Cyclotomic {
            order: raw.order,
            coeffs,
        })
    }
}
