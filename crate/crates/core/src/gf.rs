//! Exact arithmetic in GF(p^k).
//!
//! An element is identified by its integer code: digit `i` of the code in
//! base `p` is the coefficient of `x^i` in the polynomial representative
//! reduced modulo a fixed monic irreducible polynomial of degree `k`. Code 0
//! is zero and code 1 is one in every field.
//!
//! Fields of order at most 256 carry precomputed addition, multiplication,
//! negation and inverse tables; larger fields compute on the fly.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// Bundled Conway polynomials, coefficients listed from the constant term up.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge { p: u32, k: u32 },
    #[error("no bundled modulus for GF({p}^{k}); supply one explicitly")]
    NoBundledModulus { p: u32, k: u32 },
    #[error("modulus must be a monic degree-{k} polynomial with coefficients below {p}")]
    MalformedModulus { p: u32, k: u32 },
    #[error("modulus {0} is reducible")]
    Reducible(String),
    #[error("code {code} is not an element of GF({q})")]
    InvalidCode { code: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed field description {0:?}")]
    Malformed(String),
}

/// A field element, stored as its integer code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_code(code: u32) -> FieldElem {
        debug_assert!(code < MAX_ORDER);
        FieldElem(code as u16)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// A finite field GF(p^k) together with its defining modulus.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, constant term first, length `k + 1`.
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [{}]", self.q, self)
    }
}

/// Serializes as `p,k,modulus-code`.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.k, self.modulus_code())
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| FieldError::Malformed(s.to_string()));
        match parts.as_slice() {
            [p, k, code] => {
                let (p, k, code) = (num(p)?, num(k)?, num(code)?);
                FieldSpec::with_modulus_code(p, k, code)
            }
            _ => Err(FieldError::Malformed(s.to_string())),
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl FieldSpec {
    /// Builds GF(p^k). Without a modulus, `k = 1` or a bundled Conway
    /// polynomial is required. A supplied modulus lists coefficients from the
    /// constant term up and must be monic of degree `k` and irreducible.
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::TooLarge { p, k })?;
        let modulus: Vec<u32> = match (k, modulus) {
            (1, _) => vec![0, 1],
            (_, Some(m)) => m.to_vec(),
            (_, None) => CONWAY
                .iter()
                .find(|(cp, ck, _)| *cp == p && *ck == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(FieldError::NoBundledModulus { p, k })?,
        };
        if modulus.len() != k as usize + 1
            || modulus[k as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::MalformedModulus { p, k });
        }
        if k > 1 && !poly::is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible(poly::render(&modulus)));
        }
        let mut spec = FieldSpec {
            p,
            k,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            spec.tables = Some(Arc::new(spec.build_tables()));
        }
        Ok(spec)
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<FieldSpec, FieldError> {
        FieldSpec::new(p, 1, None)
    }

    /// GF(q) with its bundled modulus.
    pub fn of_order(q: u32) -> Result<FieldSpec, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        FieldSpec::new(p, k, None)
    }

    /// GF(q) with an optional modulus given by its integer code.
    pub fn of_order_with_code(q: u32, code: Option<u32>) -> Result<FieldSpec, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        match code {
            Some(c) => FieldSpec::with_modulus_code(p, k, c),
            None => FieldSpec::new(p, k, None),
        }
    }

    /// Builds GF(p^k) from a modulus encoded base `p`. Codes below `p^k`
    /// carry an implicit leading `x^k`.
    pub fn with_modulus_code(p: u32, k: u32, code: u32) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(FieldError::TooLarge { p, k })?;
        if k == 1 {
            return FieldSpec::new(p, 1, None);
        }
        let mut digits = Vec::with_capacity(k as usize + 1);
        let mut rest = code;
        for _ in 0..=k {
            digits.push(rest % p);
            rest /= p;
        }
        if rest != 0 || (code >= q && digits[k as usize] != 1) {
            return Err(FieldError::MalformedModulus { p, k });
        }
        digits[k as usize] = 1;
        FieldSpec::new(p, k, Some(&digits))
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Integer encoding of the full monic modulus in base `p`.
    pub fn modulus_code(&self) -> u32 {
        self.modulus.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// True when the modulus is the bundled default for this order.
    pub fn has_default_modulus(&self) -> bool {
        self.k == 1
            || CONWAY
                .iter()
                .any(|(p, k, m)| *p == self.p && *k == self.k && *m == self.modulus.as_slice())
    }

    pub fn elem(&self, code: u32) -> Result<FieldElem, FieldError> {
        if code < self.q {
            Ok(FieldElem::from_code(code))
        } else {
            Err(FieldError::InvalidCode { code, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem::from_code)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem::from_code)
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.add[(a.code() * self.q + b.code()) as usize]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.neg[a.0 as usize]),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.mul[(a.code() * self.q + b.code()) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElem(t.inv[a.0 as usize]),
            None => self.pow(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, a: FieldElem) -> Vec<u32> {
        let mut rest = a.code();
        (0..self.k)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    fn encode_digits(&self, digits: &[u32]) -> FieldElem {
        FieldElem::from_code(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d))
    }

    fn add_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem::from_code((a.code() + b.code()) % self.p);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode_digits(&sum)
    }

    fn neg_slow(&self, a: FieldElem) -> FieldElem {
        let d: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.encode_digits(&d)
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem::from_code(((a.code() as u64 * b.code() as u64) % self.p as u64) as u32);
        }
        let product = poly::mul(&self.digits(a), &self.digits(b), self.p);
        let mut reduced = poly::rem(&product, &self.modulus, self.p);
        reduced.resize(self.k as usize, 0);
        self.encode_digits(&reduced)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let (ea, eb) = (FieldElem::from_code(a as u32), FieldElem::from_code(b as u32));
                add[a * q + b] = self.add_slow(ea, eb).0;
                mul[a * q + b] = self.mul_slow(ea, eb).0;
            }
        }
        let neg = (0..q).map(|a| self.neg_slow(FieldElem::from_code(a as u32)).0).collect();
        // exhaustive inverse search
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("nonzero element without inverse: modulus not irreducible") as u16;
        }
        Tables { add, mul, neg, inv }
    }
}

/// Dense polynomial helpers over GF(p), coefficients constant term first.
pub(crate) mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        (1..p).find(|b| a * b % p == 1).expect("zero has no inverse")
    }

    /// Remainder of `a` modulo `m` (leading coefficient of `m` nonzero).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let factor = r[r.len() - 1] * lead_inv % p;
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - factor * c % p) % p;
            }
            r = trim(r);
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        for d in 1..=deg / 2 {
            let count = p.pow(d as u32);
            for low in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut rest = low;
                for _ in 0..d {
                    g.push(rest % p);
                    rest /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    pub fn render(f: &[u32]) -> String {
        let terms: Vec<String> = f
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                match i {
                    0 => coeff,
                    1 => format!("{coeff}x"),
                    _ => format!("{coeff}x^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: u32) -> FieldElem {
        FieldElem::from_code(c)
    }

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::prime(2).unwrap();
        assert_eq!(f.order(), 2);
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.add(e(2), e(2)), e(1));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.mul(e(3), e(2)), e(1));
        assert_eq!(f5.inv(e(3)).unwrap(), e(2));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldSpec::of_order(6).unwrap_err(), FieldError::NotPrimePower(6));
    }

    #[test]
    fn bundled_moduli() {
        assert_eq!(FieldSpec::of_order(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldSpec::of_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldSpec::of_order(9).unwrap().modulus(), &[2, 2, 1]);
        for q in [16, 25, 27] {
            assert!(FieldSpec::of_order(q).unwrap().has_default_modulus());
        }
        assert_eq!(
            FieldSpec::new(7, 2, None).unwrap_err(),
            FieldError::NoBundledModulus { p: 7, k: 2 }
        );
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(matches!(
            FieldSpec::new(2, 2, Some(&[1, 0, 1])),
            Err(FieldError::Reducible(_))
        ));
        // (x^2 + x + 1)^2 = x^4 + x^2 + 1 has no roots but is reducible
        assert!(matches!(
            FieldSpec::new(2, 4, Some(&[1, 0, 1, 0, 1])),
            Err(FieldError::Reducible(_))
        ));
        // x^2 + 1 is irreducible over GF(3)
        assert!(FieldSpec::new(3, 2, Some(&[1, 0, 1])).is_ok());
    }

    #[test]
    fn division_by_zero() {
        let f = FieldSpec::of_order(4).unwrap();
        assert_eq!(f.inv(FieldElem::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn modulus_code_round_trip() {
        let f = FieldSpec::of_order(9).unwrap();
        assert_eq!(f.modulus_code(), 2 + 2 * 3 + 9);
        assert_eq!(f.to_string(), "3,2,17");
        assert_eq!("3,2,17".parse::<FieldSpec>().unwrap(), f);
        // implicit leading term
        assert_eq!(FieldSpec::with_modulus_code(3, 2, 8).unwrap(), f);
        assert_eq!(FieldSpec::of_order(5).unwrap().to_string(), "5,1,5");
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldSpec::new(2, 9, Some(&[1, 0, 0, 0, 1, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.order(), 512);
        for c in [1u32, 2, 77, 511] {
            let a = e(c);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
            assert_eq!(f.pow(a, 511), FieldElem::ONE);
        }
    }

    #[test]
    fn render_polynomial() {
        assert_eq!(poly::render(&[2, 2, 1]), "x^2+2x+2");
    }
}
