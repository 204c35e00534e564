//! Exact scalars over the rationals or a prime field.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Coefficient field tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Validated prime field; `p` must be an odd prime.
    pub fn prime(p: u64) -> Result<Field, Error> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, v: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Fp(v.rem_euclid(p as i64) as u64, p),
        }
    }

    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar, Error> {
        self.int(num).checked_div(&self.int(den))
    }

    /// Parse `"p/q"`, `"p"` (rationals) or `"n mod p"` (prime field).
    pub fn parse(self, s: &str) -> Result<Scalar, Error> {
        let v: Scalar = s.parse()?;
        match (self, &v) {
            (Field::Rationals, Scalar::Q(_)) => Ok(v),
            (Field::Prime(p), Scalar::Fp(_, q)) if p == *q => Ok(v),
            // integers written as rationals are accepted in a prime field
            (Field::Prime(p), Scalar::Q(r)) => Scalar::from_rational(r, Field::Prime(p)),
            _ => Err(Error::FieldMismatch),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| Error::Parse(s.to_string()))?;
            return Field::prime(p);
        }
        Err(Error::Parse(s.to_string()))
    }
}

/// A field element. Prime-field values are kept reduced in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64, u64),
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    /// Reduce a rational into `field`; fails if the denominator vanishes mod p.
    pub fn from_rational(r: &BigRational, field: Field) -> Result<Scalar, Error> {
        match field {
            Field::Rationals => Ok(Scalar::Q(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = r.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let d = r.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                Scalar::Fp(n, p).checked_div(&Scalar::Fp(d, p))
            }
        }
    }

    /// Rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp(..) => None,
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "arithmetic across fields");
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp(((*a as u128 + *b as u128) % *p as u128) as u64, *p),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp(((*a as u128 + (*p - *b) as u128) % *p as u128) as u64, *p),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, _)) => Scalar::Fp(mulmod(*a, *b, *p), *p),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a, p) => Scalar::Fp((*p - *a) % *p, *p),
        }
    }

    pub fn inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp(a, p) => Scalar::Fp(powmod(*a, *p - 2, *p), *p),
        })
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, Error> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut r = self.field().one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Square root inside the field, when one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
                    Some(Scalar::Q(BigRational::new(n, d)))
                } else {
                    None
                }
            }
            Scalar::Fp(a, p) => {
                if *a == 0 {
                    return Some(self.clone());
                }
                if powmod(*a, (*p - 1) / 2, *p) != 1 {
                    return None;
                }
                tonelli_shanks(*a, *p).map(|x| Scalar::Fp(x, *p))
            }
        }
    }

    /// Total order used for deterministic sorting (not a field order).
    pub fn canonical_cmp(&self, o: &Scalar) -> Ordering {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) => (p, a).cmp(&(q, b)),
            (Scalar::Q(_), Scalar::Fp(..)) => Ordering::Less,
            (Scalar::Fp(..), Scalar::Q(_)) => Ordering::Greater,
        }
    }
}

fn tonelli_shanks(n: u64, p: u64) -> Option<u64> {
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(n, q, p);
    let mut r = powmod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(v, p) => write!(f, "{v} mod {p}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || Error::Parse(s.to_string());
        if let Some((n, p)) = t.split_once("mod") {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let field = Field::prime(p)?;
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let pb = BigInt::from(p);
            let v = n.mod_floor(&pb).to_u64().ok_or_else(bad)?;
            return match field {
                Field::Prime(p) => Ok(Scalar::Fp(v, p)),
                Field::Rationals => unreachable!(),
            };
        }
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Q(BigRational::new(n, d)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let x: Scalar = "2/4".parse().unwrap();
        assert_eq!(x.to_string(), "1/2");
        let y: Scalar = "-6/-3".parse().unwrap();
        assert_eq!(y.to_string(), "2");
        let z: Scalar = "12 mod 7".parse().unwrap();
        assert_eq!(z, Scalar::Fp(5, 7));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("3 mod 9".parse::<Scalar>().is_err());
        assert!("3 mod 2".parse::<Scalar>().is_err());
    }

    #[test]
    fn prime_field_ops() {
        let f = Field::prime(7).unwrap();
        let a = f.int(3);
        assert_eq!(a.mul(&a.inv().unwrap()), f.one());
        assert_eq!(f.int(-1), f.int(6));
        assert!(f.zero().inv().is_err());
        assert_eq!(f.int(2).sqrt().map(|r| r.mul(&r)), Some(f.int(2)));
        assert_eq!(f.int(3).sqrt(), None);
    }

    #[test]
    fn rational_sqrt() {
        let q = Field::Rationals;
        assert_eq!(q.ratio(9, 4).unwrap().sqrt(), Some(q.ratio(3, 2).unwrap()));
        assert_eq!(q.int(2).sqrt(), None);
        assert_eq!(q.int(-1).sqrt(), None);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime(10007));
        assert!(!is_prime(10007 * 101));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn reduce_rational_mod_p() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(Scalar::from_rational(&r, Field::Prime(7)).unwrap(), Scalar::Fp(4, 7));
        let bad = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert!(Scalar::from_rational(&bad, Field::Prime(7)).is_err());
    }
}
