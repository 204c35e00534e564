//! Univariate polynomials, characteristic polynomials and roots in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Mat;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense polynomial, coefficients from the constant term up. Always trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Poly {
        let f = c.field();
        Poly::new(f, vec![c])
    }

    /// `x - a`.
    pub fn linear(a: &Scalar) -> Poly {
        let f = a.field();
        Poly::new(f, vec![a.neg(), f.one()])
    }

    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&z).add(o.coeffs.get(k).unwrap_or(&z)))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&self.field.int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.field, c)
    }

    /// Euclidean division `self = q * d + r`.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dl = d.lead().ok_or(Error::DivisionByZero)?.inv()?;
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&dl);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(dc));
            }
            q[k] = c;
        }
        Ok((Poly::new(self.field, q), Poly::new(self.field, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Poly) -> Result<Poly> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::constant(self.field.one()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// Characteristic polynomial `det(t I - m)` via Hessenberg reduction.
pub fn charpoly(m: &Mat) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::DimMismatch("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let field = m.field();
    let mut h = m.clone();
    for c in 1..n.saturating_sub(1) {
        let Some(i) = (c..n).find(|&i| !h.get(i, c - 1).is_zero()) else {
            continue;
        };
        if i != c {
            for j in 0..n {
                let t = h.get(i, j).clone();
                h.set(i, j, h.get(c, j).clone());
                h.set(c, j, t);
            }
            for j in 0..n {
                let t = h.get(j, i).clone();
                h.set(j, i, h.get(j, c).clone());
                h.set(j, c, t);
            }
        }
        let t = h.get(c, c - 1).inv()?;
        for i in c + 1..n {
            let u = h.get(i, c - 1).mul(&t);
            if u.is_zero() {
                continue;
            }
            for j in 0..n {
                let v = h.get(i, j).sub(&u.mul(h.get(c, j)));
                h.set(i, j, v);
            }
            for j in 0..n {
                let v = h.get(j, c).add(&u.mul(h.get(j, i)));
                h.set(j, c, v);
            }
        }
    }
    // p_{k+1} = (t - h_kk) p_k - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i
    let mut ps: Vec<Poly> = vec![Poly::constant(field.one())];
    for k in 0..n {
        let mut next = Poly::linear(h.get(k, k)).mul(&ps[k]);
        let mut prod = field.one();
        for i in (0..k).rev() {
            prod = prod.mul(h.get(i + 1, i));
            if prod.is_zero() {
                break;
            }
            let c = h.get(i, k).mul(&prod);
            if !c.is_zero() {
                next = next.sub(&ps[i].scale(&c));
            }
        }
        ps.push(next);
    }
    Ok(ps.pop().unwrap())
}

/// Roots with multiplicity, sorted canonically. Fails if some factor is not linear.
pub fn roots(f: &Poly) -> Result<Vec<(Scalar, usize)>> {
    let deg = f.degree().ok_or(Error::DivisionByZero)?;
    let candidates = match f.field() {
        Field::Rationals => rational_root_candidates(f)?,
        Field::Prime(p) => prime_field_roots(f, p)?,
    };
    let mut rest = f.clone();
    let mut out = Vec::new();
    for r in candidates {
        let lin = Poly::linear(&r);
        let mut mult = 0;
        loop {
            let (q, rem) = rest.divrem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    let found: usize = out.iter().map(|(_, m)| m).sum();
    if found < deg {
        return Err(Error::IrreducibleFactor(deg - found));
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

fn rational_root_candidates(f: &Poly) -> Result<Vec<Scalar>> {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.as_rational().unwrap().denom());
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&den / r.denom())
        })
        .collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        out.push(Field::Rationals.zero());
    }
    let a0 = ints[low].abs().to_u64().ok_or(Error::CoefficientsTooLarge)?;
    let an = ints.last().unwrap().abs().to_u64().ok_or(Error::CoefficientsTooLarge)?;
    if low + 1 == ints.len() {
        return Ok(out);
    }
    let ps = divisors(a0);
    let qs = divisors(an);
    let mut seen = std::collections::BTreeSet::new();
    for p in &ps {
        for q in &qs {
            let r = BigRational::new(BigInt::from(*p), BigInt::from(*q));
            for s in [r.clone(), -r] {
                if seen.insert(s.clone()) {
                    let x = Scalar::Q(s);
                    if f.eval(&x).is_zero() {
                        out.push(x);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn prime_field_roots(f: &Poly, p: u64) -> Result<Vec<Scalar>> {
    let field = Field::Prime(p);
    let x = Poly::x(field);
    // product of the distinct linear factors
    let xp = x.powmod(p, f)?;
    let mut g = f.gcd(&xp.sub(&x));
    let mut out = Vec::new();
    if g.eval(&field.zero()).is_zero() {
        out.push(field.zero());
        g = g.divrem(&x)?.0;
    }
    split_linear(&g, p, &mut out)?;
    Ok(out)
}

// equal-degree splitting of a squarefree product of linear factors
fn split_linear(g: &Poly, p: u64, out: &mut Vec<Scalar>) -> Result<()> {
    let field = Field::Prime(p);
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let g = g.monic();
            out.push(g.coeffs()[0].neg());
            return Ok(());
        }
        _ => {}
    }
    for delta in 0..p {
        let s = Poly::new(field, vec![field.int(delta as i64), field.one()]);
        let h = s.powmod((p - 1) / 2, g)?.sub(&Poly::constant(field.one()));
        let d = g.gcd(&h);
        let dg = d.degree().unwrap_or(0);
        if dg > 0 && dg < g.degree().unwrap() {
            let (q, _) = g.divrem(&d)?;
            split_linear(&d, p, out)?;
            split_linear(&q, p, out)?;
            return Ok(());
        }
    }
    Err(Error::IrreducibleFactor(g.degree().unwrap()))
}

fn factor_u64(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if crate::scalar::is_prime(n) {
        out.push(n);
        return;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(q) {
            out.push(q);
            factor_u64(n / q, out);
            return;
        }
    }
    let d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

fn pollard_rho(n: u64) -> u64 {
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    for c in 1u64.. {
        let f = |x: u64| (mulmod(x, x) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// All positive divisors of `n` (n > 0), ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    factor_u64(n, &mut primes);
    primes.sort_unstable();
    let mut divs = vec![1u64];
    let mut i = 0;
    while i < primes.len() {
        let q = primes[i];
        let mut e = 0;
        while i < primes.len() && primes[i] == q {
            e += 1;
            i += 1;
        }
        let cur = divs.clone();
        let mut pw = 1u64;
        for _ in 0..e {
            pw *= q;
            divs.extend(cur.iter().map(|d| d * pw));
        }
    }
    divs.sort_unstable();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn divisors_small() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(97), vec![1, 97]);
        assert_eq!(divisors(1_000_003 * 999_983), vec![1, 999_983, 1_000_003, 999_983 * 1_000_003]);
    }

    #[test]
    fn charpoly_matches_determinant_at_sample_points() {
        let m = Mat::from_i64(q(), &[&[1, 2, 0, 3], &[0, 1, 4, 1], &[2, 0, 0, 1], &[1, 1, 1, 1]]);
        let cp = charpoly(&m).unwrap();
        assert_eq!(cp.degree(), Some(4));
        for t in -3..=3 {
            let ts = q().int(t);
            let tm = &Mat::scalar(q(), 4, &ts) - &m;
            assert_eq!(cp.eval(&ts), determinant(&tm).unwrap());
        }
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let half = q().ratio(1, 2).unwrap();
        let f = Poly::linear(&half).mul(&Poly::linear(&half)).mul(&Poly::linear(&q().int(-3))).mul(&Poly::x(q()));
        let r = roots(&f).unwrap();
        assert_eq!(r, vec![(q().int(-3), 1), (q().zero(), 1), (half, 2)]);
    }

    #[test]
    fn irreducible_quadratic_is_rejected() {
        let f = Poly::new(q(), vec![q().int(-2), q().zero(), q().one()]);
        assert_eq!(roots(&f), Err(Error::IrreducibleFactor(2)));
        let fp = Field::Prime(7);
        // x^2 - 2 splits mod 7 (3^2 = 2)
        let g = Poly::new(fp, vec![fp.int(-2), fp.zero(), fp.one()]);
        assert_eq!(roots(&g).unwrap(), vec![(fp.int(3), 1), (fp.int(4), 1)]);
        // x^2 + 1 does not split mod 7
        let h = Poly::new(fp, vec![fp.one(), fp.zero(), fp.one()]);
        assert_eq!(roots(&h), Err(Error::IrreducibleFactor(2)));
    }

    #[test]
    fn prime_field_repeated_roots() {
        let fp = Field::Prime(10007);
        let f = Poly::linear(&fp.int(5)).mul(&Poly::linear(&fp.int(5))).mul(&Poly::linear(&fp.int(9000)));
        assert_eq!(roots(&f).unwrap(), vec![(fp.int(5), 2), (fp.int(9000), 1)]);
    }
}
