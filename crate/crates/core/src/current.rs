//! The truncated current algebra `sl2[z]/z^n` acting on `L(C^r, T (x) C[z]/z^n)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::forms::{residue_space_in, z_multiplication};
use crate::linalg::{echelon, nullspace, rank, Mat};
use crate::scalar::Field;

/// `xi = sum_m xi_m z^m` with traceless 2x2 coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentElement {
    pub coeffs: Vec<Mat>,
}

/// `x = sum_m x_m z^m` with 2 x r coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentVector {
    pub r: usize,
    pub coeffs: Vec<Mat>,
}

fn sl2_basis(field: Field) -> [Mat; 3] {
    [
        Mat::from_i64(field, &[&[0, 1], &[0, 0]]),
        Mat::from_i64(field, &[&[1, 0], &[0, -1]]),
        Mat::from_i64(field, &[&[0, 0], &[1, 0]]),
    ]
}

impl CurrentElement {
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Element from coordinates `(e, h, f)` per degree, index `3m + t`.
    pub fn from_coords(field: Field, coords: &[crate::scalar::Scalar]) -> CurrentElement {
        let b = sl2_basis(field);
        let coeffs = coords
            .chunks(3)
            .map(|c| &(&b[0].scale(&c[0]) + &b[1].scale(&c[1])) + &b[2].scale(&c[2]))
            .collect();
        CurrentElement { coeffs }
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplication by `z` (truncated).
    pub fn shift(&self) -> CurrentElement {
        let n = self.n();
        let field = self.coeffs[0].field();
        let mut coeffs = vec![Mat::zeros(field, 2, 2)];
        coeffs.extend(self.coeffs.iter().take(n - 1).cloned());
        CurrentElement { coeffs }
    }

    pub fn act(&self, x: &CurrentVector) -> CurrentVector {
        let n = x.n();
        let field = x.field();
        let coeffs = (0..n)
            .map(|m| {
                (0..=m).fold(Mat::zeros(field, 2, x.r), |acc, a| &acc + &(&self.coeffs[a] * &x.coeffs[m - a]))
            })
            .collect();
        CurrentVector { r: x.r, coeffs }
    }

    fn coords(&self) -> Vec<crate::scalar::Scalar> {
        self.coeffs
            .iter()
            .flat_map(|c| [c.get(0, 1).clone(), c.get(0, 0).clone(), c.get(1, 0).clone()])
            .collect()
    }
}

impl CurrentVector {
    pub fn new(r: usize, coeffs: Vec<Mat>) -> Result<CurrentVector> {
        if coeffs.is_empty() || coeffs.iter().any(|c| c.rows() != 2 || c.cols() != r) {
            return Err(Error::BadShape(format!("coefficients must be nonempty and 2x{r}")));
        }
        Ok(CurrentVector { r, coeffs })
    }

    pub fn zero(field: Field, r: usize, n: usize) -> CurrentVector {
        CurrentVector { r, coeffs: vec![Mat::zeros(field, 2, r); n] }
    }

    /// Vector from its `2rn` coordinates, degree-major.
    pub fn from_coords(field: Field, r: usize, n: usize, coords: &[crate::scalar::Scalar]) -> CurrentVector {
        let coeffs = (0..n)
            .map(|m| Mat::new(2, r, field, coords[m * 2 * r..(m + 1) * 2 * r].to_vec()).unwrap())
            .collect();
        CurrentVector { r, coeffs }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> Field {
        self.coeffs[0].field()
    }

    /// Rank class of the constant coefficient.
    pub fn leading_rank(&self) -> usize {
        rank(&self.coeffs[0])
    }

    /// `y` with `x = z y`, one level down. Requires `x_0 = 0` and `n >= 2`.
    pub fn divide_by_z(&self) -> Option<CurrentVector> {
        if self.n() < 2 || !self.coeffs[0].is_zero() {
            return None;
        }
        Some(CurrentVector { r: self.r, coeffs: self.coeffs[1..].to_vec() })
    }

    /// `z x` one level up.
    pub fn times_z(&self) -> CurrentVector {
        let mut coeffs = vec![Mat::zeros(self.field(), 2, self.r)];
        coeffs.extend(self.coeffs.iter().cloned());
        CurrentVector { r: self.r, coeffs }
    }
}

/// Matrix of `xi -> xi . x`: rows are the `2rn` coordinates of the image, columns the `3n`
/// basis elements `b_t z^m` (index `3m + t`).
pub fn action_matrix(x: &CurrentVector) -> Mat {
    let n = x.n();
    let r = x.r;
    let field = x.field();
    let basis = sl2_basis(field);
    let mut out = Mat::zeros(field, 2 * r * n, 3 * n);
    for m in 0..n {
        for (t, b) in basis.iter().enumerate() {
            let col = 3 * m + t;
            for deg in m..n {
                let img = b * &x.coeffs[deg - m];
                for (e, v) in img.entries().iter().enumerate() {
                    if !v.is_zero() {
                        out.set(deg * 2 * r + e, col, v.clone());
                    }
                }
            }
        }
    }
    out
}

pub fn stabilizer_dim(x: &CurrentVector) -> usize {
    3 * x.n() - rank(&action_matrix(x))
}

pub fn stabilizer_basis(x: &CurrentVector) -> Vec<CurrentElement> {
    let field = x.field();
    nullspace(&action_matrix(x))
        .into_iter()
        .map(|v| CurrentElement::from_coords(field, v.entries()))
        .collect()
}

/// `(m_x, xi)` with `xi` of minimal degree `m_x` generating the stabilizer over `C[z]`.
pub fn cyclic_generator(x: &CurrentVector) -> Result<(usize, CurrentElement)> {
    let l = x.leading_rank();
    if l != 1 {
        return Err(Error::WrongStratum(l));
    }
    let n = x.n();
    let field = x.field();
    let basis = stabilizer_basis(x);
    if basis.is_empty() {
        return Err(Error::Postcondition("rank-one stabilizer is empty".into()));
    }
    // coordinates are ordered by degree, so the first pivot of the echelon form has minimal degree
    let rows: Vec<Mat> = basis.iter().map(|b| Mat::column(field, b.coords())).collect();
    let stacked = Mat::from_columns(field, 3 * n, &rows).transpose();
    let e = echelon(&stacked);
    let m_x = e.pivots[0] / 3;
    let xi = CurrentElement::from_coords(field, e.rref.row(0));
    if basis.len() != n - m_x {
        return Err(Error::Postcondition(format!(
            "stabilizer dim {} differs from n - m_x = {}",
            basis.len(),
            n - m_x
        )));
    }
    if !z_powers_span(&xi, x, basis.len()) {
        return Err(Error::Postcondition("z-powers of the generator do not span".into()));
    }
    Ok((m_x, xi))
}

/// `xi, z xi, ...` all stabilize `x` and span a space of dimension `dim`.
fn z_powers_span(xi: &CurrentElement, x: &CurrentVector, dim: usize) -> bool {
    let field = x.field();
    let n = x.n();
    let mut cur = xi.clone();
    let mut cols = Vec::new();
    for _ in 0..n {
        if cur.min_degree().is_none() {
            break;
        }
        if !cur.act(x).coeffs.iter().all(Mat::is_zero) {
            return false;
        }
        cols.push(Mat::column(field, cur.coords()));
        cur = cur.shift();
    }
    cols.len() == dim && rank(&Mat::from_columns(field, 3 * n, &cols)) == dim
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumEntry {
    /// rank class of `x_0`
    pub l: usize,
    /// stabilizer dimension
    pub s: usize,
    pub dim: usize,
    /// set once a census has been compared against this entry
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confirmed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataTable {
    pub r: usize,
    pub n: usize,
    pub entries: Vec<StratumEntry>,
}

impl StrataTable {
    pub fn modality(&self) -> i64 {
        self.entries
            .iter()
            .map(|e| e.dim as i64 + e.s as i64 - 3 * self.n as i64)
            .max()
            .unwrap_or(0)
    }

    pub fn get(&self, l: usize, s: usize) -> Option<&StratumEntry> {
        self.entries.iter().find(|e| e.l == l && e.s == s)
    }

    /// Entries attaining the modality.
    pub fn attaining(&self) -> Vec<&StratumEntry> {
        let m = self.modality();
        self.entries.iter().filter(|e| e.dim as i64 + e.s as i64 - 3 * self.n as i64 == m).collect()
    }

    /// Flag entries whose dimension is matched by the census: the count of points in the
    /// stratum has `round(log_p count) == dim`. A heuristic at small `p`.
    pub fn confirm_with(&mut self, census: &Census) {
        let p = census.p as f64;
        for e in &mut self.entries {
            let count = census.by_stratum.get(&(e.l, e.s)).copied().unwrap_or(0);
            let ok = count > 0 && ((count as f64).ln() / p.ln()).round() as usize == e.dim;
            e.confirmed = Some(ok);
        }
    }
}

/// Stratum dimensions from the rank recursion.
pub fn strata_dims(r: usize, n: usize) -> Result<StrataTable> {
    if r < 2 {
        return Err(Error::BadRank(r));
    }
    if n == 0 {
        return Err(Error::OutOfRange("n = 0".into()));
    }
    // level 1: x = 0, rank one, rank two
    let mut level: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    level.insert((0, 3), 0);
    level.insert((1, 1), r + 1);
    level.insert((2, 0), 2 * r);
    for m in 2..=n {
        let mut next = BTreeMap::new();
        next.insert((2, 0), 2 * r * m);
        for s in 1..=m {
            let dim = if s < m {
                level.get(&(1, s)).map(|d| d + 2 * r)
            } else {
                level.get(&(1, m - 1)).map(|d| d + r + 1)
            };
            if let Some(d) = dim {
                next.insert((1, s), d);
            }
        }
        // rank zero: x = z y, and sl2 z^{m-1} kills x on top of the stabilizer of y
        for (&(_, s), &d) in &level {
            let e = next.entry((0, s + 3)).or_insert(d);
            *e = (*e).max(d);
        }
        level = next;
    }
    let entries = level
        .into_iter()
        .map(|((l, s), dim)| StratumEntry { l, s, dim, confirmed: None })
        .collect();
    Ok(StrataTable { r, n, entries })
}

/// Point counts over `F_p`, with pointwise checks of the rank-two, rank-one and rank-zero rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub r: usize,
    pub n: usize,
    pub p: u64,
    pub points: u64,
    /// count per stabilizer dimension
    pub by_s: BTreeMap<usize, u64>,
    /// count per (rank class, stabilizer dimension)
    #[serde(with = "pair_keys")]
    pub by_stratum: BTreeMap<(usize, usize), u64>,
    pub violations: u64,
}

mod pair_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), u64>, s: S) -> Result<S::Ok, S::Error> {
        let v: BTreeMap<String, u64> = m.iter().map(|((l, st), c)| (format!("l{l}_s{st}"), *c)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), u64>, D::Error> {
        let v = BTreeMap::<String, u64>::deserialize(d)?;
        v.into_iter()
            .map(|(k, c)| {
                let parse = || -> Option<(usize, usize)> {
                    let (l, s) = k.strip_prefix('l')?.split_once("_s")?;
                    Some((l.parse().ok()?, s.parse().ok()?))
                };
                parse().map(|key| (key, c)).ok_or_else(|| serde::de::Error::custom(format!("bad key {k}")))
            })
            .collect()
    }
}

/// Largest enumeration accepted by [`ff_census`].
pub const CENSUS_LIMIT: u64 = 100_000_000;

#[derive(Default)]
struct Tally {
    by_stratum: BTreeMap<(usize, usize), u64>,
    violations: u64,
}

fn classify(x: &CurrentVector) -> (usize, usize, bool) {
    let l = x.leading_rank();
    let s = stabilizer_dim(x);
    let ok = match l {
        2 => s == 0,
        1 => matches!(cyclic_generator(x), Ok((m, _)) if s == x.n() - m),
        _ => {
            let below = x.divide_by_z().map_or(0, |y| stabilizer_dim(&y));
            s == below + 3
        }
    };
    (l, s, ok)
}

pub fn ff_census(r: usize, n: usize, p: u64) -> Result<Census> {
    ff_census_with(r, n, p, Execution::default())
}

pub fn ff_census_with(r: usize, n: usize, p: u64, exec: Execution) -> Result<Census> {
    let field = Field::prime(p)?;
    let coords = 2 * r * n;
    let total = (p as u128).checked_pow(coords as u32).filter(|&t| t <= CENSUS_LIMIT as u128);
    let Some(total) = total else {
        return Err(Error::TooLarge(format!("{p}^{coords}")));
    };
    let total = total as u64;
    let decode = |mut idx: u64| {
        let c: Vec<_> = (0..coords)
            .map(|_| {
                let v = idx % p;
                idx /= p;
                crate::scalar::Scalar::Fp(v, p)
            })
            .collect();
        CurrentVector::from_coords(field, r, n, &c)
    };
    let tally = exec::fold_range(
        exec,
        total,
        4096,
        Tally::default,
        |mut t, idx| {
            let (l, s, ok) = classify(&decode(idx));
            *t.by_stratum.entry((l, s)).or_default() += 1;
            t.violations += u64::from(!ok);
            t
        },
        |mut a, b| {
            for (k, v) in b.by_stratum {
                *a.by_stratum.entry(k).or_default() += v;
            }
            a.violations += b.violations;
            a
        },
    );
    let mut by_s = BTreeMap::new();
    for (&(_, s), &c) in &tally.by_stratum {
        *by_s.entry(s).or_default() += c;
    }
    Ok(Census { r, n, p, points: total, by_s, by_stratum: tally.by_stratum, violations: tally.violations })
}

/// Comparison of the centralizer of `z` in `sp(T (x) C[z]/z^n)` with the image of `sl2[z]/z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerCheck {
    pub n: usize,
    pub centralizer_dim: usize,
    pub image_dim: usize,
    pub image_in_centralizer: bool,
    pub centralizer_in_image: bool,
}

pub fn residue_centralizer_check(n: usize) -> CentralizerCheck {
    let field = Field::Rationals;
    let space = residue_space_in(field, n);
    let z = z_multiplication(field, n);
    let g = space.g_basis();
    // coefficients c with [sum c_a g_a, z] = 0
    let cols: Vec<Mat> = g.iter().map(|b| b.commutator(&z).vec()).collect();
    let d = 2 * n;
    let comm = Mat::from_columns(field, d * d, &cols);
    let centralizer: Vec<Mat> = nullspace(&comm)
        .iter()
        .map(|c| {
            g.iter()
                .zip(c.entries())
                .fold(Mat::zeros(field, d, d), |acc, (b, s)| &acc + &b.scale(s))
        })
        .collect();
    let sl2 = sl2_basis(field);
    let mut image = Vec::new();
    for a in 0..n {
        for x in &sl2 {
            let mut m = Mat::zeros(field, d, d);
            for b in 0..n - a {
                for i in 0..2 {
                    for i2 in 0..2 {
                        m.set(2 * (a + b) + i2, 2 * b + i, x.get(i2, i).clone());
                    }
                }
            }
            image.push(m);
        }
    }
    let flat = |ms: &[Mat]| Mat::from_columns(field, d * d, &ms.iter().map(Mat::vec).collect::<Vec<_>>());
    let image_dim = rank(&flat(&image));
    let image_in_centralizer = image.iter().all(|m| space.is_anti_self_adjoint(m) && m.commutator(&z).is_zero());
    let mut both = image.clone();
    both.extend(centralizer.iter().cloned());
    let centralizer_in_image = rank(&flat(&both)) == image_dim;
    CentralizerCheck { n, centralizer_dim: centralizer.len(), image_dim, image_in_centralizer, centralizer_in_image }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn vec2(rows: &[&[&[i64]]]) -> CurrentVector {
        let coeffs: Vec<Mat> = rows.iter().map(|m| Mat::from_i64(q(), m)).collect();
        CurrentVector::new(coeffs[0].cols(), coeffs).unwrap()
    }

    #[test]
    fn rank_two_has_trivial_stabilizer() {
        let x = vec2(&[&[&[1, 0], &[0, 1]], &[&[3, 1], &[2, 2]]]);
        assert!(stabilizer_basis(&x).is_empty());
    }

    #[test]
    fn zero_has_full_stabilizer() {
        let x = CurrentVector::zero(q(), 2, 3);
        assert_eq!(stabilizer_basis(&x).len(), 9);
    }

    #[test]
    fn rank_one_base_case() {
        let x = vec2(&[&[&[1, 0], &[0, 0]]]);
        let st = stabilizer_basis(&x);
        assert_eq!(st.len(), 1);
        let (m, xi) = cyclic_generator(&x).unwrap();
        assert_eq!(m, 0);
        assert!(xi.act(&x).coeffs[0].is_zero());
    }

    #[test]
    fn rank_one_constant_annihilator_lifts() {
        let x = vec2(&[&[&[1, 2], &[0, 0]], &[&[0, 0], &[0, 0]], &[&[0, 0], &[0, 0]]]);
        let (m, _) = cyclic_generator(&x).unwrap();
        assert_eq!(m, 0);
        assert_eq!(stabilizer_dim(&x), 3);
    }

    #[test]
    fn rank_one_generic_second_coefficient() {
        let x = vec2(&[&[&[1, 0], &[0, 0]], &[&[0, 0], &[0, 1]]]);
        let (m, _) = cyclic_generator(&x).unwrap();
        assert_eq!(stabilizer_dim(&x), 2 - m);
        assert_eq!(m, 1);
    }

    #[test]
    fn wrong_stratum() {
        let x = vec2(&[&[&[1, 0], &[0, 1]]]);
        assert_eq!(cyclic_generator(&x).unwrap_err(), Error::WrongStratum(2));
    }

    #[test]
    fn base_strata() {
        let t = strata_dims(2, 1).unwrap();
        assert_eq!(t.get(0, 3).unwrap().dim, 0);
        assert_eq!(t.get(1, 1).unwrap().dim, 3);
        assert_eq!(t.get(2, 0).unwrap().dim, 4);
        assert_eq!(t.modality(), 1);
        let t3 = strata_dims(3, 1).unwrap();
        assert_eq!(t3.modality(), 3);
        let att = t3.attaining();
        assert_eq!(att.len(), 1);
        assert_eq!((att[0].l, att[0].s), (2, 0));
        assert_eq!(strata_dims(1, 1).unwrap_err(), Error::BadRank(1));
    }

    #[test]
    fn small_census() {
        let c = ff_census(2, 1, 3).unwrap();
        assert_eq!(c.points, 81);
        assert_eq!(c.by_s[&3], 1);
        assert_eq!(c.by_s[&0], (9 - 1) * (9 - 3));
        assert_eq!(c.violations, 0);
        assert!(matches!(ff_census(4, 3, 5), Err(Error::TooLarge(_))));
    }

    #[test]
    fn centralizer_of_z() {
        for n in 1..=3 {
            let c = residue_centralizer_check(n);
            assert_eq!(c.centralizer_dim, 3 * n);
            assert_eq!(c.image_dim, 3 * n);
            assert!(c.image_in_centralizer && c.centralizer_in_image);
        }
    }
}
