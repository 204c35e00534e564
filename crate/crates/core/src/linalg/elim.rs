//! Row reduction. Fraction-free (Bareiss) over the rationals, plain Gauss-Jordan over F_p.
//! Pivots are always the first nonzero entry in column order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Mat;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Mat,
    pub pivots: Vec<usize>,
}

fn integer_rows(m: &Mat) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let mut l = BigInt::one();
            for x in row {
                l = l.lcm(x.as_rational().expect("rational entry").denom());
            }
            row.iter()
                .map(|x| {
                    let r = x.as_rational().unwrap();
                    r.numer() * (&l / r.denom())
                })
                .collect()
        })
        .collect()
}

/// Fraction-free forward elimination. Returns the echelon rows and pivot columns.
fn bareiss(m: &Mat) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let (top, bottom) = a.split_at_mut(r + 1);
        let piv_row = &top[r];
        let piv = &piv_row[c];
        for row in bottom.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = piv * &row[j] - &lead * &piv_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = BigInt::zero();
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

fn fp_values(m: &Mat) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| match x {
                    Scalar::Fp(v, _) => *v,
                    Scalar::Q(_) => unreachable!(),
                })
                .collect()
        })
        .collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    Scalar::Fp(a, p).inv().map(|s| if let Scalar::Fp(v, _) = s { v } else { 0 }).unwrap_or(0)
}

/// Gauss-Jordan over F_p on raw residues; `full` also clears above the pivots.
fn gauss_fp(a: &mut [Vec<u64>], cols: usize, p: u64, full: bool) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for j in c..cols {
            a[r][j] = ((a[r][j] as u128 * inv as u128) % p as u128) as u64;
        }
        let piv_row = a[r].clone();
        let start = if full { 0 } else { r + 1 };
        for (i, row) in a.iter_mut().enumerate().skip(start) {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..cols {
                let t = (f as u128 * piv_row[j] as u128) % p as u128;
                row[j] = ((row[j] as u128 + p as u128 - t) % p as u128) as u64;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of `m`.
pub fn rank(m: &Mat) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    match m.field() {
        Field::Rationals => bareiss(m).1.len(),
        Field::Prime(p) => {
            let mut a = fp_values(m);
            gauss_fp(&mut a, m.cols(), p, false).len()
        }
    }
}

/// Reduced row echelon form. Zero rows are dropped, so `rref.rows() == rank`.
pub fn echelon(m: &Mat) -> Echelon {
    let field = m.field();
    let cols = m.cols();
    if m.rows() == 0 || cols == 0 {
        return Echelon { rref: Mat::zeros(field, 0, cols), pivots: vec![] };
    }
    match field {
        Field::Rationals => {
            let (a, pivots) = bareiss(m);
            let mut rows: Vec<Vec<BigRational>> = a
                .into_iter()
                .zip(&pivots)
                .map(|(row, &c)| {
                    let d = row[c].clone();
                    row.into_iter().map(|x| BigRational::new(x, d.clone())).collect()
                })
                .collect();
            for t in (0..rows.len()).rev() {
                let c = pivots[t];
                let (upper, lower) = rows.split_at_mut(t);
                let piv = &lower[0];
                for row in upper.iter_mut() {
                    if row[c].is_zero() {
                        continue;
                    }
                    let f = row[c].clone();
                    for j in c..cols {
                        if !piv[j].is_zero() {
                            row[j] -= &f * &piv[j];
                        }
                    }
                }
            }
            let r = rows.len();
            let data = rows.into_iter().flatten().map(Scalar::Q).collect();
            Echelon { rref: Mat::new(r, cols, field, data).unwrap(), pivots }
        }
        Field::Prime(p) => {
            let mut a = fp_values(m);
            let pivots = gauss_fp(&mut a, cols, p, true);
            let r = pivots.len();
            let data = a.into_iter().take(r).flatten().map(|v| Scalar::Fp(v, p)).collect();
            Echelon { rref: Mat::new(r, cols, field, data).unwrap(), pivots }
        }
    }
}

/// Basis of the right kernel, as column vectors; one per free column in increasing order.
pub fn nullspace(m: &Mat) -> Vec<Mat> {
    let field = m.field();
    let cols = m.cols();
    let e = echelon(m);
    let mut is_pivot = vec![false; cols];
    for &c in &e.pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (t, &c) in e.pivots.iter().enumerate() {
                v[c] = e.rref.get(t, f).neg();
            }
            Mat::column(field, v)
        })
        .collect()
}

/// Kernel basis packed as the columns of one matrix.
pub fn kernel_matrix(m: &Mat) -> Mat {
    let ns = nullspace(m);
    Mat::from_columns(m.field(), m.cols(), &ns)
}

/// Some solution of `a x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if a.rows() != b.rows() {
        return Err(Error::DimMismatch("solve: row counts differ".into()));
    }
    let field = a.field();
    let aug = Mat::hstack(field, &[a.clone(), b.clone()])?;
    let e = echelon(&aug);
    let n = a.cols();
    if e.pivots.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut x = Mat::zeros(field, n, b.cols());
    for (t, &c) in e.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(c, j, e.rref.get(t, n + j).clone());
        }
    }
    Ok(Some(x))
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    if !m.is_square() {
        return Err(Error::DimMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Mat::zeros(m.field(), 0, 0));
    }
    let id = Mat::identity(m.field(), n);
    let aug = Mat::hstack(m.field(), &[m.clone(), id])?;
    let e = echelon(&aug);
    if e.pivots.len() < n || e.pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(e.rref.block(0, n, n, n))
}

pub fn determinant(m: &Mat) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::DimMismatch("determinant of a non-square matrix".into()));
    }
    let field = m.field();
    let n = m.rows();
    let mut a = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return Ok(field.zero());
        };
        if pr != c {
            for j in 0..n {
                let t = a.get(c, j).clone();
                a.set(c, j, a.get(pr, j).clone());
                a.set(pr, j, t);
            }
            det = det.neg();
        }
        let piv = a.get(c, c).clone();
        det = det.mul(&piv);
        let inv = piv.inv()?;
        for i in c + 1..n {
            let f = a.get(i, c).mul(&inv);
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = a.get(i, j).sub(&f.mul(a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    Ok(det)
}

/// Basis (as columns) of the column space of `m`, taken from its pivot columns.
pub fn column_space(m: &Mat) -> Vec<Mat> {
    let e = echelon(m);
    e.pivots.iter().map(|&c| m.col(c)).collect()
}

/// Basis of the intersection of two column spans inside the same ambient space.
pub fn intersect_spans(a: &[Mat], b: &[Mat], dim: usize, field: Field) -> Vec<Mat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    // solve sum x_i a_i = sum y_j b_j
    let ma = Mat::from_columns(field, dim, a);
    let mb = Mat::from_columns(field, dim, b);
    let joint = Mat::hstack(field, &[ma.clone(), -&mb]).unwrap();
    let mut out: Vec<Mat> = nullspace(&joint)
        .into_iter()
        .map(|v| &ma * &v.block(0, 0, a.len(), 1))
        .collect();
    out = column_space(&Mat::from_columns(field, dim, &out));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let q = Field::Rationals;
        assert_eq!(rank(&Mat::identity(q, 2)), 2);
        assert_eq!(rank(&Mat::zeros(q, 3, 4)), 0);
        let m = Mat::from_i64(q, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&m.reduce(Field::Prime(3)).unwrap()), 2);
    }

    #[test]
    fn nullspace_examples() {
        let q = Field::Rationals;
        assert!(nullspace(&Mat::identity(q, 3)).is_empty());
        let ns = nullspace(&Mat::from_i64(q, &[&[1, 1]]));
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], Mat::from_i64(q, &[&[-1], &[1]]));
    }

    #[test]
    fn rref_over_rationals_has_unit_pivots() {
        let q = Field::Rationals;
        let m = Mat::from_i64(q, &[&[0, 2, 4], &[3, 1, 1], &[3, 3, 5]]);
        let e = echelon(&m);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rref.get(0, 0), &q.one());
        assert_eq!(e.rref.get(1, 1), &q.one());
        assert!(e.rref.get(0, 1).is_zero());
    }

    #[test]
    fn inverse_and_determinant() {
        let q = Field::Rationals;
        let m = Mat::from_i64(q, &[&[2, 1], &[7, 4]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(&m * &inv, Mat::identity(q, 2));
        assert_eq!(determinant(&m).unwrap(), q.one());
        assert_eq!(inverse(&Mat::from_i64(q, &[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn solve_inconsistent() {
        let q = Field::Rationals;
        let a = Mat::from_i64(q, &[&[1, 1], &[1, 1]]);
        assert!(solve(&a, &Mat::from_i64(q, &[&[1], &[2]])).unwrap().is_none());
        let x = solve(&a, &Mat::from_i64(q, &[&[2], &[2]])).unwrap().unwrap();
        assert_eq!(&a * &x, Mat::from_i64(q, &[&[2], &[2]]));
    }

    #[test]
    fn span_intersection() {
        let q = Field::Rationals;
        let e = |v: &[i64]| Mat::column(q, v.iter().map(|&x| q.int(x)).collect());
        let a = vec![e(&[1, 0, 0]), e(&[0, 1, 0])];
        let b = vec![e(&[0, 1, 1]), e(&[1, 1, 0])];
        let i = intersect_spans(&a, &b, 3, q);
        assert_eq!(i.len(), 1);
        assert_eq!(rank(&Mat::from_columns(q, 3, &[i[0].clone(), e(&[1, 1, 0])])), 1);
    }
}
