//! Exact linear algebra over the rationals and prime fields.

mod elim;
mod mat;
pub mod poly;

pub use elim::{
    column_space, determinant, echelon, intersect_spans, inverse, kernel_matrix, nullspace, rank, solve, Echelon,
};
pub use mat::Mat;

use crate::error::{Error, Result};

/// Unique `X` with `a X - X b = c`, via the vectorised `(m l) x (m l)` system.
pub fn solve_sylvester(a: &Mat, b: &Mat, c: &Mat) -> Result<Mat> {
    let (m, l) = (a.rows(), b.rows());
    if !a.is_square() || !b.is_square() || c.rows() != m || c.cols() != l {
        return Err(Error::DimMismatch(format!(
            "sylvester: a {}x{}, b {}x{}, c {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    if a.field() != b.field() || a.field() != c.field() {
        return Err(Error::FieldMismatch);
    }
    let field = a.field();
    let n = m * l;
    if n == 0 {
        return Ok(Mat::zeros(field, m, l));
    }
    // unknown x_{pq} sits at index p*l + q
    let mut sys = Mat::zeros(field, n, n);
    for p in 0..m {
        for q in 0..l {
            let row = p * l + q;
            for s in 0..m {
                let v = a.get(p, s);
                if !v.is_zero() {
                    let col = s * l + q;
                    let cur = sys.get(row, col).add(v);
                    sys.set(row, col, cur);
                }
            }
            for s in 0..l {
                let v = b.get(s, q);
                if !v.is_zero() {
                    let col = p * l + s;
                    let cur = sys.get(row, col).sub(v);
                    sys.set(row, col, cur);
                }
            }
        }
    }
    if rank(&sys) < n {
        return Err(Error::SpectraOverlap);
    }
    let x = solve(&sys, &c.vec())?.ok_or(Error::SpectraOverlap)?;
    x.reshape(m, l)
}

/// Mod-p reduction of a rational matrix, when every denominator is invertible.
pub fn reduce_mod(m: &Mat, p: u64) -> Result<Mat> {
    m.reduce(crate::scalar::Field::prime(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn sylvester_scalar_case() {
        let q = Field::Rationals;
        let x = solve_sylvester(
            &Mat::from_i64(q, &[&[1]]),
            &Mat::from_i64(q, &[&[2]]),
            &Mat::from_i64(q, &[&[3]]),
        )
        .unwrap();
        assert_eq!(x, Mat::from_i64(q, &[&[-3]]));
    }

    #[test]
    fn sylvester_zero_rhs() {
        let q = Field::Rationals;
        let a = Mat::from_i64(q, &[&[1, 1], &[0, 1]]);
        let b = Mat::from_i64(q, &[&[3]]);
        let x = solve_sylvester(&a, &b, &Mat::zeros(q, 2, 1)).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn sylvester_overlap_is_rejected() {
        let q = Field::Rationals;
        let a = Mat::from_i64(q, &[&[0]]);
        let r = solve_sylvester(&a, &a, &Mat::from_i64(q, &[&[1]]));
        assert_eq!(r, Err(Error::SpectraOverlap));
    }

    #[test]
    fn sylvester_over_prime_field() {
        let f = Field::Prime(5);
        let a = Mat::from_i64(f, &[&[1, 2], &[0, 3]]);
        let b = Mat::from_i64(f, &[&[4]]);
        let c = Mat::from_i64(f, &[&[1], &[1]]);
        let x = solve_sylvester(&a, &b, &c).unwrap();
        assert_eq!(&(&a * &x) - &(&x * &b), c);
    }
}
