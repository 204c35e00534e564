use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Mat {
    /// Build from row-major entries; rejects wrong lengths and mixed fields.
    pub fn new(rows: usize, cols: usize, field: Field, data: Vec<Scalar>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Mat { rows, cols, field, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        Mat::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn scalar(field: Field, n: usize, s: &Scalar) -> Mat {
        Mat::from_fn(field, n, n, |i, j| if i == j { s.clone() } else { field.zero() })
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, field, data }
    }

    /// Integer matrix from nested rows (all rows must have equal length).
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat::from_fn(field, r, c, |i, j| field.int(rows[i][j]))
    }

    /// Rational matrix from (numerator, denominator) entries.
    pub fn from_ratios(field: Field, rows: &[&[(i64, i64)]]) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimMismatch("ragged rows".into()));
            }
            for &(n, d) in row.iter() {
                data.push(field.ratio(n, d)?);
            }
        }
        Mat::new(r, c, field, data)
    }

    pub fn column(field: Field, entries: Vec<Scalar>) -> Mat {
        let n = entries.len();
        Mat { rows: n, cols: 1, field, data: entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Mat {
        Mat::from_fn(self.field, self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, field: self.field, data: self.data.iter().map(|x| x.mul(s)).collect() }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| acc.add(self.get(i, i)))
    }

    fn same_shape(&self, o: &Mat, what: &str) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Mat) -> Result<Mat> {
        self.same_shape(o, "add")?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn try_sub(&self, o: &Mat) -> Result<Mat> {
        self.same_shape(o, "sub")?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn try_mul(&self, o: &Mat) -> Result<Mat> {
        if self.field != o.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != o.rows {
            return Err(Error::DimMismatch(format!(
                "product {}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// `[self, o] = self*o - o*self`.
    pub fn commutator(&self, o: &Mat) -> Mat {
        &(self * o) - &(o * self)
    }

    pub fn pow(&self, e: usize) -> Mat {
        assert!(self.is_square());
        let mut r = Mat::identity(self.field, self.rows);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Kronecker product; index `(i1, i2)` maps to `i1 * rows2 + i2`.
    pub fn kron(&self, o: &Mat) -> Mat {
        Mat::from_fn(self.field, self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols).mul(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn block_diag(field: Field, blocks: &[Mat]) -> Mat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, r, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            out.set_block(ro, co, b);
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn vstack(field: Field, blocks: &[Mat]) -> Result<Mat> {
        let c = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != c) {
            return Err(Error::DimMismatch("vstack column counts differ".into()));
        }
        let r = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(field, r, c);
        let mut ro = 0;
        for b in blocks {
            out.set_block(ro, 0, b);
            ro += b.rows;
        }
        Ok(out)
    }

    pub fn hstack(field: Field, blocks: &[Mat]) -> Result<Mat> {
        let r = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != r) {
            return Err(Error::DimMismatch("hstack row counts differ".into()));
        }
        let c = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, r, c);
        let mut co = 0;
        for b in blocks {
            out.set_block(0, co, b);
            co += b.cols;
        }
        Ok(out)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Row-major flattening as a column vector.
    pub fn vec(&self) -> Mat {
        Mat::column(self.field, self.data.clone())
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Result<Mat> {
        Mat::new(rows, cols, self.field, self.data.clone())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, cols: &[Mat]) -> Mat {
        let mut out = Mat::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.rows * c.cols, rows, "column length");
            for i in 0..rows {
                out.set(i, j, c.data[i].clone());
            }
        }
        out
    }

    /// Same matrix with every entry reduced into `field`.
    pub fn reduce(&self, field: Field) -> Result<Mat> {
        let data = self
            .data
            .iter()
            .map(|x| match x.as_rational() {
                Some(r) => Scalar::from_rational(r, field),
                None if x.field() == field => Ok(x.clone()),
                None => Err(Error::FieldMismatch),
            })
            .collect::<Result<Vec<_>>>()?;
        Mat::new(self.rows, self.cols, field, data)
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| self.get(perm[i], j).clone())
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(field: Field, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, field.one());
        }
        m
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, o: &Mat) -> Mat {
        self.try_add(o).expect("matrix add")
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, o: &Mat) -> Mat {
        self.try_sub(o).expect("matrix sub")
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        self.try_mul(o).expect("matrix product")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, field: self.field, data: self.data.iter().map(Scalar::neg).collect() }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatJson { rows: self.rows, cols: self.cols, entries: self.data.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatJson::deserialize(d)?;
        let field = m.entries.first().map_or(Field::Rationals, Scalar::field);
        // plain integers inside a prime-field matrix are reduced into it
        let entries = m
            .entries
            .into_iter()
            .map(|x| match (&x, field) {
                (Scalar::Q(r), Field::Prime(_)) => Scalar::from_rational(r, field),
                _ => Ok(x),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Mat::new(m.rows, m.cols, field, entries).map_err(serde::de::Error::custom)
    }
}
