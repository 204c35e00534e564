//! Symplectic and orthogonal spaces, adjoints, and the self-adjoint / anti-self-adjoint splitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, nullspace, rank, Mat};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    Symplectic,
    Orthogonal,
}

impl FormKind {
    pub fn other(self) -> FormKind {
        match self {
            FormKind::Symplectic => FormKind::Orthogonal,
            FormKind::Orthogonal => FormKind::Symplectic,
        }
    }

    /// `+1` for symmetric, `-1` for antisymmetric forms.
    pub fn sign(self) -> i64 {
        match self {
            FormKind::Symplectic => -1,
            FormKind::Orthogonal => 1,
        }
    }
}

/// A vector space with a nondegenerate symmetric or antisymmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSpace {
    kind: FormKind,
    gram: Mat,
    gram_inv: Mat,
}

impl BilinearSpace {
    pub fn new(kind: FormKind, gram: Mat) -> Result<BilinearSpace> {
        if !gram.is_square() {
            return Err(Error::InvalidGram("not square".into()));
        }
        let want = gram.scale(&gram.field().int(kind.sign()));
        if gram.transpose() != want {
            return Err(Error::InvalidGram(match kind {
                FormKind::Symplectic => "not antisymmetric".into(),
                FormKind::Orthogonal => "not symmetric".into(),
            }));
        }
        if kind == FormKind::Symplectic && gram.rows() % 2 == 1 {
            return Err(Error::OddSymplectic(gram.rows()));
        }
        let gram_inv = inverse(&gram).map_err(|_| Error::InvalidGram("degenerate".into()))?;
        Ok(BilinearSpace { kind, gram, gram_inv })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Mat {
        &self.gram_inv
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    /// `(u, v)` for column vectors.
    pub fn pair(&self, u: &Mat, v: &Mat) -> Scalar {
        (&(&u.transpose() * &self.gram) * v).get(0, 0).clone()
    }

    /// Adjoint of an endomorphism with respect to this form.
    pub fn adjoint(&self, a: &Mat) -> Mat {
        &(&self.gram_inv * &a.transpose()) * &self.gram
    }

    pub fn is_self_adjoint(&self, a: &Mat) -> bool {
        a.rows() == self.dim() && a.is_square() && self.adjoint(a) == *a
    }

    pub fn is_anti_self_adjoint(&self, a: &Mat) -> bool {
        a.rows() == self.dim() && a.is_square() && self.adjoint(a) == -a
    }

    /// Whether `g` preserves the form.
    pub fn is_isometry(&self, g: &Mat) -> bool {
        g.rows() == self.dim() && g.is_square() && &(&g.transpose() * &self.gram) * g == self.gram
    }

    pub fn reduce(&self, field: Field) -> Result<BilinearSpace> {
        BilinearSpace::new(self.kind, self.gram.reduce(field)?)
    }

    /// Basis of p(V) (self-adjoint endomorphisms).
    pub fn p_basis(&self) -> Vec<Mat> {
        self.eigen_basis(1)
    }

    /// Basis of g(V) (anti-self-adjoint endomorphisms), the Lie algebra of the isometry group.
    pub fn g_basis(&self) -> Vec<Mat> {
        self.eigen_basis(-1)
    }

    // basis of {a : a* = sign a}
    fn eigen_basis(&self, sign: i64) -> Vec<Mat> {
        let k = self.dim();
        let field = self.field();
        let s = field.int(sign);
        // (a*)_{ij} = sum_{s,t} ginv_{is} a_{ts} g_{tj}
        let mut m = Mat::zeros(field, k * k, k * k);
        for i in 0..k {
            for j in 0..k {
                let row = i * k + j;
                for sx in 0..k {
                    let gi = self.gram_inv.get(i, sx);
                    if gi.is_zero() {
                        continue;
                    }
                    for t in 0..k {
                        let gt = self.gram.get(t, j);
                        if gt.is_zero() {
                            continue;
                        }
                        let col = t * k + sx;
                        let v = m.get(row, col).add(&gi.mul(gt));
                        m.set(row, col, v);
                    }
                }
                let v = m.get(row, row).sub(&s);
                m.set(row, row, v);
            }
        }
        nullspace(&m).into_iter().map(|v| v.reshape(k, k).unwrap()).collect()
    }

    /// Torus weights of the basis vectors when the Gram matrix pairs basis vectors
    /// one-to-one (a Witt-type frame). Pair `t` gets `+e_t` / `-e_t`; self-paired vectors get 0.
    pub fn frame_weights(&self) -> Option<Vec<Vec<i32>>> {
        let k = self.dim();
        let mut partner = vec![None; k];
        for i in 0..k {
            let nz: Vec<usize> = (0..k).filter(|&j| !self.gram.get(i, j).is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            partner[i] = Some(nz[0]);
        }
        let pairs: Vec<(usize, usize)> = (0..k)
            .filter_map(|i| partner[i].filter(|&j| j > i).map(|j| (i, j)))
            .collect();
        let mut w = vec![vec![0; pairs.len()]; k];
        for (t, &(a, b)) in pairs.iter().enumerate() {
            w[a][t] = 1;
            w[b][t] = -1;
        }
        Some(w)
    }
}

/// Canonical spaces over the rationals. Dimension 4 symplectic and dimension 5 orthogonal are
/// the fixture Grams; otherwise hyperbolic pairs, with a trailing unit vector in odd orthogonal dims.
pub fn standard_space(kind: FormKind, dim: usize) -> Result<BilinearSpace> {
    standard_space_in(Field::Rationals, kind, dim)
}

pub fn standard_space_in(field: Field, kind: FormKind, dim: usize) -> Result<BilinearSpace> {
    let mut g = Mat::zeros(field, dim, dim);
    match kind {
        FormKind::Symplectic => {
            if dim % 2 == 1 {
                return Err(Error::OddSymplectic(dim));
            }
            for t in 0..dim / 2 {
                g.set(2 * t, 2 * t + 1, field.one());
                g.set(2 * t + 1, 2 * t, field.int(-1));
            }
        }
        FormKind::Orthogonal if dim == 5 => {
            g.set(0, 1, field.one());
            g.set(1, 0, field.one());
            g.set(2, 2, field.one());
            g.set(3, 4, field.one());
            g.set(4, 3, field.one());
        }
        FormKind::Orthogonal => {
            for t in 0..dim / 2 {
                g.set(2 * t, 2 * t + 1, field.one());
                g.set(2 * t + 1, 2 * t, field.one());
            }
            if dim % 2 == 1 {
                g.set(dim - 1, dim - 1, field.one());
            }
        }
    }
    BilinearSpace::new(kind, g)
}

/// Adjoint `f*: dst -> src` of `f: src -> dst`, i.e. `(v, f* w)_src = (f v, w)_dst`.
pub fn right_adjoint(f: &Mat, src: &BilinearSpace, dst: &BilinearSpace) -> Result<Mat> {
    if f.rows() != dst.dim() || f.cols() != src.dim() {
        return Err(Error::DimMismatch(format!(
            "map is {}x{}, spaces have dims {} -> {}",
            f.rows(),
            f.cols(),
            src.dim(),
            dst.dim()
        )));
    }
    Ok(&(src.gram_inv() * &f.transpose()) * dst.gram())
}

/// Decomposition `a = p + g` with `p` self-adjoint and `g` anti-self-adjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEndo {
    pub p_part: Mat,
    pub g_part: Mat,
}

pub fn split_endo(a: &Mat, space: &BilinearSpace) -> Result<SplitEndo> {
    if !a.is_square() || a.rows() != space.dim() {
        return Err(Error::DimMismatch(format!(
            "endomorphism is {}x{}, space has dim {}",
            a.rows(),
            a.cols(),
            space.dim()
        )));
    }
    let half = a.field().ratio(1, 2)?;
    let adj = space.adjoint(a);
    Ok(SplitEndo { p_part: (a + &adj).scale(&half), g_part: (a - &adj).scale(&half) })
}

/// Gram matrix of the trace pairing `tr(x y)` on a list of endomorphisms.
pub fn trace_pairing(basis: &[Mat]) -> Mat {
    let field = basis.first().map_or(Field::Rationals, Mat::field);
    let n = basis.len();
    Mat::from_fn(field, n, n, |i, j| (&basis[i] * &basis[j]).trace())
}

/// `T (x) C[z]/z^n` with the residue form; basis `e_i z^a` sits at index `2a + i`.
pub fn residue_space(n: usize) -> BilinearSpace {
    residue_space_in(Field::Rationals, n)
}

pub fn residue_space_in(field: Field, n: usize) -> BilinearSpace {
    assert!(n >= 1, "truncation order must be positive");
    let plane = [[0i64, 1], [-1, 0]];
    let d = 2 * n;
    let mut g = Mat::zeros(field, d, d);
    for a in 0..n {
        let b = n - 1 - a;
        for i in 0..2 {
            for j in 0..2 {
                g.set(2 * a + i, 2 * b + j, field.int(plane[i][j]));
            }
        }
    }
    BilinearSpace::new(FormKind::Symplectic, g).expect("residue form is nondegenerate")
}

/// Multiplication by `z` on `T (x) C[z]/z^n` in the residue basis.
pub fn z_multiplication(field: Field, n: usize) -> Mat {
    let mut z = Mat::zeros(field, 2 * n, 2 * n);
    for a in 0..n.saturating_sub(1) {
        for i in 0..2 {
            z.set(2 * (a + 1) + i, 2 * a + i, field.one());
        }
    }
    z
}

/// Tensor product of two spaces (Kronecker Gram).
pub fn tensor_space(a: &BilinearSpace, b: &BilinearSpace) -> BilinearSpace {
    let kind = if a.kind() == b.kind() { FormKind::Orthogonal } else { FormKind::Symplectic };
    BilinearSpace::new(kind, a.gram().kron(b.gram())).expect("tensor of nondegenerate forms")
}

/// Orthogonal direct sum of spaces of one kind.
pub fn direct_sum(spaces: &[BilinearSpace]) -> Result<BilinearSpace> {
    let kind = spaces.first().map(BilinearSpace::kind).ok_or_else(|| Error::DimMismatch("empty sum".into()))?;
    if spaces.iter().any(|s| s.kind() != kind) {
        return Err(Error::InvalidGram("direct sum of different kinds".into()));
    }
    let field = spaces[0].field();
    let grams: Vec<Mat> = spaces.iter().map(|s| s.gram().clone()).collect();
    BilinearSpace::new(kind, Mat::block_diag(field, &grams))
}

/// Whether the trace pairing on the span of `basis` is nondegenerate.
pub fn trace_pairing_nondegenerate(basis: &[Mat]) -> bool {
    rank(&trace_pairing(basis)) == basis.len()
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    dim: usize,
    kind: FormKind,
    gram: Mat,
}

impl Serialize for BilinearSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpaceJson { dim: self.dim(), kind: self.kind, gram: self.gram.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BilinearSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SpaceJson::deserialize(d)?;
        if j.gram.rows() != j.dim {
            return Err(serde::de::Error::custom(format!("dim {} but gram has {} rows", j.dim, j.gram.rows())));
        }
        BilinearSpace::new(j.kind, j.gram).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn fixture_grams() {
        let v = standard_space(FormKind::Symplectic, 4).unwrap();
        let gv = Mat::from_i64(q(), &[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        assert_eq!(v.gram(), &gv);
        let w = standard_space(FormKind::Orthogonal, 5).unwrap();
        let gw = Mat::from_i64(
            q(),
            &[&[0, 1, 0, 0, 0], &[1, 0, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0]],
        );
        assert_eq!(w.gram(), &gw);
        assert_eq!(standard_space(FormKind::Symplectic, 3), Err(Error::OddSymplectic(3)));
    }

    #[test]
    fn lie_algebra_dimensions() {
        for k in [2usize, 4, 6] {
            let v = standard_space(FormKind::Symplectic, k).unwrap();
            assert_eq!(v.g_basis().len(), k * (k + 1) / 2);
            assert_eq!(v.p_basis().len(), k * (k - 1) / 2);
        }
        for k in 1usize..=5 {
            let v = standard_space(FormKind::Orthogonal, k).unwrap();
            assert_eq!(v.g_basis().len(), k * (k - 1) / 2);
            assert_eq!(v.p_basis().len(), k * (k + 1) / 2);
        }
    }

    #[test]
    fn residue_space_small() {
        assert_eq!(residue_space(1), standard_space(FormKind::Symplectic, 2).unwrap());
        let r = residue_space(2);
        // (e1 z^a, e2 z^b) = 1 iff a + b = 1
        for a in 0..2 {
            for b in 0..2 {
                let want = if a + b == 1 { 1 } else { 0 };
                assert_eq!(r.gram().get(2 * a, 2 * b + 1), &q().int(want));
            }
        }
    }

    #[test]
    fn z_is_self_adjoint_on_residue_space() {
        for n in 1..=4 {
            let r = residue_space(n);
            assert!(r.is_self_adjoint(&z_multiplication(q(), n)));
        }
    }

    #[test]
    fn split_is_idempotent() {
        let v = standard_space(FormKind::Symplectic, 4).unwrap();
        let a = Mat::from_fn(q(), 4, 4, |i, j| q().int((i * 3 + j * j) as i64 - 4));
        let s = split_endo(&a, &v).unwrap();
        assert_eq!(&s.p_part + &s.g_part, a);
        assert!(v.is_self_adjoint(&s.p_part));
        assert!(v.is_anti_self_adjoint(&s.g_part));
        let again = split_endo(&s.p_part, &v).unwrap();
        assert_eq!(again.p_part, s.p_part);
        assert!(again.g_part.is_zero());
    }

    #[test]
    fn frame_weights_detect_pairs() {
        let w = standard_space(FormKind::Orthogonal, 5).unwrap();
        let fw = w.frame_weights().unwrap();
        assert_eq!(fw, vec![vec![1, 0], vec![-1, 0], vec![0, 0], vec![0, 1], vec![0, -1]]);
    }
}
