//! Seeded random inputs: matrices, group elements and regular low-rank blocks.

use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adhm::{AdhmDatum, Flavor};
use crate::error::{Error, Result};
use crate::forms::{right_adjoint, standard_space, BilinearSpace, FormKind};
use crate::linalg::{rank, Mat};
use crate::scalar::{Field, Scalar};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(rng: &mut Rng, lo: i64, hi: i64) -> i64 {
    rng.gen_range(lo..=hi)
}

pub fn mat(rng: &mut Rng, field: Field, rows: usize, cols: usize, bound: i64) -> Mat {
    Mat::from_fn(field, rows, cols, |_, _| field.int(rng.gen_range(-bound..=bound)))
}

pub fn vector(rng: &mut Rng, field: Field, n: usize, bound: i64) -> Mat {
    mat(rng, field, n, 1, bound)
}

/// Random integer combination of the given matrices.
pub fn in_span(rng: &mut Rng, basis: &[Mat], bound: i64) -> Option<Mat> {
    let mut it = basis.iter();
    let first = it.next()?;
    let f = first.field();
    let mut acc = first.scale(&f.int(rng.gen_range(-bound..=bound)));
    for b in it {
        acc = &acc + &b.scale(&f.int(rng.gen_range(-bound..=bound)));
    }
    Some(acc)
}

pub fn invertible(rng: &mut Rng, field: Field, k: usize, bound: i64) -> Mat {
    loop {
        let m = mat(rng, field, k, k, bound);
        if rank(&m) == k {
            return m;
        }
    }
}

/// Product of `steps` random transvections (symplectic) or reflections (orthogonal).
/// An even number of reflections stays in the special orthogonal group.
pub fn isometry(rng: &mut Rng, space: &BilinearSpace, steps: usize) -> Mat {
    let field = space.field();
    let k = space.dim();
    let mut g = Mat::identity(field, k);
    if k == 0 {
        return g;
    }
    let mut done = 0;
    while done < steps {
        let v = vector(rng, field, k, 2);
        let vg = &v.transpose() * space.gram();
        let step = match space.kind() {
            FormKind::Symplectic => {
                let t = field.int(rng.gen_range(-2..=2));
                &Mat::identity(field, k) + &(&v * &vg).scale(&t)
            }
            FormKind::Orthogonal => {
                let q = space.pair(&v, &v);
                if q.is_zero() {
                    continue;
                }
                let c = field.int(2).checked_div(&q).unwrap();
                &Mat::identity(field, k) - &(&v * &vg).scale(&c)
            }
        };
        g = &step * &g;
        done += 1;
    }
    debug_assert!(space.is_isometry(&g));
    g
}

/// `count` distinct integers in `[-bound, bound]`.
pub fn distinct(rng: &mut Rng, count: usize, bound: i64) -> Vec<i64> {
    assert!((2 * bound + 1) as usize >= count, "range too small");
    let mut out: Vec<i64> = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(-bound..=bound);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Indices of two frame vectors spanning an isotropic plane (first vectors of two pairs).
fn isotropic_pair(w: &BilinearSpace) -> Result<(usize, usize)> {
    let weights = w.frame_weights().ok_or_else(|| Error::InvalidGram("no hyperbolic frame".into()))?;
    let mut plus = Vec::new();
    for t in 0..weights.first().map_or(0, Vec::len) {
        if let Some(a) = (0..w.dim()).find(|&a| weights[a][t] == 1) {
            plus.push(a);
        }
    }
    if plus.len() < 2 {
        return Err(Error::InvalidGram("need two hyperbolic pairs".into()));
    }
    Ok((plus[0], plus[1]))
}

/// A regular SO datum of charge `k = 2` with `mu = 0`: `B1 = a Id`, `B2 = b Id` and `i = J*`
/// where `J` embeds V isometrically onto a random isotropic plane of W.
pub fn regular_so_block(rng: &mut Rng, w: &BilinearSpace, a: &Scalar, b: &Scalar) -> Result<AdhmDatum> {
    let field = w.field();
    let v = standard_space(FormKind::Symplectic, 2)?.reduce(field)?;
    let (e0, e1) = isotropic_pair(w)?;
    let h = isometry(rng, w, w.dim() + 2);
    let mix = invertible(rng, field, 2, 2);
    let jmap = &Mat::hstack(field, &[h.col(e0), h.col(e1)])? * &mix;
    let i = right_adjoint(&jmap, &v, w)?;
    AdhmDatum::with_forms(Flavor::SoData, v, w.clone(), Mat::scalar(field, 2, a), Mat::scalar(field, 2, b), i)
}

/// An Sp datum of charge `k = 1` on a one-dimensional orthogonal V with random `i`.
pub fn sp_line_block(rng: &mut Rng, w: &BilinearSpace, a: &Scalar, b: &Scalar) -> Result<AdhmDatum> {
    let field = w.field();
    let v = standard_space(FormKind::Orthogonal, 1)?.reduce(field)?;
    let i = loop {
        let m = mat(rng, field, 1, w.dim(), 3);
        if !m.is_zero() {
            break m;
        }
    };
    AdhmDatum::with_forms(Flavor::SpData, v, w.clone(), Mat::scalar(field, 1, a), Mat::scalar(field, 1, b), i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adhm::{is_regular, moment_map};

    #[test]
    fn isometries_preserve_forms() {
        let mut r = rng(7);
        for (kind, dim) in [(FormKind::Symplectic, 4), (FormKind::Orthogonal, 5), (FormKind::Orthogonal, 4)] {
            let s = standard_space(kind, dim).unwrap();
            let g = isometry(&mut r, &s, 6);
            assert!(s.is_isometry(&g));
        }
    }

    #[test]
    fn regular_blocks_have_zero_moment() {
        let mut r = rng(3);
        let q = Field::Rationals;
        for n in [4usize, 5, 6] {
            let w = standard_space(FormKind::Orthogonal, n).unwrap();
            let d = regular_so_block(&mut r, &w, &q.int(1), &q.int(-2)).unwrap();
            assert!(moment_map(&d).unwrap().is_zero());
            assert!(is_regular(&d));
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = mat(&mut rng(11), Field::Rationals, 3, 3, 5);
        let b = mat(&mut rng(11), Field::Rationals, 3, 3, 5);
        assert_eq!(a, b);
    }
}
