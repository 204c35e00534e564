//! Gluing blocks with disjoint `B1`-spectra into one datum, and the tensor product of two
//! USp(1) data into an SO(4) datum.

use serde::{Deserialize, Serialize};

use crate::adhm::{eigenvalue_divisor, is_costable, AdhmDatum, Divisor, Flavor, Space};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::forms::{direct_sum, standard_space_in, tensor_space, BilinearSpace, FormKind};
use crate::linalg::{intersect_spans, rank, solve_sylvester, Mat};

/// Blocks sharing flavor and framing, with pairwise disjoint `B1`-spectra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockList {
    blocks: Vec<AdhmDatum>,
    spectra: Vec<Divisor>,
}

impl BlockList {
    pub fn new(blocks: Vec<AdhmDatum>) -> Result<BlockList> {
        let first = blocks.first().ok_or_else(|| Error::BadShape("empty block list".into()))?;
        if blocks.iter().any(|b| b.flavor != first.flavor || b.w != first.w) {
            return Err(Error::FlavorMismatch);
        }
        for b in &blocks {
            b.validate()?;
        }
        let spectra = blocks.iter().map(|b| eigenvalue_divisor(&b.b1)).collect::<Result<Vec<_>>>()?;
        for (a, sa) in spectra.iter().enumerate() {
            if spectra[a + 1..].iter().any(|sb| !sa.disjoint_from(sb)) {
                return Err(Error::SpectraOverlap);
            }
        }
        Ok(BlockList { blocks, spectra })
    }

    pub fn blocks(&self) -> &[AdhmDatum] {
        &self.blocks
    }

    pub fn spectra(&self) -> &[Divisor] {
        &self.spectra
    }

    /// Same blocks ordered by their spectra.
    pub fn canonicalize(&self) -> BlockList {
        let mut idx: Vec<usize> = (0..self.blocks.len()).collect();
        idx.sort_by(|&a, &b| {
            let (sa, sb) = (self.spectra[a].support(), self.spectra[b].support());
            sa.iter()
                .zip(&sb)
                .map(|(x, y)| x.canonical_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(sa.len().cmp(&sb.len()))
        });
        BlockList {
            blocks: idx.iter().map(|&i| self.blocks[i].clone()).collect(),
            spectra: idx.iter().map(|&i| self.spectra[i].clone()).collect(),
        }
    }

    /// Act by `h_l` on block `l`.
    pub fn act(&self, hs: &[Mat]) -> Result<BlockList> {
        if hs.len() != self.blocks.len() {
            return Err(Error::BadShape("one group element per block".into()));
        }
        let blocks = self.blocks.iter().zip(hs).map(|(b, h)| b.act(h)).collect::<Result<Vec<_>>>()?;
        BlockList::new(blocks)
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for b in &self.blocks {
            off.push(off.last().unwrap() + b.k());
        }
        off
    }
}

/// The glued datum. Off-diagonal `B2` blocks solve `B_{m,1} X - X B_{l,1} + i_m j_l = 0`.
pub fn factorize(bl: &BlockList) -> Result<AdhmDatum> {
    factorize_with(bl, Execution::Sequential)
}

pub fn factorize_with(bl: &BlockList, exec: Execution) -> Result<AdhmDatum> {
    let blocks = &bl.blocks;
    let first = &blocks[0];
    let field = first.field();
    let e = blocks.len();
    let off = bl.offsets();
    let k = off[e];
    let pairs: Vec<(usize, usize)> = (0..e).flat_map(|m| (0..e).filter(move |&l| l != m).map(move |l| (m, l))).collect();
    let solved = exec::map(exec, &pairs, |&(m, l)| {
        let rhs = -&(&blocks[m].i * &blocks[l].j);
        solve_sylvester(&blocks[m].b1, &blocks[l].b1, &rhs)
    });
    let mut b2 = Mat::zeros(field, k, k);
    for (l, b) in blocks.iter().enumerate() {
        b2.set_block(off[l], off[l], &b.b2);
    }
    for (&(m, l), x) in pairs.iter().zip(solved) {
        b2.set_block(off[m], off[l], &x?);
    }
    let b1 = Mat::block_diag(field, &blocks.iter().map(|b| b.b1.clone()).collect::<Vec<_>>());
    let i = Mat::vstack(field, &blocks.iter().map(|b| b.i.clone()).collect::<Vec<_>>())?;
    let j = Mat::hstack(field, &blocks.iter().map(|b| b.j.clone()).collect::<Vec<_>>())?;
    let v = match first.flavor {
        Flavor::Ordinary => Space::Plain(k),
        _ => {
            let vs: Vec<BilinearSpace> = blocks.iter().map(|b| b.v_form().unwrap().clone()).collect();
            Space::Form(direct_sum(&vs)?)
        }
    };
    let out = AdhmDatum { flavor: first.flavor, v, w: first.w.clone(), b1, b2, i, j };
    if let Some(vf) = out.v_form() {
        if !vf.is_self_adjoint(&out.b2) {
            return Err(Error::Postcondition("glued B2 is not self-adjoint".into()));
        }
    }
    let mu = &out.b1.commutator(&out.b2) + &(&out.i * &out.j);
    for (m, l) in pairs {
        if !mu.block(off[m], off[l], blocks[m].k(), blocks[l].k()).is_zero() {
            return Err(Error::Postcondition(format!("moment block ({m},{l}) does not vanish")));
        }
    }
    out.validate()?;
    Ok(out)
}

pub fn factorize_preserves_costability(bl: &BlockList) -> Result<bool> {
    Ok(is_costable(&factorize(bl)?))
}

/// Charge-zero Sp datum on a symplectic framing `w`.
pub fn empty_sp_datum(w: &BilinearSpace) -> Result<AdhmDatum> {
    let field = w.field();
    let v = standard_space_in(field, FormKind::Orthogonal, 0)?;
    AdhmDatum::with_forms(Flavor::SpData, v, w.clone(), Mat::zeros(field, 0, 0), Mat::zeros(field, 0, 0), Mat::zeros(field, 0, w.dim()))
}

fn check_usp1(d: &AdhmDatum) -> Result<&BilinearSpace> {
    match (d.flavor, d.w_form()) {
        (Flavor::SpData, Some(w)) if w.dim() == 2 => Ok(w),
        _ => Err(Error::BadShape("tensor factors must be Sp data framed by a symplectic plane".into())),
    }
}

/// The two SO blocks `(B_1 (x) Id, i_1 (x) Id)` on `V1 (x) W2` and `(Id (x) B_2, Id (x) i_2)`
/// on `W1 (x) V2`, both framed by `W1 (x) W2`. Empty blocks are dropped.
pub fn tensor_blocks(d1: &AdhmDatum, d2: &AdhmDatum) -> Result<Vec<AdhmDatum>> {
    let w1 = check_usp1(d1)?;
    let w2 = check_usp1(d2)?;
    let field = d1.field();
    let w = tensor_space(w1, w2);
    let id2 = Mat::identity(field, 2);
    let mut out = Vec::new();
    if d1.k() > 0 {
        let v = tensor_space(d1.v_form().unwrap(), w2);
        out.push(AdhmDatum::with_forms(Flavor::SoData, v, w.clone(), d1.b1.kron(&id2), d1.b2.kron(&id2), d1.i.kron(&id2))?);
    }
    if d2.k() > 0 {
        let v = tensor_space(w1, d2.v_form().unwrap());
        out.push(AdhmDatum::with_forms(Flavor::SoData, v, w, id2.kron(&d2.b1), id2.kron(&d2.b2), id2.kron(&d2.i))?);
    }
    Ok(out)
}

/// SO datum on `V1 (x) W2 + W1 (x) V2` framed by `W1 (x) W2`.
pub fn tensor_product(d1: &AdhmDatum, d2: &AdhmDatum) -> Result<AdhmDatum> {
    let blocks = tensor_blocks(d1, d2)?;
    if blocks.is_empty() {
        return Err(Error::BadShape("both tensor factors have charge zero".into()));
    }
    factorize(&BlockList::new(blocks)?)
}

/// Compare `tensor(factorize(A), factorize(B))` with the factorization of the blockwise tensor
/// products. The two sides live on the same space up to the basis reordering
/// `W1 (x) (sum C_m) -> sum (W1 (x) C_m)`, which is applied before comparing.
pub fn tensor_commutes_with_factorization(a: &BlockList, b: &BlockList) -> Result<bool> {
    let fa = factorize(a)?;
    let fb = factorize(b)?;
    let lhs = tensor_product(&fa, &fb)?;
    let w1 = check_usp1(&a.blocks[0])?.clone();
    let w2 = check_usp1(&b.blocks[0])?.clone();
    let mut parts = Vec::new();
    for x in &a.blocks {
        parts.extend(tensor_blocks(x, &empty_sp_datum(&w2)?)?);
    }
    for y in &b.blocks {
        parts.extend(tensor_blocks(&empty_sp_datum(&w1)?, y)?);
    }
    let rhs = factorize(&BlockList::new(parts)?)?;
    // LHS index 2 n1 + c n2 + (off_m + r)  ->  RHS index 2 n1 + 2 off_m + c k_m + r
    let n1 = fa.k();
    let n2 = fb.k();
    let mut perm: Vec<usize> = (0..2 * n1 + 2 * n2).collect();
    let mut off = 0;
    for y in &b.blocks {
        let km = y.k();
        for c in 0..2 {
            for r in 0..km {
                perm[2 * n1 + c * n2 + off + r] = 2 * n1 + 2 * off + c * km + r;
            }
        }
        off += km;
    }
    let p = Mat::permutation(lhs.field(), &perm);
    let pt = p.transpose();
    let conj = |m: &Mat| &(&p * m) * &pt;
    let same_v = match (lhs.v_form(), rhs.v_form()) {
        (Some(l), Some(r)) => conj(l.gram()) == *r.gram(),
        _ => false,
    };
    Ok(same_v
        && rhs.w == lhs.w
        && conj(&lhs.b1) == rhs.b1
        && conj(&lhs.b2) == rhs.b2
        && &p * &lhs.i == rhs.i
        && &lhs.j * &pt == rhs.j)
}

/// Component label of a rank-two charge-two SO datum framed by a four-dimensional W:
/// the family of the Lagrangian `Im i*` relative to `reference` (0 when the intersection
/// dimension is even). `None` when `i` does not have rank two.
pub fn lagrangian_family(d: &AdhmDatum, reference: &[Mat]) -> Option<usize> {
    let w = d.w_form()?;
    if d.k() != 2 || w.dim() != 4 || w.kind() != FormKind::Orthogonal || rank(&d.i) != 2 {
        return None;
    }
    let image = crate::linalg::column_space(&d.j);
    let meet = intersect_spans(&image, reference, 4, d.field());
    Some(meet.len() % 2)
}

/// Greedy maximal isotropic span of standard basis vectors; for `W1 (x) W2` this is
/// `e_1 (x) W2`, the image side of the first tensor factor.
pub fn reference_lagrangian(w: &BilinearSpace) -> Vec<Mat> {
    let id = Mat::identity(w.field(), w.dim());
    let mut chosen: Vec<Mat> = Vec::new();
    for a in 0..w.dim() {
        let e = id.col(a);
        if w.pair(&e, &e).is_zero() && chosen.iter().all(|c| w.pair(c, &e).is_zero()) {
            chosen.push(e);
        }
    }
    chosen
}

/// Component index per block of a factorized SO(4) datum, each block of charge two.
pub fn component_indices(bl: &BlockList) -> Vec<Option<usize>> {
    bl.blocks
        .iter()
        .map(|b| b.w_form().and_then(|w| lagrangian_family(b, &reference_lagrangian(w))))
        .collect()
}

/// Verification summary shared by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueReport {
    pub mu_zero: bool,
    pub costable: bool,
}

pub fn glue_report(d: &AdhmDatum) -> Result<GlueReport> {
    Ok(GlueReport { mu_zero: crate::adhm::moment_map(d)?.is_zero(), costable: is_costable(d) })
}

/// Symplectic plane used to frame USp(1) data.
pub fn usp1_framing(field: crate::scalar::Field) -> BilinearSpace {
    standard_space_in(field, FormKind::Symplectic, 2).expect("plane")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adhm::moment_map;
    use crate::forms::standard_space;
    use crate::sample;
    use crate::scalar::Field;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn single_block_is_unchanged() {
        let mut r = sample::rng(1);
        let w = standard_space(FormKind::Orthogonal, 4).unwrap();
        let b = sample::regular_so_block(&mut r, &w, &q().int(1), &q().int(0)).unwrap();
        let out = factorize(&BlockList::new(vec![b.clone()]).unwrap()).unwrap();
        assert_eq!(out, b);
    }

    #[test]
    fn two_blocks_glue_to_zero_moment() {
        let mut r = sample::rng(2);
        let w = standard_space(FormKind::Orthogonal, 5).unwrap();
        let a = sample::regular_so_block(&mut r, &w, &q().int(1), &q().int(3)).unwrap();
        let b = sample::regular_so_block(&mut r, &w, &q().int(-2), &q().int(1)).unwrap();
        let out = factorize(&BlockList::new(vec![a, b]).unwrap()).unwrap();
        assert_eq!(out.k(), 4);
        assert!(moment_map(&out).unwrap().is_zero());
        assert!(is_costable(&out));
    }

    #[test]
    fn shared_eigenvalue_is_rejected() {
        let mut r = sample::rng(3);
        let w = standard_space(FormKind::Orthogonal, 4).unwrap();
        let a = sample::regular_so_block(&mut r, &w, &q().int(0), &q().int(1)).unwrap();
        let b = sample::regular_so_block(&mut r, &w, &q().int(0), &q().int(2)).unwrap();
        assert_eq!(BlockList::new(vec![a, b]).unwrap_err(), Error::SpectraOverlap);
    }

    #[test]
    fn tensor_single_factor_doubles() {
        let mut r = sample::rng(4);
        let w = usp1_framing(q());
        let x = sample::sp_line_block(&mut r, &w, &q().int(2), &q().int(5)).unwrap();
        let t = tensor_product(&x, &empty_sp_datum(&w).unwrap()).unwrap();
        assert_eq!(t.k(), 2);
        assert_eq!(t.b1, Mat::scalar(q(), 2, &q().int(2)));
        assert_eq!(t.b2, Mat::scalar(q(), 2, &q().int(5)));
        assert_eq!(t.i, x.i.kron(&Mat::identity(q(), 2)));
        assert!(moment_map(&t).unwrap().is_zero());
        assert_eq!(lagrangian_family(&t, &reference_lagrangian(t.w_form().unwrap())), Some(0));
        let s = tensor_product(&empty_sp_datum(&w).unwrap(), &x).unwrap();
        assert_eq!(lagrangian_family(&s, &reference_lagrangian(s.w_form().unwrap())), Some(1));
    }

    #[test]
    fn tensor_of_two_lines() {
        let mut r = sample::rng(5);
        let w = usp1_framing(q());
        let x = sample::sp_line_block(&mut r, &w, &q().int(1), &q().int(0)).unwrap();
        let y = sample::sp_line_block(&mut r, &w, &q().int(2), &q().int(1)).unwrap();
        let t = tensor_product(&x, &y).unwrap();
        assert_eq!(t.k(), 4);
        assert!(moment_map(&t).unwrap().is_zero());
        t.validate().unwrap();
    }

    #[test]
    fn tensor_commutes_for_lines() {
        let mut r = sample::rng(6);
        let w = usp1_framing(q());
        let xs: Vec<AdhmDatum> = [1, 2]
            .iter()
            .map(|&a| sample::sp_line_block(&mut r, &w, &q().int(a), &q().int(a + 4)).unwrap())
            .collect();
        let ys: Vec<AdhmDatum> = [-1, -3, 5]
            .iter()
            .map(|&a| sample::sp_line_block(&mut r, &w, &q().int(a), &q().int(1 - a)).unwrap())
            .collect();
        let a = BlockList::new(xs).unwrap();
        let b = BlockList::new(ys).unwrap();
        assert!(tensor_commutes_with_factorization(&a, &b).unwrap());
    }
}
