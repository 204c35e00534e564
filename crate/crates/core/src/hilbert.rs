//! Truncated Hilbert series of the coordinate ring of `mu^-1(0)` and of its invariants,
//! by linear algebra on monomial bases degree by degree.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::adhm::{infinitesimal_action, tangent_basis, AdhmDatum, Flavor, GroupKind, GroupSpec, Space};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::forms::{split_endo, standard_space_in, BilinearSpace, FormKind};
use crate::linalg::{determinant, echelon, rank, solve, Mat};
use crate::scalar::{Field, Scalar};

/// Exponent vector.
pub type Monomial = Vec<u8>;

/// Sparse polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    vars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: Field, vars: usize) -> Polynomial {
        Polynomial { field, vars, terms: BTreeMap::new() }
    }

    pub fn monomial(field: Field, m: Monomial, c: Scalar) -> Polynomial {
        let vars = m.len();
        let mut p = Polynomial::zero(field, vars);
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(s));
        }
        out
    }

    pub fn mul_monomial(&self, m: &[u8]) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.vars);
        for (t, c) in &self.terms {
            out.add_term(t.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.vars);
        for (m, c) in &o.terms {
            for (t, d) in &self.terms {
                out.add_term(t.iter().zip(m).map(|(a, b)| a + b).collect(), d.mul(c));
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = t.mul(&x.pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// `f(x) -> f(A x)`.
    pub fn substitute(&self, a: &Mat) -> Polynomial {
        let n = self.vars;
        let linear: Vec<Polynomial> = (0..n)
            .map(|u| {
                let mut p = Polynomial::zero(self.field, n);
                for v in 0..n {
                    let mut m = vec![0u8; n];
                    m[v] = 1;
                    p.add_term(m, a.get(u, v).clone());
                }
                p
            })
            .collect();
        let mut out = Polynomial::zero(self.field, n);
        for (m, c) in &self.terms {
            let mut t = Polynomial::monomial(self.field, vec![0; n], c.clone());
            for (u, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&linear[u]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `D f = sum_u (L x)_u df/dx_u`.
    pub fn derive(&self, l: &Mat) -> Polynomial {
        let n = self.vars;
        let mut out = Polynomial::zero(self.field, n);
        for (m, c) in &self.terms {
            for u in 0..n {
                if m[u] == 0 {
                    continue;
                }
                let cu = c.mul(&self.field.int(m[u] as i64));
                for v in 0..n {
                    let luv = l.get(u, v);
                    if luv.is_zero() {
                        continue;
                    }
                    let mut t = m.clone();
                    t[u] -= 1;
                    t[v] += 1;
                    out.add_term(t, cu.mul(luv));
                }
            }
        }
        out
    }
}

/// Coordinate ring data: quadratic relations, derivations spanning the Lie algebra action, an
/// optional extra group element for a disconnected group, and weights under a torus commuting
/// with everything (used to split degree pieces into independent blocks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSetup {
    pub field: Field,
    pub ambient_dim: usize,
    pub relations: Vec<Polynomial>,
    pub algebra_action: Vec<Mat>,
    pub group: GroupKind,
    pub extra_component: Option<Mat>,
    pub weights: Vec<Vec<i32>>,
}

/// Coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertTruncation {
    pub coeffs: Vec<u64>,
}

impl HilbertTruncation {
    /// First degree where the two truncations differ.
    pub fn first_difference(&self, o: &HilbertTruncation) -> Option<usize> {
        self.coeffs.iter().zip(&o.coeffs).position(|(a, b)| a != b)
    }
}

/// Largest monomial basis handled in one degree.
pub const WORK_LIMIT: usize = 200_000;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for t in 0..k {
        r = r * (n - t) as u128 / (t + 1) as u128;
    }
    r as usize
}

fn vec_of(d: &AdhmDatum) -> Mat {
    let mut e = Vec::new();
    for m in [&d.b1, &d.b2, &d.i, &d.j] {
        e.extend(m.entries().iter().cloned());
    }
    Mat::column(d.field(), e)
}

/// Orientation-reversing isometry of an orthogonal space: swap the first hyperbolic pair,
/// or negate a self-paired frame vector.
pub fn orientation_reversing(space: &BilinearSpace) -> Option<Mat> {
    if space.kind() != FormKind::Orthogonal || space.dim() == 0 {
        return None;
    }
    let field = space.field();
    let k = space.dim();
    let g = space.gram();
    let mut m = Mat::identity(field, k);
    let self_paired = (0..k).find(|&a| (0..k).all(|b| b == a || g.get(a, b).is_zero()));
    if let Some(a) = self_paired {
        m.set(a, a, field.int(-1));
    } else {
        let (a, b) = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).find(|&(a, b)| !g.get(a, b).is_zero())?;
        let p: Vec<usize> = (0..k).map(|x| if x == a { b } else if x == b { a } else { x }).collect();
        m = Mat::permutation(field, &p);
    }
    let det = determinant(&m).ok()?;
    (space.is_isometry(&m) && det == field.int(-1)).then_some(m)
}

impl GradedSetup {
    /// Setup for data of the shape of `template` (its matrices are ignored).
    pub fn for_shape(template: &AdhmDatum) -> Result<GradedSetup> {
        let field = template.field();
        let basis = tangent_basis(template);
        let n = basis.len();
        let flat: Vec<Mat> = basis.iter().map(vec_of).collect();
        let len = flat.first().map_or(0, Mat::rows);
        let fmat = Mat::from_columns(field, len, &flat);
        let coords = |v: &Mat| -> Result<Mat> {
            solve(&fmat, v)?.ok_or_else(|| Error::Postcondition("vector outside the data space".into()))
        };
        // quadratic form of mu: Q(X, Y) = [X.b1, Y.b2] + X.i Y.j, then projected
        let project = |m: Mat| match template.v_form() {
            Some(v) => split_endo(&m, v).expect("square").g_part,
            None => m,
        };
        let k = template.k();
        let mut rel: Vec<Polynomial> = vec![Polynomial::zero(field, n); k * k];
        for (u, x) in basis.iter().enumerate() {
            for (v, y) in basis.iter().enumerate() {
                let q = project(&(&(&x.b1 * &y.b2) - &(&y.b2 * &x.b1)) + &(&x.i * &y.j));
                for (e, c) in q.entries().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut m = vec![0u8; n];
                    m[u] += 1;
                    m[v] += 1;
                    rel[e].add_term(m, c.clone());
                }
            }
        }
        let relations = independent(field, n, rel);
        let group = GroupSpec::for_datum(template);
        let mut algebra_action = Vec::new();
        for xi in group.lie_basis() {
            let cols = basis
                .iter()
                .map(|t| {
                    let mut moved = t.clone();
                    let tv = infinitesimal_action(&xi, t);
                    let (kk, nn) = (t.k(), t.n());
                    let mut off = 0;
                    for (slot, (r, c)) in [(kk, kk), (kk, kk), (kk, nn), (nn, kk)].into_iter().enumerate() {
                        let m = Mat::new(r, c, field, tv.entries()[off..off + r * c].to_vec())?;
                        off += r * c;
                        match slot {
                            0 => moved.b1 = m,
                            1 => moved.b2 = m,
                            2 => moved.i = m,
                            _ => moved.j = m,
                        }
                    }
                    coords(&vec_of(&moved))
                })
                .collect::<Result<Vec<_>>>()?;
            algebra_action.push(Mat::from_columns(field, n, &cols));
        }
        let extra_component = match (group.kind, template.v_form()) {
            (GroupKind::O, Some(v)) => match orientation_reversing(v) {
                Some(g) => {
                    let cols = basis.iter().map(|t| coords(&vec_of(&t.act(&g)?))).collect::<Result<Vec<_>>>()?;
                    Some(Mat::from_columns(field, n, &cols))
                }
                None => None,
            },
            _ => None,
        };
        let weights = torus_weights(template, &basis);
        let mut setup = GradedSetup { field, ambient_dim: n, relations, algebra_action, group: group.kind, extra_component, weights };
        if !setup.weights_compatible() {
            setup.weights = vec![Vec::new(); n];
        }
        Ok(setup)
    }

    /// Ordinary data, `GL(k)` acting.
    pub fn ordinary(k: usize, n: usize) -> Result<GradedSetup> {
        let q = Field::Rationals;
        let t = AdhmDatum {
            flavor: Flavor::Ordinary,
            v: Space::Plain(k),
            w: Space::Plain(n),
            b1: Mat::zeros(q, k, k),
            b2: Mat::zeros(q, k, k),
            i: Mat::zeros(q, k, n),
            j: Mat::zeros(q, n, k),
        };
        GradedSetup::for_shape(&t)
    }

    /// Symplectic V of dim `k`, orthogonal W of dim `n`, `Sp(k)` acting.
    pub fn so_data(k: usize, n: usize) -> Result<GradedSetup> {
        GradedSetup::with_forms(Flavor::SoData, k, n)
    }

    /// Orthogonal V of dim `k`, symplectic W of dim `n`, `O(k)` acting.
    pub fn sp_data(k: usize, n: usize) -> Result<GradedSetup> {
        GradedSetup::with_forms(Flavor::SpData, k, n)
    }

    fn with_forms(flavor: Flavor, k: usize, n: usize) -> Result<GradedSetup> {
        let q = Field::Rationals;
        let (vk, wk) = flavor.kinds().expect("form flavor");
        let v = standard_space_in(q, vk, k)?;
        let w = standard_space_in(q, wk, n)?;
        let t = AdhmDatum::with_forms(flavor, v, w, Mat::zeros(q, k, k), Mat::zeros(q, k, k), Mat::zeros(q, k, n))?;
        GradedSetup::for_shape(&t)
    }

    fn weight_of(&self, m: &[u8]) -> Vec<i32> {
        let len = self.weights.first().map_or(0, Vec::len);
        let mut w = vec![0; len];
        for (u, &e) in m.iter().enumerate() {
            for (s, x) in self.weights[u].iter().enumerate() {
                w[s] += *x * e as i32;
            }
        }
        w
    }

    fn homogeneous(&self, p: &Polynomial) -> bool {
        let mut ws = p.terms.keys().map(|m| self.weight_of(m));
        match ws.next() {
            Some(first) => ws.all(|w| w == first),
            None => true,
        }
    }

    fn weights_compatible(&self) -> bool {
        let n = self.ambient_dim;
        let unit = |u: usize| {
            let mut m = vec![0u8; n];
            m[u] = 1;
            Polynomial::monomial(self.field, m, self.field.one())
        };
        let preserved = |u: usize, img: Polynomial| img.is_zero() || (self.homogeneous(&img) && self.weight_of(img.terms.keys().next().unwrap()) == self.weights[u]);
        self.relations.iter().all(|r| self.homogeneous(r))
            && self.algebra_action.iter().all(|l| (0..n).all(|u| preserved(u, unit(u).derive(l))))
            && self.extra_component.iter().all(|g| (0..n).all(|u| preserved(u, unit(u).substitute(g))))
    }

    fn blocks(&self, d: usize) -> Result<BTreeMap<Vec<i32>, Vec<Monomial>>> {
        let n = self.ambient_dim;
        if binom(n + d - 1 + usize::from(d == 0), d) > WORK_LIMIT {
            return Err(Error::WorkLimit(format!("degree {d} in {n} variables")));
        }
        let mut out: BTreeMap<Vec<i32>, Vec<Monomial>> = BTreeMap::new();
        for m in monomials(n, d) {
            out.entry(self.weight_of(&m)).or_default().push(m);
        }
        Ok(out)
    }

    // rref of the ideal's degree-d piece inside each block
    fn ideal_echelons(&self, d: usize) -> Result<Vec<(Vec<Monomial>, Mat, Vec<usize>)>> {
        let blocks = self.blocks(d)?;
        let mut rows: BTreeMap<Vec<i32>, Vec<Polynomial>> = BTreeMap::new();
        if d >= 2 {
            for m in monomials(self.ambient_dim, d - 2) {
                for r in &self.relations {
                    let p = r.mul_monomial(&m);
                    if let Some(t) = p.terms.keys().next() {
                        rows.entry(self.weight_of(t)).or_default().push(p);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (w, mons) in blocks {
            let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let polys = rows.remove(&w).unwrap_or_default();
            let mut data = Vec::with_capacity(polys.len() * mons.len());
            for p in &polys {
                let mut row = vec![self.field.zero(); mons.len()];
                for (m, c) in &p.terms {
                    row[index[m]] = c.clone();
                }
                data.extend(row);
            }
            let mat = Mat::new(polys.len(), mons.len(), self.field, data)?;
            let e = echelon(&mat);
            out.push((mons, e.rref, e.pivots));
        }
        Ok(out)
    }

    /// Dimension of the degree-`d` piece of the quotient ring.
    pub fn graded_quotient_dim(&self, d: usize) -> Result<u64> {
        Ok(self.ideal_echelons(d)?.iter().map(|(m, _, p)| (m.len() - p.len()) as u64).sum())
    }

    /// Representatives of a basis of the degree-`d` invariants of the quotient ring.
    pub fn invariant_basis(&self, d: usize) -> Result<Vec<Polynomial>> {
        self.invariants(d, true).map(|(_, b)| b)
    }

    pub fn invariant_dim(&self, d: usize) -> Result<u64> {
        self.invariants(d, false).map(|(c, _)| c)
    }

    fn invariants(&self, d: usize, want_basis: bool) -> Result<(u64, Vec<Polynomial>)> {
        if self.group == GroupKind::O && self.extra_component.is_none() && self.ambient_dim > 0 {
            return Err(Error::MissingComponent);
        }
        let field = self.field;
        let mut count = 0;
        let mut basis = Vec::new();
        for (mons, rref, pivots) in self.ideal_echelons(d)? {
            let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let free: Vec<usize> = (0..mons.len()).filter(|c| !pivots.contains(c)).collect();
            if free.is_empty() {
                continue;
            }
            // reduce a polynomial of this block modulo the ideal, in free coordinates
            let reduce = |p: &Polynomial| -> Vec<Scalar> {
                let mut v = vec![field.zero(); mons.len()];
                for (m, c) in &p.terms {
                    v[index[m]] = c.clone();
                }
                for (t, &pc) in pivots.iter().enumerate() {
                    let f = v[pc].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for (c, x) in rref.row(t).iter().enumerate() {
                        if !x.is_zero() {
                            v[c] = v[c].sub(&f.mul(x));
                        }
                    }
                }
                free.iter().map(|&c| v[c].clone()).collect()
            };
            let maps: Vec<(&Mat, bool)> = self
                .algebra_action
                .iter()
                .map(|l| (l, false))
                .chain(self.extra_component.iter().map(|g| (g, true)))
                .collect();
            let mut data = Vec::new();
            let rows_per = free.len();
            for (l, group_element) in &maps {
                let mut block = vec![field.zero(); rows_per * free.len()];
                for (col, &c) in free.iter().enumerate() {
                    let mono = Polynomial::monomial(field, mons[c].clone(), field.one());
                    let img = if *group_element { mono.substitute(l).add(&mono.scale(&field.int(-1))) } else { mono.derive(l) };
                    for (r, x) in reduce(&img).into_iter().enumerate() {
                        block[r * free.len() + col] = x;
                    }
                }
                data.extend(block);
            }
            let m = Mat::new(maps.len() * rows_per, free.len(), field, data)?;
            if want_basis {
                let kernel = if maps.is_empty() { (0..free.len()).map(|c| unit_col(field, free.len(), c)).collect() } else { crate::linalg::nullspace(&m) };
                count += kernel.len() as u64;
                for v in kernel {
                    let mut p = Polynomial::zero(field, self.ambient_dim);
                    for (t, x) in v.entries().iter().enumerate() {
                        p.add_term(mons[free[t]].clone(), x.clone());
                    }
                    basis.push(p);
                }
            } else {
                count += (free.len() - if maps.is_empty() { 0 } else { rank(&m) }) as u64;
            }
        }
        Ok((count, basis))
    }

    /// Invariant dims for `d = 0..=dmax`, degrees computed independently.
    pub fn hilbert_truncated(&self, dmax: usize) -> Result<HilbertTruncation> {
        self.hilbert_truncated_with(dmax, Execution::default())
    }

    pub fn hilbert_truncated_with(&self, dmax: usize, exec: Execution) -> Result<HilbertTruncation> {
        self.blocks(dmax)?;
        let degrees: Vec<usize> = (0..=dmax).collect();
        let coeffs = exec::map(exec, &degrees, |&d| self.invariant_dim(d)).into_iter().collect::<Result<Vec<_>>>()?;
        Ok(HilbertTruncation { coeffs })
    }

    /// Quotient-ring dims for `d = 0..=dmax`.
    pub fn quotient_truncated(&self, dmax: usize, exec: Execution) -> Result<HilbertTruncation> {
        self.blocks(dmax)?;
        let degrees: Vec<usize> = (0..=dmax).collect();
        let coeffs = exec::map(exec, &degrees, |&d| self.graded_quotient_dim(d)).into_iter().collect::<Result<Vec<_>>>()?;
        Ok(HilbertTruncation { coeffs })
    }
}

fn unit_col(field: Field, n: usize, c: usize) -> Mat {
    Mat::identity(field, n).col(c)
}

// keep a linearly independent subset of the nonzero quadrics
fn independent(field: Field, n: usize, rel: Vec<Polynomial>) -> Vec<Polynomial> {
    let mons = monomials(n, 2);
    let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut kept: Vec<Polynomial> = Vec::new();
    let mut rows: Vec<Scalar> = Vec::new();
    for r in rel.into_iter().filter(|r| !r.is_zero()) {
        let mut row = vec![field.zero(); mons.len()];
        for (m, c) in &r.terms {
            row[index[m]] = c.clone();
        }
        let mut trial = rows.clone();
        trial.extend(row);
        let m = Mat::new(kept.len() + 1, mons.len(), field, trial.clone()).unwrap();
        if rank(&m) == kept.len() + 1 {
            rows = trial;
            kept.push(r);
        }
    }
    kept
}

/// Exponent vectors of total degree `d` in `n` variables, in lexicographic order.
pub fn monomials(n: usize, d: usize) -> Vec<Monomial> {
    fn go(n: usize, u: usize, rest: usize, cur: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if u + 1 == n {
            cur[u] = rest as u8;
            out.push(cur.clone());
            cur[u] = 0;
            return;
        }
        for e in (0..=rest).rev() {
            cur[u] = e as u8;
            go(n, u + 1, rest - e, cur, out);
        }
        cur[u] = 0;
    }
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    go(n, 0, d, &mut vec![0; n], &mut out);
    out
}

fn torus_weights(template: &AdhmDatum, basis: &[AdhmDatum]) -> Vec<Vec<i32>> {
    let (k, n) = (template.k(), template.n());
    let forms = template.v_form().is_some();
    let frame = template.w_form().and_then(BilinearSpace::frame_weights);
    let rank_w = match (&frame, forms) {
        (Some(f), true) => f.first().map_or(0, Vec::len),
        (None, true) => 0,
        (_, false) => n,
    };
    let mut out = Vec::with_capacity(basis.len());
    for t in basis {
        let mut w = vec![0i32; 2 + rank_w];
        if !t.b1.is_zero() {
            w[0] = if forms { 2 } else { 1 };
        } else if !t.b2.is_zero() {
            w[1] = if forms { 2 } else { 1 };
        } else if !t.i.is_zero() {
            let col = (0..k * n).find(|&e| !t.i.entries()[e].is_zero()).unwrap() % n.max(1);
            if forms {
                w[0] = 1;
                w[1] = 1;
                if let Some(f) = &frame {
                    for (s, x) in f[col].iter().enumerate() {
                        w[2 + s] = *x;
                    }
                }
            } else {
                w[2 + col] = 1;
            }
        } else {
            let row = (0..n * k).find(|&e| !t.j.entries()[e].is_zero()).unwrap() / k.max(1);
            w[0] = 1;
            w[1] = 1;
            w[2 + row] = -1;
        }
        out.push(w);
    }
    out
}

/// Coefficients of `(1 - t^2)^gens / (1 - t)^vars` up to `dmax`.
pub fn complete_intersection_series(vars: usize, gens: usize, dmax: usize) -> Vec<i64> {
    let free: Vec<i64> = (0..=dmax).map(|d| if vars == 0 { i64::from(d == 0) } else { binom(vars + d - 1, d) as i64 }).collect();
    let mut num = vec![0i64; dmax + 1];
    for s in 0..=gens {
        if 2 * s > dmax {
            break;
        }
        let c = binom(gens, s) as i64 * if s % 2 == 0 { 1 } else { -1 };
        num[2 * s] += c;
    }
    (0..=dmax).map(|d| (0..=d).map(|e| num[e] * free[d - e]).sum()).collect()
}

/// Dims of a degree-two hypersurface ring in `vars` variables.
pub fn hypersurface_series(vars: usize, dmax: usize) -> Vec<i64> {
    complete_intersection_series(vars, 1, dmax)
}

/// Disjoint-union model for charge-two SO(4) data: the two charge-one USp(1) contributions.
pub fn usp1_pair_model(dmax: usize) -> Result<HilbertTruncation> {
    let single = GradedSetup::sp_data(1, 2)?.hilbert_truncated(dmax)?;
    Ok(HilbertTruncation { coeffs: single.coeffs.iter().map(|c| 2 * c).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        let s = GradedSetup::ordinary(1, 2).unwrap();
        assert_eq!(s.ambient_dim, 6);
        assert_eq!(s.relations.len(), 1);
        assert_eq!(s.graded_quotient_dim(0).unwrap(), 1);
        assert_eq!(s.graded_quotient_dim(1).unwrap(), 6);
        assert_eq!(s.graded_quotient_dim(2).unwrap(), 20);
    }

    #[test]
    fn hypersurface_counts() {
        let s = GradedSetup::ordinary(1, 2).unwrap();
        let got = s.quotient_truncated(6, Execution::Sequential).unwrap();
        let want: Vec<u64> = hypersurface_series(6, 6).into_iter().map(|x| x as u64).collect();
        assert_eq!(got.coeffs, want);
    }

    #[test]
    fn ordinary_line_invariants() {
        let s = GradedSetup::ordinary(1, 1).unwrap();
        assert_eq!(s.invariant_dim(0).unwrap(), 1);
        assert_eq!(s.invariant_dim(2).unwrap(), 3);
    }

    #[test]
    fn so_degree_one_invariants() {
        let s = GradedSetup::so_data(2, 4).unwrap();
        assert_eq!(s.ambient_dim, 10);
        assert_eq!(s.invariant_dim(1).unwrap(), 2);
        assert_eq!(s.relations.len(), 3);
    }

    #[test]
    fn sp_needs_component() {
        let mut s = GradedSetup::sp_data(1, 2).unwrap();
        assert!(s.extra_component.is_some());
        assert_eq!(s.invariant_dim(1).unwrap(), 2);
        s.extra_component = None;
        assert_eq!(s.invariant_dim(1).unwrap_err(), Error::MissingComponent);
    }

    #[test]
    fn series_helper() {
        assert_eq!(complete_intersection_series(3, 1, 3), vec![1, 3, 5, 7]);
    }
}
