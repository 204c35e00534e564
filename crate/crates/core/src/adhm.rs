//! ADHM data `(B1, B2, i, j)`, moment maps, stability and orbit-dimension helpers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{right_adjoint, split_endo, BilinearSpace, FormKind};
use crate::linalg::{echelon, poly, rank, Mat};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Ordinary,
    SoData,
    SpData,
}

impl Flavor {
    /// Form kinds of `(V, W)` for the constrained flavors.
    pub fn kinds(self) -> Option<(FormKind, FormKind)> {
        match self {
            Flavor::Ordinary => None,
            Flavor::SoData => Some((FormKind::Symplectic, FormKind::Orthogonal)),
            Flavor::SpData => Some((FormKind::Orthogonal, FormKind::Symplectic)),
        }
    }
}

/// Either a bare dimension or a space with a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    Plain(usize),
    Form(BilinearSpace),
}

impl Space {
    pub fn dim(&self) -> usize {
        match self {
            Space::Plain(d) => *d,
            Space::Form(s) => s.dim(),
        }
    }

    pub fn form(&self) -> Option<&BilinearSpace> {
        match self {
            Space::Plain(_) => None,
            Space::Form(s) => Some(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdhmDatum {
    pub flavor: Flavor,
    pub v: Space,
    pub w: Space,
    pub b1: Mat,
    pub b2: Mat,
    pub i: Mat,
    pub j: Mat,
}

impl AdhmDatum {
    pub fn ordinary(b1: Mat, b2: Mat, i: Mat, j: Mat) -> Result<AdhmDatum> {
        let d = AdhmDatum {
            flavor: Flavor::Ordinary,
            v: Space::Plain(b1.rows()),
            w: Space::Plain(i.cols()),
            b1,
            b2,
            i,
            j,
        };
        d.validate()?;
        Ok(d)
    }

    /// SO- or Sp-data with `j = i*` filled in.
    pub fn with_forms(flavor: Flavor, v: BilinearSpace, w: BilinearSpace, b1: Mat, b2: Mat, i: Mat) -> Result<AdhmDatum> {
        if flavor == Flavor::Ordinary {
            return Err(Error::InvariantViolation("ordinary data carry no forms".into()));
        }
        let j = right_adjoint(&i, &w, &v).map_err(|e| Error::InvariantViolation(e.to_string()))?;
        let d = AdhmDatum { flavor, v: Space::Form(v), w: Space::Form(w), b1, b2, i, j };
        d.validate()?;
        Ok(d)
    }

    pub fn k(&self) -> usize {
        self.v.dim()
    }

    pub fn n(&self) -> usize {
        self.w.dim()
    }

    pub fn field(&self) -> Field {
        self.b1.field()
    }

    pub fn v_form(&self) -> Option<&BilinearSpace> {
        self.v.form()
    }

    pub fn w_form(&self) -> Option<&BilinearSpace> {
        self.w.form()
    }

    /// Check shapes, field uniformity and the flavor constraints.
    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.k(), self.n());
        let bad = |m: &str| Err(Error::InvariantViolation(m.to_string()));
        let shapes = [
            (&self.b1, k, k, "B1"),
            (&self.b2, k, k, "B2"),
            (&self.i, k, n, "i"),
            (&self.j, n, k, "j"),
        ];
        for (m, r, c, name) in shapes {
            if m.rows() != r || m.cols() != c {
                return bad(&format!("{name} is {}x{}, expected {r}x{c}", m.rows(), m.cols()));
            }
        }
        let f = self.field();
        if [&self.b2, &self.i, &self.j].iter().any(|m| m.field() != f) {
            return Err(Error::FieldMismatch);
        }
        match (self.flavor, &self.v, &self.w) {
            (Flavor::Ordinary, Space::Plain(_), Space::Plain(_)) => Ok(()),
            (Flavor::Ordinary, _, _) => bad("ordinary data must use plain spaces"),
            (fl, Space::Form(v), Space::Form(w)) => {
                let (kv, kw) = fl.kinds().unwrap();
                if v.kind() != kv || w.kind() != kw {
                    return bad("form kinds do not match the flavor");
                }
                if v.field() != f || w.field() != f {
                    return Err(Error::FieldMismatch);
                }
                if !v.is_self_adjoint(&self.b1) {
                    return bad("B1 is not self-adjoint");
                }
                if !v.is_self_adjoint(&self.b2) {
                    return bad("B2 is not self-adjoint");
                }
                if right_adjoint(&self.i, w, v)? != self.j {
                    return bad("j differs from the adjoint of i");
                }
                Ok(())
            }
            _ => bad("constrained flavors need forms on V and W"),
        }
    }

    /// `(g B1 g^-1, g B2 g^-1, g i, j g^-1)`.
    pub fn act(&self, g: &Mat) -> Result<AdhmDatum> {
        let gi = crate::linalg::inverse(g)?;
        Ok(AdhmDatum {
            flavor: self.flavor,
            v: self.v.clone(),
            w: self.w.clone(),
            b1: &(g * &self.b1) * &gi,
            b2: &(g * &self.b2) * &gi,
            i: g * &self.i,
            j: &self.j * &gi,
        })
    }

    /// Same datum over `field` (entries reduced).
    pub fn reduce(&self, field: Field) -> Result<AdhmDatum> {
        let sp = |s: &Space| -> Result<Space> {
            Ok(match s {
                Space::Plain(d) => Space::Plain(*d),
                Space::Form(b) => Space::Form(b.reduce(field)?),
            })
        };
        Ok(AdhmDatum {
            flavor: self.flavor,
            v: sp(&self.v)?,
            w: sp(&self.w)?,
            b1: self.b1.reduce(field)?,
            b2: self.b2.reduce(field)?,
            i: self.i.reduce(field)?,
            j: self.j.reduce(field)?,
        })
    }
}

/// `[B1, B2] + i j`, projected to g(V) for SO/Sp data.
pub fn moment_map(d: &AdhmDatum) -> Result<Mat> {
    d.validate()?;
    Ok(raw_moment(d))
}

fn raw_moment(d: &AdhmDatum) -> Mat {
    let mu = &d.b1.commutator(&d.b2) + &(&d.i * &d.j);
    match d.v_form() {
        Some(v) => split_endo(&mu, v).expect("square").g_part,
        None => mu,
    }
}

/// Largest `B1, B2`-invariant subspace of `Ker j`, as a basis of column vectors.
pub fn costable_core(d: &AdhmDatum) -> Vec<Mat> {
    let k = d.k();
    let field = d.field();
    // S = ker(A); iterate A <- rows of [A; A B1; A B2]
    let mut a = echelon(&d.j).rref;
    loop {
        let stacked = Mat::vstack(field, &[a.clone(), &a * &d.b1, &a * &d.b2]).unwrap();
        let next = echelon(&stacked).rref;
        if next.rows() == a.rows() {
            break;
        }
        a = next;
    }
    if a.rows() == 0 {
        return (0..k).map(|c| Mat::identity(field, k).col(c)).collect();
    }
    crate::linalg::nullspace(&a)
}

pub fn is_costable(d: &AdhmDatum) -> bool {
    costable_core(d).is_empty()
}

/// Smallest `B1, B2`-invariant subspace containing `Im i`, as column vectors.
pub fn stable_hull(d: &AdhmDatum) -> Vec<Mat> {
    let k = d.k();
    let field = d.field();
    let mut span = crate::linalg::column_space(&d.i);
    loop {
        let mut gens = span.clone();
        gens.extend(span.iter().map(|v| &d.b1 * v));
        gens.extend(span.iter().map(|v| &d.b2 * v));
        let next = crate::linalg::column_space(&Mat::from_columns(field, k, &gens));
        if next.len() == span.len() {
            return span;
        }
        span = next;
    }
}

pub fn is_stable(d: &AdhmDatum) -> bool {
    stable_hull(d).len() == d.k()
}

pub fn is_regular(d: &AdhmDatum) -> bool {
    is_stable(d) && is_costable(d)
}

/// Eigenvalues with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisor {
    pub points: Vec<DivisorPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorPoint {
    pub eigenvalue: Scalar,
    pub multiplicity: usize,
}

impl Divisor {
    pub fn degree(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn support(&self) -> Vec<Scalar> {
        self.points.iter().map(|p| p.eigenvalue.clone()).collect()
    }

    pub fn disjoint_from(&self, o: &Divisor) -> bool {
        self.points.iter().all(|p| o.points.iter().all(|q| q.eigenvalue != p.eigenvalue))
    }
}

pub fn eigenvalue_divisor(b: &Mat) -> Result<Divisor> {
    let f = poly::charpoly(b)?;
    if b.rows() == 0 {
        return Ok(Divisor { points: vec![] });
    }
    let points = poly::roots(&f)?
        .into_iter()
        .map(|(eigenvalue, multiplicity)| DivisorPoint { eigenvalue, multiplicity })
        .collect();
    Ok(Divisor { points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    GL,
    Sp,
    O,
}

/// A classical group acting on V.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub space: Space,
    pub field: Field,
}

impl GroupSpec {
    pub fn general_linear(field: Field, k: usize) -> GroupSpec {
        GroupSpec { kind: GroupKind::GL, space: Space::Plain(k), field }
    }

    pub fn isometries(space: &BilinearSpace) -> GroupSpec {
        let kind = match space.kind() {
            FormKind::Symplectic => GroupKind::Sp,
            FormKind::Orthogonal => GroupKind::O,
        };
        GroupSpec { kind, space: Space::Form(space.clone()), field: space.field() }
    }

    /// The group acting on V for the datum's flavor.
    pub fn for_datum(d: &AdhmDatum) -> GroupSpec {
        match d.v_form() {
            Some(v) => GroupSpec::isometries(v),
            None => GroupSpec::general_linear(d.field(), d.k()),
        }
    }

    pub fn lie_dim(&self) -> usize {
        let k = self.space.dim();
        match self.kind {
            GroupKind::GL => k * k,
            GroupKind::Sp => k * (k + 1) / 2,
            GroupKind::O => k * k.saturating_sub(1) / 2,
        }
    }

    pub fn lie_basis(&self) -> Vec<Mat> {
        match &self.space {
            Space::Form(s) => s.g_basis(),
            Space::Plain(k) => {
                let k = *k;
                let mut out = Vec::with_capacity(k * k);
                for a in 0..k {
                    for b in 0..k {
                        let mut e = Mat::zeros(self.field, k, k);
                        e.set(a, b, self.field.one());
                        out.push(e);
                    }
                }
                out
            }
        }
    }

    pub fn contains(&self, g: &Mat) -> bool {
        if !g.is_square() || g.rows() != self.space.dim() {
            return false;
        }
        match &self.space {
            Space::Form(s) => s.is_isometry(g),
            Space::Plain(_) => rank(g) == g.rows(),
        }
    }
}

/// Tangent vector of the infinitesimal action `xi . d`, flattened.
pub fn infinitesimal_action(xi: &Mat, d: &AdhmDatum) -> Mat {
    let parts = [
        xi.commutator(&d.b1),
        xi.commutator(&d.b2),
        xi * &d.i,
        -&(&d.j * xi),
    ];
    let mut entries = Vec::new();
    for p in parts {
        entries.extend(p.into_entries());
    }
    Mat::column(d.field(), entries)
}

/// Columns are the tangent vectors of a basis of the Lie algebra.
pub fn action_matrix(g: &GroupSpec, d: &AdhmDatum) -> Mat {
    let cols: Vec<Mat> = g.lie_basis().iter().map(|xi| infinitesimal_action(xi, d)).collect();
    let len = 2 * d.k() * d.k() + 2 * d.k() * d.n();
    Mat::from_columns(d.field(), len, &cols)
}

pub fn stabilizer_dim(g: &GroupSpec, d: &AdhmDatum) -> usize {
    let a = action_matrix(g, d);
    a.cols() - rank(&a)
}

pub fn orbit_dim(g: &GroupSpec, d: &AdhmDatum) -> usize {
    rank(&action_matrix(g, d))
}

/// Basis of the tangent space of the linear space of data of this flavor, as data.
pub fn tangent_basis(d: &AdhmDatum) -> Vec<AdhmDatum> {
    let (k, n) = (d.k(), d.n());
    let field = d.field();
    let zero_k = Mat::zeros(field, k, k);
    let unit = |r: usize, c: usize, a: usize, b: usize| {
        let mut m = Mat::zeros(field, r, c);
        m.set(a, b, field.one());
        m
    };
    let mk = |b1: Mat, b2: Mat, i: Mat, j: Mat| AdhmDatum { flavor: d.flavor, v: d.v.clone(), w: d.w.clone(), b1, b2, i, j };
    let mut out = Vec::new();
    match (d.v_form(), d.w_form()) {
        (Some(v), Some(w)) => {
            let pb = v.p_basis();
            for p in &pb {
                out.push(mk(p.clone(), zero_k.clone(), Mat::zeros(field, k, n), Mat::zeros(field, n, k)));
            }
            for p in &pb {
                out.push(mk(zero_k.clone(), p.clone(), Mat::zeros(field, k, n), Mat::zeros(field, n, k)));
            }
            for a in 0..k {
                for b in 0..n {
                    let i = unit(k, n, a, b);
                    let j = right_adjoint(&i, w, v).unwrap();
                    out.push(mk(zero_k.clone(), zero_k.clone(), i, j));
                }
            }
        }
        _ => {
            for a in 0..k {
                for b in 0..k {
                    out.push(mk(unit(k, k, a, b), zero_k.clone(), Mat::zeros(field, k, n), Mat::zeros(field, n, k)));
                }
            }
            for a in 0..k {
                for b in 0..k {
                    out.push(mk(zero_k.clone(), unit(k, k, a, b), Mat::zeros(field, k, n), Mat::zeros(field, n, k)));
                }
            }
            for a in 0..k {
                for b in 0..n {
                    out.push(mk(zero_k.clone(), zero_k.clone(), unit(k, n, a, b), Mat::zeros(field, n, k)));
                }
            }
            for a in 0..n {
                for b in 0..k {
                    out.push(mk(zero_k.clone(), zero_k.clone(), Mat::zeros(field, k, n), unit(n, k, a, b)));
                }
            }
        }
    }
    out
}

/// Differential of the moment map at `d`: one column per tangent basis vector, rows are the
/// `k*k` entries of `d mu`.
pub fn moment_differential(d: &AdhmDatum) -> Mat {
    let field = d.field();
    let k = d.k();
    let cols: Vec<Mat> = tangent_basis(d)
        .iter()
        .map(|t| {
            let dmu = &(&(&t.b1.commutator(&d.b2) + &d.b1.commutator(&t.b2)) + &(&t.i * &d.j)) + &(&d.i * &t.j);
            let dmu = match d.v_form() {
                Some(v) => split_endo(&dmu, v).unwrap().g_part,
                None => dmu,
            };
            dmu.vec()
        })
        .collect();
    Mat::from_columns(field, k * k, &cols)
}

/// dim of the space of data: `2 dim p(V) + kN` for SO/Sp data, `2k^2 + 2kN` otherwise.
pub fn data_space_dim(flavor: Flavor, k: usize, n: usize) -> usize {
    match flavor {
        Flavor::Ordinary => 2 * k * k + 2 * k * n,
        Flavor::SoData => k * k.saturating_sub(1) + k * n,
        Flavor::SpData => k * (k + 1) + k * n,
    }
}

/// `dim N - dim g(V) - (k/2 - l)` for SO-data with `1 <= l <= k/2`.
pub fn stratum_dim(k: usize, n: usize, l: usize) -> Result<usize> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::OutOfRange(format!("k = {k} (must be positive and even)")));
    }
    if n < 4 {
        return Err(Error::OutOfRange(format!("N = {n} (must be at least 4)")));
    }
    if l < 1 || l > k / 2 {
        return Err(Error::OutOfRange(format!("l = {l} (must lie in 1..={})", k / 2)));
    }
    let dim_n = data_space_dim(Flavor::SoData, k, n);
    let dim_g = k * (k + 1) / 2;
    Ok(dim_n - dim_g - (k / 2 - l))
}

/// Dimension `dim V - s` of a fibre of the cotangent moment map over a point of orbit dim `s`.
pub fn fibre_dim_over_base(s: usize, dim_v: usize) -> Result<usize> {
    dim_v
        .checked_sub(s)
        .ok_or_else(|| Error::OutOfRange(format!("orbit dim {s} exceeds dim {dim_v}")))
}

/// Whether `mu(g.d) = g mu(d) g^-1`. `g` must lie in the group acting on V.
pub fn check_equivariance(d: &AdhmDatum, g: &Mat) -> Result<bool> {
    let group = GroupSpec::for_datum(d);
    if !group.contains(g) {
        return Err(Error::NotInGroup);
    }
    let gd = d.act(g)?;
    let lhs = moment_map(&gd)?;
    let gi = crate::linalg::inverse(g)?;
    let rhs = &(g * &moment_map(d)?) * &gi;
    Ok(lhs == rhs)
}

impl Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Plain {
            dim: usize,
        }
        match self {
            Space::Plain(d) => Plain { dim: *d }.serialize(s),
            Space::Form(b) => b.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Space {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        if v.get("gram").is_some() {
            BilinearSpace::deserialize(v).map(Space::Form).map_err(serde::de::Error::custom)
        } else {
            let dim = v
                .get("dim")
                .and_then(serde_json::Value::as_u64)
                .ok_or_else(|| serde::de::Error::custom("space needs \"dim\""))?;
            Ok(Space::Plain(dim as usize))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    flavor: Flavor,
    #[serde(rename = "V")]
    v: Space,
    #[serde(rename = "W")]
    w: Space,
    #[serde(rename = "B1")]
    b1: Mat,
    #[serde(rename = "B2")]
    b2: Mat,
    i: Mat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<Mat>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    auto_adjoint: bool,
}

impl Serialize for AdhmDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DatumJson {
            flavor: self.flavor,
            v: self.v.clone(),
            w: self.w.clone(),
            b1: self.b1.clone(),
            b2: self.b2.clone(),
            i: self.i.clone(),
            j: Some(self.j.clone()),
            auto_adjoint: false,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdhmDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = DatumJson::deserialize(d)?;
        let datum = match (j.flavor, j.j, j.auto_adjoint) {
            (Flavor::Ordinary, Some(jm), false) => AdhmDatum::ordinary(j.b1, j.b2, j.i, jm).map(|mut d| {
                d.v = j.v;
                d.w = j.w;
                d
            }),
            (Flavor::Ordinary, _, _) => return Err(D::Error::custom("ordinary data need an explicit j")),
            (fl, jm, auto) => {
                let (Space::Form(v), Space::Form(w)) = (j.v, j.w) else {
                    return Err(D::Error::custom("SO/Sp data need forms on V and W"));
                };
                let mut d = AdhmDatum::with_forms(fl, v, w, j.b1, j.b2, j.i);
                if let (Ok(dd), Some(jm), false) = (&mut d, jm, auto) {
                    dd.j = jm;
                }
                d
            }
        };
        let datum = datum.map_err(D::Error::custom)?;
        datum.validate().map_err(D::Error::custom)?;
        Ok(datum)
    }
}
