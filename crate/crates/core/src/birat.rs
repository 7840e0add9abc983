//! Birational maps in the normal form `g(z) = q(z)⁻¹p(z)`: extraction of `(p, q)`
//! from a symbolic map, reconstruction, regular sets, composition and the sampled
//! orbit check `g(M ∩ reg g) ⊆ M ∩ reg g⁻¹`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{lcm, GaussRational, Matrix, MultiPoly, PolyMatrix, RatFunc};
use crate::manifolds::{random_gauss, ManifoldSpec};
use crate::vfields::PolyVectorField;

/// A rational self-map of `ℂⁿ` given by reduced components.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    n: usize,
    components: Vec<RatFunc>,
}

impl RationalMap {
    pub fn new(components: Vec<RatFunc>) -> Result<Self> {
        let n = components.len();
        for c in &components {
            if c.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, found: c.nvars() });
            }
        }
        Ok(RationalMap { n, components })
    }

    pub fn from_polys(components: Vec<MultiPoly>) -> Result<Self> {
        Self::new(components.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn identity(n: usize) -> Self {
        RationalMap { n, components: (0..n).map(|i| RatFunc::from_poly(MultiPoly::var(n, i))).collect() }
    }

    /// `z ↦ z + β`.
    pub fn translation(beta: &[GaussRational]) -> Self {
        let n = beta.len();
        let components = beta
            .iter()
            .enumerate()
            .map(|(i, b)| RatFunc::from_poly(MultiPoly::var(n, i).add(&MultiPoly::constant(n, b.clone()))))
            .collect();
        RationalMap { n, components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        if inner.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: inner.n });
        }
        let components =
            self.components.iter().map(|c| c.compose(&inner.components)).collect::<Result<_>>()?;
        Ok(RationalMap { n: self.n, components })
    }

    /// `J[i][j] = ∂g_i/∂z_j`.
    pub fn jacobian(&self) -> Result<Vec<Vec<RatFunc>>> {
        self.components
            .iter()
            .map(|c| (0..self.n).map(|j| c.derivative(j)).collect())
            .collect()
    }

    /// Value at `a`, or `None` when `a` is a pole of some component.
    pub fn eval(&self, a: &[GaussRational]) -> Result<Option<Vec<GaussRational>>> {
        let mut out = Vec::with_capacity(self.n);
        for c in &self.components {
            match c.eval(a)? {
                Some(v) => out.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Equality as rational maps, by cross-multiplication.
    pub fn equivalent(&self, other: &RationalMap) -> bool {
        self.n == other.n
            && self.components.iter().zip(&other.components).all(|(a, b)| {
                a.num().mul(b.den()) == b.num().mul(a.den())
            })
    }
}

/// `g = q⁻¹p` with optional data for `g⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMapQP {
    n: usize,
    p: Vec<MultiPoly>,
    q: PolyMatrix,
    inverse: Option<Box<RationalMapQP>>,
}

impl RationalMapQP {
    pub fn new(p: Vec<MultiPoly>, q: PolyMatrix) -> Result<Self> {
        let n = p.len();
        if q.rows() != n || q.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: q.rows().max(q.cols()) });
        }
        if q.nvars() != n || p.iter().any(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: q.nvars() });
        }
        if q.det()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(RationalMapQP { n, p, q, inverse: None })
    }

    pub fn with_inverse(mut self, inverse: RationalMapQP) -> Result<Self> {
        if inverse.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: inverse.n });
        }
        self.inverse = Some(Box::new(inverse.without_inverse()));
        Ok(self)
    }

    fn without_inverse(mut self) -> Self {
        self.inverse = None;
        self
    }

    /// Extracts `(p, q)` from a symbolic map and, if given, its inverse.
    pub fn from_map(g: &RationalMap, inverse: Option<&RationalMap>) -> Result<Self> {
        let (p, q) = pullback_pq(g)?;
        let out = RationalMapQP::new(p, q)?;
        match inverse {
            Some(h) => {
                let (pi, qi) = pullback_pq(h)?;
                out.with_inverse(RationalMapQP::new(pi, qi)?)
            }
            None => Ok(out),
        }
    }

    pub fn identity(n: usize) -> Self {
        let id = RationalMapQP {
            n,
            p: (0..n).map(|i| MultiPoly::var(n, i)).collect(),
            q: PolyMatrix::identity(n, n),
            inverse: None,
        };
        id.clone().with_inverse(id).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &[MultiPoly] {
        &self.p
    }

    pub fn q(&self) -> &PolyMatrix {
        &self.q
    }

    pub fn inverse(&self) -> Option<&RationalMapQP> {
        self.inverse.as_deref()
    }

    /// The inverse with `self` attached as its own inverse hint.
    pub fn inverted(&self) -> Option<RationalMapQP> {
        let inv = self.inverse.as_deref()?.clone();
        inv.with_inverse(self.clone()).ok()
    }

    /// `det q`; `reg(g) = {det q ≠ 0}`.
    pub fn regular_set(&self) -> MultiPoly {
        self.q.det().expect("square by construction")
    }

    /// `g = adj(q)·p / det q` in reduced form.
    pub fn map(&self) -> Result<RationalMap> {
        let (adj, det) = self.q.adjugate_det()?;
        let num = adj.mul_vec(&self.p)?;
        RationalMap::new(num.into_iter().map(|c| RatFunc::new(c, det.clone())).collect::<Result<_>>()?)
    }

    /// Least common denominator of the reduced components of `g`; divides `det q`.
    pub fn exact_denominator(&self) -> Result<MultiPoly> {
        let g = self.map()?;
        Ok(g.components.iter().fold(MultiPoly::one(self.n), |acc, c| lcm(&acc, c.den())))
    }

    pub fn is_regular(&self, a: &[GaussRational]) -> Result<bool> {
        Ok(!self.q.eval(a)?.det().is_zero())
    }

    /// `q(a)⁻¹p(a)`, or `None` off `reg(g)`.
    pub fn eval(&self, a: &[GaussRational]) -> Result<Option<Vec<GaussRational>>> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.len() });
        }
        let qa = self.q.eval(a)?;
        if qa.det().is_zero() {
            return Ok(None);
        }
        let pa = self.p.iter().map(|c| c.eval(a)).collect::<Result<Vec<_>>>()?;
        Ok(qa.solve(&pa))
    }
}

/// `(p, q)` with `q = g′⁻¹` and `p = q·g`, both required to be polynomial.
pub fn pullback_pq(g: &RationalMap) -> Result<(Vec<MultiPoly>, PolyMatrix)> {
    let n = g.n;
    let jac = g.jacobian()?;
    let common = jac.iter().flatten().fold(MultiPoly::one(n), |acc, c| {
        if c.den().is_constant() {
            acc
        } else {
            lcm(&acc, c.den())
        }
    });
    // g′ = N / common with polynomial N.
    let rows: Vec<Vec<MultiPoly>> = jac
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.num().mul(&common.div_exact(c.den()).expect("lcm divisible")))
                .collect()
        })
        .collect();
    let nmat = PolyMatrix::from_rows(n, rows)?;
    let (adj, det) = nmat.adjugate_det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let mut q = PolyMatrix::zeros(n, n, n);
    for i in 0..n {
        for j in 0..n {
            let e = adj.get(i, j).mul(&common);
            let v = e.div_exact(&det).ok_or(Error::NonPolynomial { what: "q", index: i * n + j })?;
            q.set(i, j, v);
        }
    }
    let den = g.components.iter().fold(MultiPoly::one(n), |acc, c| lcm(&acc, c.den()));
    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = MultiPoly::zero(n);
        for (j, c) in g.components.iter().enumerate() {
            let qij = q.get(i, j);
            if !qij.is_zero() {
                acc = acc.add(&qij.mul(c.num()).mul(&den.div_exact(c.den()).expect("lcm divisible")));
            }
        }
        p.push(acc.div_exact(&den).ok_or(Error::NonPolynomial { what: "p", index: i })?);
    }
    Ok((p, q))
}

/// Number of regular points at which `g′ = q⁻¹` is checked.
pub const DERIVATIVE_CHECKS: usize = 10;
const POINT_TRIALS: usize = 1000;

/// Regular points of `det q ≠ 0` that are also off the poles of `extra`.
fn regular_points(
    qp: &RationalMapQP,
    count: usize,
    rng: &mut ChaCha8Rng,
    extra: &[&MultiPoly],
) -> Result<Vec<Vec<GaussRational>>> {
    let mut out = Vec::with_capacity(count);
    let mut trials = 0;
    while out.len() < count {
        trials += 1;
        if trials > POINT_TRIALS + count {
            return Err(Error::SamplingExhausted("no regular points found".into()));
        }
        let a: Vec<GaussRational> = (0..qp.n).map(|_| random_gauss(rng)).collect();
        if !qp.is_regular(&a)? {
            continue;
        }
        if extra.iter().map(|d| d.eval(&a)).collect::<Result<Vec<_>>>()?.iter().any(GaussRational::is_zero) {
            continue;
        }
        out.push(a);
    }
    Ok(out)
}

/// Assembles `g = q⁻¹p` and verifies `g′ = q⁻¹` at seeded regular points.
pub fn reconstruct_from_pq(p: Vec<MultiPoly>, q: PolyMatrix, seed: u64) -> Result<RationalMapQP> {
    let qp = RationalMapQP::new(p, q)?;
    verify_derivative_identity(&qp, seed)?;
    Ok(qp)
}

pub fn verify_derivative_identity(qp: &RationalMapQP, seed: u64) -> Result<()> {
    let g = qp.map()?;
    let jac = g.jacobian()?;
    let dens: Vec<&MultiPoly> = jac.iter().flatten().map(RatFunc::den).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = regular_points(qp, DERIVATIVE_CHECKS, &mut rng, &dens)?;
    for (idx, a) in pts.iter().enumerate() {
        let mut ja = Matrix::zeros(qp.n, qp.n);
        for i in 0..qp.n {
            for j in 0..qp.n {
                ja.data[i][j] = jac[i][j].eval(a)?.ok_or(Error::OutsideRegularSet { index: idx })?;
            }
        }
        if qp.q.eval(a)?.mul(&ja) != Matrix::identity(qp.n) {
            return Err(Error::DerivativeMismatch { index: idx });
        }
    }
    Ok(())
}

/// `g1 ∘ g2`, re-extracted in normal form; the inverse hint is `g2⁻¹ ∘ g1⁻¹` when both exist.
pub fn compose(g1: &RationalMapQP, g2: &RationalMapQP) -> Result<RationalMapQP> {
    let m = g1.map()?.compose(&g2.map()?)?;
    let out = RationalMapQP::from_map(&m, None)?;
    match (g1.inverse(), g2.inverse()) {
        (Some(i1), Some(i2)) => {
            let inv = i2.map()?.compose(&i1.map()?)?;
            let (p, q) = pullback_pq(&inv)?;
            out.with_inverse(RationalMapQP::new(p, q)?)
        }
        _ => Ok(out),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitWitness {
    pub point: Vec<GaussRational>,
    pub image: Vec<GaussRational>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub checked: usize,
    pub passed: bool,
    pub witnesses: Vec<OrbitWitness>,
    pub note: &'static str,
}

/// Samples points of `M ∩ reg(g)` and checks that each image lies on `M` and in `reg(g⁻¹)`.
pub fn orbit_consistency(m: &ManifoldSpec, g: &RationalMapQP, count: usize, seed: u64) -> Result<OrbitReport> {
    if m.ambient_dim() != g.n {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), found: g.n });
    }
    let inv = g.inverse().ok_or(Error::InvalidArgument("orbit check needs the inverse map".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();
    let mut checked = 0;
    let mut trials = 0;
    while checked < count {
        trials += 1;
        if trials > POINT_TRIALS + 4 * count {
            return Err(Error::SamplingExhausted("too few manifold points in reg(g)".into()));
        }
        let a = m.sample_points_with(1, &mut rng)?.remove(0);
        let Some(image) = g.eval(&a)? else { continue };
        checked += 1;
        let reason = if !m.contains(&image) {
            Some("image is not on the manifold")
        } else if !inv.is_regular(&image)? {
            Some("image is outside reg(g⁻¹)")
        } else {
            None
        };
        if let Some(r) = reason {
            witnesses.push(OrbitWitness { point: a, image, reason: r.to_string() });
        }
    }
    Ok(OrbitReport {
        checked,
        passed: witnesses.is_empty(),
        witnesses,
        note: "sampling check on finitely many points, not a proof",
    })
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    num: MultiPoly,
    den: MultiPoly,
}

#[derive(Serialize, Deserialize)]
struct RationalMapRepr {
    n: usize,
    components: Vec<RatFuncRepr>,
}

impl Serialize for RationalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalMapRepr {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|c| RatFuncRepr { num: c.num().clone(), den: c.den().clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RationalMapRepr::deserialize(d)?;
        if r.components.len() != r.n {
            return Err(D::Error::custom(format!("expected {} components, got {}", r.n, r.components.len())));
        }
        let comps = r
            .components
            .into_iter()
            .map(|c| {
                let num = c.num.with_nvars(r.n)?;
                let den = c.den.with_nvars(r.n)?;
                RatFunc::new(num, den)
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RationalMap::new(comps).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct QPRepr {
    n: usize,
    p: Vec<MultiPoly>,
    q: Vec<Vec<MultiPoly>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<Box<QPRepr>>,
}

impl QPRepr {
    fn from_qp(g: &RationalMapQP) -> Self {
        QPRepr {
            n: g.n,
            p: g.p.clone(),
            q: g.q.to_rows(),
            inverse: g.inverse.as_deref().map(|i| Box::new(QPRepr::from_qp(i))),
        }
    }

    fn into_qp(self) -> Result<RationalMapQP> {
        let n = self.n;
        let p = self.p.into_iter().map(|c| c.with_nvars(n)).collect::<Result<Vec<_>>>()?;
        if self.q.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.q.len() });
        }
        let q = PolyMatrix::from_rows(n, self.q)?;
        let g = RationalMapQP::new(p, q)?;
        match self.inverse {
            Some(i) => g.with_inverse(i.into_qp()?),
            None => Ok(g),
        }
    }
}

impl Serialize for RationalMapQP {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QPRepr::from_qp(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMapQP {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        QPRepr::deserialize(d)?.into_qp().map_err(D::Error::custom)
    }
}

/// `g_*ξ = g′(g⁻¹)·ξ(g⁻¹)` by symbolic composition.
pub fn pushforward_rational(g: &RationalMap, ginv: &RationalMap, xi: &PolyVectorField) -> Result<Vec<RatFunc>> {
    let n = g.n;
    if ginv.n != n || xi.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: if ginv.n != n { ginv.n } else { xi.dim() } });
    }
    let jac = g.jacobian()?;
    let at_inv: Vec<RatFunc> = xi
        .components()
        .iter()
        .map(|c| RatFunc::from_poly(c.clone()).compose(&ginv.components))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for row in &jac {
        let mut acc = RatFunc::from_poly(MultiPoly::zero(n));
        for (d, v) in row.iter().zip(&at_inv) {
            acc = acc.add(&d.compose(&ginv.components)?.mul(v));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Whether `g_*` and `g^* = (g⁻¹)_*` keep the Euler field and the constant fields polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub fields: Vec<String>,
    pub pushforward_polynomial: Vec<bool>,
    pub pullback_polynomial: Vec<bool>,
}

impl ExtensionReport {
    pub fn all_polynomial(&self) -> bool {
        self.pushforward_polynomial.iter().chain(&self.pullback_polynomial).all(|&b| b)
    }
}

pub fn extension_diagnostic(g: &RationalMap, ginv: &RationalMap) -> Result<ExtensionReport> {
    let n = g.n;
    let mut fields = vec![PolyVectorField::euler(n)];
    fields.extend((0..n).map(|j| PolyVectorField::coordinate(n, j)));
    let polynomial = |a: &RationalMap, b: &RationalMap| -> Result<Vec<bool>> {
        fields
            .iter()
            .map(|f| Ok(pushforward_rational(a, b, f)?.iter().all(|c| c.as_poly().is_some())))
            .collect()
    };
    Ok(ExtensionReport {
        fields: fields.iter().map(PolyVectorField::display).collect(),
        pushforward_polynomial: polynomial(g, ginv)?,
        pullback_polynomial: polynomial(ginv, g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::QuadricSpec;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    fn var(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    fn rf(num: MultiPoly, den: MultiPoly) -> RatFunc {
        RatFunc::new(num, den).unwrap()
    }

    /// `(z, w) ↦ (z/w, −1/w)`, its own inverse up to `(z, w) ↦ (−z, w)`.
    pub(crate) fn inversion() -> RationalMap {
        RationalMap::new(vec![rf(var(0), var(1)), rf(MultiPoly::one(2).neg(), var(1))]).unwrap()
    }

    fn inversion_inverse() -> RationalMap {
        RationalMap::new(vec![rf(var(0).neg(), var(1)), rf(MultiPoly::one(2).neg(), var(1))]).unwrap()
    }


    #[test]
    fn extension_diagnostic_flags_rational_pushforwards() {
        let (z, w) = (var(0), var(1));
        let inv = RationalMap::new(vec![
            RatFunc::new(z.neg(), w.clone()).unwrap(),
            RatFunc::new(MultiPoly::one(2).neg(), w.clone()).unwrap(),
        ])
        .unwrap();
        let g = RationalMap::new(vec![
            RatFunc::new(z.clone(), w.clone()).unwrap(),
            RatFunc::new(MultiPoly::one(2).neg(), w.clone()).unwrap(),
        ])
        .unwrap();
        assert!(extension_diagnostic(&g, &inv).unwrap().all_polynomial());

        // (z, w) ↦ (z, w/z): g_*η = z∂z, but g_*∂z = ∂z − (w/z)∂w and g_*∂w = (1/z)∂w
        let g = RationalMap::new(vec![RatFunc::from_poly(z.clone()), RatFunc::new(w.clone(), z.clone()).unwrap()]).unwrap();
        let back = RationalMap::from_polys(vec![z.clone(), z.mul(&w)]).unwrap();
        let rep = extension_diagnostic(&g, &back).unwrap();
        assert_eq!(rep.pushforward_polynomial, [true, false, false]);
        let eta = pushforward_rational(&g, &back, &PolyVectorField::euler(2)).unwrap();
        assert_eq!(eta[0].as_poly(), Some(&z));
        assert!(eta[1].is_zero());
    }
    #[test]
    fn inversion_pq() {
        let (p, q) = pullback_pq(&inversion()).unwrap();
        assert_eq!(p, vec![MultiPoly::zero(2), var(1).neg()]);
        let expected =
            PolyMatrix::from_rows(2, vec![vec![var(1), var(0).mul(&var(1))], vec![MultiPoly::zero(2), var(1).pow(2)]])
                .unwrap();
        assert_eq!(q, expected);
        let qp = reconstruct_from_pq(p, q, 0).unwrap();
        assert!(qp.map().unwrap().equivalent(&inversion()));
        assert_eq!(qp.regular_set(), var(1).pow(3));
        assert_eq!(qp.exact_denominator().unwrap(), var(1));
    }

    #[test]
    fn translation_pq() {
        let beta = [GaussRational::from_ints(1, 2), g(-3)];
        let t = RationalMap::translation(&beta);
        let (p, q) = pullback_pq(&t).unwrap();
        assert_eq!(q, PolyMatrix::identity(2, 2));
        assert_eq!(p, vec![var(0).add(&MultiPoly::constant(2, beta[0].clone())), var(1).sub(&MultiPoly::constant(2, g(3)))]);
        let qp = reconstruct_from_pq(p, q, 0).unwrap();
        assert_eq!(qp.regular_set(), MultiPoly::one(2));
        let tt = compose(&qp, &qp).unwrap();
        let twice: Vec<GaussRational> = beta.iter().map(|b| b.scale(&crate::exact::rat_int(2))).collect();
        assert!(tt.map().unwrap().equivalent(&RationalMap::translation(&twice)));
    }

    #[test]
    fn inversion_squared() {
        let qp = RationalMapQP::from_map(&inversion(), Some(&inversion_inverse())).unwrap();
        let sq = compose(&qp, &qp).unwrap();
        let expected = RationalMap::from_polys(vec![var(0).neg(), var(1)]).unwrap();
        assert!(sq.map().unwrap().equivalent(&expected));
        let id = compose(&qp, qp.inverse().unwrap()).unwrap();
        assert!(id.map().unwrap().equivalent(&RationalMap::identity(2)));
    }

    #[test]
    fn one_dim_matrix_map() {
        // g(z) = z / (1 − zb), b = 3
        let z = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        let den = one.sub(&z.scale(&g(3)));
        let gm = RationalMap::new(vec![rf(z.clone(), den.clone())]).unwrap();
        let (p, q) = pullback_pq(&gm).unwrap();
        assert_eq!(p, vec![z.sub(&z.pow(2).scale(&g(3)))]);
        assert_eq!(q.get(0, 0), &den.pow(2));
        let back = reconstruct_from_pq(p, q, 1).unwrap();
        assert!(back.map().unwrap().equivalent(&gm));
    }

    #[test]
    fn non_polynomial_reported() {
        // z ↦ z³ has g′⁻¹ = 1/(3z²)
        let gm = RationalMap::from_polys(vec![MultiPoly::var(1, 0).pow(3)]).unwrap();
        assert_eq!(pullback_pq(&gm), Err(Error::NonPolynomial { what: "q", index: 0 }));
    }

    #[test]
    fn inconsistent_pq_rejected() {
        // q = Id with p = z² is not a pullback pair.
        let z = MultiPoly::var(1, 0);
        let r = reconstruct_from_pq(vec![z.pow(2)], PolyMatrix::identity(1, 1), 0);
        assert!(matches!(r, Err(Error::DerivativeMismatch { .. })));
        assert_eq!(
            RationalMapQP::new(vec![z.clone()], PolyMatrix::zeros(1, 1, 1)),
            Err(Error::Singular)
        );
    }

    #[test]
    fn orbit_checks() {
        let m = ManifoldSpec::Quadric(QuadricSpec::heisenberg());
        let qp = RationalMapQP::from_map(&inversion(), Some(&inversion_inverse())).unwrap();
        let r = orbit_consistency(&m, &qp, 20, 0).unwrap();
        assert!(r.passed && r.checked == 20);

        let stretch = RationalMap::from_polys(vec![var(0), var(1).scale(&g(2))]).unwrap();
        let half = RationalMap::new(vec![rf(var(0), MultiPoly::one(2)), rf(var(1), MultiPoly::constant(2, g(2)))])
            .unwrap();
        let bad = RationalMapQP::from_map(&stretch, Some(&half)).unwrap();
        let r = orbit_consistency(&m, &bad, 5, 0).unwrap();
        assert!(!r.passed);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let qp = RationalMapQP::from_map(&inversion(), Some(&inversion_inverse())).unwrap();
        let s = serde_json::to_string(&qp).unwrap();
        let back: RationalMapQP = serde_json::from_str(&s).unwrap();
        assert_eq!(back, qp);
        let ms = serde_json::to_string(&inversion()).unwrap();
        let mb: RationalMap = serde_json::from_str(&ms).unwrap();
        assert_eq!(mb, inversion());
    }
}
