//! Quadrics `Im w = h(z,z)` and polynomial tube manifolds `F + iℝⁿ`: the tangency
//! residual deciding whether a holomorphic field is an infinitesimal
//! CR-automorphism, exact membership, and seeded rational sampling.
//!
//! The quadric generator family usually written `r∂z + 2ih(z,r)∂z` is only tangent
//! when the second term points along `∂w`, i.e. `r∂z + 2ih(z,r)∂w`. Nothing here
//! hardcodes either reading; the solver in [`crate::holsolver`] decides.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{GaussRational, Matrix, MultiPoly, Rational};
use crate::vfields::PolyVectorField;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// `k` Hermitian `n×n` matrices; `H_j` gives `h_j(z, z') = z'* H_j z`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianFormTuple {
    n: usize,
    matrices: Vec<Matrix<GaussRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub independent: bool,
    pub joint_kernel_trivial: bool,
}

impl NondegeneracyReport {
    pub fn passes(&self) -> bool {
        self.independent && self.joint_kernel_trivial
    }
}

impl HermitianFormTuple {
    pub fn new(n: usize, matrices: Vec<Matrix<GaussRational>>) -> Result<Self> {
        for (idx, m) in matrices.iter().enumerate() {
            if m.rows != n || m.cols != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.rows.max(m.cols) });
            }
            for i in 0..n {
                for j in 0..n {
                    if m.data[i][j] != m.data[j][i].conj() {
                        return Err(Error::NotHermitian { index: idx });
                    }
                }
            }
        }
        Ok(HermitianFormTuple { n, matrices })
    }

    /// `h = (|z₁|² + … + |z_n|²)`, the sphere form.
    pub fn sphere(n: usize) -> Self {
        HermitianFormTuple { n, matrices: vec![Matrix::identity(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix<GaussRational>] {
        &self.matrices
    }

    /// `h_j(z, z') = Σ conj(z'_a) H_ab z_b`.
    pub fn value(&self, j: usize, z: &[GaussRational], zp: &[GaussRational]) -> GaussRational {
        let h = &self.matrices[j];
        let mut acc = GaussRational::zero();
        for a in 0..self.n {
            let ca = zp[a].conj();
            for b in 0..self.n {
                if !h.data[a][b].is_zero() {
                    acc += &(&(&ca * &h.data[a][b]) * &z[b]);
                }
            }
        }
        acc
    }

    /// Real linear independence of the forms and triviality of their joint kernel.
    pub fn check_nondegenerate(&self) -> NondegeneracyReport {
        let real_rows: Vec<Vec<Rational>> = self
            .matrices
            .iter()
            .map(|m| {
                m.data
                    .iter()
                    .flatten()
                    .flat_map(|c| [c.re.clone(), c.im.clone()])
                    .collect()
            })
            .collect();
        let independent = if real_rows.is_empty() {
            true
        } else {
            Matrix::from_rows(2 * self.n * self.n, real_rows.clone()).rank() == real_rows.len()
        };
        let stacked: Vec<Vec<GaussRational>> =
            self.matrices.iter().flat_map(|m| m.data.iter().cloned()).collect();
        let joint_kernel_trivial = if stacked.is_empty() {
            self.n == 0
        } else {
            Matrix::from_rows(self.n, stacked).rank() == self.n
        };
        NondegeneracyReport { independent, joint_kernel_trivial }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadricSpec {
    pub form: HermitianFormTuple,
}

impl QuadricSpec {
    pub fn new(form: HermitianFormTuple) -> Self {
        QuadricSpec { form }
    }

    /// Heisenberg sphere `Im w = |z|²` in ℂ².
    pub fn heisenberg() -> Self {
        QuadricSpec::new(HermitianFormTuple::sphere(1))
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn k(&self) -> usize {
        self.form.k()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n() + self.k()
    }

    /// The point `(z, u + i·h(z,z))`.
    pub fn point_from(&self, z: &[GaussRational], u: &[Rational]) -> Vec<GaussRational> {
        let mut p = z.to_vec();
        for (j, uj) in u.iter().enumerate() {
            let h = self.form.value(j, z, z);
            p.push(GaussRational::new(uj.clone(), h.re));
        }
        p
    }
}

/// Tube `F + iℝⁿ` over the base `F = {x ∈ ℝⁿ : rho(x) = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TubeSpec {
    n: usize,
    rho: MultiPoly,
    monic_var: usize,
}

impl TubeSpec {
    /// A cone base: `rho` real, homogeneous, and of degree 2 in `monic_var`
    /// with constant leading coefficient.
    pub fn new(rho: MultiPoly, monic_var: usize) -> Result<Self> {
        let t = Self::new_relaxed(rho, monic_var)?;
        if !t.rho.is_homogeneous() {
            return Err(Error::InvalidTube("base polynomial is not homogeneous (not a cone)".into()));
        }
        Ok(t)
    }

    /// Same checks as [`TubeSpec::new`] except homogeneity.
    pub fn new_relaxed(rho: MultiPoly, monic_var: usize) -> Result<Self> {
        let n = rho.nvars();
        if monic_var >= n {
            return Err(Error::VariableOutOfRange { index: monic_var, nvars: n });
        }
        if !rho.is_real() {
            return Err(Error::InvalidTube("base polynomial has non-real coefficients".into()));
        }
        let parts = rho.coefficients_in(monic_var);
        if parts.len() != 3 || !parts[2].is_constant() || parts[2].is_zero() {
            return Err(Error::InvalidTube(format!(
                "base polynomial must have degree 2 in x{monic_var} with constant leading coefficient"
            )));
        }
        Ok(TubeSpec { n, rho, monic_var })
    }

    /// `H_{p,q}: x₁² + … + x_p² − x_{p+1}² − … − x_n²`, reduced in the last variable.
    pub fn hyperquadric(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        let mut rho = MultiPoly::zero(n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            let sign = if i < p { 1 } else { -1 };
            rho.add_term(crate::exact::Monomial(e), &GaussRational::from_int(sign));
        }
        TubeSpec::new(rho, n - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &MultiPoly {
        &self.rho
    }

    pub fn monic_var(&self) -> usize {
        self.monic_var
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ManifoldSpec {
    Quadric(QuadricSpec),
    Tube(TubeSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeReport {
    pub not_in_hyperplane: bool,
    pub no_tangent_constant: bool,
}

impl ManifoldSpec {
    pub fn ambient_dim(&self) -> usize {
        match self {
            ManifoldSpec::Quadric(q) => q.ambient_dim(),
            ManifoldSpec::Tube(t) => t.n,
        }
    }

    /// Number of real variables the residual polynomials live in:
    /// `(x, y, u)` for quadrics, `(x, y)` for tubes.
    pub fn residual_nvars(&self) -> usize {
        match self {
            ManifoldSpec::Quadric(q) => 2 * q.n() + q.k(),
            ManifoldSpec::Tube(t) => 2 * t.n,
        }
    }

    pub fn residual_count(&self) -> usize {
        match self {
            ManifoldSpec::Quadric(q) => q.k(),
            ManifoldSpec::Tube(_) => 1,
        }
    }

    /// Substitutes for the ambient coordinates expressed in the real residual variables.
    pub(crate) fn parameterization(&self) -> Vec<MultiPoly> {
        let nv = self.residual_nvars();
        let i = GaussRational::i();
        match self {
            ManifoldSpec::Quadric(q) => {
                let n = q.n();
                let z: Vec<MultiPoly> = (0..n)
                    .map(|a| MultiPoly::var(nv, a).add(&MultiPoly::var(nv, n + a).scale(&i)))
                    .collect();
                let mut subs = z;
                for j in 0..q.k() {
                    let hzz = hermitian_poly(&q.form, j, nv);
                    subs.push(MultiPoly::var(nv, 2 * n + j).add(&hzz.scale(&i)));
                }
                subs
            }
            ManifoldSpec::Tube(t) => (0..t.n)
                .map(|a| MultiPoly::var(nv, a).add(&MultiPoly::var(nv, t.n + a).scale(&i)))
                .collect(),
        }
    }

    /// Complex-linear form `Φ(ξ)` with `residual(ξ) = Re Φ(ξ)` coefficient-wise.
    pub fn pre_residual(&self, xi: &PolyVectorField) -> Result<Vec<MultiPoly>> {
        self.pre_residual_with(xi, &self.parameterization())
    }

    pub(crate) fn pre_residual_with(
        &self,
        xi: &PolyVectorField,
        subs: &[MultiPoly],
    ) -> Result<Vec<MultiPoly>> {
        let dim = self.ambient_dim();
        if xi.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: xi.dim() });
        }
        let subbed: Vec<MultiPoly> =
            xi.components().iter().map(|c| c.substitute(subs)).collect::<Result<_>>()?;
        self.pre_residual_substituted(&subbed)
    }

    /// Pre-residual from field components already pulled back to the residual variables.
    pub(crate) fn pre_residual_substituted(&self, subbed: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        let nv = self.residual_nvars();
        match self {
            ManifoldSpec::Quadric(q) => {
                let n = q.n();
                let zbar: Vec<MultiPoly> = (0..n)
                    .map(|a| {
                        MultiPoly::var(nv, a).sub(&MultiPoly::var(nv, n + a).scale(&GaussRational::i()))
                    })
                    .collect();
                let minus_i = -GaussRational::i();
                let mut out = Vec::with_capacity(q.k());
                for j in 0..q.k() {
                    let h = &q.form.matrices()[j];
                    // h_j(F, z) = Σ conj(z_a) H_ab F_b
                    let mut x = MultiPoly::zero(nv);
                    for a in 0..n {
                        for b in 0..n {
                            if !h.data[a][b].is_zero() && !subbed[b].is_zero() {
                                x = x.add(&zbar[a].mul(&subbed[b]).scale(&h.data[a][b]));
                            }
                        }
                    }
                    // Im G_j − 2 Re h_j(F, z) = Re(−i G_j − 2 h_j(F, z))
                    let phi = subbed[n + j].scale(&minus_i).sub(&x.scale(&GaussRational::from_int(2)));
                    out.push(phi);
                }
                Ok(out)
            }
            ManifoldSpec::Tube(t) => {
                let rho = t.rho.embed(nv, &(0..t.n).collect::<Vec<_>>());
                let mut acc = MultiPoly::zero(nv);
                for j in 0..t.n {
                    if subbed[j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&rho.derivative(j)?.mul(&subbed[j]));
                }
                Ok(vec![acc.reduce_mod(&rho, t.monic_var)?])
            }
        }
    }

    /// Real polynomials that vanish identically exactly when `ξ` is tangent.
    ///
    /// Quadrics: `Im g_j − 2 Re h_j(f, z)` after `w = u + i·h(z,z)`, in `(x, y, u)`.
    /// Tubes: `∇rho(x)·Re f(x+iy)` reduced modulo `rho`, in `(x, y)`.
    pub fn tangency_residual(&self, xi: &PolyVectorField) -> Result<Vec<MultiPoly>> {
        Ok(self.pre_residual(xi)?.iter().map(MultiPoly::re_part).collect())
    }

    pub fn is_tangent(&self, xi: &PolyVectorField) -> Result<bool> {
        Ok(self.tangency_residual(xi)?.iter().all(MultiPoly::is_zero))
    }

    /// Exact membership. Tube points must also avoid the vertex `Re z = 0`.
    pub fn contains(&self, point: &[GaussRational]) -> bool {
        if point.len() != self.ambient_dim() {
            return false;
        }
        match self {
            ManifoldSpec::Quadric(q) => {
                let n = q.n();
                let z = &point[..n];
                (0..q.k()).all(|j| {
                    let h = q.form.value(j, z, z);
                    point[n + j].im == h.re
                })
            }
            ManifoldSpec::Tube(t) => {
                let x: Vec<GaussRational> =
                    point.iter().map(|c| GaussRational::real(c.re.clone())).collect();
                if x.iter().all(GaussRational::is_zero) {
                    return false;
                }
                t.rho.eval(&x).map(|v| v.is_zero()).unwrap_or(false)
            }
        }
    }

    /// `count` points of the manifold, deterministic in `seed`.
    pub fn sample_points(&self, count: usize, seed: u64) -> Result<Vec<Vec<GaussRational>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_points_with(count, &mut rng)
    }

    pub fn sample_points_with(
        &self,
        count: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<Vec<GaussRational>>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        match self {
            ManifoldSpec::Quadric(q) => Ok((0..count)
                .map(|_| {
                    let z: Vec<GaussRational> = (0..q.n()).map(|_| random_gauss(rng)).collect();
                    let u: Vec<Rational> = (0..q.k()).map(|_| random_rational(rng)).collect();
                    q.point_from(&z, &u)
                })
                .collect()),
            ManifoldSpec::Tube(t) => {
                let base = tube_base_points(t, count, rng)?;
                Ok(base
                    .into_iter()
                    .map(|x| {
                        x.into_iter()
                            .map(|xr| GaussRational::new(xr, random_rational(rng)))
                            .collect()
                    })
                    .collect())
            }
        }
    }
}

/// `h_j(z, z)` as a real polynomial in `(x, y, …)` with `z = x + iy`.
fn hermitian_poly(form: &HermitianFormTuple, j: usize, nv: usize) -> MultiPoly {
    let n = form.n();
    let i = GaussRational::i();
    let z: Vec<MultiPoly> =
        (0..n).map(|a| MultiPoly::var(nv, a).add(&MultiPoly::var(nv, n + a).scale(&i))).collect();
    let zbar: Vec<MultiPoly> =
        (0..n).map(|a| MultiPoly::var(nv, a).sub(&MultiPoly::var(nv, n + a).scale(&i))).collect();
    let h = &form.matrices()[j];
    let mut acc = MultiPoly::zero(nv);
    for a in 0..n {
        for b in 0..n {
            if !h.data[a][b].is_zero() {
                acc = acc.add(&zbar[a].mul(&z[b]).scale(&h.data[a][b]));
            }
        }
    }
    acc
}

pub(crate) fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=4);
    Rational::new(num.into(), den.into())
}

pub(crate) fn random_gauss(rng: &mut ChaCha8Rng) -> GaussRational {
    GaussRational::new(random_rational(rng), random_rational(rng))
}

const BASE_POINT_TRIALS: usize = 4000;

fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Roots in the monic variable of `rho` with the other coordinates fixed.
fn solve_monic(t: &TubeSpec, x: &mut [Rational]) -> Vec<Vec<Rational>> {
    let parts = t.rho.coefficients_in(t.monic_var);
    let pt: Vec<GaussRational> = x.iter().map(|v| GaussRational::real(v.clone())).collect();
    let ev = |p: &MultiPoly| p.eval(&pt).map(|g| g.re).unwrap_or_else(|_| Rational::zero());
    let (c, b, a) = (ev(&parts[0]), ev(&parts[1]), ev(&parts[2]));
    let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
    let Some(s) = exact_sqrt(&disc) else {
        return Vec::new();
    };
    let two_a = Rational::from_integer(2.into()) * &a;
    let mut roots = vec![(-&b + &s) / &two_a];
    if !s.is_zero() {
        roots.push((-&b - &s) / &two_a);
    }
    roots
        .into_iter()
        .map(|r| {
            let mut v = x.to_vec();
            v[t.monic_var] = r;
            v
        })
        .collect()
}

/// Rational points of the base: one found by search, the rest by secant lines through it.
fn tube_base_points(t: &TubeSpec, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<Rational>>> {
    let n = t.n;
    let nonzero = |v: &[Rational]| v.iter().any(|c| !c.is_zero());
    let mut anchor = None;
    for _ in 0..BASE_POINT_TRIALS {
        let mut x: Vec<Rational> =
            (0..n).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-6i64..=6)))).collect();
        if let Some(p) = solve_monic(t, &mut x).into_iter().find(|p| nonzero(p)) {
            anchor = Some(p);
            break;
        }
    }
    let anchor = anchor.ok_or_else(|| {
        Error::SamplingExhausted("no rational point of the base found within the trial budget".into())
    })?;
    let mut out = Vec::with_capacity(count);
    let mut trials = 0;
    while out.len() < count {
        trials += 1;
        if trials > BASE_POINT_TRIALS * count.max(1) {
            return Err(Error::SamplingExhausted("secant construction kept degenerating".into()));
        }
        let dir: Vec<Rational> =
            (0..n).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-5i64..=5)))).collect();
        // rho(anchor + s·dir) = s·(c1 + c2·s) since rho(anchor) = 0.
        let pt = |s: &Rational| -> Vec<GaussRational> {
            anchor.iter().zip(&dir).map(|(a, d)| GaussRational::real(a + s * d)).collect()
        };
        let ev = |s: Rational| t.rho.eval(&pt(&s)).map(|g| g.re).unwrap_or_else(|_| Rational::zero());
        let one = Rational::from_integer(1.into());
        let f1 = ev(one.clone());
        let fm1 = ev(-one.clone());
        let c2 = (&f1 + &fm1) / Rational::from_integer(2.into());
        let c1 = (&f1 - &fm1) / Rational::from_integer(2.into());
        if c2.is_zero() || c1.is_zero() {
            continue;
        }
        let s = -c1 / c2;
        let p: Vec<Rational> = anchor.iter().zip(&dir).map(|(a, d)| a + &s * d).collect();
        if !nonzero(&p) {
            continue;
        }
        let check: Vec<GaussRational> = p.iter().map(|v| GaussRational::real(v.clone())).collect();
        if t.rho.eval(&check).map(|v| v.is_zero()).unwrap_or(false) {
            out.push(p);
        }
    }
    Ok(out)
}

impl TubeSpec {
    /// Base not contained in an affine hyperplane (checked on `samples` base points)
    /// and no nonzero real constant field tangent to the base.
    pub fn check_conditions(&self, samples: usize, seed: u64) -> Result<TubeReport> {
        if samples < self.n + 1 {
            return Err(Error::SamplingExhausted(format!(
                "{samples} base points cannot certify affine rank {}; need at least {}",
                self.n,
                self.n + 1
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = tube_base_points(self, samples, &mut rng)?;
        let diffs: Vec<Vec<Rational>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
            .collect();
        let not_in_hyperplane = Matrix::from_rows(self.n, diffs).rank() == self.n;

        let m = ManifoldSpec::Tube(self.clone());
        let mut cols = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut alpha = vec![GaussRational::zero(); self.n];
            alpha[j] = GaussRational::one();
            cols.push(m.tangency_residual(&PolyVectorField::constant(&alpha))?.remove(0));
        }
        let keys: std::collections::BTreeSet<_> =
            cols.iter().flat_map(|p| p.terms().map(|(k, _)| k.clone())).collect();
        let rows: Vec<Vec<Rational>> = keys
            .iter()
            .map(|k| cols.iter().map(|p| p.coeff(k).re).collect())
            .collect();
        let no_tangent_constant =
            !rows.is_empty() && Matrix::from_rows(self.n, rows).rank() == self.n;
        Ok(TubeReport { not_in_hyperplane, no_tangent_constant })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ManifoldRepr {
    Quadric { n: usize, k: usize, h: Vec<Vec<Vec<GaussRational>>> },
    Tube { n: usize, rho: MultiPoly, monic_var: usize },
}

impl Serialize for ManifoldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            ManifoldSpec::Quadric(q) => ManifoldRepr::Quadric {
                n: q.n(),
                k: q.k(),
                h: q.form.matrices().iter().map(|m| m.data.clone()).collect(),
            },
            ManifoldSpec::Tube(t) => {
                ManifoldRepr::Tube { n: t.n, rho: t.rho.clone(), monic_var: t.monic_var }
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ManifoldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ManifoldRepr::deserialize(d)? {
            ManifoldRepr::Quadric { n, k, h } => {
                if h.len() != k {
                    return Err(D::Error::custom(format!("expected {k} matrices, got {}", h.len())));
                }
                let mats = h
                    .into_iter()
                    .map(|rows| {
                        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                            return Err(D::Error::custom(format!("matrices must be {n}x{n}")));
                        }
                        Ok(Matrix::from_rows(n, rows))
                    })
                    .collect::<std::result::Result<Vec<_>, D::Error>>()?;
                let form = HermitianFormTuple::new(n, mats).map_err(D::Error::custom)?;
                Ok(ManifoldSpec::Quadric(QuadricSpec::new(form)))
            }
            ManifoldRepr::Tube { n, rho, monic_var } => {
                let rho = rho.with_nvars(n).map_err(D::Error::custom)?;
                TubeSpec::new(rho, monic_var).map(ManifoldSpec::Tube).map_err(D::Error::custom)
            }
        }
    }
}
