//! Structure constants, the `ad η` grading, isotropy subalgebras and the matrix of
//! the pushforward `ν(g) = g_*` on a finite-dimensional algebra of vector fields.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::birat::RationalMapQP;
use crate::error::{Error, Result};
use crate::exact::{GaussRational, Matrix, MultiPoly, Rational, SpanSolver};
use crate::holsolver::{Ground, LieAlgebraBasis};
use crate::manifolds::random_gauss;
use crate::vfields::{FieldCoordinates, PolyVectorField};

/// `[ξᵢ, ξⱼ] = Σ_k tensor[i][j][k] ξ_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstants {
    pub dim: usize,
    pub tensor: Vec<Vec<Vec<GaussRational>>>,
}

pub fn structure_constants(l: &LieAlgebraBasis) -> Result<StructureConstants> {
    let dim = l.len();
    let mut brackets = Vec::with_capacity(dim * (dim.saturating_sub(1)) / 2);
    for i in 0..dim {
        for j in i + 1..dim {
            brackets.push(l.elements[i].bracket(&l.elements[j])?);
        }
    }
    let coords = l.coordinates_many(&brackets);
    let zero = vec![GaussRational::zero(); dim];
    let mut tensor = vec![vec![zero; dim]; dim];
    let mut it = coords.into_iter();
    for i in 0..dim {
        for j in i + 1..dim {
            let c = it.next().unwrap().ok_or(Error::NotClosed { i, j })?;
            tensor[j][i] = c.iter().map(|v| -v).collect();
            tensor[i][j] = c;
        }
    }
    Ok(StructureConstants { dim, tensor })
}

impl StructureConstants {
    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim).all(|k| (&self.tensor[i][j][k] + &self.tensor[j][i][k]).is_zero())
            })
        })
    }

    /// `[[ξᵢ,ξⱼ],ξ_k] + [[ξⱼ,ξ_k],ξᵢ] + [[ξ_k,ξᵢ],ξⱼ]` in coordinates.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<GaussRational> {
        let c = &self.tensor;
        (0..self.dim)
            .map(|l| {
                let mut acc = GaussRational::zero();
                for m in 0..self.dim {
                    acc += &(&c[i][j][m] * &c[m][k][l]);
                    acc += &(&c[j][k][m] * &c[m][i][l]);
                    acc += &(&c[k][i][m] * &c[m][j][l]);
                }
                acc
            })
            .collect()
    }

    pub fn satisfies_jacobi(&self) -> bool {
        (0..self.dim).all(|i| {
            (i + 1..self.dim)
                .all(|j| (j + 1..self.dim).all(|k| self.jacobiator(i, j, k).iter().all(GaussRational::is_zero)))
        })
    }

    /// `B(ξᵢ, ξⱼ) = tr(ad ξᵢ ∘ ad ξⱼ)`.
    pub fn killing_form(&self) -> Matrix<GaussRational> {
        let c = &self.tensor;
        let mut b = Matrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let mut acc = GaussRational::zero();
                for k in 0..self.dim {
                    for m in 0..self.dim {
                        if !c[i][m][k].is_zero() && !c[j][k][m].is_zero() {
                            acc += &(&c[i][m][k] * &c[j][k][m]);
                        }
                    }
                }
                b.data[j][i] = acc.clone();
                b.data[i][j] = acc;
            }
        }
        b
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, a: &[GaussRational], b: &[GaussRational]) -> Vec<GaussRational> {
        let mut out = vec![GaussRational::zero(); self.dim];
        for i in 0..self.dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if b[j].is_zero() {
                    continue;
                }
                let s = &a[i] * &b[j];
                for (k, o) in out.iter_mut().enumerate() {
                    if !self.tensor[i][j][k].is_zero() {
                        *o += &(&s * &self.tensor[i][j][k]);
                    }
                }
            }
        }
        out
    }
}

/// Weight spaces `l^m` of `ad η`, keyed by `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    pub parts: BTreeMap<i64, Vec<PolyVectorField>>,
}

impl GradedAlgebra {
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.parts.iter().map(|(m, b)| (*m, b.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.parts.values().map(Vec::len).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct WeightPart {
    m: i64,
    basis: Vec<PolyVectorField>,
}

impl Serialize for GradedAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts
            .iter()
            .map(|(m, b)| WeightPart { m: *m, basis: b.clone() })
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

/// Decomposes `l` into `ad η`-eigenspaces. Since `[η, ξ] = m·ξ` for `ξ` homogeneous
/// of degree `m + 1`, the weight spaces are spanned by homogeneous components.
pub fn grade_by_euler(l: &LieAlgebraBasis) -> Result<GradedAlgebra> {
    let n = l.ambient_dim;
    if !l.contains(&PolyVectorField::euler(n)) {
        return Err(Error::EulerMissing);
    }
    let mut pieces: Vec<(usize, i64, PolyVectorField)> = Vec::new();
    for (idx, f) in l.elements.iter().enumerate() {
        for (m, part) in f.homogeneous_components() {
            pieces.push((idx, m, part));
        }
    }
    let fields: Vec<PolyVectorField> = pieces.iter().map(|(_, _, p)| p.clone()).collect();
    for ((idx, m, _), c) in pieces.iter().zip(l.coordinates_many(&fields)) {
        if c.is_none() {
            return Err(Error::EscapesSpan { index: *idx, weight: *m });
        }
    }
    let mut grouped: BTreeMap<i64, Vec<PolyVectorField>> = BTreeMap::new();
    for (_, m, p) in pieces {
        grouped.entry(m).or_default().push(p);
    }
    let parts = grouped
        .into_iter()
        .map(|(m, fs)| (m, independent_subset(&fs)))
        .filter(|(_, b)| !b.is_empty())
        .collect();
    Ok(GradedAlgebra { parts })
}

/// Greedy ℂ-independent subset, in order.
fn independent_subset(fs: &[PolyVectorField]) -> Vec<PolyVectorField> {
    let coords = FieldCoordinates::spanning(fs);
    let mut kept_vecs: Vec<Vec<GaussRational>> = Vec::new();
    let mut kept = Vec::new();
    for f in fs {
        let v = coords.complex_vector(f).unwrap();
        if !kept_vecs.is_empty() && SpanSolver::new(&kept_vecs, coords.len()).contains(&v) {
            continue;
        }
        if v.iter().all(GaussRational::is_zero) {
            continue;
        }
        kept_vecs.push(v);
        kept.push(f.clone());
    }
    kept
}

/// `𝔩_a = {ξ ∈ 𝔩 : ξ(a) = 0}`; `coefficients` are rows in the basis of `𝔩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsotropyBasis {
    pub base_point: Vec<GaussRational>,
    pub coefficients: Vec<Vec<GaussRational>>,
    pub elements: Vec<PolyVectorField>,
}

pub fn isotropy_subalgebra(l: &LieAlgebraBasis, a: &[GaussRational]) -> Result<IsotropyBasis> {
    let n = l.ambient_dim;
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.len() });
    }
    let values = l.elements.iter().map(|f| f.evaluate(a)).collect::<Result<Vec<_>>>()?;
    // evaluation map: column i is ξᵢ(a)
    let eval = Matrix::from_rows(n, values).transpose();
    let kernel = eval.kernel();
    let codim = l.len() - kernel.len();
    if codim != n {
        return Err(Error::CodimensionMismatch { expected: n, found: codim });
    }
    let elements = kernel
        .iter()
        .map(|c| PolyVectorField::linear_combination(n, c, &l.elements))
        .collect();
    Ok(IsotropyBasis { base_point: a.to_vec(), coefficients: kernel, elements })
}

/// Column `i` holds the coordinates of `g_*ξᵢ` in the basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PushforwardMatrix {
    pub matrix: Matrix<GaussRational>,
    pub map_ref: String,
}

impl PushforwardMatrix {
    pub fn identity(dim: usize) -> Self {
        PushforwardMatrix { matrix: Matrix::identity(dim), map_ref: "identity".into() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn compose(&self, other: &PushforwardMatrix) -> PushforwardMatrix {
        PushforwardMatrix {
            matrix: self.matrix.mul(&other.matrix),
            map_ref: format!("{}*{}", self.map_ref, other.map_ref),
        }
    }

    /// `ν[x, y] = [νx, νy]` for all basis pairs.
    pub fn preserves(&self, sc: &StructureConstants) -> bool {
        let d = sc.dim;
        if self.dim() != d {
            return false;
        }
        let col = |i: usize| -> Vec<GaussRational> { (0..d).map(|r| self.matrix.data[r][i].clone()).collect() };
        let cols: Vec<_> = (0..d).map(col).collect();
        for i in 0..d {
            for j in i + 1..d {
                let lhs = self.matrix.mul_vec(&sc.tensor[i][j]);
                if lhs != sc.bracket(&cols[i], &cols[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Inertia of a real symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia of the Killing form of a real algebra, e.g. `(6, 4, 0)` for so(3,2).
pub fn killing_inertia(l: &LieAlgebraBasis) -> Result<Inertia> {
    if l.ground != Ground::Real {
        return Err(Error::InvalidArgument("Killing inertia needs a real basis".into()));
    }
    let b = structure_constants(l)?.killing_form();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(b.rows);
    for row in &b.data {
        if row.iter().any(|v| !v.im.is_zero()) {
            return Err(Error::InvalidArgument("Killing form is not real".into()));
        }
        a.push(row.iter().map(|v| v.re.clone()).collect());
    }
    Ok(symmetric_inertia(a))
}

/// Congruence diagonalization over ℚ.
fn symmetric_inertia(mut a: Vec<Vec<Rational>>) -> Inertia {
    let n = a.len();
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k ← e_k + e_j gives a diagonal entry 2a_kj
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            }
        }
        let p = a[k][k].clone();
        if p.is_zero() {
            out.zero += 1;
            continue;
        }
        if p > Rational::zero() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    out
}

pub fn map_digest(g: &RationalMapQP) -> String {
    let s = serde_json::to_string(g).expect("serializable");
    hex::encode(&Sha256::digest(s.as_bytes())[..8])
}

const SAMPLE_TRIALS: usize = 10_000;

/// `g_*ξ` as `(numerator, denominator)` with `g_*ξ = numerator / δ^D`, where `δ = det q̃`
/// for the inverse data `q̃⁻¹p̃` and `D = deg ξ`. Uses `g′(g⁻¹(p)) = q̃(p)`.
fn pushforward_parts(inv: &RationalMapQP, xi: &PolyVectorField) -> Result<(Vec<MultiPoly>, MultiPoly)> {
    let n = inv.n();
    let (adj, delta) = inv.q().adjugate_det()?;
    let num = adj.mul_vec(inv.p())?;
    let d = xi.degree().unwrap_or(0);
    let mut delta_pows = vec![MultiPoly::one(n)];
    for _ in 0..d {
        let next = delta_pows.last().unwrap().mul(&delta);
        delta_pows.push(next);
    }
    let mut num_pows: Vec<Vec<MultiPoly>> = num
        .iter()
        .map(|c| {
            let mut v = vec![MultiPoly::one(n)];
            for _ in 0..d {
                let next = v.last().unwrap().mul(c);
                v.push(next);
            }
            v
        })
        .collect();
    let mut at_inverse = Vec::with_capacity(n);
    for comp in xi.components() {
        let mut acc = MultiPoly::zero(n);
        for (m, c) in comp.terms() {
            let mut t = MultiPoly::constant(n, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&num_pows[v][e as usize]);
                }
            }
            acc = acc.add(&t.mul(&delta_pows[(d - m.degree()) as usize]));
        }
        at_inverse.push(acc);
    }
    num_pows.clear();
    let out = inv.q().mul_vec(&at_inverse)?;
    Ok((out, delta_pows[d as usize].clone()))
}

/// Symbolic `g_*ξ`; fails with `NonPolynomial` when the result is not a polynomial field.
pub fn pushforward_field(g: &RationalMapQP, xi: &PolyVectorField) -> Result<PolyVectorField> {
    let inv = g.inverse().ok_or(Error::InvalidArgument("pushforward needs the inverse map".into()))?;
    let (num, den) = pushforward_parts(inv, xi)?;
    let comps = num
        .iter()
        .enumerate()
        .map(|(i, c)| c.div_exact(&den).ok_or(Error::NonPolynomial { what: "pushforward", index: i }))
        .collect::<Result<Vec<_>>>()?;
    PolyVectorField::new(comps)
}

/// `(g_*ξ)(p) = q̃(p)·ξ(g⁻¹(p))` at a point of `reg(g⁻¹)`.
fn pushforward_value(inv: &RationalMapQP, xi: &PolyVectorField, p: &[GaussRational]) -> Result<Option<Vec<GaussRational>>> {
    let Some(pre) = inv.eval(p)? else { return Ok(None) };
    let v = xi.evaluate(&pre)?;
    Ok(Some(inv.q().eval(p)?.mul_vec(&v)))
}

/// Matrix of `ξ ↦ g_*ξ` on the span of `l`: coordinates found by sampling at
/// `len·(D+1)ⁿ` points of `reg(g) ∩ reg(g⁻¹)`, then verified symbolically.
pub fn pushforward_matrix(l: &LieAlgebraBasis, g: &RationalMapQP, seed: u64) -> Result<PushforwardMatrix> {
    let n = l.ambient_dim;
    if g.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.n() });
    }
    let inv = g.inverse().ok_or(Error::InvalidArgument("pushforward needs the inverse map".into()))?;
    let dim = l.len();
    let d = l.elements.iter().filter_map(PolyVectorField::degree).max().unwrap_or(0) as usize;
    let count = (dim * (d + 1).pow(n as u32)).max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut trials = 0;
    while points.len() < count {
        trials += 1;
        if trials > SAMPLE_TRIALS + count {
            return Err(Error::SamplingExhausted("no points in reg(g) ∩ reg(g⁻¹)".into()));
        }
        let p: Vec<GaussRational> = (0..n).map(|_| random_gauss(&mut rng)).collect();
        if g.is_regular(&p)? && inv.is_regular(&p)? {
            points.push(p);
        }
    }

    let value_vector = |f: &PolyVectorField| -> Result<Vec<GaussRational>> {
        let mut v = Vec::with_capacity(count * n);
        for p in &points {
            v.extend(f.evaluate(p)?);
        }
        Ok(v)
    };
    let rows = l.elements.iter().map(value_vector).collect::<Result<Vec<_>>>()?;
    let solver = SpanSolver::new(&rows, count * n);

    let mut matrix = Matrix::zeros(dim, dim);
    for (i, xi) in l.elements.iter().enumerate() {
        let mut target = Vec::with_capacity(count * n);
        for p in &points {
            target.extend(pushforward_value(inv, xi, p)?.expect("sampled in reg(g⁻¹)"));
        }
        let c = solver.coordinates(&target).ok_or(Error::NotPreserved { index: i })?;
        let (num, den) = pushforward_parts(inv, xi)?;
        let combo = PolyVectorField::linear_combination(n, &c, &l.elements);
        for (a, b) in num.iter().zip(combo.components()) {
            if !a.sub(&b.mul(&den)).is_zero() {
                return Err(Error::NotPreserved { index: i });
            }
        }
        for (r, v) in c.into_iter().enumerate() {
            matrix.data[r][i] = v;
        }
    }
    Ok(PushforwardMatrix { matrix, map_ref: map_digest(g) })
}
