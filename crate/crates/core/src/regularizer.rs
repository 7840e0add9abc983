//! The map `φ: a ↦ 𝔩_a` into a Grassmannian, realized through Plücker coordinates,
//! and the induced projective action `τ(g)` of the pushforward `ν(g)`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::birat::RationalMapQP;
use crate::error::{Error, Result};
use crate::exact::{GaussRational, Matrix};
use crate::holsolver::LieAlgebraBasis;
use crate::liestruct::{isotropy_subalgebra, pushforward_matrix, PushforwardMatrix};
use crate::manifolds::random_gauss;

/// Largest compound matrix `materialize_compound` agrees to build.
pub const COMPOUND_LIMIT: usize = 1000;

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else { break };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn minor(rows: &[Vec<GaussRational>], row_idx: &[usize], cols: &[usize]) -> GaussRational {
    let data: Vec<Vec<GaussRational>> =
        row_idx.iter().map(|&r| cols.iter().map(|&c| rows[r][c].clone()).collect()).collect();
    Matrix::from_rows(cols.len(), data).det()
}

/// A point of the Plücker embedding, scaled so the first nonzero coordinate is 1.
#[derive(Clone, Debug)]
pub struct PlueckerPoint {
    len: usize,
    subsets: Vec<Vec<usize>>,
    coords: Vec<GaussRational>,
    /// Spanning rows of the subspace, in coordinates of the ambient algebra.
    subspace: Option<Vec<Vec<GaussRational>>>,
}

impl PartialEq for PlueckerPoint {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.coords == other.coords
    }
}

impl PlueckerPoint {
    /// Wedge of the rows of a `r × len` matrix of full rank `r`.
    pub fn from_rows(rows: Vec<Vec<GaussRational>>, len: usize) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|v| v.len() != len) {
            return Err(Error::DimensionMismatch { expected: len, found: rows[0].len() });
        }
        let subsets = subsets(len, r);
        let all_rows: Vec<usize> = (0..r).collect();
        let coords: Vec<GaussRational> = subsets.iter().map(|s| minor(&rows, &all_rows, s)).collect();
        Self::canonical(len, subsets, coords, Some(rows))
    }

    fn canonical(
        len: usize,
        subsets: Vec<Vec<usize>>,
        mut coords: Vec<GaussRational>,
        subspace: Option<Vec<Vec<GaussRational>>>,
    ) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).cloned().ok_or(Error::Singular)?;
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero");
            for c in coords.iter_mut() {
                *c = &*c * &inv;
            }
        }
        Ok(PlueckerPoint { len, subsets, coords, subspace })
    }

    pub fn coords(&self) -> &[GaussRational] {
        &self.coords
    }

    /// Index sets, 0-based, aligned with [`PlueckerPoint::coords`].
    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subspace(&self) -> Option<&[Vec<GaussRational>]> {
        self.subspace.as_deref()
    }

    /// Projective dimension `N` of the ambient `ℙ^N`.
    pub fn projective_dim(&self) -> usize {
        self.coords.len() - 1
    }

    fn rank(&self) -> usize {
        self.subsets.first().map(Vec::len).unwrap_or(0)
    }

    /// Spot-checks the quadratic Plücker relations
    /// `Σ_k (−1)^k p(I ∪ j_k) p(J ∖ j_k) = 0` on `checks` seeded pairs `(I, J)`.
    pub fn relations_hold(&self, checks: usize, seed: u64) -> bool {
        let r = self.rank();
        if r == 0 || r >= self.len {
            return true;
        }
        let index: HashMap<&[usize], usize> =
            self.subsets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let p = |idx: &[usize]| -> GaussRational {
            let mut v = idx.to_vec();
            let mut sign = false;
            for i in 0..v.len() {
                for j in 0..v.len() - 1 - i {
                    if v[j] > v[j + 1] {
                        v.swap(j, j + 1);
                        sign = !sign;
                    }
                }
            }
            if v.windows(2).any(|w| w[0] == w[1]) {
                return GaussRational::zero();
            }
            let c = self.coords[index[v.as_slice()]].clone();
            if sign {
                -c
            } else {
                c
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<usize> = (0..self.len).collect();
        for _ in 0..checks {
            let i_set: Vec<usize> = all.choose_multiple(&mut rng, r - 1).copied().collect();
            let mut j_set: Vec<usize> = all.choose_multiple(&mut rng, r + 1).copied().collect();
            j_set.sort_unstable();
            let mut acc = GaussRational::zero();
            for (k, &jk) in j_set.iter().enumerate() {
                let mut left = i_set.clone();
                left.push(jk);
                let right: Vec<usize> = j_set.iter().copied().filter(|&x| x != jk).collect();
                let t = &p(&left) * &p(&right);
                if k % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }
}

impl Serialize for PlueckerPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one_based: Vec<Vec<usize>> =
            self.subsets.iter().map(|v| v.iter().map(|i| i + 1).collect()).collect();
        let mut st = s.serialize_struct("PlueckerPoint", 2)?;
        st.serialize_field("subsets", &one_based)?;
        st.serialize_field("coords", &self.coords)?;
        st.end()
    }
}

/// `φ(a)`: Plücker coordinates of the isotropy subalgebra `𝔩_a`.
pub fn plucker_point(l: &LieAlgebraBasis, a: &[GaussRational]) -> Result<PlueckerPoint> {
    let iso = isotropy_subalgebra(l, a)?;
    PlueckerPoint::from_rows(iso.coefficients, l.len())
}

/// `τ(g)` on a decomposable point: push the spanning rows through `ν` and re-wedge.
pub fn tau_apply(nu: &PushforwardMatrix, p: &PlueckerPoint) -> Result<PlueckerPoint> {
    let rows = p
        .subspace
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("point carries no spanning subspace".into()))?;
    if nu.dim() != p.len {
        return Err(Error::DimensionMismatch { expected: p.len, found: nu.dim() });
    }
    let images: Vec<Vec<GaussRational>> = rows.iter().map(|v| nu.matrix.mul_vec(v)).collect();
    PlueckerPoint::from_rows(images, p.len)
}

/// The `r`-th compound of `ν`: entry `(S, T)` is the minor on rows `S`, columns `T`.
pub fn materialize_compound(nu: &PushforwardMatrix, r: usize) -> Result<Matrix<GaussRational>> {
    let d = nu.dim();
    let size = binomial(d, r);
    if size > COMPOUND_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "compound matrix would have {size} rows, limit is {COMPOUND_LIMIT}"
        )));
    }
    let subs = subsets(d, r);
    let mut out = Matrix::zeros(size, size);
    for (i, s) in subs.iter().enumerate() {
        for (j, t) in subs.iter().enumerate() {
            out.data[i][j] = minor(&nu.matrix.data, s, t);
        }
    }
    Ok(out)
}

/// `τ(g)` through the materialized compound matrix; the result has no subspace attached.
pub fn tau_apply_compound(compound: &Matrix<GaussRational>, p: &PlueckerPoint) -> Result<PlueckerPoint> {
    if compound.cols != p.coords.len() {
        return Err(Error::DimensionMismatch { expected: p.coords.len(), found: compound.cols });
    }
    let coords = compound.mul_vec(&p.coords);
    PlueckerPoint::canonical(p.len, p.subsets.clone(), coords, None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntertwiningWitness {
    pub point: Vec<GaussRational>,
    pub image: Vec<GaussRational>,
    pub expected: PlueckerPointCoords,
    pub found: PlueckerPointCoords,
}

/// Canonical coordinates only, for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlueckerPointCoords(pub Vec<GaussRational>);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntertwiningReport {
    pub checked: usize,
    pub all_equal: bool,
    pub witnesses: Vec<IntertwiningWitness>,
}

/// Seeded points of `reg(g)`.
pub fn regular_samples(g: &RationalMapQP, count: usize, seed: u64) -> Result<Vec<Vec<GaussRational>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut trials = 0;
    while out.len() < count {
        trials += 1;
        if trials > 1000 + 10 * count {
            return Err(Error::SamplingExhausted("no points in reg(g)".into()));
        }
        let a: Vec<GaussRational> = (0..g.n()).map(|_| random_gauss(&mut rng)).collect();
        if g.is_regular(&a)? && !out.contains(&a) {
            out.push(a);
        }
    }
    Ok(out)
}

/// Checks `φ(g(a)) = τ(g)φ(a)` exactly at each sample, with `ν(g)` computed from `g`.
pub fn verify_intertwining(
    l: &LieAlgebraBasis,
    g: &RationalMapQP,
    samples: &[Vec<GaussRational>],
    seed: u64,
) -> Result<IntertwiningReport> {
    let nu = pushforward_matrix(l, g, seed)?;
    verify_intertwining_with(l, g, &nu, samples)
}

/// As [`verify_intertwining`] with a caller-supplied `ν`.
pub fn verify_intertwining_with(
    l: &LieAlgebraBasis,
    g: &RationalMapQP,
    nu: &PushforwardMatrix,
    samples: &[Vec<GaussRational>],
) -> Result<IntertwiningReport> {
    let mut witnesses = Vec::new();
    for (idx, a) in samples.iter().enumerate() {
        let image = g.eval(a)?.ok_or(Error::OutsideRegularSet { index: idx })?;
        let expected = plucker_point(l, &image)?;
        let found = tau_apply(nu, &plucker_point(l, a)?);
        match found {
            Ok(f) if f == expected => {}
            other => witnesses.push(IntertwiningWitness {
                point: a.clone(),
                image,
                expected: PlueckerPointCoords(expected.coords),
                found: PlueckerPointCoords(other.map(|f| f.coords).unwrap_or_default()),
            }),
        }
    }
    Ok(IntertwiningReport { checked: samples.len(), all_equal: witnesses.is_empty(), witnesses })
}
