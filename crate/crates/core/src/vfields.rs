//! Polynomial holomorphic vector fields `f(z)∂z` on `E = ℂⁿ`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{GaussRational, Monomial, MultiPoly, Rational};

/// The field `Σ f_k(z) ∂/∂z_k`; component `k` is the coefficient polynomial `f_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyVectorField {
    n: usize,
    components: Vec<MultiPoly>,
}

/// The Euler field `z∂z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerField {
    pub n: usize,
}

impl EulerField {
    pub fn new(n: usize) -> Self {
        EulerField { n }
    }

    pub fn field(&self) -> PolyVectorField {
        PolyVectorField::euler(self.n)
    }
}

impl PolyVectorField {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let n = components.len();
        let components = components
            .into_iter()
            .map(|c| c.with_nvars(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyVectorField { n, components })
    }

    pub fn zero(n: usize) -> Self {
        PolyVectorField { n, components: vec![MultiPoly::zero(n); n] }
    }

    /// The constant field `α∂z`.
    pub fn constant(alpha: &[GaussRational]) -> Self {
        let n = alpha.len();
        PolyVectorField {
            n,
            components: alpha.iter().map(|a| MultiPoly::constant(n, a.clone())).collect(),
        }
    }

    /// `∂/∂z_j`.
    pub fn coordinate(n: usize, j: usize) -> Self {
        let mut f = Self::zero(n);
        f.components[j] = MultiPoly::one(n);
        f
    }

    pub fn euler(n: usize) -> Self {
        PolyVectorField { n, components: (0..n).map(|j| MultiPoly::var(n, j)).collect() }
    }

    /// `p · ∂/∂z_j`.
    pub fn single(n: usize, j: usize, p: MultiPoly) -> Self {
        let mut f = Self::zero(n);
        f.components[j] = p;
        f
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &MultiPoly {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    /// Maximum component degree; `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(MultiPoly::degree).max()
    }

    fn check_dim(&self, other: &PolyVectorField) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyVectorField) -> PolyVectorField {
        debug_assert_eq!(self.n, other.n);
        PolyVectorField {
            n: self.n,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyVectorField) -> PolyVectorField {
        debug_assert_eq!(self.n, other.n);
        PolyVectorField {
            n: self.n,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRational) -> PolyVectorField {
        PolyVectorField { n: self.n, components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> PolyVectorField {
        self.scale(&GaussRational::real(r.clone()))
    }

    /// `Σ coeffs[i] · fields[i]`.
    pub fn linear_combination(n: usize, coeffs: &[GaussRational], fields: &[PolyVectorField]) -> Self {
        coeffs
            .iter()
            .zip(fields)
            .filter(|(c, _)| !c.is_zero())
            .fold(PolyVectorField::zero(n), |acc, (c, f)| acc.add(&f.scale(c)))
    }

    /// Lie bracket `[ξ, ζ]_k = Σ_j (ξ_j ∂ζ_k/∂z_j − ζ_j ∂ξ_k/∂z_j)`.
    ///
    /// With this sign the constant fields are eigenvectors of `ad η` with eigenvalue −1.
    pub fn bracket(&self, other: &PolyVectorField) -> Result<PolyVectorField> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = MultiPoly::zero(n);
            for j in 0..n {
                if !self.components[j].is_zero() {
                    let d = other.components[k].derivative(j)?;
                    if !d.is_zero() {
                        acc = acc.add(&self.components[j].mul(&d));
                    }
                }
                if !other.components[j].is_zero() {
                    let d = self.components[k].derivative(j)?;
                    if !d.is_zero() {
                        acc = acc.sub(&other.components[j].mul(&d));
                    }
                }
            }
            out.push(acc);
        }
        Ok(PolyVectorField { n, components: out })
    }

    /// The vector `ξ_a ∈ E`.
    pub fn evaluate(&self, a: &[GaussRational]) -> Result<Vec<GaussRational>> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.len() });
        }
        self.components.iter().map(|c| c.eval(a)).collect()
    }

    /// Splits into `ad η`-eigencomponents: weight `m` holds the degree-`m+1` part.
    /// Weights ascend; the zero field has no components.
    pub fn homogeneous_components(&self) -> Vec<(i64, PolyVectorField)> {
        let mut degrees = BTreeSet::new();
        for c in &self.components {
            for (m, _) in c.terms() {
                degrees.insert(m.degree());
            }
        }
        degrees
            .into_iter()
            .map(|d| {
                let part = PolyVectorField {
                    n: self.n,
                    components: self.components.iter().map(|c| c.homogeneous_part(d)).collect(),
                };
                (d as i64 - 1, part)
            })
            .collect()
    }

    /// Sparse coefficient map keyed by `(component, monomial)`.
    pub fn coefficients(&self) -> BTreeMap<(usize, Monomial), GaussRational> {
        let mut out = BTreeMap::new();
        for (k, c) in self.components.iter().enumerate() {
            for (m, v) in c.terms() {
                out.insert((k, m.clone()), v.clone());
            }
        }
        out
    }

    pub fn display(&self) -> String {
        let names = default_names(self.n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({})∂{}", c.display_with(&refs), refs[k]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("z{i}")).collect()
}

impl fmt::Debug for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Fixed coordinate system for flattening fields into coefficient vectors.
#[derive(Clone, Debug)]
pub struct FieldCoordinates {
    keys: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl FieldCoordinates {
    /// Coordinates covering every coefficient that occurs in `fields`.
    pub fn spanning<'a, I: IntoIterator<Item = &'a PolyVectorField>>(fields: I) -> Self {
        let mut set = BTreeSet::new();
        for f in fields {
            for (k, c) in f.components.iter().enumerate() {
                for (m, _) in c.terms() {
                    set.insert((k, m.clone()));
                }
            }
        }
        Self::from_keys(set.into_iter().collect())
    }

    /// All `(component, monomial)` pairs up to `max_degree` in `n` variables.
    pub fn full(n: usize, max_degree: u32) -> Self {
        let mons = crate::exact::monomials_up_to(n, max_degree);
        let keys = (0..n).flat_map(|k| mons.iter().map(move |m| (k, m.clone()))).collect();
        Self::from_keys(keys)
    }

    fn from_keys(keys: Vec<(usize, Monomial)>) -> Self {
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        FieldCoordinates { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[(usize, Monomial)] {
        &self.keys
    }

    /// Complex coefficient vector; `None` if the field uses a coefficient outside the system.
    pub fn complex_vector(&self, f: &PolyVectorField) -> Option<Vec<GaussRational>> {
        let mut v = vec![GaussRational::zero(); self.keys.len()];
        for (k, c) in f.components.iter().enumerate() {
            for (m, val) in c.terms() {
                let i = *self.index.get(&(k, m.clone()))?;
                v[i] = val.clone();
            }
        }
        Some(v)
    }

    /// Real vector `(Re c₀, Im c₀, Re c₁, Im c₁, …)`.
    pub fn real_vector(&self, f: &PolyVectorField) -> Option<Vec<Rational>> {
        let cv = self.complex_vector(f)?;
        Some(cv.into_iter().flat_map(|c| [c.re, c.im]).collect())
    }

    pub fn field_from_complex(&self, n: usize, v: &[GaussRational]) -> PolyVectorField {
        let mut f = PolyVectorField::zero(n);
        for ((k, m), c) in self.keys.iter().zip(v) {
            f.components[*k].add_term(m.clone(), c);
        }
        f
    }

    pub fn field_from_real(&self, n: usize, v: &[Rational]) -> PolyVectorField {
        let cv: Vec<GaussRational> =
            v.chunks(2).map(|p| GaussRational::new(p[0].clone(), p[1].clone())).collect();
        self.field_from_complex(n, &cv)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    n: usize,
    components: Vec<MultiPoly>,
}

impl Serialize for PolyVectorField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr { n: self.n, components: self.components.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyVectorField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FieldRepr::deserialize(d)?;
        if r.components.len() != r.n {
            return Err(D::Error::custom(format!(
                "field has {} components, expected {}",
                r.components.len(),
                r.n
            )));
        }
        PolyVectorField::new(r.components).map_err(D::Error::custom)
    }
}
