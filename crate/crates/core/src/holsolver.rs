//! Polynomial infinitesimal CR-automorphisms: the real Lie algebra `hol(M)` up to a
//! degree cap, its complexification `𝔩`, and the Property (P) checks.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{monomials_up_to, GaussRational, Matrix, Monomial, MultiPoly, Rational, SpanSolver};
use crate::manifolds::ManifoldSpec;
use crate::vfields::{FieldCoordinates, PolyVectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ground {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebraBasis {
    pub ground: Ground,
    pub ambient_dim: usize,
    pub degree_cap: u32,
    pub elements: Vec<PolyVectorField>,
}

impl LieAlgebraBasis {
    pub fn new(ground: Ground, ambient_dim: usize, degree_cap: u32, elements: Vec<PolyVectorField>) -> Result<Self> {
        for f in &elements {
            if f.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: f.dim() });
            }
        }
        Ok(LieAlgebraBasis { ground, ambient_dim, degree_cap, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates of `f` in the basis over the ground field; `None` outside the span.
    pub fn coordinates_of(&self, f: &PolyVectorField) -> Option<Vec<GaussRational>> {
        self.coordinates_many(std::slice::from_ref(f)).remove(0)
    }

    /// Coordinates of several fields against one elimination of the basis.
    pub fn coordinates_many(&self, fields: &[PolyVectorField]) -> Vec<Option<Vec<GaussRational>>> {
        let coords = FieldCoordinates::spanning(self.elements.iter().chain(fields));
        let solver = self.span_solver(&coords);
        fields
            .iter()
            .map(|f| match &solver {
                SpanKind::Complex(s) => s.coordinates(&coords.complex_vector(f)?),
                SpanKind::Real(s) => Some(
                    s.coordinates(&coords.real_vector(f)?)?.into_iter().map(GaussRational::real).collect(),
                ),
            })
            .collect()
    }

    pub fn contains(&self, f: &PolyVectorField) -> bool {
        f.is_zero() || self.coordinates_of(f).is_some()
    }

    /// First bracket pair leaving the span, if any.
    pub fn closure_failure(&self) -> Result<Option<(usize, usize)>> {
        let mut brackets = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                brackets.push(((i, j), self.elements[i].bracket(&self.elements[j])?));
            }
        }
        let coords =
            FieldCoordinates::spanning(self.elements.iter().chain(brackets.iter().map(|(_, b)| b)));
        let solver = self.span_solver(&coords);
        for ((i, j), b) in &brackets {
            if !self.solver_contains(&solver, &coords, b) {
                return Ok(Some((*i, *j)));
            }
        }
        Ok(None)
    }

    fn span_solver(&self, coords: &FieldCoordinates) -> SpanKind {
        match self.ground {
            Ground::Complex => SpanKind::Complex(SpanSolver::new(
                &self.elements.iter().map(|e| coords.complex_vector(e).unwrap()).collect::<Vec<_>>(),
                coords.len(),
            )),
            Ground::Real => SpanKind::Real(SpanSolver::new(
                &self.elements.iter().map(|e| coords.real_vector(e).unwrap()).collect::<Vec<_>>(),
                2 * coords.len(),
            )),
        }
    }

    fn solver_contains(&self, s: &SpanKind, coords: &FieldCoordinates, f: &PolyVectorField) -> bool {
        match s {
            SpanKind::Complex(s) => coords.complex_vector(f).is_some_and(|v| s.contains(&v)),
            SpanKind::Real(s) => coords.real_vector(f).is_some_and(|v| s.contains(&v)),
        }
    }
}

enum SpanKind {
    Complex(SpanSolver<GaussRational>),
    Real(SpanSolver<Rational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolSolution {
    pub basis: LieAlgebraBasis,
    /// Whether every bracket of basis elements stays in the span. `false` usually
    /// means the degree cap truncated the algebra.
    pub closed: bool,
}

/// Real basis of `{ξ : deg ξ ≤ d, ξ tangent to M}`, in reduced row-echelon form over
/// the unknowns `(Re c, Im c)` of the coefficients in [`FieldCoordinates::full`] order.
pub fn solve_hol(m: &ManifoldSpec, degree_cap: u32) -> Result<HolSolution> {
    if degree_cap < 1 {
        return Err(Error::InvalidArgument("degree cap must be at least 1".into()));
    }
    let n = m.ambient_dim();
    let coords = FieldCoordinates::full(n, degree_cap);
    let subs = m.parameterization();
    let nv = m.residual_nvars();

    let substituted: HashMap<Monomial, MultiPoly> = monomials_up_to(n, degree_cap)
        .into_iter()
        .map(|mon| {
            let p = MultiPoly::term(mon.clone(), GaussRational::one()).substitute(&subs)?;
            Ok((mon, p))
        })
        .collect::<Result<_>>()?;

    // Column 2t holds the residual of the key-t monomial field, column 2t+1 of i times it.
    let mut rows: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Rational)> = Vec::new();
    for (t, (k, mon)) in coords.keys().iter().enumerate() {
        let mut subbed = vec![MultiPoly::zero(nv); n];
        subbed[*k] = substituted[mon].clone();
        let phi = m.pre_residual_substituted(&subbed)?;
        for (j, p) in phi.iter().enumerate() {
            for (rm, c) in p.terms() {
                let next = rows.len();
                let r = *rows.entry((j, rm.clone())).or_insert(next);
                if !c.re.is_zero() {
                    entries.push((r, 2 * t, c.re.clone()));
                }
                if !c.im.is_zero() {
                    entries.push((r, 2 * t + 1, -c.im.clone()));
                }
            }
        }
    }
    let cols = 2 * coords.len();
    let mut mat = Matrix::zeros(rows.len(), cols);
    for (r, c, v) in entries {
        mat.data[r][c] = v;
    }
    let kernel = mat.kernel();
    let elements = if kernel.is_empty() {
        Vec::new()
    } else {
        let (rref, pivots) = Matrix::from_rows(cols, kernel).rref();
        rref.data[..pivots.len()].iter().map(|v| coords.field_from_real(n, v)).collect()
    };
    for f in &elements {
        debug_assert!(m.is_tangent(f)?);
    }
    let basis = LieAlgebraBasis::new(Ground::Real, n, degree_cap, elements)?;
    let closed = basis.closure_failure()?.is_none();
    if !closed {
        log_warning(&format!(
            "solution space at degree cap {degree_cap} is not bracket-closed; the cap may truncate hol(M)"
        ));
    }
    Ok(HolSolution { basis, closed })
}

fn log_warning(msg: &str) {
    eprintln!("warning: {msg}");
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilization {
    pub degree_cap: u32,
    pub dim_at_cap: usize,
    pub dim_at_next: usize,
    pub grew: bool,
}

/// Re-solves at `d + 1` and reports whether the dimension grew. A heuristic, not a
/// certificate that the true algebra has been reached.
pub fn stabilization(m: &ManifoldSpec, degree_cap: u32) -> Result<Stabilization> {
    let a = solve_hol(m, degree_cap)?.basis.len();
    let b = solve_hol(m, degree_cap + 1)?.basis.len();
    Ok(Stabilization { degree_cap, dim_at_cap: a, dim_at_next: b, grew: b > a })
}

/// Complex span of a real basis, keeping the first ℂ-independent elements in order.
/// The flag reports whether the real span is totally real (`dim_ℂ = dim_ℝ`).
pub fn complexify(b: &LieAlgebraBasis) -> Result<(LieAlgebraBasis, bool)> {
    if b.is_empty() {
        return Err(Error::Empty("basis to complexify"));
    }
    let coords = FieldCoordinates::spanning(&b.elements);
    let mut kept: Vec<Vec<GaussRational>> = Vec::new();
    let mut elements = Vec::new();
    for f in &b.elements {
        let v = coords.complex_vector(f).unwrap();
        let mut trial = kept.clone();
        trial.push(v);
        if Matrix::from_rows(coords.len(), trial.clone()).rank() == trial.len() {
            kept = trial;
            elements.push(f.clone());
        }
    }
    let totally_real = b.ground == Ground::Real && elements.len() == b.len();
    Ok((LieAlgebraBasis::new(Ground::Complex, b.ambient_dim, b.degree_cap, elements)?, totally_real))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvableWitness {
    pub constants_present: bool,
    pub euler_present: bool,
}

impl SolvableWitness {
    pub fn passes(&self) -> bool {
        self.constants_present && self.euler_present
    }
}

/// Whether `𝔰 = {(α + cz)∂z}` lies in the span of `l`.
pub fn check_property_p(l: &LieAlgebraBasis) -> SolvableWitness {
    let n = l.ambient_dim;
    SolvableWitness {
        constants_present: (0..n).all(|j| l.contains(&PolyVectorField::coordinate(n, j))),
        euler_present: l.contains(&PolyVectorField::euler(n)),
    }
}

/// Whether the values of the basis fields at `a` span the ambient space over ℂ.
pub fn check_semi_homogeneous(m: &ManifoldSpec, b: &LieAlgebraBasis, a: &[GaussRational]) -> Result<bool> {
    if !m.contains(a) {
        return Err(Error::NotOnManifold);
    }
    let n = m.ambient_dim();
    if b.is_empty() {
        return Ok(n == 0);
    }
    let values = b.elements.iter().map(|f| f.evaluate(a)).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(n, values).rank() == n)
}
