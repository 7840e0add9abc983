//! Sparse multivariate polynomials over ℚ(i).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{GaussRational, Rational};
use crate::error::{Error, Result};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors in `nvars` variables with total degree `<= max_degree`,
/// in ascending graded-lexicographic order.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut layer = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill_degree(&mut layer, &mut cur, 0, d);
        layer.sort();
        out.extend(layer);
    }
    out
}

fn fill_degree(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if pos == cur.len() - 1 {
        cur[pos] = left;
        out.push(Monomial(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in 0..=left {
        cur[pos] = e;
        fill_degree(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

/// A polynomial in `nvars` variables with Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussRational::one())
    }

    pub fn constant(nvars: usize, c: GaussRational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), GaussRational::one())
    }

    pub fn term(m: Monomial, c: GaussRational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { nvars, terms }
    }

    /// Builds from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms<I>(nvars: usize, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, GaussRational)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in it {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.len() });
            }
            p.add_term(Monomial(e), &c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussRational::zero)
    }

    /// Largest term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in one variable; 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussRational::is_real)
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        Ok(self.mul(other))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        let (small, large) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> MultiPoly {
        self.scale(&GaussRational::real(r.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Result<MultiPoly> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, &c.scale(&Rational::from_integer(e.into())));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[GaussRational]) -> Result<GaussRational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        // Cache powers per variable.
        let maxdeg: Vec<u32> = (0..self.nvars).map(|v| self.degree_in(v)).collect();
        let powers: Vec<Vec<GaussRational>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(GaussRational::one());
                for k in 1..=d as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[v][e as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Replaces variable `j` by `subs[j]`; the result lives in the ring of the substitutes.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: subs.len() });
        }
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        if let Some(bad) = subs.iter().find(|s| s.nvars != target) {
            return Err(Error::DimensionMismatch { expected: target, found: bad.nvars });
        }
        let mut pow_cache: Vec<Vec<MultiPoly>> =
            subs.iter().map(|s| vec![MultiPoly::one(s.nvars), s.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pow_cache[v].len() <= e as usize {
                    let next = pow_cache[v].last().unwrap().mul(&subs[v]);
                    pow_cache[v].push(next);
                }
                t = t.mul(&pow_cache[v][e as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Re-indexes into a ring with `nvars` variables: old variable `j` becomes `map[j]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (j, &k) in m.0.iter().enumerate() {
                e[map[j]] += k;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Sets the variable count of a zero polynomial, or checks it otherwise.
    pub fn with_nvars(self, nvars: usize) -> Result<MultiPoly> {
        if self.is_zero() {
            return Ok(MultiPoly::zero(nvars));
        }
        if self.nvars != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, found: self.nvars });
        }
        Ok(self)
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient-wise conjugate.
    pub fn conj(&self) -> MultiPoly {
        self.map_coeffs(|c| c.conj())
    }

    /// Coefficient-wise real part. Equals `Re p` when all variables are real.
    pub fn re_part(&self) -> MultiPoly {
        self.map_coeffs(|c| GaussRational::real(c.re.clone()))
    }

    /// Coefficient-wise imaginary part. Equals `Im p` when all variables are real.
    pub fn im_part(&self) -> MultiPoly {
        self.map_coeffs(|c| GaussRational::real(c.im.clone()))
    }

    pub fn map_coeffs<F: Fn(&GaussRational) -> GaussRational>(&self, f: F) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Splits by powers of `var`: entry `k` is the coefficient of `var^k` (free of `var`).
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[k].add_term(m2, c);
        }
        out
    }

    /// Multiplies every coefficient so the leading coefficient becomes 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Multivariate division by a single divisor in graded-lex order.
    /// Returns `(quotient, remainder)` with `self = quotient·divisor + remainder`.
    pub fn div_rem(&self, divisor: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
        self.check_same(divisor)?;
        let (lm, lc) = match divisor.leading() {
            None => return Err(Error::ZeroDenominator),
            Some((m, c)) => (m.clone(), c.clone()),
        };
        let lc_inv = lc.inv().expect("nonzero");
        let mut p = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        let mut r = MultiPoly::zero(self.nvars);
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c * &lc_inv;
                for (dm, dc) in &divisor.terms {
                    p.add_term(dm.mul(&qm), &-(dc * &qc));
                }
                q.add_term(qm, &qc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, &c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient when `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Remainder of `self` after repeatedly replacing `var²` using `rho = 0`.
    ///
    /// `rho` must have degree exactly 2 in `var` with a nonzero constant coefficient of `var²`.
    /// The result has degree < 2 in `var` and differs from `self` by a multiple of `rho`.
    pub fn reduce_mod(&self, rho: &MultiPoly, var: usize) -> Result<MultiPoly> {
        Ok(self.reduce_mod_with_quotient(rho, var)?.1)
    }

    /// Like [`reduce_mod`](Self::reduce_mod) but also returns the quotient
    /// `c` with `self = c·rho + remainder`.
    pub fn reduce_mod_with_quotient(
        &self,
        rho: &MultiPoly,
        var: usize,
    ) -> Result<(MultiPoly, MultiPoly)> {
        self.check_same(rho)?;
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        let parts = rho.coefficients_in(var);
        if parts.len() != 3 {
            return Err(Error::NotMonicReducible {
                var,
                reason: format!("degree {} in the variable, expected 2", parts.len() - 1),
            });
        }
        if !parts[2].is_constant() || parts[2].is_zero() {
            return Err(Error::NotMonicReducible {
                var,
                reason: "leading coefficient is not a nonzero constant".into(),
            });
        }
        let lead_inv = parts[2].constant_term().inv().expect("nonzero");
        let mut quotient = MultiPoly::zero(self.nvars);
        let mut rest = self.clone();
        loop {
            let d = rest.degree_in(var);
            if d < 2 {
                return Ok((quotient, rest));
            }
            let top = rest.coefficients_in(var).pop().unwrap();
            let mut shift = Monomial::one(self.nvars);
            shift.0[var] = d - 2;
            let factor = top.mul_monomial(&shift, &lead_inv);
            rest = rest.sub(&factor.mul(rho));
            quotient = quotient.add(&factor);
        }
    }

    /// Human-readable rendering with variables named by `names`.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                let name = names.get(v).map(|s| s.to_string()).unwrap_or(format!("x{v}"));
                mono.push_str(&name);
                if e > 1 {
                    mono.push_str(&format!("^{e}"));
                }
            }
            if mono.is_empty() {
                parts.push(format!("{c}"));
            } else if c.is_one() {
                parts.push(mono);
            } else {
                parts.push(format!("{c}*{mono}"));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    c: GaussRational,
    e: Vec<u32>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr { c: c.clone(), e: m.0.clone() })
            .collect();
        v.serialize(s)
    }
}

/// The variable count of a deserialized zero polynomial is 0; containers fix it
/// with [`MultiPoly::with_nvars`].
impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let nvars = v.first().map(|t| t.e.len()).unwrap_or(0);
        MultiPoly::from_terms(nvars, v.into_iter().map(|t| (t.e, t.c))).map_err(D::Error::custom)
    }
}
