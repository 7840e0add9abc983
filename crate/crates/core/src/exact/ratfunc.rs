//! Multivariate gcd and reduced rational functions over ℚ(i).

use std::fmt;

use serde::Serialize;

use super::poly::{Monomial, MultiPoly};
use super::scalar::GaussRational;
use crate::error::{Error, Result};

fn main_var(a: &MultiPoly, b: &MultiPoly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

/// Greatest common divisor, normalized to leading coefficient 1.
///
/// Recursive primitive polynomial remainder sequence: the largest-index variable
/// present is the main variable, coefficients live in the remaining ones.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    debug_assert_eq!(a.nvars(), b.nvars());
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.nvars());
    }
    if a == b {
        return a.monic();
    }
    let v = main_var(a, b).expect("non-constant input has a variable");
    if a.degree_in(v) == 0 {
        return gcd(a, &content(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&content(a, v), b);
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    let g = loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            break g;
        }
        if r.degree_in(v) == 0 {
            break MultiPoly::one(a.nvars());
        }
        f = g;
        g = primitive_part(&r, v);
    };
    c.mul(&primitive_part(&g, v)).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &MultiPoly, v: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.nvars());
    for c in p.coefficients_in(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c);
        if acc.is_constant() {
            return MultiPoly::one(p.nvars());
        }
    }
    acc
}

pub fn primitive_part(p: &MultiPoly, v: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, v);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `f` by `g` in variable `v`.
pub fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, v: usize) -> MultiPoly {
    let dg = g.degree_in(v);
    let lcg = g.coefficients_in(v).pop().expect("nonzero");
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let d = r.degree_in(v);
        let lcr = r.coefficients_in(v).pop().unwrap();
        let mut shift = Monomial::one(f.nvars());
        shift.0[v] = d - dg;
        let t = lcr.mul_monomial(&shift, &GaussRational::one()).mul(g);
        r = lcg.mul(&r).sub(&t);
    }
    r
}

pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero(a.nvars());
    }
    let g = gcd(a, b);
    a.div_exact(&g).expect("gcd divides").mul(b).monic()
}

/// A reduced quotient `num / den` with `gcd(num, den) = 1` and monic `den`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.nvars() != den.nvars() {
            return Err(Error::DimensionMismatch { expected: den.nvars(), found: num.nvars() });
        }
        if num.is_zero() {
            return Ok(RatFunc::from_poly(MultiPoly::zero(den.nvars())));
        }
        let g = gcd(&num, &den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = d.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let nv = p.nvars();
        RatFunc { num: p, den: MultiPoly::one(nv) }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_constant() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero den");
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&o.den)).expect("nonzero den")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero den")
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn derivative(&self, var: usize) -> Result<RatFunc> {
        let dn = self.num.derivative(var)?;
        let dd = self.den.derivative(var)?;
        RatFunc::new(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    /// Value at a point, or `None` on the pole set.
    pub fn eval(&self, point: &[GaussRational]) -> Result<Option<GaussRational>> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(&self.num.eval(point)? / &d))
    }

    /// Substitutes rational functions for the variables.
    pub fn compose(&self, subs: &[RatFunc]) -> Result<RatFunc> {
        let (common, lifted) = common_denominator(subs)?;
        let (n, dn) = homogenize_substitute(&self.num, &lifted, &common)?;
        let (d, dd) = homogenize_substitute(&self.den, &lifted, &common)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // n / L^dn  ÷  d / L^dd
        if dd >= dn {
            RatFunc::new(n.mul(&common.pow(dd - dn)), d)
        } else {
            RatFunc::new(n, d.mul(&common.pow(dn - dd)))
        }
    }
}

/// Writes each `subs[j]` as `lifted[j] / common` over one common denominator.
fn common_denominator(subs: &[RatFunc]) -> Result<(MultiPoly, Vec<MultiPoly>)> {
    let nv = subs.first().map(RatFunc::nvars).ok_or(Error::Empty("substitution"))?;
    let mut common = MultiPoly::one(nv);
    for s in subs {
        if !s.den.is_constant() {
            common = lcm(&common, &s.den);
        }
    }
    let lifted = subs
        .iter()
        .map(|s| s.num.mul(&common.div_exact(&s.den).expect("lcm divisible")))
        .collect();
    Ok((common, lifted))
}

/// `p(lifted / common) = result / common^deg(p)`.
fn homogenize_substitute(
    p: &MultiPoly,
    lifted: &[MultiPoly],
    common: &MultiPoly,
) -> Result<(MultiPoly, u32)> {
    let deg = p.degree().unwrap_or(0);
    let target = common.nvars();
    let mut out = MultiPoly::zero(target);
    let mut common_pows = vec![MultiPoly::one(target)];
    for _ in 0..deg {
        let next = common_pows.last().unwrap().mul(common);
        common_pows.push(next);
    }
    for (m, c) in p.terms() {
        let mut t = MultiPoly::constant(target, c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&lifted[v].pow(e));
            }
        }
        t = t.mul(&common_pows[(deg - m.degree()) as usize]);
        out = out.add(&t);
    }
    Ok((out, deg))
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}
