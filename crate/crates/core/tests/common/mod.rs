#![allow(dead_code)]

pub mod oracle;

use crbirat::birat::{RationalMap, RationalMapQP};
use crbirat::exact::{GaussRational, MultiPoly, PolyMatrix, RatFunc};
use crbirat::holsolver::{complexify, solve_hol, LieAlgebraBasis};
use crbirat::manifolds::{HermitianFormTuple, ManifoldSpec, QuadricSpec, TubeSpec};
use crbirat::vfields::PolyVectorField;

pub fn g(n: i64) -> GaussRational {
    GaussRational::from_int(n)
}

pub fn gi(a: i64, b: i64) -> GaussRational {
    GaussRational::from_ints(a, b)
}

pub fn heisenberg() -> ManifoldSpec {
    ManifoldSpec::Quadric(QuadricSpec::heisenberg())
}

pub fn sphere(n: usize) -> ManifoldSpec {
    ManifoldSpec::Quadric(QuadricSpec::new(HermitianFormTuple::sphere(n)))
}

pub fn light_cone() -> ManifoldSpec {
    ManifoldSpec::Tube(TubeSpec::hyperquadric(2, 1).unwrap())
}

pub fn complex_algebra(m: &ManifoldSpec, d: u32) -> LieAlgebraBasis {
    complexify(&solve_hol(m, d).unwrap().basis).unwrap().0
}

pub fn sl2() -> LieAlgebraBasis {
    let f = |d| PolyVectorField::single(1, 0, MultiPoly::var(1, 0).pow(d));
    LieAlgebraBasis::new(crbirat::holsolver::Ground::Complex, 1, 2, vec![f(0), f(1), f(2)]).unwrap()
}

fn var(i: usize) -> MultiPoly {
    MultiPoly::var(2, i)
}

fn rf(num: MultiPoly, den: MultiPoly) -> RatFunc {
    RatFunc::new(num, den).unwrap()
}

fn cst(n: usize, c: GaussRational) -> MultiPoly {
    MultiPoly::constant(n, c)
}

/// `(z, w) ↦ (z/w, −1/w)`.
pub fn inversion_map() -> RationalMap {
    RationalMap::new(vec![rf(var(0), var(1)), rf(MultiPoly::one(2).neg(), var(1))]).unwrap()
}

pub fn inversion() -> RationalMapQP {
    let inv = RationalMap::new(vec![rf(var(0).neg(), var(1)), rf(MultiPoly::one(2).neg(), var(1))]).unwrap();
    RationalMapQP::from_map(&inversion_map(), Some(&inv)).unwrap()
}

/// `(z, w) ↦ (z + α, w + 2i·conj(α)·z + β)` with `Im β = |α|²`.
pub fn heisenberg_affine_map(alpha: &GaussRational, s: &GaussRational) -> RationalMap {
    let beta = GaussRational::new(s.re.clone(), alpha.norm_sqr());
    let two_i_ca = &GaussRational::from_ints(0, 2) * &alpha.conj();
    RationalMap::from_polys(vec![
        var(0).add(&cst(2, alpha.clone())),
        var(1).add(&var(0).scale(&two_i_ca)).add(&cst(2, beta)),
    ])
    .unwrap()
}

pub fn heisenberg_affine(alpha: &GaussRational, s: &GaussRational) -> RationalMapQP {
    let fwd = heisenberg_affine_map(alpha, s);
    let back = heisenberg_affine_map(&-alpha, &-s);
    RationalMapQP::from_map(&fwd, Some(&back)).unwrap()
}

pub fn translation(beta: &[GaussRational]) -> RationalMapQP {
    let minus: Vec<GaussRational> = beta.iter().map(|b| -b).collect();
    RationalMapQP::from_map(&RationalMap::translation(beta), Some(&RationalMap::translation(&minus))).unwrap()
}

/// `(z, w) ↦ (tz, t²w)`.
pub fn dilation(t: &GaussRational) -> RationalMapQP {
    let m = |t: &GaussRational| {
        RationalMap::from_polys(vec![var(0).scale(t), var(1).scale(&(t * t))]).unwrap()
    };
    RationalMapQP::from_map(&m(t), Some(&m(&t.inv().unwrap()))).unwrap()
}

/// `z ↦ −1/z` on ℂ.
pub fn sl2_recip() -> RationalMapQP {
    let z = MultiPoly::var(1, 0);
    let m = RationalMap::new(vec![RatFunc::new(MultiPoly::one(1).neg(), z).unwrap()]).unwrap();
    RationalMapQP::from_map(&m, Some(&m)).unwrap()
}

/// Square polynomial matrices in the 4 entries of `z ∈ ℂ^{2×2}` (row-major).
pub struct Mat2 {
    pub e: [[MultiPoly; 2]; 2],
}

impl Mat2 {
    pub fn z() -> Self {
        Mat2 { e: [[MultiPoly::var(4, 0), MultiPoly::var(4, 1)], [MultiPoly::var(4, 2), MultiPoly::var(4, 3)]] }
    }

    pub fn constant(b: [[i64; 2]; 2]) -> Self {
        Mat2 { e: b.map(|r| r.map(|v| cst(4, g(v)))) }
    }

    pub fn identity() -> Self {
        Self::constant([[1, 0], [0, 1]])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let e = std::array::from_fn(|i| {
            std::array::from_fn(|j| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j])))
        });
        Mat2 { e }
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2 { e: std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].sub(&o.e[i][j]))) }
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2 { e: std::array::from_fn(|i| std::array::from_fn(|j| self.e[i][j].add(&o.e[i][j]))) }
    }

    pub fn det(&self) -> MultiPoly {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    pub fn adj(&self) -> Mat2 {
        Mat2 {
            e: [
                [self.e[1][1].clone(), self.e[0][1].neg()],
                [self.e[1][0].neg(), self.e[0][0].clone()],
            ],
        }
    }

    pub fn flat(&self) -> Vec<MultiPoly> {
        self.e.iter().flatten().cloned().collect()
    }

    /// Unit matrix `E_kl`.
    pub fn unit(k: usize, l: usize) -> Self {
        let mut b = [[0; 2]; 2];
        b[k][l] = 1;
        Self::constant(b)
    }
}

/// `g(z) = (1 − zb)⁻¹z` on `ℂ^{2×2}` and its inverse `(1 + wb)⁻¹w`.
pub fn matrix_mobius(b: [[i64; 2]; 2]) -> (RationalMap, RationalMap) {
    let build = |sign: i64| {
        let z = Mat2::z();
        let zb = z.mul(&Mat2::constant(b));
        let a = if sign < 0 { Mat2::identity().sub(&zb) } else { Mat2::identity().add(&zb) };
        let det = a.det();
        let num = a.adj().mul(&z);
        RationalMap::new(num.flat().into_iter().map(|c| RatFunc::new(c, det.clone()).unwrap()).collect()).unwrap()
    };
    (build(-1), build(1))
}

/// The 4×4 matrix of `α ↦ (1 − zb)α(1 − bz)` on flattened `α`.
pub fn matrix_mobius_expected_q(b: [[i64; 2]; 2]) -> PolyMatrix {
    let z = Mat2::z();
    let bm = Mat2::constant(b);
    let left = Mat2::identity().sub(&z.mul(&bm));
    let right = Mat2::identity().sub(&bm.mul(&z));
    let mut q = PolyMatrix::zeros(4, 4, 4);
    for k in 0..2 {
        for l in 0..2 {
            let col = left.mul(&Mat2::unit(k, l)).mul(&right).flat();
            for (r, v) in col.into_iter().enumerate() {
                q.set(r, 2 * k + l, v);
            }
        }
    }
    q
}

pub fn matrix_mobius_expected_p(b: [[i64; 2]; 2]) -> Vec<MultiPoly> {
    let z = Mat2::z();
    z.sub(&z.mul(&Mat2::constant(b)).mul(&z)).flat()
}

pub fn matrix_mobius_expected_det(b: [[i64; 2]; 2]) -> MultiPoly {
    let z = Mat2::z();
    let bm = Mat2::constant(b);
    let d1 = Mat2::identity().sub(&z.mul(&bm)).det();
    let d2 = Mat2::identity().sub(&bm.mul(&z)).det();
    d1.pow(2).mul(&d2.pow(2))
}
