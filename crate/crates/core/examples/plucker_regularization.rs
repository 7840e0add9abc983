//! φ(a) = isotropy subalgebra at a, as a point of a Grassmannian in Plücker coordinates,
//! and the linear action τ(ν(g)) that makes φ equivariant.

use crbirat::birat::{RationalMap, RationalMapQP};
use crbirat::exact::{GaussRational, MultiPoly, RatFunc};
use crbirat::holsolver::{complexify, solve_hol, Ground, LieAlgebraBasis};
use crbirat::liestruct::pushforward_matrix;
use crbirat::manifolds::{ManifoldSpec, QuadricSpec};
use crbirat::regularizer::{plucker_point, regular_samples, tau_apply, verify_intertwining};
use crbirat::vfields::PolyVectorField;

fn main() -> crbirat::Result<()> {
    // sl2 acting on ℂ by ∂z, z∂z, z²∂z
    let z = MultiPoly::var(1, 0);
    let sl2 = LieAlgebraBasis::new(
        Ground::Complex,
        1,
        2,
        (0..3).map(|d| PolyVectorField::single(1, 0, z.pow(d))).collect(),
    )?;
    let a = GaussRational::from_int(3);
    println!("phi(3) = {:?}", plucker_point(&sl2, std::slice::from_ref(&a))?.coords());

    let recip = RationalMap::new(vec![RatFunc::new(MultiPoly::one(1).neg(), z)?])?;
    let g = RationalMapQP::from_map(&recip, Some(&recip))?;
    let nu = pushforward_matrix(&sl2, &g, 0)?;
    let moved = tau_apply(&nu, &plucker_point(&sl2, std::slice::from_ref(&a))?)?;
    let image = g.eval(&[a])?.expect("3 is regular");
    println!("tau(nu) phi(3) = {:?}", moved.coords());
    println!("phi(g(3))      = {:?}", plucker_point(&sl2, &image)?.coords());

    let heis = ManifoldSpec::Quadric(QuadricSpec::heisenberg());
    let (l, _) = complexify(&solve_hol(&heis, 2)?.basis)?;
    let (zz, ww) = (MultiPoly::var(2, 0), MultiPoly::var(2, 1));
    let inv = |sign: &MultiPoly| -> crbirat::Result<RationalMap> {
        RationalMap::new(vec![RatFunc::new(sign.clone(), ww.clone())?, RatFunc::new(MultiPoly::one(2).neg(), ww.clone())?])
    };
    let g = RationalMapQP::from_map(&inv(&zz)?, Some(&inv(&zz.neg())?))?;
    let pts = regular_samples(&g, 5, 9)?;
    println!("Heisenberg phi lands in P^{}", plucker_point(&l, &pts[0])?.projective_dim());
    let report = verify_intertwining(&l, &g, &pts, 9)?;
    println!("inversion intertwines on {} points: {}", report.checked, report.all_equal);
    Ok(())
}
