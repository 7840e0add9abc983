//! Writing a birational map as g = q⁻¹p and reading it back.

use crbirat::birat::{orbit_consistency, pullback_pq, reconstruct_from_pq, RationalMap, RationalMapQP};
use crbirat::exact::{MultiPoly, RatFunc};
use crbirat::manifolds::{ManifoldSpec, QuadricSpec};

fn main() -> crbirat::Result<()> {
    let z = MultiPoly::var(2, 0);
    let w = MultiPoly::var(2, 1);
    let minus_one = MultiPoly::one(2).neg();

    // (z, w) ↦ (z/w, −1/w) preserves Im w = |z|²
    let g = RationalMap::new(vec![RatFunc::new(z.clone(), w.clone())?, RatFunc::new(minus_one.clone(), w.clone())?])?;
    let (p, q) = pullback_pq(&g)?;
    println!("p = {p:?}");
    println!("q = {:?}", q.to_rows());
    println!("det q = {}", q.det()?);

    let back = reconstruct_from_pq(p, q, 0)?;
    println!("q^-1 p == g: {}", back.map()?.equivalent(&g));

    let inverse = RationalMap::new(vec![RatFunc::new(z.neg(), w.clone())?, RatFunc::new(minus_one, w)?])?;
    let qp = RationalMapQP::from_map(&g, Some(&inverse))?;
    let heis = ManifoldSpec::Quadric(QuadricSpec::heisenberg());
    let report = orbit_consistency(&heis, &qp, 10, 3)?;
    println!("orbit check: {} of {} points map into M", report.checked - report.witnesses.len(), report.checked);
    Ok(())
}
