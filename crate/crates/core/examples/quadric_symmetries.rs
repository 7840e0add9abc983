//! Infinitesimal automorphisms of the Heisenberg quadric Im w = |z|² and of the sphere quadric in ℂ³.

use crbirat::holsolver::{complexify, solve_hol, stabilization};
use crbirat::manifolds::{HermitianFormTuple, ManifoldSpec, QuadricSpec};

fn main() -> crbirat::Result<()> {
    let heis = ManifoldSpec::Quadric(QuadricSpec::heisenberg());
    let sol = solve_hol(&heis, 2)?;
    println!("Heisenberg: dim_R = {}", sol.basis.len());
    for f in &sol.basis.elements {
        println!("  {}", f.display());
    }
    let st = stabilization(&heis, 2)?;
    println!("cap {} -> {}, cap {} -> {}", st.degree_cap, st.dim_at_cap, st.degree_cap + 1, st.dim_at_next);

    let (l, totally_real) = complexify(&sol.basis)?;
    println!("dim_C = {}, totally real: {totally_real}", l.len());

    let sphere = ManifoldSpec::Quadric(QuadricSpec::new(HermitianFormTuple::sphere(2)));
    let sol = solve_hol(&sphere, 2)?;
    println!("Im w = |z1|^2 + |z2|^2: dim_R = {}", sol.basis.len());
    Ok(())
}
