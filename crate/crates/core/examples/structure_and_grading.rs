use crbirat::exact::GaussRational;
use crbirat::holsolver::{complexify, solve_hol};
use crbirat::liestruct::{grade_by_euler, isotropy_subalgebra, structure_constants};
use crbirat::manifolds::{ManifoldSpec, QuadricSpec};

fn main() -> crbirat::Result<()> {
    let m = ManifoldSpec::Quadric(QuadricSpec::heisenberg());
    let (l, _) = complexify(&solve_hol(&m, 2)?.basis)?;

    let sc = structure_constants(&l)?;
    println!("antisymmetric {}, Jacobi {}", sc.is_antisymmetric(), sc.satisfies_jacobi());

    let graded = grade_by_euler(&l)?;
    for (weight, part) in &graded.parts {
        println!("l^{weight}:");
        for f in part {
            println!("  {}", f.display());
        }
    }

    let origin = [GaussRational::zero(), GaussRational::zero()];
    let iso = isotropy_subalgebra(&l, &origin)?;
    println!("isotropy at 0 has dimension {}", iso.elements.len());
    Ok(())
}
