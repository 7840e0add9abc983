use crbirat::holsolver::{check_property_p, complexify, solve_hol};
use crbirat::liestruct::grade_by_euler;
use crbirat::manifolds::{ManifoldSpec, TubeSpec};

fn main() -> crbirat::Result<()> {
    // x1² + x2² − x3² = 0 over ℝ³, tubed into ℂ³
    let tube = TubeSpec::hyperquadric(2, 1)?;
    println!("rho = {}", tube.rho());
    let report = tube.check_conditions(8, 1)?;
    println!("{report:?}");

    let m = ManifoldSpec::Tube(tube);
    for p in m.sample_points(3, 5)? {
        println!("on M: {p:?}");
    }

    let sol = solve_hol(&m, 2)?;
    println!("dim_R = {}", sol.basis.len());
    let (l, _) = complexify(&sol.basis)?;
    println!("property P: {:?}", check_property_p(&l));
    for (m, part) in grade_by_euler(&l)?.parts {
        println!("l^{m}: {} fields", part.len());
    }
    Ok(())
}
