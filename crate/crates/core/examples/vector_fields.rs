use crbirat::exact::{GaussRational, MultiPoly};
use crbirat::vfields::PolyVectorField;

fn main() -> crbirat::Result<()> {
    let n = 2;
    let z = MultiPoly::var(n, 0);
    let w = MultiPoly::var(n, 1);

    let dz = PolyVectorField::coordinate(n, 0);
    let euler = PolyVectorField::euler(n);
    let x = PolyVectorField::new(vec![z.mul(&z), z.mul(&w).scale(&GaussRational::from_ints(0, 2))])?;

    println!("ξ = {}", x.display());
    println!("[∂z, ξ] = {}", dz.bracket(&x)?.display());
    println!("[E, ξ] = {}", euler.bracket(&x)?.display());

    let mixed = x.add(&dz).add(&euler);
    for (weight, part) in mixed.homogeneous_components() {
        println!("weight {weight}: {}", part.display());
    }
    println!("ξ at (1, i) = {:?}", x.evaluate(&[GaussRational::from_int(1), GaussRational::i()])?);
    Ok(())
}
