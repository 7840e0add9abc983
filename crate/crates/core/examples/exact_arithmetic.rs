//! Gaussian rationals, polynomial gcds, reduced rational functions and the adjugate.

use crbirat::exact::{gcd, GaussRational, Matrix, MultiPoly, PolyMatrix, RatFunc};

fn main() -> crbirat::Result<()> {
    let a = GaussRational::from_ints(3, -4);
    let b = GaussRational::from_ints(1, 2);
    println!("a = {a}, b = {b}");
    println!("a/b = {}, |a|^2 = {}", (&a * &b.inv().unwrap()), a.norm_sqr());

    let z = MultiPoly::var(2, 0);
    let w = MultiPoly::var(2, 1);
    let one = MultiPoly::one(2);
    let f = z.mul(&z).sub(&w.mul(&w));
    let h = z.sub(&w).mul(&z.add(&one));
    println!("gcd({f}, {h}) = {}", gcd(&f, &h));

    // (z² − w²) / ((z − w)(z + 1)) reduces to (z + w)/(z + 1)
    let r = RatFunc::new(f, h)?;
    println!("reduced: ({}) / ({})", r.num(), r.den());

    let m = PolyMatrix::from_rows(2, vec![vec![z.clone(), w.clone()], vec![one.neg(), z.clone()]])?;
    let (adj, det) = m.adjugate_det()?;
    println!("det = {det}");
    println!("m * adj(m) == det * 1: {}", m.mul(&adj)? == PolyMatrix::identity(2, 2).scale(&det));

    let c = Matrix::from_rows(3, vec![
        vec![GaussRational::from_int(1), GaussRational::from_int(2), GaussRational::i()],
        vec![GaussRational::from_int(2), GaussRational::from_int(4), GaussRational::from_ints(0, 2)],
    ]);
    println!("rank {} with {} kernel vectors", c.rank(), c.kernel().len());
    Ok(())
}
