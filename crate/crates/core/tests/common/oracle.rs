#![allow(clippy::needless_range_loop)]

use crbirat::exact::{monomials_up_to, rat_int, GaussRational, Matrix, Rational};
use crbirat::manifolds::ManifoldSpec;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_rat(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_integer(rng.gen_range(-4i64..=4).into())
}

fn mono_value(e: &[u32], point: &[GaussRational]) -> GaussRational {
    e.iter().zip(point).fold(GaussRational::one(), |acc, (&k, v)| &acc * &v.pow(k))
}

/// Dimension of hol(M) up to degree `d`, from tangency imposed at many random points of M.
pub fn pointwise_dimension(m: &ManifoldSpec, d: u32, seed: u64) -> usize {
    let n = m.ambient_dim();
    let mons = monomials_up_to(n, d);
    let keys: Vec<(usize, &[u32])> =
        (0..n).flat_map(|k| mons.iter().map(move |mm| (k, mm.0.as_slice()))).collect();
    let unknowns = 2 * keys.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let npoints = unknowns + 12;
    match m {
        ManifoldSpec::Quadric(q) => {
            let nz = q.n();
            for _ in 0..npoints {
                let z: Vec<GaussRational> =
                    (0..nz).map(|_| GaussRational::new(small_rat(&mut rng), small_rat(&mut rng))).collect();
                let u: Vec<Rational> = (0..q.k()).map(|_| small_rat(&mut rng)).collect();
                let mut point = z.clone();
                for (j, uj) in u.iter().enumerate() {
                    // h_j(z, z) = Σ conj(z_a) H_ab z_b, computed here from the matrices
                    let h = &q.form.matrices()[j];
                    let mut hv = GaussRational::zero();
                    for a in 0..nz {
                        for b in 0..nz {
                            hv += &(&(&z[a].conj() * &h.data[a][b]) * &z[b]);
                        }
                    }
                    point.push(GaussRational::new(uj.clone(), hv.re));
                }
                for j in 0..q.k() {
                    let h = &q.form.matrices()[j];
                    let mut row = vec![Rational::from_integer(0.into()); unknowns];
                    for (t, (k, e)) in keys.iter().enumerate() {
                        let v = mono_value(e, &point);
                        for (col, c) in [(2 * t, GaussRational::one()), (2 * t + 1, GaussRational::i())] {
                            let cv = &c * &v;
                            let val = if *k >= nz {
                                if k - nz == j { cv.im.clone() } else { Rational::from_integer(0.into()) }
                            } else {
                                let mut s = GaussRational::zero();
                                for a in 0..nz {
                                    s += &(&(&z[a].conj() * &h.data[a][*k]) * &cv);
                                }
                                -(s.re * rat_int(2))
                            };
                            row[col] = val;
                        }
                    }
                    rows.push(row);
                }
            }
        }
        ManifoldSpec::Tube(t) => {
            let pts = m.sample_points(npoints, seed).unwrap();
            for p in pts {
                let x: Vec<GaussRational> = p.iter().map(|c| GaussRational::real(c.re.clone())).collect();
                let grad: Vec<Rational> =
                    (0..n).map(|j| t.rho().derivative(j).unwrap().eval(&x).unwrap().re).collect();
                let mut row = vec![Rational::from_integer(0.into()); unknowns];
                for (tk, (k, e)) in keys.iter().enumerate() {
                    let v = mono_value(e, &p);
                    row[2 * tk] = &grad[*k] * &v.re;
                    row[2 * tk + 1] = -(&grad[*k] * &v.im);
                }
                rows.push(row);
            }
        }
    }
    unknowns - Matrix::from_rows(unknowns, rows).rank()
}
