//! Acceptance run: one PASS/FAIL line per criterion, with the time limit it was held to.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::oracle::pointwise_dimension;
use common::*;
use crbirat::birat::{pullback_pq, reconstruct_from_pq, verify_derivative_identity, RationalMap, RationalMapQP};
use crbirat::exact::{GaussRational, Matrix, MultiPoly, RatFunc};
use crbirat::holsolver::{check_property_p, complexify, solve_hol, Ground, LieAlgebraBasis};
use crbirat::liestruct::{grade_by_euler, pushforward_matrix, structure_constants};
use crbirat::manifolds::ManifoldSpec;
use crbirat::regularizer::{plucker_point, regular_samples, verify_intertwining, PlueckerPoint};
use crbirat::vfields::PolyVectorField;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SEED: u64 = 20240601;
const INTERTWINING_POINTS: usize = 20;
const DERIVATIVE_POINTS: usize = 10;

type Outcome = Result<String, String>;
type Criterion = (u32, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn graded_dims(l: &LieAlgebraBasis) -> Result<Vec<(i64, usize)>, String> {
    Ok(grade_by_euler(l).map_err(err)?.dims().into_iter().collect())
}

fn real_dim(m: &ManifoldSpec, d: u32) -> Result<(usize, LieAlgebraBasis, bool), String> {
    let sol = solve_hol(m, d).map_err(err)?;
    ensure(sol.closed, || format!("degree {d} basis not closed under brackets"))?;
    let (l, tr) = complexify(&sol.basis).map_err(err)?;
    Ok((sol.basis.len(), l, tr))
}

fn criterion_1() -> Outcome {
    let m = heisenberg();
    let (d2, l, tr) = real_dim(&m, 2)?;
    let (d3, _, _) = real_dim(&m, 3)?;
    ensure(d2 == 8 && d3 == 8, || format!("dim_R {d2} at cap 2, {d3} at cap 3; expected 8, 8"))?;
    ensure(tr && l.len() == 8, || format!("complexification dim {} totally_real {tr}", l.len()))?;
    let dims = graded_dims(&l)?;
    ensure(dims == [(-1, 2), (0, 4), (1, 2)], || format!("grading {dims:?}"))?;
    Ok(format!("dim_R 8 (caps 2, 3), dim_C 8 totally real, grading {dims:?}"))
}

fn criterion_2() -> Outcome {
    let (d, l, tr) = real_dim(&light_cone(), 2)?;
    ensure(d == 10 && tr, || format!("dim_R {d}, totally_real {tr}; expected 10"))?;
    let dims = graded_dims(&l)?;
    ensure(dims == [(-1, 3), (0, 4), (1, 3)], || format!("grading {dims:?}"))?;
    let w = check_property_p(&l);
    ensure(w.passes(), || format!("property P witness {w:?}"))?;
    Ok(format!("dim_R 10, grading {dims:?}, property P holds"))
}

fn criterion_3() -> Outcome {
    let m = sphere(2);
    let (d, _, tr) = real_dim(&m, 2)?;
    let oracle = pointwise_dimension(&m, 2, SEED);
    ensure(d == 15 && oracle == 15 && tr, || format!("solver {d}, pointwise oracle {oracle}; expected 15"))?;
    Ok("dim_R 15, pointwise oracle agrees".into())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut b = [[0i64; 2]; 2];
    for v in b.iter_mut().flatten() {
        *v = rng.gen_range(-5..=5);
    }
    let (gm, _) = matrix_mobius(b);
    let (p, q) = pullback_pq(&gm).map_err(err)?;
    ensure(q == matrix_mobius_expected_q(b), || format!("q differs from (1 - zb)a(1 - bz) for b = {b:?}"))?;
    ensure(p == matrix_mobius_expected_p(b), || format!("p differs from z - zbz for b = {b:?}"))?;
    let det = q.det().map_err(err)?;
    ensure(det == matrix_mobius_expected_det(b), || format!("det q differs for b = {b:?}"))?;
    Ok(format!("q, p, det q exact for b = {b:?}"))
}

/// Maps of criterion 5 with the algebra their pushforwards act on.
fn roundtrip_maps() -> Vec<(String, RationalMap, RationalMapQP, LieAlgebraBasis)> {
    let heis = complex_algebra(&heisenberg(), 2);
    let mut out = Vec::new();
    for beta in [gi(3, -2), gi(-1, 5)] {
        let t = translation(std::slice::from_ref(&beta));
        out.push((format!("z + {beta}"), RationalMap::translation(&[beta]), t, sl2()));
    }
    for s in [g(1), g(-7)] {
        let t = translation(&[g(0), s.clone()]);
        out.push((format!("(z, w + {s})"), RationalMap::translation(&[g(0), s]), t, heis.clone()));
    }
    for (a, s) in [(gi(1, 0), g(2)), (gi(2, -1), g(-3)), (gi(0, 3), g(1))] {
        out.push((
            format!("affine alpha = {a}, Re beta = {s}"),
            heisenberg_affine_map(&a, &s),
            heisenberg_affine(&a, &s),
            heis.clone(),
        ));
    }
    out.push(("inversion".into(), inversion_map(), inversion(), heis));
    out
}

/// `q(a)·g′(a) = 1` with `g′` from the input map itself, at points of reg(g) where the input is defined.
fn derivative_oracle(gm: &RationalMap, qp: &RationalMapQP) -> Result<usize, String> {
    let jac = gm.jacobian().map_err(err)?;
    let n = gm.n();
    let mut checked = 0;
    for a in regular_samples(qp, 3 * DERIVATIVE_POINTS, SEED).map_err(err)? {
        let vals: Option<Vec<Vec<GaussRational>>> = jac
            .iter()
            .map(|row| row.iter().map(|f: &RatFunc| f.eval(&a).unwrap()).collect())
            .collect();
        let Some(vals) = vals else { continue };
        let ja = Matrix::from_rows(n, vals);
        ensure(qp.q().eval(&a).map_err(err)?.mul(&ja) == Matrix::identity(n), || format!("g' != q^-1 at {a:?}"))?;
        checked += 1;
        if checked == DERIVATIVE_POINTS {
            return Ok(checked);
        }
    }
    Err(format!("only {checked} regular points found"))
}

fn criterion_5() -> Outcome {
    let maps = roundtrip_maps();
    for (name, gm, _, _) in &maps {
        let (p, q) = pullback_pq(gm).map_err(err)?;
        let back = reconstruct_from_pq(p, q, SEED).map_err(|e| format!("{name}: {e}"))?;
        ensure(back.map().map_err(err)?.equivalent(gm), || format!("{name}: q^-1 p differs from g"))?;
        verify_derivative_identity(&back, SEED + 1).map_err(|e| format!("{name}: {e}"))?;
        derivative_oracle(gm, &back).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} maps roundtrip, g' = q^-1 at {DERIVATIVE_POINTS} points each", maps.len()))
}

fn intertwines(l: &LieAlgebraBasis, g: &RationalMapQP, name: &str, seed: u64) -> Result<(), String> {
    let pts = regular_samples(g, INTERTWINING_POINTS, seed).map_err(err)?;
    let rep = verify_intertwining(l, g, &pts, seed).map_err(|e| format!("{name}: {e}"))?;
    ensure(rep.all_equal && rep.checked == INTERTWINING_POINTS, || {
        format!("{name}: {} of {} points differ", rep.witnesses.len(), rep.checked)
    })
}

fn criterion_6() -> Outcome {
    let sl = sl2();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..INTERTWINING_POINTS {
        let a = GaussRational::from_ints(rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        let expected = PlueckerPoint::from_rows(vec![vec![&a * &a, -&a, g(1)]], 3).map_err(err)?;
        let got = plucker_point(&sl, std::slice::from_ref(&a)).map_err(err)?;
        ensure(got == expected, || format!("phi({a}) = {:?}", got.coords()))?;
    }
    intertwines(&sl, &translation(&[gi(2, 1)]), "z + 2 + i", SEED)?;
    intertwines(&sl, &sl2_recip(), "-1/z", SEED)?;

    let heis = complex_algebra(&heisenberg(), 2);
    let dim = plucker_point(&heis, &[g(1), gi(0, 1)]).map_err(err)?.projective_dim();
    ensure(dim == 27, || format!("Heisenberg phi lands in P^{dim}"))?;
    let maps = [
        ("(z, w + 3)", translation(&[g(0), g(3)])),
        ("affine alpha = 1 - i", heisenberg_affine(&gi(1, -1), &g(2))),
        ("dilation t = 2", dilation(&g(2))),
        ("dilation t = 1 + i", dilation(&gi(1, 1))),
        ("inversion", inversion()),
    ];
    for (name, m) in &maps {
        intertwines(&heis, m, name, SEED)?;
    }
    Ok(format!("sl2 [a^2:-a:1] and 2 maps, Heisenberg P^27 and {} maps on {INTERTWINING_POINTS} points", maps.len()))
}

fn random_field(rng: &mut ChaCha8Rng, n: usize) -> PolyVectorField {
    let mons = crbirat::exact::monomials_up_to(n, 2);
    let comps = (0..n)
        .map(|_| {
            mons.iter().fold(MultiPoly::zero(n), |acc, m| {
                let c = GaussRational::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                acc.add(&MultiPoly::term(m.clone(), c))
            })
        })
        .collect();
    PolyVectorField::new(comps).unwrap()
}

fn graded_closure(l: &LieAlgebraBasis) -> Result<usize, String> {
    let parts = grade_by_euler(l).map_err(err)?.parts;
    let spans: BTreeMap<i64, LieAlgebraBasis> = parts
        .iter()
        .map(|(&m, v)| (m, LieAlgebraBasis::new(Ground::Complex, l.ambient_dim, l.degree_cap, v.clone()).unwrap()))
        .collect();
    let mut pairs = 0;
    for (&m, a) in &parts {
        for (&k, b) in &parts {
            for x in a {
                for y in b {
                    let br = x.bracket(y).map_err(err)?;
                    let inside = match spans.get(&(m + k)) {
                        Some(s) => s.contains(&br),
                        None => br.is_zero(),
                    };
                    ensure(inside, || format!("[l^{m}, l^{k}] escapes l^{}", m + k))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(pairs)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for t in 0..100 {
        let n = 2 + t % 2;
        let (a, b, c) = (random_field(&mut rng, n), random_field(&mut rng, n), random_field(&mut rng, n));
        let br = |x: &PolyVectorField, y: &PolyVectorField| x.bracket(y).unwrap();
        let sum = br(&br(&a, &b), &c).add(&br(&br(&b, &c), &a)).add(&br(&br(&c, &a), &b));
        ensure(sum.is_zero(), || format!("Jacobi fails on triple {t}"))?;
    }

    let heis = complex_algebra(&heisenberg(), 2);
    let cone = complex_algebra(&light_cone(), 2);
    let pairs = graded_closure(&heis)? + graded_closure(&cone)?;

    let pts = regular_samples(&inversion(), 20, SEED).map_err(err)?;
    let images: Vec<PlueckerPoint> = pts.iter().map(|a| plucker_point(&heis, a)).collect::<Result<_, _>>().map_err(err)?;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            ensure(pts[i] == pts[j] || images[i] != images[j], || format!("phi collides on points {i}, {j}"))?;
        }
    }

    let maps = roundtrip_maps();
    for (name, _, qp, l) in &maps {
        let sc = structure_constants(l).map_err(err)?;
        let nu = pushforward_matrix(l, qp, SEED).map_err(|e| format!("{name}: {e}"))?;
        ensure(nu.preserves(&sc), || format!("nu({name}) does not preserve brackets"))?;
    }
    Ok(format!("Jacobi x100, {pairs} graded pairs, phi injective on 20 points, nu preserves brackets for {} maps", maps.len()))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crbirat-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cli(args: &[&str]) -> (i32, Value) {
    crbirat::cli::run(std::iter::once("crbirat").chain(args.iter().copied()))
}

fn criterion_8() -> Outcome {
    let (code, rep) = cli(&["check", "form", "--manifold", &fixture("duplicated_forms.json")]);
    ensure(code != 0 && rep["results"]["independent"] == false, || format!("duplicated forms: exit {code}, {rep}"))?;

    let (code, rep) = cli(&["bir", "orbit", "--manifold", &fixture("heisenberg.json"), "--map", &fixture("stretch.json")]);
    let witnesses = rep["results"]["witnesses"].as_array().map_or(0, Vec::len);
    ensure(code != 0 && witnesses > 0, || format!("stretch orbit: exit {code}, {witnesses} witnesses"))?;

    let heis = complex_algebra(&heisenberg(), 2);
    let basis = scratch("basis.json");
    std::fs::write(&basis, serde_json::to_string(&heis).unwrap()).unwrap();
    let g = heisenberg_affine(&g(1), &g(3));
    let mut nu = pushforward_matrix(&heis, &g, SEED).map_err(err)?.matrix;
    nu.data[2][5] = &nu.data[2][5] + &gi(0, 1);
    let nu_path = scratch("nu.json");
    std::fs::write(&nu_path, json!(nu.data).to_string()).unwrap();
    let (code, rep) = cli(&[
        "reg",
        "verify",
        "--basis",
        basis.to_str().unwrap(),
        "--map",
        &fixture("heisenberg_translation.json"),
        "--nu",
        nu_path.to_str().unwrap(),
    ]);
    let witnesses = rep["results"]["witnesses"].as_array().map_or(0, Vec::len);
    ensure(code != 0 && witnesses > 0, || format!("perturbed nu: exit {code}, {witnesses} witnesses"))?;
    let _ = std::fs::remove_dir_all(basis.parent().unwrap());
    Ok("3 negative controls exit nonzero with witnesses".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, Duration::from_secs(10), criterion_1),
        (2, Duration::from_secs(60), criterion_2),
        (3, Duration::from_secs(60), criterion_3),
        (4, Duration::from_secs(5), criterion_4),
        (5, Duration::from_secs(10), criterion_5),
        (6, Duration::from_secs(120), criterion_6),
        (7, Duration::from_secs(60), criterion_7),
        (8, Duration::from_secs(60), criterion_8),
    ];
    let mut failed = 0;
    for (id, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {id}: {verdict} ({:.2}s, limit {}s) {detail}", elapsed.as_secs_f64(), limit.as_secs());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
