//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use brieskorn_core::hyperbolic::{
    build_polygon_group, contact_invariance_residual, linearized_return_map, relation_report, sampling,
    JacobianMethod, LocalModel, RelationKind, Tolerances,
};
use brieskorn_core::orbits::{conley_zehnder, orbit_type, OrbitType};
use brieskorn_core::{
    build_complex, chain_homology, closed_form_answer, closed_form_homology, compare, enumerate_generators,
    graded_homology, seifert_data, validate_params, GeneratorFilter, GradedDims, HomotopyClass, OrbitDescriptor,
    OrbitKind, RationalMatrix, SeifertData,
};
use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;

type Outcome = Result<String, String>;

fn data(exps: &[i64]) -> SeifertData {
    seifert_data(&validate_params(exps).expect("valid exponents"))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const CORPUS: [&[i64]; 7] = [
    &[2, 3, 7],
    &[2, 3, 11],
    &[3, 4, 5],
    &[2, 5, 7],
    &[2, 3, 7, 43],
    &[2, 2, 2, 3],
    &[2, 2, 3, 3, 3],
];

fn oracle_equivalence() -> Outcome {
    let floor = -40;
    let start = Instant::now();
    for exps in CORPUS {
        let d = data(exps);
        let chain = chain_homology(&d, floor, None).map_err(|e| format!("{exps:?}: {e}"))?;
        let oracle = closed_form_homology(&d, floor);
        let cmp = compare(&d, &chain, &oracle, floor).map_err(|e| format!("{exps:?}: {e}"))?;
        check(cmp.equal, || format!("{exps:?}: mismatch {:?}", cmp.first_mismatch))?;
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("{} tuples equal at gradings >= {floor} in {secs:.2}s", CORPUS.len()))
}

/// Counts generators grading by grading straight from the orbit inventory.
fn enumeration_oracle(d: &SeifertData, floor: i64) -> GradedDims {
    let dd = d.d.to_string().parse::<i64>().unwrap();
    let mm = d.m.to_string().parse::<i64>().unwrap();
    let mut out = GradedDims::new();
    for (count, t) in d.counts().into_iter().zip(d.multiplicities()) {
        let t = t as i64;
        let mut k = 1i64;
        loop {
            let g = -2 * (k * dd).div_euclid(mm * t) - 2;
            if g < floor {
                break;
            }
            if k % t != 0 {
                out.add(g, count as u64);
            }
            k += 1;
        }
    }
    let genus = d.genus_u64();
    let w = dd / mm;
    let mut n = 1;
    while -2 * n * w >= floor {
        for (g, v) in [(-2 * n * w - 2, 1), (-2 * n * w - 1, 2 * genus), (-2 * n * w, 1)] {
            if g >= floor {
                out.add(g, v);
            }
        }
        n += 1;
    }
    out
}

fn worked_values() -> Outcome {
    let floor = -40;
    let d = data(&[2, 3, 7]);
    let chain = chain_homology(&d, floor, None).map_err(|e| e.to_string())?.dims;
    let mut expected = GradedDims::new();
    expected.add(-2, 10);
    for k in 2..=20 {
        expected.add(-2 * k, 11);
    }
    check(chain == expected, || format!("(2,3,7): {chain:?}"))?;
    check(enumeration_oracle(&d, floor) == expected, || "(2,3,7) enumeration oracle disagrees".into())?;

    let d = data(&[2, 3, 11]);
    let g_block = closed_form_answer(&d, -10).g_block;
    let window: Vec<u64> = [-2, -4, -6, -8, -10].iter().map(|&k| g_block.get(k)).collect();
    check(window == [2, 3, 3, 3, 2], || format!("(2,3,11) window {window:?}"))?;
    check(g_block.total() == 1 + 2 + 10, || format!("(2,3,11) total {}", g_block.total()))?;
    let chain = chain_homology(&d, -10, None).map_err(|e| e.to_string())?.dims;
    // the maximum of the first fiber class also sits at -2d/m = -10
    let chain_window: Vec<u64> = [-2, -4, -6, -8, -10].iter().map(|&k| chain.get(k)).collect();
    check(chain_window == [2, 3, 3, 3, 3], || format!("(2,3,11) chain {chain_window:?}"))?;
    check(enumeration_oracle(&d, -10) == chain, || "(2,3,11) enumeration oracle disagrees".into())?;
    Ok("(2,3,7) dims 10, 11, 11, ... with odd gradings empty; (2,3,11) window (2,3,3,3,2), total 13".into())
}

fn differential_formula() -> Outcome {
    let d = data(&[2, 3, 7]);
    for n in 1..=3u64 {
        let complex = build_complex(&d, HomotopyClass::Fiber(n)).map_err(|e| e.to_string())?;
        let bottom = -2 * n as i64 - 2;
        let minima: Vec<_> = complex.generators[&bottom].iter().map(|g| g.descriptor()).collect();
        let expected_minima = [
            OrbitDescriptor::exceptional(1, 1, 2 * n),
            OrbitDescriptor::exceptional(2, 1, 3 * n),
            OrbitDescriptor::exceptional(3, 1, 7 * n),
        ];
        check(minima == expected_minima, || format!("n={n}: minima {minima:?}"))?;
        let saddles: Vec<_> = complex.generators[&(bottom + 1)].iter().map(|g| g.descriptor()).collect();
        check(
            saddles == [OrbitDescriptor::saddle(1, n), OrbitDescriptor::saddle(2, n)],
            || format!("n={n}: saddles {saddles:?}"),
        )?;
        let expected = RationalMatrix::from_rows(&[vec![1, 0], vec![-1, 1], vec![0, -1]]);
        check(complex.differentials[&(bottom + 1)] == expected, || {
            format!("n={n}: {:?}", complex.differentials[&(bottom + 1)])
        })?;
        check(complex.differentials[&(bottom + 2)].is_zero(), || format!("n={n}: maximum has a boundary"))?;
    }
    let mut complexes = 0;
    for exps in CORPUS {
        let d = data(exps);
        let chain = chain_homology(&d, -40, None).map_err(|e| e.to_string())?;
        for class in &chain.classes {
            complexes += 1;
            check(class.complex.squares_to_zero(), || format!("{exps:?} {}: d^2 != 0", class.complex.class))?;
        }
    }
    Ok(format!("signed boundaries match for n = 1..3; d^2 = 0 on {complexes} complexes"))
}

fn geometry() -> Outcome {
    let tol = Tolerances::default();
    let start = Instant::now();
    let points = sampling::sample_points(&mut sampling::rng(2024), 20);
    let (mut groups, mut worst_area, mut worst_matrix, mut worst_lifted) = (0, 0.0f64, 0.0f64, 0.0f64);
    for a in 2..=13i64 {
        for b in 2..=13i64 {
            for c in 2..=13i64 {
                let Ok(params) = validate_params(&[a, b, c]) else {
                    continue;
                };
                let group = build_polygon_group(&params).map_err(|e| e.to_string())?;
                let expected = PI * (1.0 - 1.0 / a as f64 - 1.0 / b as f64 - 1.0 / c as f64);
                let area_err = (group.area() - expected).abs();
                check(area_err < tol.area, || format!("({a},{b},{c}) area off by {area_err:e}"))?;
                let report = relation_report(&group, &points, &tol);
                if let Some(f) = report.first_failure() {
                    return Err(format!("({a},{b},{c}) {}: {:e}", f.name, f.residual));
                }
                worst_area = worst_area.max(area_err);
                worst_matrix = worst_matrix.max(report.worst(RelationKind::Matrix));
                worst_lifted = worst_lifted.max(report.worst(RelationKind::Lifted));
                groups += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 5.0, || format!("took {secs:.2}s"))?;
    Ok(format!(
        "{groups} triangles: area {worst_area:.1e}, matrix {worst_matrix:.1e}, lifted {worst_lifted:.1e} in {secs:.2}s"
    ))
}

fn invariance() -> Outcome {
    let mut rng = sampling::rng(1);
    let (mut worst_lambda, mut worst_frame) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let h = sampling::sample_lifted(&mut rng);
        let p = sampling::sample_point(&mut rng);
        let r = contact_invariance_residual(&h, &p, JacobianMethod::Analytic);
        worst_lambda = worst_lambda.max(r.lambda);
        worst_frame = worst_frame.max(r.frame);
    }
    check(worst_lambda < 1e-8 && worst_frame < 1e-8, || {
        format!("lambda {worst_lambda:e}, frame {worst_frame:e}")
    })?;
    Ok(format!("1000 pairs: lambda {worst_lambda:.1e}, frame {worst_frame:.1e}"))
}

fn rotation_lemma() -> Outcome {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    for eps in [1e-2, 1e-3] {
        for period in [TAU, TAU * 21.0] {
            let model = LocalModel {
                v: Complex64::i(),
                c: Complex64::new(1.0, 0.0),
                epsilon: eps,
            };
            let r = linearized_return_map(&model, period, &tol).map_err(|e| e.to_string())?;
            check(r.analytic_angle < 0.0, || "analytic rotation is not clockwise".into())?;
            check(r.relative_error() < 1e-6, || format!("eps {eps}, T {period}: {:e}", r.relative_error()))?;
            check((r.determinant - 1.0).abs() < 1e-9, || format!("det {}", r.determinant))?;
            worst = worst.max(r.relative_error());
        }
    }
    let d = data(&[2, 3, 7]);
    let model = LocalModel {
        v: Complex64::new(0.3, 1.2),
        c: Complex64::new(0.5, -0.8),
        epsilon: 1e-3,
    };
    for n in 1..=5u64 {
        let orbit = OrbitDescriptor::exceptional(1, 1, n);
        let action = brieskorn_core::orbits::action(&d, &orbit);
        let period = TAU * action.numer().to_string().parse::<f64>().unwrap()
            / action.denom().to_string().parse::<f64>().unwrap();
        let r = linearized_return_map(&model, period, &tol).map_err(|e| e.to_string())?;
        let cz = r.cz_index(tol.nondegeneracy).map_err(|e| e.to_string())?;
        let expected = -2 * (n as i64 / 2) - 1;
        check(cz == expected && cz == conley_zehnder(&d, &orbit), || format!("n={n}: CZ {cz}, expected {expected}"))?;
    }
    Ok(format!("worst relative error {worst:.1e}; CZ of v1^n matches for n = 1..5"))
}

fn random_tuple<R: Rng>(rng: &mut R) -> Vec<i64> {
    loop {
        let n = rng.gen_range(3..=5);
        let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(2..=14)).collect();
        if let Ok(params) = validate_params(&exps) {
            if seifert_data(&params).minima() <= 150 {
                return exps;
            }
        }
    }
}

/// `d`, `m` and `2g` from the products of the exponents, in machine integers.
fn independent_invariants(exps: &[i64]) -> (i128, i128, i128) {
    let a: Vec<i128> = exps.iter().map(|&x| x as i128).collect();
    let n = a.len() as i128;
    let all: i128 = a.iter().product();
    let others: Vec<i128> = (0..a.len()).map(|j| all / a[j]).collect();
    let d = all * (n - 2) - others.iter().sum::<i128>();
    let m = others.iter().fold(0, |g, &x| g.gcd(&x));
    let lcm_all = a.iter().fold(1, |l, &x| l.lcm(&x));
    let s_sum: i128 = (0..a.len())
        .map(|j| {
            let l = (0..a.len()).filter(|&i| i != j).fold(1, |l, i| l.lcm(&a[i]));
            others[j] / l
        })
        .sum();
    (d, m, 2 + (n - 2) * all / lcm_all - s_sum)
}

fn property_suites() -> Outcome {
    let mut rng = sampling::rng(77);
    let tuples = 1000;
    for _ in 0..tuples {
        let exps = random_tuple(&mut rng);
        let d = data(&exps);
        let (dd, mm, two_g) = independent_invariants(&exps);
        check(d.d == dd.into() && d.m == mm.into(), || format!("{exps:?}: d, m disagree"))?;
        check(dd % mm == 0, || format!("{exps:?}: m does not divide d"))?;
        check(two_g >= 0 && two_g % 2 == 0 && two_g / 2 == d.genus_u64() as i128, || {
            format!("{exps:?}: 2g = {two_g}")
        })?;
        let w = d.winding();
        let floor = -2 * w - 4;
        for g in enumerate_generators(&d, &GeneratorFilter::GradingFloor(floor)) {
            let class = orbit_type(&g);
            check(class.good, || format!("{exps:?}: bad orbit {}", g.descriptor()))?;
            let parity_ok = match g.kind {
                OrbitKind::Saddle { .. } => class.orbit_type == OrbitType::PositiveHyperbolic && g.cz % 2 == 0,
                _ => class.orbit_type == OrbitType::Elliptic && g.cz.rem_euclid(2) == 1,
            };
            check(parity_ok, || format!("{exps:?}: parity of {}", g.descriptor()))?;
            if let OrbitKind::Exceptional { j, i } = g.kind {
                let t = d.multiplicities()[j - 1];
                let shifted = OrbitDescriptor::exceptional(j, i, g.iterate + t);
                let lhs = brieskorn_core::orbits::make_generator(&d, &shifted).grading;
                check(lhs == g.grading - 2 * w, || format!("{exps:?}: shift at {}", g.descriptor()))?;
            }
        }
        let complex = build_complex(&d, HomotopyClass::Fiber(1)).map_err(|e| e.to_string())?;
        let homology = graded_homology(&complex).map_err(|e| e.to_string())?;
        let chi = d.euler_characteristic();
        check(complex.euler_characteristic() == chi && homology.euler_characteristic() == chi, || {
            format!("{exps:?}: Euler characteristic")
        })?;
    }
    Ok(format!("{tuples} tuples"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence", oracle_equivalence),
        ("worked values", worked_values),
        ("differential formula", differential_formula),
        ("geometry verification", geometry),
        ("invariance verification", invariance),
        ("rotation lemma", rotation_lemma),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
