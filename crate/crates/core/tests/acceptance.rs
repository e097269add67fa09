//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Every comparison is exact. Criteria 1, 3, 4, 6 and 9 are written against an
//! arbitrary field so criterion 10 can rerun them over F_7 and F_11.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use flowbrace::bch::{bch_series, ts_mul, verify_flows_bch, TruncatedSeries};
use flowbrace::brace::VALIDATION_TRIALS;
use flowbrace::check::{BraceLaw, Violation};
use flowbrace::free_expansion::{
    brace_degree_bound, doubling_matrix, e_xy_words, evaluate, scaling_matrix_check, sum_star_rhs,
    StarExpr, StarWord,
};
use flowbrace::sampling::{Sampler, DEFAULT_SEED};
use flowbrace::{
    corpus, flows, limits, Error, GradedBrace, PreLieAlgebra, Scalar, ScalarField, Vector,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Debug>(context: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{context}: {e:?}")
}

/// Corpus members usable over `field`: everything over Q, class < p otherwise.
fn algebras(field: ScalarField) -> Vec<(String, PreLieAlgebra)> {
    corpus::algebras(field)
        .into_iter()
        .filter(|(_, alg)| {
            let p = field.characteristic();
            p == 0 || alg.class().map(|s| (s as u64) < p).unwrap_or(false)
        })
        .collect()
}

fn braces(field: ScalarField) -> Result<Vec<(String, GradedBrace)>, String> {
    let mut out = Vec::new();
    for (name, alg) in algebras(field) {
        out.push((name.clone(), flows::to_brace(&alg).map_err(err(&name))?));
    }
    out.push(("trivial_d3".into(), GradedBrace::trivial(field, 3)));
    Ok(out)
}

fn basis_pairs(d: usize, field: ScalarField) -> Vec<(Vector, Vector)> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            out.push((Vector::unit(field, d, i), Vector::unit(field, d, j)));
        }
    }
    out
}

fn half(field: ScalarField) -> Scalar {
    field
        .from_i64(2)
        .inverse()
        .expect("characteristic is not 2")
}

fn criterion_1(field: ScalarField) -> Check {
    let h = half(field);
    let mut rng = Sampler::new(DEFAULT_SEED);
    let mut pairs = 0;
    for (name, alg) in algebras(field) {
        if alg.class().map_err(err(&name))? > 4 {
            continue;
        }
        let mut cases = basis_pairs(alg.dim(), field);
        cases
            .extend((0..100).map(|_| (rng.vector(field, alg.dim()), rng.vector(field, alg.dim()))));
        for (a, b) in &cases {
            let m = |x: &Vector, y: &Vector| alg.multiply(x, y).expect("same dimension");
            let mut expected = &(a + b) + &m(a, b);
            expected.add_scaled(&-h.clone(), &m(&m(a, a), b));
            expected.add_scaled(&h, &m(a, &m(a, b)));
            let got = flows::circ(&alg, a, b).map_err(err(&name))?;
            ensure!(
                got == expected,
                "{name}: circ({a}, {b}) = {got}, expected {expected}"
            );
        }
        pairs += cases.len();
    }
    Ok(format!("{pairs} pairs"))
}

fn criterion_2() -> Check {
    let q = ScalarField::Rationals;
    let f4 = corpus::f4(q);
    let mut out = Vec::new();
    for text in ["1", "2", "-3", "5/7"] {
        let x = q.parse(text).map_err(err(text))?;
        let x2 = &x * &x;
        let x3 = &x2 * &x;
        let expected = Vector::new(
            q,
            vec![
                x.clone(),
                -(&x2 * &half(q)),
                &x3 * &q.parse("1/4").unwrap(),
                &x3 * &q.parse("1/12").unwrap(),
            ],
        )
        .map_err(err(text))?;
        let got = flows::omega(&f4, &f4.basis_vector(0).scale(&x)).map_err(err(text))?;
        ensure!(
            got == expected,
            "Omega({text} e1) = {got}, expected {expected}"
        );
        out.push(text);
    }
    Ok(format!("x in {{{}}}", out.join(", ")))
}

fn criterion_3(field: ScalarField) -> Check {
    let n2 = corpus::n2(field);
    // every pair with coordinates in {-1, 0, 1, 2}, which contains the basis pairs
    let values: Vec<Scalar> = [-1, 0, 1, 2]
        .into_iter()
        .map(|v| field.from_i64(v))
        .collect();
    let mut points = Vec::new();
    for u in &values {
        for v in &values {
            points.push(Vector::new(field, vec![u.clone(), v.clone()]).expect("one field"));
        }
    }
    for a in &points {
        for b in &points {
            let expected = &(a + b) + &n2.multiply(a, b).map_err(err("n2"))?;
            let got = flows::circ(&n2, a, b).map_err(err("n2"))?;
            ensure!(
                got == expected,
                "circ({a}, {b}) = {got}, expected {expected}"
            );
        }
    }
    Ok(format!("{} pairs", points.len() * points.len()))
}

fn criterion_4(field: ScalarField) -> Check {
    let algs = algebras(field);
    for (name, alg) in &algs {
        limits::roundtrip_prelie(alg)
            .map_err(err(name))?
            .map_err(err(name))?;
    }
    let bs = braces(field)?;
    for (name, brace) in &bs {
        limits::roundtrip_brace(brace)
            .map_err(err(name))?
            .map_err(err(name))?;
    }
    Ok(format!("{} algebras, {} braces", algs.len(), bs.len()))
}

fn criterion_5() -> Check {
    let q = ScalarField::Rationals;
    let mut rng = Sampler::new(DEFAULT_SEED);
    let mut witnesses = 0;
    for name in ["f4", "graft5"] {
        let alg = corpus::by_name(name, q).ok_or(format!("missing {name}"))?;
        let brace = flows::to_brace(&alg).map_err(err(name))?;
        let mut cases = basis_pairs(alg.dim(), q);
        cases.extend((0..10).map(|_| (rng.vector(q, alg.dim()), rng.vector(q, alg.dim()))));
        for (a, b) in &cases {
            let w = limits::limit_witness(&brace, a, b, 6).map_err(err(name))?;
            w.check(q).map_err(err(name))?;
            let dot = limits::dot(&brace, a, b).map_err(err(name))?;
            ensure!(
                w.limit == dot,
                "{name}: witness limit {} differs from dot {dot}",
                w.limit
            );
            witnesses += 1;
        }
    }
    for (name, brace) in braces(q)? {
        let lambda1 = brace.lambda(1).ok_or(format!("{name}: no Lambda_1"))?;
        for i in 0..brace.dim() {
            for j in 0..brace.dim() {
                let (a, b) = (brace.basis_vector(i), brace.basis_vector(j));
                let dot = limits::dot(&brace, &a, &b).map_err(err(&name))?;
                ensure!(
                    dot == lambda1.entry(&[i], j),
                    "{name}: dot(e{}, e{}) differs from Lambda_1",
                    i + 1,
                    j + 1
                );
            }
        }
    }
    Ok(format!("{witnesses} witnesses, n = 0..6"))
}

fn word(text: &str) -> StarExpr {
    StarExpr::word(StarWord::parse(text).expect("well-formed word"))
}

fn criterion_6(field: ScalarField) -> Check {
    let (x, y, z) = (
        StarExpr::symbol('x'),
        StarExpr::symbol('y'),
        StarExpr::symbol('z'),
    );
    let three = sum_star_rhs(&x, &y, &z, 3).map_err(err("degree 3"))?;
    let display = word("(x*z)")
        .add(&word("(y*z)"))
        .add(&word("(x*(y*z))"))
        .sub(&word("((x*y)*z)"));
    ensure!(three == display, "degree-3 expansion is {three}");

    let mut rng = Sampler::new(DEFAULT_SEED);
    let bs = braces(field)?;
    for (name, brace) in &bs {
        let rhs = sum_star_rhs(&x, &y, &z, brace_degree_bound(brace)).map_err(err(name))?;
        for _ in 0..50 {
            let (a, b, c) = (
                rng.vector(field, brace.dim()),
                rng.vector(field, brace.dim()),
                rng.vector(field, brace.dim()),
            );
            let lhs = brace.star(&(&a + &b), &c).map_err(err(name))?;
            let bindings = BTreeMap::from([('x', a), ('y', b), ('z', c)]);
            let got = evaluate(&rhs, &bindings, brace).map_err(err(name))?;
            ensure!(
                got == lhs,
                "{name}: expansion gives {got}, star(a+b, c) = {lhs}"
            );
        }
    }
    Ok(format!("{} braces x 50 triples", bs.len()))
}

fn criterion_7() -> Check {
    let q = ScalarField::Rationals;
    for (bound, count) in [(2, 1), (3, 3), (4, 8), (5, 22)] {
        let dm = doubling_matrix(bound).map_err(err("doubling matrix"))?;
        ensure!(
            dm.words == e_xy_words(bound),
            "bound {bound}: word basis differs"
        );
        ensure!(
            dm.words.len() == count,
            "bound {bound}: {} words, expected {count}",
            dm.words.len()
        );
        ensure!(
            dm.matrix.is_upper_triangular(),
            "bound {bound}: M is not upper triangular"
        );
        let diagonal = dm.matrix.diagonal();
        let twos = diagonal.iter().filter(|c| **c == q.from_i64(2)).count();
        ensure!(twos == 1, "bound {bound}: {twos} diagonal entries equal 2");
        for (w, c) in dm.words.iter().zip(&diagonal) {
            ensure!(
                *c == q.pow2(w.count('x') as i64),
                "bound {bound}: diagonal entry {c} for {w}"
            );
        }
    }
    let mut rng = Sampler::new(DEFAULT_SEED);
    let bs = braces(q)?;
    for (name, brace) in &bs {
        let mut cases = basis_pairs(brace.dim(), q);
        cases.extend((0..5).map(|_| (rng.vector(q, brace.dim()), rng.vector(q, brace.dim()))));
        for (a, b) in &cases {
            scaling_matrix_check(brace, a, b, 4)
                .map_err(err(name))?
                .map_err(err(name))?;
        }
    }
    Ok(format!("bounds 2..5, {} braces", bs.len()))
}

fn bracket(u: &TruncatedSeries, v: &TruncatedSeries) -> TruncatedSeries {
    ts_mul(u, v).unwrap().sub(&ts_mul(v, u).unwrap())
}

fn criterion_8() -> Check {
    let q = ScalarField::Rationals;
    let (x, y) = (TruncatedSeries::x(q, 3), TruncatedSeries::y(q, 3));
    let xy = bracket(&x, &y);
    let twelfth = q.parse("1/12").unwrap();
    let expected = x.add(&y).add(&xy.scale(&half(q))).add(
        &bracket(&x, &xy)
            .add(&bracket(&y, &bracket(&y, &x)))
            .scale(&twelfth),
    );
    let c = bch_series(q, 3).map_err(err("bch"))?;
    ensure!(
        c == expected,
        "degree <= 3 part of log(exp X exp Y) is wrong"
    );

    let mut checked = 0;
    for (name, alg) in algebras(q) {
        if alg.class().map_err(err(&name))? > 5 {
            continue;
        }
        verify_flows_bch(&alg, VALIDATION_TRIALS, DEFAULT_SEED)
            .map_err(err(&name))?
            .map_err(err(&name))?;
        checked += 1;
    }
    Ok(format!("{checked} algebras"))
}

fn criterion_9(field: ScalarField) -> Check {
    let bs = braces(field)?;
    for (name, brace) in &bs {
        brace
            .check_left_brace(VALIDATION_TRIALS, DEFAULT_SEED)
            .map_err(err(name))?;
        brace
            .check_group(VALIDATION_TRIALS, DEFAULT_SEED)
            .map_err(err(name))?;
        brace
            .check_fbrace(VALIDATION_TRIALS, DEFAULT_SEED)
            .map_err(err(name))?;
        let alg = limits::to_prelie(brace).map_err(err(name))?;
        alg.check_prelie_identity().map_err(err(name))?;
    }

    // F4 with e3·e1 = e4 added
    match corpus::f4_corrupted(field).check_prelie_identity() {
        Err(Violation::PreLieIdentity {
            i: 0, j: 1, k: 0, ..
        }) => {}
        other => return Err(format!("corrupted F4: {other:?}")),
    }

    // F4 brace with one Lambda_2 coefficient shifted by 1
    let mut tampered = flows::to_brace(&corpus::f4(field)).map_err(err("f4"))?;
    let lambda = tampered.lambda_mut(2).ok_or("f4 has no Lambda_2")?;
    let mut entry = lambda.entry(&[0, 0], 0);
    entry.set(3, &entry.get(3).clone() + &field.one());
    lambda.set(&[0, 0], 0, entry).map_err(err("tamper"))?;
    match tampered.check_left_brace(VALIDATION_TRIALS, DEFAULT_SEED) {
        Err(Violation::LeftBrace {
            law: BraceLaw::StarCompatibility,
            a,
            b,
            c,
        }) if !(a.get(0).is_zero() || b.get(0).is_zero() || c.get(0).is_zero()) => {}
        other => return Err(format!("tampered F4 brace: {other:?}")),
    }
    ensure!(tampered.validate().is_err(), "tampered F4 brace validates");

    // a brace whose Lambda_1 is the corrupted product
    let mut lambda1 = flowbrace::Lambda::zero(field, 4, 1);
    for (i, j, k, c) in corpus::f4_corrupted(field).entries() {
        let mut e = lambda1.entry(&[i], j);
        e.set(k, c);
        lambda1.set(&[i], j, e).map_err(err("corrupt"))?;
    }
    let bad = GradedBrace::new_unchecked(field, 4, 5, vec![lambda1]).map_err(err("corrupt"))?;
    match limits::to_prelie(&bad) {
        Err(Error::NotPreLie(Violation::PreLieIdentity {
            i: 0, j: 1, k: 0, ..
        })) => {}
        other => return Err(format!("corrupted Lambda_1: {other:?}")),
    }
    Ok(format!("{} braces, 3 corrupted fixtures", bs.len()))
}

fn criterion_10() -> Check {
    let mut notes = Vec::new();
    for p in [7, 11] {
        let field = ScalarField::prime(p).map_err(err("prime"))?;
        let checks: [(u8, fn(ScalarField) -> Check); 5] = [
            (1, criterion_1),
            (3, criterion_3),
            (4, criterion_4),
            (6, criterion_6),
            (9, criterion_9),
        ];
        for (n, check) in checks {
            check(field).map_err(|e| format!("criterion {n} over {field}: {e}"))?;
        }
        notes.push(format!("{field}: {} members", algebras(field).len()));
    }
    Ok(notes.join(", "))
}

fn main() -> ExitCode {
    let q = ScalarField::Rationals;
    let criteria: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        (
            "circ closed form, class <= 4",
            Box::new(move || criterion_1(q)),
        ),
        ("Omega coefficients in F4", Box::new(criterion_2)),
        ("associative case N2", Box::new(move || criterion_3(q))),
        ("round trips", Box::new(move || criterion_4(q))),
        (
            "limit certificate and dot = Lambda_1",
            Box::new(criterion_5),
        ),
        ("expansion engine", Box::new(move || criterion_6(q))),
        (
            "doubling matrix and scaling identity",
            Box::new(criterion_7),
        ),
        ("BCH series and flows", Box::new(criterion_8)),
        (
            "axiom suites and corrupted fixtures",
            Box::new(move || criterion_9(q)),
        ),
        ("prime-field portability", Box::new(criterion_10)),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (n, (title, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {:>2} {title} ({detail}) [{:.2?}]", n + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {why}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
