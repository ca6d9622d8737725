//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary is always printed.

use std::time::Instant;

use haar_moments::arith::{factorial, BigRational};
use haar_moments::combinat::{Partition, Permutation};
use haar_moments::invariant::diagrams::{degree3_query, fan_query, x_query, z_query};
use haar_moments::invariant::{Degree3, FanSpec, XSpec};
use haar_moments::query::{canonicalize, validate, CanonicalMoment, IndexSet, MomentQuery};
use haar_moments::sphere::{s_multi, s_single, SphereSpec};
use haar_moments::suites::{self, Check};
use haar_moments::weingarten::{self, evaluate_fixed, evaluate_symbolic, xi, NMode};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn fact(k: i64) -> BigInt {
    factorial(k as u64)
}

fn q(a: BigInt, b: BigInt) -> BigRational {
    BigRational::new(a, b)
}

fn int(k: i64) -> BigInt {
    BigInt::from(k)
}

type Oracle = Box<dyn Fn(i64) -> BigRational>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.to_string())
        .collect();
    Outcome {
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks", checks.len())
        } else {
            failed.join("\n    ")
        },
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        passed: parts.iter().all(|o| o.passed),
        detail: parts
            .into_iter()
            .map(|o| o.detail)
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn outcome(failures: Vec<String>, total: usize, what: &str) -> Outcome {
    Outcome {
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{total} {what}")
        } else {
            failures.join("\n    ")
        },
    }
}

/// The closed forms written out directly with integer factorials, evaluated
/// at concrete n and compared with the symbolic group sum.
fn closed_forms_at_integers() -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0;
    let mut compare =
        |name: String, query: &MomentQuery, f: &dyn Fn(i64) -> BigRational, min_n: i64| {
            let sym = match evaluate_symbolic(query) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("{name}: {e}"));
                    return;
                }
            };
            let p = query.i.len() as i64;
            for n in min_n.max(p)..=p + 6 {
                total += 1;
                if sym.eval(n).ok() != Some(f(n)) {
                    failures.push(format!("{name} at n={n}"));
                }
            }
        };
    for d in 1..=5i64 {
        for mults in compositions(d as usize) {
            let spec = FanSpec::new(mults.clone()).unwrap();
            let prod: BigInt = mults.iter().map(|&m| fact(m as i64)).product();
            let f = move |n: i64| q(&prod * fact(n - 1), fact(n + d - 1));
            compare(format!("F{mults:?}"), &fan_query(&spec), &f, 1);
        }
    }
    for m1 in 0..=3i64 {
        for m2 in 0..=3i64 {
            for m3 in 0..=3i64 {
                let f = move |n: i64| {
                    q(
                        fact(m1)
                            * fact(m2)
                            * fact(m3)
                            * fact(n - 2)
                            * fact(n - 1)
                            * fact(n + m1 + m3 - 2),
                        fact(n + m1 - 2) * fact(n + m3 - 2) * fact(n + m1 + m2 + m3 - 1),
                    )
                };
                let (a, b, c) = (m1 as usize, m2 as usize, m3 as usize);
                compare(format!("Z({m1},{m2},{m3})"), &z_query(a, b, c), &f, 2);
            }
        }
    }
    let e2 = XSpec::new([1, 0, 1, 0, 0, 1, 0, 1]).unwrap();
    compare(
        "E(2)".into(),
        &x_query(&e2),
        &|n| q(int(-1), int(n * (n * n - 1))),
        2,
    );
    let d3: [(Degree3, Oracle, i64); 7] = [
        (
            Degree3::A,
            Box::new(|n| q(int(1), int((n - 1) * n * (n + 2)))),
            2,
        ),
        (
            Degree3::B,
            Box::new(|n| q(int(n * n - 2) * fact(n - 3), fact(n + 2))),
            3,
        ),
        (
            Degree3::C,
            Box::new(|n| q(int(-2) * fact(n - 2), fact(n + 2))),
            2,
        ),
        (
            Degree3::D,
            Box::new(|n| q(int(-2) * fact(n - 2), fact(n + 2))),
            2,
        ),
        (Degree3::E, Box::new(|n| q(-fact(n - 2), fact(n + 2))), 2),
        (
            Degree3::F,
            Box::new(|n| q(int(-n) * fact(n - 3), fact(n + 2))),
            3,
        ),
        (
            Degree3::G,
            Box::new(|n| q(int(2) * fact(n - 3), fact(n + 2))),
            3,
        ),
    ];
    for (id, f, min_n) in &d3 {
        compare(id.to_string(), &degree3_query(*id), f.as_ref(), *min_n);
    }
    for t in 0..=4i64 {
        for u in 0..=4 - t {
            let (tu, uu) = (t as usize, u as usize);
            if t >= 1 {
                let spec = XSpec::new([1, 0, tu, uu, 0, 1, tu - 1, uu + 1]).unwrap();
                let f = move |n: i64| q(-fact(t) * fact(u + 1) * fact(n - 2), fact(n + t + u));
                compare(format!("x4({t},{u})"), &x_query(&spec), &f, 2);
            }
            if u >= 1 {
                let spec = XSpec::new([0, 1, tu, uu, 1, 0, tu + 1, uu - 1]).unwrap();
                let f = move |n: i64| q(-fact(t + 1) * fact(u) * fact(n - 2), fact(n + t + u));
                compare(format!("x5({t},{u})"), &x_query(&spec), &f, 2);
            }
        }
    }
    outcome(failures, total, "integer evaluations")
}

fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    (1..=d)
        .flat_map(|first| {
            compositions(d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn criterion_1() -> Outcome {
    merge(vec![
        from_checks(&suites::paper_tables()),
        closed_forms_at_integers(),
    ])
}

fn criterion_2() -> Outcome {
    // xi at n = 5 from the small closed forms
    let expect = [
        (vec![1, 1], q(int(1), int(24))),
        (vec![2], q(int(-1), int(120))),
        (vec![1, 1, 1], q(int(23), int(2520))),
        (vec![2, 1], q(int(-1), int(504))),
        (vec![3], q(int(1), int(1260))),
    ];
    let mut failures = Vec::new();
    for (c, want) in &expect {
        let got = xi(&Partition::new(c.clone()), NMode::Fixed(5))
            .unwrap()
            .exact();
        if got != *want {
            failures.push(format!("xi({c:?}) at n=5: {got} != {want}"));
        }
    }
    merge(vec![
        from_checks(&suites::unitarity_sums()),
        outcome(failures, 5, "xi values"),
    ])
}

fn criterion_3() -> Outcome {
    from_checks(&suites::orthogonality())
}

fn criterion_4() -> Outcome {
    from_checks(&suites::invariant_relations())
}

/// `Gamma(x)` for `x = k/2`, in units where `sqrt(pi) = 1`.
fn gamma_half(twice: i64) -> BigRational {
    if twice % 2 == 0 {
        BigRational::from_integer(fact(twice / 2 - 1))
    } else {
        // Gamma(k + 1/2) / sqrt(pi) = (2k)! / (4^k k!)
        let k = twice / 2;
        q(fact(2 * k), int(4).pow(k as u32) * fact(k))
    }
}

fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut total = 0;
    for n in 1..=10i64 {
        for p in 0..=6i64 {
            for mults in compositions(p as usize) {
                let t = mults.len() as i64;
                if t > 4 || t > n {
                    continue;
                }
                total += 1;
                // Dirichlet: Gamma(n/2) prod Gamma(m_i + 1/2) / (pi^{t/2} Gamma(p + n/2))
                let mut want = gamma_half(n) / gamma_half(2 * p + n);
                for &m in &mults {
                    want *= gamma_half(2 * m as i64 + 1);
                }
                let got = s_multi(&SphereSpec::new(n as usize, mults.clone()).unwrap()).unwrap();
                if got != want {
                    failures.push(format!("S{mults:?} n={n}: {got} != {want}"));
                }
                if t == 1 && s_single(p as usize, n as usize).unwrap() != want {
                    failures.push(format!("S({p}) n={n} against Gamma form"));
                }
            }
            // constraint identity
            for mults in compositions(p as usize) {
                let t = mults.len() as i64;
                if t > 4 || t >= n {
                    continue;
                }
                total += 1;
                let s = |m: Vec<usize>| s_multi(&SphereSpec::new(n as usize, m).unwrap()).unwrap();
                let mut with_one = mults.clone();
                with_one.push(1);
                let mut lhs = s(with_one) * BigRational::from_integer(int(n - t));
                for i in 0..mults.len() {
                    let mut m = mults.clone();
                    m[i] += 1;
                    lhs += s(m);
                }
                if lhs != s(mults.clone()) {
                    failures.push(format!("constraint identity S{mults:?} n={n}"));
                }
            }
        }
    }
    outcome(failures, total, "sphere checks")
}

fn criterion_6() -> Outcome {
    from_checks(&suites::mc_crosscheck(200_000, 20_240_601))
}

fn random_query(rng: &mut StdRng) -> MomentQuery {
    let n = rng.random_range(1..=4usize);
    let p = rng.random_range(1..=4usize);
    let i: Vec<usize> = (0..p).map(|_| rng.random_range(1..=n)).collect();
    let j: Vec<usize> = (0..p).map(|_| rng.random_range(1..=n)).collect();
    let (mut k, mut l) = (i.clone(), j.clone());
    k.shuffle(rng);
    l.shuffle(rng);
    if rng.random_bool(0.1) {
        // occasionally a zero query
        l[0] = rng.random_range(1..=n);
    }
    MomentQuery::new(n, i, j, k, l)
}

fn all_perms(p: usize) -> Vec<Vec<usize>> {
    let mut v: Vec<usize> = (0..p).collect();
    let mut out = vec![v.clone()];
    loop {
        let Some(a) = (0..p.saturating_sub(1)).rev().find(|&a| v[a] < v[a + 1]) else {
            return out;
        };
        let b = (a + 1..p).rev().find(|&b| v[b] > v[a]).unwrap();
        v.swap(a, b);
        v[a + 1..].reverse();
        out.push(v.clone());
    }
}

/// Every admissible `(R, Q)` gives the same group sum.
fn choice_independent(query: &MomentQuery) -> Result<bool, String> {
    let base = evaluate_fixed(query).map_err(|e| e.to_string())?;
    let m = validate(query).map_err(|e| e.to_string())?;
    if m.zero {
        return Ok(base.is_zero());
    }
    let p = m.p;
    let perms = all_perms(p);
    let n = query.n as u32;
    for r in &perms {
        let r = Permutation::from_images(r.clone()).unwrap();
        if r.permute(query.i.as_slice()) != query.k.0 {
            continue;
        }
        let lr = r.inverse().permute(query.l.as_slice());
        for qp in &perms {
            let qp = Permutation::from_images(qp.clone()).unwrap();
            if qp.permute(query.j.as_slice()) != lr {
                continue;
            }
            let cm = CanonicalMoment {
                n: query.n,
                p,
                i: query.i.clone(),
                j: query.j.clone(),
                q: qp,
                zero: false,
            };
            let v = weingarten::moment(&cm, NMode::Fixed(n))
                .map_err(|e| e.to_string())?
                .exact();
            if v != base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let query = random_query(&mut rng);
        let n = query.n;
        let base = match evaluate_fixed(&query) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{query}: {e}"));
                continue;
            }
        };
        // relabel rows and columns by independent permutations of 1..=n
        let mut rows: Vec<usize> = (1..=n).collect();
        let mut cols = rows.clone();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let ren = |s: &IndexSet, map: &[usize]| IndexSet(s.0.iter().map(|&x| map[x - 1]).collect());
        let relabeled = MomentQuery {
            n,
            i: ren(&query.i, &rows),
            j: ren(&query.j, &cols),
            k: ren(&query.k, &rows),
            l: ren(&query.l, &cols),
        };
        if evaluate_fixed(&relabeled).ok() != Some(base.clone()) {
            failures.push(format!("relabel {query}"));
        }
        if evaluate_fixed(&query.transposed()).ok() != Some(base.clone()) {
            failures.push(format!("transpose {query}"));
        }
        // reorder the U* pairs and the U pairs independently
        let p = query.i.len();
        let mut a: Vec<usize> = (0..p).collect();
        let mut b: Vec<usize> = (0..p).collect();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let pick = |s: &IndexSet, ord: &[usize]| IndexSet(ord.iter().map(|&x| s.0[x]).collect());
        let reordered = MomentQuery {
            n,
            i: pick(&query.i, &a),
            j: pick(&query.j, &a),
            k: pick(&query.k, &b),
            l: pick(&query.l, &b),
        };
        if evaluate_fixed(&reordered).ok() != Some(base.clone()) {
            failures.push(format!("pair reorder {query}"));
        }
        match choice_independent(&query) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("choice dependence {query}")),
            Err(e) => failures.push(format!("{query}: {e}")),
        }
        if canonicalize(&query).is_err() {
            failures.push(format!("canonicalize {query}"));
        }
    }
    outcome(failures, 200, "random queries")
}

type Criterion = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 7] = [
        ("1 closed forms reproduced by the group sum", criterion_1),
        ("2 class integrals and unitarity sums", criterion_2),
        ("3 characters and dimensions", criterion_3),
        ("4 invariant relations", criterion_4),
        ("5 sphere moments", criterion_5),
        ("6 Monte Carlo cross-check", criterion_6),
        ("7 invariance properties", criterion_7),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {name} ({:.1} s): {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        all &= o.passed;
    }
    if !all {
        std::process::exit(1);
    }
}
