//! Named verification suites run by `verify --suite`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{factorial, to_f64, BigRational, Poly, RatFun};
use crate::combinat::{
    character, class_size, dim_sym, dim_unitary, enumerate_partitions, sum_dim_squares,
    vandermonde_dim, Partition,
};
use crate::error::{Error, Result};
use crate::invariant::diagrams::{degree3_query, fan_query, x_query, z_query};
use crate::invariant::relations::{compositions, unitarity_sum_holds, verify_relation, Relation};
use crate::invariant::{
    degree3, exchange_e2, fan_f, x_special, z_integral, Degree3, FanSpec, XSpec, XVariant,
};
use crate::montecarlo::{estimate_moment, estimate_sphere_moment, SamplerConfig};
use crate::query::MomentQuery;
use crate::sphere::{s_multi, SphereSpec};
use crate::weingarten::{evaluate_fixed, evaluate_symbolic, xi, NMode};

pub const SUITES: [&str; 5] = [
    "paper-tables",
    "invariant-relations",
    "orthogonality",
    "unitarity-sums",
    "mc-crosscheck",
];

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {}: {}", self.name, self.detail)
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn from_result(name: String, r: Result<bool>) -> Check {
    match r {
        Ok(ok) => check(name, ok, ""),
        Err(e) => check(name, false, e.to_string()),
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let checks = match name {
        "paper-tables" => paper_tables(),
        "invariant-relations" => invariant_relations(),
        "orthogonality" => orthogonality(),
        "unitarity-sums" => unitarity_sums(),
        "mc-crosscheck" => mc_crosscheck(200_000, 20_240_601),
        _ => return Err(Error::InvalidParameter(format!("unknown suite {name}"))),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

fn symbolic_matches(name: String, q: &MomentQuery, want: &RatFun) -> Check {
    match evaluate_symbolic(q) {
        Ok(got) if got == *want => check(name, true, want.to_string()),
        Ok(got) => check(name, false, format!("engine {got}, closed form {want}")),
        Err(e) => check(name, false, e.to_string()),
    }
}

/// Group-sum engine against every closed form, as reduced rational
/// functions.
pub fn paper_tables() -> Vec<Check> {
    let mut cases: Vec<(String, MomentQuery, RatFun)> = Vec::new();
    let one = FanSpec::new(vec![1]).unwrap();
    cases.push((
        "<1,1|1,1> = 1/n".into(),
        fan_query(&one),
        RatFun::one().div(&RatFun::n()).unwrap(),
    ));
    for d in 1..=5 {
        for mults in compositions(d) {
            let spec = FanSpec::new(mults).unwrap();
            let name = format!("fan F{}", crate::query::IndexSet(spec.mults().to_vec()));
            cases.push((name, fan_query(&spec), fan_f(&spec)));
        }
    }
    for m1 in 0..=3 {
        for m2 in 0..=3 {
            for m3 in 0..=3 {
                cases.push((
                    format!("Z({m1},{m2},{m3})"),
                    z_query(m1, m2, m3),
                    z_integral(m1, m2, m3),
                ));
            }
        }
    }
    let e2 = XSpec::new([1, 0, 1, 0, 0, 1, 0, 1]).unwrap();
    cases.push(("E(2)".into(), x_query(&e2), exchange_e2()));
    for id in Degree3::ALL {
        cases.push((id.to_string(), degree3_query(id), degree3(id)));
    }
    for t in 0..=4usize {
        for u in 0..=4 - t {
            if t >= 1 {
                let spec = XSpec::new([1, 0, t, u, 0, 1, t - 1, u + 1]).unwrap();
                let v = x_special(t, u, XVariant::X4).unwrap();
                cases.push((format!("x4 t={t} u={u} {spec}"), x_query(&spec), v));
            }
            if u >= 1 {
                let spec = XSpec::new([0, 1, t, u, 1, 0, t + 1, u - 1]).unwrap();
                let v = x_special(t, u, XVariant::X5).unwrap();
                cases.push((format!("x5 t={t} u={u} {spec}"), x_query(&spec), v));
            }
        }
    }
    cases
        .into_iter()
        .map(|(name, q, want)| symbolic_matches(name, &q, &want))
        .collect()
}

/// The full relation library, symbolically and at `n = p..=p+5`.
pub fn invariant_relations() -> Vec<Check> {
    Relation::library()
        .par_iter()
        .map(|rel| {
            let p = rel.linear().map(|l| l.degree()).unwrap_or(1).max(1);
            let ns: Vec<usize> = (p..=p + 5).collect();
            from_result(rel.to_string(), verify_relation(rel, &ns))
        })
        .collect()
}

/// Characters and dimensions: `sum d_f^2 = p!`, row and column
/// orthogonality, partition counts, and hook-content against Vandermonde.
pub fn orthogonality() -> Vec<Check> {
    let mut out = Vec::new();
    for p in 1..=8 {
        let s = sum_dim_squares(p);
        out.push(check(
            format!("sum d_f^2 = {p}!"),
            s == factorial(p as u64),
            s.to_string(),
        ));
    }
    const GAMMA: [usize; 7] = [1, 2, 3, 5, 7, 11, 15];
    for (k, &g) in GAMMA.iter().enumerate() {
        let p = k + 1;
        let got = enumerate_partitions(p).len();
        out.push(check(format!("gamma_{p} = {g}"), got == g, got.to_string()));
    }
    for p in 1..=7 {
        out.push(character_orthogonality(p));
    }
    for p in 1..=6 {
        for f in enumerate_partitions(p) {
            let poly = dim_unitary(&f);
            let ok = (f.len() as u32..f.len() as u32 + 5).all(|n| {
                let n = n.max(1);
                Some(poly.eval_unchecked(n as i64).unwrap()) == vandermonde_dim(&f, n)
            });
            out.push(check(
                format!("dim U(n) [{f}] = Vandermonde ratio"),
                ok,
                poly.to_string(),
            ));
        }
    }
    out
}

fn character_orthogonality(p: usize) -> Check {
    let parts = enumerate_partitions(p);
    let pf = factorial(p as u64);
    let table: Vec<Vec<i64>> = parts
        .iter()
        .map(|f| parts.iter().map(|c| character(f, c).unwrap()).collect())
        .collect();
    let sizes: Vec<BigInt> = parts.iter().map(|c| BigInt::from(class_size(c))).collect();
    let mut ok = true;
    // chi_f on the identity class is d_f
    let id = parts.iter().position(|c| *c == Partition::ones(p)).unwrap();
    for a in 0..parts.len() {
        ok &= table[a][id] as u64 == dim_sym(&parts[a]);
        for b in 0..parts.len() {
            let row: BigInt = (0..parts.len())
                .map(|k| &sizes[k] * table[a][k] * table[b][k])
                .sum();
            ok &= row == if a == b { pf.clone() } else { BigInt::zero() };
            let col: BigInt = (0..parts.len())
                .map(|f| BigInt::from(table[f][a] * table[f][b]))
                .sum();
            let want = if a == b {
                &pf / &sizes[a]
            } else {
                BigInt::zero()
            };
            ok &= col == want;
        }
    }
    check(
        format!("character orthogonality p={p}"),
        ok,
        format!("{} classes", parts.len()),
    )
}

/// Closed forms of the class integrals at `p = 2, 3`.
pub fn xi_closed_forms() -> Vec<(Partition, RatFun)> {
    let lin = |k: i64| Poly::linear(k);
    let prod = |ks: &[i64]| ks.iter().fold(Poly::one(), |a, &k| &a * &lin(k));
    let rf = |num: Poly, den: Poly| RatFun::new(num, den).unwrap();
    vec![
        (Partition::new(vec![1, 1]), rf(Poly::one(), prod(&[-1, 1]))),
        (
            Partition::new(vec![2]),
            rf(Poly::constant(-1), prod(&[-1, 0, 1])),
        ),
        (
            Partition::new(vec![1, 1, 1]),
            rf(Poly::from_i64s(&[-2, 0, 1]), prod(&[-2, -1, 0, 1, 2])),
        ),
        (
            Partition::new(vec![2, 1]),
            rf(Poly::constant(-1), prod(&[-2, -1, 1, 2])),
        ),
        (
            Partition::new(vec![3]),
            rf(Poly::constant(2), prod(&[-2, -1, 0, 1, 2])),
        ),
    ]
}

fn random_prefix(rng: &mut ChaCha8Rng, p: usize, n: usize) -> (MomentQuery, usize, usize) {
    let mut pick = |k: usize| (rng.next_u64() % k as u64) as usize;
    let i: Vec<usize> = (0..p).map(|_| pick(n) + 1).collect();
    let j: Vec<usize> = (0..p).map(|_| pick(n) + 1).collect();
    let shuffle = |xs: &[usize], pick: &mut dyn FnMut(usize) -> usize| {
        let mut v = xs.to_vec();
        for a in (1..v.len()).rev() {
            v.swap(a, pick(a + 1));
        }
        v
    };
    let k = shuffle(&i, &mut pick);
    let l = shuffle(&j, &mut pick);
    let ip = pick(n) + 1;
    let kp = if pick(2) == 0 { ip } else { pick(n) + 1 };
    (MomentQuery::new(n, i, j, k, l), ip, kp)
}

/// `xi` against the small closed forms, then the unitarity sum over a free
/// column on random queries of degree `p <= 5` at `n = 2, 3, 4`.
pub fn unitarity_sums() -> Vec<Check> {
    let mut out = Vec::new();
    for (c, want) in xi_closed_forms() {
        let got = xi(&c, NMode::Symbolic).map(|v| v.symbolic());
        out.push(check(
            format!("xi({c})"),
            got.as_ref() == Ok(&want),
            format!("{want}"),
        ));
    }
    for p in 1..=5usize {
        for n in 2..=4usize {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * p as u64 + n as u64);
            let cases: Vec<_> = (0..50).map(|_| random_prefix(&mut rng, p - 1, n)).collect();
            let failures: Vec<String> = cases
                .par_iter()
                .filter_map(
                    |(prefix, ip, kp)| match unitarity_sum_holds(prefix, *ip, *kp, n) {
                        Ok(true) => None,
                        Ok(false) => Some(format!("{prefix} + ({ip},{kp})")),
                        Err(e) => Some(e.to_string()),
                    },
                )
                .collect();
            out.push(check(
                format!("unitarity sums p={p} n={n} (50 random)"),
                failures.is_empty(),
                failures.join("; "),
            ));
        }
    }
    out
}

/// One designated value for the sampling cross-check.
#[derive(Clone, Debug)]
pub enum Designated {
    Unitary { label: String, query: MomentQuery },
    Sphere { label: String, mults: Vec<usize> },
}

impl Designated {
    pub fn label(&self) -> &str {
        match self {
            Designated::Unitary { label, .. } | Designated::Sphere { label, .. } => label,
        }
    }

    /// Exact value at `n`: the fixed-`n` group sum, or the sphere formula.
    pub fn exact(&self, n: usize) -> Result<BigRational> {
        match self {
            Designated::Unitary { query, .. } => evaluate_fixed(&query.with_n(n)),
            Designated::Sphere { mults, .. } => s_multi(&SphereSpec::new(n, mults.clone())?),
        }
    }

    pub fn estimate(&self, cfg: &SamplerConfig) -> Result<crate::montecarlo::Estimate> {
        match self {
            Designated::Unitary { query, .. } => estimate_moment(&query.with_n(cfg.n), cfg),
            Designated::Sphere { mults, .. } => {
                let exps: Vec<usize> = mults.iter().map(|m| 2 * m).collect();
                estimate_sphere_moment(&exps, cfg)
            }
        }
    }
}

/// Twenty values that make sense at `n = 2, 3, 4`.
pub fn designated_values() -> Vec<Designated> {
    let u = |label: &str, query: MomentQuery| Designated::Unitary {
        label: label.to_string(),
        query,
    };
    let fan = |m: &[usize]| fan_query(&FanSpec::new(m.to_vec()).unwrap());
    let x = |w: [usize; 8]| x_query(&XSpec::new(w).unwrap());
    let s = |label: &str, m: &[usize]| Designated::Sphere {
        label: label.to_string(),
        mults: m.to_vec(),
    };
    vec![
        u("F(1)", fan(&[1])),
        u("F(2)", fan(&[2])),
        u("F(3)", fan(&[3])),
        u("F(1,1)", fan(&[1, 1])),
        u("F(2,1)", fan(&[2, 1])),
        u("Z(1,0,1)", z_query(1, 0, 1)),
        u("Z(1,1,1)", z_query(1, 1, 1)),
        u("Z(2,0,1)", z_query(2, 0, 1)),
        u("Z(1,1,2)", z_query(1, 1, 2)),
        u("E(2)", x([1, 0, 1, 0, 0, 1, 0, 1])),
        u("I(6c)", degree3_query(Degree3::C)),
        u("I(6d) = x4(1,1)", degree3_query(Degree3::D)),
        u("x4(2,0)", x([1, 0, 2, 0, 0, 1, 1, 1])),
        u("x5(1,1)", x([0, 1, 1, 1, 1, 0, 2, 0])),
        s("S(1)", &[1]),
        s("S(2)", &[2]),
        s("S(3)", &[3]),
        s("S(1,1)", &[1, 1]),
        s("S(2,1)", &[2, 1]),
        s("S(2,2)", &[2, 2]),
    ]
}

/// Sampling estimates of the designated values, plus the first two
/// moments of a single entry.
pub fn mc_crosscheck(samples: u64, seed: u64) -> Vec<Check> {
    let mut jobs: Vec<(String, usize, Designated)> = Vec::new();
    for n in 2..=4 {
        for d in designated_values() {
            jobs.push((format!("{} n={n}", d.label()), n, d));
        }
        let q = MomentQuery::new(n, vec![1], vec![1], vec![1], vec![1]);
        jobs.push((
            format!("E|U11|^2 n={n}"),
            n,
            Designated::Unitary {
                label: "E|U11|^2".into(),
                query: q,
            },
        ));
        let q = MomentQuery::new(n, vec![], vec![], vec![1], vec![1]);
        jobs.push((
            format!("E U11 n={n}"),
            n,
            Designated::Unitary {
                label: "E U11".into(),
                query: q,
            },
        ));
    }
    jobs.iter()
        .enumerate()
        .map(|(k, (name, n, d))| {
            let run = || -> Result<Check> {
                let cfg = SamplerConfig::new(seed.wrapping_add(k as u64), samples, *n)?;
                let exact = d.exact(*n)?;
                let est = d.estimate(&cfg)?;
                let x = to_f64(&exact);
                Ok(check(
                    name.clone(),
                    est.agrees_with(x),
                    format!(
                        "exact {exact} ~ {x:.6}, mean {:.6}{:+.1e}i, stderr {:.2e}, {:.2} sigma",
                        est.mean.re,
                        est.mean.im,
                        est.stderr,
                        est.sigmas(x)
                    ),
                ))
            };
            run().unwrap_or_else(|e| check(name.clone(), false, e.to_string()))
        })
        .collect()
}
