use std::collections::HashSet;

use haar_moments::arith::{factorial, BigRational, Poly, RatFun};
use haar_moments::combinat::{character, class_size, dim_sym, enumerate_partitions, Partition};
use haar_moments::invariant::diagrams::{degree3_query, fan_query, recognize, x_query, z_query};
use haar_moments::invariant::relations::{unitarity_sum_holds, verify_relation, Relation};
use haar_moments::invariant::{
    degree3, x_closed_form, x_integral, z_integral, Degree3, FanSpec, XSpec,
};
use haar_moments::query::{canonicalize, IndexSet, MomentQuery};
use haar_moments::sphere::{s_multi, SphereSpec};
use haar_moments::weingarten::{evaluate_fixed, evaluate_symbolic, NMode};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 1..4).prop_map(|c| Poly::from_i64s(&c))
}

/// Products of a few linear factors `n + k`, like the denominators that
/// actually occur.
fn linear_product() -> impl Strategy<Value = Poly> {
    (1i64..=3, prop::collection::vec(-3i64..=4, 0..4)).prop_map(|(c, ks)| {
        ks.iter()
            .fold(Poly::constant(c), |acc, &k| &acc * &Poly::linear(k))
    })
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (poly(), linear_product()).prop_map(|(a, b)| RatFun::new(a, b).unwrap())
}

/// Nonzero query at `n` with degree `p`: `K` and `L` shuffle `I` and `J`.
fn query(max_n: usize, max_p: usize) -> impl Strategy<Value = MomentQuery> {
    (1..=max_n, 0..=max_p)
        .prop_flat_map(|(n, p)| {
            (
                Just(n),
                prop::collection::vec(1..=n, p),
                prop::collection::vec(1..=n, p),
                Just(p),
            )
        })
        .prop_flat_map(|(n, i, j, p)| {
            let perm = Just((0..p).collect::<Vec<usize>>()).prop_shuffle();
            (Just(n), Just(i), Just(j), perm.clone(), perm)
        })
        .prop_map(|(n, i, j, a, b)| {
            let k: Vec<usize> = a.iter().map(|&x| i[x]).collect();
            let l: Vec<usize> = b.iter().map(|&x| j[x]).collect();
            MomentQuery::new(n, i, j, k, l)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_multiplicative(f in ratfun(), g in ratfun(), n in 5i64..30) {
        let fg = &f * &g;
        let sum = &f + &g;
        if let (Ok(a), Ok(b)) = (f.eval(n), g.eval(n)) {
            prop_assert_eq!(fg.eval(n).unwrap(), &a * &b);
            prop_assert_eq!(sum.eval(n).unwrap(), a + b);
        }
    }

    #[test]
    fn normalization_is_idempotent(f in ratfun()) {
        let again = RatFun::new(f.num().clone(), f.den().clone()).unwrap();
        prop_assert_eq!(again.num().coeffs(), f.num().coeffs());
        prop_assert_eq!(again.den().coeffs(), f.den().coeffs());
        prop_assert!(f.den().leading().unwrap() > &BigInt::zero());
    }

    #[test]
    fn equality_is_value_equality(f in ratfun(), g in ratfun()) {
        let same = (5..12).all(|n| f.eval(n).ok() == g.eval(n).ok());
        prop_assert_eq!(f == g, same);
    }

    #[test]
    fn pair_reordering(q in query(4, 4), seed in any::<u64>()) {
        let p = q.i.len();
        let rot = (seed as usize) % p.max(1);
        let sh = |s: &IndexSet| {
            let mut v = s.0.clone();
            v.rotate_left(rot);
            IndexSet(v)
        };
        let mut swapped = q.clone();
        swapped.i = sh(&q.i);
        swapped.j = sh(&q.j);
        prop_assert_eq!(evaluate_fixed(&swapped).unwrap(), evaluate_fixed(&q).unwrap());
        let mut swapped = q.clone();
        swapped.k.0.reverse();
        swapped.l.0.reverse();
        prop_assert_eq!(evaluate_fixed(&swapped).unwrap(), evaluate_fixed(&q).unwrap());
    }

    #[test]
    fn relabel_and_transpose(q in query(4, 4), shift in 0usize..4) {
        let n = q.n;
        let map = |s: &IndexSet| IndexSet(s.0.iter().map(|&x| (x - 1 + shift) % n + 1).collect());
        let relabeled = MomentQuery { n, i: map(&q.i), j: q.j.clone(), k: map(&q.k), l: q.l.clone() };
        let v = evaluate_fixed(&q).unwrap();
        prop_assert_eq!(evaluate_fixed(&relabeled).unwrap(), v.clone());
        prop_assert_eq!(evaluate_fixed(&q.transposed()).unwrap(), v);
    }

    #[test]
    fn symbolic_matches_fixed_from_p(q in query(4, 4)) {
        let sym = evaluate_symbolic(&q).unwrap();
        let p = q.i.len().max(1);
        for n in q.n.max(p)..p + 4 {
            prop_assert_eq!(sym.eval(n as i64).unwrap(), evaluate_fixed(&q.with_n(n)).unwrap());
        }
    }

    #[test]
    fn unitarity_sum(q in query(4, 2), i in 1usize..=4, k in 1usize..=4, n in 2usize..=4) {
        prop_assume!(q.max_index() <= n && i <= n && k <= n);
        prop_assert!(unitarity_sum_holds(&q.with_n(n), i, k, n).unwrap());
    }

    #[test]
    fn recognized_forms_agree_with_engine(q in query(3, 3)) {
        if let Some(form) = recognize(&q).unwrap() {
            prop_assert_eq!(form.value(), evaluate_symbolic(&q).unwrap());
        }
    }

    #[test]
    fn sphere_symmetric_and_decreasing(
        // at n = 1 the sphere is {-1, 1} and every moment is 1
        n in 2usize..=8,
        mults in prop::collection::vec(1usize..=4, 1..=4),
    ) {
        prop_assume!(mults.len() <= n);
        let s = |m: Vec<usize>| s_multi(&SphereSpec::new(n, m).unwrap()).unwrap();
        let v = s(mults.clone());
        prop_assert!(v > BigRational::zero() && v <= BigRational::one());
        let mut rev = mults.clone();
        rev.reverse();
        prop_assert_eq!(s(rev), v.clone());
        for i in 0..mults.len() {
            let mut m = mults.clone();
            m[i] += 1;
            prop_assert!(s(m) < v);
        }
    }
}

#[test]
fn degree_zero_is_one() {
    let q = MomentQuery::new(3, vec![], vec![], vec![], vec![]);
    assert_eq!(evaluate_fixed(&q).unwrap(), BigRational::one());
    assert_eq!(evaluate_symbolic(&q).unwrap(), RatFun::one());
}

#[test]
fn first_degree_is_one_over_n() {
    for n in 1..=6 {
        for i in 1..=n {
            for a in 1..=n {
                let q = MomentQuery::new(n, vec![i], vec![a], vec![i], vec![a]);
                assert_eq!(
                    evaluate_fixed(&q).unwrap(),
                    BigRational::new(1.into(), (n as i64).into())
                );
            }
        }
    }
}

#[test]
fn class_sizes_and_identity_characters() {
    for p in 1..=8 {
        let parts = enumerate_partitions(p);
        let total: u64 = parts.iter().map(class_size).sum();
        assert_eq!(BigInt::from(total), factorial(p as u64));
        for f in &parts {
            assert_eq!(
                character(f, &Partition::ones(p)).unwrap() as u64,
                dim_sym(f)
            );
        }
    }
}

#[test]
fn direct_integrals_are_positive() {
    let mut seen = HashSet::new();
    for n in 1..=5usize {
        for p in 1..=3u32 {
            for code in 0..n.pow(2 * p) {
                let digits: Vec<usize> = (0..2 * p).map(|d| code / n.pow(d) % n + 1).collect();
                let (i, j) = digits.split_at(p as usize);
                let q = MomentQuery::new(n, i.to_vec(), j.to_vec(), i.to_vec(), j.to_vec());
                let c = canonicalize(&q).unwrap();
                if !seen.insert((n, c.i.clone(), c.j.clone(), c.q.clone())) {
                    continue;
                }
                assert!(c.is_direct());
                let v = evaluate_fixed(&q).unwrap();
                assert!(v > BigRational::zero(), "{q} = {v}");
            }
        }
    }
}

/// Closed forms hold at every `n` from their validity bound, including
/// `n < p` where only the row-restricted fixed-`n` sum is meaningful.
#[test]
fn closed_forms_from_validity_bound() {
    let mut cases: Vec<(MomentQuery, RatFun)> = Vec::new();
    for m1 in 0..=2 {
        for m2 in 0..=2 {
            for m3 in 0..=2 {
                cases.push((z_query(m1, m2, m3), z_integral(m1, m2, m3)));
            }
        }
    }
    for id in Degree3::ALL {
        cases.push((degree3_query(id), degree3(id)));
    }
    for mults in [vec![3], vec![2, 2], vec![1, 1, 1, 1], vec![4, 1]] {
        let spec = FanSpec::new(mults).unwrap();
        cases.push((fan_query(&spec), haar_moments::invariant::fan_f(&spec)));
    }
    for spec in XSpec::enumerate(3).into_iter().chain(XSpec::enumerate(4)) {
        if let Some(f) = x_closed_form(&spec) {
            cases.push((x_query(&spec), f));
        }
    }
    for (q, f) in cases {
        let start = (f.validity_min_n() as usize).max(q.max_index());
        for n in start..=q.i.len() + 6 {
            assert_eq!(
                evaluate_fixed(&q.with_n(n)).unwrap(),
                f.eval(n as i64).unwrap(),
                "{q} at n={n}"
            );
        }
    }
}

#[test]
fn x_integral_modes_and_fallback() {
    // no closed form: engine fallback, symbolic and fixed agree
    let spec = XSpec::new([1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
    assert!(x_closed_form(&spec).is_none());
    let sym = x_integral(&spec, NMode::Symbolic).unwrap().symbolic();
    for n in 2..=6u32 {
        let fixed = x_integral(&spec, NMode::Fixed(n)).unwrap().exact();
        if n >= 4 {
            assert_eq!(sym.eval(n as i64).unwrap(), fixed);
        }
        assert_eq!(
            fixed,
            evaluate_fixed(&x_query(&spec).with_n(n as usize)).unwrap()
        );
    }
    // closed-form examples
    for (w, want) in [
        ([0, 1, 2, 1, 0, 1, 2, 1], z_integral(1, 2, 1)),
        ([1, 0, 2, 1, 1, 0, 2, 1], z_integral(1, 1, 2)),
    ] {
        let spec = XSpec::new(w).unwrap();
        assert_eq!(x_integral(&spec, NMode::Symbolic).unwrap().symbolic(), want);
    }
}

#[test]
fn fan_relation_with_and_without_spectators() {
    for d in 1..=5 {
        for mults in haar_moments::invariant::relations::compositions(d) {
            for spectator in [false, true] {
                let rel = Relation::Fan {
                    mults: mults.clone(),
                    spectator,
                };
                assert!(verify_relation(&rel, &[d + 2, d + 4]).unwrap(), "{rel}");
            }
        }
    }
}

#[test]
fn both_x5_parameterizations_match_the_engine() {
    use haar_moments::invariant::diagrams::x5_literal_spec;
    use haar_moments::invariant::{x_special, XVariant};
    for t in 0..=3usize {
        for u in 1..=3usize {
            let spec = XSpec::new([0, 1, t, u, 1, 0, t + 1, u - 1]).unwrap();
            assert_eq!(
                evaluate_symbolic(&x_query(&spec)).unwrap(),
                x_special(t, u, XVariant::X5).unwrap()
            );
            if t >= 1 {
                // the literal labels describe a diagram of degree t + u
                let lit = x5_literal_spec(t, u).unwrap();
                assert_eq!(
                    evaluate_symbolic(&x_query(&lit)).unwrap(),
                    x_special(t, u - 1, XVariant::X4).unwrap()
                );
            }
        }
    }
}
