//! Group-theoretic evaluation of canonical moments.
//!
//! ```text
//! <I,J|I,J_Q> = sum_{R in G_I} sum_{S in G_J} xi(cycle type of S∘Q∘R)
//! xi(c)       = sum_f d_f^2 chi_f(c) / ((p!)^2 dbar_f)
//! ```
//!
//! `xi(c)` is the moment for index sets without repeated values, so it
//! depends only on the class `c`. At fixed `n` the sum over `f` runs over
//! diagrams with at most `n` rows, which keeps fixed-`n` values correct even
//! for `n < p` where the symbolic expressions have poles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::arith::{factorial, BigRational, Poly, RatFun};
use crate::combinat::{
    character, cycle_lengths, dim_sym, enumerate_partitions, symmetry_group, CycleType, Partition,
    Permutation, MAX_DEGREE,
};
use crate::error::{Error, Result};
use crate::query::{canonicalize, CanonicalMoment, IndexSet, MomentQuery};

/// Largest number of `(R, S)` pairs `class_counts` will enumerate.
pub const MAX_STABILIZER_PAIRS: u128 = 100_000_000;

/// Evaluate as a rational function of `n`, or exactly at one matrix size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NMode {
    Symbolic,
    Fixed(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentValue {
    Symbolic(RatFun),
    Exact(BigRational),
}

impl MomentValue {
    pub fn as_symbolic(&self) -> Option<&RatFun> {
        match self {
            MomentValue::Symbolic(f) => Some(f),
            MomentValue::Exact(_) => None,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            MomentValue::Exact(q) => Some(q),
            MomentValue::Symbolic(_) => None,
        }
    }

    /// Unwraps a fixed-`n` value; panics on a symbolic one.
    pub fn exact(self) -> BigRational {
        match self {
            MomentValue::Exact(q) => q,
            MomentValue::Symbolic(f) => panic!("expected an exact value, got {f}"),
        }
    }

    /// Unwraps a symbolic value; panics on a fixed-`n` one.
    pub fn symbolic(self) -> RatFun {
        match self {
            MomentValue::Symbolic(f) => f,
            MomentValue::Exact(q) => panic!("expected a symbolic value, got {q}"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MomentValue::Symbolic(f) => f.is_zero(),
            MomentValue::Exact(q) => q.is_zero(),
        }
    }
}

impl fmt::Display for MomentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentValue::Symbolic(r) => write!(f, "{r}"),
            MomentValue::Exact(q) => write!(f, "{q}"),
        }
    }
}

/// `xi(c)` for every class of `S_p`, as rational functions of `n`.
#[derive(Clone, Debug)]
pub struct ClassIntegralTable {
    pub p: usize,
    pub entries: BTreeMap<CycleType, RatFun>,
}

/// `xi(c)` for every class of `S_p` at a fixed `n`.
#[derive(Clone, Debug)]
pub struct FixedClassIntegralTable {
    pub p: usize,
    pub n: u32,
    pub entries: BTreeMap<CycleType, BigRational>,
}

/// Number of pairs `(R, S)` in `G_I x G_J` with `S∘Q∘R` in each class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub counts: BTreeMap<CycleType, u64>,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, c: &CycleType) -> u64 {
        self.counts.get(c).copied().unwrap_or(0)
    }
}

fn check_degree(p: usize) -> Result<()> {
    if p > MAX_DEGREE {
        Err(Error::DegreeTooLarge(p))
    } else {
        Ok(())
    }
}

/// `chi_f(c) d_f / p!`, the common factor of `d_f^2 chi_f(c) / ((p!)^2 dbar_f)`
/// once the hook product is cancelled against `d_f`. What remains is
/// `1 / prod_cells (n + content)`.
fn class_weight(f: &Partition, c: &CycleType) -> BigRational {
    let chi = character(f, c).expect("weights agree");
    BigRational::new(
        BigInt::from(chi) * BigInt::from(dim_sym(f)),
        factorial(f.weight() as u64),
    )
}

fn build_symbolic_table(p: usize) -> ClassIntegralTable {
    let shapes = enumerate_partitions(p);
    // Common denominator: for each linear factor (n + k), its largest power
    // over all diagrams.
    let content_polys: Vec<(Poly, BTreeMap<i64, u32>)> = shapes
        .iter()
        .map(|f| {
            let mut mult = BTreeMap::new();
            for c in f.contents() {
                *mult.entry(c).or_insert(0u32) += 1;
            }
            let poly = mult
                .iter()
                .fold(Poly::one(), |acc, (&k, &e)| &acc * &Poly::linear(k).pow(e));
            (poly, mult)
        })
        .collect();
    let mut lcm: BTreeMap<i64, u32> = BTreeMap::new();
    for (_, mult) in &content_polys {
        for (&k, &e) in mult {
            let slot = lcm.entry(k).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let common = lcm
        .iter()
        .fold(Poly::one(), |acc, (&k, &e)| &acc * &Poly::linear(k).pow(e));
    // Each diagram's cofactor common / prod(n + content).
    let cofactors: Vec<Poly> = content_polys
        .iter()
        .map(|(poly, _)| common.div_exact(poly).expect("lcm is a multiple"))
        .collect();

    let classes = enumerate_partitions(p);
    let entries = classes
        .par_iter()
        .map(|c| {
            // Integer numerator over the common denominator p! * common.
            let mut top = Poly::zero();
            for (f, cof) in shapes.iter().zip(&cofactors) {
                let chi = character(f, c).expect("weights agree");
                if chi == 0 {
                    continue;
                }
                let w = BigInt::from(chi) * BigInt::from(dim_sym(f));
                top = &top + &cof.scale(&w);
            }
            let bottom = common.scale(&factorial(p as u64));
            let value = RatFun::new(top, bottom)
                .expect("nonzero denominator")
                .with_validity(p.max(1) as i64);
            (c.clone(), value)
        })
        .collect();
    ClassIntegralTable { p, entries }
}

fn build_fixed_table(p: usize, n: u32) -> FixedClassIntegralTable {
    let shapes: Vec<Partition> = enumerate_partitions(p)
        .into_iter()
        .filter(|f| f.len() <= n as usize)
        .collect();
    let inv_content: Vec<BigRational> = shapes
        .iter()
        .map(|f| {
            let prod: BigInt = f
                .contents()
                .into_iter()
                .map(|c| BigInt::from(n as i64 + c))
                .product();
            BigRational::new(BigInt::from(1), prod)
        })
        .collect();
    let entries = enumerate_partitions(p)
        .into_iter()
        .map(|c| {
            let value = shapes
                .iter()
                .zip(&inv_content)
                .map(|(f, inv)| class_weight(f, &c) * inv)
                .fold(BigRational::zero(), |a, b| a + b);
            (c, value)
        })
        .collect();
    FixedClassIntegralTable { p, n, entries }
}

type SymbolicCache = HashMap<usize, Arc<ClassIntegralTable>>;
type FixedCache = HashMap<(usize, u32), Arc<FixedClassIntegralTable>>;

static SYMBOLIC_TABLES: Lazy<RwLock<SymbolicCache>> = Lazy::new(|| RwLock::new(HashMap::new()));
static FIXED_TABLES: Lazy<RwLock<FixedCache>> = Lazy::new(|| RwLock::new(HashMap::new()));
// Serializes table construction so each table is built once.
static BUILD_LOCK: Lazy<Mutex<()>> = Lazy::new(|| Mutex::new(()));

/// Memoized symbolic table of `xi(c)` for degree `p`.
pub fn class_integral_table(p: usize) -> Result<Arc<ClassIntegralTable>> {
    check_degree(p)?;
    if let Some(t) = SYMBOLIC_TABLES.read().unwrap().get(&p) {
        return Ok(t.clone());
    }
    let _guard = BUILD_LOCK.lock().unwrap();
    if let Some(t) = SYMBOLIC_TABLES.read().unwrap().get(&p) {
        return Ok(t.clone());
    }
    let table = Arc::new(build_symbolic_table(p));
    SYMBOLIC_TABLES.write().unwrap().insert(p, table.clone());
    Ok(table)
}

/// Memoized fixed-`n` table of `xi(c)` for degree `p`.
pub fn fixed_class_integral_table(p: usize, n: u32) -> Result<Arc<FixedClassIntegralTable>> {
    check_degree(p)?;
    if n < 1 {
        return Err(Error::InvalidSize);
    }
    let key = (p, n);
    if let Some(t) = FIXED_TABLES.read().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let _guard = BUILD_LOCK.lock().unwrap();
    if let Some(t) = FIXED_TABLES.read().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(build_fixed_table(p, n));
    FIXED_TABLES.write().unwrap().insert(key, table.clone());
    Ok(table)
}

/// Class integral `xi(c)`.
pub fn xi(c: &CycleType, mode: NMode) -> Result<MomentValue> {
    let p = c.weight();
    match mode {
        NMode::Symbolic => Ok(MomentValue::Symbolic(
            class_integral_table(p)?.entries[c].clone(),
        )),
        NMode::Fixed(n) => Ok(MomentValue::Exact(
            fixed_class_integral_table(p, n)?.entries[c].clone(),
        )),
    }
}

/// Packs a cycle type as multiplicities in 5-bit slots, so bucketing needs no
/// sorting or allocation.
fn cycle_key(images: &[usize], seen: &mut [bool]) -> u128 {
    seen.iter_mut().for_each(|s| *s = false);
    let mut key = 0u128;
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            a = images[a];
            len += 1;
        }
        key += 1u128 << (5 * (len - 1));
    }
    key
}

fn key_to_cycle_type(mut key: u128) -> CycleType {
    let mut parts = Vec::new();
    let mut len = 1;
    while key > 0 {
        let count = (key & 31) as usize;
        parts.extend(std::iter::repeat_n(len, count));
        key >>= 5;
        len += 1;
    }
    Partition::new(parts)
}

/// `N(I,J,Q|c)`: bucket every `S∘Q∘R` with `R in G_I`, `S in G_J` by cycle
/// type. The smaller group is iterated outermost and in parallel.
pub fn class_counts(i: &IndexSet, j: &IndexSet, q: &Permutation) -> Result<ClassCounts> {
    let p = q.degree();
    if i.len() != p || j.len() != p {
        return Err(Error::MalformedQuery(format!(
            "|I| = {}, |J| = {} but Q acts on {p} points",
            i.len(),
            j.len()
        )));
    }
    check_degree(p)?;
    let gi = symmetry_group(i.as_slice());
    let gj = symmetry_group(j.as_slice());
    let pairs = gi.order() * gj.order();
    if pairs > MAX_STABILIZER_PAIRS {
        return Err(Error::TooExpensive(pairs));
    }
    let qi = q.images();
    let merge = |mut a: HashMap<u128, u64>, b: HashMap<u128, u64>| {
        for (k, v) in b {
            *a.entry(k).or_default() += v;
        }
        a
    };
    let raw: HashMap<u128, u64> = if gi.order() <= gj.order() {
        // outer R: P = S ∘ (Q ∘ R)
        gi.iter()
            .par_bridge()
            .map(|r| {
                let qr: Vec<usize> = r.images().iter().map(|&a| qi[a]).collect();
                let mut local = HashMap::new();
                let mut buf = vec![0; p];
                let mut seen = vec![false; p];
                gj.for_each_images(|s| {
                    for a in 0..p {
                        buf[a] = s[qr[a]];
                    }
                    *local.entry(cycle_key(&buf, &mut seen)).or_default() += 1;
                });
                local
            })
            .reduce(HashMap::new, merge)
    } else {
        // outer S: P = (S ∘ Q) ∘ R
        gj.iter()
            .par_bridge()
            .map(|s| {
                let sq: Vec<usize> = qi.iter().map(|&a| s.images()[a]).collect();
                let mut local = HashMap::new();
                let mut buf = vec![0; p];
                let mut seen = vec![false; p];
                gi.for_each_images(|r| {
                    for a in 0..p {
                        buf[a] = sq[r[a]];
                    }
                    *local.entry(cycle_key(&buf, &mut seen)).or_default() += 1;
                });
                local
            })
            .reduce(HashMap::new, merge)
    };
    let counts = raw
        .into_iter()
        .map(|(k, v)| (key_to_cycle_type(k), v))
        .collect();
    Ok(ClassCounts { counts })
}

/// Brute-force class counts by composing explicit permutations. Slow; kept
/// as an independent check of [`class_counts`].
pub fn class_counts_naive(i: &IndexSet, j: &IndexSet, q: &Permutation) -> ClassCounts {
    let mut counts = BTreeMap::new();
    for r in symmetry_group(i.as_slice()).iter() {
        for s in symmetry_group(j.as_slice()).iter() {
            let c = Partition::new(cycle_lengths(s.compose(q).compose(&r).images()));
            *counts.entry(c).or_insert(0u64) += 1;
        }
    }
    ClassCounts { counts }
}

/// `sum_c N(I,J,Q|c) xi(c)`; proven zeros evaluate to exactly 0.
pub fn moment(m: &CanonicalMoment, mode: NMode) -> Result<MomentValue> {
    if let NMode::Fixed(0) = mode {
        return Err(Error::InvalidSize);
    }
    if m.zero {
        return Ok(match mode {
            NMode::Symbolic => MomentValue::Symbolic(RatFun::zero()),
            NMode::Fixed(_) => MomentValue::Exact(BigRational::zero()),
        });
    }
    if m.p == 0 {
        return Ok(match mode {
            NMode::Symbolic => MomentValue::Symbolic(RatFun::one()),
            NMode::Fixed(_) => MomentValue::Exact(BigRational::from_integer(1.into())),
        });
    }
    let counts = class_counts(&m.i, &m.j, &m.q)?;
    match mode {
        NMode::Symbolic => {
            let table = class_integral_table(m.p)?;
            let value = counts
                .counts
                .iter()
                .map(|(c, &k)| table.entries[c].scale(&BigRational::from_integer(k.into())))
                .sum::<RatFun>()
                .with_validity(m.p as i64);
            Ok(MomentValue::Symbolic(value))
        }
        NMode::Fixed(n) => {
            let table = fixed_class_integral_table(m.p, n)?;
            let value = counts
                .counts
                .iter()
                .map(|(c, &k)| &table.entries[c] * BigRational::from_integer(k.into()))
                .fold(BigRational::zero(), |a, b| a + b);
            Ok(MomentValue::Exact(value))
        }
    }
}

/// Canonicalizes and evaluates a raw query. In fixed mode `n` is taken from
/// the query.
pub fn evaluate(q: &MomentQuery, symbolic: bool) -> Result<MomentValue> {
    let m = canonicalize(q)?;
    let mode = if symbolic {
        NMode::Symbolic
    } else {
        NMode::Fixed(u32::try_from(q.n).map_err(|_| Error::InvalidSize)?)
    };
    moment(&m, mode)
}

/// Exact value of `q` at its own `n`.
pub fn evaluate_fixed(q: &MomentQuery) -> Result<BigRational> {
    evaluate(q, false).map(MomentValue::exact)
}

/// Symbolic value of `q`; `q.n` only bounds the index values.
pub fn evaluate_symbolic(q: &MomentQuery) -> Result<RatFun> {
    evaluate(q, true).map(MomentValue::symbolic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn ct(xs: &[usize]) -> CycleType {
        Partition::new(xs.to_vec())
    }

    #[test]
    fn xi_closed_forms() {
        let x1 = xi(&ct(&[1]), NMode::Symbolic).unwrap().symbolic();
        assert_eq!(x1.to_string(), "(1)/(n)");
        let x2 = xi(&ct(&[2]), NMode::Symbolic).unwrap().symbolic();
        assert_eq!(x2.to_string(), "(-1)/(n^3 - n)");
        // 2 (n-3)!/(n+2)!
        let x3 = xi(&ct(&[3]), NMode::Symbolic).unwrap().symbolic();
        assert_eq!(x3, RatFun::factorial_ratio(&rational(2, 1), &[-3], &[2], 3));
        // (n^2 - 2)(n-3)!/(n+2)!
        let x111 = xi(&ct(&[1, 1, 1]), NMode::Symbolic).unwrap().symbolic();
        let want = RatFun::factorial_ratio(&rational(1, 1), &[-3], &[2], 3)
            * RatFun::from_poly(Poly::from_i64s(&[-2, 0, 1]));
        assert_eq!(x111, want);
        assert_eq!(x111.validity_min_n(), 3);
    }

    #[test]
    fn fixed_table_matches_symbolic_when_n_at_least_p() {
        for p in 1..=5 {
            let sym = class_integral_table(p).unwrap();
            for n in p as u32..p as u32 + 3 {
                let fixed = fixed_class_integral_table(p, n).unwrap();
                for (c, f) in &sym.entries {
                    assert_eq!(
                        f.eval(n as i64).unwrap(),
                        fixed.entries[c],
                        "p={p} n={n} c={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn fixed_n_one_is_trivial() {
        // U(1) is a phase, so p! sum_c |c| xi(c) = |U|^{2p} = 1.
        for p in 1..=4 {
            let fixed = fixed_class_integral_table(p, 1).unwrap();
            let total: BigRational = fixed
                .entries
                .iter()
                .map(|(c, v)| v * BigRational::from_integer(crate::combinat::class_size(c).into()))
                .fold(BigRational::zero(), |a, b| a + b);
            assert_eq!(total, BigRational::new(1.into(), factorial(p as u64)));
        }
    }

    #[test]
    fn class_count_examples() {
        let e2 = Permutation::identity(2);
        let c = class_counts(&vec![1, 2].into(), &vec![1, 2].into(), &e2).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(ct(&[1, 1]), 1)]));
        let c = class_counts(&vec![1, 1].into(), &vec![1, 1].into(), &e2).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(ct(&[1, 1]), 2), (ct(&[2]), 2)]));
        let c = class_counts(&vec![1, 1].into(), &vec![1, 2].into(), &e2).unwrap();
        assert_eq!(c.counts, BTreeMap::from([(ct(&[1, 1]), 1), (ct(&[2]), 1)]));
    }

    #[test]
    fn class_counts_agree_with_naive() {
        let q = Permutation::from_one_based(&[3, 1, 4, 2, 5]).unwrap();
        let i: IndexSet = vec![1, 1, 2, 2, 2].into();
        let j: IndexSet = vec![1, 2, 1, 3, 3].into();
        let fast = class_counts(&i, &j, &q).unwrap();
        assert_eq!(fast, class_counts_naive(&i, &j, &q));
        assert_eq!(fast.total() as u128, 12 * 4);
        // swapped roles exercise the other loop order
        let fast = class_counts(&j, &i, &q).unwrap();
        assert_eq!(fast, class_counts_naive(&j, &i, &q));
    }

    #[test]
    fn moment_examples() {
        let q = MomentQuery::new(4, vec![1, 1], vec![1, 1], vec![1, 1], vec![1, 1]);
        assert_eq!(evaluate_symbolic(&q).unwrap().to_string(), "(2)/(n^2 + n)");
        let q = MomentQuery::new(4, vec![1], vec![1], vec![1], vec![1]);
        assert_eq!(evaluate_symbolic(&q).unwrap().to_string(), "(1)/(n)");
        assert_eq!(evaluate_fixed(&q).unwrap(), rational(1, 4));
        let q = MomentQuery::new(4, vec![1, 2], vec![1, 2], vec![1, 2], vec![2, 1]);
        assert_eq!(evaluate_symbolic(&q).unwrap().to_string(), "(-1)/(n^3 - n)");
        let zero = MomentQuery::new(3, vec![1], vec![1], vec![1], vec![2]);
        assert!(evaluate_fixed(&zero).unwrap().is_zero());
        let empty = MomentQuery::new(3, vec![], vec![], vec![], vec![]);
        assert_eq!(evaluate_fixed(&empty).unwrap(), rational(1, 1));
    }

    #[test]
    fn refuses_huge_stabilizers() {
        let i: IndexSet = vec![1; 12].into();
        let err = class_counts(&i, &i, &Permutation::identity(12)).unwrap_err();
        assert!(matches!(err, Error::TooExpensive(_)));
    }

    #[test]
    fn fixed_zero_n_rejected() {
        let m = canonicalize(&MomentQuery::new(1, vec![1], vec![1], vec![1], vec![1])).unwrap();
        assert_eq!(moment(&m, NMode::Fixed(0)), Err(Error::InvalidSize));
    }
}
