//! Partitions, permutations and the representation theory of `S_p` needed by
//! the group-sum evaluator: characters, irrep dimensions of `S_p` and `U(n)`,
//! and Young subgroups of index sets.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{factorial, BigRational, Poly, RatFun};
use crate::error::{Error, Result};

/// Largest degree `p` the crate will handle. Keeps `p!` inside `u64`.
pub const MAX_DEGREE: usize = 20;

/// Weakly decreasing sequence of positive integers.
///
/// Used both as a Young diagram labelling irreps of `S_p` and `U(n)` and as
/// the cycle type labelling a conjugacy class of `S_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

/// Cycle type of a permutation.
pub type CycleType = Partition;

impl Partition {
    /// Sorts and drops zero parts.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of nonzero parts (rows of the Young diagram).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The all-ones partition, i.e. the cycle type of the identity.
    pub fn ones(p: usize) -> Self {
        Partition(vec![1; p])
    }

    /// Length of column `j` (0-based) of the Young diagram.
    fn column_len(&self, j: usize) -> usize {
        self.0.iter().take_while(|&&r| r > j).count()
    }

    /// Hook lengths of every cell, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row {
                let arm = row - j - 1;
                let leg = self.column_len(j) - i - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }

    /// Contents `j - i` of every cell.
    pub fn contents(&self) -> Vec<i64> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| (0..row).map(move |j| j as i64 - i as i64))
            .collect()
    }

    /// Multiplicities `alpha_i` of each part size, indexed by size.
    fn multiplicities(&self) -> Vec<usize> {
        let mut alpha = vec![0; self.0.first().copied().unwrap_or(0) + 1];
        for &c in &self.0 {
            alpha[c] += 1;
        }
        alpha
    }
}

impl fmt::Display for Partition {
    /// Comma-joined parts, e.g. `3,1,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Partition::default());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(Error::InvalidParameter(
                "partition parts must be positive".into(),
            ));
        }
        Ok(Partition::new(parts))
    }
}

/// All partitions of `p` in reverse lexicographic order, starting from `(p)`.
pub fn enumerate_partitions(p: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, p, &mut Vec::new(), &mut out);
    out
}

/// Bijection on `{0..p-1}`; `images[a]` is the image of `a`.
///
/// Displayed and parsed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(p: usize) -> Self {
        Permutation {
            images: (0..p).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::InvalidParameter(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// From 1-based images, the external convention.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidParameter(
                "permutation images are 1-based".into(),
            ));
        }
        Permutation::from_images(images.iter().map(|x| x - 1).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.images[a]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&a| self.images[a]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// `X_P = (x_{P(1)}, ..., x_{P(p)})`.
    pub fn permute<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        self.images.iter().map(|&a| xs[a].clone()).collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type(self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Cycle lengths of `perm`, sorted descending.
pub fn cycle_type(perm: &Permutation) -> CycleType {
    Partition::new(cycle_lengths(&perm.images))
}

pub(crate) fn cycle_lengths(images: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; images.len()];
    let mut lengths = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut a = start;
        while !seen[a] {
            seen[a] = true;
            a = images[a];
            len += 1;
        }
        lengths.push(len);
    }
    lengths
}

/// Size of the conjugacy class with cycle type `c`: `p! / prod_i (i^alpha_i alpha_i!)`.
pub fn class_size(c: &CycleType) -> u64 {
    let alpha = c.multiplicities();
    let mut denom = BigInt::one();
    for (i, &a) in alpha.iter().enumerate().skip(1) {
        denom *= BigInt::from(i).pow(a as u32) * factorial(a as u64);
    }
    let size = factorial(c.weight() as u64) / denom;
    u64::try_from(size).expect("class size fits in u64 for p <= 20")
}

/// Dimension `d_f` of the irrep `f` of `S_p`, by the hook-length formula.
pub fn dim_sym(f: &Partition) -> u64 {
    let hooks: BigInt = f.hooks().iter().map(|&h| BigInt::from(h)).product();
    let d = factorial(f.weight() as u64) / hooks;
    u64::try_from(d).expect("d_f fits in u64 for p <= 20")
}

/// Dimension of the `U(n)` irrep `f` as a polynomial in `n`, from the
/// hook-content formula `prod (n + j - i) / hook(i, j)`.
///
/// At integer `n` below the number of rows of `f` this evaluates to zero,
/// matching the fact that such a diagram labels no `U(n)` irrep.
pub fn dim_unitary(f: &Partition) -> RatFun {
    let top = f
        .contents()
        .into_iter()
        .fold(Poly::one(), |acc, c| &acc * &Poly::linear(c));
    let hooks: BigInt = f.hooks().iter().map(|&h| BigInt::from(h)).product();
    RatFun::new(top, Poly::constant(hooks)).expect("hook product is nonzero")
}

/// `dim_unitary` at a fixed integer `n`, computed as the product of the
/// hook-content factors.
pub fn dim_unitary_at(f: &Partition, n: u32) -> BigRational {
    let top: BigInt = f
        .contents()
        .into_iter()
        .map(|c| BigInt::from(n as i64 + c))
        .product();
    let hooks: BigInt = f.hooks().iter().map(|&h| BigInt::from(h)).product();
    BigRational::new(top, hooks)
}

/// Ratio of Vandermonde determinants `D(l_1..l_n) / D(n-1, ..., 0)` with
/// `l_i = f_i + n - i`, where `D(x) = prod_{i > j} (x_i - x_j)`.
///
/// Returns `None` when `f` has more than `n` rows.
pub fn vandermonde_dim(f: &Partition, n: u32) -> Option<BigRational> {
    let n = n as usize;
    if f.len() > n {
        return None;
    }
    let vdm = |x: &[i64]| -> BigInt {
        let mut d = BigInt::one();
        for i in 0..x.len() {
            for j in 0..i {
                d *= BigInt::from(x[i] - x[j]);
            }
        }
        d
    };
    let ell: Vec<i64> = (0..n)
        .map(|i| f.parts().get(i).copied().unwrap_or(0) as i64 + (n - 1 - i) as i64)
        .collect();
    let base: Vec<i64> = (0..n).map(|i| (n - 1 - i) as i64).collect();
    Some(BigRational::new(vdm(&ell), vdm(&base)))
}

type CharKey = (Vec<usize>, Vec<usize>);

static CHARACTERS: Lazy<RwLock<HashMap<CharKey, i64>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// Character `chi_f(c)` of the irrep `f` on the class `c`, by the
/// Murnaghan–Nakayama rule. Results are memoized process-wide.
pub fn character(f: &Partition, c: &CycleType) -> Result<i64> {
    if f.weight() != c.weight() {
        return Err(Error::WeightMismatch {
            rep: f.weight(),
            class: c.weight(),
        });
    }
    Ok(mn(f.parts(), c.parts()))
}

fn mn(shape: &[usize], cycles: &[usize]) -> i64 {
    if cycles.is_empty() {
        return 1;
    }
    let key = (shape.to_vec(), cycles.to_vec());
    if let Some(&v) = CHARACTERS.read().unwrap().get(&key) {
        return v;
    }
    // Beta-set: removing a border strip of length r moves one bead from b to
    // b - r; the sign is the parity of the beads jumped over.
    let k = shape.len();
    let beta: Vec<usize> = shape
        .iter()
        .enumerate()
        .map(|(i, &s)| s + k - 1 - i)
        .collect();
    let r = cycles[0];
    let rest = &cycles[1..];
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let len = next.len();
        let new_shape: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&x| x > 0)
            .collect();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&new_shape, rest);
    }
    CHARACTERS.write().unwrap().insert(key, total);
    total
}

/// Young subgroup `G_I` of `S_p`: permutations of positions that leave the
/// index list unchanged. Described by its blocks of equal values and iterated
/// lazily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungSubgroup {
    degree: usize,
    blocks: Vec<Vec<usize>>,
}

impl YoungSubgroup {
    /// Positions grouped by equal value, in order of first appearance.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `prod |block|!`.
    pub fn order(&self) -> u128 {
        self.blocks
            .iter()
            .map(|b| (1..=b.len() as u128).product::<u128>())
            .product()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn contains(&self, perm: &Permutation) -> bool {
        let mut label = vec![0; self.degree];
        for (k, b) in self.blocks.iter().enumerate() {
            for &a in b {
                label[a] = k;
            }
        }
        (0..self.degree).all(|a| label[perm.apply(a)] == label[a])
    }

    pub fn iter(&self) -> YoungSubgroupIter<'_> {
        YoungSubgroupIter::new(self)
    }

    /// Calls `visit` with the image array of every element, without
    /// allocating per element.
    pub fn for_each_images(&self, mut visit: impl FnMut(&[usize])) {
        let mut it = YoungSubgroupIter::new(self);
        while let Some(images) = it.advance() {
            visit(images);
        }
    }
}

/// The symmetry group of an index list: all position permutations `R` with
/// `I_R = I`.
pub fn symmetry_group<T: PartialEq>(indices: &[T]) -> YoungSubgroup {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<&T> = Vec::new();
    for (a, v) in indices.iter().enumerate() {
        match reps.iter().position(|r| *r == v) {
            Some(k) => blocks[k].push(a),
            None => {
                reps.push(v);
                blocks.push(vec![a]);
            }
        }
    }
    YoungSubgroup {
        degree: indices.len(),
        blocks,
    }
}

/// Odometer over the product of the symmetric groups on each block; each
/// block steps through its permutations in lexicographic order.
pub struct YoungSubgroupIter<'a> {
    group: &'a YoungSubgroup,
    states: Vec<Vec<usize>>,
    images: Vec<usize>,
    started: bool,
    done: bool,
}

impl<'a> YoungSubgroupIter<'a> {
    fn new(group: &'a YoungSubgroup) -> Self {
        YoungSubgroupIter {
            group,
            states: group
                .blocks
                .iter()
                .map(|b| (0..b.len()).collect())
                .collect(),
            images: (0..group.degree).collect(),
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.images);
        }
        for k in 0..self.states.len() {
            if next_permutation(&mut self.states[k]) {
                self.write_block(k);
                return Some(&self.images);
            }
            // wrapped around to the identity; carry into the next block
            self.write_block(k);
        }
        self.done = true;
        None
    }

    fn write_block(&mut self, k: usize) {
        let block = &self.group.blocks[k];
        for (slot, &s) in self.states[k].iter().enumerate() {
            self.images[block[slot]] = block[s];
        }
    }
}

impl Iterator for YoungSubgroupIter<'_> {
    type Item = Permutation;
    fn next(&mut self) -> Option<Permutation> {
        self.advance().map(|images| Permutation {
            images: images.to_vec(),
        })
    }
}

/// Advances to the next lexicographic permutation; on the last one, resets to
/// sorted order and returns `false`.
fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// All of `S_p`, lazily. Used by tests and small brute-force checks.
pub fn symmetric_group(p: usize) -> YoungSubgroup {
    YoungSubgroup {
        degree: p,
        blocks: if p == 0 {
            Vec::new()
        } else {
            vec![(0..p).collect()]
        },
    }
}

/// `sum_f d_f^2` over partitions of `p`; equals `p!`.
pub fn sum_dim_squares(p: usize) -> BigInt {
    enumerate_partitions(p)
        .iter()
        .map(|f| BigInt::from(dim_sym(f)).pow(2))
        .fold(BigInt::zero(), |a, b| a + b)
}
