//! Moment queries `<I,J|K,L> = ∫ dU U*_{IJ} U_{KL}` and their canonical form
//! `<I,J|I,J_Q>`.
//!
//! A query is zero unless the degrees agree and `K`, `L` are rearrangements
//! of `I`, `J` (phase invariance of the Haar measure). Nonzero queries are
//! reordered pairwise so that `K = I`, which leaves a single permutation `Q`
//! with `L = J_Q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinat::{symmetry_group, Permutation};
use crate::error::{Error, Result};

/// List of matrix indices, each in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(pub Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Self {
        IndexSet(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    fn sorted(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        let mut v = self.sorted();
        v.dedup();
        v.len()
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(IndexSet::default());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::MalformedQuery(format!("bad index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(IndexSet)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl From<Vec<usize>> for IndexSet {
    fn from(v: Vec<usize>) -> Self {
        IndexSet(v)
    }
}

/// `∫ dU U*_{IJ} U_{KL}` over `U(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentQuery {
    pub n: usize,
    #[serde(rename = "I")]
    pub i: IndexSet,
    #[serde(rename = "J")]
    pub j: IndexSet,
    #[serde(rename = "K")]
    pub k: IndexSet,
    #[serde(rename = "L")]
    pub l: IndexSet,
}

impl MomentQuery {
    pub fn new(
        n: usize,
        i: impl Into<IndexSet>,
        j: impl Into<IndexSet>,
        k: impl Into<IndexSet>,
        l: impl Into<IndexSet>,
    ) -> Self {
        MomentQuery {
            n,
            i: i.into(),
            j: j.into(),
            k: k.into(),
            l: l.into(),
        }
    }

    /// `<J,I|L,K>`.
    pub fn transposed(&self) -> MomentQuery {
        MomentQuery {
            n: self.n,
            i: self.j.clone(),
            j: self.i.clone(),
            k: self.l.clone(),
            l: self.k.clone(),
        }
    }

    /// Largest index value appearing anywhere; the smallest admissible `n`.
    pub fn max_index(&self) -> usize {
        [&self.i, &self.j, &self.k, &self.l]
            .iter()
            .flat_map(|s| s.0.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn with_n(&self, n: usize) -> MomentQuery {
        MomentQuery { n, ..self.clone() }
    }
}

impl fmt::Display for MomentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}|{},{}>", self.i, self.j, self.k, self.l)
    }
}

/// Canonical form `<I,J|I,J_Q>` with `(J_Q)_a = J_{Q(a)}`, or a proven zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalMoment {
    pub n: usize,
    pub p: usize,
    pub i: IndexSet,
    pub j: IndexSet,
    pub q: Permutation,
    pub zero: bool,
}

impl CanonicalMoment {
    /// `J_Q`.
    pub fn jq(&self) -> IndexSet {
        IndexSet(self.q.permute(self.j.as_slice()))
    }

    /// Back to a plain query `<I,J|I,J_Q>`.
    pub fn to_query(&self) -> MomentQuery {
        MomentQuery::new(
            self.n,
            self.i.clone(),
            self.j.clone(),
            self.i.clone(),
            self.jq(),
        )
    }

    /// Direct integrals have `J_Q = J`.
    pub fn is_direct(&self) -> bool {
        !self.zero && self.jq() == self.j
    }

    fn zero_of(q: &MomentQuery) -> CanonicalMoment {
        CanonicalMoment {
            n: q.n,
            p: q.i.len(),
            i: q.i.clone(),
            j: q.j.clone(),
            q: Permutation::identity(q.i.len()),
            zero: true,
        }
    }
}

impl fmt::Display for CanonicalMoment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else {
            write!(f, "<{},{}|{},{}>", self.i, self.j, self.i, self.jq())
        }
    }
}

/// For each position of `target`, the first unused position of `source`
/// holding the same value. `None` if `target` is not a rearrangement.
fn first_fit(source: &[usize], target: &[usize]) -> Option<Vec<usize>> {
    let mut used = vec![false; source.len()];
    target
        .iter()
        .map(|t| {
            let b = (0..source.len()).find(|&b| !used[b] && source[b] == *t)?;
            used[b] = true;
            Some(b)
        })
        .collect()
}

/// Checks ranges, detects zeros and reduces to `<I,J|I,J_Q>`.
///
/// `R` with `K = I_R` is the lexicographically smallest such permutation; `Q`
/// is matched first-fit from `L_{R^-1} = J_Q`.
pub fn validate(q: &MomentQuery) -> Result<CanonicalMoment> {
    if q.n < 1 {
        return Err(Error::InvalidSize);
    }
    if q.i.len() != q.j.len() {
        return Err(Error::MalformedQuery(format!(
            "|I| = {} but |J| = {}",
            q.i.len(),
            q.j.len()
        )));
    }
    if q.k.len() != q.l.len() {
        return Err(Error::MalformedQuery(format!(
            "|K| = {} but |L| = {}",
            q.k.len(),
            q.l.len()
        )));
    }
    for set in [&q.i, &q.j, &q.k, &q.l] {
        if let Some(&bad) = set.0.iter().find(|&&x| x < 1 || x > q.n) {
            return Err(Error::IndexOutOfRange { value: bad, n: q.n });
        }
    }
    if q.i.len() != q.k.len() || q.k.sorted() != q.i.sorted() || q.l.sorted() != q.j.sorted() {
        return Ok(CanonicalMoment::zero_of(q));
    }
    let p = q.i.len();
    // K_a = I_{R(a)}
    let r = Permutation::from_images(first_fit(q.i.as_slice(), q.k.as_slice()).unwrap())?;
    // Reorder the U pairs by R^-1 so that K becomes I.
    let l_reordered = r.inverse().permute(q.l.as_slice());
    let qperm = Permutation::from_images(first_fit(q.j.as_slice(), &l_reordered).unwrap())?;
    Ok(CanonicalMoment {
        n: q.n,
        p,
        i: q.i.clone(),
        j: q.j.clone(),
        q: qperm,
        zero: false,
    })
}

fn first_appearance(xs: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    xs.iter()
        .map(|x| match seen.iter().position(|s| s == x) {
            Some(k) => k + 1,
            None => {
                seen.push(*x);
                seen.len()
            }
        })
        .collect()
}

/// Renames row and column values to `1, 2, ...` in order of first
/// appearance. The integral only depends on the coincidence pattern.
pub fn relabel_canonical(m: &CanonicalMoment) -> CanonicalMoment {
    if m.zero {
        return m.clone();
    }
    CanonicalMoment {
        i: IndexSet(first_appearance(m.i.as_slice())),
        j: IndexSet(first_appearance(m.j.as_slice())),
        ..m.clone()
    }
}

/// Row/column interchange `<I,J|I,J_Q> -> <J,I|J,I_{Q^-1}>`.
pub fn transpose(m: &CanonicalMoment) -> CanonicalMoment {
    if m.zero {
        return CanonicalMoment {
            i: m.j.clone(),
            j: m.i.clone(),
            ..m.clone()
        };
    }
    CanonicalMoment {
        n: m.n,
        p: m.p,
        i: m.j.clone(),
        j: m.i.clone(),
        q: m.q.inverse(),
        zero: false,
    }
}

/// Full normalization: validate, relabel, and orient so that the row
/// stabilizer is at least as large as the column stabilizer.
pub fn canonicalize(q: &MomentQuery) -> Result<CanonicalMoment> {
    let m = relabel_canonical(&validate(q)?);
    if m.zero {
        return Ok(m);
    }
    let gi = symmetry_group(m.i.as_slice()).order();
    let gj = symmetry_group(m.j.as_slice()).order();
    Ok(if gj > gi {
        relabel_canonical(&transpose(&m))
    } else {
        m
    })
}
