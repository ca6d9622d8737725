//! Diagrams as queries, and recognition of the closed-form families.
//!
//! A diagram is two multisets of edges `(row, column)`: one for the `U*`
//! factors (solid lines) and one for the `U` factors (dotted lines).

use std::collections::BTreeMap;
use std::fmt;

use super::{degree3, fan_f, x_closed_form, z_integral, Degree3, FanSpec, XSpec};
use crate::arith::RatFun;
use crate::error::{Error, Result};
use crate::query::{validate, IndexSet, MomentQuery};

pub type Edge = (usize, usize);

/// Builds `<I,J|K,L>` from the two edge lists. `n` is the larger of the
/// highest index used and `min_n`.
pub fn query_from_edges(ustar: &[Edge], u: &[Edge], min_n: usize) -> MomentQuery {
    let n = ustar
        .iter()
        .chain(u)
        .map(|&(r, c)| r.max(c))
        .max()
        .unwrap_or(1)
        .max(min_n)
        .max(1);
    let (i, j): (Vec<_>, Vec<_>) = ustar.iter().copied().unzip();
    let (k, l): (Vec<_>, Vec<_>) = u.iter().copied().unzip();
    MomentQuery::new(n, i, j, k, l)
}

fn repeat(edge: Edge, times: usize, out: &mut Vec<Edge>) {
    out.extend(std::iter::repeat_n(edge, times));
}

/// Row 1 joined to columns `1..=t`.
pub fn fan_query(spec: &FanSpec) -> MomentQuery {
    let mut edges = Vec::new();
    for (c, &m) in spec.mults().iter().enumerate() {
        repeat((1, c + 1), m, &mut edges);
    }
    query_from_edges(&edges, &edges, 1)
}

/// Rows `i = 1, j = 2`, columns `a = 1, b = 2`.
pub fn z_query(m1: usize, m2: usize, m3: usize) -> MomentQuery {
    let mut edges = Vec::new();
    repeat((1, 1), m1, &mut edges);
    repeat((1, 2), m2, &mut edges);
    repeat((2, 2), m3, &mut edges);
    query_from_edges(&edges, &edges, 2)
}

/// The one-loop diagram on rows `i = 1, j = 2` and columns `a = 1, b = 2`.
pub fn x_query(spec: &XSpec) -> MomentQuery {
    let side = |w: [usize; 4]| {
        let mut edges = Vec::new();
        for (edge, m) in [(1, 1), (1, 2), (2, 2), (2, 1)].into_iter().zip(w) {
            repeat(edge, m, &mut edges);
        }
        edges
    };
    query_from_edges(
        &side([spec.r, spec.s, spec.t, spec.u]),
        &side([spec.r2, spec.s2, spec.t2, spec.u2]),
        2,
    )
}

/// `X(0,1,t-1,u | 1,0,t,u-1)`, the second exchange case with the labels
/// read literally. Needs `t, u >= 1`.
pub fn x5_literal_spec(t: usize, u: usize) -> Result<XSpec> {
    if t < 1 || u < 1 {
        return Err(Error::InvalidParameter(
            "the literal x5 labels need t >= 1 and u >= 1".into(),
        ));
    }
    XSpec::new([0, 1, t - 1, u, 1, 0, t, u - 1])
}

/// Index lists `(I, J, L)` of the degree-3 diagrams, with `K = I`.
pub fn degree3_indices(id: Degree3) -> ([usize; 3], [usize; 3], [usize; 3]) {
    match id {
        Degree3::A => ([1, 1, 2], [1, 2, 3], [1, 2, 3]),
        Degree3::B => ([1, 2, 3], [1, 2, 3], [1, 2, 3]),
        Degree3::C => ([1, 1, 2], [1, 2, 2], [2, 2, 1]),
        Degree3::D => ([1, 2, 2], [1, 2, 1], [2, 1, 1]),
        Degree3::E => ([1, 1, 2], [1, 2, 3], [2, 3, 1]),
        Degree3::F => ([1, 2, 3], [1, 2, 3], [2, 1, 3]),
        Degree3::G => ([1, 2, 3], [1, 2, 3], [2, 3, 1]),
    }
}

pub fn degree3_query(id: Degree3) -> MomentQuery {
    let (i, j, l) = degree3_indices(id);
    MomentQuery::new(3, i.to_vec(), j.to_vec(), i.to_vec(), l.to_vec())
}

/// A query recognized as a member of a closed-form family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Fan(FanSpec),
    Z(usize, usize, usize),
    Degree3(Degree3),
    X(XSpec),
}

impl ClosedForm {
    pub fn value(&self) -> RatFun {
        match self {
            ClosedForm::Fan(spec) => fan_f(spec),
            ClosedForm::Z(a, b, c) => z_integral(*a, *b, *c),
            ClosedForm::Degree3(id) => degree3(*id),
            ClosedForm::X(spec) => x_closed_form(spec).expect("recognized X has a closed form"),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ClosedForm::Fan(_) => "fan",
            ClosedForm::Z(..) => "z",
            ClosedForm::Degree3(_) => "degree3",
            ClosedForm::X(_) => "x",
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Fan(spec) => {
                let m: Vec<String> = spec.mults().iter().map(|m| m.to_string()).collect();
                write!(f, "F({})", m.join(","))
            }
            ClosedForm::Z(a, b, c) => write!(f, "Z({a},{b},{c})"),
            ClosedForm::Degree3(id) => write!(f, "{id}"),
            ClosedForm::X(spec) => write!(f, "{spec}"),
        }
    }
}

/// Edge multiplicities `(row, col) -> (#U*, #U)` with rows and columns
/// renamed to `0..`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Diagram {
    rows: usize,
    cols: usize,
    edges: BTreeMap<Edge, (usize, usize)>,
}

impl Diagram {
    fn from_query(q: &MomentQuery) -> Diagram {
        let rename = |xs: Vec<usize>| {
            let mut seen: Vec<usize> = Vec::new();
            let ids: Vec<usize> = xs
                .iter()
                .map(|x| match seen.iter().position(|s| s == x) {
                    Some(k) => k,
                    None => {
                        seen.push(*x);
                        seen.len() - 1
                    }
                })
                .collect();
            (ids, seen.len())
        };
        let p = q.i.len();
        let (rows, nr) = rename([q.i.as_slice(), q.k.as_slice()].concat());
        let (cols, nc) = rename([q.j.as_slice(), q.l.as_slice()].concat());
        let mut edges = BTreeMap::new();
        for a in 0..2 * p {
            let e = edges.entry((rows[a], cols[a])).or_insert((0, 0));
            if a < p {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        Diagram {
            rows: nr,
            cols: nc,
            edges,
        }
    }

    fn transposed(&self) -> Diagram {
        Diagram {
            rows: self.cols,
            cols: self.rows,
            edges: self.edges.iter().map(|(&(r, c), &w)| ((c, r), w)).collect(),
        }
    }

    fn conjugated(&self) -> Diagram {
        Diagram {
            edges: self.edges.iter().map(|(&e, &(a, b))| (e, (b, a))).collect(),
            ..self.clone()
        }
    }

    fn relabeled(&self, rp: &[usize], cp: &[usize]) -> Diagram {
        Diagram {
            edges: self
                .edges
                .iter()
                .map(|(&(r, c), &w)| ((rp[r], cp[c]), w))
                .collect(),
            ..self.clone()
        }
    }

    /// Smallest image under row and column renaming, transposition and
    /// exchange of `U` with `U*`. Only used on small diagrams.
    fn canonical_key(&self) -> Diagram {
        let mut best: Option<Diagram> = None;
        for base in [self.clone(), self.transposed()] {
            for d in [base.conjugated(), base] {
                for rp in permutations(d.rows) {
                    for cp in permutations(d.cols) {
                        let cand = d.relabeled(&rp, &cp);
                        if best.as_ref().is_none_or(|b| cand < *b) {
                            best = Some(cand);
                        }
                    }
                }
            }
        }
        best.unwrap()
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}

fn as_fan(d: &Diagram) -> Option<FanSpec> {
    if d.rows != 1 || d.edges.values().any(|&(a, b)| a != b) {
        return None;
    }
    let mut mults: Vec<usize> = d.edges.values().map(|&(a, _)| a).collect();
    mults.sort_unstable_by(|a, b| b.cmp(a));
    FanSpec::new(mults).ok()
}

fn as_x(d: &Diagram) -> Option<XSpec> {
    if d.rows != 2 || d.cols != 2 {
        return None;
    }
    for rp in permutations(2) {
        for cp in permutations(2) {
            let e = d.relabeled(&rp, &cp).edges;
            let w = |r, c| e.get(&(r, c)).copied().unwrap_or((0, 0));
            let (r, s, t, u) = (w(0, 0), w(0, 1), w(1, 1), w(1, 0));
            if let Ok(spec) = XSpec::new([r.0, s.0, t.0, u.0, r.1, s.1, t.1, u.1]) {
                if x_closed_form(&spec).is_some() {
                    return Some(spec);
                }
            }
        }
    }
    None
}

/// Identifies a nonzero query as a fan, Z, degree-3 or X diagram with a
/// known closed form, up to renaming, transposition and conjugation.
pub fn recognize(q: &MomentQuery) -> Result<Option<ClosedForm>> {
    let m = validate(q)?;
    if m.zero || m.p == 0 {
        return Ok(None);
    }
    let d = Diagram::from_query(q);
    let t = d.transposed();
    for cand in [&d, &t] {
        if let Some(spec) = as_fan(cand) {
            return Ok(Some(ClosedForm::Fan(spec)));
        }
    }
    for cand in [&d, &t, &d.conjugated(), &t.conjugated()] {
        if let Some(spec) = as_x(cand) {
            // Z is symmetric in its outer arguments; report the larger first
            let z = |a: usize, b: usize, c: usize| ClosedForm::Z(a.max(c), b, a.min(c));
            if spec.rho() == 0 {
                return Ok(Some(z(spec.u, spec.t, spec.s)));
            }
            if spec.sigma() == 0 {
                return Ok(Some(z(spec.r, spec.u, spec.t)));
            }
            return Ok(Some(ClosedForm::X(spec)));
        }
    }
    if m.p == 3 && d.rows <= 3 && d.cols <= 3 {
        let key = d.canonical_key();
        for id in Degree3::ALL {
            if Diagram::from_query(&degree3_query(id)).canonical_key() == key {
                return Ok(Some(ClosedForm::Degree3(id)));
            }
        }
    }
    Ok(None)
}

/// Convenience for building queries from index lists in tests and examples.
pub fn query(n: usize, i: &[usize], j: &[usize], k: &[usize], l: &[usize]) -> MomentQuery {
    MomentQuery::new(
        n,
        IndexSet::new(i.to_vec()),
        IndexSet::new(j.to_vec()),
        IndexSet::new(k.to_vec()),
        IndexSet::new(l.to_vec()),
    )
}
