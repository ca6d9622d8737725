//! Rotation and unitarity identities between integrals.
//!
//! Every relation is a linear combination `sum_k c_k(n) <q_k> = 0` with
//! polynomial coefficients. Each term is evaluated by the group-sum engine,
//! symbolically and at fixed `n`, so the checks do not rely on any closed
//! form.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::diagrams::{degree3_query, query_from_edges, x5_literal_spec, x_query, Edge};
use super::{Degree3, XSpec, XVariant};
use crate::arith::{factorial, BigRational, Poly, RatFun};
use crate::error::{Error, Result};
use crate::query::{IndexSet, MomentQuery};
use crate::weingarten::{evaluate_fixed, evaluate_symbolic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// A fan with multiplicities `m` equals `prod m_i! / (sum m)!` times the
    /// merged single line. With `spectator`, an exchange pair on a second
    /// row and two further columns is attached to the fan row.
    Fan { mults: Vec<usize>, spectator: bool },
    /// Moving one solid and one dotted line between two columns:
    /// `I(a) = -I(b) + I_1` for rows `i1..i4`.
    RotationPair { rows: [usize; 4] },
    /// `(n-1) F(m-1,1) + F(m) = F(m-1)`.
    FanUnitarity { m: usize },
    /// `F(m) = F(m-1) m / (n+m-1)`.
    FanRecursion { m: usize },
    /// `(n-2) I + Z(m1,m2,m3) + Z(m1,m2+1,m3-1) = Z(m1,m2,m3-1)` where `I`
    /// has one of the `j-b` lines moved to a third row.
    ZUnitarity { m: [usize; 3] },
    /// `Z(m1,m2,m3) = m3/(n+m3-2) [Z(m1,m2,m3-1) - Z(m1,m2+1,m3-1)]`.
    ZRecursion { m: [usize; 3] },
    /// The five unitarity sums among the degree-3 exchange integrals.
    Degree3Unitarity { line: usize },
    /// Unitarity sums giving the two degree-3 direct integrals.
    Degree3Direct { id: Degree3 },
    /// `(n-1) X + F = 0` for the two exchange X integrals with one
    /// rotated line pair.
    XUnitarity {
        t: usize,
        u: usize,
        variant: XVariant,
    },
    /// `X(0,1,t-1,u|1,0,t,u-1)` is the conjugate of
    /// `X(1,0,t,u-1|0,1,t-1,u)`.
    XConjugate { t: usize, u: usize },
}

/// `sum_k c_k <q_k> = 0`.
#[derive(Clone, Debug)]
pub struct LinearRelation {
    pub terms: Vec<(RatFun, MomentQuery)>,
}

impl LinearRelation {
    fn max_index(&self) -> usize {
        self.terms
            .iter()
            .map(|(_, q)| q.max_index())
            .max()
            .unwrap_or(1)
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, q)| q.i.len()).max().unwrap_or(0)
    }

    pub fn holds_symbolic(&self) -> Result<bool> {
        let mut total = RatFun::zero();
        for (c, q) in &self.terms {
            total = &total + &(c * &evaluate_symbolic(q)?);
        }
        Ok(total.is_zero())
    }

    /// Fixed-`n` check; `n` must cover every index used.
    pub fn holds_at(&self, n: usize) -> Result<bool> {
        if n < self.max_index() {
            return Err(Error::IndexOutOfRange {
                value: self.max_index(),
                n,
            });
        }
        let mut total = BigRational::zero();
        for (c, q) in &self.terms {
            total += c.eval_unchecked(n as i64)? * evaluate_fixed(&q.with_n(n))?;
        }
        Ok(total.is_zero())
    }
}

fn lin(k: i64) -> RatFun {
    RatFun::from_poly(Poly::linear(k))
}

fn int(k: i64) -> RatFun {
    RatFun::from_integer(k)
}

fn fan_edges(mults: &[usize], row: usize, first_col: usize) -> Vec<Edge> {
    let mut edges = Vec::new();
    for (c, &m) in mults.iter().enumerate() {
        edges.extend(std::iter::repeat_n((row, first_col + c), m));
    }
    edges
}

/// Fan on row 1 starting at column 1; zero multiplicities leave a gap.
fn fan(mults: &[usize]) -> MomentQuery {
    let e = fan_edges(mults, 1, 1);
    query_from_edges(&e, &e, 1)
}

fn z(m1: usize, m2: usize, m3: usize) -> MomentQuery {
    super::diagrams::z_query(m1, m2, m3)
}

fn d3(id: Degree3) -> MomentQuery {
    degree3_query(id)
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::Fan {
                spectator: false, ..
            } => "fan-relation",
            Relation::Fan {
                spectator: true, ..
            } => "fan-relation-spectator",
            Relation::RotationPair { .. } => "rotation-pair",
            Relation::FanUnitarity { .. } => "fan-unitarity",
            Relation::FanRecursion { .. } => "fan-recursion",
            Relation::ZUnitarity { .. } => "z-unitarity",
            Relation::ZRecursion { .. } => "z-recursion",
            Relation::Degree3Unitarity { .. } => "degree3-unitarity",
            Relation::Degree3Direct { .. } => "degree3-direct",
            Relation::XUnitarity { .. } => "x-unitarity",
            Relation::XConjugate { .. } => "x-conjugate",
        }
    }

    /// Builds a relation from its name and integer parameters:
    ///
    /// | name | params |
    /// |---|---|
    /// | `fan-relation`, `fan-relation-spectator` | `m_1..m_t` |
    /// | `rotation-pair` | `i1 i2 i3 i4` |
    /// | `fan-unitarity`, `fan-recursion` | `m` |
    /// | `z-unitarity`, `z-recursion` | `m1 m2 m3` |
    /// | `degree3-unitarity` | line `1..=5` |
    /// | `degree3-direct` | `0` for `6a`, `1` for `6b` |
    /// | `x-unitarity` | `t u v`, `v = 0` for x4, `1` for x5 |
    /// | `x-conjugate` | `t u` |
    pub fn from_name(name: &str, params: &[usize]) -> Result<Relation> {
        let bad = || Error::InvalidParameter(format!("bad parameters {params:?} for {name}"));
        let one = || match params {
            [m] => Ok(*m),
            _ => Err(bad()),
        };
        let three = || match params {
            [a, b, c] => Ok([*a, *b, *c]),
            _ => Err(bad()),
        };
        let rel = match name {
            "fan-relation" | "fan-relation-spectator" => Relation::Fan {
                mults: params.to_vec(),
                spectator: name.ends_with("spectator"),
            },
            "rotation-pair" => match params {
                [a, b, c, d] => Relation::RotationPair {
                    rows: [*a, *b, *c, *d],
                },
                _ => return Err(bad()),
            },
            "fan-unitarity" => Relation::FanUnitarity { m: one()? },
            "fan-recursion" => Relation::FanRecursion { m: one()? },
            "z-unitarity" => Relation::ZUnitarity { m: three()? },
            "z-recursion" => Relation::ZRecursion { m: three()? },
            "degree3-unitarity" => Relation::Degree3Unitarity { line: one()? },
            "degree3-direct" => Relation::Degree3Direct {
                id: match one()? {
                    0 => Degree3::A,
                    1 => Degree3::B,
                    _ => return Err(bad()),
                },
            },
            "x-unitarity" => match params {
                [t, u, v] if *v <= 1 => Relation::XUnitarity {
                    t: *t,
                    u: *u,
                    variant: if *v == 0 { XVariant::X4 } else { XVariant::X5 },
                },
                _ => return Err(bad()),
            },
            "x-conjugate" => match params {
                [t, u] => Relation::XConjugate { t: *t, u: *u },
                _ => return Err(bad()),
            },
            _ => return Err(Error::UnknownRelation(name.to_string())),
        };
        rel.linear()?;
        Ok(rel)
    }

    /// The relation as a list of weighted queries.
    pub fn linear(&self) -> Result<LinearRelation> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("{self}: {msg}")));
        let terms = match self {
            Relation::Fan { mults, spectator } => {
                if mults.is_empty() || mults.contains(&0) {
                    return bad("multiplicities must be positive");
                }
                let d: usize = mults.iter().sum();
                let t = mults.len();
                let mut spread = fan_edges(mults, 1, 1);
                let mut merged = fan_edges(&[d], 1, 1);
                let (mut spread_u, mut merged_u) = (spread.clone(), merged.clone());
                if *spectator {
                    let (c, e) = (t + 1, t + 2);
                    for (s, u) in [(&mut spread, &mut spread_u), (&mut merged, &mut merged_u)] {
                        s.extend([(1, c), (2, e)]);
                        u.extend([(1, e), (2, c)]);
                    }
                }
                let prod: BigInt = mults.iter().map(|&m| factorial(m as u64)).product();
                let c = BigRational::new(prod, factorial(d as u64));
                vec![
                    (int(1), query_from_edges(&spread, &spread_u, 1)),
                    (
                        -RatFun::from_rational(&c),
                        query_from_edges(&merged, &merged_u, 1),
                    ),
                ]
            }
            Relation::RotationPair { rows } => {
                let [i1, i2, i3, i4] = *rows;
                if rows.contains(&0) {
                    return bad("rows start at 1");
                }
                let (a, b) = (1, 2);
                // Balance the rows with spectator lines on column 3.
                let mut solid_rows = vec![i1, i3];
                let mut dotted_rows = vec![i2, i4];
                let mut extra_solid = Vec::new();
                let mut extra_dotted = Vec::new();
                for r in [i2, i4] {
                    if let Some(k) = solid_rows.iter().position(|&x| x == r) {
                        solid_rows.remove(k);
                    } else {
                        extra_solid.push((r, 3));
                    }
                }
                for r in [i1, i3] {
                    if let Some(k) = dotted_rows.iter().position(|&x| x == r) {
                        dotted_rows.remove(k);
                    } else {
                        extra_dotted.push((r, 3));
                    }
                }
                let build = |s: [Edge; 2], d: [Edge; 2]| {
                    let mut s = s.to_vec();
                    s.extend(&extra_solid);
                    let mut d = d.to_vec();
                    d.extend(&extra_dotted);
                    query_from_edges(&s, &d, 2)
                };
                vec![
                    (int(1), build([(i1, a), (i3, b)], [(i2, a), (i4, b)])),
                    (int(1), build([(i3, a), (i1, b)], [(i2, a), (i4, b)])),
                    (int(-1), build([(i1, b), (i3, b)], [(i2, b), (i4, b)])),
                ]
            }
            Relation::FanUnitarity { m } => {
                if *m < 1 {
                    return bad("m >= 1");
                }
                vec![
                    (lin(-1), fan(&[m - 1, 1])),
                    (int(1), fan(&[*m])),
                    (int(-1), fan(&[m - 1])),
                ]
            }
            Relation::FanRecursion { m } => {
                if *m < 1 {
                    return bad("m >= 1");
                }
                let c = RatFun::from_integer(*m as i64).div(&lin(*m as i64 - 1))?;
                vec![(int(1), fan(&[*m])), (-c, fan(&[m - 1]))]
            }
            Relation::ZUnitarity { m: [m1, m2, m3] } => {
                if *m3 < 1 {
                    return bad("m3 >= 1");
                }
                let mut e = Vec::new();
                e.extend(std::iter::repeat_n((1, 1), *m1));
                e.extend(std::iter::repeat_n((1, 2), *m2));
                e.extend(std::iter::repeat_n((2, 2), m3 - 1));
                e.push((3, 2));
                vec![
                    (lin(-2), query_from_edges(&e, &e, 3)),
                    (int(1), z(*m1, *m2, *m3)),
                    (int(1), z(*m1, m2 + 1, m3 - 1)),
                    (int(-1), z(*m1, *m2, m3 - 1)),
                ]
            }
            Relation::ZRecursion { m: [m1, m2, m3] } => {
                if *m3 < 1 {
                    return bad("m3 >= 1");
                }
                let c = RatFun::from_integer(*m3 as i64).div(&lin(*m3 as i64 - 2))?;
                vec![
                    (int(1), z(*m1, *m2, *m3)),
                    (-c.clone(), z(*m1, *m2, m3 - 1)),
                    (c, z(*m1, m2 + 1, m3 - 1)),
                ]
            }
            Relation::Degree3Unitarity { line } => match line {
                1 => vec![(lin(-1), d3(Degree3::C)), (int(1), fan(&[1, 2]))],
                2 => vec![(lin(-1), d3(Degree3::D)), (int(1), fan(&[1, 2]))],
                3 => vec![(lin(-1), d3(Degree3::E)), (int(1), fan(&[1, 1, 1]))],
                4 => vec![
                    (lin(-2), d3(Degree3::F)),
                    (int(1), d3(Degree3::A)),
                    (int(1), d3(Degree3::E)),
                ],
                5 => vec![(lin(-2), d3(Degree3::G)), (int(2), d3(Degree3::E))],
                _ => return bad("line must be 1..=5"),
            },
            Relation::Degree3Direct { id } => match id {
                Degree3::A => vec![
                    (lin(-1), d3(Degree3::A)),
                    (int(1), fan(&[1, 1, 1])),
                    (int(-1), fan(&[1, 1])),
                ],
                Degree3::B => vec![
                    (lin(-2), d3(Degree3::B)),
                    (int(2), d3(Degree3::A)),
                    (int(-1), z(1, 0, 1)),
                ],
                _ => return bad("only 6a and 6b are direct"),
            },
            Relation::XUnitarity { t, u, variant } => {
                let (spec, f) = match variant {
                    XVariant::X4 if *t >= 1 => (
                        XSpec::new([1, 0, *t, *u, 0, 1, t - 1, u + 1])?,
                        fan(&[*t, u + 1]),
                    ),
                    XVariant::X5 if *u >= 1 => (
                        XSpec::new([0, 1, *t, *u, 1, 0, t + 1, u - 1])?,
                        fan(&[t + 1, *u]),
                    ),
                    _ => return bad("x4 needs t >= 1, x5 needs u >= 1"),
                };
                vec![(lin(-1), x_query(&spec)), (int(1), f)]
            }
            Relation::XConjugate { t, u } => {
                let lit = x5_literal_spec(*t, *u)?;
                let spec = XSpec::new([1, 0, *t, u - 1, 0, 1, t - 1, *u])?;
                vec![(int(1), x_query(&lit)), (int(-1), x_query(&spec))]
            }
        };
        Ok(LinearRelation { terms })
    }

    /// The full library over small parameter grids.
    pub fn library() -> Vec<Relation> {
        let mut out = Vec::new();
        for d in 1..=5 {
            for mults in compositions(d) {
                for spectator in [false, true] {
                    out.push(Relation::Fan {
                        mults: mults.clone(),
                        spectator,
                    });
                }
            }
        }
        for code in 0..81usize {
            let rows = [
                code % 3 + 1,
                code / 3 % 3 + 1,
                code / 9 % 3 + 1,
                code / 27 + 1,
            ];
            out.push(Relation::RotationPair { rows });
        }
        for m in 1..=5 {
            out.push(Relation::FanUnitarity { m });
            out.push(Relation::FanRecursion { m });
        }
        for m1 in 0..=2 {
            for m2 in 0..=2 {
                for m3 in 1..=3 {
                    out.push(Relation::ZUnitarity { m: [m1, m2, m3] });
                    out.push(Relation::ZRecursion { m: [m1, m2, m3] });
                }
            }
        }
        for line in 1..=5 {
            out.push(Relation::Degree3Unitarity { line });
        }
        out.push(Relation::Degree3Direct { id: Degree3::A });
        out.push(Relation::Degree3Direct { id: Degree3::B });
        for t in 0..=4usize {
            for u in 0..=4 - t {
                if t >= 1 {
                    out.push(Relation::XUnitarity {
                        t,
                        u,
                        variant: XVariant::X4,
                    });
                }
                if u >= 1 {
                    out.push(Relation::XUnitarity {
                        t,
                        u,
                        variant: XVariant::X5,
                    });
                }
                if t >= 1 && u >= 1 {
                    out.push(Relation::XConjugate { t, u });
                }
            }
        }
        out
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match self {
            Relation::Fan { mults, .. } => write!(f, "{name}{}", IndexSet(mults.clone())),
            Relation::RotationPair { rows } => write!(f, "{name}{}", IndexSet(rows.to_vec())),
            Relation::FanUnitarity { m } | Relation::FanRecursion { m } => {
                write!(f, "{name}(m={m})")
            }
            Relation::ZUnitarity { m } | Relation::ZRecursion { m } => {
                write!(f, "{name}{}", IndexSet(m.to_vec()))
            }
            Relation::Degree3Unitarity { line } => write!(f, "{name}#{line}"),
            Relation::Degree3Direct { id } => write!(f, "{name}({})", id.id()),
            Relation::XUnitarity { t, u, variant } => {
                write!(f, "{name}({variant:?},t={t},u={u})")
            }
            Relation::XConjugate { t, u } => write!(f, "{name}(t={t},u={u})"),
        }
    }
}

/// Positive compositions of `d`.
pub fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// True iff the relation holds symbolically and at every `n` in `ns`.
/// Values of `n` too small for the indices used are skipped.
pub fn verify_relation(rel: &Relation, ns: &[usize]) -> Result<bool> {
    let lin = rel.linear()?;
    if !lin.holds_symbolic()? {
        return Ok(false);
    }
    for &n in ns {
        if n >= lin.max_index() && !lin.holds_at(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`verify_relation`] by name, at `n = p..=p+5` for degree `p`.
pub fn verify_named(name: &str, params: &[usize]) -> Result<bool> {
    let rel = Relation::from_name(name, params)?;
    let p = rel.linear()?.degree().max(1);
    let ns: Vec<usize> = (p..=p + 5).collect();
    verify_relation(&rel, &ns)
}

/// Unitarity sum over the last column index at fixed `n`:
/// `sum_a <I'+i, J'+a | K'+k, L'+a> = delta(i,k) <I',J'|K',L'>`.
pub fn unitarity_sum_holds(prefix: &MomentQuery, i: usize, k: usize, n: usize) -> Result<bool> {
    let push = |s: &IndexSet, x: usize| {
        let mut v = s.0.clone();
        v.push(x);
        IndexSet(v)
    };
    let mut lhs = BigRational::zero();
    for a in 1..=n {
        let q = MomentQuery {
            n,
            i: push(&prefix.i, i),
            j: push(&prefix.j, a),
            k: push(&prefix.k, k),
            l: push(&prefix.l, a),
        };
        lhs += evaluate_fixed(&q)?;
    }
    let rhs = if i == k {
        evaluate_fixed(&prefix.with_n(n))?
    } else {
        BigRational::zero()
    };
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        assert!(verify_named("fan-relation", &[2, 1]).unwrap());
        assert!(verify_named("degree3-unitarity", &[1]).unwrap());
        assert!(verify_named("z-recursion", &[1, 1, 1]).unwrap());
        assert!(verify_named("rotation-pair", &[1, 2, 2, 1]).unwrap());
        assert_eq!(
            verify_named("no-such", &[]),
            Err(Error::UnknownRelation("no-such".into()))
        );
        assert!(Relation::from_name("degree3-unitarity", &[6]).is_err());
    }

    #[test]
    fn z_recursion_at_four() {
        let rel = Relation::ZRecursion { m: [1, 1, 1] }.linear().unwrap();
        assert!(rel.holds_at(4).unwrap());
    }

    #[test]
    fn wrong_relation_fails() {
        // (n-1) F(1,1) + F(1) = 0 is false
        let rel = LinearRelation {
            terms: vec![(lin(-1), fan(&[1, 1])), (int(1), fan(&[1]))],
        };
        assert!(!rel.holds_symbolic().unwrap());
        assert!(!rel.holds_at(3).unwrap());
    }

    #[test]
    fn unitarity_sums() {
        let prefix = MomentQuery::new(3, vec![1], vec![2], vec![1], vec![2]);
        assert!(unitarity_sum_holds(&prefix, 1, 1, 3).unwrap());
        assert!(unitarity_sum_holds(&prefix, 2, 2, 3).unwrap());
        assert!(unitarity_sum_holds(&prefix, 1, 2, 3).unwrap());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4).len(), 8);
    }
}
