//! Closed forms obtained from Haar invariance and unitarity alone.
//!
//! Each family comes with a diagram builder in [`diagrams`] that turns its
//! parameters into a concrete [`MomentQuery`], so every closed form can be
//! checked against the group-sum evaluator. [`relations`] holds the
//! rotation and unitarity identities connecting the families.

pub mod diagrams;
pub mod relations;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{factorial, BigRational, Poly, RatFun};
use crate::error::{Error, Result};
use crate::weingarten::{self, MomentValue, NMode};

pub use diagrams::{recognize, ClosedForm};
pub use relations::{verify_relation, Relation};

fn big_fact(k: usize) -> BigInt {
    factorial(k as u64)
}

fn ratio(coeff: BigInt) -> BigRational {
    BigRational::from_integer(coeff)
}

/// Multiplicities of the lines of a fan: one row dot joined to `t` column
/// dots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FanSpec(Vec<usize>);

impl FanSpec {
    pub fn new(mults: Vec<usize>) -> Result<Self> {
        if mults.is_empty() {
            return Err(Error::InvalidParameter(
                "a fan needs at least one line".into(),
            ));
        }
        if mults.contains(&0) {
            return Err(Error::InvalidParameter(
                "fan multiplicities must be positive; drop empty lines".into(),
            ));
        }
        Ok(FanSpec(mults))
    }

    pub fn mults(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

/// `F(m_1..m_t) = (prod m_i!) (n-1)! / (n + sum m_i - 1)!`.
pub fn fan_f(spec: &FanSpec) -> RatFun {
    let coeff: BigInt = spec.mults().iter().map(|&m| big_fact(m)).product();
    let d = spec.degree() as i64;
    RatFun::factorial_ratio(&ratio(coeff), &[-1], &[d - 1], 1)
}

/// Z integral: row `i` joined to column `a` (`m1` lines) and column `b`
/// (`m2`), row `j` joined to column `b` (`m3`).
///
/// `m1! m2! m3! (n-2)! (n-1)! (n+m1+m3-2)! / ((n+m1-2)! (n+m3-2)! (n+m1+m2+m3-1)!)`
pub fn z_integral(m1: usize, m2: usize, m3: usize) -> RatFun {
    let coeff = big_fact(m1) * big_fact(m2) * big_fact(m3);
    let (a, b, c) = (m1 as i64, m2 as i64, m3 as i64);
    RatFun::factorial_ratio(
        &ratio(coeff),
        &[-2, -1, a + c - 2],
        &[a - 2, c - 2, a + b + c - 1],
        2,
    )
}

/// The degree-2 exchange integral `E(2) = -1/(n(n^2-1))`.
///
/// Computed by rotation as `F(1,1) - Z(1,0,1)`; the unitarity route
/// `-F(1,1)/(n-1)` must agree.
pub fn exchange_e2() -> RatFun {
    let f11 = fan_f(&FanSpec(vec![1, 1]));
    let by_rotation = &f11 - &z_integral(1, 0, 1);
    let by_unitarity = -f11
        .div(&RatFun::from_poly(Poly::linear(-1)))
        .expect("n - 1 is nonzero");
    assert_eq!(
        by_rotation, by_unitarity,
        "rotation and unitarity routes disagree"
    );
    by_rotation.with_validity(2)
}

/// The seven degree-3 diagrams that are not fans or Z integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree3 {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Degree3 {
    pub const ALL: [Degree3; 7] = [
        Degree3::A,
        Degree3::B,
        Degree3::C,
        Degree3::D,
        Degree3::E,
        Degree3::F,
        Degree3::G,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Degree3::A => "6a",
            Degree3::B => "6b",
            Degree3::C => "6c",
            Degree3::D => "6d",
            Degree3::E => "6e",
            Degree3::F => "6f",
            Degree3::G => "6g",
        }
    }

    /// Direct integrals are positive; the rest are exchange integrals.
    pub fn is_direct(self) -> bool {
        matches!(self, Degree3::A | Degree3::B)
    }
}

impl fmt::Display for Degree3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({})", self.id())
    }
}

impl FromStr for Degree3 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches("I(").trim_end_matches(')');
        Degree3::ALL
            .into_iter()
            .find(|d| d.id() == key || &d.id()[1..] == key)
            .ok_or_else(|| Error::UnknownDiagram(s.to_string()))
    }
}

/// Closed forms of the degree-3 diagrams, with factorial ratios expanded.
pub fn degree3(id: Degree3) -> RatFun {
    let one = || ratio(BigInt::one());
    // (n-k)!/(n+2)! as a ratio with coefficient c
    let tail = |c: i64, k: i64, min_n: i64| {
        RatFun::factorial_ratio(&ratio(BigInt::from(c)), &[-k], &[2], min_n)
    };
    match id {
        Degree3::A => {
            let den = &(&Poly::linear(-1) * &Poly::n()) * &Poly::linear(2);
            RatFun::new(Poly::one(), den).unwrap().with_validity(2)
        }
        Degree3::B => {
            let base = RatFun::factorial_ratio(&one(), &[-3], &[2], 3);
            (base * RatFun::from_poly(Poly::from_i64s(&[-2, 0, 1]))).with_validity(3)
        }
        Degree3::C | Degree3::D => tail(-2, 2, 2),
        Degree3::E => tail(-1, 2, 2),
        Degree3::F => (tail(-1, 3, 3) * RatFun::n()).with_validity(3),
        Degree3::G => tail(2, 3, 3),
    }
}

/// The same values derived step by step from the unitarity sums, starting
/// from fan and Z integrals.
pub fn degree3_by_unitarity(id: Degree3) -> RatFun {
    let f = |m: &[usize]| fan_f(&FanSpec(m.to_vec()));
    let lin = |k: i64| RatFun::from_poly(Poly::linear(k));
    let over = |x: RatFun, k: i64| x.div(&lin(k)).unwrap();
    let a = over(&f(&[1, 1]) - &f(&[1, 1, 1]), -1);
    let e = -over(f(&[1, 1, 1]), -1);
    let value = match id {
        Degree3::A => a,
        Degree3::B => {
            let two_a = a.scale(&ratio(BigInt::from(2)));
            over(&z_integral(1, 0, 1) - &two_a, -2)
        }
        Degree3::C | Degree3::D => -over(f(&[1, 2]), -1),
        Degree3::E => e,
        Degree3::F => -over(&a + &e, -2),
        Degree3::G => -over(e.scale(&ratio(BigInt::from(2))), -2),
    };
    value.with_validity(degree3(id).validity_min_n())
}

/// The two exchange X integrals with a single rotated line pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XVariant {
    /// `X(1,0,t,u | 0,1,t-1,u+1)`
    X4,
    /// `X(0,1,t,u | 1,0,t+1,u-1)`
    X5,
}

/// `x4: -t!(u+1)!(n-2)!/(n+t+u)!`, `x5: -(t+1)!u!(n-2)!/(n+t+u)!`.
pub fn x_special(t: usize, u: usize, variant: XVariant) -> Result<RatFun> {
    let coeff = match variant {
        XVariant::X4 => {
            if t < 1 {
                return Err(Error::InvalidParameter("x4 needs t >= 1".into()));
            }
            big_fact(t) * big_fact(u + 1)
        }
        XVariant::X5 => {
            if u < 1 {
                return Err(Error::InvalidParameter("x5 needs u >= 1".into()));
            }
            big_fact(t + 1) * big_fact(u)
        }
    };
    Ok(RatFun::factorial_ratio(
        &ratio(-coeff),
        &[-2],
        &[(t + u) as i64],
        2,
    ))
}

/// Weights of the one-loop X integral on rows `i, j` and columns `a, b`.
///
/// `U*` carries `r, s, t, u` lines on the edges `i-a, i-b, j-b, j-a`; `U`
/// carries `r2, s2, t2, u2` on the same edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct XSpec {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub u: usize,
    pub r2: usize,
    pub s2: usize,
    pub t2: usize,
    pub u2: usize,
}

impl XSpec {
    /// Checks that every dot has as many `U` as `U*` lines.
    pub fn new(w: [usize; 8]) -> Result<Self> {
        let spec = XSpec {
            r: w[0],
            s: w[1],
            t: w[2],
            u: w[3],
            r2: w[4],
            s2: w[5],
            t2: w[6],
            u2: w[7],
        };
        if spec.r2 + spec.s2 != spec.r + spec.s
            || spec.s2 + spec.t2 != spec.s + spec.t
            || spec.t2 + spec.u2 != spec.t + spec.u
        {
            return Err(Error::XConstraint);
        }
        Ok(spec)
    }

    pub fn weights(&self) -> [usize; 8] {
        [
            self.r, self.s, self.t, self.u, self.r2, self.s2, self.t2, self.u2,
        ]
    }

    pub fn degree(&self) -> usize {
        self.r + self.s + self.t + self.u
    }

    /// Total lines on the top edge `i-a`.
    pub fn rho(&self) -> usize {
        self.r + self.r2
    }

    /// Total lines on the edge `i-b`.
    pub fn sigma(&self) -> usize {
        self.s + self.s2
    }

    /// All specs of degree `p`.
    pub fn enumerate(p: usize) -> Vec<XSpec> {
        let mut out = Vec::new();
        for r in 0..=p {
            for s in 0..=p - r {
                for t in 0..=p - r - s {
                    let u = p - r - s - t;
                    for r2 in 0..=r + s {
                        let s2 = r + s - r2;
                        let Some(t2) = (s + t).checked_sub(s2) else {
                            continue;
                        };
                        let Some(u2) = (t + u).checked_sub(t2) else {
                            continue;
                        };
                        out.push(XSpec {
                            r,
                            s,
                            t,
                            u,
                            r2,
                            s2,
                            t2,
                            u2,
                        });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for XSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "X({},{},{},{}|{},{},{},{})",
            self.r, self.s, self.t, self.u, self.r2, self.s2, self.t2, self.u2
        )
    }
}

/// Closed form of an X integral when one is known: the Z integrals at
/// `rho = 0` or `sigma = 0`, and the two exchange cases with
/// `rho + sigma = 2`.
pub fn x_closed_form(spec: &XSpec) -> Option<RatFun> {
    if spec.rho() == 0 {
        return Some(z_integral(spec.u, spec.t, spec.s));
    }
    if spec.sigma() == 0 {
        return Some(z_integral(spec.r, spec.u, spec.t));
    }
    match (spec.r, spec.s, spec.r2, spec.s2) {
        (1, 0, 0, 1) => x_special(spec.t, spec.u, XVariant::X4).ok(),
        (0, 1, 1, 0) => x_special(spec.t, spec.u, XVariant::X5).ok(),
        _ => None,
    }
}

/// Value of the X integral. Uses a closed form where one exists (and, at
/// fixed `n`, where `n` is inside its validity domain); otherwise evaluates
/// the loop diagram with the group-sum engine.
pub fn x_integral(spec: &XSpec, mode: NMode) -> Result<MomentValue> {
    if let Some(f) = x_closed_form(spec) {
        match mode {
            NMode::Symbolic => return Ok(MomentValue::Symbolic(f)),
            NMode::Fixed(n) if n as i64 >= f.validity_min_n() => {
                return Ok(MomentValue::Exact(f.eval(n as i64)?))
            }
            NMode::Fixed(_) => {}
        }
    }
    let q = diagrams::x_query(spec);
    let q = match mode {
        NMode::Fixed(n) => q.with_n(n as usize),
        NMode::Symbolic => q,
    };
    weingarten::moment(&crate::query::canonicalize(&q)?, mode)
}
