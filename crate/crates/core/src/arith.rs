//! Exact arithmetic: big rationals, integer polynomials in the matrix size `n`,
//! and reduced rational functions of `n`.
//!
//! Every symbolic result in the crate is a [`RatFun`]. Values are kept in a
//! canonical form so that equality of two rational functions is a structural
//! comparison of their numerator and denominator polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Polynomial in `n` with arbitrary-precision integer coefficients.
///
/// `coeffs[k]` is the coefficient of `n^k`. The zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly::from_coeffs(vec![c.into()])
    }

    /// The symbol `n` itself.
    pub fn n() -> Self {
        Poly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    /// The linear factor `n + k`.
    pub fn linear(k: i64) -> Self {
        Poly::from_coeffs(vec![BigInt::from(k), BigInt::one()])
    }

    /// Builds a polynomial from low-to-high coefficients, trimming zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn div_scalar_exact(&self, k: &BigInt) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % k).is_zero());
                    c / k
                })
                .collect(),
        }
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    fn shift_scale(&self, power: usize, k: &BigInt) -> Poly {
        let mut coeffs = vec![BigInt::zero(); power];
        coeffs.extend(self.coeffs.iter().map(|c| c * k));
        Poly::from_coeffs(coeffs)
    }

    /// Remainder of `lc(b)^e * self` on division by `b`, up to a nonzero
    /// integer factor. Enough for a primitive remainder sequence.
    fn pseudo_rem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("pseudo-remainder by zero polynomial");
        let lb = b.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = &r.scale(&lb) - &b.shift_scale(dr - db, &lr);
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Exact quotient `self / d` in `Z[n]`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let dd = d.degree()?;
        let ld = d.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (c, rem) = r.leading().unwrap().div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &d.shift_scale(dr - dd, &c);
            q[dr - dd] = c;
        }
        Some(Poly::from_coeffs(q))
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Largest integer root, if any. Bounds the search with Fujiwara's
    /// root bound and scans downward.
    pub fn largest_integer_root(&self) -> Option<i64> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let lead = self.leading().unwrap().to_f64().unwrap().abs();
        let mut bound = 0.0f64;
        for i in 1..=d {
            let c = self.coeffs[d - i].to_f64().unwrap_or(f64::MAX).abs();
            let term = (c / lead).powf(1.0 / i as f64);
            bound = bound.max(term);
        }
        let bound = (2.0 * bound).ceil().min(1e7) as i64 + 1;
        (-bound..=bound)
            .rev()
            .find(|&x| self.eval(&BigInt::from(x)).is_zero())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_default();
                let b = rhs.coeffs.get(i).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "n")?;
                    } else {
                        write!(f, "n^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Reduced rational function of `n`.
///
/// Canonical form: `gcd(num, den)` is a constant, the integer contents of
/// `num` and `den` are coprime and the leading coefficient of `den` is
/// positive. Zero is `0/1`. `validity_min_n` is the smallest matrix size for
/// which the expression is asserted to equal the quantity it represents.
#[derive(Clone, Debug, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
    validity_min_n: i64,
}

impl PartialEq for RatFun {
    /// Structural equality of the reduced forms; `validity_min_n` is metadata
    /// and is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl std::hash::Hash for RatFun {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl RatFun {
    /// Reduces `num / den`. The validity bound is set just above the largest
    /// positive integer pole, and is at least 1.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut f = Self::reduce(num, den, 1);
        if let Some(root) = f.den.largest_integer_root() {
            f.validity_min_n = f.validity_min_n.max(root + 1);
        }
        Ok(f)
    }

    pub fn with_validity(mut self, min_n: i64) -> Self {
        self.validity_min_n = min_n;
        self
    }

    fn reduce(num: Poly, den: Poly, validity_min_n: i64) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFun {
                num,
                den: Poly::one(),
                validity_min_n,
            };
        }
        let (mut num, mut den) = if den.degree() == Some(0) || num.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let mut k = num.content().gcd(&den.content());
        if den.leading().unwrap().is_negative() {
            k = -k;
        }
        if !k.is_one() {
            num = num.div_scalar_exact(&k);
            den = den.div_scalar_exact(&k);
        }
        RatFun {
            num,
            den,
            validity_min_n,
        }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
            validity_min_n: 1,
        }
    }

    pub fn one() -> Self {
        RatFun::from_integer(1)
    }

    pub fn from_integer(c: impl Into<BigInt>) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
            validity_min_n: 1,
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        RatFun::reduce(
            Poly::constant(q.numer().clone()),
            Poly::constant(q.denom().clone()),
            1,
        )
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
            validity_min_n: 1,
        }
    }

    /// The symbol `n`.
    pub fn n() -> Self {
        RatFun::from_poly(Poly::n())
    }

    /// `coeff * prod_a (n + a)! / prod_b (n + b)!` for balanced offset lists,
    /// expanded into linear factors.
    pub fn factorial_ratio(coeff: &BigRational, num: &[i64], den: &[i64], min_n: i64) -> Self {
        assert_eq!(num.len(), den.len(), "unbalanced factorial ratio");
        let lo = num.iter().chain(den).copied().min().unwrap_or(0);
        let hi = num.iter().chain(den).copied().max().unwrap_or(0);
        let mut top = Poly::constant(coeff.numer().clone());
        let mut bottom = Poly::constant(coeff.denom().clone());
        for k in (lo + 1)..=hi {
            let e = num.iter().filter(|&&a| a >= k).count() as i64
                - den.iter().filter(|&&b| b >= k).count() as i64;
            match e.cmp(&0) {
                Ordering::Greater => top = &top * &Poly::linear(k).pow(e as u32),
                Ordering::Less => bottom = &bottom * &Poly::linear(k).pow((-e) as u32),
                Ordering::Equal => {}
            }
        }
        RatFun::reduce(top, bottom, min_n)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn validity_min_n(&self) -> i64 {
        self.validity_min_n
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact value at integer `n`.
    pub fn eval(&self, n: i64) -> Result<BigRational> {
        if n < self.validity_min_n {
            return Err(Error::OutsideValidity {
                n,
                min: self.validity_min_n,
            });
        }
        self.eval_unchecked(n)
    }

    /// Value at `n` ignoring the validity bound; fails only on a pole.
    pub fn eval_unchecked(&self, n: i64) -> Result<BigRational> {
        let x = BigInt::from(n);
        let d = self.den.eval(&x);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(BigRational::new(self.num.eval(&x), d))
    }

    /// Mathematical equality: `num_f * den_g == num_g * den_f`.
    pub fn equals(&self, other: &RatFun) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn scale(&self, k: &BigRational) -> RatFun {
        RatFun::reduce(
            self.num.scale(k.numer()),
            self.den.scale(k.denom()),
            self.validity_min_n,
        )
    }

    pub fn recip(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFun::reduce(
            self.den.clone(),
            self.num.clone(),
            self.validity_min_n,
        ))
    }

    pub fn div(&self, rhs: &RatFun) -> Result<RatFun> {
        Ok(self * &rhs.recip()?)
    }
}

/// Normalizes `num / den`; see [`RatFun::new`].
pub fn ratfun_normalize(num: Poly, den: Poly) -> Result<RatFun> {
    RatFun::new(num, den)
}

pub fn ratfun_eval(f: &RatFun, n: i64) -> Result<BigRational> {
    f.eval(n)
}

pub fn ratfun_equal(f: &RatFun, g: &RatFun) -> bool {
    f.equals(g)
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        let validity = self.validity_min_n.max(rhs.validity_min_n);
        if self.is_zero() {
            return rhs.clone().with_validity(validity);
        }
        if rhs.is_zero() {
            return self.clone().with_validity(validity);
        }
        if self.den == rhs.den {
            return RatFun::reduce(&self.num + &rhs.num, self.den.clone(), validity);
        }
        // Cancel the common part of the denominators before cross-multiplying.
        let g = self.den.gcd(&rhs.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        let den = &(&a * &b) * &g;
        RatFun::reduce(num, den, validity)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
            validity_min_n: self.validity_min_n,
        }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        let validity = self.validity_min_n.max(rhs.validity_min_n);
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero().with_validity(validity);
        }
        // Cross-cancel so the products stay small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RatFun::reduce(&n1 * &n2, &d1 * &d2, validity)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun { (&self).$m(&rhs) }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl std::iter::Sum for RatFun {
    fn sum<I: Iterator<Item = RatFun>>(iter: I) -> RatFun {
        iter.fold(RatFun::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for RatFun {
    /// `(<num>)/(<den>)` with both polynomials in descending powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// `k!` as a big integer.
pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `a / b` as a reduced big rational.
pub fn rational(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Nearest `f64`, for display and Monte Carlo comparison only.
pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    #[test]
    fn normalize_cancels_common_factor() {
        // 2n / 2n^2 = 1/n
        let f = RatFun::new(p(&[0, 2]), p(&[0, 0, 2])).unwrap();
        assert_eq!(f.num(), &p(&[1]));
        assert_eq!(f.den(), &p(&[0, 1]));
        assert_eq!(f.validity_min_n(), 1);
    }

    #[test]
    fn normalize_factorization() {
        // (n^2 - 1)/(n - 1) = n + 1
        let f = RatFun::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(f.num(), &p(&[1, 1]));
        assert_eq!(f.den(), &p(&[1]));
    }

    #[test]
    fn normalize_sign_goes_to_numerator() {
        // 2 / (n - n^3) = -2 / (n^3 - n)
        let f = RatFun::new(p(&[2]), p(&[0, 1, 0, -1])).unwrap();
        assert_eq!(f.num(), &p(&[-2]));
        assert_eq!(f.den(), &p(&[0, -1, 0, 1]));
        assert_eq!(f.to_string(), "(-2)/(n^3 - n)");
        assert_eq!(f.validity_min_n(), 2);
    }

    #[test]
    fn normalize_rejects_zero_denominator() {
        assert_eq!(
            RatFun::new(p(&[1]), Poly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn eval_examples() {
        let inv_n = RatFun::new(p(&[1]), p(&[0, 1])).unwrap();
        assert_eq!(inv_n.eval(4).unwrap(), rational(1, 4));
        let e2 = RatFun::new(p(&[-1]), p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(e2.eval(2).unwrap(), rational(-1, 6));
        let f2 = RatFun::new(p(&[2]), p(&[0, 1, 1])).unwrap();
        assert_eq!(f2.eval(3).unwrap(), rational(1, 6));
        assert!(matches!(e2.eval(1), Err(Error::OutsideValidity { .. })));
    }

    #[test]
    fn equality_examples() {
        let a = RatFun::new(p(&[1]), p(&[0, 1])).unwrap();
        let b = RatFun::new(p(&[2]), p(&[0, 2])).unwrap();
        assert!(a.equals(&b));
        assert_eq!(a, b);
        let c = RatFun::new(p(&[1]), p(&[1, 1])).unwrap();
        assert!(!a.equals(&c));

        // (n^2 - 2)/(n(n^2-1)(n^2-4)) against (n^2-2)(n-3)!/(n+2)!
        let lhs = RatFun::new(p(&[-2, 0, 1]), p(&[0, 4, 0, -5, 0, 1])).unwrap();
        let rhs = RatFun::factorial_ratio(&rational(1, 1), &[-3], &[2], 3)
            * RatFun::from_poly(p(&[-2, 0, 1]));
        assert!(lhs.equals(&rhs));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn factorial_ratio_expands_linear_factors() {
        // (n-1)! 2! / (n+1)! = 2/(n(n+1))
        let f = RatFun::factorial_ratio(&rational(2, 1), &[-1], &[1], 1);
        assert_eq!(f.to_string(), "(2)/(n^2 + n)");
        // (n+2)!/(n-1)! = (n)(n+1)(n+2)
        let g = RatFun::factorial_ratio(&rational(1, 1), &[2], &[-1], 1);
        assert_eq!(g.num(), &p(&[0, 2, 3, 1]));
    }

    #[test]
    fn poly_gcd_of_products_of_linear_factors() {
        let a = &(&Poly::linear(1) * &Poly::linear(-2)) * &Poly::linear(3);
        let b = &(&Poly::linear(-2) * &Poly::linear(3)) * &Poly::linear(5);
        let g = a.gcd(&b.scale(&BigInt::from(6)));
        assert_eq!(g, &Poly::linear(-2) * &Poly::linear(3));
    }

    #[test]
    fn display_formats() {
        assert_eq!(p(&[0, 1, 1]).to_string(), "n^2 + n");
        assert_eq!(p(&[-3, 0, 2]).to_string(), "2*n^2 - 3");
        assert_eq!(p(&[0, -1]).to_string(), "-n");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(RatFun::zero().to_string(), "(0)/(1)");
    }

    #[test]
    fn arithmetic_is_exact() {
        let inv_n = RatFun::new(p(&[1]), p(&[0, 1])).unwrap();
        let inv_np1 = RatFun::new(p(&[1]), p(&[1, 1])).unwrap();
        // 1/n - 1/(n+1) = 1/(n(n+1))
        let d = &inv_n - &inv_np1;
        assert_eq!(d.to_string(), "(1)/(n^2 + n)");
        let prod = &d * &RatFun::from_poly(p(&[0, 1, 1]));
        assert_eq!(prod, RatFun::one());
        assert_eq!(d.div(&d).unwrap(), RatFun::one());
    }
}
