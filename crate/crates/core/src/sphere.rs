//! Monomial integrals over the unit sphere in `R^n` with the normalized
//! rotation-invariant measure.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{factorial, BigRational, Poly, RatFun};
use crate::error::{Error, Result};

/// Half-exponents `m_1..m_t` of `prod x_i^{2 m_i}` on the sphere in `R^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SphereSpec {
    n: usize,
    mults: Vec<usize>,
}

impl SphereSpec {
    /// Zero multiplicities are dropped.
    pub fn new(n: usize, mults: Vec<usize>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSize);
        }
        let mults: Vec<usize> = mults.into_iter().filter(|&m| m > 0).collect();
        if mults.len() > n {
            return Err(Error::TooManyCoordinates);
        }
        Ok(SphereSpec { n, mults })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn degree(&self) -> usize {
        self.mults.iter().sum()
    }
}

/// `S(p) = prod_{k=1}^p (2k-1)/(n+2k-2)`, by the recursion
/// `S(k) = S(k-1) (2k-1)/(n+2k-2)` from `S(0) = 1`.
pub fn s_single(p: usize, n: usize) -> Result<BigRational> {
    if n < 1 {
        return Err(Error::InvalidSize);
    }
    let mut s = BigRational::one();
    for k in 1..=p {
        s *= BigRational::new(BigInt::from(2 * k - 1), BigInt::from(n + 2 * k - 2));
    }
    Ok(s)
}

/// `S(p)` as a rational function of `n`.
pub fn s_single_symbolic(p: usize) -> RatFun {
    let mut num = Poly::one();
    let mut den = Poly::one();
    for k in 1..=p as i64 {
        num = num.scale(&BigInt::from(2 * k - 1));
        den = &den * &Poly::linear(2 * k - 2);
    }
    RatFun::new(num, den)
        .expect("nonzero denominator")
        .with_validity(1)
}

/// `S(m) = (p!/prod m_i!) (prod (2 m_i)! / (2p)!) S(p)`.
pub fn s_multi(spec: &SphereSpec) -> Result<BigRational> {
    let p = spec.degree();
    let mut num = factorial(p as u64);
    let mut den = factorial(2 * p as u64);
    for &m in spec.mults() {
        num *= factorial(2 * m as u64);
        den *= factorial(m as u64);
    }
    Ok(BigRational::new(num, den) * s_single(p, spec.n)?)
}

/// Integral of `prod x_i^{e_i}` with one exponent per coordinate.
pub fn sphere_moment(exponents: &[usize]) -> Result<BigRational> {
    if exponents.is_empty() {
        return Err(Error::InvalidSize);
    }
    if exponents.iter().any(|e| e % 2 == 1) {
        return Ok(BigRational::zero());
    }
    let spec = SphereSpec::new(exponents.len(), exponents.iter().map(|e| e / 2).collect())?;
    s_multi(&spec)
}
