//! Sampling checks: Haar-random unitaries and uniform points on the sphere.
//!
//! Sample `s` of a run with seed `x` is drawn from ChaCha8 seeded with
//! `seed_from_u64(x)` on stream `s`, so every sample is reproducible on its
//! own. Samples are grouped in fixed chunks of [`CHUNK`] that are reduced in
//! parallel and merged in index order; the result does not depend on the
//! number of threads.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::query::MomentQuery;

pub const CHUNK: u64 = 4096;

/// Agreement threshold in standard errors.
pub const SIGMAS: f64 = 5.0;

/// Absolute floor on the tolerance, for moments that vanish exactly.
pub const FLOOR: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub samples: u64,
    pub n: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, samples: u64, n: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::InvalidParameter(
                "at least 2 samples are needed".into(),
            ));
        }
        if n < 1 {
            return Err(Error::InvalidSize);
        }
        Ok(SamplerConfig { seed, samples, n })
    }

    /// Generator for one sample.
    pub fn rng(&self, sample: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample);
        rng
    }
}

/// Sample mean with standard errors. `stderr` is for the complex mean as a
/// whole: `sqrt((var_re + var_im) / samples)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn tolerance(&self) -> f64 {
        (SIGMAS * self.stderr).max(FLOOR)
    }

    /// Distance to `exact` in units of `stderr`.
    pub fn sigmas(&self, exact: f64) -> f64 {
        let d = (self.mean - Complex64::new(exact, 0.0)).norm();
        if self.stderr > 0.0 {
            d / self.stderr
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// `|mean - exact| < 5 stderr` (with the absolute floor) and
    /// `|Im mean| < 5 stderr`.
    pub fn agrees_with(&self, exact: f64) -> bool {
        let tol = self.tolerance();
        (self.mean - Complex64::new(exact, 0.0)).norm() < tol && self.mean.im.abs() < tol
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Welford {
    count: u64,
    mean: Complex64,
    m2_re: f64,
    m2_im: f64,
}

impl Welford {
    fn push(&mut self, x: Complex64) {
        self.count += 1;
        let k = self.count as f64;
        let d = x - self.mean;
        self.mean += d / k;
        let d2 = x - self.mean;
        self.m2_re += d.re * d2.re;
        self.m2_im += d.im * d2.im;
    }

    fn merge(self, other: Welford) -> Welford {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let d = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + d * (nb / n),
            m2_re: self.m2_re + other.m2_re + d.re * d.re * na * nb / n,
            m2_im: self.m2_im + other.m2_im + d.im * d.im * na * nb / n,
        }
    }

    fn finish(self) -> Estimate {
        let n = self.count as f64;
        let var_re = self.m2_re / (n - 1.0);
        let var_im = self.m2_im / (n - 1.0);
        Estimate {
            mean: self.mean,
            stderr: ((var_re + var_im) / n).sqrt(),
            stderr_re: (var_re / n).sqrt(),
            stderr_im: (var_im / n).sqrt(),
            samples: self.count,
        }
    }
}

/// Mean of `f` over `cfg.samples` independent draws.
pub fn estimate<F>(cfg: &SamplerConfig, f: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> Complex64 + Sync,
{
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<Welford> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut w = Welford::default();
            for s in c * CHUNK..((c + 1) * CHUNK).min(cfg.samples) {
                w.push(f(&mut cfg.rng(s)));
            }
            w
        })
        .collect();
    parts
        .into_iter()
        .fold(Welford::default(), Welford::merge)
        .finish()
}

/// Uniform in `(0, 1]`.
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Two independent standard normals by Box-Muller.
pub fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let r = (-2.0 * uniform(rng).ln()).sqrt();
    let theta = 2.0 * PI * uniform(rng);
    (r * theta.cos(), r * theta.sin())
}

/// Dense complex square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for k in 0..n {
            m.data[k * n + k] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Permutation matrix with `P e_k = e_{perm[k]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = CMatrix::zeros(n);
        for (k, &r) in perm.iter().enumerate() {
            m.data[r * n + k] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Zero-based entry.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                for c in 0..n {
                    out.data[r * n + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    /// `max |(U^dagger U - 1)_{rc}|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    s += self.get(r, a).conj() * self.get(r, b);
                }
                if a == b {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// Haar-distributed unitary: a complex Ginibre matrix orthonormalized
/// column by column. Gram-Schmidt leaves the triangular factor with a
/// positive real diagonal, which is what makes the result Haar.
pub fn sample_haar(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| {
                let (x, y) = normal_pair(rng);
                Complex64::new(x, y)
            })
            .collect();
        // two passes of projection for stability
        for _ in 0..2 {
            for q in &cols {
                let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qa) in v.iter_mut().zip(q) {
                    *x -= dot * qa;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    let mut m = CMatrix::zeros(n);
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            m.data[r * n + c] = *x;
        }
    }
    m
}

/// `prod conj(U_{i_a j_a}) prod U_{k_b l_b}` with one-based indices.
pub fn monomial(u: &CMatrix, q: &MomentQuery) -> Complex64 {
    let mut x = Complex64::new(1.0, 0.0);
    for (&i, &j) in q.i.0.iter().zip(&q.j.0) {
        x *= u.get(i - 1, j - 1).conj();
    }
    for (&k, &l) in q.k.0.iter().zip(&q.l.0) {
        x *= u.get(k - 1, l - 1);
    }
    x
}

fn check_query(q: &MomentQuery, n: usize) -> Result<()> {
    if q.i.len() != q.j.len() || q.k.len() != q.l.len() {
        return Err(Error::MalformedQuery("index sets of unequal length".into()));
    }
    for set in [&q.i, &q.j, &q.k, &q.l] {
        if let Some(&bad) = set.0.iter().find(|&&x| x < 1 || x > n) {
            return Err(Error::IndexOutOfRange { value: bad, n });
        }
    }
    Ok(())
}

/// Sample estimate of `<I,J|K,L>` at matrix size `cfg.n`.
pub fn estimate_moment(q: &MomentQuery, cfg: &SamplerConfig) -> Result<Estimate> {
    check_query(q, cfg.n)?;
    Ok(estimate(cfg, |rng| monomial(&sample_haar(cfg.n, rng), q)))
}

/// The same monomial evaluated on `V U` instead of `U`.
pub fn estimate_moment_left(q: &MomentQuery, cfg: &SamplerConfig, v: &CMatrix) -> Result<Estimate> {
    check_query(q, cfg.n)?;
    if v.n() != cfg.n {
        return Err(Error::InvalidSize);
    }
    Ok(estimate(cfg, |rng| {
        monomial(&v.mul(&sample_haar(cfg.n, rng)), q)
    }))
}

/// Uniform point on the unit sphere in `R^n`.
pub fn sample_sphere(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    while v.len() < n {
        let (a, b) = normal_pair(rng);
        v.push(a);
        v.push(b);
    }
    v.truncate(n);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / norm).collect()
}

/// Sample estimate of `prod x_i^{e_i}` on the sphere in `R^{cfg.n}`.
pub fn estimate_sphere_moment(exponents: &[usize], cfg: &SamplerConfig) -> Result<Estimate> {
    if exponents.len() > cfg.n {
        return Err(Error::TooManyCoordinates);
    }
    Ok(estimate(cfg, |rng| {
        let x = sample_sphere(cfg.n, rng);
        let v: f64 = exponents
            .iter()
            .zip(&x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product();
        Complex64::new(v, 0.0)
    }))
}
