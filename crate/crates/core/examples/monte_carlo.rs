//! Haar sampling estimates next to exact values.
//!
//!     cargo run --release --example monte_carlo -- 100000 42

use haar_moments::arith::to_f64;
use haar_moments::montecarlo::{estimate_moment, estimate_sphere_moment, SamplerConfig};
use haar_moments::query::MomentQuery;
use haar_moments::sphere::sphere_moment;
use haar_moments::weingarten::evaluate_fixed;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().unwrap());
    let samples = args.next().unwrap_or(100_000);
    let seed = args.next().unwrap_or(42);
    let n = 3;
    let cfg = SamplerConfig::new(seed, samples, n).unwrap();
    for q in [
        MomentQuery::new(n, vec![1, 1], vec![1, 1], vec![1, 1], vec![1, 1]),
        MomentQuery::new(n, vec![1, 2], vec![1, 2], vec![1, 2], vec![2, 1]),
        MomentQuery::new(
            n,
            vec![1, 1, 2],
            vec![1, 2, 2],
            vec![1, 1, 2],
            vec![2, 2, 1],
        ),
    ] {
        let exact = to_f64(&evaluate_fixed(&q).unwrap());
        let est = estimate_moment(&q, &cfg).unwrap();
        println!(
            "{q}: {:.6} +- {:.6}  exact {exact:.6}  ({:.2} sigma)",
            est.mean.re,
            est.stderr,
            est.sigmas(exact)
        );
    }
    let exact = to_f64(&sphere_moment(&[2, 2, 0]).unwrap());
    let est = estimate_sphere_moment(&[2, 2], &cfg).unwrap();
    println!(
        "sphere x1^2 x2^2: {:.6} +- {:.6}  exact {exact:.6}",
        est.mean.re, est.stderr
    );
}
