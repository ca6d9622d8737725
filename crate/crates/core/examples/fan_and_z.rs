//! Fan and Z integrals from their closed forms, checked against the group sum.

use haar_moments::invariant::diagrams::{fan_query, z_query};
use haar_moments::invariant::{fan_f, z_integral, FanSpec};
use haar_moments::weingarten::evaluate_symbolic;

fn main() {
    for mults in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![3, 2, 1]] {
        let spec = FanSpec::new(mults.clone()).unwrap();
        let f = fan_f(&spec);
        let engine = evaluate_symbolic(&fan_query(&spec)).unwrap();
        println!("F{mults:?} = {f}  (engine agrees: {})", f == engine);
    }
    for m in [(1, 0, 1), (1, 1, 1), (2, 0, 1), (1, 1, 2), (2, 2, 2)] {
        let z = z_integral(m.0, m.1, m.2);
        let engine = evaluate_symbolic(&z_query(m.0, m.1, m.2)).unwrap();
        println!(
            "Z({},{},{}) = {z}  valid from n={}  (engine agrees: {})",
            m.0,
            m.1,
            m.2,
            z.validity_min_n(),
            z == engine
        );
    }
}
