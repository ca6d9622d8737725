//! Reducing a moment to `<I,J|I,J_Q>` form and evaluating it both ways.

use haar_moments::query::{canonicalize, MomentQuery};
use haar_moments::weingarten::{evaluate_fixed, evaluate_symbolic};

fn main() {
    let queries = [
        MomentQuery::new(3, vec![1], vec![2], vec![1], vec![2]),
        MomentQuery::new(2, vec![1, 2], vec![1, 2], vec![1, 2], vec![2, 1]),
        MomentQuery::new(
            3,
            vec![3, 1, 3],
            vec![2, 2, 1],
            vec![1, 3, 3],
            vec![2, 1, 2],
        ),
        MomentQuery::new(3, vec![1, 1], vec![1, 2], vec![1, 2], vec![1, 1]),
    ];
    for q in &queries {
        let c = canonicalize(q).unwrap();
        let exact = evaluate_fixed(q).unwrap();
        let sym = evaluate_symbolic(q).unwrap();
        println!("{q}");
        println!("  canonical  I={} J={} Q={}", c.i, c.j, c.q);
        println!("  n={}: {exact}    all n: {sym}", q.n);
    }
}
