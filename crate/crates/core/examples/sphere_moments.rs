//! Monomial moments on the unit sphere in `R^n`.

use haar_moments::sphere::{s_multi, s_single_symbolic, sphere_moment, SphereSpec};

fn main() {
    for p in 1..=4 {
        println!("S({p}) = {}", s_single_symbolic(p));
    }
    for mults in [vec![1, 1], vec![2, 1], vec![2, 2], vec![1, 1, 1]] {
        let v = s_multi(&SphereSpec::new(4, mults.clone()).unwrap()).unwrap();
        println!("n=4  S{mults:?} = {v}");
    }
    println!(
        "E[x1^2 x2^4] on S^2 = {}",
        sphere_moment(&[2, 4, 0]).unwrap()
    );
    println!("E[x1 x2^2] on S^2 = {}", sphere_moment(&[1, 2, 0]).unwrap());
}
