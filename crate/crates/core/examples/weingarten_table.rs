//! Class integrals `xi(c)` for every cycle type of `S_p`, symbolic and at a
//! fixed `n`.
//!
//!     cargo run --example weingarten_table -- 4 3

use haar_moments::combinat::enumerate_partitions;
use haar_moments::weingarten::{xi, NMode};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().unwrap());
    let p = args.next().unwrap_or(3) as usize;
    let n = args.next().unwrap_or(2);
    println!("p = {p}");
    for c in enumerate_partitions(p) {
        let sym = xi(&c, NMode::Symbolic).unwrap();
        let fixed = xi(&c, NMode::Fixed(n)).unwrap();
        println!("  ({c})  {sym}    at n={n}: {fixed}");
    }
}
