//! Character table of `S_p`, with the dimensions of the matching `S_p` and
//! `U(n)` irreps.
//!
//!     cargo run --example character_table -- 4

use haar_moments::combinat::{character, dim_sym, dim_unitary, enumerate_partitions};

fn main() {
    let p = std::env::args()
        .nth(1)
        .map(|a| a.parse().unwrap())
        .unwrap_or(4);
    let parts = enumerate_partitions(p);
    print!("{:>12}", "");
    for c in &parts {
        print!("{:>10}", format!("({c})"));
    }
    println!("{:>8}  dim U(n)", "dim");
    for f in &parts {
        print!("{:>12}", format!("[{f}]"));
        for c in &parts {
            print!("{:>10}", character(f, c).unwrap());
        }
        println!("{:>8}  {}", dim_sym(f), dim_unitary(f));
    }
}
