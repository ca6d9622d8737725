//! Checks every relation in the built-in library, symbolically and at a few
//! integer sizes.

use haar_moments::invariant::relations::{verify_relation, Relation};

fn main() {
    let mut failed = 0;
    let library = Relation::library();
    for rel in &library {
        let p = rel.linear().unwrap().degree();
        let ok = verify_relation(rel, &[p, p + 1, p + 2]).unwrap();
        if !ok {
            failed += 1;
        }
        println!("{} {rel}", if ok { "ok  " } else { "FAIL" });
    }
    println!("{} relations, {failed} failed", library.len());
}
