//! The degree-2 exchange integral and the seven degree-3 diagrams.

use haar_moments::invariant::diagrams::degree3_query;
use haar_moments::invariant::{degree3, degree3_by_unitarity, exchange_e2, Degree3};
use haar_moments::weingarten::evaluate_symbolic;

fn main() {
    println!("E(2) = {}", exchange_e2());
    for id in Degree3::ALL {
        let closed = degree3(id);
        let derived = degree3_by_unitarity(id);
        let engine = evaluate_symbolic(&degree3_query(id)).unwrap();
        println!(
            "{id} = {closed}   from unitarity: {}   engine: {}",
            closed == derived,
            closed == engine
        );
    }
}
