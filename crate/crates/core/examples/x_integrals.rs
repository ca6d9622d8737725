//! X diagrams: enumeration, closed forms where they exist, engine otherwise.
//!
//!     cargo run --example x_integrals -- 3

use haar_moments::invariant::{x_closed_form, x_integral, x_special, XSpec, XVariant};
use haar_moments::weingarten::NMode;

fn main() {
    let p = std::env::args()
        .nth(1)
        .map(|a| a.parse().unwrap())
        .unwrap_or(3);
    for spec in XSpec::enumerate(p) {
        let how = if x_closed_form(&spec).is_some() {
            "closed"
        } else {
            "engine"
        };
        let v = x_integral(&spec, NMode::Symbolic).unwrap();
        println!("{spec}  [{how}]  {v}");
    }
    println!("x4(2,0) = {}", x_special(2, 0, XVariant::X4).unwrap());
    println!("x5(1,1) = {}", x_special(1, 1, XVariant::X5).unwrap());
}
