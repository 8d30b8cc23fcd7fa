//! Truncated polynomial (jet) arithmetic and square-zero rings.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example jet_arithmetic
//! ```

use sdg_kernel::algebra::{Algebra, Jet, Rat, SquareZero};

fn main() {
    // Jets are polynomials modulo t^(order+1); the generator squares to
    // zero at order 1.
    let t: Jet<f64> = Jet::generator(&0.0, 1);
    println!("t * t            = {}", t.mul(&t));

    let a = Jet::from_coeffs(vec![1.0, 1.0, 1.0]); // 1 + t + t^2
    println!("(1 + t + t^2)^2  = {}", a.mul(&a));

    // Exponentials of nilpotents are finite sums, exact over rationals.
    let n = Jet::from_coeffs(vec![Rat::from_int(0), Rat::from_int(2)]).resize(3);
    println!("exp(2t) order 3  = {}", n.exp_nilpotent().unwrap());

    // Mismatched orders are rejected rather than promoted.
    let b = Jet::from_coeffs(vec![1.0, 1.0]);
    println!("order mismatch   : {}", a.checked_mul(&b).unwrap_err());

    // Square-zero rings: generators d1, d2 with d_i^2 = 0.
    let d1 = SquareZero::generator(&0.0, 2, 0);
    let d2 = SquareZero::generator(&0.0, 2, 1);
    let one = SquareZero::constant(1.0, 2);
    println!("(1 + d1)(1 + d2) = {}", one.add(&d1).mul(&one.add(&d2)));
    println!("d1 * d1          = {}", d1.mul(&d1));

    // Symmetric elements collapse onto the single variable t = d1 + d2:
    // d1 d2 becomes t^2/2 because t^2 = 2 d1 d2.
    let top = d1.mul(&d2);
    println!(
        "collapse(d1 d2)  = {}",
        top.collapse_symmetric(0.0).unwrap()
    );

    // Elements that are not symmetric are refused, with a witness pair.
    println!(
        "collapse(d1)     : {}",
        d1.collapse_symmetric(0.0).unwrap_err()
    );
}
