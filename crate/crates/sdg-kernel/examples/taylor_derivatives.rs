//! Exact derivatives of smooth test functions through jet evaluation.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example taylor_derivatives
//! ```

use sdg_kernel::algebra::Jet;
use sdg_kernel::smooth::{battery, central_diff5, var, TestFunction};

fn main() {
    // phi(x) = x^2 e^{-x^2}; evaluating at 0.5 + t unrolls the Taylor
    // series, so derivatives carry no finite-difference error.
    let phi = TestFunction::new(1, var(0).pow(2) * (-var(0).pow(2)).exp());
    let series = phi.eval(&[Jet::variable(0.5, 4)]).unwrap();
    println!("phi(0.5 + t) = {series}");

    let d1 = phi.derivative(&[1], &[0.5]).unwrap();
    let fd = central_diff5(|x| phi.eval_f64(&[x]).unwrap(), 0.5, 1e-4);
    println!("phi'(0.5)  jet   = {d1:.15}");
    println!("phi'(0.5)  fd    = {fd:.15}   (five-point stencil)");

    // Mixed partials peel extra axes symbolically, then read one jet.
    let psi = TestFunction::new(2, var(0).pow(2) * var(1));
    println!(
        "d2(x^2 y)/dxdy at (1,1) = {}",
        psi.derivative(&[1, 1], &[1.0, 1.0]).unwrap()
    );

    // Laplacians per axis; lifting a planar function to 3 variables
    // through the projection changes nothing.
    println!(
        "lap(x^2+y^2) = {}",
        TestFunction::new(2, var(0).pow(2) + var(1).pow(2))
            .laplacian(&[0.3, -0.7])
            .unwrap()
    );

    // The built-in battery spans polynomials, gaussians, and a compactly
    // supported bump; the bump vanishes identically beyond radius 2.
    for phi in battery(1) {
        let at0 = phi.eval_f64(&[0.0]).unwrap();
        let at3 = phi.eval_f64(&[3.0]).unwrap();
        println!(
            "{:<12} phi(0) = {at0:>8.4}   phi(3) = {at3:>8.4}",
            phi.name()
        );
    }

    // Hadamard quotient for polynomials: phi(x) = phi(0) + x psi(x).
    let poly = TestFunction::new(1, var(0).pow(3) - var(0).pow(2) + var(0));
    let quotient = poly.hadamard_quotient().unwrap();
    println!("hadamard quotient of x^3 - x^2 + x: {quotient}");
}
