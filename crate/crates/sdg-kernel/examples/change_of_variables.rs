//! Straightening a transport equation along its flow, and conjugating
//! solutions through exponent vector fields.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example change_of_variables
//! ```

use sdg_kernel::algebra::Jet;
use sdg_kernel::flows::{
    chain_rule_residual, change_of_variables, conjugate_apply, pde_residual, ClosedFlow,
};
use sdg_kernel::smooth::{c, var, TestFunction};

fn main() {
    // u(t, x) = e^t (x - t)^2 solves du/dt + D_X(u) = u along the
    // translation field X with xi = 1.
    let u = TestFunction::new(2, var(0).exp() * (var(1) - var(0)).pow(2));
    let flow = ClosedFlow::Translation(vec![1.0]);
    let field = flow.field();
    let eta = var(0); // eta(u) = u

    let r = pde_residual(&u, &field, Some(&eta), 0.6, &[0.4]).unwrap();
    println!("transport-form residual at (0.6, 0.4)   = {r:+.3e}");

    // Substituting x -> F_t(x) removes the transport term: U(t, x) =
    // u(t, x + t) = e^t x^2 solves dU/dt = U.
    let changed = change_of_variables(&u, &flow).unwrap();
    let r = changed
        .residual_zero_field(Some(&eta), 0.6, &[0.4])
        .unwrap();
    println!("straightened residual at (0.6, 0.4)     = {r:+.3e}");
    println!(
        "U(0.6, 0.4) = {:.10}  (e^0.6 * 0.16 = {:.10})",
        changed.eval(&0.6, &[0.4]).unwrap(),
        0.6f64.exp() * 0.16
    );

    // The chain rule along a flow, residual form.
    let w = TestFunction::new(2, var(0) * var(1).pow(2) + var(1).sin());
    let r =
        chain_rule_residual(&w, &ClosedFlow::Scaling { dim: 1, rate: -0.5 }, 0.3, &[0.7]).unwrap();
    println!("chain-rule residual                      = {r:+.3e}");

    // Conjugation: with G the identity flow and F translation,
    // H_t(beta)(x) = beta(x - t).
    let beta = [var(0).pow(2)];
    let out = conjugate_apply(
        &ClosedFlow::Identity(1),
        &ClosedFlow::Translation(vec![1.0]),
        &beta,
        &0.5,
        &[1.25],
    )
    .unwrap();
    println!(
        "conjugated beta at x=1.25, t=0.5         = {} (= 0.75^2)",
        out[0]
    );

    // Tangent vectors are maps out of the square-zero line; conjugating
    // the zero flow through the scaling flow rescales their speed part,
    // which is the scaling action on the tangent bundle.
    let tangent = [c(2.0) + c(3.0) * var(0)]; // base point 2, speed 3
    let d: Jet<f64> = Jet::generator(&0.0, 1);
    let moved = conjugate_apply(
        &ClosedFlow::Identity(1),
        &ClosedFlow::Scaling { dim: 1, rate: 1.0 },
        &tangent,
        &Jet::constant(0.7, 1),
        &[d],
    )
    .unwrap();
    println!("tangent vector (2, 3) after time 0.7     = {}", moved[0]);
}
