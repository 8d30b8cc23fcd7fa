//! Formal flows of vector fields via the square-zero composition and
//! symmetric collapse.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example formal_flows
//! ```

use sdg_kernel::algebra::Rat;
use sdg_kernel::flows::{
    check_flow_composition, flow_taylor_recurrence, formal_flow, sum_zero_composition_is_identity,
    VectorField,
};
use sdg_kernel::smooth::{ratio, var};

fn main() {
    // xi(x) = x flows to e^t, xi(x) = x^2 to 1/(1-t), xi(x) = 1 + x^2 to
    // tan t. The composition of the infinitesimal action over n fresh
    // square-zero generators, collapsed onto t = d1 + ... + dn, yields
    // the Taylor jet exactly.
    let cases = [
        ("x", VectorField::scalar(var(0)), Rat::from_int(1)),
        ("x^2", VectorField::scalar(var(0).pow(2)), Rat::from_int(1)),
        (
            "1 + x^2",
            VectorField::scalar(ratio(1, 1) + var(0).pow(2)),
            Rat::from_int(0),
        ),
    ];
    for (name, field, m) in &cases {
        let flow = formal_flow(field, std::slice::from_ref(m), 6, 0.0).unwrap();
        println!("flow of xi = {name:<7} at {m}: {}", flow[0]);

        // an independent route: the univariate coefficient recurrence
        let recurrence = flow_taylor_recurrence(field, std::slice::from_ref(m), 6).unwrap();
        assert_eq!(flow, recurrence);
    }

    // Rotation in the plane: xi = (-y, x) at (1, 0) gives cosine and sine.
    let rotation = VectorField::new(vec![-var(1), var(0)]);
    let flow = formal_flow(&rotation, &[Rat::from_int(1), Rat::from_int(0)], 6, 0.0).unwrap();
    println!("rotation x(t) = {}", flow[0]);
    println!("rotation y(t) = {}", flow[1]);

    // Generators that sum to zero compose to the identity, exactly, in
    // the quotient ring where the substituted last generator is itself
    // square-zero.
    for n in 2..=5 {
        let ok = sum_zero_composition_is_identity(
            &VectorField::scalar(var(0).pow(2)),
            &[Rat::new(1, 2)],
            n,
        )
        .unwrap();
        println!("{n} generators summing to zero compose to the identity: {ok}");
    }

    // The monoid law F_{tau+sigma} = F_tau ∘ F_sigma holds exactly in
    // nested nilpotent times.
    let ok =
        check_flow_composition(&VectorField::scalar(var(0).pow(2)), &[Rat::new(1, 3)], 3).unwrap();
    println!("flow composition law over nested jets: {ok}");
}
