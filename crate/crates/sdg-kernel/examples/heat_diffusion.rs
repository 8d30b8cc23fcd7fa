//! The heat kernel at positive, zero, and nilpotent time, and the
//! column diagram of the diffusing Dirac mass.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example heat_diffusion
//! ```

use sdg_kernel::algebra::Jet;
use sdg_kernel::distribution::{pair, Distribution, PairConfig};
use sdg_kernel::evolution::{
    column_diagram, dirac_spread, heat_state, heat_time_derivative, render_columns,
};
use sdg_kernel::smooth::{battery, var, TestFunction};

fn main() {
    let cfg = PairConfig::default();

    // Positive time: the gaussian kernel. Second moment grows like 2t.
    let phi_sq = TestFunction::new(1, var(0).pow(2));
    for t in [0.25, 1.0] {
        let state: Distribution<f64> = heat_state(&t).unwrap();
        let m2 = pair(&state, &phi_sq, &cfg).unwrap();
        println!("<K({t}), x^2> = {m2:.12}   (exact value {})", 2.0 * t);
    }

    // Small-time limits: d/dt <K_t, phi> approaches phi''(0).
    let bump = battery(1)[5].clone();
    let target = bump.derivative(&[2], &[0.0]).unwrap();
    println!("\nphi''(0) = {target:.8}");
    for t in [1e-2, 1e-3, 1e-4] {
        let value = heat_time_derivative(1, t, &bump, &cfg).unwrap();
        println!("d/dt <K_t, phi> at t={t:<6} = {value:.8}");
    }

    // Nilpotent time: the finite exponential series of the Laplacian.
    // With d^2 = 0 the state is delta(0) + d * delta''(0).
    let d: Jet<f64> = Jet::generator(&0.0, 1);
    let state = heat_state(&d).unwrap();
    let paired = pair(&state, &phi_sq, &cfg).unwrap();
    println!("\n<K(d), x^2> with d^2 = 0: {paired}");

    // The spread identity makes that drawable: h^2 delta''(0) equals
    // delta(-h) - 2 delta(0) + delta(h) modulo h^4.
    let (lhs, rhs) = dirac_spread(2, true).unwrap();
    let probe = TestFunction::new(1, var(0).pow(3) + var(0).pow(2));
    let a = pair(&lhs, &probe, &cfg).unwrap();
    let b = pair(&rhs, &probe, &cfg).unwrap();
    println!("spread lhs = {a}");
    println!("spread rhs = {b}   (equal exactly)");

    // Column diagram of K(h^3): the unit column loses 2h of mass to its
    // neighbors at -h and h.
    println!("\ncolumn diagram in R[h]/(h^4):");
    for (position, height) in column_diagram(3).unwrap() {
        println!("  at {position:<24} height {height}");
    }
    println!("rendered at h = 0.05:");
    for (position, height) in render_columns(0.05, 3).unwrap() {
        println!("  at {position:>6.3}  height {height:.3}");
    }
    let total: f64 = render_columns(0.05, 3)
        .unwrap()
        .iter()
        .map(|(_, v)| v)
        .sum();
    println!("total mass = {total}");
}
