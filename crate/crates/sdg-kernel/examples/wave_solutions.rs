//! The wave-equation fundamental solutions in dimensions 1-3.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example wave_solutions
//! ```

use sdg_kernel::distribution::{pair_jet_time, PairConfig};
use sdg_kernel::evolution::{
    initial_data, maclaurin, wave_fundamental, wave_residual, Equation, SolutionKind, SpeedData,
};
use sdg_kernel::smooth::{battery, var, TestFunction};

fn main() {
    let cfg = PairConfig::default();

    // Dimension 1: half the sphere average (d'Alembert pair), dimension 3:
    // the sphere means scaled by time (descent gives dimension 2).
    for dim in 1..=3usize {
        let phi = battery(dim)[3].clone();
        for kind in [SolutionKind::Position, SolutionKind::Speed] {
            let sol = wave_fundamental(dim, kind).unwrap();
            let (value, speed) = initial_data(&sol, &phi, &cfg).unwrap();
            let residual = wave_residual(&sol, 0.7, &phi, &cfg).unwrap();
            println!(
                "dim {dim} {kind:?}: value(0) = {value:>12.8}  speed(0) = {speed:>12.8}  residual(0.7) = {residual:+.2e}",
            );
        }
    }

    // The time jet of the pairing shows the propagating profile: in
    // dimension 1 the position solution sees (phi(t) + phi(-t))/2.
    let sol = wave_fundamental(1, SolutionKind::Position).unwrap();
    let phi = TestFunction::new(1, var(0).pow(2));
    let jet = pair_jet_time(&sol.family, 0.5, 2, &phi, &cfg).unwrap();
    println!("\n<Q(t), x^2> around t=0.5 (dim 1, position): {jet}");

    // The Maclaurin series of the pairing: only even derivatives of phi
    // appear when the initial speed vanishes.
    let series = maclaurin(
        Equation::Wave,
        &TestFunction::new(1, var(0).pow(4) - var(0).pow(2)),
        6,
        SpeedData::Zero,
    )
    .unwrap();
    println!("wave series coefficients for x^4 - x^2: {series:?}");
}
