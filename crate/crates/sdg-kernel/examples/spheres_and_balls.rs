//! Sphere and ball distributions, their pairings, and the derivative
//! identities that connect them.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example spheres_and_balls
//! ```

use sdg_kernel::distribution::{pair, pair_jet_time, PairConfig, TimeFamily};
use sdg_kernel::smooth::{battery, ratio, var, TestFunction};

fn main() {
    let cfg = PairConfig::default();

    // <B_t, 1> in dimension 1 is the length 2t.
    let one = TestFunction::new(1, ratio(1, 1));
    let mass = pair(&TimeFamily::BallRaw(1).at(&0.7).unwrap(), &one, &cfg).unwrap();
    println!("<B_t, 1> at t=0.7 (dim 1)      = {mass}");

    // Zero-radius averages concentrate at the origin with the unit
    // sphere area / ball volume as mass: 2, 2pi, 4pi and 2, pi, 4pi/3.
    for dim in 1..=3usize {
        let phi = battery(dim)[3].clone(); // gaussian, phi(0) = 1
        let s0 = pair(&TimeFamily::SphereAvg(dim).at(&0.0).unwrap(), &phi, &cfg).unwrap();
        let b0 = pair(&TimeFamily::BallAvg(dim).at(&0.0).unwrap(), &phi, &cfg).unwrap();
        println!("dim {dim}: <S^0, phi> = {s0:.12}  <B^0, phi> = {b0:.12}");
    }

    // Pairing a family at a jet-valued time differentiates the pairing:
    // <S^t, x^2> = 2t^2 in dimension 1, so the jet at t0 = 1 is 2 + 4t.
    let phi = TestFunction::new(1, var(0).pow(2));
    let jet = pair_jet_time(&TimeFamily::SphereAvg(1), 1.0, 1, &phi, &cfg).unwrap();
    println!("<S^t, x^2> jet at t0=1 (dim 1) = {jet}");

    // The derivative identities, spot-checked in dimension 2 at t = 0.7:
    //   d/dt <B_t, phi>          = <S_t, phi>
    //   t d/dt <S_t, phi>        = (n-1) <S_t, phi> + t <lap B_t, phi>
    //   t d/dt <B^t, phi>        = <S^t, phi> - n <B^t, phi>
    //   d/dt <S^t, phi>          = t <lap B^t, phi>
    let dim = 2usize;
    let t = 0.7f64;
    let n = dim as f64;
    let phi = battery(dim)[3].clone();

    let ball_raw = pair_jet_time(&TimeFamily::BallRaw(dim), t, 1, &phi, &cfg).unwrap();
    let sphere_raw = pair_jet_time(&TimeFamily::SphereRaw(dim), t, 1, &phi, &cfg).unwrap();
    println!(
        "a1: d/dt<B_t,phi> = {:.10}  vs  <S_t,phi> = {:.10}",
        ball_raw.coeff(1),
        sphere_raw.coeff(0)
    );

    let lap_raw = pair(
        &TimeFamily::BallRaw(dim).laplacian().at(&t).unwrap(),
        &phi,
        &cfg,
    )
    .unwrap();
    println!(
        "a2: t d/dt<S_t,phi> = {:.10}  vs  (n-1)<S_t,phi> + t<lap B_t,phi> = {:.10}",
        t * sphere_raw.coeff(1),
        (n - 1.0) * sphere_raw.coeff(0) + t * lap_raw
    );

    let ball_avg = pair_jet_time(&TimeFamily::BallAvg(dim), t, 1, &phi, &cfg).unwrap();
    let sphere_avg = pair_jet_time(&TimeFamily::SphereAvg(dim), t, 1, &phi, &cfg).unwrap();
    println!(
        "a3: t d/dt<B^t,phi> = {:.10}  vs  <S^t,phi> - n<B^t,phi> = {:.10}",
        t * ball_avg.coeff(1),
        sphere_avg.coeff(0) - n * ball_avg.coeff(0)
    );

    let lap_avg = pair(
        &TimeFamily::BallAvg(dim).laplacian().at(&t).unwrap(),
        &phi,
        &cfg,
    )
    .unwrap();
    println!(
        "a4: d/dt<S^t,phi> = {:.10}  vs  t<lap B^t,phi> = {:.10}",
        sphere_avg.coeff(1),
        t * lap_avg
    );
}
