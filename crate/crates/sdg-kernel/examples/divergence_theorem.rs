//! The divergence theorem on the unit disk, checked by independent
//! boundary and interior quadratures.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example divergence_theorem
//! ```

use sdg_kernel::distribution::{pair, PairConfig};
use sdg_kernel::quadrature::{field_battery, flux_vs_divergence};
use sdg_kernel::smooth::{battery, AffineMap};

fn main() {
    println!(
        "{:<22} {:>14} {:>14} {:>10}",
        "field", "flux", "div integral", "|diff|"
    );
    for field in field_battery() {
        let (flux, div) = flux_vs_divergence(&field, 32).unwrap();
        println!(
            "{:<22} {:>14.10} {:>14.10} {:>10.2e}",
            field.name,
            flux,
            div,
            (flux - div).abs()
        );
    }

    // The two change-of-variables equations behind the sphere/ball
    // derivative identities:
    //   div(F ∘ H_t) = t (div F) ∘ H_t
    let field = &field_battery()[3];
    let t = 0.5;
    let h = AffineMap::scaling(2, t);
    let fx = field.fx.compose_affine(&h).unwrap();
    let fy = field.fy.compose_affine(&h).unwrap();
    let x = [0.3, -0.6];
    let lhs = fx.derivative(&[1, 0], &x).unwrap() + fy.derivative(&[0, 1], &x).unwrap();
    let rhs = t * field.divergence_at(&[t * x[0], t * x[1]]).unwrap();
    println!("\ndiv(F∘H_t)(x) = {lhs:.12}  vs  t (div F)(t x) = {rhs:.12}");

    //   t^n int_{B_1} phi ∘ H_t = int_{B_t} phi
    let cfg = PairConfig::default();
    for dim in 1..=3usize {
        let phi = battery(dim)[5].clone();
        let scale = AffineMap::scaling(dim, t);
        let composed = phi.compose_affine(&scale).unwrap();
        let unit = pair(
            &sdg_kernel::distribution::ball(dim, 1.0, true),
            &composed,
            &cfg,
        )
        .unwrap();
        let lhs = t.powi(dim as i32) * unit;
        let rhs = pair(&sdg_kernel::distribution::ball(dim, t, false), &phi, &cfg).unwrap();
        println!("dim {dim}: t^n int_B1 phi∘H_t = {lhs:.12}  vs  int_Bt phi = {rhs:.12}");
    }
}
