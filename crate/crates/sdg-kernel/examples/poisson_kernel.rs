//! The planar Poisson kernel: projecting the spatial sphere mean equals
//! integrating against 2/sqrt(t^2 - rho^2) over the disk.
//!
//! The singular weight never meets raw quadrature; the substitution
//! rho = t sin u turns the integrand smooth before any nodes are placed.
//!
//! ```bash
//! cargo run --release -p sdg-kernel --example poisson_kernel
//! ```

use sdg_kernel::distribution::{lincomb, pair, poisson_ball, pushforward, sphere, PairConfig};
use sdg_kernel::smooth::{battery, AffineMap};

fn main() {
    let cfg = PairConfig::default();
    let planar = battery(2);

    for t in [0.5, 1.0] {
        println!("t = {t}");
        // descent: push the scaled spatial sphere mean down to the plane
        let projection = AffineMap::coordinate_projection(3, 2);
        let t_sphere = lincomb(vec![(t, sphere(3, t, true))]);
        let descended = pushforward(projection, t_sphere).unwrap();

        // singular route: the weighted disk with the sine substitution
        let disk = poisson_ball(t);

        for psi in planar.iter().take(4) {
            let a = pair(&descended, psi, &cfg).unwrap();
            let b = pair(&disk, psi, &cfg).unwrap();
            println!(
                "  psi = {:<16} descent {:>14.10}  singular {:>14.10}  |diff| {:.1e}",
                psi.name(),
                a,
                b,
                (a - b).abs()
            );
        }

        // against psi = 1 both routes give exactly 4 pi t
        let one = planar[6].clone();
        let a = pair(&descended, &one, &cfg).unwrap();
        println!(
            "  psi = 1: {a:.12} vs 4 pi t = {:.12}",
            4.0 * std::f64::consts::PI * t
        );
    }
}
