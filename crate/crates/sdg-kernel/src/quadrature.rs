//! Deterministic integration rules for intervals, circles, spheres, and
//! balls, plus the planar divergence-theorem harness.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::algebra::Algebra;
use crate::smooth::{EvalError, TestFunction};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre polynomial, cached per
/// order. An `m`-point rule integrates polynomials of degree `2m - 1`
/// exactly.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<(f64, f64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    assert!(m >= 1);
    let mut out = Vec::with_capacity(m);
    let n = m as f64;
    for i in 0..m {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    cache.lock().unwrap().insert(m, out.clone());
    out
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    if m == 1 {
        return (x, 1.0);
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// What a rule integrates over.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    /// `[a, b]`, honoring the orientation convention `int_a^b = -int_b^a`.
    Interval(f64, f64),
    /// The unit circle with arc-length measure (total `2*pi`).
    Circle,
    /// The unit 2-sphere with surface measure (total `4*pi`).
    Sphere2,
    /// The unit ball in the given dimension.
    Ball(usize),
    /// The planar disk of radius `t` with the integrable weight
    /// `2/sqrt(t^2 - rho^2)`, smoothed by the substitution `rho = t sin u`.
    PoissonDisk(f64),
}

/// Nodes and weights over some domain.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub domain: DomainKind,
    pub nodes: Vec<(Vec<f64>, f64)>,
    pub order: usize,
}

impl QuadratureRule {
    /// `sum_i w_i f(x_i)`; works for any algebra-valued integrand.
    pub fn integrate<A: Algebra>(
        &self,
        mut f: impl FnMut(&[f64]) -> Result<A, EvalError>,
    ) -> Result<A, EvalError> {
        let mut acc: Option<A> = None;
        for (x, w) in &self.nodes {
            let v = f(x)?.scale_f64(*w);
            acc = Some(match acc {
                None => v,
                Some(a) => a.add(&v),
            });
        }
        acc.ok_or(EvalError::DimensionMismatch {
            expected: 1,
            got: 0,
        })
    }

    pub fn integrate_f64(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        self.nodes.iter().map(|(x, w)| f(x) * w).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }

    /// Gauss-Legendre rule on `[a, b]`; negative orientation flips signs.
    pub fn interval(a: f64, b: f64, m: usize) -> Self {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let nodes = gauss_legendre(m)
            .into_iter()
            .map(|(x, w)| (vec![mid + half * x], half * w))
            .collect();
        QuadratureRule {
            domain: DomainKind::Interval(a, b),
            nodes,
            order: m,
        }
    }

    /// Uniform (trapezoid) rule on the unit circle; spectrally accurate
    /// for periodic integrands.
    pub fn circle(m: usize) -> Self {
        let n = m.max(4);
        let w = 2.0 * std::f64::consts::PI / n as f64;
        let nodes = (0..n)
            .map(|i| {
                let theta = w * i as f64;
                (vec![theta.cos(), theta.sin()], w)
            })
            .collect();
        QuadratureRule {
            domain: DomainKind::Circle,
            nodes,
            order: m,
        }
    }

    /// Product rule on the unit 2-sphere: Gauss-Legendre in the polar
    /// cosine, uniform in azimuth.
    pub fn sphere2(m: usize) -> Self {
        Self::sphere2_product(m, m)
    }

    /// Sphere rule with explicit polar and azimuthal node counts.
    pub fn sphere2_product(polar: usize, azimuthal: usize) -> Self {
        let m = polar;
        let azimuthal = azimuthal.max(4);
        let dw = 2.0 * std::f64::consts::PI / azimuthal as f64;
        let mut nodes = Vec::with_capacity(m * azimuthal);
        for (cphi, wc) in gauss_legendre(m) {
            let sphi = (1.0 - cphi * cphi).sqrt();
            for i in 0..azimuthal {
                let theta = dw * i as f64;
                nodes.push((vec![sphi * theta.cos(), sphi * theta.sin(), cphi], wc * dw));
            }
        }
        QuadratureRule {
            domain: DomainKind::Sphere2,
            nodes,
            order: m,
        }
    }

    /// Unit ball rules: radial Gauss-Legendre with the `r^(n-1)` weight
    /// times the boundary rule.
    pub fn ball(dim: usize, m: usize) -> Self {
        let nodes = match dim {
            1 => QuadratureRule::interval(-1.0, 1.0, m).nodes,
            2 => {
                let boundary = QuadratureRule::circle(m);
                let mut nodes = Vec::new();
                for (x, w) in gauss_legendre(m) {
                    let r = 0.5 * (x + 1.0);
                    let wr = 0.5 * w * r; // jacobian r
                    for (u, wu) in &boundary.nodes {
                        nodes.push((u.iter().map(|c| c * r).collect(), wr * wu));
                    }
                }
                nodes
            }
            3 => {
                let boundary = QuadratureRule::sphere2(m);
                let mut nodes = Vec::new();
                for (x, w) in gauss_legendre(m) {
                    let r = 0.5 * (x + 1.0);
                    let wr = 0.5 * w * r * r; // jacobian r^2
                    for (u, wu) in &boundary.nodes {
                        nodes.push((u.iter().map(|c| c * r).collect(), wr * wu));
                    }
                }
                nodes
            }
            _ => panic!("ball rules are defined for dimensions 1-3"),
        };
        QuadratureRule {
            domain: DomainKind::Ball(dim),
            nodes,
            order: m,
        }
    }

    /// The singular disk integral `int_{B_t} 2 phi(x) / sqrt(t^2 - rho^2) dA`
    /// after the substitution `rho = t sin u`, which removes the
    /// inverse-square-root endpoint singularity entirely.
    pub fn poisson_disk(t: f64, m: usize) -> Self {
        let azimuthal = m.max(4);
        let dtheta = 2.0 * std::f64::consts::PI / azimuthal as f64;
        let mut nodes = Vec::new();
        for (x, w) in gauss_legendre(m) {
            // u in [0, pi/2]
            let u = std::f64::consts::FRAC_PI_4 * (x + 1.0);
            let wu = std::f64::consts::FRAC_PI_4 * w;
            let rho = t * u.sin();
            // integrand weight: 2 * rho du dtheta after cancelling
            // t cos u from the jacobian against the singular denominator
            let wnode = 2.0 * t * u.sin() * wu * dtheta;
            for i in 0..azimuthal {
                let theta = dtheta * i as f64;
                nodes.push((vec![rho * theta.cos(), rho * theta.sin()], wnode));
            }
        }
        QuadratureRule {
            domain: DomainKind::PoissonDisk(t),
            nodes,
            order: m,
        }
    }
}

/// A planar vector field given by its two component functions.
#[derive(Debug, Clone)]
pub struct PlanarVectorField {
    pub fx: TestFunction,
    pub fy: TestFunction,
    pub name: String,
}

impl PlanarVectorField {
    pub fn new(fx: TestFunction, fy: TestFunction, name: &str) -> Self {
        assert_eq!(fx.dim(), 2);
        assert_eq!(fy.dim(), 2);
        PlanarVectorField {
            fx,
            fy,
            name: name.to_string(),
        }
    }

    pub fn divergence_at(&self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(self.fx.derivative(&[1, 0], x)? + self.fy.derivative(&[0, 1], x)?)
    }
}

/// Boundary flux over the unit circle and the interior divergence
/// integral over the unit disk, computed independently.
pub fn flux_vs_divergence(
    field: &PlanarVectorField,
    quad_order: usize,
) -> Result<(f64, f64), EvalError> {
    let circle = QuadratureRule::circle(quad_order);
    let mut flux = 0.0;
    for (x, w) in &circle.nodes {
        // outward normal on the unit circle is the position itself
        let fx = field.fx.eval_f64(x)?;
        let fy = field.fy.eval_f64(x)?;
        flux += (fx * x[0] + fy * x[1]) * w;
    }
    let disk = QuadratureRule::ball(2, quad_order);
    let mut div_integral = 0.0;
    for (x, w) in &disk.nodes {
        div_integral += field.divergence_at(x)? * w;
    }
    Ok((flux, div_integral))
}

/// The built-in polynomial fields exercised by the divergence harness.
pub fn field_battery() -> Vec<PlanarVectorField> {
    use crate::smooth::{ratio, var, TestFunction as Tf};
    let f = |e| Tf::new(2, e);
    vec![
        PlanarVectorField::new(f(var(0)), f(var(1)), "(x, y)"),
        PlanarVectorField::new(f(-var(1)), f(var(0)), "(-y, x)"),
        PlanarVectorField::new(f(var(0).pow(2)), f(ratio(0, 1)), "(x^2, 0)"),
        PlanarVectorField::new(
            f(var(0).pow(2) * var(1)),
            f(var(0) - var(1).pow(3)),
            "(x^2y, x-y^3)",
        ),
        PlanarVectorField::new(
            f(var(0).pow(3) - ratio(3, 1) * var(0) * var(1).pow(2)),
            f(var(1).pow(3) - ratio(3, 1) * var(0).pow(2) * var(1)),
            "grad-harmonic",
        ),
        PlanarVectorField::new(
            f(var(0) * var(1) + var(1).pow(2)),
            f(var(0).pow(2) * var(1) + var(0)),
            "(xy+y^2, x^2y+x)",
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::{var, TestFunction};

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn interval_weights_sum_to_length() {
        let rule = QuadratureRule::interval(-1.0, 1.0, 16);
        assert!((rule.total_weight() - 2.0).abs() < 1e-12);
        assert!((rule.integrate_f64(|_| 1.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        // an m-point rule integrates degree 2m-1 exactly
        for m in [2usize, 5, 8] {
            let rule = QuadratureRule::interval(-1.0, 1.0, m);
            let k = 2 * m - 1;
            let value = rule.integrate_f64(|x| x[0].powi(k as i32 - 1));
            let exact = if k % 2 == 0 { 0.0 } else { 2.0 / (k as f64) };
            assert!((value - exact).abs() < 1e-12, "order {m} degree {}", k - 1);
        }
    }

    #[test]
    fn orientation_convention() {
        let forward = QuadratureRule::interval(0.0, 1.0, 8).integrate_f64(|x| x[0]);
        let backward = QuadratureRule::interval(1.0, 0.0, 8).integrate_f64(|x| x[0]);
        assert!((forward + backward).abs() < 1e-14);
    }

    #[test]
    fn measures_match_known_totals() {
        assert!((QuadratureRule::circle(16).total_weight() - 2.0 * PI).abs() < 1e-12);
        assert!((QuadratureRule::sphere2(16).total_weight() - 4.0 * PI).abs() < 1e-12);
        assert!((QuadratureRule::ball(1, 16).total_weight() - 2.0).abs() < 1e-12);
        assert!((QuadratureRule::ball(2, 16).total_weight() - PI).abs() < 1e-12);
        assert!((QuadratureRule::ball(3, 16).total_weight() - 4.0 * PI / 3.0).abs() < 1e-11);
    }

    #[test]
    fn all_unit_rule_weights_are_positive() {
        for rule in [
            QuadratureRule::interval(-1.0, 1.0, 12),
            QuadratureRule::circle(12),
            QuadratureRule::sphere2(12),
            QuadratureRule::ball(2, 12),
            QuadratureRule::ball(3, 12),
        ] {
            assert!(rule.nodes.iter().all(|(_, w)| *w > 0.0));
        }
    }

    #[test]
    fn sphere_second_moment() {
        // int_{S^2} z^2 du = (1/3) int |x|^2 = 4*pi/3 by symmetry
        let rule = QuadratureRule::sphere2(16);
        let value = rule.integrate_f64(|x| x[2] * x[2]);
        assert!((value - 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn poisson_rule_total_mass() {
        // with phi = 1 the weighted integral is 4*pi*t
        for &t in &[0.5, 1.0] {
            let rule = QuadratureRule::poisson_disk(t, 32);
            let value = rule.integrate_f64(|_| 1.0);
            assert!((value - 4.0 * PI * t).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn poisson_rule_converges_at_gauss_rate() {
        // smooth test polynomial against a refined reference
        let phi = |x: &[f64]| 1.0 + x[0] * x[0] + 3.0 * x[0] * x[1] - x[1] * x[1] * x[1];
        let reference = QuadratureRule::poisson_disk(0.8, 96).integrate_f64(phi);
        let coarse = QuadratureRule::poisson_disk(0.8, 12).integrate_f64(phi);
        assert!((coarse - reference).abs() < 1e-10);
    }

    #[test]
    fn flux_matches_divergence_for_radial_field() {
        let (flux, div) = flux_vs_divergence(&field_battery()[0], 16).unwrap();
        assert!((flux - 2.0 * PI).abs() < 1e-10);
        assert!((div - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn rotational_field_has_no_flux() {
        let (flux, div) = flux_vs_divergence(&field_battery()[1], 16).unwrap();
        assert!(flux.abs() < 1e-12);
        assert!(div.abs() < 1e-12);
    }

    #[test]
    fn odd_field_cancels() {
        let (flux, div) = flux_vs_divergence(&field_battery()[2], 16).unwrap();
        assert!(flux.abs() < 1e-12);
        assert!(div.abs() < 1e-12);
    }

    #[test]
    fn divergence_theorem_for_battery() {
        for field in field_battery() {
            let (flux, div) = flux_vs_divergence(&field, 16).unwrap();
            assert!(
                (flux - div).abs() <= 1e-8,
                "{}: flux {} vs div {}",
                field.name,
                flux,
                div
            );
        }
    }

    #[test]
    fn jet_valued_integration() {
        // integrate phi(t*s) over s in [-1,1] with t a jet: d/dt at t=1 of
        // int phi(ts) ds for phi = s^2 is 2 * 2/3
        use crate::algebra::Jet;
        let phi = TestFunction::new(1, var(0).pow(2));
        let rule = QuadratureRule::interval(-1.0, 1.0, 12);
        let t = Jet::variable(1.0_f64, 1);
        let out = rule
            .integrate(|s| {
                let arg = t.scale_f64(s[0]);
                phi.eval(&[arg])
            })
            .unwrap();
        assert!((out.coeff(0) - 2.0 / 3.0).abs() < 1e-12);
        assert!((out.coeff(1) - 4.0 / 3.0).abs() < 1e-12);
    }
}
