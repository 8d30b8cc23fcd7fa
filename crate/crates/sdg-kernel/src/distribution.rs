//! Compactly supported distributions as expression trees, paired against
//! test functions.
//!
//! Every constructor's meaning lives in [`pair`]: transforms push their
//! action onto the test function (`<p(mu), psi> = <mu, psi ∘ p>`,
//! `<D_X mu, phi> = -<mu, D_X phi>`, and so on), and the leaves evaluate
//! by point evaluation or quadrature. Scalar parameters (Dirac points,
//! interval endpoints, sphere/ball radii, linear-combination weights) are
//! generic over the coefficient algebra, so pairing a family against a
//! jet-valued time yields exact time derivatives of the pairing.

use crate::algebra::{Algebra, Jet};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::smooth::{AffineMap, EvalError, TestFunction};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("distribution lives on R^{expected}, test function on R^{got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("heat kernel needs positive time, got {0}")]
    NonPositiveHeatTime(f64),
    #[error("pushforward of a non-compact distribution along a non-proper map")]
    ImproperPushforward,
    #[error("convolution kernel must be a finite combination of Dirac derivatives")]
    KernelNotDirac,
    #[error("convolution kernel points must be scalars")]
    KernelPointNotScalar,
    #[error("family is not jet-capable here: {0}")]
    NotJetCapable(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// Pairing configuration; `quad_order` is the per-axis Gauss order.
#[derive(Debug, Clone)]
pub struct PairConfig {
    pub quad_order: usize,
    /// Tail cutoff for integrals over unbounded domains.
    pub tail_tolerance: f64,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig {
            quad_order: 32,
            tail_tolerance: 1e-14,
        }
    }
}

impl PairConfig {
    pub fn with_order(quad_order: usize) -> Self {
        PairConfig {
            quad_order,
            ..Default::default()
        }
    }

    /// Radial node count for ball rules; the radial direction of these
    /// integrands is mild, so half the boundary order suffices.
    fn radial(&self) -> usize {
        (self.quad_order / 2).max(2)
    }

    /// Polar node count for the 2-sphere product rule.
    fn polar(&self) -> usize {
        (self.quad_order / 2).max(2)
    }

    fn azimuthal(&self) -> usize {
        self.quad_order.max(4)
    }
}

/// A distribution on `R^dim` with parameters in the algebra `A`.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution<A> {
    Dirac {
        point: Vec<A>,
    },
    DiracDerivative {
        point: Vec<A>,
        multi_index: Vec<usize>,
    },
    /// `f -> int_a^b f`, with possibly nilpotent endpoints.
    Interval {
        a: A,
        b: A,
    },
    /// Sphere of radius `t`. `averaged` selects the homothety form
    /// `psi -> int_{S_1} psi(t u) du`; otherwise the `t^(n-1)` prefactor
    /// of the literal surface integral is included.
    Sphere {
        dim: usize,
        t: A,
        averaged: bool,
    },
    /// Ball of radius `t`, `averaged` as for spheres with prefactor `t^n`.
    Ball {
        dim: usize,
        t: A,
        averaged: bool,
    },
    /// The one-dimensional heat kernel at time `t > 0`.
    HeatGaussian {
        t: A,
    },
    /// The planar distribution `(2/sqrt(t^2 - rho^2)) . B_t`, realized by
    /// the sine-substitution rule rather than raw singular quadrature.
    PoissonBall {
        t: A,
    },
    LinComb(Vec<(A, Distribution<A>)>),
    MultiplyByFunction {
        g: TestFunction,
        inner: Box<Distribution<A>>,
    },
    DirectionalDerivative {
        xi: Vec<crate::smooth::Expr>,
        inner: Box<Distribution<A>>,
    },
    Laplacian(Box<Distribution<A>>),
    Pushforward {
        map: AffineMap,
        inner: Box<Distribution<A>>,
    },
    Convolution {
        kernel: Box<Distribution<A>>,
        inner: Box<Distribution<A>>,
    },
}

impl<A: Algebra> Distribution<A> {
    pub fn dim(&self) -> usize {
        match self {
            Distribution::Dirac { point } => point.len(),
            Distribution::DiracDerivative { point, .. } => point.len(),
            Distribution::Interval { .. } | Distribution::HeatGaussian { .. } => 1,
            Distribution::Sphere { dim, .. } | Distribution::Ball { dim, .. } => *dim,
            Distribution::PoissonBall { .. } => 2,
            Distribution::LinComb(terms) => terms.first().map_or(0, |(_, d)| d.dim()),
            Distribution::MultiplyByFunction { inner, .. } => inner.dim(),
            Distribution::DirectionalDerivative { inner, .. } => inner.dim(),
            Distribution::Laplacian(inner) => inner.dim(),
            Distribution::Pushforward { map, .. } => map.to_dim(),
            Distribution::Convolution { inner, .. } => inner.dim(),
        }
    }

    /// Whether the distribution has compact support.
    pub fn is_compact(&self) -> bool {
        match self {
            Distribution::HeatGaussian { .. } => false,
            Distribution::LinComb(terms) => terms.iter().all(|(_, d)| d.is_compact()),
            Distribution::MultiplyByFunction { inner, .. }
            | Distribution::DirectionalDerivative { inner, .. }
            | Distribution::Laplacian(inner)
            | Distribution::Pushforward { inner, .. } => inner.is_compact(),
            Distribution::Convolution { kernel, inner } => {
                kernel.is_compact() && inner.is_compact()
            }
            _ => true,
        }
    }

    pub fn laplacian(self) -> Distribution<A> {
        Distribution::Laplacian(Box::new(self))
    }

    pub fn scaled(self, c: A) -> Distribution<A> {
        Distribution::LinComb(vec![(c, self)])
    }
}

/// `delta(p)`: evaluation at the point.
pub fn dirac<A: Algebra>(point: Vec<A>) -> Distribution<A> {
    assert!(!point.is_empty());
    Distribution::Dirac { point }
}

/// `delta^(alpha)(p)` with the distributional sign `(-1)^|alpha|` built
/// into the pairing.
pub fn dirac_derivative<A: Algebra>(point: Vec<A>, multi_index: Vec<usize>) -> Distribution<A> {
    assert_eq!(point.len(), multi_index.len());
    Distribution::DiracDerivative { point, multi_index }
}

pub fn interval<A: Algebra>(a: A, b: A) -> Distribution<A> {
    Distribution::Interval { a, b }
}

pub fn sphere<A: Algebra>(dim: usize, t: A, averaged: bool) -> Distribution<A> {
    assert!((1..=3).contains(&dim));
    Distribution::Sphere { dim, t, averaged }
}

pub fn ball<A: Algebra>(dim: usize, t: A, averaged: bool) -> Distribution<A> {
    assert!((1..=3).contains(&dim));
    Distribution::Ball { dim, t, averaged }
}

pub fn heat_gaussian<A: Algebra>(t: A) -> Result<Distribution<A>, DistError> {
    if t.scalar_f64() <= 0.0 {
        return Err(DistError::NonPositiveHeatTime(t.scalar_f64()));
    }
    Ok(Distribution::HeatGaussian { t })
}

pub fn poisson_ball<A: Algebra>(t: A) -> Distribution<A> {
    Distribution::PoissonBall { t }
}

pub fn lincomb<A: Algebra>(terms: Vec<(A, Distribution<A>)>) -> Distribution<A> {
    assert!(!terms.is_empty());
    Distribution::LinComb(terms)
}

/// `g . mu`, paired as `<mu, g phi>`.
pub fn multiply<A: Algebra>(
    g: TestFunction,
    mu: Distribution<A>,
) -> Result<Distribution<A>, DistError> {
    if g.dim() != mu.dim() {
        return Err(DistError::DimensionMismatch {
            expected: mu.dim(),
            got: g.dim(),
        });
    }
    Ok(Distribution::MultiplyByFunction {
        g,
        inner: Box::new(mu),
    })
}

/// `D_X(mu)`, paired as `-<mu, D_X phi>`.
pub fn directional_derivative<A: Algebra>(
    xi: Vec<crate::smooth::Expr>,
    mu: Distribution<A>,
) -> Result<Distribution<A>, DistError> {
    if xi.len() != mu.dim() {
        return Err(DistError::DimensionMismatch {
            expected: mu.dim(),
            got: xi.len(),
        });
    }
    Ok(Distribution::DirectionalDerivative {
        xi,
        inner: Box::new(mu),
    })
}

pub fn laplacian<A: Algebra>(mu: Distribution<A>) -> Distribution<A> {
    mu.laplacian()
}

/// Covariant image along an affine map. Non-proper maps are allowed only
/// for compactly supported distributions.
pub fn pushforward<A: Algebra>(
    map: AffineMap,
    mu: Distribution<A>,
) -> Result<Distribution<A>, DistError> {
    if map.from_dim() != mu.dim() {
        return Err(DistError::DimensionMismatch {
            expected: mu.dim(),
            got: map.from_dim(),
        });
    }
    if !mu.is_compact() && !map.is_proper() {
        return Err(DistError::ImproperPushforward);
    }
    Ok(Distribution::Pushforward {
        map,
        inner: Box::new(mu),
    })
}

/// Convolution with a finite Dirac-derivative combination on the left.
pub fn convolve<A: Algebra>(
    kernel: Distribution<A>,
    mu: Distribution<A>,
) -> Result<Distribution<A>, DistError> {
    if kernel.dim() != mu.dim() {
        return Err(DistError::DimensionMismatch {
            expected: mu.dim(),
            got: kernel.dim(),
        });
    }
    dirac_terms(&kernel, None)?;
    Ok(Distribution::Convolution {
        kernel: Box::new(kernel),
        inner: Box::new(mu),
    })
}

/// Flatten a Dirac combination into `(coefficient, point, multi_index)`
/// terms; points must be scalar-valued.
fn dirac_terms<A: Algebra>(
    d: &Distribution<A>,
    scale: Option<&A>,
) -> Result<Vec<(A, Vec<f64>, Vec<usize>)>, DistError> {
    let scalar_point = |point: &[A]| -> Result<Vec<f64>, DistError> {
        point
            .iter()
            .map(|p| {
                if p.sub(&p.scalar_like()).is_zero() {
                    Ok(p.scalar_f64())
                } else {
                    Err(DistError::KernelPointNotScalar)
                }
            })
            .collect()
    };
    match d {
        Distribution::Dirac { point } => {
            let one = point[0].one_like();
            let coeff = scale.cloned().unwrap_or(one);
            Ok(vec![(coeff, scalar_point(point)?, vec![0; point.len()])])
        }
        Distribution::DiracDerivative { point, multi_index } => {
            let one = point[0].one_like();
            let coeff = scale.cloned().unwrap_or(one);
            Ok(vec![(coeff, scalar_point(point)?, multi_index.clone())])
        }
        Distribution::LinComb(terms) => {
            let mut out = Vec::new();
            for (c, child) in terms {
                let c = match scale {
                    Some(s) => s.mul(c),
                    None => c.clone(),
                };
                out.extend(dirac_terms(child, Some(&c))?);
            }
            Ok(out)
        }
        _ => Err(DistError::KernelNotDirac),
    }
}

fn check_dims<A: Algebra>(mu: &Distribution<A>, phi: &TestFunction) -> Result<(), DistError> {
    if mu.dim() != phi.dim() {
        return Err(DistError::DimensionMismatch {
            expected: mu.dim(),
            got: phi.dim(),
        });
    }
    Ok(())
}

/// Evaluate `<mu, phi>`.
pub fn pair<A: Algebra>(
    mu: &Distribution<A>,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<A, DistError> {
    check_dims(mu, phi)?;
    match mu {
        Distribution::Dirac { point } => Ok(phi.eval(point)?),
        Distribution::DiracDerivative { point, multi_index } => {
            let mut expr = phi.expr().clone();
            let mut total = 0usize;
            for (axis, &k) in multi_index.iter().enumerate() {
                for _ in 0..k {
                    expr = expr.diff(axis);
                }
                total += k;
            }
            let value = expr.eval(point)?;
            Ok(if total % 2 == 1 { value.neg() } else { value })
        }
        Distribution::Interval { a, b } => {
            // l * int_0^1 phi(a + s l) ds, meaningful for jet endpoints
            let l = b.sub(a);
            let mut acc = a.zero_like();
            for (x, w) in gauss_legendre(cfg.quad_order) {
                let s = 0.5 * (x + 1.0);
                let arg = a.add(&l.scale_f64(s));
                acc = acc.add(&phi.eval(&[arg])?.scale_f64(0.5 * w));
            }
            Ok(l.mul(&acc))
        }
        Distribution::Sphere { dim, t, averaged } => {
            let avg = sphere_average(*dim, t, phi, cfg)?;
            if *averaged {
                Ok(avg)
            } else {
                Ok(t.powi(*dim as i64 - 1)?.mul(&avg))
            }
        }
        Distribution::Ball { dim, t, averaged } => {
            let avg = ball_average(*dim, t, phi, cfg)?;
            if *averaged {
                Ok(avg)
            } else {
                Ok(t.powi(*dim as i64)?.mul(&avg))
            }
        }
        Distribution::HeatGaussian { t } => heat_pair(t, phi, cfg),
        Distribution::PoissonBall { t } => {
            // 2 int_0^{pi/2} int_0^{2pi} phi(t sin u . e(theta)) t sin u dtheta du
            let m = cfg.quad_order;
            let azimuthal = m.max(4);
            let dtheta = 2.0 * std::f64::consts::PI / azimuthal as f64;
            let mut acc = t.zero_like();
            for (x, w) in gauss_legendre(m) {
                let u = std::f64::consts::FRAC_PI_4 * (x + 1.0);
                let wu = std::f64::consts::FRAC_PI_4 * w;
                let rho = t.scale_f64(u.sin());
                for i in 0..azimuthal {
                    let theta = dtheta * i as f64;
                    let args = [rho.scale_f64(theta.cos()), rho.scale_f64(theta.sin())];
                    let v = phi.eval(&args)?.mul(&rho);
                    acc = acc.add(&v.scale_f64(2.0 * wu * dtheta));
                }
            }
            Ok(acc)
        }
        Distribution::LinComb(terms) => {
            let mut acc: Option<A> = None;
            for (coeff, child) in terms {
                let v = coeff.mul(&pair(child, phi, cfg)?);
                acc = Some(match acc {
                    None => v,
                    Some(a) => a.add(&v),
                });
            }
            Ok(acc.expect("linear combinations are non-empty"))
        }
        Distribution::MultiplyByFunction { g, inner } => pair(inner, &phi.product(g), cfg),
        Distribution::DirectionalDerivative { xi, inner } => {
            let mut expr = crate::smooth::c(0.0);
            for (axis, component) in xi.iter().enumerate() {
                expr = crate::smooth::add(
                    expr,
                    crate::smooth::mul(component.clone(), phi.expr().diff(axis)),
                );
            }
            let transported = TestFunction::new(phi.dim(), expr);
            Ok(pair(inner, &transported, cfg)?.neg())
        }
        Distribution::Laplacian(inner) => pair(inner, &phi.laplacian_fn(), cfg),
        Distribution::Pushforward { map, inner } => pair(inner, &phi.compose_affine(map)?, cfg),
        Distribution::Convolution { kernel, inner } => {
            let terms = dirac_terms(kernel, None)?;
            let mut acc: Option<A> = None;
            for (coeff, point, multi_index) in terms {
                let mut expr = phi.expr().clone();
                let mut total = 0usize;
                for (axis, &k) in multi_index.iter().enumerate() {
                    for _ in 0..k {
                        expr = expr.diff(axis);
                    }
                    total += k;
                }
                let translated = TestFunction::new(phi.dim(), expr)
                    .compose_affine(&AffineMap::translation(&point))?;
                let mut v = coeff.mul(&pair(inner, &translated, cfg)?);
                if total % 2 == 1 {
                    v = v.neg();
                }
                acc = Some(match acc {
                    None => v,
                    Some(a) => a.add(&v),
                });
            }
            acc.ok_or(DistError::KernelNotDirac)
        }
    }
}

/// `int_{S_1} phi(t u) du` for the unit sphere in the given dimension.
fn sphere_average<A: Algebra>(
    dim: usize,
    t: &A,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<A, DistError> {
    match dim {
        1 => {
            let plus = phi.eval(std::slice::from_ref(t))?;
            let minus = phi.eval(&[t.neg()])?;
            Ok(plus.add(&minus))
        }
        2 => {
            let rule = QuadratureRule::circle(cfg.azimuthal());
            Ok(rule.integrate(|u| {
                let args = [t.scale_f64(u[0]), t.scale_f64(u[1])];
                phi.eval(&args)
            })?)
        }
        3 => {
            let rule = QuadratureRule::sphere2_product(cfg.polar(), cfg.azimuthal());
            Ok(rule.integrate(|u| {
                let args = [t.scale_f64(u[0]), t.scale_f64(u[1]), t.scale_f64(u[2])];
                phi.eval(&args)
            })?)
        }
        _ => Err(DistError::DimensionMismatch {
            expected: 3,
            got: dim,
        }),
    }
}

/// `int_{B_1} phi(t u) du` for the unit ball in the given dimension.
fn ball_average<A: Algebra>(
    dim: usize,
    t: &A,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<A, DistError> {
    match dim {
        1 => {
            let rule = gauss_legendre(cfg.quad_order);
            let mut acc = t.zero_like();
            for (s, w) in rule {
                acc = acc.add(&phi.eval(&[t.scale_f64(s)])?.scale_f64(w));
            }
            Ok(acc)
        }
        2 | 3 => {
            // radial shells of sphere averages with the r^(n-1) jacobian
            let mut acc = t.zero_like();
            for (x, w) in gauss_legendre(cfg.radial()) {
                let r = 0.5 * (x + 1.0);
                let jac = 0.5 * w * r.powi(dim as i32 - 1);
                let shell = sphere_average(dim, &t.scale_f64(r), phi, cfg)?;
                acc = acc.add(&shell.scale_f64(jac));
            }
            Ok(acc)
        }
        _ => Err(DistError::DimensionMismatch {
            expected: 3,
            got: dim,
        }),
    }
}

/// `int K(t, x) phi(x) dx` over the line, by composite Gauss panels on a
/// kernel-adapted box intersected with the support of `phi`.
fn heat_pair<A: Algebra>(t: &A, phi: &TestFunction, cfg: &PairConfig) -> Result<A, DistError> {
    let t0 = t.scalar_f64();
    if t0 <= 0.0 {
        return Err(DistError::NonPositiveHeatTime(t0));
    }
    let cutoff = (-cfg.tail_tolerance.ln()).max(20.0);
    let mut radius = (4.0 * t0 * cutoff).sqrt();
    if let Some(s) = phi.support() {
        radius = radius.min(s);
    }
    let sigma = (2.0 * t0).sqrt();
    let panels = ((radius / sigma).ceil() as usize).clamp(1, 64);
    let four_pi = 4.0 * std::f64::consts::PI;
    let inv4t = t.scale_f64(4.0).invert()?;
    let norm = t
        .scale_f64(four_pi)
        .analytic(crate::algebra::Primitive::PowReal(-0.5))?;
    let mut acc = t.zero_like();
    let base = gauss_legendre(cfg.quad_order);
    let width = 2.0 * radius / panels as f64;
    for p in 0..panels {
        let left = -radius + p as f64 * width;
        for (x, w) in &base {
            let node = left + 0.5 * width * (x + 1.0);
            let weight = 0.5 * width * w;
            let exponent = inv4t.scale_f64(-node * node);
            let kernel = norm.mul(&exponent.analytic(crate::algebra::Primitive::Exp)?);
            let value = phi.eval(&[t.lift_f64(node)])?;
            acc = acc.add(&kernel.mul(&value).scale_f64(weight));
        }
    }
    Ok(acc)
}

/// A `t`-parametrized family of distributions, closed under the
/// combinators the evolution equations need. Evaluating the recipe at a
/// jet-valued time turns time derivatives of pairings into jet
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeFamily {
    /// `t -> S_t` (surface integral with prefactor).
    SphereRaw(usize),
    /// `t -> S^t` (homothety average).
    SphereAvg(usize),
    /// `t -> B_t`.
    BallRaw(usize),
    /// `t -> B^t`.
    BallAvg(usize),
    /// `t -> K(t)`, the heat kernel (positive scalar part only).
    HeatKernel,
    /// `t -> delta(t)` on the line.
    DiracAt,
    Scaled(f64, Box<TimeFamily>),
    /// Multiply the distribution by the time value itself.
    TimesT(Box<TimeFamily>),
    Laplacian(Box<TimeFamily>),
    Sum(Box<TimeFamily>, Box<TimeFamily>),
    Pushforward(AffineMap, Box<TimeFamily>),
}

impl TimeFamily {
    pub fn dim(&self) -> usize {
        match self {
            TimeFamily::SphereRaw(d)
            | TimeFamily::SphereAvg(d)
            | TimeFamily::BallRaw(d)
            | TimeFamily::BallAvg(d) => *d,
            TimeFamily::HeatKernel | TimeFamily::DiracAt => 1,
            TimeFamily::Scaled(_, f) | TimeFamily::TimesT(f) | TimeFamily::Laplacian(f) => f.dim(),
            TimeFamily::Sum(f, _) => f.dim(),
            TimeFamily::Pushforward(map, _) => map.to_dim(),
        }
    }

    /// Instantiate the family at a time value in any algebra.
    pub fn at<A: Algebra>(&self, t: &A) -> Result<Distribution<A>, DistError> {
        Ok(match self {
            TimeFamily::SphereRaw(d) => sphere(*d, t.clone(), false),
            TimeFamily::SphereAvg(d) => sphere(*d, t.clone(), true),
            TimeFamily::BallRaw(d) => ball(*d, t.clone(), false),
            TimeFamily::BallAvg(d) => ball(*d, t.clone(), true),
            TimeFamily::HeatKernel => heat_gaussian(t.clone()).map_err(|_| {
                DistError::NotJetCapable(format!(
                    "heat kernel at time {}",
                    t.scalar_f64()
                ))
            })?,
            TimeFamily::DiracAt => dirac(vec![t.clone()]),
            TimeFamily::Scaled(c, f) => f.at(t)?.scaled(t.lift_f64(*c)),
            TimeFamily::TimesT(f) => f.at(t)?.scaled(t.clone()),
            TimeFamily::Laplacian(f) => f.at(t)?.laplacian(),
            TimeFamily::Sum(f, g) => {
                let one = t.one_like();
                lincomb(vec![(one.clone(), f.at(t)?), (one, g.at(t)?)])
            }
            TimeFamily::Pushforward(map, f) => pushforward(map.clone(), f.at(t)?)?,
        })
    }

    pub fn scaled(self, c: f64) -> TimeFamily {
        TimeFamily::Scaled(c, Box::new(self))
    }

    pub fn times_t(self) -> TimeFamily {
        TimeFamily::TimesT(Box::new(self))
    }

    pub fn laplacian(self) -> TimeFamily {
        TimeFamily::Laplacian(Box::new(self))
    }

    pub fn plus(self, other: TimeFamily) -> TimeFamily {
        TimeFamily::Sum(Box::new(self), Box::new(other))
    }
}

/// `<family(t), phi>` expanded as a jet at `t0`: coefficient `k` is
/// `(1/k!) d^k/dt^k <family(t), phi>`.
pub fn pair_jet_time(
    family: &TimeFamily,
    t0: f64,
    order: usize,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<Jet<f64>, DistError> {
    let t = Jet::variable(t0, order);
    let dist = family.at(&t)?;
    pair(&dist, phi, cfg)
}

/// Scalar pairing of a family at time `t0`.
pub fn pair_at_time(
    family: &TimeFamily,
    t0: f64,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<f64, DistError> {
    let dist = family.at(&t0)?;
    pair(&dist, phi, cfg)
}

/// Interval distributions `[a1, b1]` and `[a2, b2]` are equal exactly
/// when the lengths agree and the common length annihilates the offset
/// of the left endpoints.
pub fn interval_equal<A: Algebra>(a1: &A, b1: &A, a2: &A, b2: &A) -> bool {
    let l1 = b1.sub(a1);
    let l2 = b2.sub(a2);
    if !l1.sub(&l2).is_zero() {
        return false;
    }
    l1.mul(&a1.sub(a2)).is_zero()
}

/// Extensional equality: agreement against the built-in battery.
pub fn pairing_equal<A: Algebra>(
    mu: &Distribution<A>,
    nu: &Distribution<A>,
    cfg: &PairConfig,
    tol: f64,
) -> Result<bool, DistError> {
    let dim = mu.dim();
    if dim != nu.dim() {
        return Ok(false);
    }
    for phi in crate::smooth::battery(dim) {
        let a = pair(mu, &phi, cfg)?;
        let b = pair(nu, &phi, cfg)?;
        let scale = a.max_abs().max(b.max_abs()).max(1.0);
        if a.sub(&b).max_abs() > tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}
