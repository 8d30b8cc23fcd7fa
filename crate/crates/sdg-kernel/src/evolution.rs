//! Fundamental solutions of the wave, heat, and transport equations as
//! time families of distributions.
//!
//! Wave solutions are sphere/ball combinations in dimensions 1 and 3;
//! dimension 2 arises by projecting the dimension-3 families (descent).
//! The heat state is the gaussian kernel for positive time, the Dirac at
//! zero, and the finite exponential series for nilpotent time. Exact
//! finite-difference spreads of Dirac derivatives make the nilpotent heat
//! state drawable as a column diagram.

use crate::algebra::{Algebra, Jet, Rat};
use crate::distribution::{
    dirac, dirac_derivative, lincomb, pair, pair_jet_time, DistError, Distribution, PairConfig,
    TimeFamily,
};
use crate::flows::{exp_flow_distribution, FlowError, LinearOperator};
use crate::smooth::{AffineMap, EvalError, TestFunction};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("no fundamental solution in dimension {0}")]
    UnsupportedDimension(usize),
    #[error("heat flow is defined for t >= 0, got {0}")]
    NegativeHeatTime(f64),
    #[error("spread order must be at least 1")]
    ZeroSpreadOrder,
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Wave,
    Heat,
    Transport,
}

/// Which initial data the solution carries: `Position` starts at the
/// Dirac with zero speed, `Speed` starts at zero with Dirac speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Position,
    Speed,
}

/// An evolution family together with its declared initial data.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSolution {
    pub equation: Equation,
    pub dim: usize,
    pub kind: SolutionKind,
    pub family: TimeFamily,
}

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// The wave-equation fundamental solutions in dimensions 1-3.
pub fn wave_fundamental(
    dim: usize,
    kind: SolutionKind,
) -> Result<FundamentalSolution, EvolveError> {
    let family = match (dim, kind) {
        (1, SolutionKind::Position) => TimeFamily::SphereAvg(1).scaled(0.5),
        (1, SolutionKind::Speed) => TimeFamily::BallRaw(1).scaled(0.5),
        (3, SolutionKind::Speed) => TimeFamily::SphereAvg(3).times_t().scaled(1.0 / FOUR_PI),
        (3, SolutionKind::Position) => TimeFamily::SphereAvg(3)
            .plus(TimeFamily::BallAvg(3).laplacian().times_t().times_t())
            .scaled(1.0 / FOUR_PI),
        (2, k) => {
            let three_d = wave_fundamental(3, k)?;
            TimeFamily::Pushforward(
                AffineMap::coordinate_projection(3, 2),
                Box::new(three_d.family),
            )
        }
        (d, _) => return Err(EvolveError::UnsupportedDimension(d)),
    };
    Ok(FundamentalSolution {
        equation: Equation::Wave,
        dim,
        kind,
        family,
    })
}

/// Wave-equation residual `d^2/dt^2 <Q(t), phi> - <Q(t), lap phi>`, the
/// second time derivative taken from an order-2 jet.
pub fn wave_residual(
    sol: &FundamentalSolution,
    t: f64,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<f64, EvolveError> {
    let jet = pair_jet_time(&sol.family, t, 2, phi, cfg)?;
    let second = 2.0 * jet.coeff(2);
    let state = sol.family.at(&t)?;
    let laplacian_side = pair(&state, &phi.laplacian_fn(), cfg)?;
    Ok(second - laplacian_side)
}

/// Initial value and initial speed of a family, as pairings against a
/// test function: `(<F(0), phi>, d/dt <F(t), phi> at 0)`.
pub fn initial_data(
    sol: &FundamentalSolution,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<(f64, f64), EvolveError> {
    let jet = pair_jet_time(&sol.family, 0.0, 1, phi, cfg)?;
    Ok((jet.coeff(0), jet.coeff(1)))
}

/// The heat state at scalar or nilpotent time.
///
/// Positive scalar part gives the gaussian kernel node; zero scalar time
/// gives the Dirac for a plain scalar and the finite exponential series
/// `sum t^k/k! lap^k delta(0)` for a nilpotent; negative time is
/// rejected.
pub fn heat_state<A: Algebra>(t: &A) -> Result<Distribution<A>, EvolveError> {
    let scalar = t.scalar_f64();
    if scalar < 0.0 {
        return Err(EvolveError::NegativeHeatTime(scalar));
    }
    let nil = t.sub(&t.scalar_like());
    if scalar > 0.0 {
        return Ok(crate::distribution::heat_gaussian(t.clone())?);
    }
    if nil.is_zero() {
        return Ok(dirac(vec![t.zero_like()]));
    }
    // nilpotent time: the formal exponential of the Laplacian
    let order = t.nilpotent_order();
    Ok(exp_flow_distribution(
        &LinearOperator::Laplacian,
        &dirac(vec![t.zero_like()]),
        t,
        order,
    )?)
}

/// `d^n/dt^n <K(t), phi> = <K(t), phi^(2n)>` for `t > 0`, by the
/// integration-by-parts identity.
pub fn heat_time_derivative(
    n: usize,
    t: f64,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<f64, EvolveError> {
    if t <= 0.0 {
        return Err(EvolveError::NegativeHeatTime(t));
    }
    let mut deriv = phi.clone();
    for _ in 0..(2 * n) {
        deriv = deriv.diff_fn(0);
    }
    let kernel = crate::distribution::heat_gaussian(t)?;
    Ok(pair(&kernel, &deriv, cfg)?)
}

/// Richardson-extrapolated witness that `(1/t)(<K_t, phi> - phi(0))`
/// converges to `phi''(0)` as `t -> 0^+` along `t = 2^-k`.
pub fn heat_smoothness_witness(
    phi: &TestFunction,
    k_range: std::ops::RangeInclusive<u32>,
    cfg: &PairConfig,
) -> Result<f64, EvolveError> {
    let phi0 = phi.eval_f64(&[0.0])?;
    let mut samples = Vec::new();
    for k in k_range {
        let t = 0.5_f64.powi(k as i32);
        let kernel = crate::distribution::heat_gaussian(t)?;
        let value = pair(&kernel, phi, cfg)?;
        samples.push((value - phi0) / t);
    }
    // one Richardson step against halving: s(t) = L + c t + O(t^2)
    let mut extrapolated = samples
        .windows(2)
        .map(|w| 2.0 * w[1] - w[0])
        .collect::<Vec<_>>();
    let last = extrapolated.pop().unwrap_or(samples[samples.len() - 1]);
    Ok(last)
}

/// The exact finite-difference spread of a Dirac derivative:
/// `h^n delta(0)^(n)` equals the alternating binomial combination
/// `sum_i (-1)^i C(n,i) delta(i h)` modulo `h^(n+1)`. The symmetric
/// variant (n = 2) spreads over `{-h, 0, h}` with `h^4 = 0`.
///
/// Returns `(lhs, rhs)` over exact rational jets in `h`.
pub fn dirac_spread(
    n: usize,
    symmetric: bool,
) -> Result<(Distribution<Jet<Rat>>, Distribution<Jet<Rat>>), EvolveError> {
    if n == 0 {
        return Err(EvolveError::ZeroSpreadOrder);
    }
    let order = if symmetric && n == 2 { 3 } else { n };
    let h: Jet<Rat> = Jet::generator(&Rat::from_int(0), order);
    let zero = h.zero_like();
    let one = h.one_like();

    let lhs = lincomb(vec![(
        h.powi(n as i64)?,
        dirac_derivative(vec![zero.clone()], vec![n]),
    )]);

    let rhs = if symmetric && n == 2 {
        lincomb(vec![
            (one.clone(), dirac(vec![h.neg()])),
            (one.scale_ratio(-2, 1), dirac(vec![zero])),
            (one, dirac(vec![h])),
        ])
    } else {
        let mut terms = Vec::with_capacity(n + 1);
        let mut binom: i64 = 1;
        for i in 0..=n {
            if i > 0 {
                binom = binom * (n as i64 - i as i64 + 1) / i as i64;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let coeff = one.scale_ratio(sign * binom, 1);
            terms.push((coeff, dirac(vec![h.scale_ratio(i as i64, 1)])));
        }
        lincomb(terms)
    };
    Ok((lhs, rhs))
}

/// The nilpotent heat state `K(h^3)` rendered as point masses: height
/// `1 - 2h` at the origin and `h` at `-h` and `h`, in `R[h]/(h^4)`.
pub fn column_diagram(h_order: usize) -> Result<Vec<(Jet<Rat>, Jet<Rat>)>, EvolveError> {
    if h_order < 3 {
        return Err(EvolveError::ZeroSpreadOrder);
    }
    let h: Jet<Rat> = Jet::generator(&Rat::from_int(0), h_order);
    let center = h.one_like().sub(&h.scale_ratio(2, 1));
    Ok(vec![
        (h.neg(), h.clone()),
        (h.zero_like(), center),
        (h.clone(), h),
    ])
}

/// Numeric rendering of the column diagram at a concrete small step.
pub fn render_columns(eps: f64, h_order: usize) -> Result<Vec<(f64, f64)>, EvolveError> {
    let columns = column_diagram(h_order)?;
    let eval = |jet: &Jet<Rat>| -> f64 {
        let mut acc = 0.0;
        let mut ek = 1.0;
        for k in 0..=jet.order() {
            acc += jet.coeff(k).scalar_f64() * ek;
            ek *= eps;
        }
        acc
    };
    Ok(columns.iter().map(|(p, v)| (eval(p), eval(v))).collect())
}

/// `delta(t)`, the fundamental solution of simple transport.
pub fn transport_state<A: Algebra>(t: &A) -> Distribution<A> {
    dirac(vec![t.clone()])
}

/// Residual of `d/dt <delta(t), phi> = phi'(t)`, via a jet in time.
pub fn transport_residual(
    t: f64,
    phi: &TestFunction,
    cfg: &PairConfig,
) -> Result<f64, EvolveError> {
    let tj: Jet<f64> = Jet::variable(t, 1);
    let state = transport_state(&tj);
    let paired = pair(&state, phi, cfg)?;
    let slope = phi.derivative(&[1], &[t])?;
    Ok(paired.coeff(1) - slope)
}

/// Initial-speed kinds for the wave Maclaurin series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedData {
    Zero,
    Dirac,
    DiracPrime,
}

/// Maclaurin coefficients of `t -> <F(t), phi>` for the formal heat or
/// wave solution with Dirac initial value.
///
/// Heat: coefficient `k` is `phi^(2k)(0) / k!`. Wave: even coefficients
/// are `phi^(k)(0) / k!`; odd coefficients come from the initial speed.
pub fn maclaurin(
    equation: Equation,
    phi: &TestFunction,
    order: usize,
    speed: SpeedData,
) -> Result<Vec<f64>, EvolveError> {
    let deriv_at_zero =
        |j: usize| -> Result<f64, EvolveError> { Ok(phi.derivative(&[j], &[0.0])?) };
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut factorial = 1.0;
    for k in 0..=order {
        if k > 1 {
            factorial *= k as f64;
        }
        let c = match equation {
            Equation::Heat => deriv_at_zero(2 * k)? / factorial,
            Equation::Wave => {
                if k % 2 == 0 {
                    deriv_at_zero(k)? / factorial
                } else {
                    match speed {
                        SpeedData::Zero => 0.0,
                        // <lap^m delta(0), phi> = phi^(2m)(0), k = 2m + 1
                        SpeedData::Dirac => deriv_at_zero(k - 1)? / factorial,
                        // <lap^m delta'(0), phi> = -phi^(2m+1)(0)
                        SpeedData::DiracPrime => -deriv_at_zero(k)? / factorial,
                    }
                }
            }
            Equation::Transport => deriv_at_zero(k)? / factorial,
        };
        coeffs.push(c);
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::{convolve, pairing_equal};
    use crate::smooth::{battery, ratio, var};

    fn cfg() -> PairConfig {
        PairConfig::default()
    }

    #[test]
    fn dim1_position_pairing() {
        // <(1/2) S^t, x^2> = t^2 = 0.25 at t = 0.5
        let sol = wave_fundamental(1, SolutionKind::Position).unwrap();
        let phi = TestFunction::new(1, var(0).pow(2));
        let state = sol.family.at(&0.5).unwrap();
        let value = pair(&state, &phi, &cfg()).unwrap();
        assert!((value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn dim1_speed_starts_at_zero() {
        let sol = wave_fundamental(1, SolutionKind::Speed).unwrap();
        let phi = TestFunction::new(1, var(0).pow(2) + ratio(1, 1));
        let state = sol.family.at(&0.0).unwrap();
        assert!(pair(&state, &phi, &cfg()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn dim3_speed_mass() {
        // <(1/4pi) t S^t, 1> = t at t = 1
        let sol = wave_fundamental(3, SolutionKind::Speed).unwrap();
        let one = battery(3)[6].clone();
        let state = sol.family.at(&1.0).unwrap();
        assert!((pair(&state, &one, &cfg()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn initial_data_matches_declarations() {
        for dim in 1..=3usize {
            for kind in [SolutionKind::Position, SolutionKind::Speed] {
                let sol = wave_fundamental(dim, kind).unwrap();
                let phi = battery(dim)[4].clone();
                let phi0 = phi.eval_f64(&vec![0.0; dim]).unwrap();
                let (value, speed) = initial_data(&sol, &phi, &cfg()).unwrap();
                let (want_value, want_speed) = match kind {
                    SolutionKind::Position => (phi0, 0.0),
                    SolutionKind::Speed => (0.0, phi0),
                };
                assert!(
                    (value - want_value).abs() < 1e-10,
                    "dim {dim} {kind:?} value {value} vs {want_value}"
                );
                assert!(
                    (speed - want_speed).abs() < 1e-10,
                    "dim {dim} {kind:?} speed {speed} vs {want_speed}"
                );
            }
        }
    }

    #[test]
    fn wave_residual_vanishes_dim1() {
        let sol = wave_fundamental(1, SolutionKind::Position).unwrap();
        let bump = battery(1)[5].clone();
        let r = wave_residual(&sol, 0.3, &bump, &cfg()).unwrap();
        assert!(r.abs() < 1e-8, "residual {r}");
    }

    #[test]
    fn wave_residual_vanishes_dim3() {
        let sol = wave_fundamental(3, SolutionKind::Speed).unwrap();
        let gauss = battery(3)[3].clone();
        let r = wave_residual(&sol, 0.5, &gauss, &cfg()).unwrap();
        assert!(r.abs() < 1e-6, "residual {r}");
    }

    #[test]
    fn linear_profile_gives_exact_zero_residual_dim1() {
        // both sides vanish for phi linear
        let sol = wave_fundamental(1, SolutionKind::Position).unwrap();
        let phi = TestFunction::new(1, var(0) * ratio(3, 1));
        let r = wave_residual(&sol, 0.8, &phi, &cfg()).unwrap();
        assert!(r.abs() < 1e-13);
    }

    #[test]
    fn time_derivative_closure_dim3() {
        // d/dt of the speed family pairing equals the position family
        // pairing: d/dt (t S^t)/(4pi) = (S^t + t^2 lap B^t)/(4pi)
        let speed = wave_fundamental(3, SolutionKind::Speed).unwrap();
        let position = wave_fundamental(3, SolutionKind::Position).unwrap();
        let phi = battery(3)[3].clone();
        for &t in &[0.4, 0.9] {
            let jet = pair_jet_time(&speed.family, t, 1, &phi, &cfg()).unwrap();
            let direct = pair(&position.family.at(&t).unwrap(), &phi, &cfg()).unwrap();
            assert!(
                (jet.coeff(1) - direct).abs() < 1e-8,
                "t={t}: {} vs {}",
                jet.coeff(1),
                direct
            );
        }
    }

    #[test]
    fn heat_state_cases() {
        // scalar zero: the Dirac
        let at_zero: Distribution<f64> = heat_state(&0.0).unwrap();
        assert_eq!(at_zero, dirac(vec![0.0]));
        // positive: the gaussian node
        let at_pos: Distribution<f64> = heat_state(&0.25).unwrap();
        assert!(matches!(at_pos, Distribution::HeatGaussian { .. }));
        // negative: rejected
        assert!(matches!(
            heat_state(&-1.0_f64),
            Err(EvolveError::NegativeHeatTime(_))
        ));
    }

    #[test]
    fn nilpotent_heat_state_is_the_formal_series() {
        // K(d) = delta(0) + d * delta''(0) for d^2 = 0
        let d: Jet<f64> = Jet::generator(&0.0, 1);
        let state = heat_state(&d).unwrap();
        let expected = exp_flow_distribution(
            &LinearOperator::Laplacian,
            &dirac(vec![d.zero_like()]),
            &d,
            1,
        )
        .unwrap();
        assert_eq!(state, expected);
        // pairing realizes phi(0) + d phi''(0)
        let phi = TestFunction::new(1, var(0).pow(2) + var(0).pow(4));
        let out = pair(&state, &phi, &cfg()).unwrap();
        assert_eq!(out.coeff(0), 0.0);
        assert_eq!(out.coeff(1), 2.0);
    }

    #[test]
    fn heat_second_moment_grows_linearly() {
        let phi = TestFunction::new(1, var(0).pow(2));
        for &t in &[0.25, 1.0] {
            let state: Distribution<f64> = heat_state(&t).unwrap();
            let value = pair(&state, &phi, &cfg()).unwrap();
            assert!(
                (value - 2.0 * t).abs() <= 1e-8 * (2.0 * t),
                "t={t}: {value}"
            );
        }
    }

    #[test]
    fn heat_time_derivative_via_parts() {
        // f(t) = <K_t, x^4> = 3 (2t)^2 = 12 t^2, so f'(0.5) = 12
        let phi = TestFunction::new(1, var(0).pow(4));
        let value = heat_time_derivative(1, 0.5, &phi, &cfg()).unwrap();
        assert!((value - 12.0).abs() < 1e-8, "{value}");
        // n = 0 recovers the plain pairing
        let direct = pair(
            &crate::distribution::heat_gaussian(0.5).unwrap(),
            &phi,
            &cfg(),
        )
        .unwrap();
        let via = heat_time_derivative(0, 0.5, &phi, &cfg()).unwrap();
        assert_eq!(via, direct);
    }

    #[test]
    fn small_time_limit_of_first_derivative() {
        // <K_t, phi''> -> phi''(0); error <= 1e-3 at t = 1e-4
        let bump = battery(1)[5].clone();
        let target = bump.derivative(&[2], &[0.0]).unwrap();
        let mut last = f64::NAN;
        for &t in &[1e-2, 1e-3, 1e-4] {
            last = heat_time_derivative(1, t, &bump, &cfg()).unwrap();
        }
        assert!(
            (last - target).abs() <= 1e-3,
            "limit {last} vs target {target}"
        );
    }

    #[test]
    fn smoothness_witness_extrapolates_to_second_derivative() {
        let bump = battery(1)[5].clone();
        let target = bump.derivative(&[2], &[0.0]).unwrap();
        let witness = heat_smoothness_witness(&bump, 8..=16, &cfg()).unwrap();
        assert!(
            (witness - target).abs() <= 1e-3,
            "witness {witness} vs {target}"
        );
    }

    #[test]
    fn spread_identities_are_exact() {
        let phi = TestFunction::new(
            1,
            var(0).pow(4) - ratio(3, 1) * var(0).pow(3) + ratio(2, 1) * var(0).pow(2) + var(0),
        );
        for (n, symmetric) in [(1, false), (2, false), (2, true), (3, false), (4, false)] {
            let (lhs, rhs) = dirac_spread(n, symmetric).unwrap();
            let a = pair(&lhs, &phi, &cfg()).unwrap();
            let b = pair(&rhs, &phi, &cfg()).unwrap();
            assert_eq!(a, b, "n={n} symmetric={symmetric}");
        }
    }

    #[test]
    fn spread_of_constants_vanishes() {
        let one = TestFunction::new(1, ratio(1, 1));
        for n in 1..=4usize {
            let (lhs, rhs) = dirac_spread(n, false).unwrap();
            assert!(pair(&lhs, &one, &cfg()).unwrap().is_zero());
            assert!(pair(&rhs, &one, &cfg()).unwrap().is_zero());
        }
    }

    #[test]
    fn spread_rejects_order_zero() {
        assert!(matches!(
            dirac_spread(0, false),
            Err(EvolveError::ZeroSpreadOrder)
        ));
    }

    #[test]
    fn column_diagram_is_the_drawing_of_the_heat_state() {
        let columns = column_diagram(3).unwrap();
        let h: Jet<Rat> = Jet::generator(&Rat::from_int(0), 3);
        // positions -h, 0, h with heights h, 1-2h, h
        assert_eq!(columns[0].0, h.neg());
        assert_eq!(columns[0].1, h);
        assert_eq!(columns[1].1, h.one_like().sub(&h.scale_ratio(2, 1)));
        // total mass 1
        let total = columns.iter().fold(h.zero_like(), |acc, (_, v)| acc.add(v));
        assert_eq!(total, h.one_like());
        // pairing against phi equals <K(h^3), phi> in R[h]/(h^4)
        let phi = TestFunction::new(1, var(0).pow(2) - ratio(2, 1) * var(0) + ratio(1, 1));
        let as_dist = lincomb(
            columns
                .iter()
                .map(|(p, v)| (v.clone(), dirac(vec![p.clone()])))
                .collect(),
        );
        let d = h.powi(3).unwrap();
        let heat = heat_state(&d).unwrap();
        let a = pair(&as_dist, &phi, &cfg()).unwrap();
        let b = pair(&heat, &phi, &cfg()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn numeric_rendering() {
        let cols = render_columns(0.05, 3).unwrap();
        assert_eq!(cols.len(), 3);
        assert!((cols[0].0 + 0.05).abs() < 1e-15);
        assert!((cols[1].1 - 0.9).abs() < 1e-15);
        let mass: f64 = cols.iter().map(|(_, v)| v).sum();
        assert!((mass - 1.0).abs() < 1e-15);
    }

    #[test]
    fn transport_examples() {
        let phi = TestFunction::new(1, var(0).sin());
        // <delta(t), phi> = phi(t)
        let state: Distribution<f64> = transport_state(&0.7);
        assert_eq!(
            pair(&state, &phi, &cfg()).unwrap(),
            phi.eval_f64(&[0.7]).unwrap()
        );
        // residual vanishes
        assert!(transport_residual(0.7, &phi, &cfg()).unwrap().abs() < 1e-12);
        let constant = TestFunction::new(1, ratio(4, 1));
        assert_eq!(transport_residual(1.3, &constant, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn heat_maclaurin_examples() {
        // phi = x^2: f(t) = 2t, coefficients [0, 2, 0]
        let phi = TestFunction::new(1, var(0).pow(2));
        let coeffs = maclaurin(Equation::Heat, &phi, 2, SpeedData::Zero).unwrap();
        assert_eq!(coeffs, vec![0.0, 2.0, 0.0]);
        // constants stay put
        let c5 = TestFunction::new(1, ratio(5, 1));
        let coeffs = maclaurin(Equation::Heat, &c5, 3, SpeedData::Zero).unwrap();
        assert_eq!(coeffs, vec![5.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn wave_maclaurin_matches_family_jet() {
        // the even series phi(0) + t^2/2 phi''(0) + t^4/24 phi'''' ...
        // equals the jet of <(1/2) S^t, phi> at 0, exactly for polynomials
        let phi = TestFunction::new(1, var(0).pow(4) - var(0).pow(2) + ratio(2, 1));
        let series = maclaurin(Equation::Wave, &phi, 4, SpeedData::Zero).unwrap();
        let sol = wave_fundamental(1, SolutionKind::Position).unwrap();
        let jet = pair_jet_time(&sol.family, 0.0, 4, &phi, &cfg()).unwrap();
        for k in 0..=4 {
            assert!(
                (series[k] - jet.coeff(k)).abs() < 1e-13,
                "coefficient {k}: {} vs {}",
                series[k],
                jet.coeff(k)
            );
        }
    }

    #[test]
    fn convolution_principle_at_nilpotent_time() {
        // for a Dirac-combination initial value, the exp-series solution
        // equals convolution with the fundamental solution
        let d: Jet<f64> = Jet::generator(&0.0, 2);
        let zero = d.zero_like();
        let one = d.one_like();
        let mu = lincomb(vec![
            (one.scale_f64(2.0), dirac(vec![zero.lift_f64(0.5)])),
            (
                one.neg(),
                dirac_derivative(vec![zero.lift_f64(-1.0)], vec![1]),
            ),
        ]);
        let series = exp_flow_distribution(&LinearOperator::Laplacian, &mu, &d, 2).unwrap();
        let fundamental = heat_state(&d).unwrap();
        let convolved = convolve(mu, fundamental).unwrap();
        assert!(pairing_equal(&series, &convolved, &cfg(), 1e-12).unwrap());
    }
}
