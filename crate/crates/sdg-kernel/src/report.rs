//! The identity-verification suite: every identity the library claims,
//! run over a fixed grid of dimensions, times, and test functions, with
//! pinned tolerances and a deterministic, machine-readable report.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Algebra, Jet, Rat};
use crate::distribution::{self, dirac, pair, pair_jet_time, PairConfig, TimeFamily};
use crate::evolution::{
    self, dirac_spread, heat_time_derivative, initial_data, maclaurin, transport_residual,
    wave_fundamental, wave_residual, Equation, SolutionKind, SpeedData,
};
use crate::flows::{
    self, change_of_variables, check_action_flow_exchange, check_flow_composition,
    check_flow_equation, exp_series_coefficients, flow_taylor_recurrence, formal_flow,
    pde_residual, second_order_flow_matrix, sum_zero_composition_is_identity, ClosedFlow,
    LinearOperator, VectorField,
};
use crate::quadrature::{field_battery, flux_vs_divergence};
use crate::smooth::{battery, c, ratio, var, AffineMap, TestFunction};

/// Suite configuration. `tol_overrides` maps identity-id prefixes to
/// replacement tolerances.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub quad_order: usize,
    pub jet_order: usize,
    /// Run exact-eligible identities over the rationals with zero
    /// tolerance instead of floats at 1e-12.
    pub exact: bool,
    pub only: Option<String>,
    pub dim: Option<usize>,
    pub tol_overrides: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            quad_order: 32,
            jet_order: 6,
            exact: false,
            only: None,
            dim: None,
            tol_overrides: BTreeMap::new(),
        }
    }
}

impl SuiteConfig {
    fn pair_config(&self) -> PairConfig {
        PairConfig::with_order(self.quad_order)
    }

    fn tolerance_for(&self, id: &str, default: f64) -> f64 {
        let mut best: Option<(usize, f64)> = None;
        for (prefix, tol) in &self.tol_overrides {
            if id == prefix || id.starts_with(&format!("{prefix}-")) {
                let len = prefix.len();
                if best.is_none_or(|(l, _)| len > l) {
                    best = Some((len, *tol));
                }
            }
        }
        best.map(|(_, t)| t).unwrap_or(default)
    }
}

/// One verified identity instance.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub id: String,
    pub statement: String,
    pub inputs: String,
    pub mode: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: SuiteConfig,
    pub entries: Vec<ReportEntry>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("id,statement,inputs,mode,lhs,rhs,abs_err,rel_err,tolerance,pass\n");
        for e in &self.entries {
            let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                e.id,
                quote(&e.statement),
                quote(&e.inputs),
                e.mode,
                quote(&e.lhs),
                quote(&e.rhs),
                e.abs_err,
                e.rel_err,
                e.tolerance,
                e.pass
            ));
        }
        out
    }
}

struct CaseData {
    inputs: String,
    lhs: String,
    rhs: String,
    abs_err: f64,
    scale: f64,
}

impl CaseData {
    fn scalars(lhs: f64, rhs: f64, inputs: String) -> Self {
        CaseData {
            inputs,
            lhs: format!("{lhs}"),
            rhs: format!("{rhs}"),
            abs_err: (lhs - rhs).abs(),
            scale: lhs.abs().max(rhs.abs()),
        }
    }

    fn residual(value: f64, inputs: String) -> Self {
        CaseData {
            inputs,
            lhs: format!("{value}"),
            rhs: "0".to_string(),
            abs_err: value.abs(),
            scale: 0.0,
        }
    }

    fn boolean(ok: bool, inputs: String) -> Self {
        CaseData {
            inputs,
            lhs: if ok { "holds" } else { "violated" }.to_string(),
            rhs: "holds".to_string(),
            abs_err: if ok { 0.0 } else { 1.0 },
            scale: 0.0,
        }
    }

    fn compare<A: Algebra + std::fmt::Display>(lhs: &A, rhs: &A, inputs: String) -> Self {
        CaseData {
            inputs,
            lhs: format!("{lhs}"),
            rhs: format!("{rhs}"),
            abs_err: lhs.sub(rhs).max_abs(),
            scale: lhs.max_abs().max(rhs.max_abs()),
        }
    }
}

type Runner = Box<dyn Fn(&SuiteConfig) -> Result<CaseData, String> + Send + Sync>;

struct Case {
    id: String,
    statement: String,
    dim: Option<usize>,
    default_tol: f64,
    mode: &'static str,
    runner: Runner,
}

fn case(
    id: String,
    statement: &str,
    dim: Option<usize>,
    default_tol: f64,
    mode: &'static str,
    runner: impl Fn(&SuiteConfig) -> Result<CaseData, String> + Send + Sync + 'static,
) -> Case {
    Case {
        id,
        statement: statement.to_string(),
        dim,
        default_tol,
        mode,
        runner: Box::new(runner),
    }
}

fn phi_inputs(phi: &TestFunction, extra: &str) -> String {
    let support_note = if phi.support().is_none() && phi.expr().degree_bound().is_none() {
        " (non-compact stand-in)"
    } else {
        ""
    };
    format!("{extra}, phi={}{}", phi.name(), support_note)
}

const T_GRID: [f64; 3] = [0.3, 0.7, 1.2];

fn err_str<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Build the full catalog of identity cases.
fn catalog(exact: bool) -> Vec<Case> {
    let mut cases: Vec<Case> = Vec::new();

    // --- time-derivative identities for spheres and balls ---
    for dim in 1..=3usize {
        let funcs = battery(dim);
        for &t in T_GRID.iter() {
            for (pi, phi) in funcs.iter().take(6).enumerate() {
                let inputs = phi_inputs(phi, &format!("dim={dim}, t={t}"));
                let n = dim as f64;

                let phi_a = phi.clone();
                let in_a = inputs.clone();
                cases.push(case(
                    format!("a1-dim{dim}-t{t}-phi{pi}"),
                    "d/dt <B_t, phi> = <S_t, phi>",
                    Some(dim),
                    1e-8,
                    "float",
                    move |cfg| {
                        let pc = cfg.pair_config();
                        let jet = pair_jet_time(&TimeFamily::BallRaw(dim), t, 1, &phi_a, &pc)
                            .map_err(err_str)?;
                        let rhs = pair(
                            &TimeFamily::SphereRaw(dim).at(&t).map_err(err_str)?,
                            &phi_a,
                            &pc,
                        )
                        .map_err(err_str)?;
                        Ok(CaseData::scalars(jet.coeff(1), rhs, in_a.clone()))
                    },
                ));

                let phi_b = phi.clone();
                let in_b = inputs.clone();
                cases.push(case(
                    format!("a2-dim{dim}-t{t}-phi{pi}"),
                    "t d/dt <S_t, phi> = (n-1) <S_t, phi> + t <lap B_t, phi>",
                    Some(dim),
                    1e-8,
                    "float",
                    move |cfg| {
                        let pc = cfg.pair_config();
                        let jet = pair_jet_time(&TimeFamily::SphereRaw(dim), t, 1, &phi_b, &pc)
                            .map_err(err_str)?;
                        let lap = pair(
                            &TimeFamily::BallRaw(dim)
                                .laplacian()
                                .at(&t)
                                .map_err(err_str)?,
                            &phi_b,
                            &pc,
                        )
                        .map_err(err_str)?;
                        let lhs = t * jet.coeff(1);
                        let rhs = (n - 1.0) * jet.coeff(0) + t * lap;
                        Ok(CaseData::scalars(lhs, rhs, in_b.clone()))
                    },
                ));

                let phi_c = phi.clone();
                let in_c = inputs.clone();
                cases.push(case(
                    format!("a3-dim{dim}-t{t}-phi{pi}"),
                    "t d/dt <B^t, phi> = <S^t, phi> - n <B^t, phi>",
                    Some(dim),
                    1e-8,
                    "float",
                    move |cfg| {
                        let pc = cfg.pair_config();
                        let jet = pair_jet_time(&TimeFamily::BallAvg(dim), t, 1, &phi_c, &pc)
                            .map_err(err_str)?;
                        let sphere = pair(
                            &TimeFamily::SphereAvg(dim).at(&t).map_err(err_str)?,
                            &phi_c,
                            &pc,
                        )
                        .map_err(err_str)?;
                        let lhs = t * jet.coeff(1);
                        let rhs = sphere - n * jet.coeff(0);
                        Ok(CaseData::scalars(lhs, rhs, in_c.clone()))
                    },
                ));

                let phi_d = phi.clone();
                let in_d = inputs.clone();
                cases.push(case(
                    format!("a4-dim{dim}-t{t}-phi{pi}"),
                    "d/dt <S^t, phi> = t <lap B^t, phi>",
                    Some(dim),
                    1e-8,
                    "float",
                    move |cfg| {
                        let pc = cfg.pair_config();
                        let jet = pair_jet_time(&TimeFamily::SphereAvg(dim), t, 1, &phi_d, &pc)
                            .map_err(err_str)?;
                        let lap = pair(
                            &TimeFamily::BallAvg(dim)
                                .laplacian()
                                .at(&t)
                                .map_err(err_str)?,
                            &phi_d,
                            &pc,
                        )
                        .map_err(err_str)?;
                        Ok(CaseData::scalars(jet.coeff(1), t * lap, in_d.clone()))
                    },
                ));

                if dim == 1 {
                    let phi_e = phi.clone();
                    let in_e = inputs.clone();
                    cases.push(case(
                        format!("a5-dim1-t{t}-phi{pi}"),
                        "d/dt <S_t, phi> = <lap B_t, phi> (dimension 1)",
                        Some(1),
                        1e-8,
                        "float",
                        move |cfg| {
                            let pc = cfg.pair_config();
                            let jet = pair_jet_time(&TimeFamily::SphereRaw(1), t, 1, &phi_e, &pc)
                                .map_err(err_str)?;
                            let lap = pair(
                                &TimeFamily::BallRaw(1).laplacian().at(&t).map_err(err_str)?,
                                &phi_e,
                                &pc,
                            )
                            .map_err(err_str)?;
                            Ok(CaseData::scalars(jet.coeff(1), lap, in_e.clone()))
                        },
                    ));
                }
            }
        }

        // a4 at t = 0: both sides vanish
        for (pi, phi) in funcs.iter().take(3).enumerate() {
            let phi0 = phi.clone();
            let inputs = phi_inputs(phi, &format!("dim={dim}, t=0"));
            cases.push(case(
                format!("a4-dim{dim}-t0-phi{pi}"),
                "d/dt <S^t, phi> and t <lap B^t, phi> both vanish at t = 0",
                Some(dim),
                1e-10,
                "float",
                move |cfg| {
                    let pc = cfg.pair_config();
                    let jet = pair_jet_time(&TimeFamily::SphereAvg(dim), 0.0, 1, &phi0, &pc)
                        .map_err(err_str)?;
                    Ok(CaseData::scalars(jet.coeff(1), 0.0, inputs.clone()))
                },
            ));
        }

        // scaling relations and zero-radius constants
        let gauss = funcs[3].clone();
        let in_scale = phi_inputs(&gauss, &format!("dim={dim}, t=0.8"));
        cases.push(case(
            format!("scale-sphere-dim{dim}"),
            "S_t = t^(n-1) S^t as pairings",
            Some(dim),
            1e-10,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let t = 0.8f64;
                let raw = pair(
                    &TimeFamily::SphereRaw(dim).at(&t).map_err(err_str)?,
                    &gauss,
                    &pc,
                )
                .map_err(err_str)?;
                let avg = pair(
                    &TimeFamily::SphereAvg(dim).at(&t).map_err(err_str)?,
                    &gauss,
                    &pc,
                )
                .map_err(err_str)?;
                Ok(CaseData::scalars(
                    raw,
                    t.powi(dim as i32 - 1) * avg,
                    in_scale.clone(),
                ))
            },
        ));
        let gauss_b = funcs[3].clone();
        let in_scale_b = phi_inputs(&gauss_b, &format!("dim={dim}, t=0.8"));
        cases.push(case(
            format!("scale-ball-dim{dim}"),
            "B_t = t^n B^t as pairings",
            Some(dim),
            1e-10,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let t = 0.8f64;
                let raw = pair(
                    &TimeFamily::BallRaw(dim).at(&t).map_err(err_str)?,
                    &gauss_b,
                    &pc,
                )
                .map_err(err_str)?;
                let avg = pair(
                    &TimeFamily::BallAvg(dim).at(&t).map_err(err_str)?,
                    &gauss_b,
                    &pc,
                )
                .map_err(err_str)?;
                Ok(CaseData::scalars(
                    raw,
                    t.powi(dim as i32) * avg,
                    in_scale_b.clone(),
                ))
            },
        ));

        let sphere_consts = [2.0, 2.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI];
        let ball_consts = [2.0, std::f64::consts::PI, 4.0 * std::f64::consts::PI / 3.0];
        let phi_z = funcs[4].clone();
        let in_z = phi_inputs(&phi_z, &format!("dim={dim}, t=0"));
        cases.push(case(
            format!("szero-dim{dim}"),
            "S^0 and B^0 are the unit measures times the Dirac at 0",
            Some(dim),
            1e-10,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let phi0 = phi_z.eval_f64(&vec![0.0; dim]).map_err(err_str)?;
                let s = pair(
                    &TimeFamily::SphereAvg(dim).at(&0.0).map_err(err_str)?,
                    &phi_z,
                    &pc,
                )
                .map_err(err_str)?;
                let b = pair(
                    &TimeFamily::BallAvg(dim).at(&0.0).map_err(err_str)?,
                    &phi_z,
                    &pc,
                )
                .map_err(err_str)?;
                let err_s = (s - sphere_consts[dim - 1] * phi0).abs();
                let err_b = (b - ball_consts[dim - 1] * phi0).abs();
                Ok(CaseData {
                    inputs: in_z.clone(),
                    lhs: format!("S0={s}, B0={b}"),
                    rhs: format!(
                        "{}*phi(0), {}*phi(0)",
                        sphere_consts[dim - 1],
                        ball_consts[dim - 1]
                    ),
                    abs_err: err_s.max(err_b),
                    scale: s.abs().max(b.abs()),
                })
            },
        ));

        let phi_raw0 = funcs[4].clone();
        let in_raw0 = phi_inputs(&phi_raw0, &format!("dim={dim}, t=0"));
        cases.push(case(
            format!("szero-raw-dim{dim}"),
            "B_0 vanishes; S_0 vanishes for n >= 2 (in dimension 1 the raw and averaged spheres coincide)",
            Some(dim),
            1e-12,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let b = pair(
                    &TimeFamily::BallRaw(dim).at(&0.0).map_err(err_str)?,
                    &phi_raw0,
                    &pc,
                )
                .map_err(err_str)?;
                let s = pair(
                    &TimeFamily::SphereRaw(dim).at(&0.0).map_err(err_str)?,
                    &phi_raw0,
                    &pc,
                )
                .map_err(err_str)?;
                // the t^(n-1) prefactor is identically 1 in dimension 1
                let s_err = if dim == 1 {
                    let avg = pair(
                        &TimeFamily::SphereAvg(1).at(&0.0).map_err(err_str)?,
                        &phi_raw0,
                        &pc,
                    )
                    .map_err(err_str)?;
                    (s - avg).abs()
                } else {
                    s.abs()
                };
                Ok(CaseData {
                    inputs: in_raw0.clone(),
                    lhs: format!("S_0={s}, B_0={b}"),
                    rhs: if dim == 1 {
                        "S_0=S^0, B_0=0".to_string()
                    } else {
                        "0, 0".to_string()
                    },
                    abs_err: s_err.max(b.abs()),
                    scale: 0.0,
                })
            },
        ));

        let phi_h = funcs[4].clone();
        let in_h = phi_inputs(&phi_h, &format!("dim={dim}, t=0.65"));
        cases.push(case(
            format!("homothety-dim{dim}"),
            "S^t = H_t(S_1) and B^t = H_t(B_1) as pairings",
            Some(dim),
            1e-9,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let t = 0.65f64;
                let scale_map = AffineMap::scaling(dim, t);
                let s_direct = pair(
                    &TimeFamily::SphereAvg(dim).at(&t).map_err(err_str)?,
                    &phi_h,
                    &pc,
                )
                .map_err(err_str)?;
                let s_pushed = pair(
                    &distribution::pushforward(
                        scale_map.clone(),
                        distribution::sphere(dim, 1.0, true),
                    )
                    .map_err(err_str)?,
                    &phi_h,
                    &pc,
                )
                .map_err(err_str)?;
                let b_direct = pair(
                    &TimeFamily::BallAvg(dim).at(&t).map_err(err_str)?,
                    &phi_h,
                    &pc,
                )
                .map_err(err_str)?;
                let b_pushed = pair(
                    &distribution::pushforward(scale_map, distribution::ball(dim, 1.0, true))
                        .map_err(err_str)?,
                    &phi_h,
                    &pc,
                )
                .map_err(err_str)?;
                Ok(CaseData {
                    inputs: in_h.clone(),
                    lhs: format!("direct=({s_direct}, {b_direct})"),
                    rhs: format!("pushforward=({s_pushed}, {b_pushed})"),
                    abs_err: (s_direct - s_pushed).abs().max((b_direct - b_pushed).abs()),
                    scale: s_direct.abs().max(b_direct.abs()),
                })
            },
        ));
    }

    // --- corrected Leibniz rule ---
    for dim in 1..=2usize {
        let funcs = battery(dim);
        let phi = funcs[3].clone();
        let g = funcs[1].clone();
        let xi: Vec<crate::smooth::Expr> = match dim {
            1 => vec![var(0).pow(2)],
            _ => vec![var(0).pow(2), c(1.0) + var(1)],
        };
        let inputs = phi_inputs(&phi, &format!("dim={dim}, g={}, t=0.8", g.name()));
        cases.push(case(
            format!("leibniz-dim{dim}"),
            "D_X(g mu) = D_X(g) mu + g D_X(mu)",
            Some(dim),
            1e-8,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let mu = distribution::ball(dim, 0.8, false);
                let field = VectorField::new(xi.clone());
                let lhs_dist = distribution::directional_derivative(
                    xi.clone(),
                    distribution::multiply(g.clone(), mu.clone()).map_err(err_str)?,
                )
                .map_err(err_str)?;
                let dg = field.directional_derivative_fn(&g);
                let term1 = distribution::multiply(dg, mu.clone()).map_err(err_str)?;
                let term2 = distribution::multiply(
                    g.clone(),
                    distribution::directional_derivative(xi.clone(), mu).map_err(err_str)?,
                )
                .map_err(err_str)?;
                let lhs = pair(&lhs_dist, &phi, &pc).map_err(err_str)?;
                let rhs = pair(&term1, &phi, &pc).map_err(err_str)?
                    + pair(&term2, &phi, &pc).map_err(err_str)?;
                Ok(CaseData::scalars(lhs, rhs, inputs.clone()))
            },
        ));
    }

    // --- Poisson kernel: descent route vs singular quadrature route ---
    let planar = battery(2);
    for t in [0.5f64, 1.0] {
        for pi in 0..4usize {
            let psi = planar[pi].clone();
            let inputs = phi_inputs(&psi, &format!("t={t}"));
            cases.push(case(
                format!("poisson-t{t}-phi{pi}"),
                "p(t S^t) = (2/sqrt(t^2 - rho^2)) B_t on the plane",
                Some(2),
                1e-6,
                "float",
                move |cfg| {
                    let pc = cfg.pair_config();
                    let p = AffineMap::coordinate_projection(3, 2);
                    let t_sphere =
                        distribution::lincomb(vec![(t, distribution::sphere(3, t, true))]);
                    let lhs = pair(
                        &distribution::pushforward(p, t_sphere).map_err(err_str)?,
                        &psi,
                        &pc,
                    )
                    .map_err(err_str)?;
                    let rhs = pair(&distribution::poisson_ball(t), &psi, &pc).map_err(err_str)?;
                    Ok(CaseData::scalars(lhs, rhs, inputs.clone()))
                },
            ));
        }
        let one = planar[6].clone();
        let inputs = phi_inputs(&one, &format!("t={t}"));
        cases.push(case(
            format!("poisson-unit-t{t}"),
            "both Poisson routes give 4 pi t against psi = 1",
            Some(2),
            1e-8,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let p = AffineMap::coordinate_projection(3, 2);
                let t_sphere = distribution::lincomb(vec![(t, distribution::sphere(3, t, true))]);
                let lhs = pair(
                    &distribution::pushforward(p, t_sphere).map_err(err_str)?,
                    &one,
                    &pc,
                )
                .map_err(err_str)?;
                let rhs = pair(&distribution::poisson_ball(t), &one, &pc).map_err(err_str)?;
                let target = 4.0 * std::f64::consts::PI * t;
                Ok(CaseData {
                    inputs: inputs.clone(),
                    lhs: format!("push={lhs}, singular={rhs}"),
                    rhs: format!("{target}"),
                    abs_err: (lhs - target).abs().max((rhs - target).abs()),
                    scale: target,
                })
            },
        ));
    }

    // --- wave fundamental solutions ---
    for dim in 1..=3usize {
        for kind in [SolutionKind::Position, SolutionKind::Speed] {
            let kind_name = match kind {
                SolutionKind::Position => "position",
                SolutionKind::Speed => "speed",
            };
            let funcs = battery(dim);
            // dimension 1 pairs by point evaluation, so the compact bump
            // is cheap there; higher dimensions use a polynomial instead
            let second = if dim == 1 {
                funcs[5].clone()
            } else {
                funcs[1].clone()
            };
            for &t in T_GRID.iter() {
                for (pi, phi) in [funcs[3].clone(), second.clone()].into_iter().enumerate() {
                    let inputs = phi_inputs(&phi, &format!("dim={dim}, kind={kind_name}, t={t}"));
                    cases.push(case(
                        format!("wave-res-dim{dim}-{kind_name}-t{t}-phi{pi}"),
                        "d2/dt2 <Q(t), phi> = <Q(t), lap phi>",
                        Some(dim),
                        1e-6,
                        "float",
                        move |cfg| {
                            let pc = cfg.pair_config();
                            let sol = wave_fundamental(dim, kind).map_err(err_str)?;
                            let r = wave_residual(&sol, t, &phi, &pc).map_err(err_str)?;
                            Ok(CaseData::residual(r, inputs.clone()))
                        },
                    ));
                }
            }
            let phi = battery(dim)[4].clone();
            let inputs = phi_inputs(&phi, &format!("dim={dim}, kind={kind_name}, t=0"));
            cases.push(case(
                format!("wave-init-dim{dim}-{kind_name}"),
                "initial value and speed match the declared Dirac data",
                Some(dim),
                1e-10,
                "float",
                move |cfg| {
                    let pc = cfg.pair_config();
                    let sol = wave_fundamental(dim, kind).map_err(err_str)?;
                    let (value, speed) = initial_data(&sol, &phi, &pc).map_err(err_str)?;
                    let phi0 = phi.eval_f64(&vec![0.0; dim]).map_err(err_str)?;
                    let (want_v, want_s) = match kind {
                        SolutionKind::Position => (phi0, 0.0),
                        SolutionKind::Speed => (0.0, phi0),
                    };
                    Ok(CaseData {
                        inputs: inputs.clone(),
                        lhs: format!("value={value}, speed={speed}"),
                        rhs: format!("value={want_v}, speed={want_s}"),
                        abs_err: (value - want_v).abs().max((speed - want_s).abs()),
                        scale: phi0.abs(),
                    })
                },
            ));
        }
    }

    // time-derivative closure in dimension 3
    {
        let phi = battery(3)[3].clone();
        let inputs = phi_inputs(&phi, "dim=3, t in {0.4, 0.9}");
        cases.push(case(
            "wave-closure-dim3".to_string(),
            "d/dt of the speed solution is the position solution",
            Some(3),
            1e-8,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let speed = wave_fundamental(3, SolutionKind::Speed).map_err(err_str)?;
                let position = wave_fundamental(3, SolutionKind::Position).map_err(err_str)?;
                let mut worst = CaseData::scalars(0.0, 0.0, inputs.clone());
                for &t in &[0.4, 0.9] {
                    let jet = pair_jet_time(&speed.family, t, 1, &phi, &pc).map_err(err_str)?;
                    let direct = pair(&position.family.at(&t).map_err(err_str)?, &phi, &pc)
                        .map_err(err_str)?;
                    let data = CaseData::scalars(jet.coeff(1), direct, inputs.clone());
                    if data.abs_err > worst.abs_err {
                        worst = data;
                    }
                }
                Ok(worst)
            },
        ));
    }

    // --- heat ---
    for t in [0.25f64, 1.0] {
        cases.push(case(
            format!("heat-moment-t{t}"),
            "<K(t), x^2> = 2t",
            Some(1),
            1e-8,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let phi = TestFunction::new(1, var(0).pow(2)).named("x^2");
                let state: distribution::Distribution<f64> =
                    evolution::heat_state(&t).map_err(err_str)?;
                let value = pair(&state, &phi, &pc).map_err(err_str)?;
                Ok(CaseData::scalars(value, 2.0 * t, format!("t={t}, phi=x^2")))
            },
        ));
        let phi = battery(1)[3].clone();
        let inputs = phi_inputs(&phi, &format!("t={t}"));
        cases.push(case(
            format!("heat-deriv-t{t}"),
            "d/dt <K(t), phi> = <K(t), phi''>",
            Some(1),
            1e-8,
            "float",
            move |cfg| {
                let pc = cfg.pair_config();
                let jet =
                    pair_jet_time(&TimeFamily::HeatKernel, t, 1, &phi, &pc).map_err(err_str)?;
                let rhs = heat_time_derivative(1, t, &phi, &pc).map_err(err_str)?;
                Ok(CaseData::scalars(jet.coeff(1), rhs, inputs.clone()))
            },
        ));
    }

    {
        let bump = battery(1)[5].clone();
        let inputs = phi_inputs(&bump, "t in {1e-2, 1e-3, 1e-4}");
        cases.push(case(
            "heat-limit".to_string(),
            "d/dt <K(t), phi> converges to phi''(0) as t -> 0+",
            Some(1),
            1e-3,
            "small-t",
            move |cfg| {
                let pc = cfg.pair_config();
                let target = bump.derivative(&[2], &[0.0]).map_err(err_str)?;
                let mut last = f64::NAN;
                for &t in &[1e-2, 1e-3, 1e-4] {
                    last = heat_time_derivative(1, t, &bump, &pc).map_err(err_str)?;
                }
                let mut data = CaseData::scalars(last, target, inputs.clone());
                data.scale = 0.0; // absolute comparison for the limit
                Ok(data)
            },
        ));
        let bump2 = battery(1)[5].clone();
        let inputs2 = phi_inputs(&bump2, "t = 2^-k, k = 8..16");
        cases.push(case(
            "heat-smooth".to_string(),
            "(1/t)(<K_t, phi> - phi(0)) extrapolates to phi''(0)",
            Some(1),
            1e-3,
            "small-t",
            move |cfg| {
                let pc = cfg.pair_config();
                let target = bump2.derivative(&[2], &[0.0]).map_err(err_str)?;
                let witness =
                    evolution::heat_smoothness_witness(&bump2, 8..=16, &pc).map_err(err_str)?;
                let mut data = CaseData::scalars(witness, target, inputs2.clone());
                data.scale = 0.0;
                Ok(data)
            },
        ));
    }

    cases.push(case(
        "heat-nilpotent-tree".to_string(),
        "K at nilpotent time is the exponential series of the Laplacian",
        Some(1),
        0.0,
        "exact",
        move |cfg| {
            let order = cfg.jet_order.clamp(1, 8);
            let d: Jet<f64> = Jet::generator(&0.0, order);
            let state = evolution::heat_state(&d).map_err(err_str)?;
            let series = flows::exp_flow_distribution(
                &LinearOperator::Laplacian,
                &dirac(vec![d.zero_like()]),
                &d,
                order,
            )
            .map_err(err_str)?;
            Ok(CaseData::boolean(
                state == series,
                format!("nilpotent order {order}"),
            ))
        },
    ));

    cases.push(case(
        "heat-nilpotent-pairing".to_string(),
        "K(d) = delta(0) + d delta''(0) pairs exactly for d^2 = 0",
        Some(1),
        0.0,
        "exact",
        move |_cfg| {
            let d: Jet<Rat> = Jet::generator(&Rat::from_int(0), 1);
            let state = evolution::heat_state(&d).map_err(err_str)?;
            let phi = TestFunction::new(
                1,
                var(0).pow(4) - ratio(3, 1) * var(0).pow(2) + var(0) + ratio(2, 1),
            );
            let lhs = pair(&state, &phi, &PairConfig::default()).map_err(err_str)?;
            let expected = Jet::from_coeffs(vec![Rat::from_int(2), Rat::from_int(-6)]);
            Ok(CaseData::compare(
                &lhs,
                &expected,
                "phi=x^4-3x^2+x+2".into(),
            ))
        },
    ));

    // --- Dirac spreads ---
    for (n, symmetric) in [(1, false), (2, false), (2, true), (3, false), (4, false)] {
        let label = if symmetric {
            format!("spread-n{n}-sym")
        } else {
            format!("spread-n{n}")
        };
        cases.push(case(
            label,
            "h^n delta^(n)(0) equals the binomial Dirac spread modulo h^(n+1)",
            Some(1),
            if exact { 0.0 } else { 1e-12 },
            if exact { "rational" } else { "float" },
            move |cfg| {
                let phi = TestFunction::new(
                    1,
                    var(0).pow(4) - ratio(3, 1) * var(0).pow(3)
                        + ratio(2, 1) * var(0).pow(2)
                        + var(0),
                );
                let (lhs, rhs) = dirac_spread(n, symmetric).map_err(err_str)?;
                let pc = cfg.pair_config();
                if cfg.exact {
                    let a = pair(&lhs, &phi, &pc).map_err(err_str)?;
                    let b = pair(&rhs, &phi, &pc).map_err(err_str)?;
                    Ok(CaseData::compare(
                        &a,
                        &b,
                        format!("n={n}, symmetric={symmetric}, rational"),
                    ))
                } else {
                    let to_float =
                        |d: &distribution::Distribution<Jet<Rat>>| -> Result<Jet<f64>, String> {
                            let a = pair(d, &phi, &pc).map_err(err_str)?;
                            Ok(Jet::from_coeffs(
                                a.coeffs().iter().map(|c| c.scalar_f64()).collect(),
                            ))
                        };
                    let a = to_float(&lhs)?;
                    let b = to_float(&rhs)?;
                    Ok(CaseData::compare(
                        &a,
                        &b,
                        format!("n={n}, symmetric={symmetric}"),
                    ))
                }
            },
        ));
    }

    cases.push(case(
        "column-diagram".to_string(),
        "the nilpotent heat state renders as columns of total mass 1",
        Some(1),
        0.0,
        "exact",
        move |_cfg| {
            let columns = evolution::column_diagram(3).map_err(err_str)?;
            let h: Jet<Rat> = Jet::generator(&Rat::from_int(0), 3);
            let total = columns.iter().fold(h.zero_like(), |acc, (_, v)| acc.add(v));
            Ok(CaseData::compare(&total, &h.one_like(), "h^4 = 0".into()))
        },
    ));

    // --- transport ---
    {
        let samples: [(f64, usize); 5] = [(0.0, 0), (0.7, 7), (1.3, 3), (-0.4, 1), (2.0, 4)];
        for (i, (t, pi)) in samples.into_iter().enumerate() {
            let phi = battery(1)[pi].clone();
            let inputs = phi_inputs(&phi, &format!("t={t}"));
            cases.push(case(
                format!("transport-{i}"),
                "d/dt <delta(t), phi> = phi'(t)",
                Some(1),
                1e-12,
                "float",
                move |cfg| {
                    let pc = cfg.pair_config();
                    let r = transport_residual(t, &phi, &pc).map_err(err_str)?;
                    Ok(CaseData::residual(r, inputs.clone()))
                },
            ));
        }
    }

    // --- vector calculus ---
    for (i, field) in field_battery().into_iter().enumerate() {
        let name = field.name.clone();
        cases.push(case(
            format!("div-{i}"),
            "flux over the unit circle equals the divergence integral",
            Some(2),
            1e-8,
            "float",
            move |cfg| {
                let (flux, div) = flux_vs_divergence(&field, cfg.quad_order).map_err(err_str)?;
                Ok(CaseData::scalars(flux, div, format!("F={name}")))
            },
        ));
    }

    {
        cases.push(case(
            "div-homothety".to_string(),
            "div(F ∘ H_t) = t (div F) ∘ H_t pointwise",
            Some(2),
            1e-10,
            "float",
            move |_cfg| {
                let fields = field_battery();
                let mut worst: Option<CaseData> = None;
                for field in &fields[3..5] {
                    for &t in &[0.5, 2.0] {
                        for point in [[0.3, -0.6], [1.1, 0.4]] {
                            let h = AffineMap::scaling(2, t);
                            let fx = field.fx.compose_affine(&h).map_err(err_str)?;
                            let fy = field.fy.compose_affine(&h).map_err(err_str)?;
                            let lhs = fx.derivative(&[1, 0], &point).map_err(err_str)?
                                + fy.derivative(&[0, 1], &point).map_err(err_str)?;
                            let scaled = [t * point[0], t * point[1]];
                            let rhs = t * field.divergence_at(&scaled).map_err(err_str)?;
                            let data = CaseData::scalars(
                                lhs,
                                rhs,
                                format!("F={}, t={t}, x={point:?}", field.name),
                            );
                            if worst.as_ref().is_none_or(|w| data.abs_err > w.abs_err) {
                                worst = Some(data);
                            }
                        }
                    }
                }
                Ok(worst.expect("nonempty grid"))
            },
        ));
    }

    for dim in 1..=3usize {
        for t in [0.5f64, 1.0, 2.0] {
            let phi = battery(dim)[5].clone();
            let inputs = phi_inputs(&phi, &format!("dim={dim}, t={t}"));
            cases.push(case(
                format!("chvar-dim{dim}-t{t}"),
                "t^n int_{B_1} phi ∘ H_t = int_{B_t} phi",
                Some(dim),
                1e-8,
                "float",
                move |cfg| {
                    let pc = cfg.pair_config();
                    let h = AffineMap::scaling(dim, t);
                    let composed = phi.compose_affine(&h).map_err(err_str)?;
                    let unit = pair(&distribution::ball(dim, 1.0, true), &composed, &pc)
                        .map_err(err_str)?;
                    let lhs = t.powi(dim as i32) * unit;
                    let rhs =
                        pair(&distribution::ball(dim, t, false), &phi, &pc).map_err(err_str)?;
                    Ok(CaseData::scalars(lhs, rhs, inputs.clone()))
                },
            ));
        }
    }

    // --- formal flows against frozen Taylor oracles ---
    {
        struct FlowOracle {
            id: &'static str,
            statement: &'static str,
            xi: crate::smooth::Expr,
            m: (i64, i64),
            coeffs: fn(usize) -> Vec<Rat>,
        }
        fn exp_coeffs(order: usize) -> Vec<Rat> {
            // e^t: 1/k!
            let mut out = vec![Rat::from_int(1)];
            let mut fact = 1i64;
            for k in 1..=order {
                fact *= k as i64;
                out.push(Rat::new(1, fact));
            }
            out
        }
        fn geometric_coeffs(order: usize) -> Vec<Rat> {
            // 1/(1-t): all ones
            vec![Rat::from_int(1); order + 1]
        }
        fn tan_coeffs(order: usize) -> Vec<Rat> {
            // tan t: 0, 1, 0, 1/3, 0, 2/15, 0, 17/315
            let table = [
                (0, 1),
                (1, 1),
                (0, 1),
                (1, 3),
                (0, 1),
                (2, 15),
                (0, 1),
                (17, 315),
            ];
            table[..=order.min(7)]
                .iter()
                .map(|(n, d)| Rat::new(*n, *d))
                .collect()
        }
        let oracles = [
            FlowOracle {
                id: "flow-exp",
                statement: "the flow of xi(x) = x at 1 is the exponential series",
                xi: var(0),
                m: (1, 1),
                coeffs: exp_coeffs,
            },
            FlowOracle {
                id: "flow-geom",
                statement: "the flow of xi(x) = x^2 at 1 is the geometric series",
                xi: var(0).pow(2),
                m: (1, 1),
                coeffs: geometric_coeffs,
            },
            FlowOracle {
                id: "flow-tan",
                statement: "the flow of xi(x) = 1 + x^2 at 0 is the tangent series",
                xi: ratio(1, 1) + var(0).pow(2),
                m: (0, 1),
                coeffs: tan_coeffs,
            },
        ];
        for oracle in oracles {
            let FlowOracle {
                id,
                statement,
                xi,
                m,
                coeffs,
            } = oracle;
            cases.push(case(
                id.to_string(),
                statement,
                None,
                if exact { 0.0 } else { 1e-12 },
                if exact { "rational" } else { "float" },
                move |cfg| {
                    let order = cfg.jet_order.clamp(1, 6);
                    let field = VectorField::scalar(xi.clone());
                    let expected = coeffs(order);
                    if cfg.exact {
                        let flow = formal_flow(&field, &[Rat::new(m.0, m.1)], order, 0.0)
                            .map_err(err_str)?;
                        let want = Jet::from_coeffs(expected);
                        Ok(CaseData::compare(
                            &flow[0],
                            &want,
                            format!("order {order}, rational"),
                        ))
                    } else {
                        let m0 = m.0 as f64 / m.1 as f64;
                        let flow = formal_flow(&field, &[m0], order, 1e-9).map_err(err_str)?;
                        let want = Jet::from_coeffs(
                            expected.iter().map(|r| r.scalar_f64()).collect::<Vec<_>>(),
                        );
                        Ok(CaseData::compare(&flow[0], &want, format!("order {order}")))
                    }
                },
            ));
        }
    }

    cases.push(case(
        "flow-route".to_string(),
        "square-zero collapse agrees with the jet recurrence route",
        None,
        0.0,
        "rational",
        move |cfg| {
            let order = cfg.jet_order.clamp(1, 6);
            let fields = [
                VectorField::scalar(var(0)),
                VectorField::scalar(var(0).pow(2)),
                VectorField::new(vec![var(1), -var(0)]),
            ];
            for field in &fields {
                let m: Vec<Rat> = (0..field.dim())
                    .map(|i| Rat::new(1 + i as i64, 2))
                    .collect();
                let a = formal_flow(field, &m, order, 0.0).map_err(err_str)?;
                let b = flow_taylor_recurrence(field, &m, order).map_err(err_str)?;
                if a != b {
                    return Ok(CaseData::boolean(false, format!("{:?}", field.xi())));
                }
            }
            Ok(CaseData::boolean(true, format!("order {order}, 3 fields")))
        },
    ));

    for n in 2..=5usize {
        cases.push(case(
            format!("sum-zero-n{n}"),
            "generators summing to zero compose to the identity",
            None,
            0.0,
            "rational",
            move |_cfg| {
                let fields = [
                    VectorField::scalar(var(0)),
                    VectorField::scalar(var(0).pow(2)),
                    VectorField::scalar(ratio(1, 1) + var(0).pow(3)),
                ];
                for field in &fields {
                    let ok = sum_zero_composition_is_identity(field, &[Rat::new(1, 2)], n)
                        .map_err(err_str)?;
                    if !ok {
                        return Ok(CaseData::boolean(false, format!("{:?}", field.xi())));
                    }
                }
                Ok(CaseData::boolean(true, format!("n={n}, 3 fields")))
            },
        ));
    }

    for (id, statement, which) in [
        (
            "cond-equation",
            "the flow jet satisfies dF/dt = xi(F)",
            0usize,
        ),
        (
            "cond-composition",
            "F_{tau+sigma} = F_tau ∘ F_sigma over nested nilpotents",
            1,
        ),
        (
            "cond-exchange",
            "F_{t+d} = X_d ∘ F_t = F_t ∘ X_d over one square-zero generator",
            2,
        ),
    ] {
        cases.push(case(
            id.to_string(),
            statement,
            None,
            0.0,
            "rational",
            move |cfg| {
                let order = cfg.jet_order.clamp(1, 4);
                let fields = [
                    VectorField::scalar(var(0)),
                    VectorField::scalar(var(0).pow(2)),
                    VectorField::new(vec![var(1), -var(0)]),
                ];
                for field in &fields {
                    let m: Vec<Rat> = (0..field.dim())
                        .map(|i| Rat::new(1 - 2 * i as i64, 3))
                        .collect();
                    let ok = match which {
                        0 => check_flow_equation(field, &m, order + 1).map_err(err_str)?,
                        1 => check_flow_composition(field, &m, order).map_err(err_str)?,
                        _ => check_action_flow_exchange(field, &m, order).map_err(err_str)?,
                    };
                    if !ok {
                        return Ok(CaseData::boolean(false, format!("{:?}", field.xi())));
                    }
                }
                Ok(CaseData::boolean(true, format!("order {order}, 3 fields")))
            },
        ));
    }

    // --- linear exponential series ---
    cases.push(case(
        "exp-recurrence".to_string(),
        "(k+1) c_{k+1} = L c_k for the exponential series",
        None,
        0.0,
        "rational",
        move |_cfg| {
            let op = LinearOperator::Matrix(vec![vec![0.5, -1.0], vec![2.0, 0.25]]);
            let v = [Rat::from_int(1), Rat::from_int(-2)];
            let coeffs = exp_series_coefficients(&op, &v, 8);
            for k in 0..8 {
                let lhs: Vec<Rat> = coeffs[k + 1]
                    .iter()
                    .map(|x| x.scale_ratio(k as i64 + 1, 1))
                    .collect();
                let rhs = op.apply_vec(&coeffs[k]);
                if lhs != rhs {
                    return Ok(CaseData::boolean(false, format!("order {k}")));
                }
            }
            Ok(CaseData::boolean(true, "orders 0..8".into()))
        },
    ));

    cases.push(case(
        "cos-series".to_string(),
        "the second-order series of L = -1 is the cosine series",
        None,
        1e-15,
        "float",
        move |_cfg| {
            let op = LinearOperator::scalar(-1.0);
            let t: Jet<f64> = Jet::variable(0.0, 6);
            let v = [Jet::constant(1.0, 6)];
            let w = [Jet::constant(0.0, 6)];
            let out = second_order_flow_matrix(&op, &v, &w, &t, 6);
            let expected =
                Jet::from_coeffs(vec![1.0, 0.0, -0.5, 0.0, 1.0 / 24.0, 0.0, -1.0 / 720.0]);
            Ok(CaseData::compare(&out[0], &expected, "order 6".into()))
        },
    ));

    // --- chain rule, naturality, PDE transfer ---
    cases.push(case(
        "chain-rule".to_string(),
        "d/dt U(t, F_t(m)) = dU/dt + D_{ZxX} U along the flow",
        None,
        1e-10,
        "float",
        move |_cfg| {
            let u = TestFunction::new(2, var(0) * var(1).pow(2) + var(1).sin());
            let mut worst: Option<CaseData> = None;
            for flow in [
                ClosedFlow::Translation(vec![0.8]),
                ClosedFlow::Scaling { dim: 1, rate: -0.5 },
            ] {
                for &(t, m) in &[(0.3, 0.7), (1.0, -0.2)] {
                    let r = flows::chain_rule_residual(&u, &flow, t, &[m]).map_err(err_str)?;
                    let data = CaseData::residual(r, format!("{flow:?}, t={t}, m={m}"));
                    if worst.as_ref().is_none_or(|w| data.abs_err > w.abs_err) {
                        worst = Some(data);
                    }
                }
            }
            Ok(worst.expect("grid is nonempty"))
        },
    ));

    cases.push(case(
        "naturality".to_string(),
        "D_{X1}(u ∘ H) = D_{X2}(u) ∘ H for a flow homomorphism",
        None,
        1e-9,
        "float",
        move |_cfg| {
            let u = TestFunction::new(1, var(0).pow(3));
            let x1 = VectorField::scalar(c(1.0));
            let x2 = VectorField::scalar(var(0));
            let h = [var(0).exp()];
            let mut worst: Option<CaseData> = None;
            for &m in &[0.0, 0.4, -1.1] {
                let r = flows::naturality_residual(&u, &x1, &x2, &h, &[m]).map_err(err_str)?;
                let data = CaseData::residual(r, format!("H=exp, m={m}"));
                if worst.as_ref().is_none_or(|w| data.abs_err > w.abs_err) {
                    worst = Some(data);
                }
            }
            Ok(worst.expect("grid is nonempty"))
        },
    ));

    // change of variables: translation and scaling examples, both ways
    let cov_examples: Vec<(&str, ClosedFlow, TestFunction, Option<crate::smooth::Expr>)> = vec![
        (
            "cov-translation",
            ClosedFlow::Translation(vec![1.0]),
            TestFunction::new(2, var(0).exp() * (var(1) - var(0)).pow(2)),
            Some(var(0)),
        ),
        (
            "cov-liouville",
            ClosedFlow::Scaling { dim: 1, rate: 1.0 },
            TestFunction::new(2, ((-var(0)).exp() * var(1)).pow(2)),
            None,
        ),
    ];
    for (id, flow, u, eta) in cov_examples {
        cases.push(case(
            id.to_string(),
            "solutions transfer both ways under change of variables",
            None,
            1e-9,
            "float",
            move |_cfg| {
                let vf = flow.field();
                let changed = change_of_variables(&u, &flow).map_err(err_str)?;
                let mut worst = 0.0f64;
                for i in 0..5 {
                    for j in 0..5 {
                        let t = -0.4 + 0.3 * i as f64;
                        let x = -1.0 + 0.5 * j as f64;
                        // direction 1: u solves the transported equation
                        let r1 = pde_residual(&u, &vf, eta.as_ref(), t, &[x]).map_err(err_str)?;
                        // direction 2: U solves the straightened equation
                        let r2 = changed
                            .residual_zero_field(eta.as_ref(), t, &[x])
                            .map_err(err_str)?;
                        worst = worst.max(r1.abs()).max(r2.abs());
                    }
                }
                Ok(CaseData::residual(
                    worst,
                    "5x5 grid, both directions".into(),
                ))
            },
        ));
    }

    // --- interval distributions ---
    cases.push(case(
        "interval-prop".to_string(),
        "intervals are equal iff lengths agree and the length kills the offset",
        Some(1),
        0.0,
        "rational",
        move |_cfg| {
            let t: Jet<Rat> = Jet::variable(Rat::from_int(0), 1);
            let zero = t.zero_like();
            let one = t.one_like();
            let t2 = t.scale_ratio(2, 1);
            let ok = distribution::interval_equal(&zero, &zero, &t, &t)
                && !distribution::interval_equal(&t.neg(), &t, &t2.neg(), &t2)
                && !distribution::interval_equal(&zero, &one, &t, &one.add(&t))
                && !distribution::interval_equal(&t, &t.add(&one), &zero, &one)
                && distribution::interval_equal(&t, &t, &zero, &zero);
            Ok(CaseData::boolean(ok, "nilpotent endpoint cases".into()))
        },
    ));

    // --- projection commutes with the Laplacian ---
    cases.push(case(
        "projection-laplacian".to_string(),
        "p(lap S) = lap p(S) for the plane projection",
        Some(2),
        1e-8,
        "float",
        move |cfg| {
            let pc = cfg.pair_config();
            let p = AffineMap::coordinate_projection(3, 2);
            let s = distribution::sphere(3, 0.5, true);
            let lhs_dist =
                distribution::pushforward(p.clone(), s.clone().laplacian()).map_err(err_str)?;
            let rhs_dist = distribution::pushforward(p, s)
                .map_err(err_str)?
                .laplacian();
            let mut worst: Option<CaseData> = None;
            for psi in battery(2).into_iter().take(4) {
                let a = pair(&lhs_dist, &psi, &pc).map_err(err_str)?;
                let b = pair(&rhs_dist, &psi, &pc).map_err(err_str)?;
                let data = CaseData::scalars(a, b, phi_inputs(&psi, "t=0.5"));
                if worst.as_ref().is_none_or(|w| {
                    data.abs_err / data.scale.max(1e-30) > w.abs_err / w.scale.max(1e-30)
                }) {
                    worst = Some(data);
                }
            }
            Ok(worst.expect("battery is nonempty"))
        },
    ));

    // --- convolution ---
    cases.push(case(
        "conv-unit".to_string(),
        "Q * delta(0) = Q",
        Some(1),
        1e-12,
        "float",
        move |cfg| {
            let pc = cfg.pair_config();
            let mu = distribution::ball(1, 0.8, false);
            let conv = distribution::convolve(dirac(vec![0.0]), mu.clone()).map_err(err_str)?;
            let mut worst: Option<CaseData> = None;
            for phi in battery(1).into_iter().take(6) {
                let a = pair(&conv, &phi, &pc).map_err(err_str)?;
                let b = pair(&mu, &phi, &pc).map_err(err_str)?;
                let data = CaseData::scalars(a, b, phi_inputs(&phi, "mu=B_0.8"));
                if worst.as_ref().is_none_or(|w| data.abs_err > w.abs_err) {
                    worst = Some(data);
                }
            }
            Ok(worst.expect("battery is nonempty"))
        },
    ));

    cases.push(case(
        "conv-principle".to_string(),
        "the series solution with Dirac-combination data is the convolution with the fundamental solution",
        Some(1),
        1e-10,
        "float",
        move |cfg| {
            let pc = cfg.pair_config();
            let d: Jet<f64> = Jet::generator(&0.0, 2);
            let zero = d.zero_like();
            let one = d.one_like();
            let mu = distribution::lincomb(vec![
                (one.scale_f64(2.0), dirac(vec![zero.lift_f64(0.5)])),
                (
                    one.neg(),
                    distribution::dirac_derivative(vec![zero.lift_f64(-1.0)], vec![1]),
                ),
            ]);
            let series =
                flows::exp_flow_distribution(&LinearOperator::Laplacian, &mu, &d, 2)
                    .map_err(err_str)?;
            let fundamental = evolution::heat_state(&d).map_err(err_str)?;
            let convolved = distribution::convolve(mu, fundamental).map_err(err_str)?;
            let mut worst: Option<CaseData> = None;
            for phi in battery(1).into_iter().take(6) {
                let a = pair(&series, &phi, &pc).map_err(err_str)?;
                let b = pair(&convolved, &phi, &pc).map_err(err_str)?;
                let data = CaseData::compare(&a, &b, phi_inputs(&phi, "mu=2d(0.5)-d'(-1)"));
                if worst.as_ref().is_none_or(|w| data.abs_err > w.abs_err) {
                    worst = Some(data);
                }
            }
            Ok(worst.expect("battery is nonempty"))
        },
    ));

    // --- Maclaurin series ---
    cases.push(case(
        "maclaurin-heat".to_string(),
        "heat coefficients are phi^(2k)(0)/k!",
        Some(1),
        1e-13,
        "float",
        move |_cfg| {
            let phi = TestFunction::new(1, var(0).pow(4) - var(0).pow(2) + ratio(2, 1));
            let coeffs = maclaurin(Equation::Heat, &phi, 3, SpeedData::Zero).map_err(err_str)?;
            // phi(0) = 2, phi''(0) = -2, phi''''(0)/2! = 12
            let target = [2.0, -2.0, 12.0, 0.0];
            let lhs = format!("{coeffs:?}");
            let rhs = format!("{target:?}");
            let abs_err = coeffs
                .iter()
                .zip(&target)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok(CaseData {
                inputs: "phi=x^4-x^2+2".into(),
                lhs,
                rhs,
                abs_err,
                scale: 12.0,
            })
        },
    ));

    cases.push(case(
        "maclaurin-wave".to_string(),
        "the even wave series is the jet of <(1/2) S^t, phi> at 0",
        Some(1),
        1e-13,
        "float",
        move |cfg| {
            let pc = cfg.pair_config();
            let phi = TestFunction::new(1, var(0).pow(4) - var(0).pow(2) + ratio(2, 1));
            let series = maclaurin(Equation::Wave, &phi, 4, SpeedData::Zero).map_err(err_str)?;
            let sol = wave_fundamental(1, SolutionKind::Position).map_err(err_str)?;
            let jet = pair_jet_time(&sol.family, 0.0, 4, &phi, &pc).map_err(err_str)?;
            let want = Jet::from_coeffs(series.clone());
            Ok(CaseData::compare(&jet, &want, "phi=x^4-x^2+2".into()))
        },
    ));

    // --- smooth-function cross-checks ---
    cases.push(case(
        "deriv-fd".to_string(),
        "jet derivatives match central finite differences",
        None,
        1e-6,
        "float",
        move |_cfg| {
            let mut worst = 0.0f64;
            for phi in battery(1).into_iter().take(6) {
                for &x0 in &[0.1, 0.7, -1.3] {
                    let jet = phi.derivative(&[1], &[x0]).map_err(err_str)?;
                    let fd = crate::smooth::central_diff5(
                        |x| phi.eval_f64(&[x]).unwrap_or(f64::NAN),
                        x0,
                        1e-4,
                    );
                    let scale = jet.abs().max(fd.abs()).max(1.0);
                    worst = worst.max((jet - fd).abs() / scale);
                }
            }
            Ok(CaseData::residual(worst, "battery, 3 points".into()))
        },
    ));

    cases.push(case(
        "hadamard".to_string(),
        "phi(x) = phi(0) + x psi(x) for the polynomial Hadamard quotient",
        None,
        1e-12,
        "float",
        move |_cfg| {
            let mut worst = 0.0f64;
            for phi in battery(1) {
                if phi.expr().degree_bound().is_none() {
                    continue;
                }
                let psi = phi.hadamard_quotient().map_err(err_str)?;
                for &x in &[0.0, 0.5, -1.25, 2.0] {
                    let lhs = phi.eval_f64(&[x]).map_err(err_str)?;
                    let rhs = phi.eval_f64(&[0.0]).map_err(err_str)?
                        + x * psi.eval_f64(&[x]).map_err(err_str)?;
                    worst = worst.max((lhs - rhs).abs());
                }
            }
            Ok(CaseData::residual(worst, "polynomial battery".into()))
        },
    ));

    cases.push(case(
        "jet-exp-add".to_string(),
        "exp(a) exp(b) = exp(a + b) for nilpotent jets",
        None,
        0.0,
        "rational",
        move |cfg| {
            let order = cfg.jet_order.clamp(2, 8);
            let mut ac = vec![Rat::from_int(0); order + 1];
            let mut bc = vec![Rat::from_int(0); order + 1];
            for k in 1..=order {
                ac[k] = Rat::new(1, k as i64 + 1);
                bc[k] = Rat::new(-(k as i64), 3);
            }
            let a = Jet::from_coeffs(ac);
            let b = Jet::from_coeffs(bc);
            let lhs = a
                .exp_nilpotent()
                .map_err(err_str)?
                .mul(&b.exp_nilpotent().map_err(err_str)?);
            let rhs = a.add(&b).exp_nilpotent().map_err(err_str)?;
            Ok(CaseData::compare(&lhs, &rhs, format!("order {order}")))
        },
    ));

    cases.push(case(
        "collapse-hom".to_string(),
        "the symmetric collapse is a ring homomorphism",
        None,
        0.0,
        "rational",
        move |_cfg| {
            use crate::algebra::SquareZero;
            let one = SquareZero::constant(Rat::from_int(1), 3);
            let s = SquareZero::generator_sum(&Rat::from_int(0), 3);
            let p = one.add(&s);
            let q = s.mul(&s).scale_ratio(1, 2).add(&one.scale_ratio(2, 1));
            let lhs = p.mul(&q).collapse_symmetric(0.0).map_err(err_str)?;
            let rhs = p
                .collapse_symmetric(0.0)
                .map_err(err_str)?
                .mul(&q.collapse_symmetric(0.0).map_err(err_str)?);
            Ok(CaseData::compare(&lhs, &rhs, "3 generators".into()))
        },
    ));

    cases
}

fn id_matches(pattern: &str, id: &str) -> bool {
    if let Some(prefix) = pattern.strip_suffix('*') {
        return id.starts_with(prefix);
    }
    id == pattern || id.starts_with(&format!("{pattern}-"))
}

/// Run the verification suite; entries appear in a fixed catalog order.
pub fn run_suite(config: &SuiteConfig) -> VerificationReport {
    let cases: Vec<Case> = catalog(config.exact)
        .into_iter()
        .filter(|c| {
            if let Some(only) = &config.only {
                if !id_matches(only, &c.id) {
                    return false;
                }
            }
            if let Some(dim) = config.dim {
                if c.dim != Some(dim) {
                    return false;
                }
            }
            true
        })
        .collect();

    let threads = std::env::var("SDG_KERNEL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n > 0);

    let evaluate = |case: &Case| -> ReportEntry {
        let tolerance = config.tolerance_for(&case.id, case.default_tol);
        match (case.runner)(config) {
            Ok(data) => {
                let rel_err = if data.scale > 1e-8 {
                    data.abs_err / data.scale
                } else {
                    data.abs_err
                };
                let pass = if tolerance == 0.0 {
                    data.abs_err == 0.0
                } else {
                    rel_err <= tolerance
                };
                ReportEntry {
                    id: case.id.clone(),
                    statement: case.statement.clone(),
                    inputs: data.inputs,
                    mode: case.mode.to_string(),
                    lhs: data.lhs,
                    rhs: data.rhs,
                    abs_err: data.abs_err,
                    rel_err,
                    tolerance,
                    pass,
                }
            }
            Err(message) => ReportEntry {
                id: case.id.clone(),
                statement: case.statement.clone(),
                inputs: message,
                mode: case.mode.to_string(),
                lhs: "error".into(),
                rhs: "error".into(),
                abs_err: f64::INFINITY,
                rel_err: f64::INFINITY,
                tolerance,
                pass: false,
            },
        }
    };

    let entries: Vec<ReportEntry> = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("thread pool");
            pool.install(|| cases.par_iter().map(evaluate).collect())
        }
        None => cases.par_iter().map(evaluate).collect(),
    };

    let passed = entries.iter().filter(|e| e.pass).count();
    let failed = entries.len() - passed;
    VerificationReport {
        config: config.clone(),
        entries,
        passed,
        failed,
    }
}
