//! Command-line front end: expression parsing, single evaluations, and
//! the full identity-verification suite. All computation lives in the
//! library; this binary only wires flags to library calls.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sdg_kernel::algebra::{Jet, Rat};
use sdg_kernel::distribution::{pair, pair_jet_time, PairConfig, TimeFamily};
use sdg_kernel::evolution::{
    self, heat_state, maclaurin, transport_residual, wave_fundamental, wave_residual, Equation,
    SolutionKind, SpeedData,
};
use sdg_kernel::flows::{formal_flow, pde_residual};
use sdg_kernel::parse::{
    parse_distribution, parse_test_function, parse_vector_field, print_distribution,
};
use sdg_kernel::report::{run_suite, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "sdg",
    version,
    about = "Nilpotent calculus toolbox: jets, distributions, flows, and the identity-verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Per-axis Gauss order for quadrature-backed pairings
    #[arg(long, global = true, default_value_t = 32)]
    quad_order: usize,

    /// Truncation order for jets and formal flows
    #[arg(long, global = true, default_value_t = 6)]
    jet_order: usize,

    /// Tolerance override `ID=VALUE` (repeatable; prefix ids match)
    #[arg(long, global = true, value_name = "ID=VAL")]
    tol: Vec<String>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Run exact-eligible identities over the rationals with tolerance 0
    #[arg(long, global = true)]
    exact: bool,

    /// Only run identities whose id matches this prefix or glob
    #[arg(long, global = true, value_name = "ID-GLOB")]
    only: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity-verification suite and emit a report
    Verify {
        /// Restrict to identities in one ambient dimension
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Pair a distribution expression with a test function
    Pair {
        /// Distribution expression, e.g. "laplacian(ball(dim=3,t=0.5,avg))"
        #[arg(long)]
        dist: String,
        /// Test function in the matching dimension, e.g. "x^2 * exp(-x^2)"
        #[arg(long)]
        phi: String,
    },
    /// Print the formal flow jet of a vector field at a point
    Flow {
        /// Principal part, e.g. "x^2" or "(-y, x)"
        #[arg(long)]
        xi: String,
        /// Base point coordinates
        #[arg(long, value_delimiter = ',', default_value = "1")]
        m: Vec<f64>,
        /// Flow truncation order (defaults to --jet-order)
        #[arg(long)]
        order: Option<usize>,
    },
    /// Residual of du/dt + D_X(u) = eta(u) at a sample point
    PdeResidual {
        /// Profile u(t, x...), e.g. "exp(t) * (x - t)^2"
        #[arg(long)]
        u: String,
        /// Principal part of the space field
        #[arg(long)]
        xi: String,
        /// Right-hand side in the variable u, e.g. "u"
        #[arg(long)]
        eta: Option<String>,
        #[arg(long)]
        t: f64,
        #[arg(long, value_delimiter = ',')]
        m: Vec<f64>,
    },
    /// Evaluate a wave fundamental solution against a test function
    Wave {
        #[arg(long)]
        dim: usize,
        /// "position" (Dirac value, zero speed) or "speed"
        #[arg(long, default_value = "position")]
        kind: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        phi: String,
    },
    /// Evaluate the heat state at scalar or nilpotent time
    Heat {
        /// Scalar time (t >= 0)
        #[arg(long)]
        t: Option<f64>,
        /// Use a nilpotent time of this order instead of a scalar
        #[arg(long)]
        nilpotent_order: Option<usize>,
        #[arg(long)]
        phi: String,
    },
    /// Column-diagram rendering of the nilpotent heat state
    Diffuse {
        /// Numeric stand-in for the infinitesimal h
        #[arg(long, default_value_t = 0.05)]
        h_epsilon: f64,
    },
    /// Maclaurin coefficients of an evolution pairing
    Taylor {
        /// "heat" or "wave"
        #[arg(long)]
        equation: String,
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Initial speed for the wave series: "zero", "dirac", "dirac-prime"
        #[arg(long, default_value = "zero")]
        nu: String,
    },
    /// Residual of the simple-transport equation at a sample time
    Transport {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        phi: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_tolerances(specs: &[String]) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for spec in specs {
        let (id, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("--tol expects ID=VALUE, got '{spec}'"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| format!("bad tolerance value in '{spec}'"))?;
        out.insert(id.to_string(), value);
    }
    Ok(out)
}

fn space_vars(dim: usize) -> Vec<String> {
    ["x", "y", "z"][..dim]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let pair_cfg = PairConfig::with_order(cli.quad_order);
    match cli.command {
        Command::Verify { dim } => {
            let config = SuiteConfig {
                quad_order: cli.quad_order,
                jet_order: cli.jet_order,
                exact: cli.exact,
                only: cli.only.clone(),
                dim,
                tol_overrides: parse_tolerances(&cli.tol)?,
            };
            let report = run_suite(&config);
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => print!("{}", report.to_csv()),
            }
            eprintln!(
                "{} identities checked: {} passed, {} failed",
                report.entries.len(),
                report.passed,
                report.failed
            );
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Pair { dist, phi } => {
            let dist = parse_distribution(&dist).map_err(|e| e.to_string())?;
            let phi =
                parse_test_function(&phi, &space_vars(dist.dim())).map_err(|e| e.to_string())?;
            let value = pair(&dist, &phi, &pair_cfg).map_err(|e| e.to_string())?;
            println!("<{}, {}> = {}", print_distribution(&dist), phi, value);
            Ok(ExitCode::SUCCESS)
        }
        Command::Flow { xi, m, order } => {
            let field = parse_vector_field(&xi).map_err(|e| e.to_string())?;
            if m.len() != field.dim() {
                return Err(format!(
                    "field has dimension {}, point has {}",
                    field.dim(),
                    m.len()
                ));
            }
            let order = order.unwrap_or(cli.jet_order);
            if cli.exact {
                let base: Vec<Rat> = m
                    .iter()
                    .map(|x| Rat::from_f64_exact(*x).ok_or_else(|| format!("bad coordinate {x}")))
                    .collect::<Result<_, _>>()?;
                let flow = formal_flow(&field, &base, order, 0.0).map_err(|e| e.to_string())?;
                for (i, jet) in flow.iter().enumerate() {
                    println!("x{}(t) = {}", i + 1, jet);
                }
            } else {
                let flow = formal_flow(&field, &m, order, 1e-9).map_err(|e| e.to_string())?;
                for (i, jet) in flow.iter().enumerate() {
                    println!("x{}(t) = {}", i + 1, jet);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::PdeResidual { u, xi, eta, t, m } => {
            let field = parse_vector_field(&xi).map_err(|e| e.to_string())?;
            let mut vars = vec!["t".to_string()];
            vars.extend(space_vars(field.dim()));
            let u = parse_test_function(&u, &vars).map_err(|e| e.to_string())?;
            let eta = eta
                .map(|src| {
                    parse_test_function(&src, &["u".to_string()])
                        .map(|f| f.expr().clone())
                        .map_err(|e| e.to_string())
                })
                .transpose()?;
            if m.len() != field.dim() {
                return Err(format!(
                    "field has dimension {}, point has {}",
                    field.dim(),
                    m.len()
                ));
            }
            let r = pde_residual(&u, &field, eta.as_ref(), t, &m).map_err(|e| e.to_string())?;
            println!("residual = {r:.3e}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Wave { dim, kind, t, phi } => {
            let kind = match kind.as_str() {
                "position" => SolutionKind::Position,
                "speed" => SolutionKind::Speed,
                other => return Err(format!("unknown kind '{other}'")),
            };
            let phi = parse_test_function(&phi, &space_vars(dim)).map_err(|e| e.to_string())?;
            let sol = wave_fundamental(dim, kind).map_err(|e| e.to_string())?;
            let jet =
                pair_jet_time(&sol.family, t, 2, &phi, &pair_cfg).map_err(|e| e.to_string())?;
            let residual = wave_residual(&sol, t, &phi, &pair_cfg).map_err(|e| e.to_string())?;
            println!("<Q({t}), phi>        = {}", jet.coeff(0));
            println!("d/dt <Q(t), phi>   = {}", jet.coeff(1));
            println!("wave residual      = {residual:.3e}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Heat {
            t,
            nilpotent_order,
            phi,
        } => {
            let phi = parse_test_function(&phi, &space_vars(1)).map_err(|e| e.to_string())?;
            match (t, nilpotent_order) {
                (Some(t), None) => {
                    let state: sdg_kernel::distribution::Distribution<f64> =
                        heat_state(&t).map_err(|e| e.to_string())?;
                    let value = pair(&state, &phi, &pair_cfg).map_err(|e| e.to_string())?;
                    println!("<K({t}), phi> = {value}");
                    if t > 0.0 {
                        let jet = pair_jet_time(&TimeFamily::HeatKernel, t, 1, &phi, &pair_cfg)
                            .map_err(|e| e.to_string())?;
                        println!("d/dt <K(t), phi> = {}", jet.coeff(1));
                    }
                }
                (None, Some(order)) => {
                    let d: Jet<f64> = Jet::generator(&0.0, order.max(1));
                    let state = heat_state(&d).map_err(|e| e.to_string())?;
                    let value = pair(&state, &phi, &pair_cfg).map_err(|e| e.to_string())?;
                    println!("<K(t), phi> = {value}");
                }
                _ => return Err("pass exactly one of --t or --nilpotent-order".to_string()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Diffuse { h_epsilon } => {
            let columns = evolution::column_diagram(3).map_err(|e| e.to_string())?;
            let rendered = evolution::render_columns(h_epsilon, 3).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => {
                    let items: Vec<serde_json::Value> = columns
                        .iter()
                        .zip(&rendered)
                        .map(|((p, v), (pe, ve))| {
                            serde_json::json!({
                                "position_coeffs": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                                "height_coeffs": v.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                                "position": pe,
                                "height": ve,
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "h_epsilon": h_epsilon,
                        "columns": items,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
                Format::Csv => {
                    println!("position,height");
                    for (p, v) in &rendered {
                        println!("{p},{v}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Taylor {
            equation,
            phi,
            order,
            nu,
        } => {
            let equation = match equation.as_str() {
                "heat" => Equation::Heat,
                "wave" => Equation::Wave,
                other => return Err(format!("unknown equation '{other}'")),
            };
            let speed = match nu.as_str() {
                "zero" => SpeedData::Zero,
                "dirac" => SpeedData::Dirac,
                "dirac-prime" => SpeedData::DiracPrime,
                other => return Err(format!("unknown initial speed '{other}'")),
            };
            let phi = parse_test_function(&phi, &space_vars(1)).map_err(|e| e.to_string())?;
            let coeffs = maclaurin(equation, &phi, order, speed).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string(&coeffs).unwrap()),
                Format::Csv => {
                    println!("k,coefficient");
                    for (k, c) in coeffs.iter().enumerate() {
                        println!("{k},{c}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Transport { t, phi } => {
            let phi = parse_test_function(&phi, &space_vars(1)).map_err(|e| e.to_string())?;
            let r = transport_residual(t, &phi, &pair_cfg).map_err(|e| e.to_string())?;
            println!("residual = {r:.3e}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
