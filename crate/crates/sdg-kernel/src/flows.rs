//! Vector fields as square-zero actions, their formal flows, and the
//! truncated-exponential solutions of linear first- and second-order
//! equations.
//!
//! A vector field acts infinitesimally by `X_d(m) = m + d * xi(m)`.
//! Composing the action over `n` fresh square-zero generators yields a
//! symmetric element; collapsing it onto `t = d1 + ... + dn` produces the
//! flow's Taylor jet in time. The same composition in the quotient ring
//! where the generators sum to zero collapses to the identity, which is
//! the executable form of invertibility of the infinitesimal action.

use crate::algebra::{Algebra, AlgebraError, Jet, Rat, SquareZero, SumZeroQuotient};
use crate::distribution::{DistError, Distribution};
use crate::smooth::{EvalError, Expr, TestFunction};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("the action parameter must be square-zero")]
    NotSquareZero,
    #[error("field dimension {expected} does not match point dimension {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("flow inversion check failed at sample {0:?}")]
    InversionCheckFailed(Vec<f64>),
    #[error("operator is not linear: |residual| = {0}")]
    NotLinear(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// A vector field on `R^dim` given by its principal part, one expression
/// per coordinate, evaluable over any algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    dim: usize,
    xi: Vec<Expr>,
}

impl VectorField {
    pub fn new(xi: Vec<Expr>) -> Self {
        assert!(!xi.is_empty());
        VectorField { dim: xi.len(), xi }
    }

    /// One-dimensional field `xi(x)`.
    pub fn scalar(xi: Expr) -> Self {
        VectorField::new(vec![xi])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn xi(&self) -> &[Expr] {
        &self.xi
    }

    /// `xi(m)` in whatever algebra the point lives in.
    pub fn principal_part<A: Algebra>(&self, m: &[A]) -> Result<Vec<A>, FlowError> {
        if m.len() != self.dim {
            return Err(FlowError::DimensionMismatch {
                expected: self.dim,
                got: m.len(),
            });
        }
        Ok(self
            .xi
            .iter()
            .map(|e| e.eval(m))
            .collect::<Result<_, _>>()?)
    }

    /// `D_X(u) = sum_i xi_i * du/dx_i` as a function on `R^dim`.
    pub fn directional_derivative_fn(&self, u: &TestFunction) -> TestFunction {
        let mut expr = crate::smooth::c(0.0);
        for (axis, comp) in self.xi.iter().enumerate() {
            expr = crate::smooth::add(expr, crate::smooth::mul(comp.clone(), u.expr().diff(axis)));
        }
        TestFunction::new(self.dim, expr)
    }
}

/// `X_d(m) = m + d * xi(m)`; `d` must be square-zero.
pub fn infinitesimal_action<A: Algebra>(
    field: &VectorField,
    d: &A,
    m: &[A],
) -> Result<Vec<A>, FlowError> {
    if !d.mul(d).is_zero() {
        return Err(FlowError::NotSquareZero);
    }
    let xi = field.principal_part(m)?;
    Ok(m.iter()
        .zip(xi)
        .map(|(mi, xii)| mi.add(&d.mul(&xii)))
        .collect())
}

/// Formal (Taylor) flow of a vector field at a point, to the given order.
///
/// The action is composed over `order` fresh square-zero generators, the
/// result is checked for coefficient symmetry (within `symmetry_tol` per
/// coordinate; pass `0.0` over exact coefficients), and each coordinate
/// collapses to a jet in time.
pub fn formal_flow<A: Algebra>(
    field: &VectorField,
    m: &[A],
    order: usize,
    symmetry_tol: f64,
) -> Result<Vec<Jet<A>>, FlowError> {
    if m.len() != field.dim {
        return Err(FlowError::DimensionMismatch {
            expected: field.dim,
            got: m.len(),
        });
    }
    if order == 0 {
        return Ok(m.iter().map(|c| Jet::constant(c.clone(), 0)).collect());
    }
    let mut state: Vec<SquareZero<A>> = m
        .iter()
        .map(|c| SquareZero::constant(c.clone(), order))
        .collect();
    for i in 0..order {
        let d = SquareZero::generator(&m[0], order, i);
        let xi = field.principal_part(&state)?;
        state = state
            .iter()
            .zip(xi)
            .map(|(s, x)| s.add(&d.mul(&x)))
            .collect();
    }
    state
        .into_iter()
        .map(|s| s.collapse_symmetric(symmetry_tol).map_err(FlowError::from))
        .collect()
}

/// Independent Taylor route for the same flow: the coefficient recurrence
/// `(k+1) c_{k+1} = [t^k] xi(F(t))` read off univariate jet arithmetic.
/// Used to cross-check [`formal_flow`], never to implement it.
pub fn flow_taylor_recurrence<A: Algebra>(
    field: &VectorField,
    m: &[A],
    order: usize,
) -> Result<Vec<Jet<A>>, FlowError> {
    let dim = field.dim;
    if m.len() != dim {
        return Err(FlowError::DimensionMismatch {
            expected: dim,
            got: m.len(),
        });
    }
    let mut coeffs: Vec<Vec<A>> = vec![m.to_vec()];
    for k in 0..order {
        let jets: Vec<Jet<A>> = (0..dim)
            .map(|i| Jet::from_coeffs((0..=k).map(|j| coeffs[j][i].clone()).collect()))
            .collect();
        let xi = field.principal_part(&jets)?;
        let next: Vec<A> = (0..dim)
            .map(|i| xi[i].coeff(k).scale_ratio(1, k as i64 + 1))
            .collect();
        coeffs.push(next);
    }
    Ok((0..dim)
        .map(|i| Jet::from_coeffs((0..=order).map(|k| coeffs[k][i].clone()).collect()))
        .collect())
}

/// Composing the action over square-zero generators that sum to zero
/// yields the identity, exactly.
///
/// The generators live in the quotient ring [`SumZeroQuotient`], where
/// the substituted last generator `dn = -(d1 + ... + d_{n-1})` is itself
/// square-zero; composing in the free ring and reducing at the end is
/// equivalent because reduction is a ring homomorphism.
pub fn sum_zero_composition_is_identity(
    field: &VectorField,
    m: &[Rat],
    n: usize,
) -> Result<bool, FlowError> {
    let quotient = SumZeroQuotient::new(n);
    let free = quotient.free_generators();
    let gens = quotient.generators(&Rat::from_int(0));
    let mut state: Vec<SquareZero<Rat>> = m
        .iter()
        .map(|c| SquareZero::constant(c.clone(), free))
        .collect();
    for d in gens.iter().rev() {
        let xi = field.principal_part(&state)?;
        state = state
            .iter()
            .zip(xi)
            .map(|(s, x)| s.add(&d.mul(&x)))
            .collect();
    }
    Ok(state
        .iter()
        .zip(m)
        .all(|(s, c)| quotient.equal(s, &SquareZero::constant(c.clone(), free))))
}

/// The flow jet satisfies its own equation `dF/dt = xi(F)` exactly: the
/// derivative of the collapsed jet agrees with the principal part
/// evaluated on it, coefficient by coefficient.
pub fn check_flow_equation(
    field: &VectorField,
    m: &[Rat],
    order: usize,
) -> Result<bool, FlowError> {
    let flow = formal_flow(field, m, order, 0.0)?;
    let xi = field.principal_part(&flow)?;
    for (f, x) in flow.iter().zip(&xi) {
        let df = f.derivative();
        for k in 0..order {
            if df.coeff(k) != x.coeff(k) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The monoid law `F_{tau+sigma} = F_tau ∘ F_sigma`, checked exactly in
/// the nested ring of jets in two nilpotent times.
pub fn check_flow_composition(
    field: &VectorField,
    m: &[Rat],
    order: usize,
) -> Result<bool, FlowError> {
    let zero = Rat::from_int(0);
    // left side: the flow at doubled order with tau + sigma substituted
    let doubled = formal_flow(field, m, 2 * order, 0.0)?;
    let sigma: Jet<Rat> = Jet::generator(&zero, order);
    let n_zero: Jet<Rat> = Jet::constant(zero.clone(), order);
    let tau: Jet<Jet<Rat>> = Jet::generator(&n_zero, order);
    let tau_plus_sigma = tau.add(&Jet::constant(sigma, order));
    let lhs: Vec<Jet<Jet<Rat>>> = doubled
        .iter()
        .map(|j| {
            j.compose_nilpotent(&tau_plus_sigma, |r| {
                Jet::constant(Jet::constant(r.clone(), order), order)
            })
        })
        .collect();
    // right side: flow in tau based at the sigma-flow of m
    let inner = formal_flow(field, m, order, 0.0)?;
    let rhs = formal_flow(field, &inner, order, 0.0)?;
    Ok(lhs == rhs)
}

/// The exchange laws between the infinitesimal action and the flow:
/// `F_{t+d} = X_d ∘ F_t = F_t ∘ X_d`, exact over one square-zero
/// generator adjoined to the rationals.
pub fn check_action_flow_exchange(
    field: &VectorField,
    m: &[Rat],
    order: usize,
) -> Result<bool, FlowError> {
    let zero = Rat::from_int(0);
    let d: SquareZero<Rat> = SquareZero::generator(&zero, 1, 0);
    let m_lifted: Vec<SquareZero<Rat>> = m
        .iter()
        .map(|c| SquareZero::constant(c.clone(), 1))
        .collect();

    // F_t(X_d(m))
    let acted = infinitesimal_action(field, &d, &m_lifted)?;
    let flow_after_action = formal_flow(field, &acted, order, 0.0)?;

    // X_d(F_t(m))
    let flow_at_m = formal_flow(field, &m_lifted, order, 0.0)?;
    let d_const: Jet<SquareZero<Rat>> = Jet::constant(d, order);
    let action_after_flow = infinitesimal_action(field, &d_const, &flow_at_m)?;

    // F_{t+d}(m) from one extra coefficient: (t+d)^k = t^k + k t^{k-1} d
    let extended = formal_flow(field, m, order + 1, 0.0)?;
    let shifted: Vec<Jet<SquareZero<Rat>>> = extended
        .iter()
        .map(|j| {
            Jet::from_coeffs(
                (0..=order)
                    .map(|k| {
                        SquareZero::from_coeffs(
                            1,
                            vec![j.coeff(k), j.coeff(k + 1).scale_ratio(k as i64 + 1, 1)],
                        )
                    })
                    .collect(),
            )
        })
        .collect();

    Ok(flow_after_action == action_after_flow && shifted == action_after_flow)
}

/// A linear operator: a dense matrix on vectors, or a named endomorphism
/// of distribution space.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearOperator {
    Matrix(Vec<Vec<f64>>),
    /// The Laplacian acting on distributions.
    Laplacian,
    /// `d/dx` on distributions over the line.
    FirstDerivative,
}

impl LinearOperator {
    pub fn scalar(a: f64) -> Self {
        LinearOperator::Matrix(vec![vec![a]])
    }

    pub fn apply_vec<A: Algebra>(&self, v: &[A]) -> Vec<A> {
        match self {
            LinearOperator::Matrix(m) => m
                .iter()
                .map(|row| {
                    let mut acc = v[0].zero_like();
                    for (a, b) in row.iter().zip(v) {
                        if *a != 0.0 {
                            acc = acc.add(&b.scale_f64(*a));
                        }
                    }
                    acc
                })
                .collect(),
            _ => panic!("named operators act on distributions, not vectors"),
        }
    }

    pub fn apply_dist<A: Algebra>(&self, mu: Distribution<A>) -> Distribution<A> {
        match self {
            LinearOperator::Matrix(_) => {
                panic!("matrix operators act on vectors, not distributions")
            }
            LinearOperator::Laplacian => mu.laplacian(),
            LinearOperator::FirstDerivative => {
                crate::distribution::directional_derivative(vec![crate::smooth::c(1.0)], mu)
                    .expect("dimension-1 field on a line distribution")
            }
        }
    }

    /// Additivity and homogeneity on sampled vectors, within 1e-12.
    pub fn validate_linearity(&self) -> Result<(), FlowError> {
        if let LinearOperator::Matrix(m) = self {
            let dim = m.len();
            let u: Vec<f64> = (0..dim).map(|i| 0.3 + 0.7 * i as f64).collect();
            let v: Vec<f64> = (0..dim).map(|i| -1.1 + 0.4 * (i * i) as f64).collect();
            let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + 2.5 * b).collect();
            let lhs = self.apply_vec(&sum);
            let au = self.apply_vec(&u);
            let av = self.apply_vec(&v);
            for i in 0..dim {
                let res = (lhs[i] - au[i] - 2.5 * av[i]).abs();
                if res > 1e-12 {
                    return Err(FlowError::NotLinear(res));
                }
            }
        }
        Ok(())
    }
}

/// `e^{t L} v` for a matrix operator: the finite sum
/// `sum_{k<=order} t^k/k! L^k v`, built through the recurrence
/// `c_{k+1} = L c_k / (k+1)`. Works for scalar, jet, or rational inputs.
pub fn exp_flow_matrix<A: Algebra>(op: &LinearOperator, v: &[A], t: &A, order: usize) -> Vec<A> {
    assemble_series(&exp_series_coefficients(op, v, order), t)
}

/// The coefficient table `c_k = L^k v / k!` of the exponential series.
pub fn exp_series_coefficients<A: Algebra>(
    op: &LinearOperator,
    v: &[A],
    order: usize,
) -> Vec<Vec<A>> {
    let mut coeffs = vec![v.to_vec()];
    for k in 0..order {
        let next: Vec<A> = op
            .apply_vec(&coeffs[k])
            .into_iter()
            .map(|x| x.scale_ratio(1, k as i64 + 1))
            .collect();
        coeffs.push(next);
    }
    coeffs
}

/// Second-order series `v + t w + t^2/2! L v + t^3/3! L w + ...`.
pub fn second_order_flow_matrix<A: Algebra>(
    op: &LinearOperator,
    v: &[A],
    w: &[A],
    t: &A,
    order: usize,
) -> Vec<A> {
    assemble_series(&second_order_coefficients(op, v, w, order), t)
}

/// `c_0 = v, c_1 = w`, and `c_{k+2} = L c_k / ((k+1)(k+2))`: the
/// interleaved second-order recurrence.
pub fn second_order_coefficients<A: Algebra>(
    op: &LinearOperator,
    v: &[A],
    w: &[A],
    order: usize,
) -> Vec<Vec<A>> {
    let mut coeffs: Vec<Vec<A>> = vec![v.to_vec()];
    if order >= 1 {
        coeffs.push(w.to_vec());
    }
    for k in 0..order.saturating_sub(1) {
        let next: Vec<A> = op
            .apply_vec(&coeffs[k])
            .into_iter()
            .map(|x| x.scale_ratio(1, (k as i64 + 1) * (k as i64 + 2)))
            .collect();
        coeffs.push(next);
    }
    coeffs
}

fn assemble_series<A: Algebra>(coeffs: &[Vec<A>], t: &A) -> Vec<A> {
    let dim = coeffs[0].len();
    (0..dim)
        .map(|i| {
            let mut acc = coeffs[0][i].clone();
            let mut tk = t.one_like();
            for c in coeffs.iter().skip(1) {
                tk = tk.mul(t);
                acc = acc.add(&tk.mul(&c[i]));
            }
            acc
        })
        .collect()
}

/// `e^{t L} mu` for a named operator on distributions: the finite linear
/// combination `sum_k (t^k/k!) L^k mu` up to the truncation order.
pub fn exp_flow_distribution<A: Algebra>(
    op: &LinearOperator,
    mu: &Distribution<A>,
    t: &A,
    order: usize,
) -> Result<Distribution<A>, FlowError> {
    let mut terms = Vec::with_capacity(order + 1);
    let mut current = mu.clone();
    let mut factorial: i64 = 1;
    for k in 0..=order {
        if k > 1 {
            factorial *= k as i64;
        }
        let coeff = t.powi(k as i64)?.scale_ratio(1, factorial);
        terms.push((coeff, current.clone()));
        if k < order {
            current = op.apply_dist(current);
        }
    }
    Ok(Distribution::LinComb(terms))
}

/// Second-order analogue with initial value `v` and initial speed `w`.
pub fn second_order_flow_distribution<A: Algebra>(
    op: &LinearOperator,
    v: &Distribution<A>,
    w: &Distribution<A>,
    t: &A,
    order: usize,
) -> Result<Distribution<A>, FlowError> {
    let mut terms = Vec::new();
    let mut v_cur = v.clone();
    let mut w_cur = w.clone();
    let mut factorial: i64 = 1;
    for k in 0..=order {
        if k > 1 {
            factorial *= k as i64;
        }
        let coeff = t.powi(k as i64)?.scale_ratio(1, factorial);
        if k % 2 == 0 {
            terms.push((coeff, v_cur.clone()));
            if k + 2 <= order {
                v_cur = op.apply_dist(v_cur);
            }
        } else {
            terms.push((coeff, w_cur.clone()));
            if k + 2 <= order {
                w_cur = op.apply_dist(w_cur);
            }
        }
    }
    Ok(Distribution::LinComb(terms))
}

/// Flows with closed-form time dependence, used for conjugation and
/// change-of-variables checks.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFlow {
    Identity(usize),
    /// `F_t(x) = x + t v`.
    Translation(Vec<f64>),
    /// `F_t(x) = e^{a t} x` componentwise.
    Scaling {
        dim: usize,
        rate: f64,
    },
}

impl ClosedFlow {
    pub fn dim(&self) -> usize {
        match self {
            ClosedFlow::Identity(d) => *d,
            ClosedFlow::Translation(v) => v.len(),
            ClosedFlow::Scaling { dim, .. } => *dim,
        }
    }

    /// Apply `F_t` with time and point in any algebra.
    pub fn apply<A: Algebra>(&self, t: &A, x: &[A]) -> Result<Vec<A>, FlowError> {
        if x.len() != self.dim() {
            return Err(FlowError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(match self {
            ClosedFlow::Identity(_) => x.to_vec(),
            ClosedFlow::Translation(v) => x
                .iter()
                .zip(v)
                .map(|(xi, vi)| xi.add(&t.scale_f64(*vi)))
                .collect(),
            ClosedFlow::Scaling { rate, .. } => {
                let factor = t
                    .scale_f64(*rate)
                    .analytic(crate::algebra::Primitive::Exp)?;
                x.iter().map(|xi| xi.mul(&factor)).collect()
            }
        })
    }

    /// The generating vector field (principal part of the action).
    pub fn field(&self) -> VectorField {
        use crate::smooth::{c, var};
        match self {
            ClosedFlow::Identity(d) => VectorField::new((0..*d).map(|_| c(0.0)).collect()),
            ClosedFlow::Translation(v) => VectorField::new(v.iter().map(|vi| c(*vi)).collect()),
            ClosedFlow::Scaling { dim, rate } => {
                VectorField::new((0..*dim).map(|i| c(*rate) * var(i)).collect())
            }
        }
    }

    /// Verify `F_t ∘ F_{-t} = id` on a small sample grid.
    pub fn inversion_check(&self) -> Result<(), FlowError> {
        let dim = self.dim();
        for &t in &[0.4, -0.9, 1.3] {
            let x: Vec<f64> = (0..dim).map(|i| 0.25 + 0.5 * i as f64).collect();
            let forward = self.apply(&t, &x)?;
            let back = self.apply(&(-t), &forward)?;
            if x.iter().zip(&back).any(|(a, b)| (a - b).abs() > 1e-10) {
                return Err(FlowError::InversionCheckFailed(x));
            }
        }
        Ok(())
    }
}

/// Conjugated solution `H_t(beta) = G_t ∘ beta ∘ F_t^{-1}` evaluated at a
/// point, with `F_t^{-1}` realized as the flow at `-t`.
pub fn conjugate_apply<A: Algebra>(
    g: &ClosedFlow,
    f: &ClosedFlow,
    beta: &[Expr],
    t: &A,
    x: &[A],
) -> Result<Vec<A>, FlowError> {
    let pulled = f.apply(&t.neg(), x)?;
    let mapped: Vec<A> = beta
        .iter()
        .map(|e| e.eval(&pulled))
        .collect::<Result<_, _>>()?;
    g.apply(t, &mapped)
}

/// Residual of the first-order evolution equation
/// `du/dt + D_X(u) = eta(u)` at `(t, m)`; `u` has variables `(t, x...)`.
pub fn pde_residual(
    u: &TestFunction,
    field: &VectorField,
    eta: Option<&Expr>,
    t: f64,
    m: &[f64],
) -> Result<f64, FlowError> {
    if u.dim() != field.dim() + 1 || m.len() != field.dim() {
        return Err(FlowError::DimensionMismatch {
            expected: field.dim() + 1,
            got: u.dim(),
        });
    }
    let mut point = vec![t];
    point.extend_from_slice(m);
    let mut du_dt_index = vec![0usize; u.dim()];
    du_dt_index[0] = 1;
    let du_dt = u.derivative(&du_dt_index, &point)?;
    let xi = field.principal_part(m)?;
    let mut transport = 0.0;
    for (axis, xi_i) in xi.iter().enumerate() {
        let mut idx = vec![0usize; u.dim()];
        idx[axis + 1] = 1;
        transport += xi_i * u.derivative(&idx, &point)?;
    }
    let source = match eta {
        Some(e) => e.eval(&[u.eval_f64(&point)?])?,
        None => 0.0,
    };
    Ok(du_dt + transport - source)
}

/// The substituted function `U(t, m) = u(t, F_t(m))` of a change of
/// variables along a flow.
pub struct ChangedVariables<'a> {
    u: &'a TestFunction,
    flow: &'a ClosedFlow,
}

/// Change of variables along `F`; fails if the flow does not invert.
pub fn change_of_variables<'a>(
    u: &'a TestFunction,
    flow: &'a ClosedFlow,
) -> Result<ChangedVariables<'a>, FlowError> {
    flow.inversion_check()?;
    if u.dim() != flow.dim() + 1 {
        return Err(FlowError::DimensionMismatch {
            expected: flow.dim() + 1,
            got: u.dim(),
        });
    }
    Ok(ChangedVariables { u, flow })
}

impl ChangedVariables<'_> {
    /// Evaluate `U` with time and point in any algebra.
    pub fn eval<A: Algebra>(&self, t: &A, m: &[A]) -> Result<A, FlowError> {
        let moved = self.flow.apply(t, m)?;
        let mut args = Vec::with_capacity(m.len() + 1);
        args.push(t.clone());
        args.extend(moved);
        Ok(self.u.eval(&args)?)
    }

    /// Residual of `dU/dt = eta(U)` (the zero-field equation) at `(t, m)`,
    /// with the time derivative taken through the flow by a jet.
    pub fn residual_zero_field(
        &self,
        eta: Option<&Expr>,
        t: f64,
        m: &[f64],
    ) -> Result<f64, FlowError> {
        let tj: Jet<f64> = Jet::variable(t, 1);
        let mj: Vec<Jet<f64>> = m.iter().map(|x| Jet::constant(*x, 1)).collect();
        let value = self.eval(&tj, &mj)?;
        let du_dt = value.coeff(1);
        let source = match eta {
            Some(e) => e.eval(&[value.coeff(0)])?,
            None => 0.0,
        };
        Ok(du_dt - source)
    }
}

/// Total time derivative along the flow versus the chain-rule expansion:
/// `d/dt U(t, F_t(m)) - [dU/dt + D_{Z x X} U](t, F_t(m))`.
pub fn chain_rule_residual(
    u: &TestFunction,
    flow: &ClosedFlow,
    t: f64,
    m: &[f64],
) -> Result<f64, FlowError> {
    let tj: Jet<f64> = Jet::variable(t, 1);
    let mj: Vec<Jet<f64>> = m.iter().map(|x| Jet::constant(*x, 1)).collect();
    let moved = flow.apply(&tj, &mj)?;
    let mut args = vec![tj.clone()];
    args.extend(moved.clone());
    let total = u.eval(&args)?.coeff(1);

    // evaluated at the transported point with frozen time
    let point: Vec<f64> = std::iter::once(t)
        .chain(moved.iter().map(|j| j.coeff(0)))
        .collect();
    let mut idx_t = vec![0usize; u.dim()];
    idx_t[0] = 1;
    let du_dt = u.derivative(&idx_t, &point)?;
    let xi = flow.field().principal_part(&point[1..])?;
    let mut direction = 0.0;
    for (axis, xi_i) in xi.iter().enumerate() {
        let mut idx = vec![0usize; u.dim()];
        idx[axis + 1] = 1;
        direction += xi_i * u.derivative(&idx, &point)?;
    }
    Ok(total - (du_dt + direction))
}

/// Naturality of directional derivatives along a homomorphism `H`:
/// `D_{X1}(u ∘ H) - D_{X2}(u) ∘ H` at the point `m`.
pub fn naturality_residual(
    u: &TestFunction,
    x1: &VectorField,
    x2: &VectorField,
    h: &[Expr],
    m: &[f64],
) -> Result<f64, FlowError> {
    // left side: differentiate u ∘ H along X1 using a jet through m
    let d: Jet<f64> = Jet::generator(&0.0, 1);
    let m_jets: Vec<Jet<f64>> = m.iter().map(|x| Jet::constant(*x, 1)).collect();
    let moved = infinitesimal_action(x1, &d, &m_jets)?;
    let h_of_moved: Vec<Jet<f64>> = h.iter().map(|e| e.eval(&moved)).collect::<Result<_, _>>()?;
    let lhs = u.eval(&h_of_moved)?.coeff(1);

    // right side: D_{X2}(u) evaluated at H(m)
    let h_m: Vec<f64> = h.iter().map(|e| e.eval(m)).collect::<Result<_, _>>()?;
    let rhs = x2.directional_derivative_fn(u).eval_f64(&h_m)?;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::{c, ratio, var};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn action_examples() {
        // xi = 1 at m = 0: X_d(0) = d
        let field = VectorField::scalar(c(1.0));
        let d: Jet<f64> = Jet::generator(&0.0, 1);
        let out = infinitesimal_action(&field, &d, &[Jet::constant(0.0, 1)]).unwrap();
        assert_eq!(out[0], d);
        // xi = x at m = 1: X_d(1) = 1 + d
        let linear = VectorField::scalar(var(0));
        let out = infinitesimal_action(&linear, &d, &[Jet::constant(1.0, 1)]).unwrap();
        assert_eq!(out[0].coeffs(), &[1.0, 1.0]);
    }

    #[test]
    fn action_rejects_non_nilpotents() {
        let field = VectorField::scalar(var(0));
        let not_nilpotent = Jet::variable(1.0_f64, 1); // scalar part 1
        assert!(matches!(
            infinitesimal_action(&field, &not_nilpotent, &[Jet::constant(1.0, 1)]),
            Err(FlowError::NotSquareZero)
        ));
        // order-2 generator: t^2 != 0
        let t: Jet<f64> = Jet::generator(&0.0, 2);
        assert!(matches!(
            infinitesimal_action(&field, &t, &[Jet::constant(1.0, 2)]),
            Err(FlowError::NotSquareZero)
        ));
    }

    #[test]
    fn actions_commute() {
        // X_{d1} ∘ X_{d2} = X_{d2} ∘ X_{d1} for xi = x^2 at m = 1
        let field = VectorField::scalar(var(0).pow(2));
        let m0 = SquareZero::constant(rat(1, 1), 2);
        let d1 = SquareZero::generator(&rat(0, 1), 2, 0);
        let d2 = SquareZero::generator(&rat(0, 1), 2, 1);
        let one_then_two = {
            let step = infinitesimal_action(&field, &d2, std::slice::from_ref(&m0)).unwrap();
            infinitesimal_action(&field, &d1, &step).unwrap()
        };
        let two_then_one = {
            let step = infinitesimal_action(&field, &d1, &[m0]).unwrap();
            infinitesimal_action(&field, &d2, &step).unwrap()
        };
        assert_eq!(one_then_two, two_then_one);
    }

    #[test]
    fn exponential_flow() {
        // xi = x, m = 1: flow is e^t = 1 + t + t^2/2 + t^3/6
        let field = VectorField::scalar(var(0));
        let flow = formal_flow(&field, &[rat(1, 1)], 3, 0.0).unwrap();
        assert_eq!(
            flow[0].coeffs(),
            &[rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6)]
        );
    }

    #[test]
    fn constant_flow_translates() {
        // xi = 3: flow is m + 3t with no higher terms
        let field = VectorField::scalar(ratio(3, 1));
        let flow = formal_flow(&field, &[rat(2, 1)], 3, 0.0).unwrap();
        assert_eq!(
            flow[0].coeffs(),
            &[rat(2, 1), rat(3, 1), rat(0, 1), rat(0, 1)]
        );
    }

    #[test]
    fn quadratic_flow_is_geometric() {
        // xi = x^2, m = 1: flow is 1/(1-t) = 1 + t + t^2 + t^3
        let field = VectorField::scalar(var(0).pow(2));
        let flow = formal_flow(&field, &[rat(1, 1)], 3, 0.0).unwrap();
        assert_eq!(
            flow[0].coeffs(),
            &[rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)]
        );
    }

    #[test]
    fn tangent_flow_oracle() {
        // xi = 1 + x^2, m = 0: flow is tan t = t + t^3/3 + 2 t^5/15
        let field = VectorField::scalar(ratio(1, 1) + var(0).pow(2));
        let flow = formal_flow(&field, &[rat(0, 1)], 6, 0.0).unwrap();
        let expected = [
            rat(0, 1),
            rat(1, 1),
            rat(0, 1),
            rat(1, 3),
            rat(0, 1),
            rat(2, 15),
            rat(0, 1),
        ];
        assert_eq!(flow[0].coeffs(), &expected);
    }

    #[test]
    fn collapse_route_matches_recurrence_route() {
        let fields = [
            VectorField::scalar(var(0)),
            VectorField::scalar(var(0).pow(2)),
            VectorField::scalar(ratio(1, 1) + var(0).pow(2)),
            VectorField::new(vec![var(1), var(0).pow(2) - var(1)]),
        ];
        for field in fields {
            let m: Vec<Rat> = (0..field.dim()).map(|i| rat(1 + i as i64, 2)).collect();
            let a = formal_flow(&field, &m, 5, 0.0).unwrap();
            let b = flow_taylor_recurrence(&field, &m, 5).unwrap();
            assert_eq!(a, b, "{:?}", field.xi());
        }
    }

    #[test]
    fn two_dimensional_rotation_flow() {
        // xi = (-y, x) at (1, 0): flow is (cos t, sin t)
        let field = VectorField::new(vec![-var(1), var(0)]);
        let flow = formal_flow(&field, &[rat(1, 1), rat(0, 1)], 4, 0.0).unwrap();
        assert_eq!(
            flow[0].coeffs(),
            &[rat(1, 1), rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 24)]
        );
        assert_eq!(
            flow[1].coeffs(),
            &[rat(0, 1), rat(1, 1), rat(0, 1), rat(-1, 6), rat(0, 1)]
        );
    }

    #[test]
    fn sum_zero_generators_compose_to_identity() {
        let fields = [
            VectorField::scalar(var(0)),
            VectorField::scalar(var(0).pow(2)),
            VectorField::scalar(ratio(1, 1) + var(0).pow(3)),
        ];
        for field in &fields {
            for n in 2..=5 {
                assert!(
                    sum_zero_composition_is_identity(field, &[rat(1, 2)], n).unwrap(),
                    "{:?} with {} generators",
                    field.xi(),
                    n
                );
            }
        }
    }

    #[test]
    fn exp_flow_nilpotent_matrix() {
        // L = [[0,1],[0,0]], v = (0,1): e^{tL} v = (t, 1) exactly
        let op = LinearOperator::Matrix(vec![vec![0.0, 1.0], vec![0.0, 0.0]]);
        let t: Jet<f64> = Jet::variable(0.0, 2);
        let v = [Jet::constant(0.0, 2), Jet::constant(1.0, 2)];
        let out = exp_flow_matrix(&op, &v, &t, 2);
        assert_eq!(out[0].coeffs(), &[0.0, 1.0, 0.0]);
        assert_eq!(out[1].coeffs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn exp_flow_at_zero_time_is_identity() {
        let op = LinearOperator::scalar(2.0);
        let out = exp_flow_matrix(&op, &[3.0], &0.0, 5);
        assert_eq!(out, vec![3.0]);
    }

    #[test]
    fn exp_flow_matches_formal_flow_of_linear_field() {
        // L = 1 acting on v = 1 equals the flow of xi(x) = x
        let op = LinearOperator::scalar(1.0);
        let t: Jet<f64> = Jet::variable(0.0, 3);
        let series = exp_flow_matrix(&op, &[Jet::constant(1.0, 3)], &t, 3);
        let field = VectorField::scalar(var(0));
        let flow = formal_flow(&field, &[rat(1, 1)], 3, 0.0).unwrap();
        for k in 0..=3 {
            assert!((series[0].coeff(k) - flow[0].coeff(k).scalar_f64()).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_coefficient_recurrence_is_exact() {
        // over the rationals the recurrence (k+1) c_{k+1} = L c_k is an
        // identity, not an approximation
        let op = LinearOperator::Matrix(vec![vec![0.5, -1.0], vec![2.0, 0.25]]);
        let v = [rat(1, 1), rat(-2, 1)];
        let coeffs = exp_series_coefficients(&op, &v, 8);
        for k in 0..8 {
            let lhs: Vec<Rat> = coeffs[k + 1]
                .iter()
                .map(|x| x.scale_ratio(k as i64 + 1, 1))
                .collect();
            let rhs = op.apply_vec(&coeffs[k]);
            assert_eq!(lhs, rhs, "order {k}");
        }
        // and the float route agrees to machine precision
        let float_coeffs = exp_series_coefficients(&op, &[1.0, -2.0], 8);
        for k in 0..=8 {
            for i in 0..2 {
                let exact = float_coeffs[k][i];
                let re = (exact - coeffs[k][i].scalar_f64()).abs();
                assert!(re <= 1e-15 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn interleaved_recurrence_is_exact() {
        let op = LinearOperator::Matrix(vec![vec![-1.0]]);
        let coeffs = second_order_coefficients(&op, &[rat(1, 1)], &[rat(-1, 2)], 9);
        for k in 0..8 {
            let lhs: Vec<Rat> = coeffs[k + 2]
                .iter()
                .map(|x| x.scale_ratio((k as i64 + 1) * (k as i64 + 2), 1))
                .collect();
            let rhs = op.apply_vec(&coeffs[k]);
            assert_eq!(lhs, rhs, "order {k}");
        }
    }

    #[test]
    fn cosine_series() {
        // L = -1, v = 1, w = 0: 1 - t^2/2 + t^4/24
        let op = LinearOperator::scalar(-1.0);
        let t: Jet<f64> = Jet::variable(0.0, 4);
        let v = [Jet::constant(1.0, 4)];
        let w = [Jet::constant(0.0, 4)];
        let out = second_order_flow_matrix(&op, &v, &w, &t, 4);
        let expected = [1.0, 0.0, -0.5, 0.0, 1.0 / 24.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((out[0].coeff(k) - e).abs() < 1e-15, "coeff {k}");
        }
    }

    #[test]
    fn second_order_initial_data() {
        let op = LinearOperator::scalar(3.0);
        let t: Jet<f64> = Jet::variable(0.0, 3);
        let out = second_order_flow_matrix(
            &op,
            &[Jet::constant(2.0, 3)],
            &[Jet::constant(-1.0, 3)],
            &t,
            3,
        );
        assert_eq!(out[0].coeff(0), 2.0);
        assert_eq!(out[0].coeff(1), -1.0);
    }

    #[test]
    fn conjugation_of_translation() {
        // G = identity, F = translation by 1: H_t(phi)(x) = phi(x - t)
        let g = ClosedFlow::Identity(1);
        let f = ClosedFlow::Translation(vec![1.0]);
        let beta = [var(0).pow(2)];
        for &(t, x) in &[(0.5_f64, 1.25_f64), (1.5, -0.75)] {
            let out = conjugate_apply(&g, &f, &beta, &t, &[x]).unwrap();
            assert!((out[0] - (x - t) * (x - t)).abs() < 1e-14);
        }
        // t = 0 gives beta back
        let out = conjugate_apply(&g, &f, &beta, &0.0, &[2.0]).unwrap();
        assert_eq!(out[0], 4.0);
    }

    #[test]
    fn liouville_conjugation_scales_tangent_vectors() {
        // F = E(t, d) = e^t d on the square-zero line, G = zero flow on M:
        // H_t(beta)(d) = beta(e^{-t} d), so a tangent vector (v, s) becomes
        // (v, e^{-t} s)
        let g = ClosedFlow::Identity(1);
        let f = ClosedFlow::Scaling { dim: 1, rate: 1.0 };
        let beta = [c(2.0) + c(3.0) * var(0)]; // the tangent vector 2 + 3d
        let t = 0.7_f64;
        let d: Jet<f64> = Jet::generator(&0.0, 1);
        let out = conjugate_apply(&g, &f, &beta, &Jet::constant(t, 1), &[d]).unwrap();
        assert!((out[0].coeff(0) - 2.0).abs() < 1e-14);
        assert!((out[0].coeff(1) - 3.0 * (-t).exp()).abs() < 1e-14);
    }

    #[test]
    fn transport_solution_has_zero_residual() {
        // u(t,x) = phi(x - t) solves du/dt + D_X u = 0 for translation
        let u = TestFunction::new(2, (var(1) - var(0)).pow(3));
        let field = VectorField::scalar(c(1.0));
        for &(t, x) in &[(0.0, 0.5), (0.7, -0.3), (1.2, 2.0)] {
            let r = pde_residual(&u, &field, None, t, &[x]).unwrap();
            assert!(r.abs() < 1e-10, "residual {r} at ({t},{x})");
        }
    }

    #[test]
    fn constant_u_is_always_a_solution() {
        let u = TestFunction::new(2, ratio(5, 1));
        let field = VectorField::scalar(var(0).pow(2));
        assert_eq!(pde_residual(&u, &field, None, 0.3, &[0.4]).unwrap(), 0.0);
    }

    #[test]
    fn growth_term_balances() {
        // u(t,x) = e^t phi(x - t) solves du/dt + D_X u = u
        let u = TestFunction::new(2, var(0).exp() * (var(1) - var(0)).pow(2));
        let field = VectorField::scalar(c(1.0));
        let eta = var(0); // eta(u) = u
        for &(t, x) in &[(0.2, 1.0), (0.9, -0.5)] {
            let r = pde_residual(&u, &field, Some(&eta), t, &[x]).unwrap();
            assert!(r.abs() < 1e-9, "residual {r}");
        }
    }

    #[test]
    fn change_of_variables_straightens_transport() {
        // u(t,x) = e^t phi(x - t) becomes U(t,x) = e^t phi(x) under the
        // translation flow, which solves dU/dt = U
        let u = TestFunction::new(2, var(0).exp() * (var(1) - var(0)).pow(2));
        let flow = ClosedFlow::Translation(vec![1.0]);
        let changed = change_of_variables(&u, &flow).unwrap();
        let eta = var(0);
        for &(t, x) in &[(0.0, 0.8), (0.6, -0.4), (1.1, 1.5)] {
            let r = changed.residual_zero_field(Some(&eta), t, &[x]).unwrap();
            assert!(r.abs() < 1e-9, "residual {r} at ({t},{x})");
        }
        // identity flow leaves u unchanged
        let id = ClosedFlow::Identity(1);
        let unchanged = change_of_variables(&u, &id).unwrap();
        let direct = u.eval_f64(&[0.3, 0.9]).unwrap();
        assert_eq!(unchanged.eval(&0.3, &[0.9]).unwrap(), direct);
    }

    #[test]
    fn chain_rule_holds_along_flows() {
        let u = TestFunction::new(2, var(0) * var(1).pow(2) + var(1).sin());
        for flow in [
            ClosedFlow::Translation(vec![0.8]),
            ClosedFlow::Scaling { dim: 1, rate: -0.5 },
        ] {
            for &(t, m) in &[(0.3, 0.7), (1.0, -0.2)] {
                let r = chain_rule_residual(&u, &flow, t, &[m]).unwrap();
                assert!(r.abs() <= 1e-10, "{flow:?} at ({t},{m}): {r}");
            }
        }
    }

    #[test]
    fn naturality_of_directional_derivatives() {
        // H(x) = e^x intertwines translation (xi = 1) with scaling (xi = y)
        let u = TestFunction::new(1, var(0).pow(3));
        let x1 = VectorField::scalar(c(1.0));
        let x2 = VectorField::scalar(var(0));
        let h = [var(0).exp()];
        for &m in &[0.0, 0.4, -1.1] {
            let r = naturality_residual(&u, &x1, &x2, &h, &[m]).unwrap();
            assert!(r.abs() < 1e-9, "residual {r} at {m}");
        }
    }

    #[test]
    fn flow_conditions_hold_exactly() {
        let fields = [
            VectorField::scalar(var(0)),
            VectorField::scalar(var(0).pow(2)),
            VectorField::scalar(ratio(1, 1) + var(0).pow(2)),
            VectorField::new(vec![var(1), -var(0)]),
        ];
        for field in &fields {
            let m: Vec<Rat> = (0..field.dim()).map(|i| rat(1 - 2 * i as i64, 3)).collect();
            assert!(
                check_flow_equation(field, &m, 5).unwrap(),
                "{:?}",
                field.xi()
            );
            assert!(
                check_flow_composition(field, &m, 3).unwrap(),
                "{:?}",
                field.xi()
            );
            assert!(
                check_action_flow_exchange(field, &m, 4).unwrap(),
                "{:?}",
                field.xi()
            );
        }
    }

    #[test]
    fn linearity_validation() {
        assert!(
            LinearOperator::Matrix(vec![vec![1.0, 2.0], vec![0.0, -1.0]])
                .validate_linearity()
                .is_ok()
        );
    }

    #[test]
    fn exp_flow_on_distributions_builds_laplacian_tower() {
        use crate::distribution::{dirac, pair, PairConfig};
        // e^{t lap} delta(0) truncated at order 2 pairs to
        // phi(0) + t phi''(0) + t^2/2 phi''''(0)
        let t: Jet<f64> = Jet::generator(&0.0, 2);
        let series = exp_flow_distribution(
            &LinearOperator::Laplacian,
            &dirac(vec![t.zero_like()]),
            &t,
            2,
        )
        .unwrap();
        let phi = crate::smooth::TestFunction::new(1, var(0).pow(4) + var(0).pow(2) * ratio(3, 1));
        let out = pair(&series, &phi, &PairConfig::default()).unwrap();
        assert_eq!(out.coeffs(), &[0.0, 6.0, 12.0]);
    }

    #[test]
    fn second_order_flow_on_distributions() {
        use crate::distribution::{dirac, pair, Distribution, PairConfig};
        // lap with initial value delta(0) and zero speed, order 2:
        // delta(0) + (t^2/2) lap delta(0)
        let t: Jet<f64> = Jet::generator(&0.0, 2);
        let zero_like = t.zero_like();
        let v = dirac(vec![zero_like.clone()]);
        let w = Distribution::LinComb(vec![(zero_like.clone(), v.clone())]);
        let series =
            second_order_flow_distribution(&LinearOperator::Laplacian, &v, &w, &t, 2).unwrap();
        let phi = crate::smooth::TestFunction::new(1, var(0).pow(2) + ratio(1, 1));
        let out = pair(&series, &phi, &PairConfig::default()).unwrap();
        // phi(0) + 0 t + (t^2/2) phi''(0) = 1 + t^2
        assert_eq!(out.coeffs(), &[1.0, 0.0, 1.0]);
    }
}
