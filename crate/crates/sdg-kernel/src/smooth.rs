//! Smooth test functions as algebra-generic expression trees.
//!
//! A [`TestFunction`] evaluates over any [`Algebra`]: plain floats give
//! ordinary values, jets give exact Taylor coefficients (hence exact
//! derivatives and Laplacians), square-zero elements drive formal flows.
//! Expressions also differentiate symbolically, which is what the
//! distribution pairing uses to push derivatives onto test functions.

use crate::algebra::{Algebra, AlgebraError, Jet, Primitive, Rat};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("expected {expected} arguments, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error("variable x{0} is out of range")]
    UnknownVariable(usize),
    #[error("arguments live in different rings")]
    MixedShapes,
}

/// A smooth scalar expression in variables `x0..x_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// An exact rational constant, kept separate so exact-mode evaluation
    /// stays exact.
    Ratio(i64, i64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    PowInt(Box<Expr>, i32),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// `bump(e) = exp(-1/(1-e^2))` where `|e| < 1`, extended by zero.
    Bump(Box<Expr>),
}

pub fn var(i: usize) -> Expr {
    Expr::Var(i)
}

pub fn c(x: f64) -> Expr {
    Expr::Const(x)
}

pub fn ratio(num: i64, den: i64) -> Expr {
    Expr::Ratio(num, den)
}

impl Expr {
    pub fn pow(self, k: i32) -> Expr {
        Expr::PowInt(Box::new(self), k)
    }
    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }
    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }
    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }
    pub fn bump(self) -> Expr {
        Expr::Bump(Box::new(self))
    }

    fn is_const_zero(&self) -> bool {
        matches!(self, Expr::Const(x) if *x == 0.0) || matches!(self, Expr::Ratio(0, _))
    }

    fn is_const_one(&self) -> bool {
        matches!(self, Expr::Const(x) if *x == 1.0) || matches!(self, Expr::Ratio(n, d) if n == d)
    }

    /// Evaluate over any algebra. All of `vars` must share one shape;
    /// constants are lifted from the first argument.
    pub fn eval<A: Algebra>(&self, vars: &[A]) -> Result<A, EvalError> {
        let model = vars.first().ok_or(EvalError::DimensionMismatch {
            expected: 1,
            got: 0,
        })?;
        self.eval_inner(vars, model)
    }

    fn eval_inner<A: Algebra>(&self, vars: &[A], model: &A) -> Result<A, EvalError> {
        match self {
            Expr::Const(x) => Ok(model.lift_f64(*x)),
            Expr::Ratio(n, d) => Ok(model.lift_ratio(*n, *d)),
            Expr::Var(i) => vars.get(*i).cloned().ok_or(EvalError::UnknownVariable(*i)),
            Expr::Add(a, b) => Ok(a.eval_inner(vars, model)?.add(&b.eval_inner(vars, model)?)),
            Expr::Sub(a, b) => Ok(a.eval_inner(vars, model)?.sub(&b.eval_inner(vars, model)?)),
            Expr::Mul(a, b) => {
                // A genuine zero factor annihilates the other side without
                // evaluating it; this realizes extension-by-zero for
                // products like bump * rational-factor outside the support.
                let lhs = a.eval_inner(vars, model)?;
                if lhs.is_zero() {
                    return Ok(lhs);
                }
                let rhs = b.eval_inner(vars, model)?;
                Ok(lhs.mul(&rhs))
            }
            Expr::Div(a, b) => {
                let lhs = a.eval_inner(vars, model)?;
                if lhs.is_zero() {
                    return Ok(lhs);
                }
                let rhs = b.eval_inner(vars, model)?;
                Ok(lhs.mul(&rhs.invert()?))
            }
            Expr::Neg(a) => Ok(a.eval_inner(vars, model)?.neg()),
            Expr::PowInt(a, k) => Ok(a.eval_inner(vars, model)?.powi(*k as i64)?),
            Expr::Exp(a) => Ok(a.eval_inner(vars, model)?.analytic(Primitive::Exp)?),
            Expr::Sin(a) => Ok(a.eval_inner(vars, model)?.analytic(Primitive::Sin)?),
            Expr::Cos(a) => Ok(a.eval_inner(vars, model)?.analytic(Primitive::Cos)?),
            Expr::Bump(a) => {
                let e = a.eval_inner(vars, model)?;
                let u = e.mul(&e);
                if u.scalar_f64() >= 1.0 {
                    return Ok(model.zero_like());
                }
                let v = model.one_like().sub(&u);
                Ok(v.invert()?.neg().analytic(Primitive::Exp)?)
            }
        }
    }

    /// Symbolic partial derivative with respect to `x_var`.
    pub fn diff(&self, var: usize) -> Expr {
        match self {
            Expr::Const(_) | Expr::Ratio(_, _) => c(0.0),
            Expr::Var(i) => {
                if *i == var {
                    c(1.0)
                } else {
                    c(0.0)
                }
            }
            Expr::Add(a, b) => add(a.diff(var), b.diff(var)),
            Expr::Sub(a, b) => sub(a.diff(var), b.diff(var)),
            Expr::Mul(a, b) => add(
                mul(a.diff(var), (**b).clone()),
                mul((**a).clone(), b.diff(var)),
            ),
            Expr::Div(a, b) => {
                // (a/b)' = a'/b - a b'/b^2
                let term1 = div(a.diff(var), (**b).clone());
                let term2 = div(mul((**a).clone(), b.diff(var)), (**b).clone().pow(2));
                sub(term1, term2)
            }
            Expr::Neg(a) => neg(a.diff(var)),
            Expr::PowInt(a, k) => {
                if *k == 0 {
                    return c(0.0);
                }
                mul(mul(c(*k as f64), (**a).clone().pow(*k - 1)), a.diff(var))
            }
            Expr::Exp(a) => mul(self.clone(), a.diff(var)),
            Expr::Sin(a) => mul((**a).clone().cos(), a.diff(var)),
            Expr::Cos(a) => neg(mul((**a).clone().sin(), a.diff(var))),
            Expr::Bump(a) => {
                // bump(e)' = bump(e) * (-2 e e') / (1 - e^2)^2; the leading
                // bump factor keeps the extension-by-zero semantics.
                let e = (**a).clone();
                let rational = div(
                    mul(mul(c(2.0), e.clone()), a.diff(var)),
                    sub(c(1.0), e.pow(2)).pow(2),
                );
                mul(self.clone(), neg(rational))
            }
        }
    }

    /// Substitute `replacements[i]` for `Var(i)`.
    pub fn subst(&self, replacements: &[Expr]) -> Result<Expr, EvalError> {
        Ok(match self {
            Expr::Const(_) | Expr::Ratio(_, _) => self.clone(),
            Expr::Var(i) => replacements
                .get(*i)
                .cloned()
                .ok_or(EvalError::UnknownVariable(*i))?,
            Expr::Add(a, b) => add(a.subst(replacements)?, b.subst(replacements)?),
            Expr::Sub(a, b) => sub(a.subst(replacements)?, b.subst(replacements)?),
            Expr::Mul(a, b) => mul(a.subst(replacements)?, b.subst(replacements)?),
            Expr::Div(a, b) => div(a.subst(replacements)?, b.subst(replacements)?),
            Expr::Neg(a) => neg(a.subst(replacements)?),
            Expr::PowInt(a, k) => Expr::PowInt(Box::new(a.subst(replacements)?), *k),
            Expr::Exp(a) => a.subst(replacements)?.exp(),
            Expr::Sin(a) => a.subst(replacements)?.sin(),
            Expr::Cos(a) => a.subst(replacements)?.cos(),
            Expr::Bump(a) => a.subst(replacements)?.bump(),
        })
    }

    /// Upper bound on the polynomial degree, or `None` if not polynomial.
    pub fn degree_bound(&self) -> Option<usize> {
        match self {
            Expr::Const(_) | Expr::Ratio(_, _) => Some(0),
            Expr::Var(_) => Some(1),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.degree_bound()?.max(b.degree_bound()?)),
            Expr::Mul(a, b) => Some(a.degree_bound()? + b.degree_bound()?),
            Expr::Neg(a) => a.degree_bound(),
            Expr::PowInt(a, k) => {
                if *k < 0 {
                    None
                } else {
                    Some(a.degree_bound()? * *k as usize)
                }
            }
            _ => None,
        }
    }
}

// Smart constructors pruning obvious zeros and ones; keeps the trees from
// symbolic differentiation small.
pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    if a.is_const_zero() {
        return b;
    }
    if b.is_const_zero() {
        return a;
    }
    Expr::Add(Box::new(a), Box::new(b))
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_const_zero() {
        return a;
    }
    if a.is_const_zero() {
        return neg(b);
    }
    Expr::Sub(Box::new(a), Box::new(b))
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_const_zero() || b.is_const_zero() {
        return c(0.0);
    }
    if a.is_const_one() {
        return b;
    }
    if b.is_const_one() {
        return a;
    }
    Expr::Mul(Box::new(a), Box::new(b))
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    if a.is_const_zero() {
        return c(0.0);
    }
    if b.is_const_one() {
        return a;
    }
    Expr::Div(Box::new(a), Box::new(b))
}

pub(crate) fn neg(a: Expr) -> Expr {
    if a.is_const_zero() {
        return a;
    }
    Expr::Neg(Box::new(a))
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        add(self, rhs)
    }
}
impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        sub(self, rhs)
    }
}
impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        mul(self, rhs)
    }
}
impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        neg(self)
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(_, _) | Expr::Sub(_, _) => 1,
        Expr::Mul(_, _) | Expr::Div(_, _) => 2,
        Expr::Neg(_) => 3,
        Expr::PowInt(_, _) => 4,
        _ => 5,
    }
}

fn fmt_child(e: &Expr, parent: u8, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
    if precedence(e) < parent {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        match self {
            Expr::Const(x) => {
                if *x < 0.0 {
                    write!(f, "({x})")
                } else {
                    write!(f, "{x}")
                }
            }
            Expr::Ratio(n, d) => {
                if *d == 1 {
                    if *n < 0 {
                        write!(f, "({n})")
                    } else {
                        write!(f, "{n}")
                    }
                } else {
                    write!(f, "({n}/{d})")
                }
            }
            Expr::Var(i) => {
                if *i < NAMES.len() {
                    write!(f, "{}", NAMES[*i])
                } else {
                    write!(f, "x{i}")
                }
            }
            Expr::Add(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " + ")?;
                fmt_child(b, 1, f)
            }
            Expr::Sub(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, " - ")?;
                fmt_child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, " * ")?;
                fmt_child(b, 2, f)
            }
            Expr::Div(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, " / ")?;
                fmt_child(b, 3, f)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, 4, f)
            }
            Expr::PowInt(a, k) => {
                fmt_child(a, 5, f)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Bump(a) => write!(f, "bump({a})"),
        }
    }
}

/// An affine map `x -> M x + b` between coordinate spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    /// `to_dim` rows by `from_dim` columns.
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Self {
        assert_eq!(matrix.len(), offset.len());
        AffineMap { matrix, offset }
    }

    /// Orthogonal projection onto the first `to` coordinates.
    pub fn coordinate_projection(from: usize, to: usize) -> Self {
        assert!(to <= from);
        let matrix = (0..to)
            .map(|i| (0..from).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        AffineMap {
            matrix,
            offset: vec![0.0; to],
        }
    }

    /// The homothety `x -> t x`.
    pub fn scaling(dim: usize, t: f64) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { t } else { 0.0 }).collect())
            .collect();
        AffineMap {
            matrix,
            offset: vec![0.0; dim],
        }
    }

    pub fn translation(v: &[f64]) -> Self {
        let dim = v.len();
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        AffineMap {
            matrix,
            offset: v.to_vec(),
        }
    }

    pub fn from_dim(&self) -> usize {
        self.matrix.first().map_or(0, |row| row.len())
    }

    pub fn to_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply<A: Algebra>(&self, x: &[A]) -> Vec<A> {
        let model = &x[0];
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| {
                let mut acc = model.lift_f64(*b);
                for (m, xi) in row.iter().zip(x) {
                    if *m != 0.0 {
                        acc = acc.add(&xi.scale_f64(*m));
                    }
                }
                acc
            })
            .collect()
    }

    /// `phi ∘ self` as an expression in the source coordinates.
    pub fn compose_expr(&self, phi: &Expr) -> Result<Expr, EvalError> {
        let replacements: Vec<Expr> = self
            .matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| {
                let mut acc = c(*b);
                for (j, m) in row.iter().enumerate() {
                    acc = add(acc, mul(c(*m), var(j)));
                }
                acc
            })
            .collect();
        phi.subst(&replacements)
    }

    /// Proper maps pull compact sets back to compact sets; for an affine
    /// map this means the linear part is injective.
    pub fn is_proper(&self) -> bool {
        let from = self.from_dim();
        if self.to_dim() < from {
            return false;
        }
        // rank via Gaussian elimination on the transpose
        let mut m: Vec<Vec<f64>> = (0..from)
            .map(|j| self.matrix.iter().map(|row| row[j]).collect())
            .collect();
        let cols = self.to_dim();
        let mut rank = 0;
        for col in 0..cols {
            if rank == from {
                break;
            }
            let (best, best_val) = (rank..from)
                .map(|r| (r, m[r][col].abs()))
                .fold((rank, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best_val < 1e-12 {
                continue;
            }
            m.swap(rank, best);
            let pivot = m[rank][col];
            for r in (rank + 1)..from {
                let factor = m[r][col] / pivot;
                for cc in col..cols {
                    m[r][cc] -= factor * m[rank][cc];
                }
            }
            rank += 1;
        }
        rank == from
    }
}

/// A smooth function of 1-3 variables with an optional compact-support
/// radius hint used when integrating over unbounded domains.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    dim: usize,
    expr: Expr,
    support: Option<f64>,
    name: String,
}

impl TestFunction {
    pub fn new(dim: usize, expr: Expr) -> Self {
        TestFunction {
            dim,
            expr,
            support: None,
            name: String::new(),
        }
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support = Some(radius);
        self
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn support(&self) -> Option<f64> {
        self.support
    }

    pub fn name(&self) -> &str {
        if self.name.is_empty() {
            "anonymous"
        } else {
            &self.name
        }
    }

    /// Evaluate over any algebra; scalar arguments give plain evaluation.
    pub fn eval<A: Algebra>(&self, x: &[A]) -> Result<A, EvalError> {
        if x.len() != self.dim {
            return Err(EvalError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if x.windows(2).any(|w| !w[0].same_shape(&w[1])) {
            return Err(EvalError::MixedShapes);
        }
        self.expr.eval(x)
    }

    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, EvalError> {
        self.eval(x)
    }

    /// Mixed partial derivative via jet evaluation.
    ///
    /// All but one axis are peeled off symbolically; the final axis is
    /// read off a jet of exactly the required order, so there is no
    /// step-size error anywhere.
    pub fn derivative(&self, multi_index: &[usize], x0: &[f64]) -> Result<f64, EvalError> {
        if multi_index.len() != self.dim || x0.len() != self.dim {
            return Err(EvalError::DimensionMismatch {
                expected: self.dim,
                got: multi_index.len().max(x0.len()),
            });
        }
        let mut axes: Vec<usize> = (0..self.dim).filter(|&i| multi_index[i] > 0).collect();
        if axes.is_empty() {
            return self.eval_f64(x0);
        }
        let jet_axis = axes.pop().unwrap();
        let mut expr = self.expr.clone();
        for &axis in &axes {
            for _ in 0..multi_index[axis] {
                expr = expr.diff(axis);
            }
        }
        let order = multi_index[jet_axis];
        let args: Vec<Jet<f64>> = (0..self.dim)
            .map(|i| {
                if i == jet_axis {
                    Jet::variable(x0[i], order)
                } else {
                    Jet::constant(x0[i], order)
                }
            })
            .collect();
        let jet = expr.eval(&args)?;
        let mut factorial = 1.0;
        for k in 2..=order {
            factorial *= k as f64;
        }
        Ok(jet.coeff(order) * factorial)
    }

    /// Sum of the pure second partials, via one jet per axis.
    pub fn laplacian(&self, x0: &[f64]) -> Result<f64, EvalError> {
        let mut total = 0.0;
        for axis in 0..self.dim {
            let args: Vec<Jet<f64>> = (0..self.dim)
                .map(|i| {
                    if i == axis {
                        Jet::variable(x0[i], 2)
                    } else {
                        Jet::constant(x0[i], 2)
                    }
                })
                .collect();
            total += self.expr.eval(&args)?.coeff(2) * 2.0;
        }
        Ok(total)
    }

    /// The symbolic Laplacian as a new test function.
    pub fn laplacian_fn(&self) -> TestFunction {
        let mut acc = c(0.0);
        for axis in 0..self.dim {
            acc = add(acc, self.expr.diff(axis).diff(axis));
        }
        TestFunction {
            dim: self.dim,
            expr: acc,
            support: self.support,
            name: format!("lap({})", self.name()),
        }
    }

    /// Symbolic partial derivative as a new test function.
    pub fn diff_fn(&self, axis: usize) -> TestFunction {
        TestFunction {
            dim: self.dim,
            expr: self.expr.diff(axis),
            support: self.support,
            name: format!("d{}({})", axis, self.name()),
        }
    }

    /// Pointwise product `g * phi`.
    pub fn product(&self, g: &TestFunction) -> TestFunction {
        assert_eq!(self.dim, g.dim, "product needs matching dimensions");
        let support = match (self.support, g.support) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        TestFunction {
            dim: self.dim,
            expr: mul(self.expr.clone(), g.expr.clone()),
            support,
            name: format!("{}*{}", g.name(), self.name()),
        }
    }

    /// `phi ∘ map`, a function of the map's source coordinates.
    pub fn compose_affine(&self, map: &AffineMap) -> Result<TestFunction, EvalError> {
        if map.to_dim() != self.dim {
            return Err(EvalError::DimensionMismatch {
                expected: self.dim,
                got: map.to_dim(),
            });
        }
        Ok(TestFunction {
            dim: map.from_dim(),
            expr: map.compose_expr(&self.expr)?,
            support: None,
            name: format!("{}∘map", self.name()),
        })
    }

    /// Exact polynomial coefficients in one variable, or an error for
    /// non-polynomial expressions.
    pub fn poly_coeffs(&self) -> Result<Vec<Rat>, EvalError> {
        if self.dim != 1 {
            return Err(EvalError::DimensionMismatch {
                expected: 1,
                got: self.dim,
            });
        }
        let degree = self.expr.degree_bound().ok_or(EvalError::NotPolynomial)?;
        let x = Jet::variable(Rat::from_int(0), degree.max(1));
        let jet = self.expr.eval(&[x])?;
        // the Taylor coefficients at 0 are the polynomial coefficients
        Ok((0..=degree).map(|k| jet.coeff(k)).collect())
    }

    /// The Hadamard quotient `psi` with `phi(x) = phi(0) + x * psi(x)`,
    /// explicit for polynomials.
    pub fn hadamard_quotient(&self) -> Result<TestFunction, EvalError> {
        let coeffs = self.poly_coeffs()?;
        let mut expr = c(0.0);
        for (k, coeff) in coeffs.iter().enumerate().skip(1) {
            let num = i64::try_from(coeff.inner().numer().clone())
                .map_err(|_| EvalError::NotPolynomial)?;
            let den = i64::try_from(coeff.inner().denom().clone())
                .map_err(|_| EvalError::NotPolynomial)?;
            if num == 0 {
                continue;
            }
            let monomial = if k == 1 {
                ratio(num, den)
            } else {
                mul(ratio(num, den), var(0).pow(k as i32 - 1))
            };
            expr = add(expr, monomial);
        }
        Ok(TestFunction::new(1, expr).named(&format!("hadamard({})", self.name())))
    }
}

impl std::fmt::Display for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.expr)
    }
}

/// The built-in battery of test functions for a given dimension.
///
/// The first six are the ones identity checks quantify over: two pure
/// polynomials, a mixed polynomial, a gaussian, a damped polynomial, and
/// a compactly supported bump (support radius 2, so every integration
/// domain used by the suite stays inside the analytic region). Gaussians
/// have no compact support and are flagged as stand-ins in reports.
pub fn battery(dim: usize) -> Vec<TestFunction> {
    match dim {
        1 => vec![
            TestFunction::new(1, var(0).pow(2)).named("x^2"),
            TestFunction::new(1, var(0).pow(3) - ratio(2, 1) * var(0)).named("x^3-2x"),
            TestFunction::new(1, var(0).pow(4) - var(0).pow(2) + ratio(1, 1)).named("x^4-x^2+1"),
            TestFunction::new(1, (-var(0).pow(2)).exp()).named("gauss"),
            TestFunction::new(1, var(0).pow(2) * (-var(0).pow(2)).exp()).named("x^2*gauss"),
            TestFunction::new(1, (var(0) * ratio(1, 2)).bump())
                .with_support(2.0)
                .named("bump(x/2)"),
            TestFunction::new(1, ratio(1, 1)).named("one"),
            TestFunction::new(1, var(0).sin()).named("sin"),
        ],
        2 => {
            let r2 = var(0).pow(2) + var(1).pow(2);
            vec![
                TestFunction::new(2, var(0).pow(2) + var(1).pow(2)).named("x^2+y^2"),
                TestFunction::new(2, var(0).pow(2) * var(1) + var(0)).named("x^2y+x"),
                TestFunction::new(2, var(0) * var(1) + var(1).pow(3)).named("xy+y^3"),
                TestFunction::new(2, (-r2.clone()).exp()).named("gauss"),
                TestFunction::new(2, (var(0) + var(1).pow(2)) * (-r2.clone()).exp())
                    .named("(x+y^2)*gauss"),
                TestFunction::new(2, (r2 * ratio(1, 4)).bump())
                    .with_support(2.0)
                    .named("bump(r^2/4)"),
                TestFunction::new(2, ratio(1, 1)).named("one"),
            ]
        }
        3 => {
            let r2 = var(0).pow(2) + var(1).pow(2) + var(2).pow(2);
            vec![
                TestFunction::new(3, var(0).pow(2) + var(1).pow(2) + var(2).pow(2))
                    .named("x^2+y^2+z^2"),
                TestFunction::new(3, var(0).pow(2) * var(2) + var(1)).named("x^2z+y"),
                TestFunction::new(3, var(0) * var(1) * var(2) + var(0).pow(2)).named("xyz+x^2"),
                TestFunction::new(3, (-r2.clone()).exp()).named("gauss"),
                TestFunction::new(3, (var(0).pow(2) + var(1) * var(2)) * (-r2.clone()).exp())
                    .named("(x^2+yz)*gauss"),
                TestFunction::new(3, (r2 * ratio(1, 4)).bump())
                    .with_support(2.0)
                    .named("bump(r^2/4)"),
                TestFunction::new(3, ratio(1, 1)).named("one"),
            ]
        }
        _ => panic!("battery is defined for dimensions 1-3"),
    }
}

/// Five-point central finite difference, the independent cross-check for
/// jet derivatives.
pub fn central_diff5(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}
