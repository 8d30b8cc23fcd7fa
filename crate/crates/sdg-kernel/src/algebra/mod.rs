//! Commutative-algebra arithmetic shared by the whole crate.
//!
//! Every quantity in this library is computed inside some commutative
//! algebra: plain floats, exact rationals, truncated polynomial rings
//! ([`Jet`]), or multi-generator square-zero rings ([`SquareZero`]).
//! The [`Algebra`] trait captures the operations the rest of the crate
//! needs, and the jet/square-zero types are generic over their
//! coefficients, so towers like `Jet<Jet<Rat>>` or `SquareZero<Jet<Rat>>`
//! work out of the box. That is what makes derivatives exact here:
//! evaluating a smooth expression at `x0 + t` (with `t` a jet generator)
//! yields the Taylor coefficients with no finite-difference error.

mod jet;
mod rational;
mod square_zero;

pub use jet::Jet;
pub use rational::Rat;
pub use square_zero::{SquareZero, SumZeroQuotient};

use thiserror::Error;

/// Errors from algebra arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("jet order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
    #[error("element is not nilpotent (constant term {0} != 0)")]
    NotNilpotent(f64),
    #[error("coefficients are not symmetric: subsets {0:#b} and {1:#b} differ")]
    NotSymmetric(usize, usize),
    #[error("element is not invertible (scalar part ~ {0})")]
    NotInvertible(f64),
    #[error("{0} is not available in this coefficient ring at this point")]
    UnsupportedAnalytic(String),
    #[error("negative power of a non-invertible element")]
    NegativePower,
}

/// Analytic primitives understood by every algebra.
///
/// Each primitive must be able to report its derivative stream at the
/// scalar part of an element; nilpotent corrections are then summed by
/// the generic truncated Taylor rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Exp,
    Sin,
    Cos,
    /// x -> 1/x
    Recip,
    Sqrt,
    /// x -> x^p for a real exponent (requires positive scalar part)
    PowReal(f64),
}

impl Primitive {
    fn name(&self) -> &'static str {
        match self {
            Primitive::Exp => "exp",
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
            Primitive::Recip => "recip",
            Primitive::Sqrt => "sqrt",
            Primitive::PowReal(_) => "pow",
        }
    }
}

/// A commutative ring containing the rationals, with a scalar part and a
/// nilpotent remainder of known truncation order.
///
/// `lift_*` methods build constants *of the same shape* as `self`; this
/// is how generic code embeds numbers into a jet of the right order or a
/// square-zero ring with the right generator count.
pub trait Algebra: Clone + PartialEq + std::fmt::Debug {
    fn lift_f64(&self, x: f64) -> Self;
    fn lift_ratio(&self, num: i64, den: i64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// The scalar part of the element, collapsed through any nesting.
    fn scalar_f64(&self) -> f64;
    /// Truncation bound: the nilpotent part to the power `bound + 1` is zero.
    fn nilpotent_order(&self) -> usize;
    /// Same shape as `self` with the (outermost) nilpotent part dropped.
    fn scalar_like(&self) -> Self;
    /// Derivative stream `f, f', f'', ...` of `prim` at the scalar part.
    fn prim_derivs(&self, prim: Primitive, count: usize) -> Result<Vec<Self>, AlgebraError>;
    fn is_zero(&self) -> bool;
    /// Largest coefficient magnitude, collapsed through any nesting.
    fn max_abs(&self) -> f64;
    /// Whether two elements live in the same ring (same truncation
    /// orders and generator counts, through any nesting).
    fn same_shape(&self, other: &Self) -> bool;

    fn zero_like(&self) -> Self {
        self.lift_ratio(0, 1)
    }
    fn one_like(&self) -> Self {
        self.lift_ratio(1, 1)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Truncated Taylor evaluation of an analytic primitive.
    fn analytic(&self, prim: Primitive) -> Result<Self, AlgebraError> {
        let order = self.nilpotent_order();
        let derivs = self.prim_derivs(prim, order + 1)?;
        let nil = self.sub(&self.scalar_like());
        Ok(taylor_from_derivs(&derivs, &nil))
    }

    /// Multiplicative inverse; requires an invertible scalar part.
    fn invert(&self) -> Result<Self, AlgebraError> {
        self.analytic(Primitive::Recip)
    }

    /// Integer power. Negative exponents go through [`Algebra::invert`].
    fn powi(&self, k: i64) -> Result<Self, AlgebraError> {
        if k < 0 {
            return self.invert()?.powi(-k);
        }
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Multiply by the rational `num/den`.
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.mul(&self.lift_ratio(num, den))
    }

    fn scale_f64(&self, x: f64) -> Self {
        self.mul(&self.lift_f64(x))
    }
}

/// `sum_k derivs[k]/k! * nil^k`, the shared Taylor rule.
pub(crate) fn taylor_from_derivs<A: Algebra>(derivs: &[A], nil: &A) -> A {
    let mut acc = derivs[0].clone();
    let mut pow = nil.one_like();
    let mut factorial: i64 = 1;
    for (k, d) in derivs.iter().enumerate().skip(1) {
        pow = pow.mul(nil);
        factorial = factorial.saturating_mul(k as i64);
        if factorial == i64::MAX {
            // beyond 20! the rational shortcut overflows; build 1/k! stepwise
            let mut inv = nil.one_like();
            for j in 1..=k as i64 {
                inv = inv.mul(&nil.lift_ratio(1, j));
            }
            acc = acc.add(&d.mul(&pow).mul(&inv));
        } else {
            acc = acc.add(&d.mul(&pow).scale_ratio(1, factorial));
        }
    }
    acc
}

/// Derivative stream of a primitive at a plain scalar, shared by `f64`
/// and [`Rat`]. `recurse` applies a primitive to the scalar itself.
pub(crate) fn scalar_prim_derivs<A: Algebra>(
    at: &A,
    prim: Primitive,
    count: usize,
    direct: impl Fn(Primitive, &A) -> Result<A, AlgebraError>,
) -> Result<Vec<A>, AlgebraError> {
    let mut out = Vec::with_capacity(count);
    match prim {
        Primitive::Exp => {
            let e = direct(Primitive::Exp, at)?;
            for _ in 0..count {
                out.push(e.clone());
            }
        }
        Primitive::Sin | Primitive::Cos => {
            let s = direct(Primitive::Sin, at)?;
            let c = direct(Primitive::Cos, at)?;
            // cycle sin -> cos -> -sin -> -cos
            let cycle = [s.clone(), c.clone(), s.neg(), c.neg()];
            let offset = if prim == Primitive::Sin { 0 } else { 1 };
            for k in 0..count {
                out.push(cycle[(k + offset) % 4].clone());
            }
        }
        Primitive::Recip => {
            // d^k/dx^k (1/x) = (-1)^k k! x^{-(k+1)}
            let inv = direct(Primitive::Recip, at)?;
            let mut cur = inv.clone();
            for k in 0..count {
                out.push(cur.clone());
                let next_factor = -(k as i64 + 1);
                cur = cur.mul(&inv).scale_ratio(next_factor, 1);
            }
        }
        Primitive::Sqrt => {
            // d^k/dx^k x^{1/2} = (1/2)(1/2 - 1)...(1/2 - k + 1) x^{1/2 - k}
            let root = direct(Primitive::Sqrt, at)?;
            let inv = direct(Primitive::Recip, at)?;
            let mut cur = root;
            for k in 0..count {
                out.push(cur.clone());
                cur = cur.mul(&inv).scale_ratio(1 - 2 * k as i64, 2);
            }
        }
        Primitive::PowReal(p) => {
            let mut cur = direct(Primitive::PowReal(p), at)?;
            let mut factor = p;
            for k in 0..count {
                out.push(cur.clone());
                cur = cur.mul(&direct(Primitive::Recip, at)?).scale_f64(factor);
                factor = p - (k as f64 + 1.0);
            }
        }
    }
    Ok(out)
}

impl Algebra for f64 {
    fn lift_f64(&self, x: f64) -> Self {
        x
    }
    fn lift_ratio(&self, num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scalar_f64(&self) -> f64 {
        *self
    }
    fn nilpotent_order(&self) -> usize {
        0
    }
    fn scalar_like(&self) -> Self {
        *self
    }
    fn prim_derivs(&self, prim: Primitive, count: usize) -> Result<Vec<Self>, AlgebraError> {
        scalar_prim_derivs(self, prim, count, |p, x| match p {
            Primitive::Exp => Ok(x.exp()),
            Primitive::Sin => Ok(x.sin()),
            Primitive::Cos => Ok(x.cos()),
            Primitive::Recip => {
                if *x == 0.0 {
                    Err(AlgebraError::NotInvertible(0.0))
                } else {
                    Ok(1.0 / x)
                }
            }
            Primitive::Sqrt => {
                if *x <= 0.0 {
                    Err(AlgebraError::UnsupportedAnalytic(format!("sqrt at {x}")))
                } else {
                    Ok(x.sqrt())
                }
            }
            Primitive::PowReal(e) => {
                if *x <= 0.0 {
                    Err(AlgebraError::UnsupportedAnalytic(format!("{x}^{e}")))
                } else {
                    Ok(x.powf(e))
                }
            }
        })
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn max_abs(&self) -> f64 {
        self.abs()
    }
    fn same_shape(&self, _other: &Self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_analytic_matches_std() {
        let x = 1.3_f64;
        assert!((x.analytic(Primitive::Exp).unwrap() - x.exp()).abs() < 1e-15);
        assert!((x.analytic(Primitive::Recip).unwrap() - 1.0 / x).abs() < 1e-15);
        assert!((Algebra::powi(&x, 3).unwrap() - x * x * x).abs() < 1e-15);
        assert!((Algebra::powi(&x, -2).unwrap() - 1.0 / (x * x)).abs() < 1e-15);
    }

    #[test]
    fn recip_of_zero_fails() {
        assert!(0.0_f64.analytic(Primitive::Recip).is_err());
    }
}
