//! Exact rational coefficients for the identities that hold with zero error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{scalar_prim_derivs, Algebra, AlgebraError, Primitive};

/// An exact rational scalar.
///
/// Analytic primitives are available only where their Taylor data is
/// rational: `exp`, `sin`, `cos` at 0 (which is all the nilpotent
/// calculus needs) and reciprocals/integer powers anywhere.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact conversion; every finite `f64` is a dyadic rational.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rat)
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Algebra for Rat {
    fn lift_f64(&self, x: f64) -> Self {
        Rat::from_f64_exact(x).expect("non-finite float cannot become a rational")
    }
    fn lift_ratio(&self, num: i64, den: i64) -> Self {
        Rat::new(num, den)
    }
    fn add(&self, rhs: &Self) -> Self {
        Rat(&self.0 + &rhs.0)
    }
    fn neg(&self) -> Self {
        Rat(-&self.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rat(&self.0 * &rhs.0)
    }
    fn scalar_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
    fn nilpotent_order(&self) -> usize {
        0
    }
    fn scalar_like(&self) -> Self {
        self.clone()
    }
    fn prim_derivs(&self, prim: Primitive, count: usize) -> Result<Vec<Self>, AlgebraError> {
        scalar_prim_derivs(self, prim, count, |p, x| match p {
            Primitive::Exp if x.0.is_zero() => Ok(Rat::from_int(1)),
            Primitive::Sin if x.0.is_zero() => Ok(Rat::from_int(0)),
            Primitive::Cos if x.0.is_zero() => Ok(Rat::from_int(1)),
            Primitive::Recip => {
                if x.0.is_zero() {
                    Err(AlgebraError::NotInvertible(0.0))
                } else {
                    Ok(Rat(x.0.recip()))
                }
            }
            _ => Err(AlgebraError::UnsupportedAnalytic(format!(
                "{} at a nonzero rational",
                p.name()
            ))),
        })
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn max_abs(&self) -> f64 {
        self.0.abs().to_f64().unwrap_or(f64::NAN)
    }
    fn same_shape(&self, _other: &Self) -> bool {
        true
    }
}
