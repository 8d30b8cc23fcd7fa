//! Truncated univariate polynomial arithmetic: `A[t]/(t^(order+1))`.

use super::{taylor_from_derivs, Algebra, AlgebraError, Primitive};

/// A truncated polynomial `c0 + c1 t + ... + c_order t^order` whose powers
/// of `t` beyond `order` are identically zero.
///
/// A jet with zero constant term is nilpotent; evaluating a smooth map at
/// `x0 + t` produces the map's Taylor coefficients at `x0` exactly.
/// Coefficients may themselves live in any [`Algebra`], so jets nest.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<A> {
    coeffs: Vec<A>,
}

impl<A: Algebra> Jet<A> {
    /// Build a jet from its coefficients; `coeffs.len()` fixes the order.
    pub fn from_coeffs(coeffs: Vec<A>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least a constant term");
        Jet { coeffs }
    }

    /// The constant jet `value` of the given order.
    pub fn constant(value: A, order: usize) -> Self {
        let mut coeffs = vec![value.zero_like(); order + 1];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// `base + t`, the generic point used for Taylor expansion.
    pub fn variable(base: A, order: usize) -> Self {
        assert!(order >= 1, "a jet variable needs order >= 1");
        let mut coeffs = vec![base.zero_like(); order + 1];
        coeffs[1] = base.one_like();
        coeffs[0] = base;
        Jet { coeffs }
    }

    /// The nilpotent generator `t` itself.
    pub fn generator(model: &A, order: usize) -> Self {
        Self::variable(model.zero_like(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[A] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> A {
        if k < self.coeffs.len() {
            self.coeffs[k].clone()
        } else {
            self.coeffs[0].zero_like()
        }
    }

    /// Checked sum, rejecting mismatched orders.
    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.order() != rhs.order() {
            return Err(AlgebraError::OrderMismatch(self.order(), rhs.order()));
        }
        Ok(self.add(rhs))
    }

    /// Checked Cauchy product truncated at the common order.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.order() != rhs.order() {
            return Err(AlgebraError::OrderMismatch(self.order(), rhs.order()));
        }
        Ok(self.mul(rhs))
    }

    /// Finite exponential of a nilpotent jet: `sum_k self^k / k!`.
    ///
    /// Exact in any coefficient ring containing the rationals; errors if
    /// the constant term is nonzero.
    pub fn exp_nilpotent(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::NotNilpotent(self.coeffs[0].scalar_f64()));
        }
        let mut acc = self.one_like();
        let mut term = self.one_like();
        for k in 1..=self.order() {
            term = term.mul(self).scale_ratio(1, k as i64);
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Derivative with respect to the jet variable, one order lower.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Jet::constant(self.coeffs[0].zero_like(), 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale_ratio(k as i64, 1))
            .collect();
        Jet { coeffs }
    }

    /// Substitute another jet (with zero constant term) for the variable.
    ///
    /// Used to re-express a Taylor polynomial in a different nilpotent
    /// time, e.g. `t -> tau + sigma` when checking flow composition laws.
    pub fn compose_nilpotent<B: Algebra>(&self, inner: &B, embed: impl Fn(&A) -> B) -> B {
        let mut acc = embed(&self.coeffs[0]);
        let mut pow = inner.one_like();
        for c in self.coeffs.iter().skip(1) {
            pow = pow.mul(inner);
            acc = acc.add(&embed(c).mul(&pow));
        }
        acc
    }

    /// Truncate or zero-extend to a new order.
    pub fn resize(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, self.coeffs[0].zero_like());
        Jet { coeffs }
    }
}

impl<A: Algebra> Algebra for Jet<A> {
    fn lift_f64(&self, x: f64) -> Self {
        Jet::constant(self.coeffs[0].lift_f64(x), self.order())
    }
    fn lift_ratio(&self, num: i64, den: i64) -> Self {
        Jet::constant(self.coeffs[0].lift_ratio(num, den), self.order())
    }
    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Jet { coeffs }
    }
    fn neg(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "jet order mismatch");
        let n = self.coeffs.len();
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Jet { coeffs }
    }
    fn scalar_f64(&self) -> f64 {
        self.coeffs[0].scalar_f64()
    }
    fn nilpotent_order(&self) -> usize {
        // Conservative bound for nested towers: the outer truncation plus
        // whatever nilpotency the constant coefficient carries.
        self.order() + self.coeffs[0].nilpotent_order()
    }
    fn scalar_like(&self) -> Self {
        Jet::constant(self.coeffs[0].clone(), self.order())
    }
    fn prim_derivs(&self, prim: Primitive, count: usize) -> Result<Vec<Self>, AlgebraError> {
        let inner = self.coeffs[0].prim_derivs(prim, count)?;
        Ok(inner
            .into_iter()
            .map(|c| Jet::constant(c, self.order()))
            .collect())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
    fn same_shape(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs[0].same_shape(&other.coeffs[0])
    }
    fn analytic(&self, prim: Primitive) -> Result<Self, AlgebraError> {
        // Derivative stream at the constant coefficient (which may itself
        // carry nilpotents from an inner tower level), then the Taylor
        // rule in the outer variable alone.
        let derivs = self.prim_derivs(prim, self.order() + 1)?;
        let nil = self.sub(&self.scalar_like());
        Ok(taylor_from_derivs(&derivs, &nil))
    }
}

impl<A: Algebra + std::fmt::Display> std::fmt::Display for Jet<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && !(k == 0 && self.is_zero()) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        write!(f, " (mod t^{})", self.order() + 1)
    }
}
