//! Multi-generator square-zero rings `A[d1..dn]/(d1^2, ..., dn^2)` and the
//! symmetric collapse onto a single nilpotent variable.

use super::{Algebra, AlgebraError, Jet, Primitive, Rat};

/// An element `sum_Q a_Q d^Q` over subsets `Q` of the generator set,
/// indexed by bitmask. Products of overlapping subsets vanish.
#[derive(Clone, PartialEq, Debug)]
pub struct SquareZero<A> {
    generators: usize,
    coeffs: Vec<A>,
}

impl<A: Algebra> SquareZero<A> {
    pub fn from_coeffs(generators: usize, coeffs: Vec<A>) -> Self {
        assert_eq!(coeffs.len(), 1 << generators, "need 2^n coefficients");
        SquareZero { generators, coeffs }
    }

    pub fn constant(value: A, generators: usize) -> Self {
        let mut coeffs = vec![value.zero_like(); 1 << generators];
        coeffs[0] = value;
        SquareZero { generators, coeffs }
    }

    /// The generator `d_{index}` (zero-based).
    pub fn generator(model: &A, generators: usize, index: usize) -> Self {
        assert!(index < generators);
        let mut coeffs = vec![model.zero_like(); 1 << generators];
        coeffs[1 << index] = model.one_like();
        SquareZero { generators, coeffs }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn coeffs(&self) -> &[A] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &A {
        &self.coeffs[mask]
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.generators != rhs.generators {
            return Err(AlgebraError::GeneratorMismatch(
                self.generators,
                rhs.generators,
            ));
        }
        Ok(self.add(rhs))
    }

    /// Checked subset-convolution product.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.generators != rhs.generators {
            return Err(AlgebraError::GeneratorMismatch(
                self.generators,
                rhs.generators,
            ));
        }
        Ok(self.mul(rhs))
    }

    /// Collapse a symmetric element onto the jet variable `t = d1 + ... + dn`.
    ///
    /// Requires `a_Q` to depend only on `|Q|` (within `tol` on the largest
    /// coefficient difference; pass `0.0` for exact rings). Since
    /// `t^k = k! * sigma_k(d)`, the collapsed jet has `c_k = a_k / k!`.
    pub fn collapse_symmetric(&self, tol: f64) -> Result<Jet<A>, AlgebraError> {
        let n = self.generators;
        // representative subset {0..k-1} per cardinality
        let mut reps: Vec<usize> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            reps.push((1usize << k) - 1);
        }
        for mask in 0..self.coeffs.len() {
            let k = mask.count_ones() as usize;
            let diff = self.coeffs[mask].sub(&self.coeffs[reps[k]]);
            if !(diff.is_zero() || diff.max_abs() <= tol) {
                return Err(AlgebraError::NotSymmetric(mask, reps[k]));
            }
        }
        let mut jet_coeffs = Vec::with_capacity(n + 1);
        let mut factorial: i64 = 1;
        for k in 0..=n {
            if k > 1 {
                factorial *= k as i64;
            }
            jet_coeffs.push(self.coeffs[reps[k]].scale_ratio(1, factorial));
        }
        Ok(Jet::from_coeffs(jet_coeffs))
    }

    /// `d1 + ... + dn`.
    pub fn generator_sum(model: &A, generators: usize) -> Self {
        let mut acc = SquareZero::constant(model.zero_like(), generators);
        for i in 0..generators {
            acc = acc.add(&SquareZero::generator(model, generators, i));
        }
        acc
    }
}

impl<A: Algebra> Algebra for SquareZero<A> {
    fn lift_f64(&self, x: f64) -> Self {
        SquareZero::constant(self.coeffs[0].lift_f64(x), self.generators)
    }
    fn lift_ratio(&self, num: i64, den: i64) -> Self {
        SquareZero::constant(self.coeffs[0].lift_ratio(num, den), self.generators)
    }
    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.generators, rhs.generators, "generator mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        SquareZero {
            generators: self.generators,
            coeffs,
        }
    }
    fn neg(&self) -> Self {
        SquareZero {
            generators: self.generators,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.generators, rhs.generators, "generator mismatch");
        let size = self.coeffs.len();
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; size];
        // (ab)_Q = sum over disjoint splittings Q = Q1 ⊔ Q2
        for mask in 0..size {
            let mut sub = mask;
            loop {
                let a = &self.coeffs[sub];
                let b = &rhs.coeffs[mask ^ sub];
                if !a.is_zero() && !b.is_zero() {
                    coeffs[mask] = coeffs[mask].add(&a.mul(b));
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        SquareZero {
            generators: self.generators,
            coeffs,
        }
    }
    fn scalar_f64(&self) -> f64 {
        self.coeffs[0].scalar_f64()
    }
    fn nilpotent_order(&self) -> usize {
        self.generators + self.coeffs[0].nilpotent_order()
    }
    fn scalar_like(&self) -> Self {
        SquareZero::constant(self.coeffs[0].clone(), self.generators)
    }
    fn prim_derivs(&self, prim: Primitive, count: usize) -> Result<Vec<Self>, AlgebraError> {
        let inner = self.coeffs[0].prim_derivs(prim, count)?;
        Ok(inner
            .into_iter()
            .map(|c| SquareZero::constant(c, self.generators))
            .collect())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
    fn same_shape(&self, other: &Self) -> bool {
        self.generators == other.generators && self.coeffs[0].same_shape(&other.coeffs[0])
    }
}

impl<A: Algebra + std::fmt::Display> std::fmt::Display for SquareZero<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && !(mask == 0 && self.is_zero()) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mask == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*")?;
                for i in 0..self.generators {
                    if mask & (1 << i) != 0 {
                        write!(f, "d{}", i + 1)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The ring in which `n` genuine square-zero elements sum to zero.
///
/// Naive substitution `dn := -(d1 + ... + d_{n-1})` inside the free
/// square-zero ring fails: the substituted element has a nonzero square
/// `2*sigma_2`. The faithful model quotients the free ring on `n-1`
/// generators by the ideal generated by `sigma_2`, which makes the
/// substituted last generator square-zero as well. Elements are kept as
/// free-ring representatives and reduced to a canonical form with exact
/// rational elimination data.
pub struct SumZeroQuotient {
    free_gens: usize,
    /// RREF rows of the ideal: (pivot mask, full coefficient vector).
    rows: Vec<(usize, Vec<(i64, i64)>)>,
}

impl SumZeroQuotient {
    /// Quotient for `total_gens` square-zero elements summing to zero.
    pub fn new(total_gens: usize) -> Self {
        assert!(total_gens >= 2);
        let m = total_gens - 1;
        let dim = 1usize << m;
        let model = Rat::from_int(0);

        // sigma_2 over the m free generators
        let mut sigma2 = SquareZero::constant(model.clone(), m);
        for i in 0..m {
            for j in (i + 1)..m {
                let dij =
                    SquareZero::generator(&model, m, i).mul(&SquareZero::generator(&model, m, j));
                sigma2 = sigma2.add(&dij);
            }
        }

        // span of { sigma_2 * d^Q } as exact rational vectors
        let mut basis: Vec<Vec<Rat>> = Vec::new();
        for mask in 0..dim {
            let mut monomial = SquareZero::constant(Rat::from_int(1), m);
            for i in 0..m {
                if mask & (1 << i) != 0 {
                    monomial = monomial.mul(&SquareZero::generator(&model, m, i));
                }
            }
            let v = sigma2.mul(&monomial);
            if !v.is_zero() {
                basis.push(v.coeffs().to_vec());
            }
        }

        // exact reduced row echelon form
        let mut rows: Vec<(usize, Vec<Rat>)> = Vec::new();
        for mut v in basis {
            for (pivot, row) in &rows {
                let c = v[*pivot].clone();
                if !c.is_zero() {
                    for (x, r) in v.iter_mut().zip(row.iter()) {
                        *x = x.sub(&c.mul(r));
                    }
                }
            }
            if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
                let inv = v[pivot].invert().expect("nonzero pivot");
                for x in v.iter_mut() {
                    *x = x.mul(&inv);
                }
                for (_, row) in rows.iter_mut() {
                    let c = row[pivot].clone();
                    if !c.is_zero() {
                        for (x, r) in row.iter_mut().zip(v.iter()) {
                            *x = x.sub(&c.mul(r));
                        }
                    }
                }
                rows.push((pivot, v));
            }
        }
        rows.sort_by_key(|(p, _)| *p);

        let rows = rows
            .into_iter()
            .map(|(p, v)| {
                let ratios = v
                    .iter()
                    .map(|r| {
                        let num =
                            i64::try_from(r.inner().numer().clone()).expect("small numerator");
                        let den =
                            i64::try_from(r.inner().denom().clone()).expect("small denominator");
                        (num, den)
                    })
                    .collect();
                (p, ratios)
            })
            .collect();

        SumZeroQuotient { free_gens: m, rows }
    }

    pub fn free_generators(&self) -> usize {
        self.free_gens
    }

    /// The `n` generators of the quotient: `d1..d_{n-1}` free, and
    /// `dn = -(d1 + ... + d_{n-1})`.
    pub fn generators<A: Algebra>(&self, model: &A) -> Vec<SquareZero<A>> {
        let m = self.free_gens;
        let mut gens: Vec<SquareZero<A>> =
            (0..m).map(|i| SquareZero::generator(model, m, i)).collect();
        gens.push(SquareZero::generator_sum(model, m).neg());
        gens
    }

    /// Canonical representative modulo the ideal.
    pub fn reduce<A: Algebra>(&self, x: &SquareZero<A>) -> SquareZero<A> {
        assert_eq!(x.generators(), self.free_gens);
        let mut coeffs = x.coeffs().to_vec();
        for (pivot, row) in &self.rows {
            let c = coeffs[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (x_i, (num, den)) in coeffs.iter_mut().zip(row.iter()) {
                if *num != 0 {
                    *x_i = x_i.sub(&c.scale_ratio(*num, *den));
                }
            }
        }
        SquareZero::from_coeffs(self.free_gens, coeffs)
    }

    /// Whether two free-ring representatives are equal in the quotient.
    pub fn equal<A: Algebra>(&self, a: &SquareZero<A>, b: &SquareZero<A>) -> bool {
        self.reduce(a) == self.reduce(b)
    }
}
