//! Finite-dimensional representations of sl(2) on polynomials of bounded degree.
//!
//! Generators act on the monomial basis `{1, rho, ..., rho^d}` (ascending order) and
//! every matrix here column-acts on coefficient vectors. Representation-theoretic
//! identities are checked in exact rational arithmetic.

use nalgebra::DMatrix;
use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// Polynomial space of dimension `dim = degree + 1`, spin `degree / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepSpace {
    dim: usize,
}

impl RepSpace {
    /// Returns `None` for `dim == 0`.
    pub fn new(dim: usize) -> Option<Self> {
        (dim >= 1).then_some(Self { dim })
    }

    pub fn from_degree(degree: usize) -> Self {
        Self { dim: degree + 1 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.dim - 1
    }

    pub fn spin(&self) -> Rational64 {
        Rational64::new(self.degree() as i64, 2)
    }
}

/// Exact matrices of `J+`, `J-`, `J0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorTriple {
    pub j_plus: DMatrix<Rational64>,
    pub j_minus: DMatrix<Rational64>,
    pub j_zero: DMatrix<Rational64>,
}

impl GeneratorTriple {
    /// Generators in the fixed `(+, -, 0)` order used by [`quadratic_form_matrix`].
    pub fn ordered(&self) -> [&DMatrix<Rational64>; 3] {
        [&self.j_plus, &self.j_minus, &self.j_zero]
    }
}

/// `J- rho^k = k rho^(k-1)`, `J0 rho^k = (k - j) rho^k`, `J+ rho^k = (2j - k) rho^(k+1)`.
pub fn generator_matrices(space: RepSpace) -> GeneratorTriple {
    let n = space.dim();
    let d = space.degree() as i64;
    let j = space.spin();
    let mut j_plus = DMatrix::from_element(n, n, Rational64::zero());
    let mut j_minus = j_plus.clone();
    let mut j_zero = j_plus.clone();
    for k in 0..n {
        let kk = k as i64;
        j_zero[(k, k)] = Rational64::from_integer(kk) - j;
        if k >= 1 {
            j_minus[(k - 1, k)] = Rational64::from_integer(kk);
        }
        if k + 1 < n {
            j_plus[(k + 1, k)] = Rational64::from_integer(d - kk);
        }
    }
    GeneratorTriple {
        j_plus,
        j_minus,
        j_zero,
    }
}

fn commutator(a: &DMatrix<Rational64>, b: &DMatrix<Rational64>) -> DMatrix<Rational64> {
    a * b - b * a
}

fn max_abs(m: &DMatrix<Rational64>) -> Rational64 {
    m.iter()
        .map(|x| x.abs())
        .fold(Rational64::zero(), |acc, x| if x > acc { x } else { acc })
}

/// Largest entry of `[J0,J+]-J+`, `[J0,J-]+J-`, `[J+,J-]-2J0`; zero for a valid representation.
pub fn commutator_defect(space: RepSpace) -> Rational64 {
    let g = generator_matrices(space);
    let two = Rational64::from_integer(2);
    let d1 = commutator(&g.j_zero, &g.j_plus) - &g.j_plus;
    let d2 = commutator(&g.j_zero, &g.j_minus) + &g.j_minus;
    let d3 = commutator(&g.j_plus, &g.j_minus) - g.j_zero.map(|x| x * two);
    [max_abs(&d1), max_abs(&d2), max_abs(&d3)]
        .into_iter()
        .fold(Rational64::zero(), |acc, x| if x > acc { x } else { acc })
}

/// Matrix of `sum a[p][q] J^p J^q + sum b[p] J^p` with index order `(+, -, 0)`.
pub fn quadratic_form_matrix(a: &[[f64; 3]; 3], b: &[f64; 3], space: RepSpace) -> DMatrix<f64> {
    let g = generator_matrices(space);
    let gens: Vec<DMatrix<f64>> = g
        .ordered()
        .iter()
        .map(|m| m.map(|x| *x.numer() as f64 / *x.denom() as f64))
        .collect();
    let n = space.dim();
    let mut out = DMatrix::zeros(n, n);
    for p in 0..3 {
        if b[p] != 0.0 {
            out += &gens[p] * b[p];
        }
        for q in 0..3 {
            if a[p][q] != 0.0 {
                out += (&gens[p] * &gens[q]) * a[p][q];
            }
        }
    }
    out
}

/// One term `coeff * rho^power * d^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffTerm<T> {
    pub coeff: T,
    pub power: i32,
    pub order: u8,
}

/// Finite sum of [`DiffTerm`]s; orders are at most 2 and powers at least -2.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator<T> {
    terms: Vec<DiffTerm<T>>,
}

impl<T: Clone + Num + FromPrimitive> DiffOperator<T> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    /// Panics if `order > 2` or `power < -2`.
    pub fn term(mut self, coeff: T, power: i32, order: u8) -> Self {
        assert!(order <= 2, "differential order {order} exceeds 2");
        assert!(power >= -2, "rho power {power} below -2");
        self.terms.push(DiffTerm {
            coeff,
            power,
            order,
        });
        self
    }

    pub fn terms(&self) -> &[DiffTerm<T>] {
        &self.terms
    }

    pub fn apply(&self, poly: &[T]) -> Laurent<T> {
        self.apply_laurent(&Laurent::from_poly(poly.to_vec()))
    }

    pub fn apply_laurent(&self, f: &Laurent<T>) -> Laurent<T> {
        let mut out = Laurent::zero();
        for (i, c) in f.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = f.low + i as i32;
            for t in &self.terms {
                // falling factorial k (k-1) ... (k-order+1)
                let mut ff: i64 = 1;
                for r in 0..t.order as i64 {
                    ff *= k as i64 - r;
                }
                if ff == 0 {
                    continue;
                }
                let w = T::from_i64(ff).expect("integer fits the coefficient field");
                out.add_term(
                    k - t.order as i32 + t.power,
                    t.coeff.clone() * w * c.clone(),
                );
            }
        }
        out
    }
}

impl<T: Clone + Num + FromPrimitive> Default for DiffOperator<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Finite Laurent polynomial; `coeffs[i]` multiplies `rho^(low + i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent<T> {
    low: i32,
    coeffs: Vec<T>,
}

impl<T: Clone + Num> Laurent<T> {
    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn from_poly(coeffs: Vec<T>) -> Self {
        Self { low: 0, coeffs }
    }

    pub fn monomial(power: i32) -> Self {
        Self {
            low: power,
            coeffs: vec![T::one()],
        }
    }

    pub fn coeff(&self, power: i32) -> T {
        let i = power - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            T::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    fn add_term(&mut self, power: i32, c: T) {
        if self.coeffs.is_empty() {
            self.low = power;
            self.coeffs.push(c);
            return;
        }
        if power < self.low {
            let shift = (self.low - power) as usize;
            let mut v = vec![T::zero(); shift];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.low = power;
        }
        let i = (power - self.low) as usize;
        if i >= self.coeffs.len() {
            self.coeffs.resize(i + 1, T::zero());
        }
        self.coeffs[i] = self.coeffs[i].clone() + c;
    }

    /// `(power, coeff)` pairs with nonzero coefficient, ascending.
    pub fn nonzero_terms(&self) -> Vec<(i32, T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i32, c.clone()))
            .collect()
    }

    /// Highest power with a nonzero coefficient.
    pub fn degree(&self) -> Option<i32> {
        self.nonzero_terms().last().map(|(p, _)| *p)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.nonzero_terms().first().map(|(p, _)| *p)
    }

    /// Ascending coefficients from `rho^0`, or `None` if a negative power survives.
    pub fn to_poly(&self) -> Option<Vec<T>> {
        let terms = self.nonzero_terms();
        if terms.iter().any(|(p, _)| *p < 0) {
            return None;
        }
        let top = match terms.last() {
            Some((p, _)) => *p as usize,
            None => return Some(Vec::new()),
        };
        let mut v = vec![T::zero(); top + 1];
        for (p, c) in terms {
            v[p as usize] = c;
        }
        Some(v)
    }
}

/// `J+ = 2j rho - rho^2 d`.
pub fn j_plus_operator(space: RepSpace) -> DiffOperator<Rational64> {
    DiffOperator::new()
        .term(Rational64::from_integer(space.degree() as i64), 1, 0)
        .term(Rational64::from_integer(-1), 2, 1)
}

/// `J- = d`.
pub fn j_minus_operator() -> DiffOperator<Rational64> {
    DiffOperator::new().term(Rational64::from_integer(1), 0, 1)
}

/// `J0 = -j + rho d`.
pub fn j_zero_operator(space: RepSpace) -> DiffOperator<Rational64> {
    DiffOperator::new()
        .term(-space.spin(), 0, 0)
        .term(Rational64::from_integer(1), 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn single_dimension_is_trivial() {
        let g = generator_matrices(RepSpace::new(1).unwrap());
        for m in g.ordered() {
            assert_eq!(m.shape(), (1, 1));
            assert!(m[(0, 0)].is_zero());
        }
    }

    #[test]
    fn two_dimensional_generators() {
        let g = generator_matrices(RepSpace::new(2).unwrap());
        assert_eq!(g.j_minus[(0, 1)], r(1, 1));
        assert_eq!(g.j_minus.iter().filter(|x| !x.is_zero()).count(), 1);
        assert_eq!(g.j_plus[(1, 0)], r(1, 1));
        assert_eq!(g.j_plus.iter().filter(|x| !x.is_zero()).count(), 1);
        assert_eq!(g.j_zero[(0, 0)], r(-1, 2));
        assert_eq!(g.j_zero[(1, 1)], r(1, 2));
    }

    #[test]
    fn three_dimensional_generators() {
        let g = generator_matrices(RepSpace::new(3).unwrap());
        assert_eq!((g.j_plus[(1, 0)], g.j_plus[(2, 1)]), (r(2, 1), r(1, 1)));
        assert_eq!((g.j_minus[(0, 1)], g.j_minus[(1, 2)]), (r(1, 1), r(2, 1)));
        assert_eq!(
            (g.j_zero[(0, 0)], g.j_zero[(1, 1)], g.j_zero[(2, 2)]),
            (r(-1, 1), r(0, 1), r(1, 1))
        );
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(RepSpace::new(0).is_none());
    }

    #[test]
    fn defect_vanishes() {
        for n in [1, 2, 25] {
            assert!(commutator_defect(RepSpace::new(n).unwrap()).is_zero());
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let zero = [[0.0; 3]; 3];
        let m = quadratic_form_matrix(&zero, &[0.0, 0.0, 1.0], RepSpace::new(3).unwrap());
        assert_eq!(m, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 0.0, 1.0])));

        let mut a = zero;
        a[0][1] = 1.0;
        let m = quadratic_form_matrix(&a, &[0.0; 3], RepSpace::new(2).unwrap());
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]));

        let m = quadratic_form_matrix(&zero, &[1.0, 1.0, 0.0], RepSpace::new(2).unwrap());
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn diff_operator_examples() {
        let one = r(1, 1);
        let zero = r(0, 1);
        let d = DiffOperator::new().term(one, 0, 1);
        assert_eq!(d.apply(&[zero, one]).to_poly().unwrap(), vec![one]);

        let op = DiffOperator::new().term(one, 2, 1);
        assert_eq!(op.apply(&[zero, one]).to_poly().unwrap(), vec![zero, zero, one]);

        let op = DiffOperator::new().term(-one, 1, 2).term(one, 2, 1);
        let out = op.apply(&[zero, zero, one]).to_poly().unwrap();
        assert_eq!(out, vec![zero, r(-2, 1), zero, r(2, 1)]);
    }

    #[test]
    fn laurent_terms_survive() {
        let op = DiffOperator::<f64>::new().term(1.0, -2, 0);
        let out = op.apply(&[3.0, 0.0, 1.0]);
        assert_eq!(out.valuation(), Some(-2));
        assert_eq!(out.coeff(-2), 3.0);
        assert_eq!(out.coeff(0), 1.0);
        assert!(out.to_poly().is_none());
    }

    #[test]
    fn differential_forms_match_matrices() {
        let space = RepSpace::new(4).unwrap();
        let g = generator_matrices(space);
        let ops = [j_plus_operator(space), j_minus_operator(), j_zero_operator(space)];
        for (op, m) in ops.iter().zip(g.ordered()) {
            for k in 0..space.dim() {
                let image = op.apply_laurent(&Laurent::monomial(k as i32));
                for row in 0..space.dim() {
                    assert_eq!(image.coeff(row as i32), m[(row, k)]);
                }
                assert!(image.degree().map_or(true, |p| p <= space.degree() as i32));
            }
        }
    }
}
