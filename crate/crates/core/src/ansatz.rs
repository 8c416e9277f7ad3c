//! Gauge-rotation constants and the finite polynomial block of each family.
//!
//! After stripping the asymptotic factor the radial equation becomes a second-order
//! operator that preserves polynomials of degree `<= d`:
//!
//! * I:   `-u d2 + (u^2 + beta u - (1 + 2 xi)) d - d u`, `u = c rho`
//! * II:  `-u d2 + (u^2 + beta u - (1 + xi)) d - d u`, `u = c rho^2`
//! * III: `-rho^2 d2 + (2 gamma rho^2 - (2 xi + 1) rho - 2 alpha) d - 2 gamma d rho`
//!
//! The block is the matrix of that operator on `{1, u, ..., u^d}`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::model::{CouplingCase, DerivedConstants, Family, PotentialSpec};
use crate::sl2::{DiffOperator, Laurent};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub family: Family,
    pub tau: f64,
    pub eta: f64,
    pub xi: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Only meaningful for family III, where it equals `eta`.
    pub gamma: f64,
    pub c: f64,
    pub d: usize,
    pub s: i32,
    pub normalizable: bool,
}

/// Ansatz constants at the field realised by `consts`.
pub fn ansatz_params(
    pot: &PotentialSpec,
    case: CouplingCase,
    consts: &DerivedConstants,
    s: i32,
    d: usize,
) -> Result<AnsatzParams> {
    case.check(consts)?;
    ansatz_params_at(pot, case, consts.reduced_mass, case.field_of(consts), s, d)
}

fn angular_exponent(theta: f64, m: f64, s: i32) -> Result<f64> {
    let radicand = (s as f64) * (s as f64) + 2.0 * theta * m;
    if radicand < 0.0 {
        return Err(QesError::FallToCentre { s, radicand });
    }
    Ok(radicand.sqrt())
}

/// Ansatz constants with the field parameter (`omega_c` or `Omega_q`) given explicitly.
pub fn ansatz_params_at(
    pot: &PotentialSpec,
    case: CouplingCase,
    reduced_mass: f64,
    field: f64,
    s: i32,
    d: usize,
) -> Result<AnsatzParams> {
    let m = reduced_mass;
    if !(m > 0.0) {
        return Err(QesError::Domain(format!("reduced mass {m} must be positive")));
    }
    let dd = d as f64;
    match *pot {
        PotentialSpec::FamilyI { theta, k1, k2, .. } => {
            let w = case.confinement_frequency(field);
            let radicand = m * m * w * w + 8.0 * k2 * m;
            if !(radicand > 0.0) {
                return Err(QesError::Domain(format!(
                    "m_r^2 w^2 + 8 k2 m_r = {radicand} must be positive"
                )));
            }
            let tau = 0.25 * radicand.sqrt();
            let eta = k1 * m / (2.0 * tau);
            let xi = angular_exponent(theta, m, s)?;
            let c = 2.0 * tau.sqrt();
            Ok(AnsatzParams {
                family: Family::I,
                tau,
                eta,
                xi,
                alpha: 1.0 + 2.0 * xi + dd / 2.0,
                beta: 2.0 * eta / c,
                gamma: 0.0,
                c,
                d,
                s,
                normalizable: tau > 0.0,
            })
        }
        PotentialSpec::FamilyII { theta, k4, k6, .. } => {
            if !(k6 > 0.0) {
                return Err(QesError::Domain(format!("k6 = {k6} must be positive")));
            }
            let tau = (2.0 * k6 * m).sqrt() / 4.0;
            let eta = k4 * m / (8.0 * tau);
            let xi = angular_exponent(theta, m, s)?;
            Ok(AnsatzParams {
                family: Family::II,
                tau,
                eta,
                xi,
                alpha: 1.0 + xi + dd / 2.0,
                beta: eta / tau.sqrt(),
                gamma: 0.0,
                c: 2.0 * tau.sqrt(),
                d,
                s,
                normalizable: tau > 0.0,
            })
        }
        PotentialSpec::FamilyIII { l1, l3, l4, .. } => {
            if !(l4 > 0.0) {
                return Err(QesError::Domain(format!("l4 = {l4} must be positive")));
            }
            let tau = (2.0 * l4 * m).sqrt();
            let denom = l3 * m + tau * (dd + 1.0);
            if denom == 0.0 {
                return Err(QesError::Degenerate(format!(
                    "l3 m_r + tau (d + 1) vanishes for d = {d}"
                )));
            }
            let eta = -l1 * m * tau / denom;
            Ok(AnsatzParams {
                family: Family::III,
                tau,
                eta,
                xi: 0.5 + l3 * m / tau,
                alpha: tau,
                beta: -2.0 * l3 * m / tau - dd,
                gamma: eta,
                c: 1.0,
                d,
                s,
                normalizable: eta > 0.0 && tau > 0.0,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariableMap {
    /// block variable `u = c rho`
    Identity,
    /// block variable `u = c rho^2`
    SquareMap,
}

/// Coefficients of the canonical operator over a generic number field.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorShape<T> {
    /// `-u d2 + (u^2 + beta u - lead) d - d u`
    Linear { beta: T, lead: T },
    /// `-rho^2 d2 + (2 gamma rho^2 - lead rho - 2 alpha) d - 2 gamma d rho`
    Inverse { gamma: T, alpha: T, lead: T },
}

impl<T: Clone + Num + FromPrimitive> OperatorShape<T> {
    fn int(k: i64) -> T {
        T::from_i64(k).expect("integer fits")
    }

    pub fn operator(&self, d: usize) -> DiffOperator<T> {
        let dd = Self::int(d as i64);
        match self {
            OperatorShape::Linear { beta, lead } => DiffOperator::new()
                .term(Self::int(-1), 1, 2)
                .term(T::one(), 2, 1)
                .term(beta.clone(), 1, 1)
                .term(T::zero() - lead.clone(), 0, 1)
                .term(T::zero() - dd, 1, 0),
            OperatorShape::Inverse { gamma, alpha, lead } => {
                let two_gamma = Self::int(2) * gamma.clone();
                DiffOperator::new()
                    .term(Self::int(-1), 2, 2)
                    .term(two_gamma.clone(), 2, 1)
                    .term(T::zero() - lead.clone(), 1, 1)
                    .term(Self::int(-2) * alpha.clone(), 0, 1)
                    .term(T::zero() - two_gamma * dd, 1, 0)
            }
        }
    }

    /// Closed-form matrix entries, `entries[row][col]`; column `k` is the image of `u^k`.
    pub fn entries(&self, d: usize) -> Vec<Vec<T>> {
        let n = d + 1;
        let mut m = vec![vec![T::zero(); n]; n];
        for k in 0..n {
            let kk = Self::int(k as i64);
            let km1 = Self::int(k as i64 - 1);
            let k_minus_d = Self::int(k as i64 - d as i64);
            match self {
                OperatorShape::Linear { beta, lead } => {
                    m[k][k] = beta.clone() * kk.clone();
                    if k >= 1 {
                        m[k - 1][k] = T::zero() - kk.clone() * (km1 + lead.clone());
                    }
                    if k < d {
                        m[k + 1][k] = k_minus_d;
                    }
                }
                OperatorShape::Inverse { gamma, alpha, lead } => {
                    m[k][k] = T::zero() - kk.clone() * (km1 + lead.clone());
                    if k >= 1 {
                        m[k - 1][k] = Self::int(-2) * alpha.clone() * kk.clone();
                    }
                    if k < d {
                        m[k + 1][k] = Self::int(2) * gamma.clone() * k_minus_d;
                    }
                }
            }
        }
        m
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite ansatz constant")
}

impl AnsatzParams {
    pub fn variable_map(&self) -> VariableMap {
        match self.family {
            Family::II => VariableMap::SquareMap,
            _ => VariableMap::Identity,
        }
    }

    pub fn shape(&self) -> OperatorShape<f64> {
        match self.family {
            Family::I => OperatorShape::Linear {
                beta: self.beta,
                lead: 1.0 + 2.0 * self.xi,
            },
            Family::II => OperatorShape::Linear {
                beta: self.beta,
                lead: 1.0 + self.xi,
            },
            Family::III => OperatorShape::Inverse {
                gamma: self.gamma,
                alpha: self.alpha,
                lead: 2.0 * self.xi + 1.0,
            },
        }
    }

    /// Same operator with every constant converted exactly to a rational.
    pub fn exact_shape(&self) -> OperatorShape<BigRational> {
        let one = BigRational::from_integer(BigInt::from(1));
        let two = BigRational::from_integer(BigInt::from(2));
        let xi = exact(self.xi);
        match self.family {
            Family::I => OperatorShape::Linear {
                beta: exact(self.beta),
                lead: one + two * xi,
            },
            Family::II => OperatorShape::Linear {
                beta: exact(self.beta),
                lead: one + xi,
            },
            Family::III => OperatorShape::Inverse {
                gamma: exact(self.gamma),
                alpha: exact(self.alpha),
                lead: two * xi + one,
            },
        }
    }
}

/// Matrix of the gauge-rotated operator on polynomials of degree `<= d`.
#[derive(Debug, Clone, PartialEq)]
pub struct QesBlock {
    pub matrix: DMatrix<f64>,
    pub scaling_c: f64,
    pub variable_map: VariableMap,
    pub family: Family,
    pub ansatz: AnsatzParams,
}

pub fn qes_block(ansatz: &AnsatzParams) -> QesBlock {
    let n = ansatz.d + 1;
    let entries = ansatz.shape().entries(ansatz.d);
    QesBlock {
        matrix: DMatrix::from_fn(n, n, |i, j| entries[i][j]),
        scaling_c: ansatz.c,
        variable_map: ansatz.variable_map(),
        family: ansatz.family,
        ansatz: *ansatz,
    }
}

/// Outcome of the exact degree-closure check.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCertificate {
    pub closed: bool,
    /// Contributions of each operator term to the `u^(d+1)` coefficient of the image of `u^d`.
    pub top_contributions: Vec<BigRational>,
    /// First failure found: `(k, power, coefficient)` of a term outside `0..=d` in the image of `u^k`.
    pub offending: Option<(usize, i32, BigRational)>,
}

/// Checks exactly that `op` maps every `u^k`, `k <= d`, into polynomials of degree `<= d`.
pub fn check_closure(op: &DiffOperator<BigRational>, d: usize) -> InvarianceCertificate {
    let mut offending = None;
    for k in 0..=d {
        let image = op.apply_laurent(&Laurent::monomial(k as i32));
        if let Some((p, c)) = image
            .nonzero_terms()
            .into_iter()
            .find(|(p, _)| *p < 0 || *p > d as i32)
        {
            offending = Some((k, p, c));
            break;
        }
    }
    let top_contributions = op
        .terms()
        .iter()
        .map(|t| {
            let single = DiffOperator::new().term(t.coeff.clone(), t.power, t.order);
            single
                .apply_laurent(&Laurent::monomial(d as i32))
                .coeff(d as i32 + 1)
        })
        .filter(|c| !c.is_zero())
        .collect();
    InvarianceCertificate {
        closed: offending.is_none(),
        top_contributions,
        offending,
    }
}

pub fn invariance_check(ansatz: &AnsatzParams) -> InvarianceCertificate {
    check_closure(&ansatz.exact_shape().operator(ansatz.d), ansatz.d)
}
