//! Two-body constants, coupling cases, and the three potential families.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};

/// Relative tolerance for the charge conditions selecting a coupling case.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;

/// Two charged particles in a uniform field `B z`, units with hbar = c = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticlePair {
    pub m1: f64,
    pub m2: f64,
    pub e1: f64,
    pub e2: f64,
    #[serde(default)]
    pub b: f64,
}

/// Centre-of-mass reduction constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub total_mass: f64,
    pub reduced_mass: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub total_charge: f64,
    pub coupling_charge: f64,
    pub relative_charge: f64,
    /// `q B / M`
    pub omega_c: f64,
    /// `e B / (2 m_r)` with `e = e1`
    pub big_omega_q: f64,
    /// `e B |mu2 - mu1| / m_r` with `e = e1`
    pub omega_q: f64,
    pub b: f64,
    pub max_charge: f64,
}

pub fn derive_constants(pair: &ParticlePair) -> Result<DerivedConstants> {
    if !(pair.m1 > 0.0 && pair.m2 > 0.0) {
        return Err(QesError::Domain(format!(
            "masses must be positive, got m1 = {}, m2 = {}",
            pair.m1, pair.m2
        )));
    }
    let total_mass = pair.m1 + pair.m2;
    let mu1 = pair.m1 / total_mass;
    let mu2 = pair.m2 / total_mass;
    let reduced_mass = pair.m1 * pair.m2 / total_mass;
    let total_charge = pair.e1 + pair.e2;
    let e = pair.e1;
    Ok(DerivedConstants {
        total_mass,
        reduced_mass,
        mu1,
        mu2,
        total_charge,
        coupling_charge: mu2 * pair.e1 - mu1 * pair.e2,
        relative_charge: pair.e1 * mu2 * mu2 + pair.e2 * mu1 * mu1,
        omega_c: total_charge * pair.b / total_mass,
        big_omega_q: e * pair.b / (2.0 * reduced_mass),
        omega_q: e * pair.b * (mu2 - mu1).abs() / reduced_mass,
        b: pair.b,
        max_charge: pair.e1.abs().max(pair.e2.abs()),
    })
}

/// The two separable situations: vanishing coupling charge, or a neutral pair at rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingCase {
    #[serde(alias = "charged")]
    ChargedEc0,
    #[serde(alias = "neutral")]
    NeutralRest,
}

impl CouplingCase {
    pub fn name(&self) -> &'static str {
        match self {
            CouplingCase::ChargedEc0 => "charged",
            CouplingCase::NeutralRest => "neutral",
        }
    }

    /// Name of the field parameter quantized in this case.
    pub fn field_name(&self) -> &'static str {
        match self {
            CouplingCase::ChargedEc0 => "omega_c",
            CouplingCase::NeutralRest => "Omega_q",
        }
    }

    pub fn check(&self, consts: &DerivedConstants) -> Result<()> {
        let scale = ADMISSIBILITY_TOL * consts.max_charge;
        match self {
            CouplingCase::ChargedEc0 if consts.coupling_charge.abs() > scale => {
                Err(QesError::Admissibility(format!(
                    "charged case needs e_c = 0, got e_c = {}",
                    consts.coupling_charge
                )))
            }
            CouplingCase::NeutralRest if consts.total_charge.abs() > scale => {
                Err(QesError::Admissibility(format!(
                    "neutral case needs q = 0, got q = {}",
                    consts.total_charge
                )))
            }
            _ => Ok(()),
        }
    }

    /// Field parameter realised by the pair (`omega_c` or `Omega_q`).
    pub fn field_of(&self, consts: &DerivedConstants) -> f64 {
        match self {
            CouplingCase::ChargedEc0 => consts.omega_c,
            CouplingCase::NeutralRest => consts.big_omega_q,
        }
    }

    /// Coefficients of the radial problem when the field parameter equals `field`.
    pub fn coupling_at(&self, consts: &DerivedConstants, field: f64) -> FieldCoupling {
        let m = consts.reduced_mass;
        match self {
            CouplingCase::ChargedEc0 => FieldCoupling {
                lambda_rot: field,
                lambda_conf: m * field * field / 8.0,
            },
            CouplingCase::NeutralRest => FieldCoupling {
                lambda_rot: 2.0 * field * (consts.mu2 - consts.mu1).abs(),
                lambda_conf: m * field * field / 2.0,
            },
        }
    }

    /// Frequency `w` with `lambda_conf = m_r w^2 / 8`.
    pub fn confinement_frequency(&self, field: f64) -> f64 {
        match self {
            CouplingCase::ChargedEc0 => field,
            CouplingCase::NeutralRest => 2.0 * field,
        }
    }
}

/// Coefficients entering
/// `-(1/2m)(d2 + d/rho) + s^2/(2m rho^2) - s lambda_rot / 2 + lambda_conf rho^2 + V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCoupling {
    pub lambda_rot: f64,
    pub lambda_conf: f64,
}

pub fn effective_radial_problem(
    consts: &DerivedConstants,
    case: CouplingCase,
) -> Result<FieldCoupling> {
    case.check(consts)?;
    Ok(case.coupling_at(consts, case.field_of(consts)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    I,
    II,
    III,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::I => "I",
            Family::II => "II",
            Family::III => "III",
        }
    }
}

/// Interaction potential between the particles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum PotentialSpec {
    /// `g_c/rho + theta/rho^2 + k1 rho + k2 rho^2`
    #[serde(rename = "I")]
    FamilyI {
        coulomb: f64,
        theta: f64,
        k1: f64,
        k2: f64,
    },
    /// `theta/rho^2 + k2 rho^2 + k4 rho^4 + k6 rho^6`
    #[serde(rename = "II")]
    FamilyII {
        theta: f64,
        k2: f64,
        k4: f64,
        k6: f64,
    },
    /// `l4/rho^4 + l3/rho^3 + l2/rho^2 + l1/rho - k2 rho^2`
    #[serde(rename = "III")]
    FamilyIII {
        l1: f64,
        l2: f64,
        l3: f64,
        l4: f64,
        k2: f64,
    },
}

impl PotentialSpec {
    pub fn family(&self) -> Family {
        match self {
            PotentialSpec::FamilyI { .. } => Family::I,
            PotentialSpec::FamilyII { .. } => Family::II,
            PotentialSpec::FamilyIII { .. } => Family::III,
        }
    }

    pub fn value(&self, rho: f64) -> f64 {
        match *self {
            PotentialSpec::FamilyI {
                coulomb,
                theta,
                k1,
                k2,
            } => coulomb / rho + theta / (rho * rho) + k1 * rho + k2 * rho * rho,
            PotentialSpec::FamilyII { theta, k2, k4, k6 } => {
                let r2 = rho * rho;
                theta / r2 + r2 * (k2 + r2 * (k4 + r2 * k6))
            }
            PotentialSpec::FamilyIII { l1, l2, l3, l4, k2 } => {
                let x = 1.0 / rho;
                x * (l1 + x * (l2 + x * (l3 + x * l4))) - k2 * rho * rho
            }
        }
    }

    /// True when the potential is singular beyond `1/rho^2` at the origin.
    pub fn strongly_singular(&self) -> bool {
        matches!(self, PotentialSpec::FamilyIII { l3, l4, .. } if *l3 != 0.0 || *l4 != 0.0)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match (*self, name) {
            (PotentialSpec::FamilyI { coulomb, .. }, "coulomb") => Some(coulomb),
            (PotentialSpec::FamilyI { theta, .. }, "theta") => Some(theta),
            (PotentialSpec::FamilyI { k1, .. }, "k1") => Some(k1),
            (PotentialSpec::FamilyI { k2, .. }, "k2") => Some(k2),
            (PotentialSpec::FamilyII { theta, .. }, "theta") => Some(theta),
            (PotentialSpec::FamilyII { k2, .. }, "k2") => Some(k2),
            (PotentialSpec::FamilyII { k4, .. }, "k4") => Some(k4),
            (PotentialSpec::FamilyII { k6, .. }, "k6") => Some(k6),
            (PotentialSpec::FamilyIII { l1, .. }, "l1") => Some(l1),
            (PotentialSpec::FamilyIII { l2, .. }, "l2") => Some(l2),
            (PotentialSpec::FamilyIII { l3, .. }, "l3") => Some(l3),
            (PotentialSpec::FamilyIII { l4, .. }, "l4") => Some(l4),
            (PotentialSpec::FamilyIII { k2, .. }, "k2") => Some(k2),
            _ => None,
        }
    }

    /// Copy with one named coefficient replaced; `None` if the family has no such coefficient.
    pub fn with(&self, name: &str, v: f64) -> Option<Self> {
        let mut out = *self;
        let slot = match (&mut out, name) {
            (PotentialSpec::FamilyI { coulomb, .. }, "coulomb") => coulomb,
            (PotentialSpec::FamilyI { theta, .. }, "theta") => theta,
            (PotentialSpec::FamilyI { k1, .. }, "k1") => k1,
            (PotentialSpec::FamilyI { k2, .. }, "k2") => k2,
            (PotentialSpec::FamilyII { theta, .. }, "theta") => theta,
            (PotentialSpec::FamilyII { k2, .. }, "k2") => k2,
            (PotentialSpec::FamilyII { k4, .. }, "k4") => k4,
            (PotentialSpec::FamilyII { k6, .. }, "k6") => k6,
            (PotentialSpec::FamilyIII { l1, .. }, "l1") => l1,
            (PotentialSpec::FamilyIII { l2, .. }, "l2") => l2,
            (PotentialSpec::FamilyIII { l3, .. }, "l3") => l3,
            (PotentialSpec::FamilyIII { l4, .. }, "l4") => l4,
            (PotentialSpec::FamilyIII { k2, .. }, "k2") => k2,
            _ => return None,
        };
        *slot = v;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn equal_pair_constants() {
        let c = derive_constants(&ParticlePair {
            m1: 1.0,
            m2: 1.0,
            e1: -1.0,
            e2: -1.0,
            b: 1.0,
        })
        .unwrap();
        assert_eq!(c.reduced_mass, 0.5);
        assert_eq!(c.total_charge, -2.0);
        assert_eq!(c.coupling_charge, 0.0);
        assert_eq!(c.omega_c, -1.0);
        assert_eq!((c.mu1, c.mu2), (0.5, 0.5));
        assert!(CouplingCase::ChargedEc0.check(&c).is_ok());
    }

    #[test]
    fn neutral_pair_constants() {
        let c = derive_constants(&ParticlePair {
            m1: 1.0,
            m2: 2.0,
            e1: 3.0,
            e2: -3.0,
            b: 1.0,
        })
        .unwrap();
        assert_eq!(c.total_charge, 0.0);
        assert_relative_eq!(c.coupling_charge, 3.0, epsilon = 1e-15);
        assert_relative_eq!(c.omega_q, 1.5, epsilon = 1e-15);
        assert!(CouplingCase::NeutralRest.check(&c).is_ok());
        assert!(matches!(
            CouplingCase::ChargedEc0.check(&c),
            Err(QesError::Admissibility(_))
        ));
    }

    #[test]
    fn nonpositive_mass_rejected() {
        let p = ParticlePair {
            m1: 0.0,
            m2: 1.0,
            e1: 1.0,
            e2: 1.0,
            b: 1.0,
        };
        assert!(matches!(derive_constants(&p), Err(QesError::Domain(_))));
    }

    #[test]
    fn effective_coefficients() {
        // q = 2, M = 2, B = 2 -> omega_c = 2, m_r = 1/2
        let c = derive_constants(&ParticlePair {
            m1: 1.0,
            m2: 1.0,
            e1: 1.0,
            e2: 1.0,
            b: 2.0,
        })
        .unwrap();
        let fc = effective_radial_problem(&c, CouplingCase::ChargedEc0).unwrap();
        assert_eq!(fc.lambda_rot, 2.0);
        assert_eq!(fc.lambda_conf, 0.25);

        let c = derive_constants(&ParticlePair {
            m1: 1.0,
            m2: 1.0,
            e1: 1.0,
            e2: -1.0,
            b: 2.0,
        })
        .unwrap();
        let fc = effective_radial_problem(&c, CouplingCase::NeutralRest).unwrap();
        assert_eq!(c.big_omega_q, 2.0);
        assert_eq!(fc.lambda_rot, 0.0);
        assert_eq!(fc.lambda_conf, 1.0);

        let c = derive_constants(&ParticlePair {
            m1: 1.0,
            m2: 1.0,
            e1: 1.0,
            e2: 1.0,
            b: 0.0,
        })
        .unwrap();
        let fc = effective_radial_problem(&c, CouplingCase::ChargedEc0).unwrap();
        assert_eq!((fc.lambda_rot, fc.lambda_conf), (0.0, 0.0));
    }

    #[test]
    fn potential_coefficients_by_name() {
        let p = PotentialSpec::FamilyII {
            theta: 0.0,
            k2: -4.0,
            k4: 0.0,
            k6: 0.5,
        };
        assert_eq!(p.get("k6"), Some(0.5));
        assert_eq!(p.get("l1"), None);
        assert_eq!(p.with("k2", 1.0).unwrap().get("k2"), Some(1.0));
        assert_eq!(p.value(1.0), -3.5);
    }
}
