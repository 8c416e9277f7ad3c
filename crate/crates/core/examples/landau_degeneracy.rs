//! At a fixed field the closed-form energies do not depend on s > 0 until theta splits them.

use qes::ansatz::ansatz_params_at;
use qes::model::{CouplingCase, FieldCoupling, PotentialSpec};
use qes::spectra::{relative_energy, FormulaVariant};

fn main() {
    let (m, field) = (0.5, 2.0);
    let coupling = FieldCoupling { lambda_rot: field, lambda_conf: m * field * field / 8.0 };
    for theta in [0.0, 0.1] {
        let pot = PotentialSpec::FamilyI { coulomb: 0.0, theta, k1: 0.0, k2: 0.0 };
        for d in 0..3 {
            let e: Vec<f64> = (1..=4)
                .map(|s| {
                    let a = ansatz_params_at(&pot, CouplingCase::ChargedEc0, m, field, s, d).unwrap();
                    relative_energy(&a, &coupling, m, 0.0, FormulaVariant::Derived)
                })
                .collect();
            println!("theta = {theta}, d = {d}: E(s = 1..4) = {e:?}");
        }
    }
}
