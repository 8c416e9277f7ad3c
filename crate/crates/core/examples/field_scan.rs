//! How the quantized field follows a deformation of the Coulomb interaction.

use qes::model::{CouplingCase, PotentialSpec};
use qes::spectra::solve_quantized_field_i;

fn main() {
    let m = 0.5;
    for i in 0..=10 {
        let k1 = 0.1 * i as f64;
        let pot = PotentialSpec::FamilyI { coulomb: 1.0, theta: 0.0, k1, k2: 0.0 };
        let roots = solve_quantized_field_i(&pot, CouplingCase::ChargedEc0, m, 0, 1).unwrap();
        let fields: Vec<String> = roots.roots.iter().map(|(w, b)| format!("branch {b}: {w:.12}")).collect();
        println!("k1 = {k1:.1}: {}", fields.join(", "));
    }
}
