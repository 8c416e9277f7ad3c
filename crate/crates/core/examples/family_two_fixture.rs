//! Sextic oscillator with k6 = 1/2, k2 = -4: omega_c = 4 and zeta = exp(-rho^4 / 4).

use qes::model::{derive_constants, CouplingCase, ParticlePair, PotentialSpec};
use qes::oracle::{cross_validate, OracleOptions};
use qes::spectra::{solve_cell, FormulaVariant};

fn main() {
    let pair = ParticlePair { m1: 2.0, m2: 2.0, e1: 1.0, e2: 1.0, b: 0.0 };
    let consts = derive_constants(&pair).unwrap();
    let pot = PotentialSpec::FamilyII { theta: 0.0, k2: -4.0, k4: 0.0, k6: 0.5 };
    for variant in [FormulaVariant::Derived, FormulaVariant::Alternate] {
        let lines = solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 0, 0, variant).unwrap();
        let line = &lines[0];
        let rep = cross_validate(line, &OracleOptions::default()).unwrap();
        println!(
            "{variant:?}: omega_c = {:.15}, E_rho = {:.3e}, residual {:.1e}, oracle levels {:?}, pass = {}",
            line.field,
            line.e_rho,
            rep.residual_max,
            rep.energies.iter().map(|e| format!("{e:.8}")).collect::<Vec<_>>(),
            rep.pass
        );
    }
}
