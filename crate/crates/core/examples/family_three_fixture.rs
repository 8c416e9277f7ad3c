//! Inverse-power potential solved for l2: zeta = rho^(1/2) exp(-1/rho - rho), E = -1/2.

use qes::model::{derive_constants, CouplingCase, ParticlePair, PotentialSpec};
use qes::oracle::{cross_validate, OracleOptions};
use qes::spectra::{solve_cell, FormulaVariant};

fn main() {
    let pair = ParticlePair { m1: 2.0, m2: 2.0, e1: 1.0, e2: 1.0, b: 0.0 };
    let consts = derive_constants(&pair).unwrap();
    let pot = PotentialSpec::FamilyIII { l1: -1.0, l2: 0.0, l3: 0.0, l4: 0.5, k2: 2.0 };
    for variant in [FormulaVariant::Derived, FormulaVariant::Alternate] {
        let line = solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 0, 0, variant).unwrap().remove(0);
        let rep = cross_validate(&line, &OracleOptions::default()).unwrap();
        println!(
            "{variant:?}: omega_c = {}, l2 = {}, E_rho = {}, residual {:.2e}, nearest oracle level {:?}, pass = {}",
            line.field,
            line.quantized_value,
            line.e_rho,
            rep.residual_max,
            rep.matched_line.map(|m| m.oracle_energy),
            rep.pass
        );
    }

    // larger blocks: one l2 per branch
    for line in solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 2, 1, FormulaVariant::Derived).unwrap() {
        println!(
            "d = 2, s = 1, branch {}: l2 = {:.12}, E = {:.12}, nodes {}, normalizable {}",
            line.branch, line.quantized_value, line.e_rho, line.flags.nodes, line.flags.normalizable
        );
    }
}
