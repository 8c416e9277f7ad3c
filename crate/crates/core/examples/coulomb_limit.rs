//! Quantized cyclotron frequencies for a pure Coulomb interaction.

use qes::model::{derive_constants, CouplingCase, ParticlePair, PotentialSpec};
use qes::spectra::{solve_cell, FormulaVariant};

fn main() {
    let pair = ParticlePair { m1: 1.0, m2: 1.0, e1: 1.0, e2: 1.0, b: 2.0 };
    let consts = derive_constants(&pair).unwrap();
    let m = consts.reduced_mass;
    let pot = PotentialSpec::FamilyI { coulomb: 1.0, theta: 0.0, k1: 0.0, k2: 0.0 };
    let eps = 2.0 * m * 1.0;
    println!("{:>2} {:>3} {:>3} {:>22} {:>22} {:>10}", "d", "s", "br", "omega_c", "E_rho", "nu^2 w m/eps^2 - 1");
    for d in 0..=3 {
        for s in [0, 1] {
            for l in solve_cell(&consts, CouplingCase::ChargedEc0, &pot, d, s, FormulaVariant::Derived).unwrap() {
                let nu = l.nu.unwrap();
                println!(
                    "{d:>2} {s:>3} {:>3} {:>22.15e} {:>22.15e} {:>10.1e}",
                    l.branch,
                    l.field,
                    l.e_rho,
                    nu * nu * l.field * m / (eps * eps) - 1.0
                );
            }
        }
    }
}
