//! Rebuilding, normalizing and sampling a radial wavefunction.

use qes::model::{derive_constants, CouplingCase, ParticlePair, PotentialSpec};
use qes::spectra::{solve_cell, FormulaVariant};
use qes::wavefn::{count_nodes, QuadratureOptions};

fn main() {
    let pair = ParticlePair { m1: 1.0, m2: 1.0, e1: 1.0, e2: 1.0, b: 2.0 };
    let consts = derive_constants(&pair).unwrap();
    let pot = PotentialSpec::FamilyI { coulomb: -1.0, theta: 0.0, k1: 0.0, k2: 0.0 };
    let lines = solve_cell(&consts, CouplingCase::ChargedEc0, &pot, 2, 0, FormulaVariant::Derived).unwrap();
    for line in &lines {
        let wf = line.wavefunction().normalize(&QuadratureOptions::default()).unwrap();
        println!(
            "branch {} omega_c = {:.10}: p = {:?}, nodes {}, norm {:.12}",
            line.branch,
            line.field,
            line.poly,
            count_nodes(&wf),
            wf.norm.unwrap()
        );
        println!("{:>8} {:>22} {:>22}", "rho", "zeta", "zeta / norm");
        for i in 0..=8 {
            let rho = 0.01 + i as f64;
            let z = wf.evaluate_zeta(rho).unwrap();
            println!("{rho:>8.2} {:>22.14e} {:>22.14e}", z.value, z.value / wf.norm.unwrap());
        }
    }
}
