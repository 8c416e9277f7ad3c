//! Finite-difference ladder, Richardson extrapolation, and comparison with algebraic levels.

use qes::model::{derive_constants, CouplingCase, FieldCoupling, ParticlePair, PotentialSpec};
use qes::oracle::{auto_grid, cross_validate, ladder_eigenvalues, OracleOptions, RadialOde};
use qes::spectra::{solve_cell, FormulaVariant};

fn main() {
    // 2D oscillator: levels Omega (2 n + |s| + 1)
    let ode = RadialOde::new(1.0, 1, FieldCoupling { lambda_rot: 0.0, lambda_conf: 0.5 }, |_| 0.0);
    let grid = auto_grid(&ode, 2.0, &OracleOptions::default()).unwrap();
    let lad = ladder_eigenvalues(&ode, &grid, 3, 3).unwrap();
    for (g, e) in lad.grids.iter().zip(&lad.per_grid) {
        println!("{:>6} points: {:?}", g.points, e);
    }
    println!("extrapolated {:?}, observed order {:.3}", lad.extrapolated, lad.observed_order(0).unwrap());

    let pair = ParticlePair { m1: 1.0, m2: 3.0, e1: 0.5, e2: -0.5, b: 1.0 };
    let consts = derive_constants(&pair).unwrap();
    let pot = PotentialSpec::FamilyI { coulomb: -0.8, theta: 0.2, k1: 0.1, k2: 0.05 };
    for d in 0..=2 {
        for line in solve_cell(&consts, CouplingCase::NeutralRest, &pot, d, 1, FormulaVariant::Derived).unwrap() {
            let rep = cross_validate(&line, &OracleOptions::default()).unwrap();
            let m = rep.matched_line.unwrap();
            println!(
                "neutral d = {d} branch {} Omega_q = {:.10}: E = {:.12}, oracle {:.12}, gap {:.1e}, residual {:.1e}, pass {}",
                line.branch, line.field, line.e_rho, m.oracle_energy, m.relative, rep.residual_max, rep.pass
            );
        }
    }
}
