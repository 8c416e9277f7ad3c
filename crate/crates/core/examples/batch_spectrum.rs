//! Whole (d, s) grids solved in parallel and written as CSV.

use qes::cli::spectrum_csv;
use qes::model::{CouplingCase, ParticlePair, PotentialSpec};
use qes::spectra::{assemble_spectrum, sort_for_output, FormulaVariant, Problem};

fn main() {
    let problem = Problem {
        pair: ParticlePair { m1: 1.0, m2: 2.0, e1: 1.0, e2: 2.0, b: 1.5 },
        case: CouplingCase::ChargedEc0,
        potential: PotentialSpec::FamilyII { theta: 0.1, k2: -6.0, k4: 1.5, k6: 0.5 },
        d_list: vec![0, 1, 2, 3],
        s_list: vec![-2, -1, 0, 1, 2],
    };
    let report = assemble_spectrum(&problem, FormulaVariant::Derived).unwrap();
    for f in &report.failures {
        println!("d = {}, s = {}: {}", f.d, f.s, f.error);
    }
    let mut lines = report.lines;
    println!("lowest five levels:");
    for l in lines.iter().take(5) {
        println!("  d = {} s = {:>2} branch {}: E = {:.12}", l.d, l.s, l.branch, l.e_rho);
    }
    sort_for_output(&mut lines);
    print!("{}", spectrum_csv(&lines).unwrap());
}
