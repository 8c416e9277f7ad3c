//! Exact check that the gauge-rotated operator keeps polynomials of degree <= d.

use qes::ansatz::{ansatz_params_at, check_closure, invariance_check};
use qes::model::{CouplingCase, PotentialSpec};

fn main() {
    let potentials = [
        PotentialSpec::FamilyI { coulomb: 0.7, theta: 0.13, k1: -0.4, k2: 0.25 },
        PotentialSpec::FamilyII { theta: 0.2, k2: -1.5, k4: 0.6, k6: 0.45 },
        PotentialSpec::FamilyIII { l1: -0.8, l2: 0.0, l3: 0.17, l4: 0.35, k2: 1.1 },
    ];
    for pot in &potentials {
        for d in [0, 3, 8] {
            let a = ansatz_params_at(pot, CouplingCase::ChargedEc0, 0.8, 1.7, 1, d).unwrap();
            let cert = invariance_check(&a);
            println!(
                "family {:<3} d = {d}: closed = {}, top-degree contributions {:?}",
                pot.family().name(),
                cert.closed,
                cert.top_contributions.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            );
        }
    }

    // the same operator built for the wrong degree leaks out of the space
    let a = ansatz_params_at(&potentials[0], CouplingCase::ChargedEc0, 0.8, 1.7, 1, 3).unwrap();
    let wrong = check_closure(&a.exact_shape().operator(4), 3);
    println!("operator for d = 4 on degree 3: closed = {}, first leak {:?}", wrong.closed, wrong.offending.map(|(k, p, c)| (k, p, c.to_string())));
}
