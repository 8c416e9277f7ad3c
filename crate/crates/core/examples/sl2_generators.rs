//! The finite-dimensional sl(2) representation on polynomials of degree <= d.

use qes::sl2::{commutator_defect, generator_matrices, quadratic_form_matrix, RepSpace};

fn main() {
    let space = RepSpace::from_degree(3);
    println!("dimension {}, spin {}", space.dim(), space.spin());
    let g = generator_matrices(space);
    for (name, m) in ["J+", "J-", "J0"].iter().zip(g.ordered()) {
        println!("{name} ={m}");
    }

    for n in [1, 2, 5, 10, 25] {
        println!("dim {n:>2}: commutator defect {}", commutator_defect(RepSpace::new(n).unwrap()));
    }

    // J0 J0 - J+ + 2 J0 in the 4-dimensional representation
    let mut a = [[0.0; 3]; 3];
    a[2][2] = 1.0;
    let h = quadratic_form_matrix(&a, &[-1.0, 0.0, 2.0], space);
    println!("J0^2 - J+ + 2 J0 ={h:.3}");
}
