//! Quasi-exactly-solvable spectra for two charged particles in a uniform magnetic field.
//!
//! After separating the centre of mass, the relative radial equation with one of three
//! potential families admits polynomial solutions whenever the field (or one potential
//! coefficient) takes special values. This crate finds those values and levels from a
//! small `sl(2)` block, rebuilds the wavefunctions, and checks everything against an
//! independent finite-difference solver.

pub mod ansatz;
pub mod cli;
pub mod error;
pub mod model;
pub mod oracle;
pub mod roots;
pub mod sl2;
pub mod spectra;
pub mod wavefn;

pub use ansatz::{ansatz_params, ansatz_params_at, invariance_check, qes_block, AnsatzParams, QesBlock};
pub use error::{QesError, Result};
pub use model::{derive_constants, CouplingCase, Family, ParticlePair, PotentialSpec};
pub use oracle::{cross_validate, OracleOptions, OracleReport};
pub use spectra::{assemble_spectrum, solve_cell, FormulaVariant, Problem, SpectrumLine};
pub use wavefn::{count_nodes, RadialWavefunction};
