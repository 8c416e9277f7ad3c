//! Block eigenvalues, quantization conditions, and energy levels.

use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{ansatz_params_at, qes_block, AnsatzParams, QesBlock};
use crate::error::{QesError, Result};
use crate::model::{
    derive_constants, CouplingCase, DerivedConstants, Family, FieldCoupling, ParticlePair,
    PotentialSpec,
};
use crate::roots::{bisect, log_grid, sign_changes};
use crate::wavefn::{count_nodes, polynomial_from_eigenvector, RadialWavefunction};

/// `|Im mu| <= REALITY_TOL * (1 + |mu|)` counts as real.
pub const REALITY_TOL: f64 = 1e-10;
/// Number of scan points for the field search.
pub const SCAN_POINTS: usize = 512;
/// Decades below and above the natural field scale covered by the scan.
pub const SCAN_DECADES: f64 = 6.0;
/// Relative width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-15;

/// Which closed forms to use where the alternate formulas and the coefficient-matched
/// derivation disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    #[default]
    Derived,
    /// Alternate variants: family II field condition with `4d + 2 xi + 2`, family III
    /// energy with `eta^2 / (2 m_r)` and `l2` condition with `+2 eta tau`.
    Alternate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchEigen {
    pub mu: Complex<f64>,
    /// `beta d / 2 - mu` (family III: `beta d / 2 - d - mu`); `None` for complex branches.
    pub nu: Option<f64>,
    pub branch_index: usize,
    pub is_real: bool,
}

fn dump(m: &DMatrix<f64>) -> String {
    format!("{m:.17e}")
}

/// All `d + 1` eigenvalues, ordered by real part then imaginary part.
pub fn block_eigenvalues(block: &QesBlock) -> Result<Vec<BranchEigen>> {
    let n = block.matrix.nrows();
    let mut mus: Vec<Complex<f64>> = if n == 1 {
        vec![Complex::new(block.matrix[(0, 0)], 0.0)]
    } else {
        let schur = nalgebra::linalg::Schur::try_new(block.matrix.clone(), f64::EPSILON, 10_000)
            .ok_or_else(|| {
                QesError::Numerical(format!(
                    "Schur iteration did not converge for block {}",
                    dump(&block.matrix)
                ))
            })?;
        schur.complex_eigenvalues().iter().copied().collect()
    };
    for mu in &mut mus {
        if mu.im.abs() <= REALITY_TOL * (1.0 + mu.norm()) {
            mu.im = 0.0;
        }
    }
    mus.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let a = &block.ansatz;
    Ok(mus
        .into_iter()
        .enumerate()
        .map(|(i, mu)| {
            let is_real = mu.im == 0.0;
            BranchEigen {
                mu,
                nu: is_real.then(|| nu_of(a, mu.re)),
                branch_index: i,
                is_real,
            }
        })
        .collect())
}

pub fn nu_of(a: &AnsatzParams, mu: f64) -> f64 {
    let d = a.d as f64;
    match a.family {
        Family::III => a.beta * d / 2.0 - d - mu,
        _ => a.beta * d / 2.0 - mu,
    }
}

fn null_vector(m: DMatrix<f64>) -> Result<DVector<f64>> {
    let n = m.nrows();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let svd = m.clone().svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| QesError::Numerical("SVD produced no right vectors".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let v: DVector<f64> = v_t.row(imin).transpose();
    let resid = (&m * &v).norm() / scale;
    if n > 1 && resid > 1e-8 {
        return Err(QesError::Numerical(format!(
            "eigenvector residual {resid:e} exceeds 1e-8 for {}",
            dump(&m)
        )));
    }
    Ok(v)
}

/// Right eigenvector for a real eigenvalue, unit 2-norm.
pub fn right_eigenvector(block: &QesBlock, mu: f64) -> Result<DVector<f64>> {
    let n = block.matrix.nrows();
    null_vector(&block.matrix - DMatrix::identity(n, n) * mu)
}

/// Left eigenvector (`w^T M = mu w^T`) for a real eigenvalue, unit 2-norm.
pub fn left_eigenvector(block: &QesBlock, mu: f64) -> Result<DVector<f64>> {
    let n = block.matrix.nrows();
    null_vector(block.matrix.transpose() - DMatrix::identity(n, n) * mu)
}

/// Effective Coulomb strength `2 m_r g_c`.
fn epsilon(pot: &PotentialSpec, m: f64) -> f64 {
    match pot {
        PotentialSpec::FamilyI { coulomb, .. } => 2.0 * m * coulomb,
        _ => 0.0,
    }
}

fn family_i_terms(
    pot: &PotentialSpec,
    case: CouplingCase,
    m: f64,
    field: f64,
    s: i32,
    d: usize,
) -> Result<(AnsatzParams, Vec<BranchEigen>)> {
    let a = ansatz_params_at(pot, case, m, field, s, d)?;
    let eig = block_eigenvalues(&qes_block(&a))?;
    Ok((a, eig))
}

fn residual_from(pot: &PotentialSpec, m: f64, a: &AnsatzParams, mu: f64) -> f64 {
    epsilon(pot, m) + a.eta * (1.0 + 2.0 * a.xi) + a.c * mu
}

/// `eps + eta (1 + 2 xi) + c mu_branch(field)`; zero exactly on the quantized fields.
pub fn quantization_residual_i(
    field: f64,
    pot: &PotentialSpec,
    case: CouplingCase,
    m: f64,
    s: i32,
    d: usize,
    branch: usize,
) -> Result<f64> {
    if !matches!(pot, PotentialSpec::FamilyI { .. }) {
        return Err(QesError::Domain("family I residual needs a family I potential".into()));
    }
    let (a, eig) = family_i_terms(pot, case, m, field, s, d)?;
    let b = eig.get(branch).ok_or(QesError::BranchOutOfRange {
        branch,
        size: d + 1,
    })?;
    if !b.is_real {
        return Err(QesError::Numerical(format!("branch {branch} is complex: {}", b.mu)));
    }
    Ok(residual_from(pot, m, &a, b.mu.re))
}

/// Roots of the family I condition.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FieldRoots {
    /// `(field, branch)` pairs, field > 0.
    pub roots: Vec<(f64, usize)>,
    /// Branches whose residual vanishes for every field.
    pub degenerate: Vec<usize>,
}

fn field_scale(pot: &PotentialSpec, m: f64) -> f64 {
    let (coulomb, k1, k2) = match *pot {
        PotentialSpec::FamilyI { coulomb, k1, k2, .. } => (coulomb, k1, k2),
        _ => (0.0, 0.0, 0.0),
    };
    let eps = 2.0 * m * coulomb;
    [eps * eps / m, (8.0 * k2.abs() / m).sqrt(), (k1 * k1 / m).cbrt()]
        .into_iter()
        .filter(|x| *x > 0.0 && x.is_finite())
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
        .unwrap_or(1.0)
}

pub fn solve_quantized_field_i(
    pot: &PotentialSpec,
    case: CouplingCase,
    m: f64,
    s: i32,
    d: usize,
) -> Result<FieldRoots> {
    let k2 = match *pot {
        PotentialSpec::FamilyI { k2, .. } => k2,
        _ => return Err(QesError::Domain("family I solver needs a family I potential".into())),
    };
    // the radicand m^2 w^2 + 8 k2 m must stay positive
    let w_min = if k2 < 0.0 { (-8.0 * k2 / m).sqrt() } else { 0.0 };
    let field_min = match case {
        CouplingCase::ChargedEc0 => w_min,
        CouplingCase::NeutralRest => w_min / 2.0,
    };
    let scale = field_scale(pot, m);
    let grid = log_grid(field_min, scale, -SCAN_DECADES, SCAN_DECADES, SCAN_POINTS);
    let n = d + 1;

    let mut table = vec![Vec::with_capacity(grid.len()); n];
    let mut magnitude = vec![0.0f64; n];
    for &f in &grid {
        let (a, eig) = family_i_terms(pot, case, m, f, s, d)?;
        let mu_max = eig.iter().map(|b| b.mu.norm()).fold(0.0, f64::max);
        for (b, e) in eig.iter().enumerate() {
            if !e.is_real {
                log::warn!("complex family I branch {b} at field {f}: {}", e.mu);
                table[b].push(f64::NAN);
                continue;
            }
            let r = residual_from(pot, m, &a, e.mu.re);
            let size = epsilon(pot, m).abs() + (a.eta * (1.0 + 2.0 * a.xi)).abs() + a.c * mu_max;
            magnitude[b] = magnitude[b].max(r.abs() / size.max(f64::MIN_POSITIVE));
            table[b].push(r);
        }
    }

    let mut out = FieldRoots::default();
    for b in 0..n {
        if magnitude[b] <= 1e-12 {
            out.degenerate.push(b);
            continue;
        }
        for i in sign_changes(&table[b]) {
            let root = if table[b][i] == 0.0 || i + 1 == grid.len() {
                grid[i]
            } else {
                bisect(
                    |f| quantization_residual_i(f, pot, case, m, s, d, b),
                    grid[i],
                    grid[i + 1],
                    table[b][i],
                    BISECTION_TOL,
                )?
            };
            if root > 0.0 {
                out.roots.push((root, b));
            }
        }
    }
    Ok(out)
}

/// Closed-form field for family II, `None` when no positive field satisfies the condition.
pub fn solve_quantized_field_ii(
    pot: &PotentialSpec,
    case: CouplingCase,
    m: f64,
    s: i32,
    d: usize,
    variant: FormulaVariant,
) -> Result<Option<f64>> {
    let (k2, k4, k6) = match *pot {
        PotentialSpec::FamilyII { k2, k4, k6, .. } => (k2, k4, k6),
        _ => return Err(QesError::Domain("family II solver needs a family II potential".into())),
    };
    let a = ansatz_params_at(pot, case, m, 0.0, s, d)?;
    let dd = d as f64;
    // m^2 w^2 with w the confinement frequency (omega_c, or 2 Omega_q)
    let rhs = match variant {
        FormulaVariant::Derived => {
            16.0 * a.eta * a.eta - 32.0 * a.tau * (a.xi + 2.0) - 64.0 * a.tau * dd - 8.0 * k2 * m
        }
        FormulaVariant::Alternate => {
            4.0 * (m * k4 * k4 / (2.0 * k6)
                - (2.0 * k6 * m).sqrt() * (4.0 * dd + 2.0 * a.xi + 2.0)
                - 2.0 * k2 * m)
        }
    };
    if !(rhs > 0.0) {
        return Ok(None);
    }
    let w = rhs.sqrt() / m;
    Ok(Some(match case {
        CouplingCase::ChargedEc0 => w,
        CouplingCase::NeutralRest => w / 2.0,
    }))
}

/// Field fixed by `k2` and the `l2` required by the given branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyIiiConstraints {
    pub field: f64,
    pub l2: f64,
    pub ansatz: AnsatzParams,
    pub branch: BranchEigen,
}

pub fn solve_constraints_iii(
    pot: &PotentialSpec,
    case: CouplingCase,
    m: f64,
    s: i32,
    d: usize,
    branch: usize,
    variant: FormulaVariant,
) -> Result<FamilyIiiConstraints> {
    let k2 = match *pot {
        PotentialSpec::FamilyIII { k2, .. } => k2,
        _ => return Err(QesError::Domain("family III solver needs a family III potential".into())),
    };
    if !(k2 > 0.0) {
        return Err(QesError::Domain(format!(
            "k2 = {k2}: no admissible field for family III"
        )));
    }
    let field = match case {
        CouplingCase::ChargedEc0 => (8.0 * k2 / m).sqrt(),
        CouplingCase::NeutralRest => (2.0 * k2 / m).sqrt(),
    };
    let a = ansatz_params_at(pot, case, m, field, s, d)?;
    let eig = block_eigenvalues(&qes_block(&a))?;
    let b = *eig.get(branch).ok_or(QesError::BranchOutOfRange {
        branch,
        size: d + 1,
    })?;
    let ss = (s as f64) * (s as f64);
    let eta_tau = match variant {
        FormulaVariant::Derived => -2.0 * a.eta * a.tau,
        FormulaVariant::Alternate => 2.0 * a.eta * a.tau,
    };
    let l2 = (a.xi * a.xi + eta_tau - ss - b.mu.re) / (2.0 * m);
    Ok(FamilyIiiConstraints {
        field,
        l2,
        ansatz: a,
        branch: b,
    })
}

/// Energy of relative motion for a real block eigenvalue `mu`.
pub fn relative_energy(
    a: &AnsatzParams,
    coupling: &FieldCoupling,
    m: f64,
    mu: f64,
    variant: FormulaVariant,
) -> f64 {
    let rot = a.s as f64 * coupling.lambda_rot / 2.0;
    match a.family {
        Family::I => {
            (4.0 * a.tau * (a.xi + 1.0 + a.d as f64) - a.eta * a.eta) / (2.0 * m) - rot
        }
        Family::II => 2.0 * a.eta * (a.xi + 1.0) / m + 2.0 * a.c * mu / m - rot,
        Family::III => {
            let eta2 = match variant {
                FormulaVariant::Derived => a.eta * a.eta / m,
                FormulaVariant::Alternate => a.eta * a.eta / (2.0 * m),
            };
            -0.5 * (a.s as f64 * coupling.lambda_rot + eta2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LineFlags {
    pub normalizable: bool,
    pub real_branch: bool,
    pub nodes: usize,
    /// The condition holds for every field; the line is reported at the pair's own field.
    #[serde(default)]
    pub field_degenerate: bool,
}

/// One solved level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLine {
    pub family: Family,
    pub case: CouplingCase,
    pub d: usize,
    pub s: i32,
    pub branch: usize,
    pub quantized_name: String,
    pub quantized_value: f64,
    /// Field parameter (`omega_c` or `Omega_q`) the level lives at.
    pub field: f64,
    pub reduced_mass: f64,
    pub coupling: FieldCoupling,
    /// Potential with any solved coefficient filled in.
    pub potential: PotentialSpec,
    pub ansatz: AnsatzParams,
    pub e_rho: f64,
    pub mu: f64,
    pub mu_im: f64,
    pub nu: Option<f64>,
    /// Coefficients in physical `rho`, ascending; empty for complex branches.
    pub poly: Vec<f64>,
    pub flags: LineFlags,
}

impl SpectrumLine {
    pub fn wavefunction(&self) -> RadialWavefunction {
        RadialWavefunction::new(self.ansatz, self.poly.clone())
    }

    fn sort_key(&self) -> (Family, usize, i32, usize) {
        (self.family, self.d, self.s, self.branch)
    }
}

/// Everything needed to assemble a batch of levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub pair: ParticlePair,
    pub case: CouplingCase,
    pub potential: PotentialSpec,
    pub d_list: Vec<usize>,
    pub s_list: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub d: usize,
    pub s: i32,
    pub error: QesError,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumReport {
    pub lines: Vec<SpectrumLine>,
    pub failures: Vec<CellFailure>,
}

struct LineInput<'a> {
    consts: &'a DerivedConstants,
    case: CouplingCase,
    potential: PotentialSpec,
    quantized_name: &'static str,
    quantized_value: f64,
    field: f64,
    ansatz: AnsatzParams,
    branch: BranchEigen,
    field_degenerate: bool,
}

fn build_line(inp: LineInput<'_>, variant: FormulaVariant) -> Result<SpectrumLine> {
    let m = inp.consts.reduced_mass;
    let coupling = inp.case.coupling_at(inp.consts, inp.field);
    let a = inp.ansatz;
    let mu = inp.branch.mu;
    let (poly, nodes) = if inp.branch.is_real {
        let poly = polynomial_from_eigenvector(&qes_block(&a), mu.re)?;
        let nodes = count_nodes(&RadialWavefunction::new(a, poly.clone()));
        (poly, nodes)
    } else {
        (Vec::new(), 0)
    };
    Ok(SpectrumLine {
        family: a.family,
        case: inp.case,
        d: a.d,
        s: a.s,
        branch: inp.branch.branch_index,
        quantized_name: inp.quantized_name.to_string(),
        quantized_value: inp.quantized_value,
        field: inp.field,
        reduced_mass: m,
        coupling,
        potential: inp.potential,
        ansatz: a,
        e_rho: relative_energy(&a, &coupling, m, mu.re, variant),
        mu: mu.re,
        mu_im: mu.im,
        nu: inp.branch.nu,
        poly,
        flags: LineFlags {
            normalizable: a.normalizable,
            real_branch: inp.branch.is_real,
            nodes,
            field_degenerate: inp.field_degenerate,
        },
    })
}

/// All levels of one `(d, s)` cell.
pub fn solve_cell(
    consts: &DerivedConstants,
    case: CouplingCase,
    pot: &PotentialSpec,
    d: usize,
    s: i32,
    variant: FormulaVariant,
) -> Result<Vec<SpectrumLine>> {
    case.check(consts)?;
    let m = consts.reduced_mass;
    let field_name = case.field_name();
    let mut lines = Vec::new();
    match pot.family() {
        Family::I => {
            let roots = solve_quantized_field_i(pot, case, m, s, d)?;
            for &(field, b) in &roots.roots {
                let (a, eig) = family_i_terms(pot, case, m, field, s, d)?;
                lines.push(build_line(
                    LineInput {
                        consts,
                        case,
                        potential: *pot,
                        quantized_name: field_name,
                        quantized_value: field,
                        field,
                        ansatz: a,
                        branch: eig[b],
                        field_degenerate: false,
                    },
                    variant,
                )?);
            }
            if !roots.degenerate.is_empty() {
                let field = case.field_of(consts);
                let (a, eig) = family_i_terms(pot, case, m, field, s, d)?;
                for &b in &roots.degenerate {
                    lines.push(build_line(
                        LineInput {
                            consts,
                            case,
                            potential: *pot,
                            quantized_name: field_name,
                            quantized_value: field,
                            field,
                            ansatz: a,
                            branch: eig[b],
                            field_degenerate: true,
                        },
                        variant,
                    )?);
                }
            }
        }
        Family::II => {
            if let Some(field) = solve_quantized_field_ii(pot, case, m, s, d, variant)? {
                let a = ansatz_params_at(pot, case, m, field, s, d)?;
                for branch in block_eigenvalues(&qes_block(&a))? {
                    lines.push(build_line(
                        LineInput {
                            consts,
                            case,
                            potential: *pot,
                            quantized_name: field_name,
                            quantized_value: field,
                            field,
                            ansatz: a,
                            branch,
                            field_degenerate: false,
                        },
                        variant,
                    )?);
                }
            }
        }
        Family::III => {
            for b in 0..=d {
                let sol = solve_constraints_iii(pot, case, m, s, d, b, variant)?;
                let potential = pot.with("l2", sol.l2).expect("family III has l2");
                lines.push(build_line(
                    LineInput {
                        consts,
                        case,
                        potential,
                        quantized_name: "l2",
                        quantized_value: sol.l2,
                        field: sol.field,
                        ansatz: sol.ansatz,
                        branch: sol.branch,
                        field_degenerate: false,
                    },
                    variant,
                )?);
            }
        }
    }
    Ok(lines)
}

/// Solves every `(d, s)` cell in parallel; lines sorted by energy, failures collected per cell.
pub fn assemble_spectrum(problem: &Problem, variant: FormulaVariant) -> Result<SpectrumReport> {
    let consts = derive_constants(&problem.pair)?;
    problem.case.check(&consts)?;
    let cells: Vec<(usize, i32)> = problem
        .d_list
        .iter()
        .flat_map(|&d| problem.s_list.iter().map(move |&s| (d, s)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(d, s)| {
            (
                d,
                s,
                solve_cell(&consts, problem.case, &problem.potential, d, s, variant),
            )
        })
        .collect();
    let mut report = SpectrumReport::default();
    for (d, s, r) in results {
        match r {
            Ok(lines) => report.lines.extend(lines),
            Err(error) => report.failures.push(CellFailure { d, s, error }),
        }
    }
    report.lines.sort_by(|a, b| {
        a.e_rho
            .total_cmp(&b.e_rho)
            .then_with(|| a.sort_key().cmp(&b.sort_key()))
    });
    Ok(report)
}

/// Orders lines by `(family, d, s, branch)`, then field.
pub fn sort_for_output(lines: &mut [SpectrumLine]) {
    lines.sort_by(|a, b| {
        a.sort_key()
            .cmp(&b.sort_key())
            .then(a.quantized_value.total_cmp(&b.quantized_value))
    });
}
