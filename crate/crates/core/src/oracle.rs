//! Finite-difference eigensolver for the radial equation.
//!
//! The solver only sees samples of `V(rho)` and the coupling constants. With
//! `u = sqrt(rho) zeta` (uniform grids) or `u = rho zeta` (logarithmic grids) the
//! discretized operator is a symmetric tridiagonal matrix whose lowest eigenvalues are
//! found by Sturm-count bisection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::model::FieldCoupling;
use crate::spectra::SpectrumLine;
use crate::wavefn::{poly_eval_d2, RadialWavefunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Uniform,
    LogUniform,
}

/// Interior nodes of a radial grid; the solution vanishes one step beyond either end.
///
/// A uniform grid with `rho_min = 0` is cell centred, `rho_i = (i + 1/2) h`, so the
/// regular origin needs no boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

pub const MIN_POINTS: usize = 64;

impl RadialGrid {
    pub fn new(rho_min: f64, rho_max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(QesError::Domain(format!("grid needs at least {MIN_POINTS} points, got {points}")));
        }
        if !(rho_min >= 0.0 && rho_min < rho_max && rho_max.is_finite()) {
            return Err(QesError::Domain(format!(
                "grid bounds [{rho_min}, {rho_max}] invalid"
            )));
        }
        if spacing == Spacing::LogUniform && rho_min <= 0.0 {
            return Err(QesError::Domain("logarithmic grid needs rho_min > 0".into()));
        }
        Ok(Self {
            rho_min,
            rho_max,
            points,
            spacing,
        })
    }

    fn cell_centred(&self) -> bool {
        self.spacing == Spacing::Uniform && self.rho_min == 0.0
    }

    /// Step in `rho` (uniform) or `ln rho` (logarithmic).
    pub fn step(&self) -> f64 {
        match self.spacing {
            Spacing::Uniform if self.cell_centred() => self.rho_max / self.points as f64,
            Spacing::Uniform => (self.rho_max - self.rho_min) / (self.points + 1) as f64,
            Spacing::LogUniform => (self.rho_max / self.rho_min).ln() / (self.points + 1) as f64,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points)
            .map(|i| match self.spacing {
                Spacing::Uniform if self.cell_centred() => (i as f64 + 0.5) * h,
                Spacing::Uniform => self.rho_min + (i + 1) as f64 * h,
                Spacing::LogUniform => self.rho_min * ((i + 1) as f64 * h).exp(),
            })
            .collect()
    }

    /// Same interval with the step halved `level` times.
    pub fn refined(&self, level: u32) -> Self {
        let points = if self.cell_centred() {
            self.points << level
        } else {
            ((self.points + 1) << level) - 1
        };
        Self { points, ..*self }
    }
}

/// `-(1/2m)(zeta'' + zeta'/rho) + [s^2/(2m rho^2) - s lambda_rot/2 + lambda_conf rho^2 + V] zeta = E zeta`
#[derive(Clone, Copy)]
pub struct RadialOde<V> {
    pub reduced_mass: f64,
    pub s: i32,
    pub coupling: FieldCoupling,
    pub potential: V,
}

impl<V: Fn(f64) -> f64> RadialOde<V> {
    pub fn new(reduced_mass: f64, s: i32, coupling: FieldCoupling, potential: V) -> Self {
        Self {
            reduced_mass,
            s,
            coupling,
            potential,
        }
    }

    /// Constant `s lambda_rot / 2` separating `E` from the eigenvalue of the rest.
    pub fn shift(&self) -> f64 {
        self.s as f64 * self.coupling.lambda_rot / 2.0
    }

    /// `s^2/(2m rho^2) + lambda_conf rho^2 + V(rho)`
    pub fn effective_potential(&self, rho: f64) -> f64 {
        let ss = (self.s as f64).powi(2);
        ss / (2.0 * self.reduced_mass * rho * rho)
            + self.coupling.lambda_conf * rho * rho
            + (self.potential)(rho)
    }
}

pub fn line_ode(line: &SpectrumLine) -> RadialOde<impl Fn(f64) -> f64> {
    let pot = line.potential;
    RadialOde::new(line.reduced_mass, line.s, line.coupling, move |r| pot.value(r))
}

/// Symmetric tridiagonal matrix with the rotation shift kept aside.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSystem {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub shift: f64,
    pub grid: RadialGrid,
}

pub fn discretize<V: Fn(f64) -> f64>(ode: &RadialOde<V>, grid: &RadialGrid) -> Result<RadialSystem> {
    let m = ode.reduced_mass;
    if !(m > 0.0) {
        return Err(QesError::Domain(format!("reduced mass {m} must be positive")));
    }
    let rho = grid.nodes();
    let h = grid.step();
    let n = rho.len();
    let mut w = Vec::with_capacity(n);
    for &r in &rho {
        let v = ode.effective_potential(r);
        if !v.is_finite() {
            return Err(QesError::Domain(format!("potential not finite at rho = {r}")));
        }
        w.push(v);
    }
    let (diag, off) = match grid.spacing {
        Spacing::Uniform => {
            let face = |i: usize| -> f64 {
                if grid.cell_centred() {
                    i as f64 * h
                } else {
                    grid.rho_min + (i as f64 + 0.5) * h
                }
            };
            let k = 1.0 / (2.0 * m * h * h);
            let diag = (0..n)
                .map(|i| k * (face(i) + face(i + 1)) / rho[i] + w[i])
                .collect();
            let off = (0..n - 1)
                .map(|i| -k * face(i + 1) / (rho[i] * rho[i + 1]).sqrt())
                .collect();
            (diag, off)
        }
        Spacing::LogUniform => {
            let k = 1.0 / (2.0 * m * h * h);
            let diag = (0..n).map(|i| 2.0 * k / (rho[i] * rho[i]) + w[i]).collect();
            let off = (0..n - 1).map(|i| -k / (rho[i] * rho[i + 1])).collect();
            (diag, off)
        }
    };
    Ok(RadialSystem {
        diag,
        off,
        shift: ode.shift(),
        grid: *grid,
    })
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k` lowest eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_lowest(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let n = diag.len();
    let k = k.min(n);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pad = f64::EPSILON * (lo.abs().max(hi.abs())) + f64::MIN_POSITIVE;
    lo -= pad;
    hi += pad;
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (out.last().copied().unwrap_or(lo), hi);
        a = a.min(b);
        loop {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// `k` lowest energies `E` of the discretized problem.
pub fn oracle_eigenvalues(system: &RadialSystem, k: usize) -> Result<Vec<f64>> {
    if k > system.diag.len() / 4 {
        return Err(QesError::Domain(format!(
            "asked for {k} eigenvalues from a {}-point grid",
            system.diag.len()
        )));
    }
    Ok(tridiagonal_lowest(&system.diag, &system.off, k)
        .into_iter()
        .map(|l| l - system.shift)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleOptions {
    pub enabled: bool,
    /// Points of the coarsest grid in the ladder.
    pub points: usize,
    pub ladder: usize,
    /// Decay `int kappa d rho` required beyond the turning points.
    pub decay_depth: f64,
    pub rho_min: Option<f64>,
    pub rho_max: Option<f64>,
    pub spacing: Option<Spacing>,
    /// Levels computed above the expected node count.
    pub extra_levels: usize,
    pub residual_samples: usize,
    pub gap_tol: f64,
    pub residual_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            enabled: true,
            points: 1500,
            ladder: 3,
            decay_depth: 30.0,
            rho_min: None,
            rho_max: None,
            spacing: None,
            extra_levels: 3,
            residual_samples: 1000,
            gap_tol: 1e-4,
            residual_tol: 1e-8,
        }
    }
}

fn kappa<V: Fn(f64) -> f64>(ode: &RadialOde<V>, level: f64, r: f64) -> f64 {
    (2.0 * ode.reduced_mass * (ode.effective_potential(r) - level)).max(0.0).sqrt()
}

/// Walks from `start` by factor `ratio` until the accumulated `int kappa d rho` reaches `depth`.
fn decay_walk<V: Fn(f64) -> f64>(ode: &RadialOde<V>, level: f64, start: f64, ratio: f64, depth: f64) -> Option<f64> {
    let mut r = start;
    let mut k = kappa(ode, level, r);
    let mut acc = 0.0;
    for _ in 0..200_000 {
        let next = r * ratio;
        let kn = kappa(ode, level, next);
        if !kn.is_finite() {
            return None;
        }
        acc += 0.5 * (k + kn) * (next - r).abs();
        r = next;
        k = kn;
        if acc >= depth {
            return Some(r);
        }
        if !(1e-12..=1e12).contains(&r) {
            return None;
        }
    }
    None
}

/// `rho^2 V` grows without bound at the origin.
fn strongly_singular<V: Fn(f64) -> f64>(ode: &RadialOde<V>) -> Result<bool> {
    let q = |r: f64| r * r * (ode.potential)(r);
    let (q1, q2) = (q(1e-7), q(1e-9));
    if q2.abs() > 10.0 * q1.abs() && q2.abs() > 1e3 {
        if q2 < 0.0 {
            return Err(QesError::Domain(
                "potential attractive faster than 1/rho^2 at the origin".into(),
            ));
        }
        return Ok(true);
    }
    let a = (ode.s as f64).powi(2) + 2.0 * ode.reduced_mass * q2;
    if a < -1e-9 {
        return Err(QesError::FallToCentre { s: ode.s, radicand: a });
    }
    Ok(false)
}

/// Grid covering the classically allowed region at `level` (an energy `E`) plus the
/// decay layers on both sides; user overrides in `opts` win.
pub fn auto_grid<V: Fn(f64) -> f64>(ode: &RadialOde<V>, level: f64, opts: &OracleOptions) -> Result<RadialGrid> {
    let lam = level + ode.shift();
    let n = 4001;
    let scan: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(-8.0 + 14.0 * i as f64 / (n - 1) as f64))
        .collect();
    let w: Vec<f64> = scan.iter().map(|&r| ode.effective_potential(r)).collect();
    let allowed: Vec<usize> = (0..n).filter(|&i| w[i] < lam).collect();
    let (inner, outer) = match (allowed.first(), allowed.last()) {
        (Some(&a), Some(&b)) => (scan[a], scan[b]),
        _ => {
            let i = (0..n)
                .filter(|&i| w[i].is_finite())
                .min_by(|&a, &b| w[a].total_cmp(&w[b]))
                .ok_or_else(|| QesError::Domain("potential not finite anywhere".into()))?;
            (scan[i], scan[i])
        }
    };
    if outer >= scan[n - 1] {
        return Err(QesError::Numerical(format!(
            "level {level} is not bound: classically allowed out to rho = {outer:e}"
        )));
    }
    let singular = strongly_singular(ode)?;
    let rho_max = match opts.rho_max {
        Some(r) => r,
        None => decay_walk(ode, lam, outer, 1.0 + 1e-3, opts.decay_depth)
            .ok_or_else(|| QesError::Numerical("outer decay layer not found".into()))?,
    };
    let rho_min = match opts.rho_min {
        Some(r) => r,
        None if singular => decay_walk(ode, lam, inner, 1.0 / (1.0 + 1e-3), opts.decay_depth)
            .ok_or_else(|| QesError::Numerical("inner decay layer not found".into()))?,
        None => 0.0,
    };
    let spacing = opts.spacing.unwrap_or(if rho_min > 0.0 {
        Spacing::LogUniform
    } else {
        Spacing::Uniform
    });
    RadialGrid::new(rho_min, rho_max, opts.points, spacing)
}

/// Eigenvalues on successively halved grids and their Richardson extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderResult {
    pub grids: Vec<RadialGrid>,
    /// `per_grid[g][j]`: level `j` on grid `g`, coarsest first.
    pub per_grid: Vec<Vec<f64>>,
    pub extrapolated: Vec<f64>,
}

impl LadderResult {
    pub fn finest(&self) -> &[f64] {
        self.per_grid.last().expect("nonempty ladder")
    }

    /// `log2((E1 - E2) / (E2 - E3))` for level `j`.
    pub fn observed_order(&self, j: usize) -> Option<f64> {
        if self.per_grid.len() < 3 {
            return None;
        }
        let e: Vec<f64> = self.per_grid.iter().rev().take(3).rev().map(|g| g[j]).collect();
        let r = (e[0] - e[1]) / (e[1] - e[2]);
        (r > 0.0 && r.is_finite()).then(|| r.log2())
    }
}

/// Repeated `h^2, h^4, ...` elimination.
pub fn richardson(values: &[f64]) -> f64 {
    let mut row = values.to_vec();
    let mut factor = 4.0;
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    row[0]
}

pub fn ladder_eigenvalues<V: Fn(f64) -> f64 + Sync>(
    ode: &RadialOde<V>,
    base: &RadialGrid,
    levels: usize,
    rungs: usize,
) -> Result<LadderResult> {
    let grids: Vec<RadialGrid> = (0..rungs.max(1) as u32).map(|l| base.refined(l)).collect();
    let per_grid = grids
        .par_iter()
        .map(|g| discretize(ode, g).and_then(|sys| oracle_eigenvalues(&sys, levels)))
        .collect::<Result<Vec<_>>>()?;
    let extrapolated = (0..levels)
        .map(|j| richardson(&per_grid.iter().map(|g| g[j]).collect::<Vec<_>>()))
        .collect();
    Ok(LadderResult {
        grids,
        per_grid,
        extrapolated,
    })
}

/// Maximum over `samples` of `|L zeta - E zeta|` relative to the sum of the magnitudes of the
/// kinetic, potential and energy terms. The derivatives of the ansatz are taken analytically.
pub fn ode_residual<V: Fn(f64) -> f64>(
    wf: &RadialWavefunction,
    energy: f64,
    ode: &RadialOde<V>,
    samples: &[f64],
) -> f64 {
    let m = ode.reduced_mass;
    let mut worst = 0.0f64;
    for &r in samples {
        let (_, d1, d2) = wf.log_factor(r);
        let (p, p1, p2) = poly_eval_d2(&wf.poly, r);
        let t = -(p2 + (2.0 * d1 + 1.0 / r) * p1 + (d2 + d1 * d1 + d1 / r) * p) / (2.0 * m);
        let w = ode.effective_potential(r) - ode.shift();
        let scale = t.abs() + (w * p).abs() + (energy * p).abs();
        if scale == 0.0 || !scale.is_finite() {
            continue;
        }
        worst = worst.max((t + (w - energy) * p).abs() / scale);
    }
    worst
}

/// `n` log-spaced points across the wavefunction's support.
pub fn residual_samples(wf: &RadialWavefunction, n: usize) -> Result<Vec<f64>> {
    let (lo, _, hi) = wf.support(80.0)?;
    let lo = lo.max(hi * 1e-12);
    Ok((0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1).max(1) as f64))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedLevel {
    pub index: usize,
    pub oracle_energy: f64,
    /// Extrapolated minus algebraic energy.
    pub delta: f64,
    /// `|delta| / max(|E|, level spacing)`
    pub relative: f64,
    /// Same gap on the finest grid without extrapolation.
    pub raw_delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConvergence {
    pub order: Option<f64>,
    pub extrapolated_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Extrapolated lowest levels, ascending.
    pub energies: Vec<f64>,
    pub matched_line: Option<MatchedLevel>,
    pub residual_max: f64,
    pub grid_convergence: Option<GridConvergence>,
    pub grid: RadialGrid,
    pub pass: bool,
    pub note: Option<String>,
}

/// Compares one real, normalizable level against the finite-difference spectrum.
pub fn cross_validate(line: &SpectrumLine, opts: &OracleOptions) -> Result<OracleReport> {
    if !line.flags.real_branch || line.poly.is_empty() {
        return Err(QesError::Domain("cross-validation needs a real branch".into()));
    }
    if !line.flags.normalizable {
        return Err(QesError::Domain("cross-validation needs a normalizable level".into()));
    }
    let ode = line_ode(line);
    let e = line.e_rho;
    let grid = auto_grid(&ode, e, opts)?;
    let levels = (line.flags.nodes + 1 + opts.extra_levels).min(grid.points / 4);
    let ladder = ladder_eigenvalues(&ode, &grid, levels, opts.ladder)?;

    let wf = line.wavefunction();
    let samples = residual_samples(&wf, opts.residual_samples)?;
    let residual_max = ode_residual(&wf, e, &ode, &samples);

    let finest = ladder.finest();
    let j = (0..finest.len())
        .min_by(|&a, &b| (finest[a] - e).abs().total_cmp(&(finest[b] - e).abs()))
        .expect("at least one level");
    let ex = &ladder.extrapolated;
    let spacing = [j.checked_sub(1).map(|i| ex[j] - ex[i]), ex.get(j + 1).map(|x| x - ex[j])]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let floor = e.abs().max(if spacing.is_finite() { spacing } else { 0.0 });
    let delta = ex[j] - e;
    let relative = if floor > 0.0 { delta.abs() / floor } else { delta.abs() };
    let found = (finest[j] - e).abs() <= 0.1 * floor;
    let matched = found.then_some(MatchedLevel {
        index: j,
        oracle_energy: ex[j],
        delta,
        relative,
        raw_delta: finest[j] - e,
    });
    let pass = found && relative < opts.gap_tol && residual_max < opts.residual_tol;
    let note = (!found).then(|| format!("no oracle level within 10% of E = {e}"));
    Ok(OracleReport {
        energies: ex.clone(),
        matched_line: matched,
        residual_max,
        grid_convergence: found.then_some(GridConvergence {
            order: ladder.observed_order(j),
            extrapolated_delta: delta,
        }),
        grid: *ladder.grids.last().expect("nonempty"),
        pass,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzParams;
    use crate::model::Family;
    use approx::assert_relative_eq;

    fn oscillator(m: f64, big_omega: f64, s: i32) -> RadialOde<impl Fn(f64) -> f64> {
        RadialOde::new(
            m,
            s,
            FieldCoupling {
                lambda_rot: 0.0,
                lambda_conf: 0.5 * m * big_omega * big_omega,
            },
            |_| 0.0,
        )
    }

    #[test]
    fn sturm_count_small() {
        // eigenvalues 2 - sqrt2, 2, 2 + sqrt2
        let d = [2.0, 2.0, 2.0];
        let e = [-1.0, -1.0];
        assert_eq!(sturm_count(&d, &e, 0.5), 0);
        assert_eq!(sturm_count(&d, &e, 1.0), 1);
        assert_eq!(sturm_count(&d, &e, 2.5), 2);
        assert_eq!(sturm_count(&d, &e, 4.0), 3);
        let l = tridiagonal_lowest(&d, &e, 3);
        assert_relative_eq!(l[0], 2.0 - 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(l[1], 2.0, epsilon = 1e-15);
        assert_relative_eq!(l[2], 2.0 + 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(0.0, 1.0, 10, Spacing::Uniform).is_err());
        assert!(RadialGrid::new(1.0, 1.0, 100, Spacing::Uniform).is_err());
        assert!(RadialGrid::new(0.0, 1.0, 100, Spacing::LogUniform).is_err());
        let g = RadialGrid::new(0.0, 1.0, 100, Spacing::Uniform).unwrap();
        assert_eq!(g.refined(2).points, 400);
        assert_relative_eq!(g.refined(2).step(), g.step() / 4.0);
        let g = RadialGrid::new(0.1, 1.0, 99, Spacing::LogUniform).unwrap();
        assert_eq!(g.refined(1).points, 199);
        assert_relative_eq!(g.refined(1).step(), g.step() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn oscillator_levels() {
        let ode = oscillator(1.0, 1.0, 0);
        let grid = RadialGrid::new(0.0, 10.0, 800, Spacing::Uniform).unwrap();
        let e = oracle_eigenvalues(&discretize(&ode, &grid).unwrap(), 3).unwrap();
        for (n, x) in e.iter().enumerate() {
            assert_relative_eq!(*x, 2.0 * n as f64 + 1.0, max_relative = 1e-3);
        }
        let ode = oscillator(1.0, 1.0, 1);
        let e = oracle_eigenvalues(&discretize(&ode, &grid).unwrap(), 1).unwrap();
        assert_relative_eq!(e[0], 2.0, max_relative = 1e-3);
    }

    #[test]
    fn second_order_convergence() {
        let ode = oscillator(1.0, 1.0, 0);
        let base = RadialGrid::new(0.0, 10.0, 200, Spacing::Uniform).unwrap();
        let lad = ladder_eigenvalues(&ode, &base, 2, 3).unwrap();
        let order = lad.observed_order(0).unwrap();
        assert!((order - 2.0).abs() < 0.05, "order {order}");
        assert_relative_eq!(lad.extrapolated[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(lad.extrapolated[1], 3.0, epsilon = 1e-8);
    }

    #[test]
    fn log_grid_converges() {
        let ode = oscillator(1.0, 1.0, 2);
        let base = RadialGrid::new(1e-3, 10.0, 400, Spacing::LogUniform).unwrap();
        let lad = ladder_eigenvalues(&ode, &base, 1, 3).unwrap();
        assert_relative_eq!(lad.extrapolated[0], 3.0, epsilon = 1e-8);
    }

    #[test]
    fn refuses_too_many_levels() {
        let ode = oscillator(1.0, 1.0, 0);
        let grid = RadialGrid::new(0.0, 10.0, 64, Spacing::Uniform).unwrap();
        assert!(oracle_eigenvalues(&discretize(&ode, &grid).unwrap(), 17).is_err());
    }

    #[test]
    fn singular_samples_rejected() {
        let ode = RadialOde::new(
            1.0,
            0,
            FieldCoupling {
                lambda_rot: 0.0,
                lambda_conf: 0.5,
            },
            |r: f64| if r < 0.5 { f64::NAN } else { 0.0 },
        );
        let grid = RadialGrid::new(0.0, 10.0, 100, Spacing::Uniform).unwrap();
        assert!(discretize(&ode, &grid).is_err());
    }

    #[test]
    fn auto_grid_for_singular_potential() {
        let ode = RadialOde::new(
            1.0,
            0,
            FieldCoupling {
                lambda_rot: 0.0,
                lambda_conf: 0.0,
            },
            |r: f64| 0.5 / r.powi(4) - 0.875 / (r * r) - 1.0 / r,
        );
        let g = auto_grid(&ode, -0.5, &OracleOptions::default()).unwrap();
        assert_eq!(g.spacing, Spacing::LogUniform);
        assert!(g.rho_min > 0.01 && g.rho_min < 0.05, "{g:?}");
        assert!(g.rho_max > 20.0 && g.rho_max < 60.0, "{g:?}");
    }

    #[test]
    fn residual_distinguishes_energy() {
        // rho^(1/2) e^(-1/rho - rho)
        let a = AnsatzParams {
            family: Family::III,
            tau: 1.0,
            eta: 1.0,
            xi: 0.5,
            alpha: 1.0,
            beta: -1.0,
            gamma: 1.0,
            c: 1.0,
            d: 0,
            s: 0,
            normalizable: true,
        };
        let wf = RadialWavefunction::new(a, vec![1.0]);
        let ode = RadialOde::new(
            1.0,
            0,
            FieldCoupling {
                lambda_rot: 0.0,
                lambda_conf: 0.0,
            },
            |r: f64| 0.5 / r.powi(4) - 0.875 / (r * r) - 1.0 / r,
        );
        let samples = residual_samples(&wf, 1000).unwrap();
        assert!(ode_residual(&wf, -0.5, &ode, &samples) < 1e-12);
        assert!(ode_residual(&wf, -0.25, &ode, &samples) > 0.1);
    }
}
