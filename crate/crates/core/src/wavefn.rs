//! Radial wavefunctions rebuilt from block eigenvectors.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzParams, QesBlock, VariableMap};
use crate::error::{QesError, Result};
use crate::model::Family;
use crate::spectra::right_eigenvector;

/// Exponents beyond this are handled in log space.
pub const LOG_SPACE_THRESHOLD: f64 = 500.0;

/// Maps a block eigenvector (coefficients in the scaled variable) to ascending coefficients
/// in `rho`, with the top nonvanishing coefficient set to 1.
pub fn eigenvector_to_physical(block: &QesBlock, v: &DVector<f64>) -> Vec<f64> {
    let c = block.scaling_c;
    let scaled: Vec<f64> = v
        .iter()
        .enumerate()
        .map(|(k, a)| a * c.powi(k as i32))
        .collect();
    let physical = match block.variable_map {
        VariableMap::Identity => scaled,
        VariableMap::SquareMap => {
            let mut p = vec![0.0; 2 * scaled.len() - 1];
            for (k, a) in scaled.iter().enumerate() {
                p[2 * k] = *a;
            }
            p
        }
    };
    normalize_leading(physical)
}

fn normalize_leading(mut p: Vec<f64>) -> Vec<f64> {
    let big = p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if big == 0.0 {
        return p;
    }
    let top = p
        .iter()
        .rposition(|x| x.abs() > 1e-12 * big)
        .expect("nonzero entry");
    p.truncate(top + 1);
    let lead = p[top];
    p.iter_mut().for_each(|x| *x /= lead);
    p
}

/// Inverse of [`eigenvector_to_physical`] up to scale: coefficients in the block variable.
pub fn physical_to_scaled(block: &QesBlock, poly: &[f64]) -> Vec<f64> {
    let c = block.scaling_c;
    let n = block.ansatz.d + 1;
    (0..n)
        .map(|k| {
            let idx = match block.variable_map {
                VariableMap::Identity => k,
                VariableMap::SquareMap => 2 * k,
            };
            poly.get(idx).copied().unwrap_or(0.0) / c.powi(k as i32)
        })
        .collect()
}

pub fn polynomial_from_eigenvector(block: &QesBlock, mu: f64) -> Result<Vec<f64>> {
    let v = right_eigenvector(block, mu)?;
    Ok(eigenvector_to_physical(block, &v))
}

/// `zeta(rho) = exp(phi(rho)) p(rho)` with the family's gauge factor `exp(phi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialWavefunction {
    pub ansatz: AnsatzParams,
    pub poly: Vec<f64>,
    /// `sqrt(int |zeta|^2 rho d rho)` once computed.
    pub norm: Option<f64>,
}

/// Value of `zeta`, kept as sign and log-magnitude when it would under- or overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaSample {
    pub value: f64,
    pub sign: f64,
    pub log_abs: f64,
    pub in_log_space: bool,
}

pub(crate) fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `(p, p', p'')` at `x`.
pub(crate) fn poly_eval_d2(p: &[f64], x: f64) -> (f64, f64, f64) {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for c in p.iter().rev() {
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + v;
        v = v * x + c;
    }
    (v, d1, d2)
}

impl RadialWavefunction {
    pub fn new(ansatz: AnsatzParams, poly: Vec<f64>) -> Self {
        Self {
            ansatz,
            poly,
            norm: None,
        }
    }

    pub fn family(&self) -> Family {
        self.ansatz.family
    }

    /// `(phi, phi', phi'')` of the gauge factor.
    pub fn log_factor(&self, rho: f64) -> (f64, f64, f64) {
        let AnsatzParams { tau, eta, xi, .. } = self.ansatz;
        let lr = if xi == 0.0 { 0.0 } else { xi * rho.ln() };
        match self.ansatz.family {
            Family::I => (
                -tau * rho * rho - eta * rho + lr,
                -2.0 * tau * rho - eta + xi / rho,
                -2.0 * tau - xi / (rho * rho),
            ),
            Family::II => {
                let r2 = rho * rho;
                (
                    -tau * r2 * r2 - eta * r2 + lr,
                    -4.0 * tau * r2 * rho - 2.0 * eta * rho + xi / rho,
                    -12.0 * tau * r2 - 2.0 * eta - xi / r2,
                )
            }
            Family::III => (
                -tau / rho - eta * rho + lr,
                tau / (rho * rho) - eta + xi / rho,
                -2.0 * tau / (rho * rho * rho) - xi / (rho * rho),
            ),
        }
    }

    pub fn poly_at(&self, rho: f64) -> f64 {
        poly_eval(&self.poly, rho)
    }

    pub fn evaluate_zeta(&self, rho: f64) -> Result<ZetaSample> {
        if !(rho > 0.0) {
            return Err(QesError::Domain(format!("rho = {rho} must be positive")));
        }
        let (phi, _, _) = self.log_factor(rho);
        let p = self.poly_at(rho);
        let sign = if p < 0.0 { -1.0 } else { 1.0 };
        let log_abs = phi + p.abs().ln();
        if phi.abs() > LOG_SPACE_THRESHOLD {
            let value = if log_abs < f64::MIN_POSITIVE.ln() {
                0.0
            } else {
                sign * log_abs.exp()
            };
            Ok(ZetaSample {
                value,
                sign,
                log_abs,
                in_log_space: true,
            })
        } else {
            Ok(ZetaSample {
                value: phi.exp() * p,
                sign,
                log_abs,
                in_log_space: false,
            })
        }
    }

    /// `ln(|zeta|^2 rho)`, the log of the radial density.
    fn log_density(&self, rho: f64) -> f64 {
        let (phi, _, _) = self.log_factor(rho);
        2.0 * (phi + self.poly_at(rho).abs().ln()) + rho.ln()
    }

    /// Range `[lo, hi]` outside which the density is below `exp(-cutoff)` of its peak,
    /// together with the peak position.
    pub fn support(&self, cutoff: f64) -> Result<(f64, f64, f64)> {
        let n = 6001;
        let grid: Vec<f64> = (0..n)
            .map(|i| 10f64.powf(-15.0 + 30.0 * i as f64 / (n - 1) as f64))
            .collect();
        let logs: Vec<f64> = grid.iter().map(|&r| self.log_density(r)).collect();
        let (imax, lmax) = logs
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_finite())
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, l)| (i, *l))
            .ok_or_else(|| QesError::Numerical("wavefunction vanishes on the sample grid".into()))?;
        let keep = |l: &f64| l.is_finite() && *l >= lmax - cutoff;
        let lo = logs.iter().position(keep).expect("peak is kept");
        let hi = logs.iter().rposition(keep).expect("peak is kept");
        if hi == n - 1 {
            return Err(QesError::Numerical(
                "density does not decay at large rho; wavefunction not normalizable".into(),
            ));
        }
        Ok((grid[lo.saturating_sub(1)], grid[imax], grid[hi + 1]))
    }

    /// Sets `norm = sqrt(int |zeta|^2 rho d rho)` over `(0, inf)`.
    pub fn normalize(&self, opts: &QuadratureOptions) -> Result<Self> {
        if !self.ansatz.normalizable {
            return Err(QesError::Domain(
                "wavefunction flagged non-normalizable; integral diverges".into(),
            ));
        }
        let (lo, peak, hi) = self.support(opts.log_cutoff)?;
        let shift = self.log_density(peak);
        let f = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                (self.log_density(r) - shift).exp()
            }
        };
        // geometric breakpoints between lo and hi, plus [0, lo]
        let mut cuts = vec![0.0, lo];
        let ratio = (hi / lo).powf(1.0 / opts.pieces as f64);
        for i in 1..=opts.pieces {
            cuts.push(lo * ratio.powi(i as i32));
        }
        let mut total = 0.0;
        let mut err = 0.0;
        for w in cuts.windows(2) {
            let out = quadrature::double_exponential::integrate(f, w[0], w[1], opts.abs_tol);
            total += out.integral;
            err += out.error_estimate;
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(QesError::Numerical(format!("norm integral {total} invalid")));
        }
        if err > opts.rel_tol * total {
            log::warn!("norm quadrature error estimate {err:e} above target");
        }
        let norm = (total.ln() + shift).mul_add(0.5, 0.0).exp();
        Ok(Self {
            norm: Some(norm),
            ..self.clone()
        })
    }

    /// Polynomial whose positive roots are counted: `p(rho)`, or `P(w)` with `w = rho^2` for family II.
    pub fn node_polynomial(&self) -> Vec<f64> {
        match self.ansatz.family {
            Family::II => self.poly.iter().step_by(2).copied().collect(),
            _ => self.poly.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Natural-log depth below the density peak treated as zero.
    pub log_cutoff: f64,
    pub pieces: usize,
    /// Absolute target per piece, relative to the peak density.
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            log_cutoff: 80.0,
            pieces: 24,
            abs_tol: 1e-14,
            rel_tol: 1e-10,
        }
    }
}

fn trim(mut p: Vec<f64>, rel: f64) -> Vec<f64> {
    let big = p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for x in p.iter_mut() {
        if x.abs() <= rel * big {
            *x = 0.0;
        }
    }
    while p.last() == Some(&0.0) {
        p.pop();
    }
    p
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

/// Remainder of `a / b`; `b` must have a nonzero leading coefficient.
fn remainder(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let q = r[k] / lead;
        for (i, bc) in b.iter().enumerate() {
            r[k - db + i] -= q * bc;
        }
        r.pop();
    }
    r
}

fn sign_changes(signs: impl Iterator<Item = f64>) -> usize {
    let mut last = 0.0;
    let mut n = 0;
    for s in signs.filter(|s| *s != 0.0) {
        if last != 0.0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Distinct real roots of `p` in `(0, inf)` from a Sturm sequence.
pub fn positive_root_count(p: &[f64]) -> usize {
    let p0 = trim(p.to_vec(), 1e-13);
    if p0.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p0.clone(), trim(derivative(&p0), 1e-13)];
    loop {
        let n = seq.len();
        if seq[n - 1].len() <= 1 {
            break;
        }
        let r = trim(remainder(&seq[n - 2], &seq[n - 1]), 1e-11);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    let sign = |x: f64| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 };
    let at_zero = sign_changes(
        seq.iter()
            .map(|q| q.iter().find(|c| **c != 0.0).map_or(0.0, |c| sign(*c))),
    );
    let at_inf = sign_changes(seq.iter().map(|q| q.last().map_or(0.0, |c| sign(*c))));
    at_zero.saturating_sub(at_inf)
}

/// Sign changes of the polynomial part on `(0, inf)`; family II counts in `w = rho^2`.
pub fn count_nodes(wf: &RadialWavefunction) -> usize {
    positive_root_count(&wf.node_polynomial())
}
