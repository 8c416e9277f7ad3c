//! Bracketing root search: scan a grid for sign changes, then bisect.

/// Log-spaced points `lo + scale * 10^t`, `t` uniform over `[t_min, t_max]`.
pub fn log_grid(lo: f64, scale: f64, t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| {
            let t = t_min + (t_max - t_min) * i as f64 / (points - 1) as f64;
            lo + scale * 10f64.powf(t)
        })
        .collect()
}

/// Bisects `[a, b]` with `f(a) f(b) < 0` until the bracket is below `rel_tol * |x|`
/// or cannot shrink further.
pub fn bisect<F, E>(mut f: F, mut a: f64, mut b: f64, mut fa: f64, rel_tol: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) || (b - a).abs() <= rel_tol * mid.abs() {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Indices `i` with a sign change (or exact zero at the left end) between samples `i` and `i + 1`.
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..values.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if !a.is_finite() || !b.is_finite() {
            continue;
        }
        if a == 0.0 || (a < 0.0) != (b < 0.0) && b != 0.0 {
            out.push(i);
        }
    }
    if values.last() == Some(&0.0) {
        out.push(values.len() - 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let f = |x: f64| Ok::<_, ()>(x * x - 2.0);
        let r = bisect(f, 1.0, 2.0, -1.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 4e-15);
    }

    #[test]
    fn sign_change_positions() {
        assert_eq!(sign_changes(&[1.0, -1.0, -2.0, 3.0]), vec![0, 2]);
        assert_eq!(sign_changes(&[0.0, 1.0, 2.0]), vec![0]);
        assert_eq!(sign_changes(&[1.0, 0.0, -1.0]), vec![1]);
        assert!(sign_changes(&[1.0, 2.0]).is_empty());
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1.0, 2.0, -6.0, 6.0, 512);
        assert_eq!(g.len(), 512);
        assert!((g[0] - 1.0 - 2e-6).abs() < 1e-15);
        assert!((g[511] - 1.0 - 2e6).abs() < 1e-6);
    }
}
