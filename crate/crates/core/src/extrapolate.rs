//! Thermodynamic-limit extraction: least-squares fits of an observable
//! against {1, 1/N, 1/N^2, 1/N^3} and evaluation of the N -> infinity
//! intercept.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::qr_least_squares;
use crate::math;
use crate::{Error, Result};

/// One sampled point of an observable series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    /// Particle number or system-size proxy; must be >= 1 and distinct
    /// within a series.
    pub n: f64,
    pub value: f64,
}

impl SeriesPoint {
    pub fn new(n: f64, value: f64) -> Self {
        SeriesPoint { n, value }
    }
}

/// Result of an inverse-power fit value ~ a + b/N + c/N^2 + ...
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Coefficients ordered by power: [a, b, c, d, ..] (degree + 1 entries).
    pub coefficients: Vec<f64>,
    pub degree: usize,
    pub rms_residual: f64,
    pub max_residual: f64,
    /// Estimated condition number of the normal system (squared R-diagonal
    /// ratio from the QR factorization).
    pub condition: f64,
    /// Set when `condition` exceeds 1e10.
    pub ill_conditioned: bool,
}

/// Fit the cubic 1/N expansion (degree 3).
///
/// ```
/// use pairkit::extrapolate::{fit_cubic_inverse, extrapolate_to_bulk, SeriesPoint};
/// let points: Vec<SeriesPoint> = (1..=8)
///     .map(|i| {
///         let n = 50.0 * i as f64;
///         SeriesPoint::new(n, 0.062 - 0.6 / n + 1.3 / (n * n))
///     })
///     .collect();
/// let fit = fit_cubic_inverse(&points).unwrap();
/// assert!((extrapolate_to_bulk(&fit) - 0.062).abs() < 1e-9);
/// ```
pub fn fit_cubic_inverse(points: &[SeriesPoint]) -> Result<FitResult> {
    fit_inverse_powers(points, 3)
}

/// Fit value ~ sum_{p=0..=degree} coeff_p / N^p by QR least squares
/// (orthogonal decomposition, not normal equations).
pub fn fit_inverse_powers(points: &[SeriesPoint], degree: usize) -> Result<FitResult> {
    if !(1..=4).contains(&degree) {
        return Err(Error::Domain("fit degree must lie in 1..=4"));
    }
    let cols = degree + 1;
    if points.len() < cols {
        return Err(Error::Domain("need at least degree + 1 points"));
    }
    for (i, p) in points.iter().enumerate() {
        if !p.n.is_finite() || p.n < 1.0 {
            return Err(Error::Domain("series points require n >= 1"));
        }
        if points[..i].iter().any(|q| q.n == p.n) {
            return Err(Error::Domain("series points must have distinct n"));
        }
    }

    // Fit in the scaled variable t = n_min/n (a polynomial on (0, 1]), then
    // map the coefficients back by exact powers of n_min. Same model space,
    // far better conditioning than raw powers of 1/n.
    let n_ref = points.iter().map(|p| p.n).fold(f64::INFINITY, f64::min);
    let rows = points.len();
    let mut a = Vec::with_capacity(rows * cols);
    let mut b = Vec::with_capacity(rows);
    for p in points {
        let t = n_ref / p.n;
        let mut basis = 1.0;
        for _ in 0..cols {
            a.push(basis);
            basis *= t;
        }
        b.push(p.value);
    }

    let (mut scaled, _, r_diag) = qr_least_squares(&a, rows, cols, &b)?;
    // two steps of iterative refinement; on near-consistent data this
    // recovers the digits the factorization roundoff ate
    let mut residual = vec![0.0; rows];
    for _ in 0..2 {
        for i in 0..rows {
            let mut acc = -b[i];
            for j in 0..cols {
                acc += a[i * cols + j] * scaled[j];
            }
            residual[i] = acc;
        }
        let (correction, _, _) = qr_least_squares(&a, rows, cols, &residual)?;
        for (s, c) in scaled.iter_mut().zip(&correction) {
            *s -= c;
        }
    }
    for i in 0..rows {
        let mut acc = -b[i];
        for j in 0..cols {
            acc += a[i * cols + j] * scaled[j];
        }
        residual[i] = acc;
    }
    let mut coefficients = Vec::with_capacity(cols);
    let mut power = 1.0;
    for c in &scaled {
        coefficients.push(c * power);
        power *= n_ref;
    }
    let rms_residual = math::sqrt(residual.iter().map(|r| r * r).sum::<f64>() / rows as f64);
    let max_residual = residual.iter().fold(0.0f64, |m, r| m.max(math::abs(*r)));
    let r_max = r_diag.iter().cloned().fold(0.0, f64::max);
    let r_min = r_diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = r_max / r_min;
    let condition = ratio * ratio;
    Ok(FitResult {
        coefficients,
        degree,
        rms_residual,
        max_residual,
        condition,
        ill_conditioned: condition > 1e10,
    })
}

/// The N -> infinity intercept of a fit.
pub fn extrapolate_to_bulk(fit: &FitResult) -> f64 {
    fit.coefficients[0]
}

/// Evaluate a coefficient set at finite N.
pub fn eval_inverse_powers(coefficients: &[f64], n: f64) -> f64 {
    let inv = 1.0 / n;
    let mut basis = 1.0;
    let mut acc = 0.0;
    for c in coefficients {
        acc += c * basis;
        basis *= inv;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::SplitMix64;
    use alloc::vec;

    fn synthetic(coeffs: &[f64], ns: &[f64]) -> Vec<SeriesPoint> {
        ns.iter()
            .map(|&n| SeriesPoint::new(n, eval_inverse_powers(coeffs, n)))
            .collect()
    }

    #[test]
    fn exact_recovery_of_cubic_model() {
        // On a grid with strong 1/N content every coefficient is resolvable
        // to full double precision.
        let coeffs = [1.0, 2.0, 3.0, 4.0];
        let ns: Vec<f64> = (1..=10).map(|i| 10.0 * i as f64).collect();
        let fit = fit_cubic_inverse(&synthetic(&coeffs, &ns)).unwrap();
        for (got, want) in fit.coefficients.iter().zip(&coeffs) {
            assert!(
                ((got - want) / want).abs() < 1e-10,
                "{got} vs {want} (rel {})",
                ((got - want) / want).abs()
            );
        }
        assert!(fit.rms_residual < 1e-12);
        assert_eq!(extrapolate_to_bulk(&fit), fit.coefficients[0]);
    }

    #[test]
    fn recovery_on_a_large_n_grid_is_data_limited() {
        // At N in {100..1000} one ulp of data noise already moves the cubic
        // coefficient by ~3e-8 relative, so only the leading coefficients
        // reach tight tolerances there.
        let coeffs = [1.0, 2.0, 3.0, 4.0];
        let ns: Vec<f64> = (1..=10).map(|i| 100.0 * i as f64).collect();
        let fit = fit_cubic_inverse(&synthetic(&coeffs, &ns)).unwrap();
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((fit.coefficients[1] / 2.0 - 1.0).abs() < 1e-10);
        assert!((fit.coefficients[2] / 3.0 - 1.0).abs() < 1e-6);
        assert!((fit.coefficients[3] / 4.0 - 1.0).abs() < 1e-7);
    }

    #[test]
    fn constant_series_has_zero_slopes() {
        let ns: Vec<f64> = vec![10.0, 20.0, 40.0, 80.0, 160.0];
        let points: Vec<SeriesPoint> = ns.iter().map(|&n| SeriesPoint::new(n, 7.25)).collect();
        let fit = fit_cubic_inverse(&points).unwrap();
        assert!((fit.coefficients[0] - 7.25).abs() < 1e-12);
        for c in &fit.coefficients[1..] {
            assert!(c.abs() < 1e-9, "slope {c}");
        }
    }

    #[test]
    fn reordering_points_does_not_change_the_fit() {
        let coeffs = [0.5, -1.5, 2.5, -3.5];
        let ns = [160.0, 280.0, 400.0, 520.0, 640.0, 760.0, 880.0, 1000.0];
        let pts = synthetic(&coeffs, &ns);
        let mut shuffled = pts.clone();
        shuffled.reverse();
        shuffled.swap(1, 5);
        let a = fit_cubic_inverse(&pts).unwrap();
        let b = fit_cubic_inverse(&shuffled).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn stability_under_removing_the_largest_point() {
        // noisy but well-conditioned data
        let coeffs = [0.062, -0.6, 1.3, -11.0];
        let ns = [160.0, 280.0, 400.0, 520.0, 640.0, 760.0, 880.0, 1000.0];
        let mut rng = SplitMix64::new(3);
        let pts: Vec<SeriesPoint> = ns
            .iter()
            .map(|&n| {
                SeriesPoint::new(
                    n,
                    eval_inverse_powers(&coeffs, n) + 1e-9 * rng.next_signed(),
                )
            })
            .collect();
        let full = fit_cubic_inverse(&pts).unwrap();
        let trimmed = fit_cubic_inverse(&pts[..pts.len() - 1]).unwrap();
        let change = (full.coefficients[0] - trimmed.coefficients[0]).abs();
        assert!(
            change < 10.0 * full.rms_residual.max(1e-12),
            "intercept change {change} vs rms {}",
            full.rms_residual
        );
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let pts = vec![
            SeriesPoint::new(10.0, 1.0),
            SeriesPoint::new(10.0, 2.0),
            SeriesPoint::new(30.0, 3.0),
            SeriesPoint::new(40.0, 4.0),
        ];
        assert!(matches!(fit_cubic_inverse(&pts), Err(Error::Domain(_))));
        let few = vec![SeriesPoint::new(10.0, 1.0), SeriesPoint::new(20.0, 2.0)];
        assert!(matches!(fit_cubic_inverse(&few), Err(Error::Domain(_))));
        let small_n = vec![
            SeriesPoint::new(0.5, 1.0),
            SeriesPoint::new(20.0, 2.0),
            SeriesPoint::new(30.0, 3.0),
            SeriesPoint::new(40.0, 4.0),
        ];
        assert!(matches!(fit_cubic_inverse(&small_n), Err(Error::Domain(_))));
    }

    #[test]
    fn degree_option_covers_linear_to_quartic() {
        let coeffs = [2.0, -1.0];
        let ns: Vec<f64> = (1..=6).map(|i| 50.0 * i as f64).collect();
        let fit = fit_inverse_powers(&synthetic(&coeffs, &ns), 1).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((fit.coefficients[1] + 1.0).abs() < 1e-9);
        assert!(fit_inverse_powers(&synthetic(&coeffs, &ns), 5).is_err());
    }
}
