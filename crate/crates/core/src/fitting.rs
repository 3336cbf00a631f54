//! Exponential fits of the broken fraction against precision and the
//! precision improvement they imply.
//!
//! The broken fraction `f(p) = 1 - fraction_correct` of the single-copy
//! data is modelled as `A exp(-b p)`. The equivalent single-copy
//! precision of a linked-copy data point with fraction correct `F` is
//! `p* = ln(A / (1 - F)) / b`, and the improvement is `p* - p`.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// Single-copy points below this precision are left out of the fit.
pub const MIN_FIT_PRECISION: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitPoint {
    pub p: f64,
    pub broken: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub ln_amplitude: f64,
    pub rate: f64,
    /// Covariance of `(ln A, b)`.
    pub cov: [[f64; 2]; 2],
    pub used: Vec<FitPoint>,
    /// Points with `p >= MIN_FIT_PRECISION` that could not be used
    /// (zero broken fraction or zero standard error).
    pub dropped: Vec<FitPoint>,
}

impl FitResult {
    pub fn amplitude(&self) -> f64 {
        libm::exp(self.ln_amplitude)
    }

    pub fn predict_broken(&self, p: f64) -> f64 {
        libm::exp(self.ln_amplitude - self.rate * p)
    }

    /// Single-copy precision at which the fit reaches fraction correct `f`.
    pub fn equivalent_precision(&self, fraction_correct: f64) -> f64 {
        equivalent(self.ln_amplitude, self.rate, fraction_correct)
    }
}

fn equivalent(ln_a: f64, b: f64, fraction_correct: f64) -> f64 {
    (ln_a - libm::log(1.0 - fraction_correct)) / b
}

/// Weighted least squares of `ln f` against `p` with weights
/// `(f / stderr)^2`.
pub fn fit_exponential(points: &[FitPoint]) -> Result<FitResult> {
    let mut used = Vec::new();
    let mut dropped = Vec::new();
    for &pt in points {
        if !(pt.p.is_finite() && pt.broken.is_finite() && pt.stderr.is_finite()) || pt.broken < 0.0 {
            return Err(invalid!("malformed fit point {pt:?}"));
        }
        if pt.p < MIN_FIT_PRECISION {
            continue;
        }
        if pt.broken > 0.0 && pt.stderr > 0.0 {
            used.push(pt);
        } else {
            dropped.push(pt);
        }
    }
    if used.len() < 3 {
        return Err(Error::InsufficientData(alloc::format!(
            "{} usable points with p >= {MIN_FIT_PRECISION}, need 3",
            used.len()
        )));
    }
    let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for pt in &used {
        let w = (pt.broken / pt.stderr) * (pt.broken / pt.stderr);
        let y = libm::log(pt.broken);
        s += w;
        sx += w * pt.p;
        sxx += w * pt.p * pt.p;
        sy += w * y;
        sxy += w * pt.p * y;
    }
    let det = s * sxx - sx * sx;
    if !(det > 0.0) {
        return Err(Error::Numerical("degenerate fit: all points at one precision".into()));
    }
    let intercept = (sxx * sy - sx * sxy) / det;
    let slope = (s * sxy - sx * sy) / det;
    // b = -slope flips the sign of the cross term
    let cov = [[sxx / det, sx / det], [sx / det, s / det]];
    Ok(FitResult { ln_amplitude: intercept, rate: -slope, cov, used, dropped })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprovementPoint {
    pub p: f64,
    pub equivalent_p: f64,
    pub improvement: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Improvement {
    Point(ImprovementPoint),
    /// Every instance was correct; no finite equivalent precision exists.
    Censored { p: f64 },
}

impl Improvement {
    pub fn point(&self) -> Option<&ImprovementPoint> {
        match self {
            Improvement::Point(pt) => Some(pt),
            Improvement::Censored { .. } => None,
        }
    }
}

/// Eigen-decomposition of a symmetric 2x2 matrix.
fn sym2_eigen(m: &[[f64; 2]; 2]) -> [(f64, [f64; 2]); 2] {
    let (a, c, d) = (m[0][0], m[0][1], m[1][1]);
    let mean = 0.5 * (a + d);
    let r = libm::hypot(0.5 * (a - d), c);
    let mut out = [(mean + r, [1.0, 0.0]), (mean - r, [0.0, 1.0])];
    if c != 0.0 {
        for pair in out.iter_mut() {
            let v = [pair.0 - d, c];
            let norm = libm::hypot(v[0], v[1]);
            pair.1 = [v[0] / norm, v[1] / norm];
        }
    } else if d > a {
        out = [(d, [0.0, 1.0]), (a, [1.0, 0.0])];
    }
    out
}

/// Improvement of one linked-copy point over the single-copy fit, with a
/// standard error from one-at-a-time perturbation of the inputs: each
/// eigen-direction of the `(ln A, b)` covariance and the fraction correct
/// are shifted by one standard deviation and the output shifts are added
/// in quadrature.
pub fn precision_improvement(fit: &FitResult, p: f64, fraction_correct: f64, stderr: f64) -> Result<Improvement> {
    if !(fit.rate > 0.0) {
        return Err(invalid!("fit decay rate {} is not positive", fit.rate));
    }
    if fraction_correct == 1.0 {
        return Ok(Improvement::Censored { p });
    }
    if !(fraction_correct > 0.0 && fraction_correct < 1.0) {
        return Err(invalid!("fraction correct {fraction_correct} outside (0, 1)"));
    }
    if !(stderr >= 0.0) {
        return Err(invalid!("negative standard error {stderr}"));
    }
    let (ln_a, b) = (fit.ln_amplitude, fit.rate);
    let centre = equivalent(ln_a, b, fraction_correct);
    let mut var = 0.0;
    for (lambda, v) in sym2_eigen(&fit.cov) {
        if lambda <= 0.0 {
            continue;
        }
        let step = libm::sqrt(lambda);
        let mut shifted = (ln_a + step * v[0], b + step * v[1]);
        if shifted.1 <= 0.0 {
            shifted = (ln_a - step * v[0], b - step * v[1]);
        }
        let d = equivalent(shifted.0, shifted.1, fraction_correct) - centre;
        var += d * d;
    }
    if stderr > 0.0 {
        let up = fraction_correct + stderr;
        let f = if up < 1.0 { up } else { (fraction_correct - stderr).max(0.0) };
        let d = equivalent(ln_a, b, f) - centre;
        var += d * d;
    }
    Ok(Improvement::Point(ImprovementPoint {
        p,
        equivalent_p: centre,
        improvement: centre - p,
        sigma: libm::sqrt(var),
    }))
}

/// Two-sided sign-test p-value for the residuals `ln f - ln fit` of the
/// given points; zero residuals are ignored.
pub fn residual_sign_test(fit: &FitResult, points: &[FitPoint]) -> f64 {
    let mut plus = 0u32;
    let mut total = 0u32;
    for pt in points.iter().filter(|pt| pt.broken > 0.0) {
        let r = libm::log(pt.broken) - libm::log(fit.predict_broken(pt.p));
        if r != 0.0 {
            total += 1;
            if r > 0.0 {
                plus += 1;
            }
        }
    }
    if total == 0 {
        return 1.0;
    }
    let tail = plus.min(total - plus);
    // P(X <= tail) for X ~ Bin(total, 1/2)
    let mut coeff = 1.0f64;
    let mut acc = 0.0;
    for k in 0..=tail {
        if k > 0 {
            coeff = coeff * (total - k + 1) as f64 / k as f64;
        }
        acc += coeff;
    }
    (2.0 * acc / libm::pow(2.0, total as f64)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::LN_2;
    use proptest::prelude::*;

    fn exact_points(a: f64, b: f64, ps: core::ops::RangeInclusive<u32>) -> Vec<FitPoint> {
        ps.map(|p| {
            let f = a * libm::exp(-b * p as f64);
            FitPoint { p: p as f64, broken: f, stderr: 0.05 * f }
        })
        .collect()
    }

    #[test]
    fn recovers_exact_exponential() {
        let fit = fit_exponential(&exact_points(1.0, 0.7, 3..=9)).unwrap();
        assert!((fit.amplitude() - 1.0).abs() < 1e-9);
        assert!((fit.rate - 0.7).abs() < 1e-9);

        let halving = fit_exponential(&exact_points(2.0, LN_2, 3..=9)).unwrap();
        assert!((halving.rate - LN_2).abs() < 1e-12);
        assert!((halving.predict_broken(5.0) / halving.predict_broken(4.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exclusions_and_errors() {
        let mut pts = exact_points(1.0, 0.5, 1..=6);
        pts.push(FitPoint { p: 7.0, broken: 0.0, stderr: 0.0 });
        let fit = fit_exponential(&pts).unwrap();
        assert_eq!(fit.used.len(), 4);
        assert!(fit.used.iter().all(|pt| pt.p >= 3.0));
        assert_eq!(fit.dropped.len(), 1);
        assert!(matches!(fit_exponential(&exact_points(1.0, 0.5, 1..=4)), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn improvement_arithmetic() {
        let fit = FitResult {
            ln_amplitude: 0.0,
            rate: LN_2,
            cov: [[0.0; 2]; 2],
            used: vec![],
            dropped: vec![],
        };
        let imp = precision_improvement(&fit, 4.0, 1.0 - 1.0 / 32.0, 0.0).unwrap();
        let pt = imp.point().unwrap();
        assert!((pt.equivalent_p - 5.0).abs() < 1e-12);
        assert!((pt.improvement - 1.0).abs() < 1e-12);
        assert_eq!(pt.sigma, 0.0);

        assert_eq!(precision_improvement(&fit, 4.0, 1.0, 0.0).unwrap(), Improvement::Censored { p: 4.0 });
        assert!(precision_improvement(&fit, 4.0, 1.2, 0.0).is_err());
        let bad = FitResult { rate: -0.1, ..fit };
        assert!(precision_improvement(&bad, 4.0, 0.9, 0.0).is_err());
    }

    #[test]
    fn self_consistent_point_has_zero_improvement() {
        let fit = fit_exponential(&exact_points(0.8, 0.6, 3..=8)).unwrap();
        let f = 1.0 - fit.predict_broken(5.0);
        let pt = *precision_improvement(&fit, 5.0, f, 0.001).unwrap().point().unwrap();
        assert!(pt.improvement.abs() < 1e-9);
    }

    #[test]
    fn sigma_grows_towards_unit_fraction() {
        let pts: Vec<FitPoint> = exact_points(0.9, 0.7, 3..=8)
            .into_iter()
            .map(|pt| FitPoint { stderr: libm::sqrt(pt.broken * (1.0 - pt.broken) / 1e4), ..pt })
            .collect();
        let fit = fit_exponential(&pts).unwrap();
        let mut last = 0.0;
        for f in [0.9, 0.99, 0.999, 0.9999] {
            let se = libm::sqrt(f * (1.0 - f) / 1e4);
            let s = precision_improvement(&fit, 5.0, f, se).unwrap().point().unwrap().sigma;
            assert!(s > last, "sigma {s} at F={f}");
            last = s;
        }
    }

    #[test]
    fn sign_test_values() {
        let fit = fit_exponential(&exact_points(1.0, 0.5, 3..=8)).unwrap();
        let biased: Vec<FitPoint> = exact_points(1.1, 0.5, 3..=8);
        // six positive residuals: 2 / 64
        assert!((residual_sign_test(&fit, &biased) - 2.0 / 64.0).abs() < 1e-15);
        assert_eq!(residual_sign_test(&fit, &[]), 1.0);
    }

    #[test]
    fn eigen_directions() {
        let [(l1, v1), (l2, v2)] = sym2_eigen(&[[2.0, 1.0], [1.0, 2.0]]);
        assert!((l1 - 3.0).abs() < 1e-12 && (l2 - 1.0).abs() < 1e-12);
        assert!((v1[0] - v1[1]).abs() < 1e-12 && (v2[0] + v2[1]).abs() < 1e-12);
        let [(d1, _), (d2, _)] = sym2_eigen(&[[1.0, 0.0], [0.0, 4.0]]);
        assert_eq!((d1, d2), (4.0, 1.0));
    }

    fn noisy_points(seed: u64, shift: f64, scale: f64) -> Vec<FitPoint> {
        (3..=9)
            .map(|p| {
                let jitter = 1.0 + 0.2 * (crate::seed::Key::new(seed).word(p).unit() - 0.5);
                let f = scale * 0.7 * libm::exp(-0.6 * p as f64) * jitter;
                FitPoint { p: p as f64 + shift, broken: f, stderr: 0.1 * f * jitter }
            })
            .collect()
    }

    proptest! {
        #[test]
        fn amplitude_is_equivariant(seed in any::<u64>(), kappa in 0.01f64..1.0) {
            let base = fit_exponential(&noisy_points(seed, 0.0, 1.0)).unwrap();
            let scaled = fit_exponential(&noisy_points(seed, 0.0, kappa)).unwrap();
            prop_assert!((scaled.rate - base.rate).abs() < 1e-9);
            prop_assert!((scaled.amplitude() / base.amplitude() - kappa).abs() < 1e-9 * kappa.max(1.0));
        }

        #[test]
        fn improvement_ignores_precision_offset(seed in any::<u64>(), shift in 0.0f64..2.0, f in 0.9f64..0.999) {
            let a = fit_exponential(&noisy_points(seed, 0.0, 1.0)).unwrap();
            let b = fit_exponential(&noisy_points(seed, shift, 1.0)).unwrap();
            let ia = precision_improvement(&a, 5.0, f, 0.002).unwrap().point().copied().unwrap();
            let ib = precision_improvement(&b, 5.0 + shift, f, 0.002).unwrap().point().copied().unwrap();
            prop_assert!((ia.improvement - ib.improvement).abs() < 1e-6);
        }
    }
}
