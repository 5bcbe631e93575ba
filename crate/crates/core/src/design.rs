//! Damping-coefficient design: the minimum `gamma0` that keeps every
//! possible eigenvalue non-divergent, and sampling-based verification
//! that the whole Gershgorin disk sits inside the non-divergence region.
//!
//! The closed form `gamma0 >= sqrt(gamma1^2*d_max^2 + 2*d_max) -
//! gamma1*d_max` depends only on `d_max` and `gamma1`, so a network
//! operator needs no spectral information at all. Containment is
//! verified geometrically (boundary + interior sampling against the
//! per-mode margin) rather than by re-deriving the region algebra.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::modes::{classify_mode, DampingParams, MARGIN_BAND};

/// Sign classification of `gamma0*gamma1 + 1 + 2*gamma1^2*d_max`, the
/// coefficient that splits the containment analysis into three cases.
/// `A` (zero, within 1e-12) is reachable only with `gamma1 < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    A,
    B,
    C,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseLabel::A => write!(f, "A"),
            CaseLabel::B => write!(f, "B"),
            CaseLabel::C => write!(f, "C"),
        }
    }
}

/// Result of [`design`]: the minimum safe `gamma0` with its case label
/// and containment verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignResult {
    pub d_max: f64,
    pub gamma1: f64,
    pub gamma0_min: f64,
    pub case_label: CaseLabel,
    pub contained: bool,
}

/// Outcome of [`disk_contained`]: the worst sampled point and margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContainmentCheck {
    pub contained: bool,
    pub worst_margin: f64,
    pub worst_point: Complex64,
}

/// Minimum `gamma0` guaranteeing non-divergence for every eigenvalue
/// any network with this `d_max` can produce:
/// `sqrt(gamma1^2*d_max^2 + 2*d_max) - gamma1*d_max`.
///
/// Nonnegative for every real `gamma1` since `sqrt(a^2 + b) >= |a|`
/// for `b >= 0`.
pub fn min_gamma0(d_max: f64, gamma1: f64) -> f64 {
    assert!(
        d_max.is_finite() && d_max >= 0.0,
        "d_max must be finite and nonnegative"
    );
    (gamma1 * gamma1 * d_max * d_max + 2.0 * d_max).sqrt() - gamma1 * d_max
}

/// The frequency-independent special case: `sqrt(2 * d_max)`.
pub fn conventional_min_gamma0(d_max: f64) -> f64 {
    assert!(
        d_max.is_finite() && d_max >= 0.0,
        "d_max must be finite and nonnegative"
    );
    (2.0 * d_max).sqrt()
}

/// Checks whether the whole Gershgorin disk lies in the non-divergence
/// region, by classifying `samples` points on the upper boundary arc
/// `d_max * (1 + exp(i*phi))`, `phi` in `[0, pi]`, plus a jittered
/// interior grid of about the same size. Conjugate symmetry covers the
/// lower half-plane.
///
/// Contained means every sampled margin is at least `-1e-12`. The
/// worst point and margin are returned either way.
pub fn disk_contained(d_max: f64, p: DampingParams, samples: usize) -> ContainmentCheck {
    disk_contained_seeded(d_max, p, samples, 0)
}

/// [`disk_contained`] with an explicit seed for the interior-grid
/// jitter, for reproducible runs.
pub fn disk_contained_seeded(
    d_max: f64,
    p: DampingParams,
    samples: usize,
    seed: u64,
) -> ContainmentCheck {
    assert!(samples >= 64, "need at least 64 boundary samples");
    assert!(d_max.is_finite() && d_max >= 0.0);

    let mut worst_margin = f64::INFINITY;
    let mut worst_point = Complex64::new(d_max, 0.0);
    let mut consider = |lambda: Complex64| {
        let report = classify_mode(lambda, p);
        if report.margin < worst_margin {
            worst_margin = report.margin;
            worst_point = lambda;
        }
    };

    for k in 0..samples {
        let phi = std::f64::consts::PI * k as f64 / (samples - 1) as f64;
        consider(Complex64::new(
            d_max * (1.0 + phi.cos()),
            d_max * phi.sin(),
        ));
    }

    // interior grid over the upper half of the disk's bounding box
    let side = (samples as f64).sqrt().ceil() as usize;
    let cell_w = 2.0 * d_max / side as f64;
    let cell_h = d_max / side as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..side {
        for j in 0..side {
            let jx: f64 = rng.random_range(-0.5..0.5);
            let jy: f64 = rng.random_range(-0.5..0.5);
            let re = (i as f64 + 0.5 + jx) * cell_w;
            let im = (j as f64 + 0.5 + jy) * cell_h;
            let lambda = Complex64::new(re, im);
            if (lambda - Complex64::new(d_max, 0.0)).norm() <= d_max {
                consider(lambda);
            }
        }
    }

    ContainmentCheck {
        contained: worst_margin >= -MARGIN_BAND,
        worst_margin,
        worst_point,
    }
}

/// Sign of `gamma0*gamma1 + 1 + 2*gamma1^2*d_max` with a 1e-12 zero
/// band: `A` zero, `B` positive, `C` negative.
pub fn case_classify(d_max: f64, p: DampingParams) -> CaseLabel {
    let value = p.gamma0() * p.gamma1() + 1.0 + 2.0 * p.gamma1() * p.gamma1() * d_max;
    if value.abs() <= 1e-12 {
        CaseLabel::A
    } else if value > 0.0 {
        CaseLabel::B
    } else {
        CaseLabel::C
    }
}

/// Computes the minimum `gamma0` for `(d_max, gamma1)` and verifies
/// containment at that value.
pub fn design(d_max: f64, gamma1: f64, samples: usize) -> DesignResult {
    let gamma0_min = min_gamma0(d_max, gamma1);
    let p = DampingParams::new(gamma0_min, gamma1)
        .expect("min_gamma0 is nonnegative by construction");
    let check = disk_contained(d_max, p, samples);
    DesignResult {
        d_max,
        gamma1,
        gamma0_min,
        case_label: case_classify(d_max, p),
        contained: check.contained,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma0: f64, gamma1: f64) -> DampingParams {
        DampingParams::new(gamma0, gamma1).unwrap()
    }

    #[test]
    fn case_study_design_values() {
        assert!((min_gamma0(100.0, 0.0) - 200.0_f64.sqrt()).abs() < 1e-12);
        assert!((min_gamma0(100.0, 0.1) - (300.0_f64.sqrt() - 10.0)).abs() < 1e-12);
        assert!((min_gamma0(100.0, -0.1) - (300.0_f64.sqrt() + 10.0)).abs() < 1e-12);
        assert_eq!(min_gamma0(0.0, 0.7), 0.0);
        assert_eq!(min_gamma0(0.0, -0.7), 0.0);
    }

    #[test]
    fn conventional_values() {
        assert!((conventional_min_gamma0(100.0) - 200.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(conventional_min_gamma0(0.0), 0.0);
        assert_eq!(conventional_min_gamma0(50.0), 10.0);
    }

    #[test]
    fn conventional_equals_general_at_gamma1_zero() {
        for &d in &[0.0, 1.0, 3.5, 42.0, 100.0, 987.65] {
            assert_eq!(min_gamma0(d, 0.0), conventional_min_gamma0(d));
        }
    }

    #[test]
    fn min_gamma0_is_nonnegative_for_large_positive_gamma1() {
        for &g1 in &[0.5, 1.0, 10.0, 1e3] {
            assert!(min_gamma0(100.0, g1) >= 0.0);
        }
    }

    #[test]
    fn containment_at_design_point() {
        let g0 = min_gamma0(100.0, 0.1);
        let check = disk_contained(100.0, params(g0, 0.1), 512);
        assert!(check.contained, "worst margin {}", check.worst_margin);
    }

    #[test]
    fn containment_fails_five_below_design_point() {
        let g0 = min_gamma0(100.0, -0.1) - 5.0;
        let check = disk_contained(100.0, params(g0, -0.1), 512);
        assert!(!check.contained);
        assert!(check.worst_margin < -MARGIN_BAND);
        // the worst point must actually lie in the closed disk
        assert!(
            (check.worst_point - Complex64::new(100.0, 0.0)).norm() <= 100.0 + 1e-9,
            "worst point {} outside disk",
            check.worst_point
        );
    }

    #[test]
    fn degenerate_disk_is_always_contained() {
        let check = disk_contained(0.0, params(3.0, 0.2), 64);
        assert!(check.contained);
        assert_eq!(check.worst_point, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn interior_jitter_is_seed_deterministic() {
        let p = params(10.0, 0.05);
        let a = disk_contained_seeded(100.0, p, 256, 7);
        let b = disk_contained_seeded(100.0, p, 256, 7);
        assert_eq!(a, b);
    }

    #[test]
    fn case_labels() {
        assert_eq!(case_classify(100.0, params(14.14, 0.0)), CaseLabel::B);
        assert_eq!(case_classify(100.0, params(7.32, 0.1)), CaseLabel::B);
        assert_eq!(case_classify(100.0, params(5.0, -0.12)), CaseLabel::B);
        assert_eq!(case_classify(100.0, params(300.0, -0.05)), CaseLabel::C);
        // zero case: gamma0*gamma1 = -(1 + 2*gamma1^2*d_max)
        let g1 = -0.1_f64;
        let g0 = (1.0 + 2.0 * g1 * g1 * 100.0) / (-g1);
        assert_eq!(case_classify(100.0, params(g0, g1)), CaseLabel::A);
    }

    #[test]
    fn design_reports_containment_at_minimum() {
        let result = design(100.0, -0.1, 512);
        assert!(result.contained);
        assert_eq!(result.case_label, CaseLabel::B);
        assert!((result.gamma0_min - (300.0_f64.sqrt() + 10.0)).abs() < 1e-12);
    }
}
