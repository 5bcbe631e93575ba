//! Per-mode damping evaluation and divergence classification.
//!
//! Each eigenvalue `lambda` of the Laplacian drives one oscillation
//! mode, a damped scalar oscillator with mode-dependent damping
//! `gamma(lambda) = gamma0 + gamma1 * lambda`. Writing
//! `r * exp(i*theta) = lambda - (gamma/2)^2`, the solution exponents are
//! `s_pm = -gamma/2 +- i*sqrt(r)*exp(i*theta/2)` and the mode grows
//! without bound exactly when one of them has positive real part.
//!
//! The classifier evaluates both forms — the inequality
//! `Re[gamma]/2 >= sqrt(r)*|sin(theta/2)|` and the sign of the largest
//! exponent real part — and asserts they agree; the two are algebraic
//! rearrangements of each other but travel different floating-point
//! paths.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::Spectrum;

/// Margins within this absolute band of zero are classified
/// non-divergent (bounded, non-decaying oscillation).
pub const MARGIN_BAND: f64 = 1e-12;

/// The damping pair `(gamma0, gamma1)`: `gamma0` is the externally
/// adjustable strength, `gamma1` the frequency-dependent coefficient
/// fixed by the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingParams {
    gamma0: f64,
    gamma1: f64,
}

impl DampingParams {
    /// `gamma0` must be finite and nonnegative; `gamma1` may have either
    /// sign.
    pub fn new(gamma0: f64, gamma1: f64) -> crate::error::Result<Self> {
        if !gamma0.is_finite() || gamma0 < 0.0 {
            return Err(crate::error::Error::InvalidGraph(format!(
                "gamma0 must be finite and nonnegative, got {gamma0}"
            )));
        }
        if !gamma1.is_finite() {
            return Err(crate::error::Error::InvalidGraph(format!(
                "gamma1 must be finite, got {gamma1}"
            )));
        }
        Ok(Self { gamma0, gamma1 })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }
}

/// Full per-mode analysis record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeReport {
    pub lambda: Complex64,
    /// `gamma0 + gamma1 * lambda`, split into real and imaginary parts.
    pub gamma: Complex64,
    /// Modulus of `lambda - (gamma/2)^2`.
    pub r: f64,
    /// Argument of `lambda - (gamma/2)^2` in `(-pi, pi]`; 0 when `r = 0`.
    pub theta: f64,
    pub exponent_plus: Complex64,
    pub exponent_minus: Complex64,
    pub max_real_exponent: f64,
    /// `Re[gamma]/2 - sqrt(r)*|sin(theta/2)|`; nonnegative means bounded.
    pub margin: f64,
    pub divergent: bool,
    /// `r == 0`: the exponents coincide (critical damping) and the
    /// two-exponential solution degenerates.
    pub degenerate: bool,
    /// `Re[gamma] < 0`: the model's standing assumption is violated;
    /// the verdict is still computed (and will report divergence).
    pub negative_damping: bool,
}

/// `gamma(lambda) = (gamma0 + gamma1*Re[lambda]) + i*gamma1*Im[lambda]`.
pub fn damping_of(lambda: Complex64, p: DampingParams) -> Complex64 {
    Complex64::new(
        p.gamma0 + p.gamma1 * lambda.re,
        p.gamma1 * lambda.im,
    )
}

/// Polar decomposition `r * exp(i*theta) = lambda - (gamma/2)^2`.
///
/// `theta` is the principal argument in `(-pi, pi]`, with the argument
/// of zero defined as 0.
pub fn polar_shift(lambda: Complex64, gamma: Complex64) -> (f64, f64) {
    let half = gamma * 0.5;
    let w = lambda - half * half;
    let r = w.norm();
    let theta = if r == 0.0 {
        0.0
    } else {
        let t = w.arg();
        // atan2 may return -pi for a -0.0 imaginary part
        if t <= -PI {
            PI
        } else {
            t
        }
    };
    (r, theta)
}

/// Solution exponents `s_pm = -gamma/2 +- i*sqrt(r)*exp(i*theta/2)`.
///
/// Their real parts are `-Re[gamma]/2 -+ sqrt(r)*sin(theta/2)`. When
/// `r = 0` the two coincide (critical damping).
pub fn mode_exponents(lambda: Complex64, p: DampingParams) -> (Complex64, Complex64) {
    let gamma = damping_of(lambda, p);
    let (r, theta) = polar_shift(lambda, gamma);
    let osc = Complex64::i() * Complex64::from_polar(r.sqrt(), 0.5 * theta);
    let base = -gamma * 0.5;
    (base + osc, base - osc)
}

/// Classifies one mode, computing the margin and both divergence routes.
///
/// `divergent` is true exactly when the margin is below `-MARGIN_BAND`;
/// a margin within the band counts as non-divergent (marginal modes
/// oscillate without decay).
pub fn classify_mode(lambda: Complex64, p: DampingParams) -> ModeReport {
    let gamma = damping_of(lambda, p);
    let (r, theta) = polar_shift(lambda, gamma);
    let (exponent_plus, exponent_minus) = mode_exponents(lambda, p);
    let max_real_exponent = exponent_plus.re.max(exponent_minus.re);
    let margin = 0.5 * gamma.re - r.sqrt() * (0.5 * theta).sin().abs();

    // The two routes compute the same quantity through different
    // floating-point paths; they must agree to rounding.
    let scale = 1.0_f64.max(lambda.norm()).max(gamma.norm_sqr());
    assert!(
        (margin + max_real_exponent).abs() <= 1e-10 * scale,
        "divergence routes disagree: margin {margin:.17e} vs max exponent {max_real_exponent:.17e}"
    );

    ModeReport {
        lambda,
        gamma,
        r,
        theta,
        exponent_plus,
        exponent_minus,
        max_real_exponent,
        margin,
        divergent: margin < -MARGIN_BAND,
        degenerate: r == 0.0,
        negative_damping: gamma.re < 0.0,
    }
}

/// Classifies every mode of a spectrum; the network is safe when no
/// mode diverges. Reports are in spectrum order.
pub fn classify_network(s: &Spectrum, p: DampingParams) -> (bool, Vec<ModeReport>) {
    let reports: Vec<ModeReport> = s
        .eigenvalues()
        .iter()
        .map(|&lambda| classify_mode(lambda, p))
        .collect();
    let safe = reports.iter().all(|r| !r.divergent);
    (safe, reports)
}

/// CSV export:
/// `mu,re_lambda,im_lambda,r,theta,max_re_exponent,margin,divergent`.
pub fn write_mode_reports_csv<W: Write>(reports: &[ModeReport], mut sink: W) -> Result<()> {
    writeln!(
        sink,
        "mu,re_lambda,im_lambda,r,theta,max_re_exponent,margin,divergent"
    )?;
    for (mu, r) in reports.iter().enumerate() {
        writeln!(
            sink,
            "{mu},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            r.lambda.re, r.lambda.im, r.r, r.theta, r.max_real_exponent, r.margin, r.divergent
        )?;
    }
    Ok(())
}
