//! Complex eigendecomposition of the nonsymmetric Laplacian.
//!
//! Directed graphs give nonsymmetric Laplacians, so the spectrum is
//! generally complex. The decomposition is delegated to LAPACK's
//! nonsymmetric QR driver; this module adds the contract on top:
//! deterministic eigenvalue ordering, per-pair residual acceptance,
//! a condition estimate for the eigenvector basis, and near-duplicate
//! detection (downstream modal analysis assumes a simple spectrum).

use std::io::Write;

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Norm, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::LaplacianMatrix;

/// Residual acceptance: `||L v - lambda v|| <= RESIDUAL_TOL * ||L||_F * ||v||`.
const RESIDUAL_TOL: f64 = 1e-8;

/// Two eigenvalues closer than `1e-6 * max(1, d_max)` are flagged as
/// near-duplicates.
const NEAR_DUPLICATE_TOL: f64 = 1e-6;

/// The largest Gershgorin disk `{ z : |z - d_max| <= d_max }`.
///
/// Center and radius coincide by construction, so the whole spectrum of
/// a Laplacian lies in the closed right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GershgorinDisk {
    center: f64,
    radius: f64,
}

impl GershgorinDisk {
    pub fn new(d_max: f64) -> Self {
        assert!(
            d_max.is_finite() && d_max >= 0.0,
            "d_max must be finite and nonnegative"
        );
        Self {
            center: d_max,
            radius: d_max,
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (z - Complex64::new(self.center, 0.0)).norm() <= self.radius + tol
    }
}

/// Eigenvalues and eigenvectors of a Laplacian, sorted by
/// (real part, imaginary part).
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    eigenvectors: Array2<Complex64>,
    condition_estimate: f64,
    near_duplicates: Vec<(usize, usize)>,
}

impl Spectrum {
    /// Assembles a spectrum from explicit eigenpairs, for synthetic
    /// mode-level studies where no source matrix exists. Eigenpairs are
    /// sorted into the canonical (re, im) order; the condition estimate
    /// and near-duplicate flags are computed, but no residual check is
    /// possible.
    pub fn from_parts(
        eigenvalues: Vec<Complex64>,
        eigenvectors: Array2<Complex64>,
    ) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.dim() != (n, n) {
            return Err(Error::Numerical(format!(
                "eigenvector matrix {:?} does not match {n} eigenvalues",
                eigenvectors.dim()
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            eigenvalues[i]
                .re
                .total_cmp(&eigenvalues[j].re)
                .then(eigenvalues[i].im.total_cmp(&eigenvalues[j].im))
        });
        let sorted_values: Vec<Complex64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let mut sorted_vectors = Array2::<Complex64>::zeros((n, n));
        for (col, &src) in order.iter().enumerate() {
            sorted_vectors
                .column_mut(col)
                .assign(&eigenvectors.column(src));
        }
        let condition_estimate = condition_number(&sorted_vectors)?;
        let scale = sorted_values
            .iter()
            .fold(1.0_f64, |acc, z| acc.max(z.norm()));
        let dup_tol = NEAR_DUPLICATE_TOL * scale;
        let mut near_duplicates = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if (sorted_values[i] - sorted_values[j]).norm() < dup_tol {
                    near_duplicates.push((i, j));
                }
            }
        }
        Ok(Self {
            eigenvalues: sorted_values,
            eigenvectors: sorted_vectors,
            condition_estimate,
            near_duplicates,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Eigenvector matrix; column `mu` pairs with `eigenvalues()[mu]`.
    pub fn eigenvectors(&self) -> &Array2<Complex64> {
        &self.eigenvectors
    }

    /// Condition number estimate of the eigenvector matrix (2-norm,
    /// via singular values). Infinite when the basis is singular.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Index pairs of eigenvalues within the near-duplicate tolerance.
    /// Non-empty means the simple-spectrum assumption is violated and
    /// modal solves may be refused.
    pub fn near_duplicates(&self) -> &[(usize, usize)] {
        &self.near_duplicates
    }

    pub fn has_near_duplicates(&self) -> bool {
        !self.near_duplicates.is_empty()
    }
}

/// Full complex eigendecomposition of `L`, with residual acceptance.
pub fn compute_spectrum(l: &LaplacianMatrix) -> Result<Spectrum> {
    let a = l.matrix();
    let (raw_values, raw_vectors) = a.eig().map_err(|e| Error::Eigensolver {
        detail: e.to_string(),
    })?;

    let n = raw_values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        raw_values[i]
            .re
            .total_cmp(&raw_values[j].re)
            .then(raw_values[i].im.total_cmp(&raw_values[j].im))
    });

    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| raw_values[i]).collect();
    let mut eigenvectors = Array2::<Complex64>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        eigenvectors.column_mut(col).assign(&raw_vectors.column(src));
    }

    let ac = a.mapv(|x| Complex64::new(x, 0.0));
    let norm_l = a.norm_l2(); // Frobenius norm
    for mu in 0..n {
        let v = eigenvectors.column(mu);
        let residual = (ac.dot(&v) - v.mapv(|x| x * eigenvalues[mu])).norm_l2();
        let bound = RESIDUAL_TOL * norm_l.max(1.0) * v.norm_l2();
        if residual > bound {
            return Err(Error::EigenResidual {
                mode: mu,
                residual,
                bound,
            });
        }
    }

    let condition_estimate = condition_number(&eigenvectors)?;

    let dup_tol = NEAR_DUPLICATE_TOL * l.d_max().max(1.0);
    let mut near_duplicates = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (eigenvalues[i] - eigenvalues[j]).norm() < dup_tol {
                near_duplicates.push((i, j));
            }
        }
    }

    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        condition_estimate,
        near_duplicates,
    })
}

fn condition_number(v: &Array2<Complex64>) -> Result<f64> {
    let (_, sigma, _) = v.svd(false, false).map_err(|e| Error::Eigensolver {
        detail: format!("svd for condition estimate: {e}"),
    })?;
    let smax = sigma[0];
    let smin = sigma[sigma.len() - 1];
    Ok(if smin > 0.0 { smax / smin } else { f64::INFINITY })
}

/// Gershgorin disk of `L`: center and radius both equal `d_max`.
pub fn largest_gershgorin_disk(l: &LaplacianMatrix) -> GershgorinDisk {
    GershgorinDisk::new(l.d_max())
}

/// CSV export: `mu,re_lambda,im_lambda`, 17 significant digits.
pub fn write_spectrum_csv<W: Write>(s: &Spectrum, mut sink: W) -> Result<()> {
    writeln!(sink, "mu,re_lambda,im_lambda")?;
    for (mu, lambda) in s.eigenvalues().iter().enumerate() {
        writeln!(sink, "{mu},{:.16e},{:.16e}", lambda.re, lambda.im)?;
    }
    Ok(())
}

#[allow(dead_code)]
fn eigvec_residual(a: &Array2<Complex64>, v: &Array1<Complex64>, lambda: Complex64) -> f64 {
    (a.dot(v) - v.mapv(|x| x * lambda)).norm_l2()
}
