//! Cosine least-squares fit of binned fringe data.

use nalgebra::{Matrix3, Vector3};

use crate::{Error, Result};

/// Minimum θ coverage of a grid that can be fitted.
pub const MIN_SPAN: f64 = 1.5 * std::f64::consts::PI;

/// Result of fitting `I(θ) ≈ A + B·cos θ + C·sin θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineFit {
    pub offset: f64,
    pub cos_coeff: f64,
    pub sin_coeff: f64,
    /// Covariance of `(A, B, C)` propagated from the per-point errors.
    pub covariance: Matrix3<f64>,
}

impl CosineFit {
    pub fn amplitude(&self) -> f64 {
        self.cos_coeff.hypot(self.sin_coeff)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Set when the fitted offset is not positive; `value` and `stderr` are
    /// then zero and carry no information.
    pub degenerate: bool,
    pub fit: CosineFit,
}

/// Ordinary least squares on the `[1, cos θ, sin θ]` design.
///
/// Points are weighted equally so that bins with zero observed variance
/// (e.g. a fringe minimum at exactly zero) do not dominate; the per-point
/// standard errors only enter the covariance.
pub fn fit_cosine(theta: &[f64], values: &[f64], stderr: &[f64]) -> Result<CosineFit> {
    if theta.len() != values.len() || theta.len() != stderr.len() {
        return Err(Error::DimensionMismatch(theta.len(), values.len().min(stderr.len())));
    }
    if theta.len() < 4 {
        return Err(Error::InvalidGrid(format!(
            "cosine fit needs at least 4 phase points, got {}",
            theta.len()
        )));
    }
    let lo = theta.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < MIN_SPAN - 1e-12 {
        return Err(Error::InvalidGrid(format!(
            "phase grid spans {:.4} rad, need at least 3π/2",
            hi - lo
        )));
    }

    let row = |t: f64| Vector3::new(1.0, t.cos(), t.sin());
    let mut normal = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    for (&t, &y) in theta.iter().zip(values) {
        let x = row(t);
        normal += x * x.transpose();
        rhs += x * y;
    }
    let inv = normal
        .try_inverse()
        .ok_or_else(|| Error::InvalidGrid("phase grid gives a singular cosine design".into()))?;
    let beta = inv * rhs;

    // Cov(β) = L·diag(σ²)·Lᵀ with L = (XᵀX)⁻¹Xᵀ.
    let mut covariance = Matrix3::zeros();
    for (&t, &s) in theta.iter().zip(stderr) {
        let l = inv * row(t);
        covariance += l * l.transpose() * (s * s);
    }
    Ok(CosineFit {
        offset: beta[0],
        cos_coeff: beta[1],
        sin_coeff: beta[2],
        covariance,
    })
}

/// `V̂ = √(B² + C²)/A` with a delta-method standard error.
pub fn visibility_from_fit(fit: CosineFit) -> VisibilityEstimate {
    let a = fit.offset;
    if !(a > 0.0) {
        return VisibilityEstimate {
            value: 0.0,
            stderr: 0.0,
            degenerate: true,
            fit,
        };
    }
    let r = fit.amplitude();
    let v = r / a;
    let cov = &fit.covariance;
    let var = if r > 0.0 {
        let g = Vector3::new(-v / a, fit.cos_coeff / (a * r), fit.sin_coeff / (a * r));
        (g.transpose() * cov * g)[0]
    } else {
        // The gradient of √(B²+C²) is undefined at the origin; use the
        // mean of the two amplitude variances.
        0.5 * (cov[(1, 1)] + cov[(2, 2)]) / (a * a)
    };
    VisibilityEstimate {
        value: v,
        stderr: var.max(0.0).sqrt(),
        degenerate: false,
        fit,
    }
}
