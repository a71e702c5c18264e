//! Exterior calculus on a single chart: differential forms, vector fields,
//! smooth maps, and quadrature of 2-forms over parametrized surfaces.
//!
//! All coefficient data is symbolic ([`crate::expr::Expr`]); operations that
//! involve a pointwise-only vector field degrade gracefully to pointwise
//! forms evaluated on demand. Verification is always a max-residual over
//! seeded sample points.

mod fields;
mod forms;
mod maps;
mod quadrature;

pub use fields::{
    bracket, interior_product, interior_product_pointwise, lie_derivative, VectorField,
};
pub use forms::{
    exterior_derivative, increasing_indices, wedge, DifferentialForm, FormHandle, PointwiseForm,
};
pub use maps::SmoothMap;
pub use quadrature::{gauss_legendre, surface_integral, ParametrizedSurface};

use crate::error::Result;

/// Central-difference step used whenever a derivative has to be taken of
/// pointwise-only data. Second-order accurate.
pub const FD_STEP: f64 = 1e-5;

/// Max over points and multi-indices of |a_I(x) - b_I(x)|.
pub fn max_coeff_residual(a: &FormHandle, b: &FormHandle, points: &[Vec<f64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        let ca = a.eval_coeffs(p)?;
        let cb = b.eval_coeffs(p)?;
        for (idx, va) in &ca {
            let vb = cb.get(idx).copied().unwrap_or(0.0);
            worst = worst.max((va - vb).abs());
        }
        for (idx, vb) in &cb {
            if !ca.contains_key(idx) {
                worst = worst.max(vb.abs());
            }
        }
    }
    Ok(worst)
}

/// Max over points and multi-indices of |a_I(x)|.
pub fn max_coeff_abs(a: &FormHandle, points: &[Vec<f64>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in points {
        for v in a.eval_coeffs(p)?.values() {
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
