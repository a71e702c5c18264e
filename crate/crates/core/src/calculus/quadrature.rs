//! Gauss-Legendre quadrature and integration of 2-forms over parametrized
//! surfaces.

use super::forms::DifferentialForm;
use super::maps::SmoothMap;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Newton iteration on the Legendre recurrence; nodes are strictly interior.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x via the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn scaled_rule(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        nodes.iter().map(|t| mid + half * t).collect(),
        weights.iter().map(|w| w * half).collect(),
    )
}

/// A parametrized surface: a smooth map from a closed 2-parameter rectangle
/// (the source chart's intervals) into a chart, with periodicity flags per
/// parameter. `closed` may be declared explicitly when the geometry closes up
/// for reasons the flags cannot see (e.g. edges collapsing to points).
#[derive(Debug, Clone)]
pub struct ParametrizedSurface {
    map: SmoothMap,
    periodic: [bool; 2],
    closed: Option<bool>,
}

impl ParametrizedSurface {
    pub fn new(map: SmoothMap, periodic: [bool; 2], closed: Option<bool>) -> Result<Self> {
        if map.source().dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: map.source().dim(),
            });
        }
        for &(lo, hi) in map.source().intervals() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidChart(
                    "surface parameters need finite intervals".into(),
                ));
            }
        }
        let surface = ParametrizedSurface {
            map,
            periodic,
            closed,
        };
        surface.check_evaluable(16)?;
        Ok(surface)
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn rectangle(&self) -> [(f64, f64); 2] {
        let iv = self.map.source().intervals();
        [iv[0], iv[1]]
    }

    pub fn is_closed(&self) -> bool {
        self.closed.unwrap_or(self.periodic[0] && self.periodic[1])
    }

    /// Evaluation succeeds on a dense grid (differentiability proxy from the
    /// type's contract).
    pub fn check_evaluable(&self, per_axis: usize) -> Result<()> {
        let [(a1, b1), (a2, b2)] = self.rectangle();
        for i in 0..per_axis {
            for j in 0..per_axis {
                let u = a1 + (b1 - a1) * (i as f64 + 0.5) / per_axis as f64;
                let v = a2 + (b2 - a2) * (j as f64 + 0.5) / per_axis as f64;
                self.map.apply(&[u, v]).map_err(|e| Error::QuadratureNode {
                    node: vec![u, v],
                    message: e.to_string(),
                })?;
            }
        }
        Ok(())
    }
}

/// Integral of a 2-form over a parametrized surface by tensor-product
/// Gauss-Legendre quadrature on the parameter rectangle. The pullback is
/// computed symbolically, so the integrand is the single coefficient of
/// du ^ dv. Deterministic for a fixed grid.
pub fn surface_integral(
    form: &DifferentialForm,
    surface: &ParametrizedSurface,
    grid: (usize, usize),
) -> Result<f64> {
    if form.degree() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: form.degree(),
        });
    }
    if grid.0 < 8 || grid.1 < 8 {
        return Err(Error::GridTooCoarse(grid.0, grid.1));
    }
    let pulled = surface.map.pullback(form)?;
    let integrand = pulled.coeff(&[0, 1]);
    let [(a1, b1), (a2, b2)] = surface.rectangle();
    let (u_nodes, u_weights) = scaled_rule(grid.0, a1, b1);
    let (v_nodes, v_weights) = scaled_rule(grid.1, a2, b2);
    let chart = surface.map.source().clone();
    let mut total = 0.0;
    for (u, wu) in u_nodes.iter().zip(&u_weights) {
        let mut inner = 0.0;
        for (v, wv) in v_nodes.iter().zip(&v_weights) {
            let value = integrand
                .eval(&chart.binding(&[*u, *v]))
                .map_err(|e| Error::QuadratureNode {
                    node: vec![*u, *v],
                    message: e.to_string(),
                })?;
            inner += wv * value;
        }
        total += wu * inner;
    }
    Ok(total)
}
