//! Smooth maps between charts, their Jacobians, and symbolic pullback.

use super::forms::DifferentialForm;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use nalgebra::DMatrix;
use std::sync::Arc;

/// A map given by one component expression per target coordinate, written in
/// the source chart's coordinates.
#[derive(Debug, Clone)]
pub struct SmoothMap {
    source: Arc<Chart>,
    target: Arc<Chart>,
    components: Vec<Expr>,
    jacobian: Vec<Vec<Expr>>, // [target component][source coordinate]
}

impl SmoothMap {
    pub fn new(source: Arc<Chart>, target: Arc<Chart>, components: Vec<Expr>) -> Result<SmoothMap> {
        if components.len() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: components.len(),
            });
        }
        for c in &components {
            for v in c.variables() {
                if source.index_of(&v).is_none() {
                    return Err(Error::UnboundVariable { name: v });
                }
            }
        }
        let jacobian = components
            .iter()
            .map(|c| {
                (0..source.dim())
                    .map(|j| c.diff(source.coord(j)))
                    .collect()
            })
            .collect();
        Ok(SmoothMap {
            source,
            target,
            components,
            jacobian,
        })
    }

    pub fn identity(chart: Arc<Chart>) -> SmoothMap {
        let components = chart.coords().iter().map(Expr::var).collect();
        SmoothMap::new(chart.clone(), chart, components).expect("identity components fit")
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        let binding = self.source.binding(point);
        self.components.iter().map(|c| c.eval(&binding)).collect()
    }

    /// Jacobian matrix (target dim x source dim) at a point.
    pub fn jacobian_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let binding = self.source.binding(point);
        let mut m = DMatrix::zeros(self.target.dim(), self.source.dim());
        for (i, row) in self.jacobian.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = e.eval(&binding)?;
            }
        }
        Ok(m)
    }

    /// Tangent map applied to a vector: J(p) v.
    pub fn tangent_apply(&self, point: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let j = self.jacobian_at(point)?;
        let v = nalgebra::DVector::from_column_slice(v);
        Ok((j * v).as_slice().to_vec())
    }

    /// Composition self . other (other first), by substitution.
    pub fn compose(&self, other: &SmoothMap) -> Result<SmoothMap> {
        if !other.target.compatible(&self.source) {
            return Err(other.target.mismatch(&self.source));
        }
        let replacements: Vec<(String, Expr)> = self
            .source
            .coords()
            .iter()
            .cloned()
            .zip(other.components.iter().cloned())
            .collect();
        let components = self
            .components
            .iter()
            .map(|c| c.subst(&replacements))
            .collect();
        SmoothMap::new(other.source.clone(), self.target.clone(), components)
    }

    /// Symbolic pullback of a form on the target chart.
    pub fn pullback(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        if !form.chart().compatible(&self.target) {
            return Err(self.target.mismatch(form.chart()));
        }
        let k = form.degree();
        let src_dim = self.source.dim();
        if k > src_dim {
            return Err(Error::DegreeOverflow {
                degree: k,
                dim: src_dim,
            });
        }
        let replacements: Vec<(String, Expr)> = self
            .target
            .coords()
            .iter()
            .cloned()
            .zip(self.components.iter().cloned())
            .collect();
        let mut out = DifferentialForm::zero(self.source.clone(), k)?;
        let source_indices = super::forms::increasing_indices(src_dim, k);
        for (idx, c) in form.terms() {
            let pulled_coeff = c.subst(&replacements);
            if pulled_coeff.is_zero() {
                continue;
            }
            for j_idx in &source_indices {
                // minor of the Jacobian: rows = target components idx, cols = j_idx
                let det = self.jacobian_minor(idx, j_idx);
                if det.is_zero() {
                    continue;
                }
                out.add_term(j_idx.clone(), Expr::mul(pulled_coeff.clone(), det));
            }
        }
        Ok(out)
    }

    /// Symbolic determinant of the Jacobian minor with given rows/cols,
    /// by cofactor expansion (indices stay small).
    fn jacobian_minor(&self, rows: &[usize], cols: &[usize]) -> Expr {
        match rows.len() {
            0 => Expr::one(),
            1 => self.jacobian[rows[0]][cols[0]].clone(),
            _ => {
                let mut det = Expr::zero();
                for (i, &r) in rows.iter().enumerate() {
                    let entry = self.jacobian[r][cols[0]].clone();
                    if entry.is_zero() {
                        continue;
                    }
                    let rest_rows: Vec<usize> = rows
                        .iter()
                        .enumerate()
                        .filter(|&(q, _)| q != i)
                        .map(|(_, &v)| v)
                        .collect();
                    let minor = self.jacobian_minor(&rest_rows, &cols[1..]);
                    let term = Expr::mul(entry, minor);
                    let signed = if i % 2 == 0 { term } else { Expr::neg(term) };
                    det = Expr::add(det, signed);
                }
                det
            }
        }
    }
}
