//! Vector fields (symbolic components or pointwise resolvers) and the
//! contraction operations that pair them with forms.

use super::forms::{DifferentialForm, FormHandle, PointwiseForm};
use super::FD_STEP;
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use std::collections::BTreeMap;
use std::sync::Arc;

type FieldResolver = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

#[derive(Clone)]
enum FieldKind {
    Symbolic(Vec<Expr>),
    Pointwise(Arc<FieldResolver>),
}

/// A vector field on a chart: either symbolic components or a pointwise
/// resolver (point -> components), e.g. the Reeb field of a generic contact
/// form.
#[derive(Clone)]
pub struct VectorField {
    chart: Arc<Chart>,
    kind: FieldKind,
}

impl VectorField {
    pub fn symbolic(chart: Arc<Chart>, components: Vec<Expr>) -> Result<VectorField> {
        if components.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: components.len(),
            });
        }
        Ok(VectorField {
            chart,
            kind: FieldKind::Symbolic(components),
        })
    }

    pub fn pointwise(chart: Arc<Chart>, resolve: Arc<FieldResolver>) -> VectorField {
        VectorField {
            chart,
            kind: FieldKind::Pointwise(resolve),
        }
    }

    /// The coordinate field along axis `i`.
    pub fn basis(chart: Arc<Chart>, i: usize) -> VectorField {
        let mut components = vec![Expr::zero(); chart.dim()];
        components[i] = Expr::one();
        VectorField::symbolic(chart, components).expect("basis components fit")
    }

    /// Constant components.
    pub fn constant(chart: Arc<Chart>, values: &[f64]) -> Result<VectorField> {
        VectorField::symbolic(chart, values.iter().map(|&v| Expr::constant(v)).collect())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn components(&self) -> Option<&[Expr]> {
        match &self.kind {
            FieldKind::Symbolic(c) => Some(c),
            FieldKind::Pointwise(_) => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.kind, FieldKind::Symbolic(_))
    }

    pub fn resolve(&self, point: &[f64]) -> Result<Vec<f64>> {
        match &self.kind {
            FieldKind::Symbolic(components) => {
                let binding = self.chart.binding(point);
                components.iter().map(|c| c.eval(&binding)).collect()
            }
            FieldKind::Pointwise(f) => f(point),
        }
    }

    /// Directional derivative X(f) of a symbolic function, symbolically when
    /// the field is symbolic, by central differences otherwise.
    pub fn derive(&self, f: &Expr, point: &[f64]) -> Result<f64> {
        match &self.kind {
            FieldKind::Symbolic(components) => {
                let binding = self.chart.binding(point);
                let mut total = 0.0;
                for (i, comp) in components.iter().enumerate() {
                    let partial = f.diff(self.chart.coord(i));
                    if partial.is_zero() {
                        continue;
                    }
                    total += comp.eval(&binding)? * partial.eval(&binding)?;
                }
                Ok(total)
            }
            FieldKind::Pointwise(_) => {
                let x = self.resolve(point)?;
                let mut plus = point.to_vec();
                let mut minus = point.to_vec();
                for i in 0..point.len() {
                    plus[i] += FD_STEP * x[i];
                    minus[i] -= FD_STEP * x[i];
                }
                let fp = f.eval(&self.chart.binding(&plus))?;
                let fm = f.eval(&self.chart.binding(&minus))?;
                Ok((fp - fm) / (2.0 * FD_STEP))
            }
        }
    }

    /// Scale by an expression (symbolic fields only).
    pub fn scaled(&self, factor: &Expr) -> Result<VectorField> {
        let components = self
            .components()
            .ok_or(Error::PointwiseUnsupported)?
            .iter()
            .map(|c| Expr::mul(factor.clone(), c.clone()))
            .collect();
        VectorField::symbolic(self.chart.clone(), components)
    }
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            FieldKind::Symbolic(c) => f.debug_tuple("VectorField::Symbolic").field(c).finish(),
            FieldKind::Pointwise(_) => f
                .debug_struct("VectorField::Pointwise")
                .field("chart", &self.chart.name())
                .finish(),
        }
    }
}

fn contract_coeffs(
    coeffs: &BTreeMap<Vec<usize>, f64>,
    x: &[f64],
) -> BTreeMap<Vec<usize>, f64> {
    let mut out: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (idx, &c) in coeffs {
        for (m, &i) in idx.iter().enumerate() {
            let sub: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != m)
                .map(|(_, &v)| v)
                .collect();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            *out.entry(sub).or_insert(0.0) += sign * x[i] * c;
        }
    }
    out.retain(|_, v| *v != 0.0);
    out
}

/// Interior product i_X omega. Symbolic when both operands are symbolic,
/// pointwise otherwise.
pub fn interior_product(x: &VectorField, form: &DifferentialForm) -> Result<FormHandle> {
    if !x.chart().compatible(form.chart()) {
        return Err(x.chart().mismatch(form.chart()));
    }
    if form.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    match x.components() {
        Some(components) => {
            let mut out = DifferentialForm::zero(form.chart().clone(), form.degree() - 1)?;
            for (idx, c) in form.terms() {
                for (m, &i) in idx.iter().enumerate() {
                    let sub: Vec<usize> = idx
                        .iter()
                        .enumerate()
                        .filter(|&(q, _)| q != m)
                        .map(|(_, &v)| v)
                        .collect();
                    let term = Expr::mul(components[i].clone(), c.clone());
                    let signed = if m % 2 == 0 { term } else { Expr::neg(term) };
                    out.add_term(sub, signed);
                }
            }
            Ok(FormHandle::Symbolic(out))
        }
        None => {
            let x = x.clone();
            let form = form.clone();
            Ok(FormHandle::Pointwise(PointwiseForm::new(
                form.chart().clone(),
                form.degree() - 1,
                Arc::new(move |p| {
                    let coeffs = form.eval_coeffs(p)?;
                    Ok(contract_coeffs(&coeffs, &x.resolve(p)?))
                }),
            )))
        }
    }
}

/// Interior product against an already-pointwise form.
pub fn interior_product_pointwise(x: &VectorField, form: &PointwiseForm) -> Result<PointwiseForm> {
    if !x.chart().compatible(form.chart()) {
        return Err(x.chart().mismatch(form.chart()));
    }
    if form.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    let x = x.clone();
    let form = form.clone();
    let chart = form.chart().clone();
    let degree = form.degree() - 1;
    Ok(PointwiseForm::new(
        chart,
        degree,
        Arc::new(move |p| {
            let coeffs = form.eval_coeffs(p)?;
            Ok(contract_coeffs(&coeffs, &x.resolve(p)?))
        }),
    ))
}

/// Lie derivative by the Cartan formula L_X = i_X d + d i_X. Fully symbolic
/// when X is; otherwise the outer exterior derivative falls back to central
/// differences with step [`FD_STEP`].
pub fn lie_derivative(x: &VectorField, form: &DifferentialForm) -> Result<FormHandle> {
    if !x.chart().compatible(form.chart()) {
        return Err(x.chart().mismatch(form.chart()));
    }
    if form.degree() == 0 {
        // L_X f = X(f) = i_X df
        let df = super::forms::exterior_derivative(form)?;
        return interior_product(x, &df);
    }
    let dim = form.chart().dim();
    let i_x_d: Option<FormHandle> = if form.degree() < dim {
        let d = super::forms::exterior_derivative(form)?;
        Some(interior_product(x, &d)?)
    } else {
        None // top degree: d omega = 0
    };
    let inner = interior_product(x, form)?;
    let d_i_x = inner.exterior_derivative(FD_STEP)?;
    match (i_x_d, d_i_x) {
        (None, any) => Ok(any),
        (Some(FormHandle::Symbolic(a)), FormHandle::Symbolic(b)) => {
            Ok(FormHandle::Symbolic(a.plus(&b)?))
        }
        (Some(a), b) => {
            let chart = form.chart().clone();
            let degree = form.degree();
            Ok(FormHandle::Pointwise(PointwiseForm::new(
                chart,
                degree,
                Arc::new(move |p| {
                    let mut out = a.eval_coeffs(p)?;
                    for (idx, v) in b.eval_coeffs(p)? {
                        *out.entry(idx).or_insert(0.0) += v;
                    }
                    Ok(out)
                }),
            )))
        }
    }
}

/// Lie bracket [X, Y]^i = X(Y^i) - Y(X^i). Symbolic fields only.
pub fn bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if !x.chart().compatible(y.chart()) {
        return Err(x.chart().mismatch(y.chart()));
    }
    let (xc, yc) = match (x.components(), y.components()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::PointwiseUnsupported),
    };
    let chart = x.chart();
    let mut components = Vec::with_capacity(chart.dim());
    for i in 0..chart.dim() {
        let mut total = Expr::zero();
        for j in 0..chart.dim() {
            let v = chart.coord(j);
            total = Expr::add(
                total,
                Expr::sub(
                    Expr::mul(xc[j].clone(), yc[i].diff(v)),
                    Expr::mul(yc[j].clone(), xc[i].diff(v)),
                ),
            );
        }
        components.push(total);
    }
    VectorField::symbolic(chart.clone(), components)
}
