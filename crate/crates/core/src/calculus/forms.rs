//! Differential forms with symbolic coefficients over strictly increasing
//! multi-indices, plus their pointwise (numerically resolved) counterpart.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Degree-k form on a chart. Coefficients are stored only for strictly
/// increasing multi-indices; an absent index means a zero coefficient.
/// A 0-form is a single coefficient at the empty index.
#[derive(Debug, Clone)]
pub struct DifferentialForm {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Expr>,
}

/// Sort a multi-index, tracking the permutation sign. `None` on repeats.
pub(crate) fn sort_index(mut idx: Vec<usize>) -> Option<(Vec<usize>, f64)> {
    let mut sign = 1.0;
    // insertion sort; index lengths are tiny
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((idx, sign))
    }
}

/// All strictly increasing `k`-element multi-indices drawn from `0..dim`.
pub fn increasing_indices(dim: usize, k: usize) -> Vec<Vec<usize>> {
    if k > dim {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance the combination: bump the rightmost index that has room
        let mut i = k;
        while i > 0 && idx[i - 1] == dim - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl DifferentialForm {
    pub fn zero(chart: Arc<Chart>, degree: usize) -> Result<DifferentialForm> {
        if degree > chart.dim() {
            return Err(Error::DegreeOverflow {
                degree,
                dim: chart.dim(),
            });
        }
        Ok(DifferentialForm {
            chart,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// A 0-form (a function).
    pub fn function(chart: Arc<Chart>, f: Expr) -> DifferentialForm {
        let mut form = DifferentialForm::zero(chart, 0).expect("degree 0 always fits");
        form.coeffs.insert(Vec::new(), f);
        form
    }

    /// A 1-form from one coefficient per coordinate.
    pub fn one_form(chart: Arc<Chart>, coeffs: Vec<Expr>) -> Result<DifferentialForm> {
        if coeffs.len() != chart.dim() {
            return Err(Error::DimensionMismatch {
                expected: chart.dim(),
                found: coeffs.len(),
            });
        }
        let mut form = DifferentialForm::zero(chart, 1)?;
        for (i, c) in coeffs.into_iter().enumerate() {
            form.add_term(vec![i], c);
        }
        Ok(form)
    }

    /// Add `coeff * dx_idx`; the index may arrive unsorted (the permutation
    /// sign is absorbed), repeated indices contribute nothing.
    pub fn add_term(&mut self, idx: Vec<usize>, coeff: Expr) {
        debug_assert_eq!(idx.len(), self.degree);
        debug_assert!(idx.iter().all(|&i| i < self.chart.dim()));
        if coeff.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_index(idx) else {
            return;
        };
        let signed = if sign < 0.0 { Expr::neg(coeff) } else { coeff };
        let entry = self
            .coeffs
            .remove(&sorted)
            .map(|old| Expr::add(old, signed.clone()))
            .unwrap_or(signed);
        if !entry.is_zero() {
            self.coeffs.insert(sorted, entry);
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of a strictly increasing index (zero if absent).
    pub fn coeff(&self, idx: &[usize]) -> Expr {
        self.coeffs.get(idx).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.coeffs.iter()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The single coefficient of a 0-form.
    pub fn as_function(&self) -> Option<Expr> {
        if self.degree == 0 {
            Some(self.coeff(&[]))
        } else {
            None
        }
    }

    pub fn scale(&self, factor: &Expr) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.chart.clone(), self.degree).unwrap();
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), Expr::mul(factor.clone(), c.clone()));
        }
        out
    }

    pub fn plus(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        if !self.chart.compatible(&other.chart) {
            return Err(self.chart.mismatch(&other.chart));
        }
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn negated(&self) -> DifferentialForm {
        self.scale(&Expr::constant(-1.0))
    }

    /// Move the coefficients verbatim onto a compatible chart (one whose
    /// coordinate list starts with this chart's coordinates), e.g. lifting a
    /// form to an extended chart. `offset` shifts the multi-indices.
    pub fn lift_to(&self, chart: Arc<Chart>, offset: usize) -> Result<DifferentialForm> {
        if chart.dim() < self.chart.dim() + offset {
            return Err(Error::DimensionMismatch {
                expected: self.chart.dim() + offset,
                found: chart.dim(),
            });
        }
        let mut out = DifferentialForm::zero(chart, self.degree)?;
        for (idx, c) in &self.coeffs {
            out.add_term(idx.iter().map(|&i| i + offset).collect(), c.clone());
        }
        Ok(out)
    }

    /// Evaluate all coefficients at a point.
    pub fn eval_coeffs(&self, point: &[f64]) -> Result<BTreeMap<Vec<usize>, f64>> {
        let binding = self.chart.binding(point);
        let mut out = BTreeMap::new();
        for (idx, c) in &self.coeffs {
            out.insert(idx.clone(), c.eval(&binding)?);
        }
        Ok(out)
    }

    /// Evaluate the form on `degree` tangent vectors at a point.
    pub fn apply(&self, point: &[f64], vectors: &[&[f64]]) -> Result<f64> {
        apply_coeffs(&self.eval_coeffs(point)?, vectors, self.degree)
    }

    pub fn as_pointwise(&self) -> PointwiseForm {
        let form = self.clone();
        PointwiseForm {
            chart: self.chart.clone(),
            degree: self.degree,
            resolve: Arc::new(move |p| form.eval_coeffs(p)),
        }
    }
}

fn apply_coeffs(
    coeffs: &BTreeMap<Vec<usize>, f64>,
    vectors: &[&[f64]],
    degree: usize,
) -> Result<f64> {
    if vectors.len() != degree {
        return Err(Error::DimensionMismatch {
            expected: degree,
            found: vectors.len(),
        });
    }
    let mut total = 0.0;
    for (idx, &c) in coeffs {
        // det of the k x k matrix (vectors[j])_{idx[i]}
        total += c * det_minor(vectors, idx);
    }
    Ok(total)
}

fn det_minor(vectors: &[&[f64]], rows: &[usize]) -> f64 {
    let k = rows.len();
    match k {
        0 => 1.0,
        1 => vectors[0][rows[0]],
        2 => {
            vectors[0][rows[0]] * vectors[1][rows[1]]
                - vectors[0][rows[1]] * vectors[1][rows[0]]
        }
        _ => {
            // cofactor expansion along the first vector
            let mut det = 0.0;
            for (i, &r) in rows.iter().enumerate() {
                let minor_rows: Vec<usize> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * vectors[0][r] * det_minor(&vectors[1..], &minor_rows);
            }
            det
        }
    }
}

type CoeffResolver = dyn Fn(&[f64]) -> Result<BTreeMap<Vec<usize>, f64>> + Send + Sync;

/// A form whose coefficients are only available numerically, point by point.
#[derive(Clone)]
pub struct PointwiseForm {
    chart: Arc<Chart>,
    degree: usize,
    resolve: Arc<CoeffResolver>,
}

impl PointwiseForm {
    pub fn new(
        chart: Arc<Chart>,
        degree: usize,
        resolve: Arc<CoeffResolver>,
    ) -> PointwiseForm {
        PointwiseForm {
            chart,
            degree,
            resolve,
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval_coeffs(&self, point: &[f64]) -> Result<BTreeMap<Vec<usize>, f64>> {
        (self.resolve)(point)
    }

    pub fn apply(&self, point: &[f64], vectors: &[&[f64]]) -> Result<f64> {
        apply_coeffs(&self.eval_coeffs(point)?, vectors, self.degree)
    }

    /// Exterior derivative by central differences on the coefficients.
    pub fn exterior_derivative_fd(&self, step: f64) -> Result<PointwiseForm> {
        let dim = self.chart.dim();
        if self.degree >= dim {
            return Err(Error::DegreeOverflow {
                degree: self.degree + 1,
                dim,
            });
        }
        let inner = self.clone();
        let degree = self.degree;
        let out_indices = increasing_indices(dim, degree + 1);
        Ok(PointwiseForm {
            chart: self.chart.clone(),
            degree: degree + 1,
            resolve: Arc::new(move |p| {
                let mut out = BTreeMap::new();
                for idx in &out_indices {
                    let mut total = 0.0;
                    for (m, &j) in idx.iter().enumerate() {
                        let sub: Vec<usize> = idx
                            .iter()
                            .enumerate()
                            .filter(|&(q, _)| q != m)
                            .map(|(_, &v)| v)
                            .collect();
                        let mut plus = p.to_vec();
                        plus[j] += step;
                        let mut minus = p.to_vec();
                        minus[j] -= step;
                        let cp = inner.eval_coeffs(&plus)?.get(&sub).copied().unwrap_or(0.0);
                        let cm = inner.eval_coeffs(&minus)?.get(&sub).copied().unwrap_or(0.0);
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        total += sign * (cp - cm) / (2.0 * step);
                    }
                    if total != 0.0 {
                        out.insert(idx.clone(), total);
                    }
                }
                Ok(out)
            }),
        })
    }
}

impl std::fmt::Debug for PointwiseForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointwiseForm")
            .field("chart", &self.chart.name())
            .field("degree", &self.degree)
            .finish()
    }
}

/// A form that is either symbolic or pointwise, so operations can retain
/// symbolic data whenever possible.
#[derive(Debug, Clone)]
pub enum FormHandle {
    Symbolic(DifferentialForm),
    Pointwise(PointwiseForm),
}

impl FormHandle {
    pub fn chart(&self) -> &Arc<Chart> {
        match self {
            FormHandle::Symbolic(f) => f.chart(),
            FormHandle::Pointwise(f) => f.chart(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            FormHandle::Symbolic(f) => f.degree(),
            FormHandle::Pointwise(f) => f.degree(),
        }
    }

    pub fn eval_coeffs(&self, point: &[f64]) -> Result<BTreeMap<Vec<usize>, f64>> {
        match self {
            FormHandle::Symbolic(f) => f.eval_coeffs(point),
            FormHandle::Pointwise(f) => f.eval_coeffs(point),
        }
    }

    pub fn apply(&self, point: &[f64], vectors: &[&[f64]]) -> Result<f64> {
        match self {
            FormHandle::Symbolic(f) => f.apply(point, vectors),
            FormHandle::Pointwise(f) => f.apply(point, vectors),
        }
    }

    pub fn as_symbolic(&self) -> Option<&DifferentialForm> {
        match self {
            FormHandle::Symbolic(f) => Some(f),
            FormHandle::Pointwise(_) => None,
        }
    }

    pub fn exterior_derivative(&self, fd_step: f64) -> Result<FormHandle> {
        match self {
            FormHandle::Symbolic(f) => Ok(FormHandle::Symbolic(exterior_derivative(f)?)),
            FormHandle::Pointwise(f) => {
                Ok(FormHandle::Pointwise(f.exterior_derivative_fd(fd_step)?))
            }
        }
    }
}

impl From<DifferentialForm> for FormHandle {
    fn from(f: DifferentialForm) -> Self {
        FormHandle::Symbolic(f)
    }
}

impl From<PointwiseForm> for FormHandle {
    fn from(f: PointwiseForm) -> Self {
        FormHandle::Pointwise(f)
    }
}

/// Symbolic exterior derivative. Errors on top-degree input.
pub fn exterior_derivative(form: &DifferentialForm) -> Result<DifferentialForm> {
    let dim = form.chart().dim();
    if form.degree() >= dim {
        return Err(Error::DegreeOverflow {
            degree: form.degree() + 1,
            dim,
        });
    }
    let mut out = DifferentialForm::zero(form.chart().clone(), form.degree() + 1)?;
    for (idx, c) in form.terms() {
        for j in 0..dim {
            if idx.contains(&j) {
                continue;
            }
            let partial = c.diff(form.chart().coord(j));
            if partial.is_zero() {
                continue;
            }
            let mut new_idx = Vec::with_capacity(idx.len() + 1);
            new_idx.push(j);
            new_idx.extend_from_slice(idx);
            out.add_term(new_idx, partial);
        }
    }
    Ok(out)
}

/// Graded-antisymmetric wedge product.
pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> Result<DifferentialForm> {
    if !a.chart().compatible(b.chart()) {
        return Err(a.chart().mismatch(b.chart()));
    }
    let dim = a.chart().dim();
    let degree = a.degree() + b.degree();
    if degree > dim {
        return Err(Error::DegreeOverflow { degree, dim });
    }
    let mut out = DifferentialForm::zero(a.chart().clone(), degree)?;
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            if ia.iter().any(|i| ib.contains(i)) {
                continue;
            }
            let mut idx = Vec::with_capacity(degree);
            idx.extend_from_slice(ia);
            idx.extend_from_slice(ib);
            out.add_term(idx, Expr::mul(ca.clone(), cb.clone()));
        }
    }
    Ok(out)
}
