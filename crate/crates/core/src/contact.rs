//! Contact charts: the contact condition, the Reeb solver, conformal
//! rescaling, symplectization, both reduction directions, and the
//! rho-integrality check for the induced symplectic class.

use crate::calculus::{
    exterior_derivative, interior_product, max_coeff_residual, surface_integral, wedge,
    DifferentialForm, FormHandle, ParametrizedSurface, SmoothMap, VectorField,
};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

/// Threshold on the volume-form coefficient below which the contact
/// condition counts as failed.
pub const CONTACT_THRESHOLD: f64 = 1e-10;

/// Residual bound certified by the Reeb solver at every query point.
pub const REEB_RESIDUAL: f64 = 1e-10;

/// Outcome of sampling eta ^ (d eta)^n over the chart.
#[derive(Debug, Clone)]
pub struct ContactReport {
    pub samples: usize,
    pub seed: u64,
    /// Minimum of |volume coefficient| over the samples.
    pub min_abs: f64,
    /// Point achieving the minimum.
    pub argmin: Vec<f64>,
    pub pass: bool,
}

/// Compute the contact volume form eta ^ (d eta)^n.
pub fn contact_volume(eta: &DifferentialForm) -> Result<DifferentialForm> {
    let dim = eta.chart().dim();
    if dim % 2 == 0 {
        return Err(Error::EvenDimensional(dim));
    }
    let n = (dim - 1) / 2;
    let d_eta = exterior_derivative(eta)?;
    let mut power = eta.clone();
    for _ in 0..n {
        power = wedge(&power, &d_eta)?;
    }
    Ok(power)
}

/// Sample the contact condition: eta ^ (d eta)^n nonvanishing.
pub fn is_contact(eta: &DifferentialForm, samples: usize, seed: u64) -> Result<ContactReport> {
    let volume = contact_volume(eta)?;
    let chart = eta.chart();
    let idx: Vec<usize> = (0..chart.dim()).collect();
    let coeff = volume.coeff(&idx);
    let mut min_abs = f64::INFINITY;
    let mut argmin = Vec::new();
    for p in chart.sample_n(samples, seed) {
        let v = coeff.eval(&chart.binding(&p))?.abs();
        if v < min_abs {
            min_abs = v;
            argmin = p;
        }
    }
    Ok(ContactReport {
        samples,
        seed,
        min_abs,
        argmin,
        pass: min_abs > CONTACT_THRESHOLD,
    })
}

/// A validated contact chart: odd dimension, eta ^ (d eta)^n nonvanishing at
/// construction-time samples, with a cached pointwise Reeb resolver.
#[derive(Debug, Clone)]
pub struct ContactChart {
    chart: Arc<Chart>,
    eta: DifferentialForm,
    d_eta: DifferentialForm,
    reeb: VectorField,
    half_dim: usize,
}

impl ContactChart {
    pub fn new(eta: DifferentialForm, samples: usize, seed: u64) -> Result<ContactChart> {
        let report = is_contact(&eta, samples, seed)?;
        if !report.pass {
            return Err(Error::ContactConditionFailed {
                min_abs: report.min_abs,
                point: report.argmin,
            });
        }
        let chart = eta.chart().clone();
        let d_eta = exterior_derivative(&eta)?;
        let reeb = reeb_field(&eta, &d_eta);
        Ok(ContactChart {
            half_dim: (chart.dim() - 1) / 2,
            chart,
            eta,
            d_eta,
            reeb,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn eta(&self) -> &DifferentialForm {
        &self.eta
    }

    pub fn d_eta(&self) -> &DifferentialForm {
        &self.d_eta
    }

    /// n, where the chart has dimension 2n + 1.
    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    /// The cached pointwise Reeb field.
    pub fn reeb(&self) -> &VectorField {
        &self.reeb
    }

    /// Max over samples of the two Reeb defining-equation residuals,
    /// |eta(R) - 1| and |i_R d eta|.
    pub fn reeb_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in self.chart.sample_n(samples, seed) {
            let (a, d) = eta_data_at(&self.eta, &self.d_eta, &p)?;
            let r = self.reeb.resolve(&p)?;
            let r = DVector::from_column_slice(&r);
            worst = worst.max((a.dot(&r) - 1.0).abs());
            worst = worst.max((&d * &r).amax());
        }
        Ok(worst)
    }

    /// Pointwise basis of the contact distribution ker(eta) at a point:
    /// 2n vectors e_i - (a_i / a_j) e_j, where j carries the largest |a|.
    pub fn kernel_basis(&self, point: &[f64]) -> Result<Vec<Vec<f64>>> {
        kernel_of_one_form(&self.eta, point)
    }
}

fn eta_data_at(
    eta: &DifferentialForm,
    d_eta: &DifferentialForm,
    point: &[f64],
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let dim = eta.chart().dim();
    let binding = eta.chart().binding(point);
    let mut a = DVector::zeros(dim);
    for (idx, c) in eta.terms() {
        a[idx[0]] = c.eval(&binding)?;
    }
    let mut d = DMatrix::zeros(dim, dim);
    for (idx, c) in d_eta.terms() {
        let v = c.eval(&binding)?;
        d[(idx[0], idx[1])] = v;
        d[(idx[1], idx[0])] = -v;
    }
    Ok((a, d))
}

/// Pointwise nullspace basis of a 1-form.
pub fn kernel_of_one_form(eta: &DifferentialForm, point: &[f64]) -> Result<Vec<Vec<f64>>> {
    let dim = eta.chart().dim();
    let binding = eta.chart().binding(point);
    let mut a = vec![0.0; dim];
    for (idx, c) in eta.terms() {
        a[idx[0]] = c.eval(&binding)?;
    }
    let j = (0..dim)
        .max_by(|&x, &y| a[x].abs().total_cmp(&a[y].abs()))
        .unwrap();
    if a[j] == 0.0 {
        return Err(Error::SingularSystem {
            point: point.to_vec(),
            context: "1-form vanishes; no hyperplane kernel".into(),
        });
    }
    let mut basis = Vec::with_capacity(dim - 1);
    for i in 0..dim {
        if i == j {
            continue;
        }
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v[j] = -a[i] / a[j];
        basis.push(v);
    }
    Ok(basis)
}

/// Build the pointwise Reeb resolver for a contact form. At each query the
/// square system (d eta + eta eta^T) R = eta is solved by LU with partial
/// pivoting; the rank-one term pins eta(R) = 1 while d eta annihilates R,
/// and both defining equations are certified to [`REEB_RESIDUAL`] after the
/// solve.
fn reeb_field(eta: &DifferentialForm, d_eta: &DifferentialForm) -> VectorField {
    let eta = eta.clone();
    let d_eta = d_eta.clone();
    let chart = eta.chart().clone();
    VectorField::pointwise(
        chart,
        Arc::new(move |p: &[f64]| {
            let (a, d) = eta_data_at(&eta, &d_eta, p)?;
            let system = &d + &a * a.transpose();
            let lu = system.lu();
            let r = lu.solve(&a).ok_or_else(|| Error::SingularSystem {
                point: p.to_vec(),
                context: "Reeb system is singular (contact condition fails here)".into(),
            })?;
            let res_eta = (a.dot(&r) - 1.0).abs();
            let res_deta = (&d * &r).amax();
            if res_eta > REEB_RESIDUAL || res_deta > REEB_RESIDUAL {
                return Err(Error::SingularSystem {
                    point: p.to_vec(),
                    context: format!(
                        "Reeb residuals too large: |eta(R)-1| = {res_eta:.3e}, |i_R d eta| = {res_deta:.3e}"
                    ),
                });
            }
            Ok(r.as_slice().to_vec())
        }),
    )
}

/// Verification record for a conformal rescaling eta' = f eta.
#[derive(Debug, Clone)]
pub struct RescaleReport {
    /// Max |eta(X)| over samples, X = R' - R/f (X must lie in the contact
    /// distribution).
    pub kernel_residual: f64,
    /// Max residual of i_{fX} d(f eta) = df - R(f) eta over samples.
    pub defining_residual: f64,
    pub pass: bool,
}

pub const RESCALE_TOLERANCE: f64 = 1e-8;

/// Rescale eta by a nonvanishing function and verify the Reeb transformation
/// law: R' = R/f + X with X in ker(eta), where fX is pinned by
///
///   i_{fX} d(f eta) = df - R(f) eta.
///
/// (Contracting f R' - R into d(f eta) kills the i_{R'} term since R' is the
/// Reeb field of f eta, and expanding i_R d(f eta) = R(f) eta - df gives the
/// identity; for constant f it degenerates to X = 0, R' = R/f.)
pub fn conformal_rescale(
    contact: &ContactChart,
    f: &Expr,
    samples: usize,
    seed: u64,
) -> Result<(ContactChart, RescaleReport)> {
    let chart = contact.chart();
    let points = chart.sample_n(samples, seed);
    for p in &points {
        let v = f.eval(&chart.binding(p))?;
        if v.abs() < 1e-12 {
            return Err(Error::VanishingFunction {
                point: p.clone(),
                value: v.abs(),
            });
        }
    }
    let eta_prime = contact.eta().scale(f);
    let rescaled = ContactChart::new(eta_prime, samples, seed)?;

    let df: Vec<Expr> = (0..chart.dim())
        .map(|i| f.diff(chart.coord(i)))
        .collect();
    let mut kernel_residual: f64 = 0.0;
    let mut defining_residual: f64 = 0.0;
    for p in &points {
        let binding = chart.binding(p);
        let fval = f.eval(&binding)?;
        let r = contact.reeb().resolve(p)?;
        let r_prime = rescaled.reeb().resolve(p)?;
        let x: Vec<f64> = (0..chart.dim())
            .map(|i| r_prime[i] - r[i] / fval)
            .collect();

        let (a, _) = eta_data_at(contact.eta(), contact.d_eta(), p)?;
        let xv = DVector::from_column_slice(&x);
        kernel_residual = kernel_residual.max(a.dot(&xv).abs());

        // i_{fX} d(f eta) evaluated on basis vectors is -(D' fX)
        let (_, d_prime) = eta_data_at(rescaled.eta(), rescaled.d_eta(), p)?;
        let lhs = -(&d_prime * (fval * &xv));
        let rf: f64 = (0..chart.dim())
            .map(|i| Ok(r[i] * df[i].eval(&binding)?))
            .sum::<Result<f64>>()?;
        for j in 0..chart.dim() {
            let rhs = df[j].eval(&binding)? - rf * a[j];
            defining_residual = defining_residual.max((lhs[j] - rhs).abs());
        }
    }
    let report = RescaleReport {
        kernel_residual,
        defining_residual,
        pass: kernel_residual < RESCALE_TOLERANCE && defining_residual < RESCALE_TOLERANCE,
    };
    Ok((rescaled, report))
}

/// The symplectization of a contact chart: fiber coordinate s in (0, inf),
/// omega = ds ^ eta + s d eta, Liouville form theta = s eta, Liouville field
/// s d/ds.
#[derive(Debug, Clone)]
pub struct Symplectization {
    base: ContactChart,
    chart: Arc<Chart>,
    fiber: String,
    omega: DifferentialForm,
    liouville_form: DifferentialForm,
    liouville_field: VectorField,
}

impl Symplectization {
    pub fn base(&self) -> &ContactChart {
        &self.base
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn fiber_name(&self) -> &str {
        &self.fiber
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    /// theta = s eta.
    pub fn liouville_form(&self) -> &DifferentialForm {
        &self.liouville_form
    }

    /// nabla = s d/ds.
    pub fn liouville_field(&self) -> &VectorField {
        &self.liouville_field
    }

    /// Embedding of the base at the section s = 1.
    pub fn unit_section(&self) -> SmoothMap {
        let mut components: Vec<Expr> = self
            .base
            .chart()
            .coords()
            .iter()
            .map(Expr::var)
            .collect();
        components.push(Expr::one());
        SmoothMap::new(self.base.chart().clone(), self.chart.clone(), components)
            .expect("section components fit")
    }

    /// Pointwise nondegeneracy of omega: min |det| over samples.
    pub fn min_abs_det(&self, samples: usize, seed: u64) -> Result<f64> {
        let dim = self.chart.dim();
        let mut min_det = f64::INFINITY;
        for p in self.chart.sample_n(samples, seed) {
            let binding = self.chart.binding(&p);
            let mut m = DMatrix::zeros(dim, dim);
            for (idx, c) in self.omega.terms() {
                let v = c.eval(&binding)?;
                m[(idx[0], idx[1])] = v;
                m[(idx[1], idx[0])] = -v;
            }
            min_det = min_det.min(m.determinant().abs());
        }
        Ok(min_det)
    }
}

/// Constraints checked on the symplectization after construction.
pub const SYMPLECTIZATION_TOLERANCE: f64 = 1e-10;

/// Build the symplectization and validate its structure equations:
/// omega = d(s eta) (two symbolic routes), i_nabla omega = theta, and
/// pointwise nondegeneracy.
pub fn symplectize(contact: &ContactChart, samples: usize, seed: u64) -> Result<Symplectization> {
    let (ext, fiber) = contact.chart().extend("s", (0.0, f64::INFINITY), "_symp");
    let s_idx = ext.index_of(&fiber).unwrap();
    let s = Expr::var(&fiber);

    let eta_l = contact.eta().lift_to(ext.clone(), 0)?;
    let d_eta_l = exterior_derivative(&eta_l)?;
    let mut ds = DifferentialForm::zero(ext.clone(), 1)?;
    ds.add_term(vec![s_idx], Expr::one());
    let omega = wedge(&ds, &eta_l)?.plus(&d_eta_l.scale(&s))?;
    let liouville_form = eta_l.scale(&s);

    let mut nabla_components = vec![Expr::zero(); ext.dim()];
    nabla_components[s_idx] = s.clone();
    let liouville_field = VectorField::symbolic(ext.clone(), nabla_components)?;

    let symp = Symplectization {
        base: contact.clone(),
        chart: ext.clone(),
        fiber,
        omega,
        liouville_form,
        liouville_field,
    };

    let points = ext.sample_n(samples, seed);
    // omega agrees with d(theta), the alternative symbolic route
    let d_theta = exterior_derivative(&symp.liouville_form)?;
    let res = max_coeff_residual(
        &FormHandle::Symbolic(symp.omega.clone()),
        &FormHandle::Symbolic(d_theta),
        &points,
    )?;
    if res > SYMPLECTIZATION_TOLERANCE {
        return Err(Error::Invalid(format!(
            "omega != d(s eta): residual {res:.3e}"
        )));
    }
    // i_nabla omega = theta
    let contracted = interior_product(&symp.liouville_field, &symp.omega)?;
    let res = max_coeff_residual(
        &contracted,
        &FormHandle::Symbolic(symp.liouville_form.clone()),
        &points,
    )?;
    if res > SYMPLECTIZATION_TOLERANCE {
        return Err(Error::Invalid(format!(
            "i_nabla omega != theta: residual {res:.3e}"
        )));
    }
    let min_det = symp.min_abs_det(samples, seed)?;
    if min_det <= 1e-12 {
        return Err(Error::Invalid(format!(
            "omega degenerate on samples: min |det| = {min_det:.3e}"
        )));
    }
    Ok(symp)
}

/// Report for the reduction operations.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    /// Residual of the hypothesis L_nu Omega = Omega (symplectic-to-contact)
    /// or of p . sigma = id (contact-to-symplectic).
    pub hypothesis_residual: f64,
    /// Residual of the conclusion: embed* Omega = d eta, resp. p* omega = d eta.
    pub conclusion_residual: f64,
    pub contact: Option<ContactReport>,
}

pub const HOMOGENEITY_TOLERANCE: f64 = 1e-6;
pub const TRANSVERSALITY_THRESHOLD: f64 = 1e-8;
pub const REDUCTION_TOLERANCE: f64 = 1e-8;
pub const SECTION_TOLERANCE: f64 = 1e-10;

/// Symplectic-to-contact reduction: eta = embed*(i_nu Omega) for a Liouville
/// field nu (L_nu Omega = Omega) transversal to the embedded hypersurface.
/// Returns eta together with the verification report; the contact condition
/// and embed*(Omega) = d eta are checked after construction.
pub fn symplectic_to_contact(
    omega: &DifferentialForm,
    nu: &VectorField,
    embed: &SmoothMap,
    samples: usize,
    seed: u64,
) -> Result<(DifferentialForm, ReductionReport)> {
    let ambient = omega.chart();
    if !nu.chart().compatible(ambient) {
        return Err(nu.chart().mismatch(ambient));
    }
    if !embed.target().compatible(ambient) {
        return Err(embed.target().mismatch(ambient));
    }
    if embed.source().dim() + 1 != ambient.dim() {
        return Err(Error::DimensionMismatch {
            expected: ambient.dim() - 1,
            found: embed.source().dim(),
        });
    }

    // hypothesis: 1-homogeneity of Omega along nu
    let l_nu = crate::calculus::lie_derivative(nu, omega)?;
    let ambient_points = ambient.sample_n(samples, seed);
    let hypothesis_residual = max_coeff_residual(
        &l_nu,
        &FormHandle::Symbolic(omega.clone()),
        &ambient_points,
    )?;
    if hypothesis_residual > HOMOGENEITY_TOLERANCE {
        return Err(Error::HomogeneityFailed {
            residual: hypothesis_residual,
        });
    }

    // transversality along the image of the embedding
    let surface_points = embed.source().sample_n(samples, seed);
    for u in &surface_points {
        let x = embed.apply(u)?;
        let jac = embed.jacobian_at(u)?;
        let nu_x = nu.resolve(&x)?;
        let d = ambient.dim();
        let mut m = DMatrix::zeros(d, d);
        m.view_mut((0, 0), (d, d - 1)).copy_from(&jac);
        for i in 0..d {
            m[(i, d - 1)] = nu_x[i];
        }
        let sigma_min = m
            .svd(false, false)
            .singular_values
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if sigma_min < TRANSVERSALITY_THRESHOLD {
            return Err(Error::NotTransversal {
                point: x,
                sigma_min,
            });
        }
    }

    let ambient_eta = interior_product(nu, omega)?;
    let ambient_eta = ambient_eta
        .as_symbolic()
        .ok_or(Error::PointwiseUnsupported)?;
    let eta = embed.pullback(ambient_eta)?;

    let contact_report = is_contact(&eta, samples, seed)?;
    if !contact_report.pass {
        return Err(Error::ContactConditionFailed {
            min_abs: contact_report.min_abs,
            point: contact_report.argmin.clone(),
        });
    }
    let pulled_omega = embed.pullback(omega)?;
    let d_eta = exterior_derivative(&eta)?;
    let conclusion_residual = max_coeff_residual(
        &FormHandle::Symbolic(pulled_omega),
        &FormHandle::Symbolic(d_eta),
        &surface_points,
    )?;
    if conclusion_residual > REDUCTION_TOLERANCE {
        return Err(Error::Invalid(format!(
            "embed* Omega != d eta: residual {conclusion_residual:.3e}"
        )));
    }
    Ok((
        eta,
        ReductionReport {
            hypothesis_residual,
            conclusion_residual,
            contact: Some(contact_report),
        },
    ))
}

/// Contact-to-symplectic reduction: omega = sigma*(d eta) for a projection p
/// whose fibers are Reeb orbits and a section sigma of p. Verifies
/// p . sigma = id, Tp(R) = 0, p* omega = d eta, and pointwise nondegeneracy.
pub fn contact_to_symplectic(
    contact: &ContactChart,
    p: &SmoothMap,
    sigma: &SmoothMap,
    samples: usize,
    seed: u64,
) -> Result<(DifferentialForm, ReductionReport)> {
    if !p.source().compatible(contact.chart()) {
        return Err(p.source().mismatch(contact.chart()));
    }
    if !sigma.target().compatible(contact.chart()) {
        return Err(sigma.target().mismatch(contact.chart()));
    }
    if !sigma.source().compatible(p.target()) {
        return Err(sigma.source().mismatch(p.target()));
    }
    let base = p.target();

    // p . sigma = id on base samples
    let base_points = base.sample_n(samples, seed);
    let mut hypothesis_residual: f64 = 0.0;
    let mut worst_point = None;
    for u in &base_points {
        let x = sigma.apply(u)?;
        let back = p.apply(&x)?;
        for (a, b) in back.iter().zip(u) {
            let r = (a - b).abs();
            if r > hypothesis_residual {
                hypothesis_residual = r;
                worst_point = Some(u.clone());
            }
        }
    }
    if hypothesis_residual > SECTION_TOLERANCE {
        return Err(Error::NotASection {
            point: worst_point.unwrap_or_default(),
            residual: hypothesis_residual,
        });
    }

    // fibers of p are Reeb orbits: Tp(R) = 0
    let total_points = contact.chart().sample_n(samples, seed);
    for x in &total_points {
        let r = contact.reeb().resolve(x)?;
        let tp = p.tangent_apply(x, &r)?;
        let res = tp.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if res > SECTION_TOLERANCE {
            return Err(Error::FiberMismatch {
                point: x.clone(),
                residual: res,
            });
        }
    }

    let omega = sigma.pullback(contact.d_eta())?;

    // p* omega = d eta
    let pulled = p.pullback(&omega)?;
    let conclusion_residual = max_coeff_residual(
        &FormHandle::Symbolic(pulled),
        &FormHandle::Symbolic(contact.d_eta().clone()),
        &total_points,
    )?;
    if conclusion_residual > REDUCTION_TOLERANCE {
        return Err(Error::Invalid(format!(
            "p* omega != d eta: residual {conclusion_residual:.3e}"
        )));
    }

    // pointwise nondegeneracy of omega on the base
    for u in &base_points {
        let binding = base.binding(u);
        let d = base.dim();
        let mut m = DMatrix::zeros(d, d);
        for (idx, c) in omega.terms() {
            let v = c.eval(&binding)?;
            m[(idx[0], idx[1])] = v;
            m[(idx[1], idx[0])] = -v;
        }
        if m.determinant().abs() <= 1e-12 {
            return Err(Error::SingularSystem {
                point: u.clone(),
                context: "reduced omega is degenerate".into(),
            });
        }
    }
    Ok((
        omega,
        ReductionReport {
            hypothesis_residual,
            conclusion_residual,
            contact: None,
        },
    ))
}

/// Result of checking the integral of omega over a closed surface against
/// the lattice rho Z. For surfaces flagged as relative cycles only the raw
/// integral is populated.
#[derive(Debug, Clone)]
pub struct IntegralityReport {
    pub integral: f64,
    pub period: f64,
    pub quotient: Option<f64>,
    pub nearest: Option<i64>,
    pub deviation: Option<f64>,
    pub pass: Option<bool>,
}

/// Integrate omega over the surface and test membership of the class value
/// integral / rho in Z within `tol`.
pub fn integrality_check(
    omega: &DifferentialForm,
    surface: &ParametrizedSurface,
    rho: f64,
    tol: f64,
    grid: (usize, usize),
) -> Result<IntegralityReport> {
    if !(rho > 0.0) {
        return Err(Error::Invalid("integrality needs a positive period".into()));
    }
    let integral = surface_integral(omega, surface, grid)?;
    if !surface.is_closed() {
        return Ok(IntegralityReport {
            integral,
            period: rho,
            quotient: None,
            nearest: None,
            deviation: None,
            pass: None,
        });
    }
    let quotient = integral / rho;
    let nearest = quotient.round();
    let deviation = (quotient - nearest).abs();
    Ok(IntegralityReport {
        integral,
        period: rho,
        quotient: Some(quotient),
        nearest: Some(nearest as i64),
        deviation: Some(deviation),
        pass: Some(deviation < tol),
    })
}
