//! Check runners behind the subcommands: each produces a stream of
//! [`Report`]s in canonical (name-sorted) order.

use crate::report::Report;
use reebkit::calculus::{
    lie_derivative, max_coeff_abs, max_coeff_residual, DifferentialForm, FormHandle,
    ParametrizedSurface, SmoothMap, VectorField,
};
use reebkit::contact::{
    contact_to_symplectic, integrality_check, is_contact, ContactChart, CONTACT_THRESHOLD,
};
use reebkit::dynamics::{period_constancy_suite, SuiteVerdict, PERIOD_SPREAD_REL};
use reebkit::expr::{parse, Expr};
use reebkit::prequant::{
    covariant_derivative, curvature_residual, dirac_residual, hamiltonian_field,
    prequantum_op, EquivariantFunction, PrincipalContactData, CURVATURE_SIGN, DIRAC_SIGN,
};
use reebkit::products::{
    check_legendrian, contact_product, graph_relation, Component, ProductContactChart,
};
use reebkit::num_complex::Complex64;
use reebkit::Error;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub step: f64,
    pub grid: (usize, usize),
    pub horizon: f64,
}

/// Everything the verify suite may exercise for one target.
pub struct VerifySpec {
    pub eta: DifferentialForm,
    pub projection: Option<SmoothMap>,
    pub section: Option<SmoothMap>,
    pub declared_omega: Option<DifferentialForm>,
    pub integrality: Option<(ParametrizedSurface, f64)>,
    /// Declared minimal period; INFINITY for translation-type flows, None
    /// when unknown.
    pub declared_period: Option<f64>,
}

/// Outcome splitting: check failures become failing reports (exit 1),
/// anything else is an input/evaluation error (exit 2).
fn failing_residual(err: &Error) -> Option<f64> {
    match err {
        Error::ContactConditionFailed { min_abs, .. } => Some(*min_abs),
        Error::NotASection { residual, .. } | Error::FiberMismatch { residual, .. } => {
            Some(*residual)
        }
        Error::HomogeneityFailed { residual } => Some(*residual),
        Error::EquivarianceViolation { residual, .. } => Some(*residual),
        _ => None,
    }
}

pub fn run_verify(
    spec: &VerifySpec,
    cfg: &SuiteConfig,
    digest: &str,
) -> reebkit::Result<Vec<Report>> {
    let mut reports = Vec::new();

    // contact condition first: everything else depends on it
    let start = Instant::now();
    let contact_report = is_contact(&spec.eta, cfg.samples, cfg.seed)?;
    reports.push(Report::new(
        "contact_condition",
        digest,
        cfg.seed,
        cfg.samples,
        contact_report.min_abs,
        CONTACT_THRESHOLD,
        contact_report.pass,
        start.elapsed().as_secs_f64() * 1e3,
    ));
    if !contact_report.pass {
        return Ok(crate::report::sort(reports));
    }
    let contact = ContactChart::new(spec.eta.clone(), cfg.samples, cfg.seed)?;

    // Reeb defining equations
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(1e-10);
    let residual = contact.reeb_residual(cfg.samples, cfg.seed)?;
    reports.push(Report::new(
        "reeb_defining_equations",
        digest,
        cfg.seed,
        cfg.samples,
        residual,
        tol,
        residual < tol,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    // L_R eta = 0 along the finite-difference path
    let start = Instant::now();
    let invariance_samples = cfg.samples.min(100);
    let l = lie_derivative(contact.reeb(), contact.eta())?;
    let pts = contact.chart().sample_n(invariance_samples, cfg.seed);
    let residual = max_coeff_abs(&l, &pts)?;
    let tol = cfg.tol.unwrap_or(1e-6);
    reports.push(Report::new(
        "reeb_invariance",
        digest,
        cfg.seed,
        invariance_samples,
        residual,
        tol,
        residual < tol,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    // period constancy
    let start = Instant::now();
    let orbits = cfg.samples.clamp(1, 20);
    let suite = period_constancy_suite(&contact, orbits, cfg.seed, cfg.horizon, 1e-4, cfg.step)?;
    // escaped orbits (incomplete fields) are excluded from the dichotomy
    let (residual, pass) = match &suite.verdict {
        SuiteVerdict::Periodic { mean, spread } => {
            let mut ok = *spread < PERIOD_SPREAD_REL * mean;
            if let Some(declared) = spec.declared_period {
                if declared.is_finite() {
                    ok &= (mean - declared).abs() < 1e-6;
                } else {
                    ok = false; // declared non-periodic but orbits returned
                }
            }
            (*spread, ok)
        }
        SuiteVerdict::NonPeriodic => {
            let ok = spec
                .declared_period
                .map(|rho| rho.is_infinite())
                .unwrap_or(true);
            (0.0, ok)
        }
        SuiteVerdict::Mixed => (f64::INFINITY, false),
        SuiteVerdict::AllEscaped => (f64::INFINITY, false),
    };
    reports.push(Report::new(
        "period_constancy",
        digest,
        cfg.seed,
        orbits,
        residual,
        PERIOD_SPREAD_REL,
        pass,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    // reduction consistency and integrality, when the data is present
    if let (Some(projection), Some(section)) = (&spec.projection, &spec.section) {
        let start = Instant::now();
        let tol = cfg.tol.unwrap_or(1e-8);
        match contact_to_symplectic(&contact, projection, section, cfg.samples, cfg.seed) {
            Ok((omega, reduction_report)) => {
                let mut residual = reduction_report.conclusion_residual;
                if let Some(declared) = &spec.declared_omega {
                    let pts = declared.chart().sample_n(cfg.samples.min(100), cfg.seed);
                    residual = residual.max(max_coeff_residual(
                        &FormHandle::Symbolic(omega.clone()),
                        &FormHandle::Symbolic(declared.clone()),
                        &pts,
                    )?);
                }
                reports.push(Report::new(
                    "reduction_consistency",
                    digest,
                    cfg.seed,
                    cfg.samples,
                    residual,
                    tol,
                    residual < tol,
                    start.elapsed().as_secs_f64() * 1e3,
                ));

                if let Some((surface, rho)) = &spec.integrality {
                    let start = Instant::now();
                    let tol = cfg.tol.unwrap_or(1e-6);
                    let report = integrality_check(&omega, surface, *rho, tol, cfg.grid)?;
                    reports.push(Report::new(
                        "integrality",
                        digest,
                        cfg.seed,
                        cfg.grid.0 * cfg.grid.1,
                        report.deviation.unwrap_or(f64::NAN),
                        tol,
                        report.pass.unwrap_or(false),
                        start.elapsed().as_secs_f64() * 1e3,
                    ));
                }
            }
            Err(err) => match failing_residual(&err) {
                Some(residual) => reports.push(Report::new(
                    "reduction_consistency",
                    digest,
                    cfg.seed,
                    cfg.samples,
                    residual,
                    tol,
                    false,
                    start.elapsed().as_secs_f64() * 1e3,
                )),
                None => return Err(err),
            },
        }
    }

    Ok(crate::report::sort(reports))
}

pub fn run_product(
    c1: &ContactChart,
    c2: &ContactChart,
    component: Component,
    same_target: bool,
    cfg: &SuiteConfig,
    digest: &str,
) -> reebkit::Result<(Option<ProductContactChart>, Vec<Report>)> {
    let mut reports = Vec::new();
    let start = Instant::now();
    let product = match contact_product(c1, c2, component, cfg.samples, cfg.seed) {
        Ok(product) => product,
        Err(err) => match failing_residual(&err) {
            Some(residual) => {
                reports.push(Report::new(
                    "product_contact_condition",
                    digest,
                    cfg.seed,
                    cfg.samples,
                    residual,
                    CONTACT_THRESHOLD,
                    false,
                    start.elapsed().as_secs_f64() * 1e3,
                ));
                return Ok((None, crate::report::sort(reports)));
            }
            None => return Err(err),
        },
    };
    let contact_report = is_contact(product.eta(), cfg.samples, cfg.seed)?;
    reports.push(Report::new(
        "product_contact_condition",
        digest,
        cfg.seed,
        cfg.samples,
        contact_report.min_abs,
        CONTACT_THRESHOLD,
        contact_report.pass,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(1e-8);
    let residual = product.reeb_identification_residual(cfg.samples, cfg.seed)?;
    reports.push(Report::new(
        "product_reeb_factors",
        digest,
        cfg.seed,
        cfg.samples,
        residual,
        tol,
        residual < tol,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(1e-10);
    let kernel_samples = cfg.samples.max(100);
    let residual = product.kernel_agreement_residual(kernel_samples, cfg.seed)?;
    reports.push(Report::new(
        "product_kernel_agreement",
        digest,
        cfg.seed,
        kernel_samples,
        residual,
        tol,
        residual < tol,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    if same_target {
        // the identity graph is a Legendrian of the product of a chart with
        // itself; it lives in the t < 0 component
        let neg = if component == Component::Neg {
            product.clone()
        } else {
            contact_product(c1, c2, Component::Neg, cfg.samples, cfg.seed)?
        };
        let start = Instant::now();
        let identity = SmoothMap::identity(c1.chart().clone());
        let graph = graph_relation(&neg, &identity, &Expr::one())?;
        let report = check_legendrian(&neg, &graph, cfg.samples, cfg.seed)?;
        reports.push(Report::new(
            "product_legendrian_graph",
            digest,
            cfg.seed,
            cfg.samples,
            report.max_pullback,
            1e-10,
            report.pass && report.exact_zero,
            start.elapsed().as_secs_f64() * 1e3,
        ));

        // doubling one coordinate breaks conformality; the check must fail
        let start = Instant::now();
        let vars = c1.chart().coords().to_vec();
        let mut components: Vec<Expr> = vars.iter().map(Expr::var).collect();
        components[1] = Expr::mul(Expr::constant(2.0), Expr::var(&vars[1]));
        let squeeze = SmoothMap::new(c1.chart().clone(), c2.chart().clone(), components)?;
        let graph = graph_relation(&neg, &squeeze, &Expr::one())?;
        let report = check_legendrian(&neg, &graph, cfg.samples, cfg.seed)?;
        reports.push(Report::new(
            "product_legendrian_counterexample",
            digest,
            cfg.seed,
            cfg.samples,
            report.max_pullback,
            1e-10,
            !report.pass,
            start.elapsed().as_secs_f64() * 1e3,
        ));
    }
    Ok((Some(product), crate::report::sort(reports)))
}

fn gaussian_section(pcd: &PrincipalContactData) -> EquivariantFunction {
    EquivariantFunction::from_base_profile(pcd, |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new(
            (-r2 / 2.0).exp() * (1.0 + 0.3 * x[0]),
            0.3 * x[x.len() - 1] * (-r2 / 2.0).exp(),
        )
    })
}

pub fn run_prequant(
    pcd: &PrincipalContactData,
    hamiltonian: &str,
    hbar: Option<f64>,
    cfg: &SuiteConfig,
    digest: &str,
) -> reebkit::Result<Vec<Report>> {
    let mut reports = Vec::new();
    let base_vars = pcd.base_chart().coords().to_vec();
    let h = parse(hamiltonian, &base_vars)?;
    let psi = gaussian_section(pcd);
    let samples = cfg.samples.min(30);

    // D_X preserves equivariance
    let start = Instant::now();
    let x_h = hamiltonian_field(&h, &pcd.omega())?;
    let d = covariant_derivative(&x_h, &psi, pcd, samples, cfg.seed)?;
    let residual = d.equivariance_residual(pcd, 50, cfg.seed)?;
    let tol = cfg.tol.unwrap_or(1e-6);
    reports.push(Report::new(
        "prequant_equivariance",
        digest,
        cfg.seed,
        50,
        residual,
        tol,
        residual < tol,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    // operator linearity
    let start = Instant::now();
    let psi2 = EquivariantFunction::from_base_profile(pcd, |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        Complex64::new(x[0], -0.5) * (-r2 / 3.0).exp()
    });
    let a = Complex64::new(1.3, -0.4);
    let b = Complex64::new(-0.2, 0.9);
    let combo = EquivariantFunction::combine(a, &psi, b, &psi2)?;
    let lhs = prequantum_op(&h, &combo, pcd, hbar, samples, cfg.seed)?.output;
    let r1 = prequantum_op(&h, &psi, pcd, hbar, samples, cfg.seed)?.output;
    let r2 = prequantum_op(&h, &psi2, pcd, hbar, samples, cfg.seed)?.output;
    let mut residual: f64 = 0.0;
    for y in pcd.chart().sample_n(20, cfg.seed) {
        let want = a * r1.eval(&y) + b * r2.eval(&y);
        residual = residual.max((lhs.eval(&y) - want).norm());
    }
    let tol = cfg.tol.unwrap_or(1e-10);
    reports.push(Report::new(
        "prequant_linearity",
        digest,
        cfg.seed,
        20,
        residual,
        tol,
        residual < tol,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    if pcd.period().as_finite().is_some() {
        // curvature with the frozen calibrated sign
        let start = Instant::now();
        let ex = VectorField::basis(pcd.base_chart().clone(), 0);
        let ey = VectorField::basis(pcd.base_chart().clone(), 1);
        let omega = pcd.omega();
        let residual =
            curvature_residual(&ex, &ey, &psi, pcd, &omega, CURVATURE_SIGN, 15, cfg.seed)?;
        let tol = cfg.tol.unwrap_or(1e-4);
        reports.push(Report::new(
            "prequant_curvature",
            digest,
            cfg.seed,
            15,
            residual,
            tol,
            residual < tol,
            start.elapsed().as_secs_f64() * 1e3,
        ));

        // Dirac relation on the supplied Hamiltonian and the calibration pair
        let start = Instant::now();
        let q = parse(&base_vars[0], &base_vars)?;
        let p = parse(&base_vars[1], &base_vars)?;
        let mut residual: f64 = 0.0;
        for (f, g) in [(&h, &q), (&h, &p), (&q, &p)] {
            residual =
                residual.max(dirac_residual(f, g, &psi, pcd, DIRAC_SIGN, 12, cfg.seed)?);
        }
        let tol = cfg.tol.unwrap_or(1e-3);
        reports.push(Report::new(
            "prequant_dirac",
            digest,
            cfg.seed,
            12,
            residual,
            tol,
            residual < tol,
            start.elapsed().as_secs_f64() * 1e3,
        ));
    } else {
        // the R-case: the connection acts on fiber-invariant sections as the
        // plain directional derivative (trivial-connection picture)
        let start = Instant::now();
        let mut residual: f64 = 0.0;
        for y in pcd.chart().sample_n(20, cfg.seed) {
            let u = pcd.project_point(&y);
            let v = x_h.resolve(&u)?;
            let h_fd = 1e-5;
            let mut up = y.clone();
            let mut down = y.clone();
            for (ui, vi) in v.iter().enumerate() {
                let slot = if ui >= pcd.fiber_index() { ui + 1 } else { ui };
                up[slot] += h_fd * vi;
                down[slot] -= h_fd * vi;
            }
            let direct = (psi.eval(&up) - psi.eval(&down)) / Complex64::new(2.0 * h_fd, 0.0);
            residual = residual.max((d.eval(&y) - direct).norm());
        }
        let tol = cfg.tol.unwrap_or(1e-6);
        reports.push(Report::new(
            "prequant_trivial_connection",
            digest,
            cfg.seed,
            20,
            residual,
            tol,
            residual < tol,
            start.elapsed().as_secs_f64() * 1e3,
        ));
    }

    Ok(crate::report::sort(reports))
}
