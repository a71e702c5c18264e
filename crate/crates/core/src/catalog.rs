//! Built-in examples: Darboux charts, the Hopf sphere, exact
//! contactifications, the punctured (incomplete) variant, and torus period
//! fixtures. Every piece of declared closed-form data is re-verified by the
//! corresponding module operation at load time.

use crate::calculus::{
    exterior_derivative, max_coeff_residual, DifferentialForm, FormHandle, ParametrizedSurface,
    SmoothMap, VectorField,
};
use crate::chart::Chart;
use crate::contact::{contact_to_symplectic, ContactChart};
use crate::dynamics::{flow, minimal_period, PeriodStatus, DEFAULT_RETURN_TOL};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::products::{principal_product_period, torus_first_return};
use crate::rational::{gcd, Period, Rational};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogId {
    Darboux(usize),
    HopfS3,
    Exact,
    PuncturedHopf,
    TorusFixture(i64, i64),
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::Darboux(n) => write!(f, "darboux({n})"),
            CatalogId::HopfS3 => write!(f, "hopf_s3"),
            CatalogId::Exact => write!(f, "exact"),
            CatalogId::PuncturedHopf => write!(f, "punctured_hopf"),
            CatalogId::TorusFixture(k, l) => write!(f, "torus_fixture({k},{l})"),
        }
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CatalogId> {
        let s = s.trim();
        let unknown = || Error::UnknownExample(s.to_string());
        if s == "hopf_s3" {
            return Ok(CatalogId::HopfS3);
        }
        if s == "exact" {
            return Ok(CatalogId::Exact);
        }
        if s == "punctured_hopf" {
            return Ok(CatalogId::PuncturedHopf);
        }
        if let Some(rest) = s.strip_prefix("darboux(").and_then(|r| r.strip_suffix(')')) {
            let n: usize = rest.trim().parse().map_err(|_| unknown())?;
            return Ok(CatalogId::Darboux(n));
        }
        if let Some(rest) = s
            .strip_prefix("torus_fixture(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let (k, l) = rest.split_once(',').ok_or_else(unknown)?;
            let k: i64 = k.trim().parse().map_err(|_| unknown())?;
            let l: i64 = l.trim().parse().map_err(|_| unknown())?;
            return Ok(CatalogId::TorusFixture(k, l));
        }
        Err(unknown())
    }
}

/// Closed-form period knowledge, in the chart's time units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KnownPeriod {
    Finite(f64),
    Infinite,
}

/// Known base reduction data (p, sigma, omega).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub base_chart: Arc<Chart>,
    pub projection: SmoothMap,
    pub section: SmoothMap,
    pub omega: DifferentialForm,
}

/// A contact example with whatever closed-form data it carries.
#[derive(Debug, Clone)]
pub struct ContactExample {
    pub contact: ContactChart,
    /// Constant Reeb components, when known in closed form.
    pub known_reeb: Option<Vec<f64>>,
    pub period: KnownPeriod,
    pub reduction: Option<Reduction>,
    /// Closed surface in the base plus the period for the integrality check.
    pub integrality: Option<(ParametrizedSurface, f64)>,
    /// A point whose Reeb orbit leaves the (punctured) domain.
    pub exit_witness: Option<Vec<f64>>,
}

/// Period fixture on the unit torus: rates alpha = 1/rho_1, beta = 1/rho_2.
#[derive(Debug, Clone)]
pub struct TorusFixture {
    pub k: i64,
    pub l: i64,
    pub rho1: Rational,
    pub rho2: Rational,
    pub field: VectorField,
    /// First return of the field to a point: k l sheets of the reduced
    /// period.
    pub expected_point_return: f64,
    /// rho = rho_2 / k = rho_1 / l.
    pub reduced_period: Rational,
}

#[derive(Debug, Clone)]
pub enum ExampleKind {
    Contact(Box<ContactExample>),
    Torus(TorusFixture),
}

#[derive(Debug, Clone)]
pub struct ExampleDescriptor {
    pub id: CatalogId,
    pub kind: ExampleKind,
}

impl ExampleDescriptor {
    pub fn contact_example(&self) -> Option<&ContactExample> {
        match &self.kind {
            ExampleKind::Contact(c) => Some(c),
            ExampleKind::Torus(_) => None,
        }
    }

    pub fn torus_fixture(&self) -> Option<&TorusFixture> {
        match &self.kind {
            ExampleKind::Torus(t) => Some(t),
            ExampleKind::Contact(_) => None,
        }
    }
}

pub const MAX_DARBOUX_N: usize = 4;

/// Load a catalog example and re-verify its declared data: the contact
/// condition, closed-form Reeb components, the base reduction, a quick
/// period probe, and (for the punctured variant) the domain-exit witness.
pub fn load(id: CatalogId, samples: usize, seed: u64) -> Result<ExampleDescriptor> {
    let kind = match id {
        CatalogId::Darboux(n) => ExampleKind::Contact(Box::new(load_darboux(n, samples, seed)?)),
        CatalogId::HopfS3 => ExampleKind::Contact(Box::new(load_hopf(false, samples, seed)?)),
        CatalogId::PuncturedHopf => {
            ExampleKind::Contact(Box::new(load_hopf(true, samples, seed)?))
        }
        CatalogId::Exact => ExampleKind::Contact(Box::new(load_exact(samples, seed)?)),
        CatalogId::TorusFixture(k, l) => ExampleKind::Torus(load_torus(k, l)?),
    };
    let descriptor = ExampleDescriptor { id, kind };
    verify_descriptor(&descriptor, samples, seed)?;
    Ok(descriptor)
}

fn verify_descriptor(descriptor: &ExampleDescriptor, samples: usize, seed: u64) -> Result<()> {
    match &descriptor.kind {
        ExampleKind::Contact(example) => {
            let contact = &example.contact;
            if let Some(components) = &example.known_reeb {
                for p in contact.chart().sample_n(samples.min(50), seed) {
                    let r = contact.reeb().resolve(&p)?;
                    for (a, b) in r.iter().zip(components) {
                        if (a - b).abs() > 1e-10 {
                            return Err(Error::Invalid(format!(
                                "{}: Reeb components {r:?} differ from the declared {components:?}",
                                descriptor.id
                            )));
                        }
                    }
                }
            }
            if let Some(reduction) = &example.reduction {
                let (omega, _) = contact_to_symplectic(
                    contact,
                    &reduction.projection,
                    &reduction.section,
                    samples,
                    seed,
                )?;
                let pts = reduction.base_chart.sample_n(samples.min(50), seed);
                let residual = max_coeff_residual(
                    &FormHandle::Symbolic(omega),
                    &FormHandle::Symbolic(reduction.omega.clone()),
                    &pts,
                )?;
                if residual > 1e-10 {
                    return Err(Error::Invalid(format!(
                        "{}: declared omega off by {residual:.3e}",
                        descriptor.id
                    )));
                }
            }
            // quick period probe on one orbit
            let x0 = contact.chart().sample_n(1, seed.wrapping_add(1)).remove(0);
            match example.period {
                KnownPeriod::Finite(rho) => {
                    let result = minimal_period(
                        contact.reeb(),
                        &x0,
                        2.5 * rho,
                        DEFAULT_RETURN_TOL,
                        1e-3,
                    )?;
                    match result.status {
                        PeriodStatus::Periodic { period, .. } => {
                            if (period - rho).abs() > 1e-6 {
                                return Err(Error::Invalid(format!(
                                    "{}: probe period {period} vs declared {rho}",
                                    descriptor.id
                                )));
                            }
                        }
                        PeriodStatus::NoReturn => {
                            return Err(Error::Invalid(format!(
                                "{}: probe orbit did not return",
                                descriptor.id
                            )))
                        }
                    }
                }
                KnownPeriod::Infinite => {
                    let result =
                        minimal_period(contact.reeb(), &x0, 10.0, DEFAULT_RETURN_TOL, 1e-3)?;
                    if !matches!(result.status, PeriodStatus::NoReturn) {
                        return Err(Error::Invalid(format!(
                            "{}: translation-type orbit unexpectedly returned",
                            descriptor.id
                        )));
                    }
                }
            }
            if let Some(witness) = &example.exit_witness {
                match flow(contact.reeb(), witness, 2.0 * TAU, 1e-3, None) {
                    Err(Error::DomainExit { .. }) => {}
                    Ok(_) => {
                        return Err(Error::Invalid(format!(
                            "{}: witness orbit failed to exit the punctured domain",
                            descriptor.id
                        )))
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(())
        }
        ExampleKind::Torus(fixture) => {
            let result = minimal_period(
                &fixture.field,
                &[0.15, 0.7],
                4.0 * fixture.expected_point_return,
                DEFAULT_RETURN_TOL,
                1e-3,
            )?;
            let detected = result
                .period()
                .ok_or_else(|| Error::Invalid("torus fixture orbit did not close".into()))?;
            if (detected - fixture.expected_point_return).abs() > 1e-8 {
                return Err(Error::Invalid(format!(
                    "torus fixture point return {detected} vs expected {}",
                    fixture.expected_point_return
                )));
            }
            let brute = torus_first_return(
                fixture.rho1.recip()?,
                fixture.rho2.recip()?,
                Rational::new(1, 2)?,
                Rational::new(1, 2)?,
                64,
            )?;
            if brute != fixture.reduced_period {
                return Err(Error::Invalid(format!(
                    "torus oracle {brute} vs reduced period {}",
                    fixture.reduced_period
                )));
            }
            let closed = principal_product_period(
                Period::finite(fixture.rho1)?,
                Period::finite(fixture.rho2)?,
            )?;
            if closed.rho != Period::Finite(fixture.reduced_period) {
                return Err(Error::Invalid(
                    "closed-form product period disagrees with the fixture".into(),
                ));
            }
            Ok(())
        }
    }
}

fn load_darboux(n: usize, samples: usize, seed: u64) -> Result<ContactExample> {
    if n == 0 || n > MAX_DARBOUX_N {
        return Err(Error::UnknownExample(format!(
            "darboux({n}): n must be between 1 and {MAX_DARBOUX_N}"
        )));
    }
    let mut coords = vec!["z".to_string()];
    for i in 1..=n {
        coords.push(format!("p{i}"));
    }
    for i in 1..=n {
        coords.push(format!("q{i}"));
    }
    let refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let chart = Arc::new(Chart::euclidean(format!("darboux{n}"), &refs));
    let mut coeffs = vec![Expr::one()];
    coeffs.extend(vec![Expr::zero(); n]);
    for i in 1..=n {
        coeffs.push(Expr::neg(Expr::var(format!("p{i}"))));
    }
    let eta = DifferentialForm::one_form(chart.clone(), coeffs)?;
    let contact = ContactChart::new(eta, samples, seed)?;

    // base reduction: drop z, omega = sum dq_i ^ dp_i
    let base_coords: Vec<String> = coords[1..].to_vec();
    let base_refs: Vec<&str> = base_coords.iter().map(String::as_str).collect();
    let base_chart = Arc::new(Chart::euclidean(format!("darboux{n}_base"), &base_refs));
    let projection = SmoothMap::new(
        chart.clone(),
        base_chart.clone(),
        base_coords.iter().map(Expr::var).collect(),
    )?;
    let mut section_components = vec![Expr::zero()];
    section_components.extend(base_coords.iter().map(Expr::var));
    let section = SmoothMap::new(base_chart.clone(), chart, section_components)?;
    let theta = DifferentialForm::one_form(
        base_chart.clone(),
        (0..2 * n)
            .map(|i| {
                if i < n {
                    Expr::zero()
                } else {
                    Expr::neg(Expr::var(format!("p{}", i - n + 1)))
                }
            })
            .collect(),
    )?;
    let omega = exterior_derivative(&theta)?;

    Ok(ContactExample {
        contact,
        known_reeb: Some(
            std::iter::once(1.0)
                .chain(std::iter::repeat_n(0.0, 2 * n))
                .collect(),
        ),
        period: KnownPeriod::Infinite,
        reduction: Some(Reduction {
            base_chart,
            projection,
            section,
            omega,
        }),
        integrality: None,
        exit_witness: None,
    })
}

fn hopf_chart(punctured: bool) -> Result<Arc<Chart>> {
    let mut chart = Chart::new(
        if punctured { "punctured_hopf" } else { "hopf_s3" },
        vec!["xi1".into(), "xi2".into(), "phi".into()],
        vec![(0.0, TAU), (0.0, TAU), (0.0, FRAC_PI_2)],
        vec![true, true, false],
        1e-3,
    )?;
    if punctured {
        chart = chart.with_exclusion(vec![PI, PI, FRAC_PI_2 / 2.0], 0.15);
    }
    Ok(Arc::new(chart))
}

fn load_hopf(punctured: bool, samples: usize, seed: u64) -> Result<ContactExample> {
    let chart = hopf_chart(punctured)?;
    let vars = chart.coords().to_vec();
    let eta = DifferentialForm::one_form(
        chart.clone(),
        vec![
            parse("cos(phi)^2", &vars)?,
            parse("sin(phi)^2", &vars)?,
            Expr::zero(),
        ],
    )?;
    let contact = ContactChart::new(eta, samples, seed)?;

    let base_chart = Arc::new(Chart::new(
        "hopf_base",
        vec!["phi".into(), "psi".into()],
        vec![(0.0, FRAC_PI_2), (0.0, TAU)],
        vec![false, true],
        1e-3,
    )?);
    let projection = SmoothMap::new(
        chart.clone(),
        base_chart.clone(),
        vec![parse("phi", &vars)?, parse("xi2 - xi1", &vars)?],
    )?;
    let base_vars = base_chart.coords().to_vec();
    let section = SmoothMap::new(
        base_chart.clone(),
        chart,
        vec![
            Expr::zero(),
            parse("psi", &base_vars)?,
            parse("phi", &base_vars)?,
        ],
    )?;
    let mut omega = DifferentialForm::zero(base_chart.clone(), 2)?;
    omega.add_term(vec![0, 1], parse("sin(2*phi)", &base_vars)?);

    // the Hopf base sphere: phi edges collapse to the poles, psi wraps
    let params = Arc::new(Chart::new(
        "hopf_base_surface",
        vec!["u".into(), "v".into()],
        vec![(0.0, FRAC_PI_2), (0.0, TAU)],
        vec![false, true],
        0.0,
    )?);
    let pv = params.coords().to_vec();
    let surface_map = SmoothMap::new(
        params,
        base_chart.clone(),
        vec![parse("u", &pv)?, parse("v", &pv)?],
    )?;
    let surface = ParametrizedSurface::new(surface_map, [false, true], Some(true))?;

    Ok(ContactExample {
        contact,
        known_reeb: Some(vec![1.0, 1.0, 0.0]),
        period: KnownPeriod::Finite(TAU),
        reduction: Some(Reduction {
            base_chart,
            projection,
            section,
            omega,
        }),
        integrality: Some((surface, TAU)),
        exit_witness: punctured.then(|| vec![PI - 1.0, PI - 1.0, FRAC_PI_2 / 2.0]),
    })
}

fn load_exact(samples: usize, seed: u64) -> Result<ContactExample> {
    // eta = theta + dt with theta = (q dp - p dq)/2
    let chart = Arc::new(Chart::euclidean("exact", &["q", "p", "t"]));
    let vars = chart.coords().to_vec();
    let eta = DifferentialForm::one_form(
        chart.clone(),
        vec![parse("-p/2", &vars)?, parse("q/2", &vars)?, Expr::one()],
    )?;
    let contact = ContactChart::new(eta, samples, seed)?;

    let base_chart = Arc::new(Chart::euclidean("exact_base", &["q", "p"]));
    let base_vars = base_chart.coords().to_vec();
    let projection = SmoothMap::new(
        chart.clone(),
        base_chart.clone(),
        vec![parse("q", &vars)?, parse("p", &vars)?],
    )?;
    let section = SmoothMap::new(
        base_chart.clone(),
        chart,
        vec![parse("q", &base_vars)?, parse("p", &base_vars)?, Expr::zero()],
    )?;
    let theta = DifferentialForm::one_form(
        base_chart.clone(),
        vec![parse("-p/2", &base_vars)?, parse("q/2", &base_vars)?],
    )?;
    let omega = exterior_derivative(&theta)?;

    Ok(ContactExample {
        contact,
        known_reeb: Some(vec![0.0, 0.0, 1.0]),
        period: KnownPeriod::Infinite,
        reduction: Some(Reduction {
            base_chart,
            projection,
            section,
            omega,
        }),
        integrality: None,
        exit_witness: None,
    })
}

fn load_torus(k: i64, l: i64) -> Result<TorusFixture> {
    if k < 1 || l < 1 {
        return Err(Error::UnknownExample(format!(
            "torus_fixture({k},{l}): k, l must be positive"
        )));
    }
    if gcd(k, l) != 1 {
        return Err(Error::UnknownExample(format!(
            "torus_fixture({k},{l}): k, l must be coprime"
        )));
    }
    // rho_1 = l, rho_2 = k gives rho_2 / rho_1 = k / l and a reduced period
    // of 1; the unreduced field closes after k l sheets
    let rho1 = Rational::integer(l);
    let rho2 = Rational::integer(k);
    let field =
        crate::products::torus_fixture_field(rho1.recip()?.to_f64(), rho2.recip()?.to_f64())?;
    Ok(TorusFixture {
        k,
        l,
        rho1,
        rho2,
        field,
        expected_point_return: (k * l) as f64,
        reduced_period: Rational::one(),
    })
}
