//! Manifold description files: a TOML document with a [chart] section, a
//! [form] table of coefficient expressions, and optional [projection],
//! [section] and [period] data.
//!
//! ```toml
//! [chart]
//! coords = ["z", "p", "q"]
//! domain = [[-inf, inf], [-inf, inf], [-inf, inf]]
//! periodic = [false, false, false]   # optional, default all false
//! margin = 1e-3                      # optional
//!
//! [form]                             # absent coordinate => 0 coefficient
//! z = "1"
//! q = "-p"
//!
//! [projection]                       # optional base reduction data
//! coords = ["p", "q"]
//! domain = [[-inf, inf], [-inf, inf]]
//! periodic = [false, false]
//! components = ["p", "q"]
//!
//! [section]                          # one component per chart coordinate
//! components = ["0", "p", "q"]
//!
//! [period]                           # optional declared minimal period
//! rho = "inf"                        # or a constant expression like "2*pi"
//! ```

use crate::suite::VerifySpec;
use reebkit::calculus::DifferentialForm;
use reebkit::calculus::SmoothMap;
use reebkit::chart::{Chart, DEFAULT_MARGIN};
use reebkit::expr::{parse, Binding, Expr};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub chart: ChartSpec,
    pub form: BTreeMap<String, String>,
    pub projection: Option<ProjectionSpec>,
    pub section: Option<SectionSpec>,
    pub period: Option<PeriodSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub coords: Vec<String>,
    pub domain: Vec<(f64, f64)>,
    pub periodic: Option<Vec<bool>>,
    pub margin: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionSpec {
    pub coords: Vec<String>,
    pub domain: Vec<(f64, f64)>,
    pub periodic: Option<Vec<bool>>,
    pub components: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub components: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodSpec {
    pub rho: String,
}

fn build_chart(name: &str, spec: &ChartSpec) -> reebkit::Result<Arc<Chart>> {
    let periodic = spec
        .periodic
        .clone()
        .unwrap_or_else(|| vec![false; spec.coords.len()]);
    Ok(Arc::new(Chart::new(
        name,
        spec.coords.clone(),
        spec.domain.clone(),
        periodic,
        spec.margin.unwrap_or(DEFAULT_MARGIN),
    )?))
}

fn constant_expr(text: &str) -> reebkit::Result<f64> {
    if text.trim().eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    let e: Expr = parse(text, &[])?;
    e.eval(&Binding::new(&[], &[]))
}

/// Parse a manifold file into a verify spec. The contact condition is NOT
/// checked here: the suite reports it so a degenerate form is a check
/// failure, not an input error.
pub fn load_spec(text: &str) -> reebkit::Result<VerifySpec> {
    let file: ManifoldFile = toml::from_str(text)
        .map_err(|e| reebkit::Error::Invalid(format!("manifold file: {e}")))?;
    let chart = build_chart("manifold", &file.chart)?;
    let vars = chart.coords().to_vec();

    for key in file.form.keys() {
        if chart.index_of(key).is_none() {
            return Err(reebkit::Error::Invalid(format!(
                "[form] names unknown coordinate `{key}`"
            )));
        }
    }
    let coeffs: Vec<Expr> = chart
        .coords()
        .iter()
        .map(|c| match file.form.get(c) {
            Some(text) => parse(text, &vars),
            None => Ok(Expr::zero()),
        })
        .collect::<reebkit::Result<_>>()?;
    let eta = DifferentialForm::one_form(chart.clone(), coeffs)?;

    let (projection, section) = match (&file.projection, &file.section) {
        (Some(proj), Some(sect)) => {
            let base = build_chart(
                "manifold_base",
                &ChartSpec {
                    coords: proj.coords.clone(),
                    domain: proj.domain.clone(),
                    periodic: proj.periodic.clone(),
                    margin: file.chart.margin,
                },
            )?;
            let p_components: Vec<Expr> = proj
                .components
                .iter()
                .map(|t| parse(t, &vars))
                .collect::<reebkit::Result<_>>()?;
            let base_vars = base.coords().to_vec();
            let s_components: Vec<Expr> = sect
                .components
                .iter()
                .map(|t| parse(t, &base_vars))
                .collect::<reebkit::Result<_>>()?;
            (
                Some(SmoothMap::new(chart.clone(), base.clone(), p_components)?),
                Some(SmoothMap::new(base, chart.clone(), s_components)?),
            )
        }
        (None, None) => (None, None),
        _ => {
            return Err(reebkit::Error::Invalid(
                "[projection] and [section] must be given together".into(),
            ))
        }
    };

    let declared_period = file
        .period
        .as_ref()
        .map(|p| constant_expr(&p.rho))
        .transpose()?;
    if let Some(rho) = declared_period {
        if !(rho > 0.0) {
            return Err(reebkit::Error::Invalid(
                "[period] rho must be positive".into(),
            ));
        }
    }
    Ok(VerifySpec {
        eta,
        projection,
        section,
        declared_omega: None,
        integrality: None,
        declared_period,
    })
}
