//! Contact products on trivializing charts, Legendrian graph relations, and
//! the product of principal contactifications with its Bezout period
//! arithmetic (closed form plus a brute-force lattice oracle).

use crate::calculus::{
    exterior_derivative, max_coeff_residual, DifferentialForm, FormHandle, SmoothMap, VectorField,
};
use crate::chart::Chart;
use crate::contact::{kernel_of_one_form, ContactChart};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::rational::{Period, Rational};
use nalgebra::DMatrix;
use std::sync::Arc;

/// Which component of the punctured fiber line the product chart realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// t > 0
    Pos,
    /// t < 0
    Neg,
}

/// The contact product of two contact charts on the trivializing chart
/// (x1, x2, t): eta = t eta_1 + eta_2, with the alternate parametrization
/// eta' = eta_1 + (1/t) eta_2 obtained from t' = 1/t.
#[derive(Debug, Clone)]
pub struct ProductContactChart {
    factor1: ContactChart,
    factor2: ContactChart,
    contact: ContactChart,
    eta_alt: DifferentialForm,
    t_name: String,
    t_index: usize,
    component: Component,
    dim1: usize,
    dim2: usize,
}

fn uniquify(name: &str, taken: &[String]) -> String {
    let mut fresh = name.to_string();
    while taken.iter().any(|t| t == &fresh) {
        fresh.push('_');
    }
    fresh
}

/// Rename factor coordinates that collide across the two factors by
/// appending "1"/"2" (then underscores until fresh).
fn product_coordinates(c1: &Chart, c2: &Chart) -> (Vec<String>, Vec<String>) {
    let mut names1: Vec<String> = c1.coords().to_vec();
    let mut names2: Vec<String> = c2.coords().to_vec();
    let collisions: Vec<String> = names1
        .iter()
        .filter(|n| names2.contains(n))
        .cloned()
        .collect();
    for name in &collisions {
        let union: Vec<String> = names1.iter().chain(names2.iter()).cloned().collect();
        let new1 = uniquify(&format!("{name}1"), &union);
        let i = names1.iter().position(|n| n == name).unwrap();
        names1[i] = new1;
        let union: Vec<String> = names1.iter().chain(names2.iter()).cloned().collect();
        let new2 = uniquify(&format!("{name}2"), &union);
        let j = names2.iter().position(|n| n == name).unwrap();
        names2[j] = new2;
    }
    (names1, names2)
}

fn renamed_form(
    form: &DifferentialForm,
    chart: Arc<Chart>,
    offset: usize,
    renames: &[(String, Expr)],
) -> Result<DifferentialForm> {
    let mut out = DifferentialForm::zero(chart, form.degree())?;
    for (idx, c) in form.terms() {
        out.add_term(
            idx.iter().map(|&i| i + offset).collect(),
            c.subst(renames),
        );
    }
    Ok(out)
}

pub const PRODUCT_REEB_TOLERANCE: f64 = 1e-8;
pub const KERNEL_TOLERANCE: f64 = 1e-10;

impl ProductContactChart {
    pub fn chart(&self) -> &Arc<Chart> {
        self.contact.chart()
    }

    pub fn contact(&self) -> &ContactChart {
        &self.contact
    }

    pub fn eta(&self) -> &DifferentialForm {
        self.contact.eta()
    }

    /// The t'-parametrization form eta' = eta_1 + (1/t) eta_2, written on
    /// the same chart.
    pub fn eta_alt(&self) -> &DifferentialForm {
        &self.eta_alt
    }

    pub fn factors(&self) -> (&ContactChart, &ContactChart) {
        (&self.factor1, &self.factor2)
    }

    pub fn t_name(&self) -> &str {
        &self.t_name
    }

    pub fn component(&self) -> Component {
        self.component
    }

    fn split<'a>(&self, point: &'a [f64]) -> (&'a [f64], &'a [f64], f64) {
        (
            &point[..self.dim1],
            &point[self.dim1..self.dim1 + self.dim2],
            point[self.t_index],
        )
    }

    /// Embed factor vectors and the fiber direction into product
    /// coordinates.
    fn embed1(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.chart().dim()];
        out[..self.dim1].copy_from_slice(v);
        out
    }

    fn embed2(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.chart().dim()];
        out[self.dim1..self.dim1 + self.dim2].copy_from_slice(v);
        out
    }

    /// Max residual of reeb(eta) = R_2 and reeb(eta') = R_1 (embedded) over
    /// samples.
    pub fn reeb_identification_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        let alt = ContactChart::new(self.eta_alt.clone(), samples, seed)?;
        let mut worst: f64 = 0.0;
        for p in self.chart().sample_n(samples, seed) {
            let (x1, x2, _) = self.split(&p);
            let r = self.contact.reeb().resolve(&p)?;
            let r2 = self.embed2(&self.factor2.reeb().resolve(x2)?);
            for (a, b) in r.iter().zip(&r2) {
                worst = worst.max((a - b).abs());
            }
            let r_alt = alt.reeb().resolve(&p)?;
            let r1 = self.embed1(&self.factor1.reeb().resolve(x1)?);
            for (a, b) in r_alt.iter().zip(&r1) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(worst)
    }

    /// Max over samples of |eta'(v)| for v in the pointwise kernel basis of
    /// eta: the two parametrizations must carve out the same distribution.
    pub fn kernel_agreement_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in self.chart().sample_n(samples, seed) {
            for v in kernel_of_one_form(self.contact.eta(), &p)? {
                let refs: Vec<&[f64]> = vec![&v];
                worst = worst.max(self.eta_alt.apply(&p, &refs)?.abs());
            }
        }
        Ok(worst)
    }
}

/// Build the contact product of two contact charts on the chosen fiber
/// component. Factor coordinates are renamed (suffix 1/2) when they collide.
/// The construction is verified: the product form passes the contact
/// condition, reeb(eta) = R_2 and reeb(eta') = R_1 within
/// [`PRODUCT_REEB_TOLERANCE`].
pub fn contact_product(
    c1: &ContactChart,
    c2: &ContactChart,
    component: Component,
    samples: usize,
    seed: u64,
) -> Result<ProductContactChart> {
    let (names1, names2) = product_coordinates(c1.chart(), c2.chart());
    let taken: Vec<String> = names1.iter().chain(names2.iter()).cloned().collect();
    let t_name = uniquify("t", &taken);

    let mut coords = names1.clone();
    coords.extend(names2.clone());
    coords.push(t_name.clone());
    let mut intervals = c1.chart().intervals().to_vec();
    intervals.extend_from_slice(c2.chart().intervals());
    intervals.push(match component {
        Component::Pos => (0.0, f64::INFINITY),
        Component::Neg => (f64::NEG_INFINITY, 0.0),
    });
    let mut periodic = c1.chart().periodic().to_vec();
    periodic.extend_from_slice(c2.chart().periodic());
    periodic.push(false);
    let margin = c1.chart().margin().max(c2.chart().margin());
    let chart = Arc::new(Chart::new(
        format!("{}_x_{}", c1.chart().name(), c2.chart().name()),
        coords,
        intervals,
        periodic,
        margin,
    )?);

    let renames1: Vec<(String, Expr)> = c1
        .chart()
        .coords()
        .iter()
        .zip(&names1)
        .filter(|(old, new)| old != new)
        .map(|(old, new)| (old.clone(), Expr::var(new)))
        .collect();
    let renames2: Vec<(String, Expr)> = c2
        .chart()
        .coords()
        .iter()
        .zip(&names2)
        .filter(|(old, new)| old != new)
        .map(|(old, new)| (old.clone(), Expr::var(new)))
        .collect();

    let dim1 = c1.chart().dim();
    let dim2 = c2.chart().dim();
    let eta1 = renamed_form(c1.eta(), chart.clone(), 0, &renames1)?;
    let eta2 = renamed_form(c2.eta(), chart.clone(), dim1, &renames2)?;
    let t = Expr::var(&t_name);
    let eta = eta1.scale(&t).plus(&eta2)?;
    let eta_alt = eta1.plus(&eta2.scale(&Expr::div(Expr::one(), t)))?;

    let contact = ContactChart::new(eta, samples, seed)?;
    let product = ProductContactChart {
        factor1: c1.clone(),
        factor2: c2.clone(),
        contact,
        eta_alt,
        t_index: chart.dim() - 1,
        t_name,
        component,
        dim1,
        dim2,
    };
    let res = product.reeb_identification_residual(samples, seed)?;
    if res > PRODUCT_REEB_TOLERANCE {
        return Err(Error::Invalid(format!(
            "product Reeb fields do not match the factors: residual {res:.3e}"
        )));
    }
    Ok(product)
}

/// The Whitney-sum witness at a point: pointwise bases of ker eta_1 and
/// ker eta_2, the mixed direction R_1 - t R_2, and d/dt. Each vector is
/// verified to annihilate eta and the collection must have rank dim - 1.
pub fn distribution_witness(
    product: &ProductContactChart,
    point: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let chart = product.chart();
    if !chart.contains(point) {
        return Err(Error::DomainExit { time: 0.0 });
    }
    let (x1, x2, t) = product.split(point);
    let mut vectors = Vec::new();
    for v in kernel_of_one_form(product.factor1.eta(), x1)? {
        vectors.push(product.embed1(&v));
    }
    for v in kernel_of_one_form(product.factor2.eta(), x2)? {
        vectors.push(product.embed2(&v));
    }
    let r1 = product.factor1.reeb().resolve(x1)?;
    let r2 = product.factor2.reeb().resolve(x2)?;
    let mut mixed = product.embed1(&r1);
    for (slot, v) in mixed[product.dim1..product.dim1 + product.dim2]
        .iter_mut()
        .zip(&r2)
    {
        *slot = -t * v;
    }
    vectors.push(mixed);
    let mut dt = vec![0.0; chart.dim()];
    dt[product.t_index] = 1.0;
    vectors.push(dt);

    for v in &vectors {
        let refs: Vec<&[f64]> = vec![v];
        let val = product.eta().apply(point, &refs)?;
        if val.abs() > KERNEL_TOLERANCE {
            return Err(Error::Invalid(format!(
                "witness vector fails to annihilate eta: {val:.3e}"
            )));
        }
    }
    let dim = chart.dim();
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = v[i];
        }
    }
    let svd = m.svd(false, false);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-8)
        .count();
    if rank != dim - 1 {
        return Err(Error::Invalid(format!(
            "witness spans rank {rank}, expected {}",
            dim - 1
        )));
    }
    Ok(vectors)
}

/// A candidate Legendrian: a map from an n-dimensional parameter chart into
/// the product chart, n = (dim - 1) / 2.
#[derive(Debug, Clone)]
pub struct LegendrianCandidate {
    map: SmoothMap,
}

impl LegendrianCandidate {
    pub fn new(map: SmoothMap) -> LegendrianCandidate {
        LegendrianCandidate { map }
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }
}

#[derive(Debug, Clone)]
pub struct LegendrianReport {
    /// Smallest Jacobian singular value seen (immersion certificate).
    pub min_singular_value: f64,
    /// Max |coefficient of L* eta| over samples.
    pub max_pullback: f64,
    /// The pullback vanishes exactly: the zero form after simplification,
    /// or bitwise 0.0 at every sample (cancellations like t eta_1 + eta_2
    /// on a graph are exact in IEEE arithmetic).
    pub exact_zero: bool,
    pub pass: bool,
}

/// Check that the candidate is an immersed Legendrian: correct dimension,
/// full-rank Jacobian at samples, and L* eta = 0.
pub fn check_legendrian(
    product: &ProductContactChart,
    candidate: &LegendrianCandidate,
    samples: usize,
    seed: u64,
) -> Result<LegendrianReport> {
    let map = &candidate.map;
    if !map.target().compatible(product.chart()) {
        return Err(map.target().mismatch(product.chart()));
    }
    let n = (product.chart().dim() - 1) / 2;
    if map.source().dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: map.source().dim(),
        });
    }
    let points = map.source().sample_n(samples, seed);
    let mut min_sv = f64::INFINITY;
    for u in &points {
        let image = map.apply(u)?;
        if !product.chart().contains(&image) {
            return Err(Error::Invalid(format!(
                "candidate image {image:?} leaves the product chart domain"
            )));
        }
        let jac = map.jacobian_at(u)?;
        let sv = jac.svd(false, false).singular_values;
        let smallest = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if smallest < 1e-8 {
            return Err(Error::NotImmersed {
                point: u.clone(),
                sigma_min: smallest,
            });
        }
        min_sv = min_sv.min(smallest);
    }
    let pulled = map.pullback(product.eta())?;
    let mut max_pullback: f64 = 0.0;
    for u in &points {
        for v in pulled.eval_coeffs(u)?.values() {
            max_pullback = max_pullback.max(v.abs());
        }
    }
    Ok(LegendrianReport {
        min_singular_value: min_sv,
        max_pullback,
        exact_zero: pulled.is_structurally_zero() || max_pullback == 0.0,
        pass: max_pullback < KERNEL_TOLERANCE,
    })
}

/// The graph relation of a chart map phi with conformal factor f: the image
/// of x -> (x, phi(x), -f(x)) in the product chart (the fiber value -f lives
/// in the t < 0 component when f > 0).
pub fn graph_relation(
    product: &ProductContactChart,
    phi: &SmoothMap,
    f: &Expr,
) -> Result<LegendrianCandidate> {
    let (c1, c2) = product.factors();
    if !phi.source().compatible(c1.chart()) {
        return Err(phi.source().mismatch(c1.chart()));
    }
    if !phi.target().compatible(c2.chart()) {
        return Err(phi.target().mismatch(c2.chart()));
    }
    // parameter chart: a copy of the first factor's chart under the
    // product's (possibly renamed) coordinate names
    let chart = product.chart();
    let dim1 = c1.chart().dim();
    let params = Arc::new(Chart::new(
        format!("{}_graph", chart.name()),
        chart.coords()[..dim1].to_vec(),
        c1.chart().intervals().to_vec(),
        c1.chart().periodic().to_vec(),
        c1.chart().margin(),
    )?);
    let renames: Vec<(String, Expr)> = c1
        .chart()
        .coords()
        .iter()
        .zip(params.coords())
        .filter(|(old, new)| *old != *new)
        .map(|(old, new)| (old.clone(), Expr::var(new)))
        .collect();
    let mut components: Vec<Expr> = params.coords().iter().map(Expr::var).collect();
    for comp in phi.components() {
        components.push(comp.subst(&renames));
    }
    components.push(Expr::neg(f.subst(&renames)));
    Ok(LegendrianCandidate::new(SmoothMap::new(
        params,
        chart.clone(),
        components,
    )?))
}

/// Two principal periods with their reduced commensurability pair
/// rho_2 / rho_1 = k / l, gcd(k, l) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrincipalPeriodPair {
    pub rho1: Period,
    pub rho2: Period,
    /// None when either period is infinite.
    pub ratio: Option<(i64, i64)>,
}

impl PrincipalPeriodPair {
    pub fn new(rho1: Period, rho2: Period) -> Result<PrincipalPeriodPair> {
        for rho in [&rho1, &rho2] {
            if let Period::Finite(r) = rho {
                if !r.is_positive() {
                    return Err(Error::InvalidRational("periods must be positive".into()));
                }
            }
        }
        let ratio = match (rho1, rho2) {
            (Period::Finite(r1), Period::Finite(r2)) => {
                let q = r2.div(&r1)?;
                Some((q.numerator(), q.denominator()))
            }
            _ => None,
        };
        Ok(PrincipalPeriodPair { rho1, rho2, ratio })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProductPeriod {
    pub pair: PrincipalPeriodPair,
    pub rho: Period,
}

/// Minimal period of the product of principal contactifications:
/// rho = rho_2 / k = rho_1 / l for commensurate finite periods with
/// rho_2 / rho_1 = k / l in lowest terms; an infinite factor leaves the
/// other period untouched.
pub fn principal_product_period(rho1: Period, rho2: Period) -> Result<ProductPeriod> {
    let pair = PrincipalPeriodPair::new(rho1, rho2)?;
    let rho = match (rho1, rho2) {
        (Period::Infinite, other) => other,
        (other, Period::Infinite) => other,
        (Period::Finite(r1), Period::Finite(r2)) => {
            let (k, l) = pair.ratio.expect("both finite");
            let via_k = r2.div(&Rational::integer(k))?;
            let via_l = r1.div(&Rational::integer(l))?;
            if via_k != via_l {
                return Err(Error::NotCommensurate(format!(
                    "rho_2/k = {via_k} but rho_1/l = {via_l}"
                )));
            }
            Period::finite(via_k)?
        }
    };
    Ok(ProductPeriod { pair, rho })
}

/// Brute-force lattice oracle for the period lemma. The curve
/// gamma(t) = (a alpha t, b beta t) first meets the set
/// A = { (s alpha, -s beta) + Z^2 } at the smallest positive
/// t = (m beta + n alpha) / (alpha beta (a + b)) over integer shifts
/// (m, n); this enumerates |m|, |n| <= bound and returns the minimum.
/// Requires a + b = 1 (only then does the curve project onto the Reeb
/// field of the reduced form).
pub fn torus_first_return(
    alpha: Rational,
    beta: Rational,
    a: Rational,
    b: Rational,
    bound: i64,
) -> Result<Rational> {
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::InvalidRational("rates must be positive".into()));
    }
    if a.add(&b)? != Rational::one() {
        return Err(Error::Invalid(
            "a + b must equal 1 for the curve to project onto the Reeb field".into(),
        ));
    }
    let denom = alpha.mul(&beta)?.mul(&a.add(&b)?)?;
    let mut best: Option<Rational> = None;
    for m in -bound..=bound {
        for n in -bound..=bound {
            let numer = Rational::integer(m)
                .mul(&beta)?
                .add(&Rational::integer(n).mul(&alpha)?)?;
            let t = numer.div(&denom)?;
            if t.is_positive() && best.map_or(true, |b| t < b) {
                best = Some(t);
            }
        }
    }
    best.ok_or_else(|| Error::Invalid("no lattice intersection found".into()))
}

/// Normal-form data for one principal contactification: base coordinates
/// and the connection coefficients h_a of eta = dt + h_a(x) dx^a.
#[derive(Debug, Clone)]
pub struct NormalFormData {
    pub coords: Vec<String>,
    pub intervals: Vec<(f64, f64)>,
    pub coefficients: Vec<Expr>,
}

impl NormalFormData {
    pub fn euclidean(coords: &[&str], coefficients: Vec<Expr>) -> Result<NormalFormData> {
        if coords.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: coords.len(),
                found: coefficients.len(),
            });
        }
        Ok(NormalFormData {
            coords: coords.iter().map(|s| s.to_string()).collect(),
            intervals: vec![(f64::NEG_INFINITY, f64::INFINITY); coords.len()],
            coefficients,
        })
    }
}

/// The product of two principal contactifications in reduced coordinates.
#[derive(Debug, Clone)]
pub struct PrincipalProductForm {
    pub contact: ContactChart,
    pub base_chart: Arc<Chart>,
    /// omega_1 (+) omega_2 on the base chart.
    pub omega_sum: DifferentialForm,
    /// projection (x, y, t) -> (x, y)
    pub projection: SmoothMap,
    pub t_name: String,
}

/// Assemble eta = dt + h_a(x) dx^a + g_i(y) dy^i on the chart (x, y, t),
/// check the contact condition, verify reeb = d/dt and
/// d eta = p*(omega_1 (+) omega_2).
pub fn principal_product_form(
    data1: &NormalFormData,
    data2: &NormalFormData,
    samples: usize,
    seed: u64,
) -> Result<PrincipalProductForm> {
    for c in &data1.coords {
        if data2.coords.contains(c) {
            return Err(Error::InvalidChart(format!(
                "normal-form factors share the coordinate `{c}`"
            )));
        }
    }
    let mut base_coords = data1.coords.clone();
    base_coords.extend(data2.coords.clone());
    let mut base_intervals = data1.intervals.clone();
    base_intervals.extend(data2.intervals.clone());
    let base_chart = Arc::new(Chart::new(
        "principal_product_base",
        base_coords.clone(),
        base_intervals.clone(),
        vec![false; base_coords.len()],
        crate::chart::DEFAULT_MARGIN,
    )?);
    let t_name = uniquify("t", &base_coords);
    let mut coords = base_coords.clone();
    coords.push(t_name.clone());
    let mut intervals = base_intervals;
    intervals.push((f64::NEG_INFINITY, f64::INFINITY));
    let chart = Arc::new(Chart::new(
        "principal_product",
        coords,
        intervals,
        vec![false; base_coords.len() + 1],
        crate::chart::DEFAULT_MARGIN,
    )?);

    let mut coeffs: Vec<Expr> = data1.coefficients.clone();
    coeffs.extend(data2.coefficients.clone());
    coeffs.push(Expr::one());
    let eta = DifferentialForm::one_form(chart.clone(), coeffs)?;
    let contact = ContactChart::new(eta, samples, seed)?;

    // reeb = d/dt
    let t_index = chart.dim() - 1;
    for p in chart.sample_n(samples, seed) {
        let r = contact.reeb().resolve(&p)?;
        for (i, v) in r.iter().enumerate() {
            let want = if i == t_index { 1.0 } else { 0.0 };
            if (v - want).abs() > 1e-10 {
                return Err(Error::NotNormalForm(format!(
                    "reeb component {i} is {v}, expected {want}"
                )));
            }
        }
    }

    // omega_1 (+) omega_2 on the base, pulled back along the projection,
    // must reproduce d eta
    let theta1 = DifferentialForm::one_form(
        base_chart.clone(),
        data1
            .coefficients
            .iter()
            .cloned()
            .chain(std::iter::repeat_n(Expr::zero(), data2.coords.len()))
            .collect(),
    )?;
    let theta2 = DifferentialForm::one_form(
        base_chart.clone(),
        std::iter::repeat_n(Expr::zero(), data1.coords.len())
            .chain(data2.coefficients.iter().cloned())
            .collect(),
    )?;
    let omega_sum = exterior_derivative(&theta1)?.plus(&exterior_derivative(&theta2)?)?;
    let projection = SmoothMap::new(
        chart.clone(),
        base_chart.clone(),
        base_coords.iter().map(Expr::var).collect(),
    )?;
    let pulled = projection.pullback(&omega_sum)?;
    let points = chart.sample_n(samples, seed);
    let res = max_coeff_residual(
        &FormHandle::Symbolic(pulled),
        &FormHandle::Symbolic(contact.d_eta().clone()),
        &points,
    )?;
    if res > 1e-10 {
        return Err(Error::Invalid(format!(
            "d eta != p*(omega_1 (+) omega_2): residual {res:.3e}"
        )));
    }
    Ok(PrincipalProductForm {
        contact,
        base_chart,
        omega_sum,
        projection,
        t_name,
    })
}

/// Pointwise rank of a symbolic 2-form at a point.
pub fn form_rank_at(omega: &DifferentialForm, point: &[f64]) -> Result<usize> {
    let dim = omega.chart().dim();
    let binding = omega.chart().binding(point);
    let mut m = DMatrix::zeros(dim, dim);
    for (idx, c) in omega.terms() {
        let v = c.eval(&binding)?;
        m[(idx[0], idx[1])] = v;
        m[(idx[1], idx[0])] = -v;
    }
    Ok(m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10)
        .count())
}

/// A vector field on a unit 2-torus chart realizing rates (alpha, -beta);
/// its point-return period ties the dynamics detector to the lattice
/// oracle.
pub fn torus_fixture_field(alpha: f64, beta: f64) -> Result<VectorField> {
    let torus = Arc::new(Chart::new(
        "torus_fixture",
        vec!["x".into(), "y".into()],
        vec![(0.0, 1.0), (0.0, 1.0)],
        vec![true, true],
        0.0,
    )?);
    VectorField::constant(torus, &[alpha, -beta])
}
