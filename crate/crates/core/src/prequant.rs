//! Prequantization on a principal contact chart in normal form
//! eta = dt + h_a(x) dx^a: equivariant sections, horizontal lifts, the
//! covariant derivative D_X F = X^h(F), the prequantum operator
//! H psi = -i hbar D_{X_H} psi + H psi, Hermitian pairing against the
//! Liouville volume, and tensor sections on products.

use crate::calculus::{
    exterior_derivative, gauss_legendre, wedge, DifferentialForm, SmoothMap, VectorField,
};
use crate::chart::Chart;
use crate::contact::ContactChart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::rational::Period;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Tolerance of the equivariance test on inputs (the type invariant).
pub const EQUIVARIANCE_TOL: f64 = 1e-8;
/// Tolerance of the equivariance test on derivative outputs.
pub const OUTPUT_EQUIVARIANCE_TOL: f64 = 1e-6;
/// Central-difference step for D_X.
pub const COVARIANT_FD_STEP: f64 = 1e-5;

/// Sign fixed by the calibration run on the Darboux data h = (-p),
/// X = d/dq, Y = d/dp: the measured curvature commutator equals
/// CURVATURE_SIGN * (-2 pi i / rho) * omega(X, Y) * F. Frozen; the
/// calibration test recomputes it.
pub const CURVATURE_SIGN: f64 = -1.0;

/// Sign fixed by the same calibration run for the Dirac relation
/// [H_f, H_g] = DIRAC_SIGN * i hbar * H_{{f,g}} with {f,g} = omega(X_f, X_g).
pub const DIRAC_SIGN: f64 = 1.0;

/// A contact chart in principal normal form together with its declared
/// minimal period. The fiber coordinate is identified by name; eta must be
/// dt + h_a(x) dx^a with t-independent h_a, which forces reeb = d/dt.
#[derive(Debug, Clone)]
pub struct PrincipalContactData {
    contact: ContactChart,
    fiber: usize,
    period: Period,
    base_chart: Arc<Chart>,
    /// h_a in base-coordinate order.
    connection: Vec<Expr>,
}

impl PrincipalContactData {
    pub fn new(
        contact: ContactChart,
        fiber_name: &str,
        period: Period,
        samples: usize,
        seed: u64,
    ) -> Result<PrincipalContactData> {
        let chart = contact.chart().clone();
        let fiber = chart
            .index_of(fiber_name)
            .ok_or_else(|| Error::NotNormalForm(format!("no coordinate `{fiber_name}`")))?;
        if let Period::Finite(r) = period {
            if !r.is_positive() {
                return Err(Error::InvalidRational("period must be positive".into()));
            }
        }
        // dt coefficient is the constant 1; the rest must not involve t
        let dt_coeff = contact.eta().coeff(&[fiber]);
        if dt_coeff.as_const() != Some(1.0) {
            return Err(Error::NotNormalForm(format!(
                "dt coefficient is `{dt_coeff}`, expected the constant 1"
            )));
        }
        let mut base_coords = Vec::new();
        let mut base_intervals = Vec::new();
        let mut base_periodic = Vec::new();
        let mut connection = Vec::new();
        for i in 0..chart.dim() {
            if i == fiber {
                continue;
            }
            let c = contact.eta().coeff(&[i]);
            if c.variables().iter().any(|v| v == fiber_name) {
                return Err(Error::NotNormalForm(format!(
                    "coefficient of d{} depends on the fiber coordinate",
                    chart.coord(i)
                )));
            }
            base_coords.push(chart.coord(i).to_string());
            base_intervals.push(chart.intervals()[i]);
            base_periodic.push(chart.periodic()[i]);
            connection.push(c);
        }
        let base_chart = Arc::new(Chart::new(
            format!("{}_base", chart.name()),
            base_coords,
            base_intervals,
            base_periodic,
            chart.margin(),
        )?);
        // normal form forces reeb = d/dt; certify it
        for p in chart.sample_n(samples, seed) {
            let r = contact.reeb().resolve(&p)?;
            for (i, v) in r.iter().enumerate() {
                let want = if i == fiber { 1.0 } else { 0.0 };
                if (v - want).abs() > 1e-10 {
                    return Err(Error::NotNormalForm(format!(
                        "reeb component {i} is {v} at {p:?}"
                    )));
                }
            }
        }
        Ok(PrincipalContactData {
            contact,
            fiber,
            period,
            base_chart,
            connection,
        })
    }

    pub fn contact(&self) -> &ContactChart {
        &self.contact
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.contact.chart()
    }

    pub fn base_chart(&self) -> &Arc<Chart> {
        &self.base_chart
    }

    pub fn fiber_index(&self) -> usize {
        self.fiber
    }

    pub fn period(&self) -> Period {
        self.period
    }

    /// hbar = rho / 2 pi for finite periods.
    pub fn hbar(&self) -> Option<f64> {
        self.period.as_finite().map(|r| r.to_f64() / TAU)
    }

    /// Connection coefficients h_a in base order.
    pub fn connection(&self) -> &[Expr] {
        &self.connection
    }

    /// theta = h_a dx^a on the base chart.
    pub fn theta(&self) -> DifferentialForm {
        DifferentialForm::one_form(self.base_chart.clone(), self.connection.clone())
            .expect("connection matches base dimension")
    }

    /// Curvature omega = d theta on the base chart.
    pub fn omega(&self) -> DifferentialForm {
        exterior_derivative(&self.theta()).expect("base has room for a 2-form")
    }

    /// Projection (x, t) -> x.
    pub fn projection(&self) -> SmoothMap {
        let components = self.base_chart.coords().iter().map(Expr::var).collect();
        SmoothMap::new(self.chart().clone(), self.base_chart.clone(), components)
            .expect("projection components fit")
    }

    /// Section x -> (x, t = t0).
    pub fn section(&self, t0: f64) -> SmoothMap {
        let mut components = Vec::with_capacity(self.chart().dim());
        let mut base_iter = self.base_chart.coords().iter();
        for i in 0..self.chart().dim() {
            if i == self.fiber {
                components.push(Expr::constant(t0));
            } else {
                components.push(Expr::var(base_iter.next().unwrap()));
            }
        }
        SmoothMap::new(self.base_chart.clone(), self.chart().clone(), components)
            .expect("section components fit")
    }

    /// Project a total-space point to the base.
    pub fn project_point(&self, y: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(y.len() - 1);
        for (i, v) in y.iter().enumerate() {
            if i != self.fiber {
                out.push(*v);
            }
        }
        out
    }

    /// Insert a fiber value into a base point.
    pub fn lift_point(&self, x: &[f64], t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len() + 1);
        let mut it = x.iter();
        for i in 0..x.len() + 1 {
            if i == self.fiber {
                out.push(t);
            } else {
                out.push(*it.next().unwrap());
            }
        }
        out
    }

    /// The Reeb flow in normal form: shift the fiber coordinate and wrap.
    pub fn shift_fiber(&self, y: &[f64], tau: f64) -> Vec<f64> {
        let mut out = y.to_vec();
        out[self.fiber] += tau;
        self.chart().wrap(&mut out);
        out
    }

    /// e^{-2 pi i t / rho}; the identity for infinite period.
    pub fn phase(&self, t: f64) -> Complex64 {
        match self.period {
            Period::Finite(r) => Complex64::from_polar(1.0, -TAU * t / r.to_f64()),
            Period::Infinite => Complex64::new(1.0, 0.0),
        }
    }
}

/// The circle-bundle Darboux data: eta = dt - p dq on (q, p, t) with the
/// fiber t periodic of length rho. The canonical calibration fixture.
pub fn darboux_circle_data(
    rho: crate::rational::Rational,
    samples: usize,
    seed: u64,
) -> Result<PrincipalContactData> {
    if !rho.is_positive() {
        return Err(Error::InvalidRational("period must be positive".into()));
    }
    let chart = Arc::new(Chart::new(
        "darboux_data",
        vec!["q".into(), "p".into(), "t".into()],
        vec![
            (f64::NEG_INFINITY, f64::INFINITY),
            (f64::NEG_INFINITY, f64::INFINITY),
            (0.0, rho.to_f64()),
        ],
        vec![false, false, true],
        crate::chart::DEFAULT_MARGIN,
    )?);
    let eta = DifferentialForm::one_form(
        chart,
        vec![Expr::neg(Expr::var("p")), Expr::zero(), Expr::one()],
    )?;
    let contact = ContactChart::new(eta, samples, seed)?;
    PrincipalContactData::new(contact, "t", Period::finite(rho)?, samples, seed)
}

type Section = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// A complex-valued callable on the total chart with a declared period,
/// modelling a section of the associated line bundle through the
/// equivariance law F(exp(t R) y) = e^{-2 pi i t / rho} F(y).
#[derive(Clone)]
pub struct EquivariantFunction {
    chart: Arc<Chart>,
    period: Period,
    f: Arc<Section>,
}

impl EquivariantFunction {
    pub fn new(chart: Arc<Chart>, period: Period, f: Arc<Section>) -> EquivariantFunction {
        EquivariantFunction { chart, period, f }
    }

    /// The standard section e^{-2 pi i t / rho} g(x) with a base profile g.
    pub fn from_base_profile(
        pcd: &PrincipalContactData,
        g: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> EquivariantFunction {
        let data = pcd.clone();
        EquivariantFunction {
            chart: pcd.chart().clone(),
            period: pcd.period(),
            f: Arc::new(move |y| {
                let x = data.project_point(y);
                data.phase(y[data.fiber_index()]) * g(&x)
            }),
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn period(&self) -> Period {
        self.period
    }

    pub fn eval(&self, y: &[f64]) -> Complex64 {
        (self.f)(y)
    }

    /// a F + b G.
    pub fn combine(
        a: Complex64,
        f: &EquivariantFunction,
        b: Complex64,
        g: &EquivariantFunction,
    ) -> Result<EquivariantFunction> {
        if f.period != g.period {
            return Err(Error::PeriodMismatch);
        }
        let (f, g) = (f.clone(), g.clone());
        Ok(EquivariantFunction {
            chart: f.chart.clone(),
            period: f.period,
            f: Arc::new(move |y| a * f.eval(y) + b * g.eval(y)),
        })
    }

    /// Max equivariance residual |F(flow_tau y) - phase(tau) F(y)| over
    /// seeded (y, tau) pairs.
    pub fn equivariance_residual(
        &self,
        pcd: &PrincipalContactData,
        samples: usize,
        seed: u64,
    ) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let y = pcd.chart().sample(&mut rng);
            let tau = rng.random_range(-2.0..2.0);
            let moved = pcd.shift_fiber(&y, tau);
            let residual = (self.eval(&moved) - pcd.phase(tau) * self.eval(&y)).norm();
            worst = worst.max(residual);
        }
        Ok(worst)
    }

    fn check_equivariance(
        &self,
        pcd: &PrincipalContactData,
        tolerance: f64,
        samples: usize,
        seed: u64,
    ) -> Result<()> {
        let residual = self.equivariance_residual(pcd, samples, seed)?;
        if residual > tolerance {
            return Err(Error::EquivarianceViolation {
                residual,
                tolerance,
            });
        }
        Ok(())
    }
}

impl std::fmt::Debug for EquivariantFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EquivariantFunction")
            .field("chart", &self.chart.name())
            .field("period", &self.period)
            .finish()
    }
}

/// Pointwise Hamiltonian field of H: the unique solution of i_{X_H} omega =
/// dH (this exact equation; the sign convention is fixed here once).
pub fn hamiltonian_field(h: &Expr, omega: &DifferentialForm) -> Result<VectorField> {
    let chart = omega.chart().clone();
    let dh: Vec<Expr> = (0..chart.dim())
        .map(|i| h.diff(chart.coord(i)))
        .collect();
    let omega = omega.clone();
    let chart2 = chart.clone();
    Ok(VectorField::pointwise(
        chart,
        Arc::new(move |u: &[f64]| {
            let dim = chart2.dim();
            let binding = chart2.binding(u);
            let mut w = DMatrix::zeros(dim, dim);
            for (idx, c) in omega.terms() {
                let v = c.eval(&binding)?;
                w[(idx[0], idx[1])] = v;
                w[(idx[1], idx[0])] = -v;
            }
            let mut rhs = DVector::zeros(dim);
            for (i, d) in dh.iter().enumerate() {
                rhs[i] = d.eval(&binding)?;
            }
            // omega(X, e_j) = dH(e_j)  <=>  -W x = dH
            let lu = (-&w).lu();
            let x = lu.solve(&rhs).ok_or_else(|| Error::SingularSystem {
                point: u.to_vec(),
                context: "omega is singular here".into(),
            })?;
            let residual = (-&w * &x - &rhs).amax();
            if residual > 1e-10 {
                return Err(Error::SingularSystem {
                    point: u.to_vec(),
                    context: format!("Hamiltonian solve residual {residual:.3e}"),
                });
            }
            Ok(x.as_slice().to_vec())
        }),
    ))
}

/// Horizontal lift X^h = X^a d_a - (h_a X^a) d_t of a base field. Symbolic
/// when X is symbolic. Verifies eta(X^h) = 0 and Tp(X^h) = X at samples.
pub fn horizontal_lift(
    x: &VectorField,
    pcd: &PrincipalContactData,
    samples: usize,
    seed: u64,
) -> Result<VectorField> {
    if !x.chart().compatible(pcd.base_chart()) {
        return Err(x.chart().mismatch(pcd.base_chart()));
    }
    let lifted = match x.components() {
        Some(components) => {
            let mut vertical = Expr::zero();
            for (h, c) in pcd.connection().iter().zip(components) {
                vertical = Expr::add(vertical, Expr::mul(h.clone(), c.clone()));
            }
            let mut total = Vec::with_capacity(pcd.chart().dim());
            let mut it = components.iter();
            for i in 0..pcd.chart().dim() {
                if i == pcd.fiber_index() {
                    total.push(Expr::neg(vertical.clone()));
                } else {
                    total.push(it.next().unwrap().clone());
                }
            }
            VectorField::symbolic(pcd.chart().clone(), total)?
        }
        None => {
            let x = x.clone();
            let data = pcd.clone();
            VectorField::pointwise(
                pcd.chart().clone(),
                Arc::new(move |y: &[f64]| {
                    let base = data.project_point(y);
                    let v = x.resolve(&base)?;
                    let binding = data.base_chart().binding(&base);
                    let mut vertical = 0.0;
                    for (h, c) in data.connection().iter().zip(&v) {
                        vertical += h.eval(&binding)? * c;
                    }
                    let mut out = Vec::with_capacity(y.len());
                    let mut it = v.into_iter();
                    for i in 0..y.len() {
                        if i == data.fiber_index() {
                            out.push(-vertical);
                        } else {
                            out.push(it.next().unwrap());
                        }
                    }
                    Ok(out)
                }),
            )
        }
    };
    // certify horizontality and projectability
    for y in pcd.chart().sample_n(samples, seed) {
        let v = lifted.resolve(&y)?;
        let refs: Vec<&[f64]> = vec![&v];
        let horizontal = pcd.contact().eta().apply(&y, &refs)?;
        if horizontal.abs() > 1e-12 {
            return Err(Error::Invalid(format!(
                "lift is not horizontal: eta(X^h) = {horizontal:.3e}"
            )));
        }
        let base = pcd.project_point(&y);
        let want = x.resolve(&base)?;
        let got = pcd.project_point(&v);
        for (a, b) in got.iter().zip(&want) {
            if (a - b).abs() > 1e-12 {
                return Err(Error::Invalid(
                    "lift does not project back onto the base field".into(),
                ));
            }
        }
    }
    Ok(lifted)
}

/// Covariant derivative D_X F = X^h(F) by central differences along the
/// horizontal lift. The input must pass the equivariance test; the output is
/// again equivariant (within [`OUTPUT_EQUIVARIANCE_TOL`], checked by the
/// caller or the test suite).
pub fn covariant_derivative(
    x: &VectorField,
    f: &EquivariantFunction,
    pcd: &PrincipalContactData,
    samples: usize,
    seed: u64,
) -> Result<EquivariantFunction> {
    f.check_equivariance(pcd, EQUIVARIANCE_TOL, samples, seed)?;
    let lift = horizontal_lift(x, pcd, samples, seed)?;
    let chart = pcd.chart().clone();
    let f = f.clone();
    let period = f.period;
    Ok(EquivariantFunction {
        chart: chart.clone(),
        period,
        f: Arc::new(move |y| {
            let v = lift.resolve(y).expect("lift resolves where F is sampled");
            let mut plus = y.to_vec();
            let mut minus = y.to_vec();
            for i in 0..y.len() {
                plus[i] += COVARIANT_FD_STEP * v[i];
                minus[i] -= COVARIANT_FD_STEP * v[i];
            }
            chart.wrap(&mut plus);
            chart.wrap(&mut minus);
            (f.eval(&plus) - f.eval(&minus)) / (2.0 * COVARIANT_FD_STEP)
        }),
    })
}

#[derive(Debug, Clone)]
pub struct PrequantumOperatorResult {
    pub output: EquivariantFunction,
    /// Equivariance residual of the output over the construction samples.
    pub equivariance_residual: f64,
}

/// The prequantum operator H psi = -i hbar D_{X_H} psi + (H . p) psi.
/// hbar defaults to rho / 2 pi; for infinite period (the R-case) the caller
/// must supply hbar > 0.
pub fn prequantum_op(
    h: &Expr,
    psi: &EquivariantFunction,
    pcd: &PrincipalContactData,
    hbar_override: Option<f64>,
    samples: usize,
    seed: u64,
) -> Result<PrequantumOperatorResult> {
    let hbar = match (hbar_override, pcd.hbar()) {
        (Some(v), _) if v > 0.0 => v,
        (None, Some(v)) => v,
        (Some(_), _) => return Err(Error::Invalid("hbar must be positive".into())),
        (None, None) => {
            return Err(Error::PeriodUndefined(
                "infinite period: supply hbar explicitly".into(),
            ))
        }
    };
    let x_h = hamiltonian_field(h, &pcd.omega())?;
    let derivative = covariant_derivative(&x_h, psi, pcd, samples, seed)?;
    let data = pcd.clone();
    let h = h.clone();
    let psi_clone = psi.clone();
    let output = EquivariantFunction {
        chart: pcd.chart().clone(),
        period: psi.period,
        f: Arc::new(move |y| {
            let base = data.project_point(y);
            let h_val = h
                .eval(&data.base_chart().binding(&base))
                .expect("Hamiltonian evaluates on the base");
            Complex64::new(0.0, -hbar) * derivative.eval(y) + h_val * psi_clone.eval(y)
        }),
    };
    let equivariance_residual = output.equivariance_residual(pcd, samples, seed)?;
    Ok(PrequantumOperatorResult {
        output,
        equivariance_residual,
    })
}

/// The Liouville volume coefficient: top coefficient of omega^n / n! on the
/// base chart.
fn liouville_volume(pcd: &PrincipalContactData) -> Result<Expr> {
    let omega = pcd.omega();
    let dim = pcd.base_chart().dim();
    let n = dim / 2;
    let mut power = omega.clone();
    for _ in 1..n {
        power = wedge(&power, &omega)?;
    }
    let full: Vec<usize> = (0..dim).collect();
    let mut factorial = 1.0;
    for k in 2..=n {
        factorial *= k as f64;
    }
    Ok(Expr::div(power.coeff(&full), Expr::constant(factorial)))
}

/// Hermitian pairing <F, G> = integral over the base box of F conj(G)
/// against the Liouville volume omega^n / n!, evaluated on the t = 0
/// section (F conj(G) is fiber-invariant; this is tested first).
pub fn hermitian_pairing(
    f: &EquivariantFunction,
    g: &EquivariantFunction,
    pcd: &PrincipalContactData,
    rect: &[(f64, f64)],
    grid: usize,
) -> Result<Complex64> {
    if f.period != g.period {
        return Err(Error::PeriodMismatch);
    }
    let base_dim = pcd.base_chart().dim();
    if rect.len() != base_dim {
        return Err(Error::DimensionMismatch {
            expected: base_dim,
            found: rect.len(),
        });
    }
    // fiber invariance of F conj(G)
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let y = pcd.chart().sample(&mut rng);
        let tau = rng.random_range(-2.0..2.0);
        let moved = pcd.shift_fiber(&y, tau);
        let a = f.eval(&y) * g.eval(&y).conj();
        let b = f.eval(&moved) * g.eval(&moved).conj();
        if (a - b).norm() > EQUIVARIANCE_TOL {
            return Err(Error::EquivarianceViolation {
                residual: (a - b).norm(),
                tolerance: EQUIVARIANCE_TOL,
            });
        }
    }
    let volume = liouville_volume(pcd)?;
    let (nodes, weights) = gauss_legendre(grid);
    let axes: Vec<(Vec<f64>, Vec<f64>)> = rect
        .iter()
        .map(|&(a, b)| {
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            (
                nodes.iter().map(|t| mid + half * t).collect(),
                weights.iter().map(|w| w * half).collect(),
            )
        })
        .collect();
    let mut index = vec![0usize; base_dim];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let u: Vec<f64> = index.iter().enumerate().map(|(d, &i)| axes[d].0[i]).collect();
        let w: f64 = index.iter().enumerate().map(|(d, &i)| axes[d].1[i]).product();
        let vol = volume.eval(&pcd.base_chart().binding(&u))?;
        let y = pcd.lift_point(&u, 0.0);
        total += w * vol * f.eval(&y) * g.eval(&y).conj();
        // odometer
        let mut d = 0;
        loop {
            if d == base_dim {
                return Ok(total);
            }
            index[d] += 1;
            if index[d] < grid {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}

/// Tensor product of sections: a callable on the concatenated coordinates
/// (y_1, y_2), constant along the anti-diagonal flow (t_1 + tau, t_2 - tau)
/// and equivariant with the common period along the diagonal
/// (t_1 + tau/2, t_2 + tau/2).
#[derive(Clone)]
pub struct TensorSection {
    dim1: usize,
    period: Period,
    f: Arc<dyn Fn(&[f64], &[f64]) -> Complex64 + Send + Sync>,
}

impl TensorSection {
    pub fn period(&self) -> Period {
        self.period
    }

    pub fn eval(&self, y1: &[f64], y2: &[f64]) -> Complex64 {
        (self.f)(y1, y2)
    }

    pub fn eval_joint(&self, y: &[f64]) -> Complex64 {
        (self.f)(&y[..self.dim1], &y[self.dim1..])
    }

    /// Max |T(flow_tau^1 y1, flow_{-tau}^2 y2) - T(y1, y2)| over seeded
    /// samples: invariance along R_1 - R_2.
    pub fn anti_diagonal_residual(
        &self,
        pcd1: &PrincipalContactData,
        pcd2: &PrincipalContactData,
        samples: usize,
        seed: u64,
    ) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let y1 = pcd1.chart().sample(&mut rng);
            let y2 = pcd2.chart().sample(&mut rng);
            let tau = rng.random_range(-2.0..2.0);
            let moved = self.eval(
                &pcd1.shift_fiber(&y1, tau),
                &pcd2.shift_fiber(&y2, -tau),
            );
            worst = worst.max((moved - self.eval(&y1, &y2)).norm());
        }
        Ok(worst)
    }

    /// Max |T(flow_{tau/2}^1 y1, flow_{tau/2}^2 y2) - phase(tau) T(y1, y2)|:
    /// equivariance under the induced diagonal action.
    pub fn diagonal_residual(
        &self,
        pcd1: &PrincipalContactData,
        pcd2: &PrincipalContactData,
        samples: usize,
        seed: u64,
    ) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let y1 = pcd1.chart().sample(&mut rng);
            let y2 = pcd2.chart().sample(&mut rng);
            let tau = rng.random_range(-2.0..2.0);
            let moved = self.eval(
                &pcd1.shift_fiber(&y1, tau / 2.0),
                &pcd2.shift_fiber(&y2, tau / 2.0),
            );
            worst = worst.max((moved - pcd1.phase(tau) * self.eval(&y1, &y2)).norm());
        }
        Ok(worst)
    }
}

impl std::fmt::Debug for TensorSection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TensorSection")
            .field("period", &self.period)
            .finish()
    }
}

/// (F_1 (x) F_2)(y_1, y_2) = F_1(y_1) F_2(y_2). The factors must declare the
/// same period and pass the equivariance test.
pub fn tensor_section(
    f1: &EquivariantFunction,
    pcd1: &PrincipalContactData,
    f2: &EquivariantFunction,
    pcd2: &PrincipalContactData,
    samples: usize,
    seed: u64,
) -> Result<TensorSection> {
    if f1.period() != f2.period() {
        return Err(Error::PeriodMismatch);
    }
    f1.check_equivariance(pcd1, EQUIVARIANCE_TOL, samples, seed)?;
    f2.check_equivariance(pcd2, EQUIVARIANCE_TOL, samples, seed)?;
    let (f1, f2) = (f1.clone(), f2.clone());
    Ok(TensorSection {
        dim1: pcd1.chart().dim(),
        period: f1.period(),
        f: Arc::new(move |y1, y2| f1.eval(y1) * f2.eval(y2)),
    })
}

/// Hermitian pairing of tensor sections over the product base, against the
/// product Liouville volume.
pub fn tensor_pairing(
    a: &TensorSection,
    b: &TensorSection,
    pcd1: &PrincipalContactData,
    pcd2: &PrincipalContactData,
    rect1: &[(f64, f64)],
    rect2: &[(f64, f64)],
    grid: usize,
) -> Result<Complex64> {
    let d1 = pcd1.base_chart().dim();
    let d2 = pcd2.base_chart().dim();
    if rect1.len() != d1 || rect2.len() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 + d2,
            found: rect1.len() + rect2.len(),
        });
    }
    let vol1 = liouville_volume(pcd1)?;
    let vol2 = liouville_volume(pcd2)?;
    let (nodes, weights) = gauss_legendre(grid);
    let scale = |rect: &[(f64, f64)]| -> Vec<(Vec<f64>, Vec<f64>)> {
        rect.iter()
            .map(|&(lo, hi)| {
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                (
                    nodes.iter().map(|t| mid + half * t).collect(),
                    weights.iter().map(|w| w * half).collect(),
                )
            })
            .collect()
    };
    let axes: Vec<(Vec<f64>, Vec<f64>)> = scale(rect1)
        .into_iter()
        .chain(scale(rect2))
        .collect();
    let dim = d1 + d2;
    let mut index = vec![0usize; dim];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let u: Vec<f64> = index.iter().enumerate().map(|(d, &i)| axes[d].0[i]).collect();
        let w: f64 = index.iter().enumerate().map(|(d, &i)| axes[d].1[i]).product();
        let u1 = &u[..d1];
        let u2 = &u[d1..];
        let v1 = vol1.eval(&pcd1.base_chart().binding(u1))?;
        let v2 = vol2.eval(&pcd2.base_chart().binding(u2))?;
        let y1 = pcd1.lift_point(u1, 0.0);
        let y2 = pcd2.lift_point(u2, 0.0);
        total += w * v1 * v2 * a.eval(&y1, &y2) * b.eval(&y1, &y2).conj();
        let mut d = 0;
        loop {
            if d == dim {
                return Ok(total);
            }
            index[d] += 1;
            if index[d] < grid {
                break;
            }
            index[d] = 0;
            d += 1;
        }
    }
}

/// Measured curvature operator residual against
/// sign * (-2 pi i / rho) * omega(X, Y) * F: max over samples of
/// |(D_X D_Y - D_Y D_X - D_{[X,Y]}) F - prediction|.
pub fn curvature_residual(
    x: &VectorField,
    y: &VectorField,
    f: &EquivariantFunction,
    pcd: &PrincipalContactData,
    omega: &DifferentialForm,
    sign: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let rho = pcd
        .period()
        .as_finite()
        .ok_or_else(|| Error::PeriodUndefined("curvature test needs a finite period".into()))?
        .to_f64();
    let dxy = covariant_derivative(x, &covariant_derivative(y, f, pcd, samples, seed)?, pcd, samples, seed)?;
    let dyx = covariant_derivative(y, &covariant_derivative(x, f, pcd, samples, seed)?, pcd, samples, seed)?;
    let xy = crate::calculus::bracket(x, y)?;
    let dbracket = covariant_derivative(&xy, f, pcd, samples, seed)?;
    let factor = Complex64::new(0.0, sign * (-TAU) / rho);
    let mut worst: f64 = 0.0;
    for p in pcd.chart().sample_n(samples, seed) {
        let base = pcd.project_point(&p);
        let xv = x.resolve(&base)?;
        let yv = y.resolve(&base)?;
        let refs: Vec<&[f64]> = vec![&xv, &yv];
        let omega_xy = omega.apply(&base, &refs)?;
        let measured = dxy.eval(&p) - dyx.eval(&p) - dbracket.eval(&p);
        let predicted = factor * omega_xy * f.eval(&p);
        worst = worst.max((measured - predicted).norm());
    }
    Ok(worst)
}

/// Rerun the sign calibration: returns (best sign, its residual, the other
/// sign's residual). The frozen [`CURVATURE_SIGN`] must match.
pub fn calibrate_curvature_sign(
    x: &VectorField,
    y: &VectorField,
    f: &EquivariantFunction,
    pcd: &PrincipalContactData,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64, f64)> {
    let omega = pcd.omega();
    let plus = curvature_residual(x, y, f, pcd, &omega, 1.0, samples, seed)?;
    let minus = curvature_residual(x, y, f, pcd, &omega, -1.0, samples, seed)?;
    if plus <= minus {
        Ok((1.0, plus, minus))
    } else {
        Ok((-1.0, minus, plus))
    }
}

/// Max over samples of |[H_f, H_g] psi - sign * i hbar * H_{{f,g}} psi|
/// with {f, g} = omega(X_f, X_g). The relation needs the genuine curvature
/// term, so hbar comes from the finite period rho / 2 pi.
pub fn dirac_residual(
    f: &Expr,
    g: &Expr,
    psi: &EquivariantFunction,
    pcd: &PrincipalContactData,
    sign: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let hbar = pcd
        .hbar()
        .ok_or_else(|| Error::PeriodUndefined("Dirac test needs a finite period".into()))?;
    let omega = pcd.omega();
    let xf = hamiltonian_field(f, &omega)?;
    let xg = hamiltonian_field(g, &omega)?;

    let hf_psi = prequantum_op(f, psi, pcd, None, samples, seed)?.output;
    let hg_psi = prequantum_op(g, psi, pcd, None, samples, seed)?.output;
    let hf_hg = prequantum_op(f, &hg_psi, pcd, None, samples, seed)?.output;
    let hg_hf = prequantum_op(g, &hf_psi, pcd, None, samples, seed)?.output;

    // {f, g} = omega(X_f, X_g), both as a pointwise contraction and
    // symbolically (the operator needs a symbolic Hamiltonian); the two
    // routes are cross-checked below
    let poisson = |u: &[f64]| -> Result<f64> {
        let a = xf.resolve(u)?;
        let b = xg.resolve(u)?;
        let refs: Vec<&[f64]> = vec![&a, &b];
        omega.apply(u, &refs)
    };
    let poisson_sym = poisson_bracket(f, g, pcd)?;
    let h_poisson = prequantum_op(&poisson_sym, psi, pcd, None, samples, seed)?.output;

    let factor = Complex64::new(0.0, sign * hbar);
    let mut worst: f64 = 0.0;
    for p in pcd.chart().sample_n(samples, seed) {
        let commutator = hf_hg.eval(&p) - hg_hf.eval(&p);
        let predicted = factor * h_poisson.eval(&p);
        worst = worst.max((commutator - predicted).norm());
        // consistency of the two Poisson routes
        let u = pcd.project_point(&p);
        let sym = poisson_sym.eval(&pcd.base_chart().binding(&u))?;
        let num = poisson(&u)?;
        if (sym - num).abs() > 1e-8 {
            return Err(Error::Invalid(format!(
                "Poisson bracket routes disagree: {sym} vs {num}"
            )));
        }
    }
    Ok(worst)
}

/// Symbolic Poisson bracket {f, g} = omega(X_f, X_g) on a 2-dimensional
/// base with omega = w du ^ dv. Solving i_{X_g} omega = dg gives
/// X_g = (dg/dv, -dg/du)/w, and omega(X_f, X_g) = df(X_g), so
/// {f, g} = (df/du dg/dv - df/dv dg/du) / w.
pub fn poisson_bracket(f: &Expr, g: &Expr, pcd: &PrincipalContactData) -> Result<Expr> {
    let base = pcd.base_chart();
    if base.dim() != 2 {
        return Err(Error::Invalid(
            "symbolic Poisson bracket implemented for 2-dimensional bases".into(),
        ));
    }
    let omega = pcd.omega();
    let w = omega.coeff(&[0, 1]);
    let (u, v) = (base.coord(0), base.coord(1));
    let numerator = Expr::sub(
        Expr::mul(f.diff(u), g.diff(v)),
        Expr::mul(f.diff(v), g.diff(u)),
    );
    Ok(Expr::div(numerator, w))
}

#[cfg(test)]
mod tests;
