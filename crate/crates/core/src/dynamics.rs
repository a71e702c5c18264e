//! Numerical flows, minimal-period detection, and the period-constancy
//! suite: the empirical layer behind the regularity claims. All integration
//! is fixed-step classical RK4 with a final partial step, so reports are
//! deterministic for a given step size.

use crate::calculus::VectorField;
use crate::contact::ContactChart;
use crate::error::{Error, Result};
use std::fmt;

/// Defaults shared by the flow-based checks.
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_HORIZON: f64 = 100.0;
pub const DEFAULT_RETURN_TOL: f64 = 1e-4;
/// Return distance required after bisection refinement.
pub const REFINED_RETURN_TOL: f64 = 1e-8;
/// Width of the bisection bracket at which refinement stops.
pub const REFINE_T_TOL: f64 = 1e-10;
/// Periods across orbits must agree to this relative spread.
pub const PERIOD_SPREAD_REL: f64 = 1e-5;

/// Result of integrating a field for a fixed time.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub point: Vec<f64>,
    pub elapsed: f64,
    pub step: f64,
    /// Max of the monitor callback along the trajectory (0 when absent).
    pub max_residual: f64,
}

/// One RK4 step of size h (h may be negative).
fn rk4_step(field: &VectorField, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let k1 = field.resolve(x)?;
    let mid1: Vec<f64> = x.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
    let k2 = field.resolve(&mid1)?;
    let mid2: Vec<f64> = x.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
    let k3 = field.resolve(&mid2)?;
    let end: Vec<f64> = x.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
    let k4 = field.resolve(&end)?;
    Ok((0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrate `field` from `x0` for time `t_final` (signed) with fixed step
/// `h > 0` and a final partial step landing exactly on `t_final`. Periodic
/// coordinates are wrapped after every accepted step; leaving the open
/// domain (or entering an excluded ball) aborts with the exit time. The
/// optional monitor is sampled at every accepted step.
pub fn flow(
    field: &VectorField,
    x0: &[f64],
    t_final: f64,
    h: f64,
    monitor: Option<&dyn Fn(&[f64]) -> Result<f64>>,
) -> Result<FlowResult> {
    if !(h > 0.0) {
        return Err(Error::Invalid("step size must be positive".into()));
    }
    let chart = field.chart();
    if !chart.contains(x0) {
        return Err(Error::DomainExit { time: 0.0 });
    }
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut max_residual: f64 = match monitor {
        Some(m) => m(&x)?,
        None => 0.0,
    };
    let sign = if t_final < 0.0 { -1.0 } else { 1.0 };
    let total = t_final.abs();
    let steps = (total / h).floor() as u64;
    for k in 0..=steps {
        let dt = if k < steps {
            sign * h
        } else {
            t_final - t // final partial step
        };
        if dt == 0.0 {
            break;
        }
        x = rk4_step(field, &x, dt)?;
        chart.wrap(&mut x);
        t += dt;
        if !chart.contains(&x) {
            return Err(Error::DomainExit { time: t });
        }
        if let Some(m) = monitor {
            max_residual = max_residual.max(m(&x)?);
        }
    }
    Ok(FlowResult {
        point: x,
        elapsed: t_final,
        step: h,
        max_residual,
    })
}

/// Outcome of the first-return search.
#[derive(Debug, Clone)]
pub enum PeriodStatus {
    Periodic {
        period: f64,
        return_distance: f64,
        refinements: usize,
    },
    NoReturn,
}

#[derive(Debug, Clone)]
pub struct PeriodResult {
    pub status: PeriodStatus,
    pub horizon: f64,
    pub step: f64,
}

impl PeriodResult {
    pub fn period(&self) -> Option<f64> {
        match self.status {
            PeriodStatus::Periodic { period, .. } => Some(period),
            PeriodStatus::NoReturn => None,
        }
    }
}

impl fmt::Display for PeriodStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodStatus::Periodic {
                period,
                return_distance,
                ..
            } => write!(f, "periodic (rho = {period:.9}, return {return_distance:.2e})"),
            PeriodStatus::NoReturn => write!(f, "no return within horizon"),
        }
    }
}

/// d/dt of half the squared (wrapped) distance to x0.
fn radial_speed(field: &VectorField, x: &[f64], x0: &[f64]) -> Result<f64> {
    let chart = field.chart();
    let diff = chart.wrapped_diff(x, x0);
    let v = field.resolve(x)?;
    Ok(diff.iter().zip(&v).map(|(d, s)| d * s).sum())
}

/// March the flow from `x0`, detect a local minimum of the wrapped distance
/// below the detection trigger, and refine the first-return time by
/// bisection on the radial speed to [`REFINE_T_TOL`] in t. The trigger is
/// `return_tol` floored by the grid resolution 2 h |X(x0)| (the distance at
/// the sampled step nearest a true return is as large as h/2 times the
/// speed). The refined return must come back within
/// [`REFINED_RETURN_TOL`]; a near miss is skipped and the march continues.
/// Returns NoReturn once the horizon is exhausted.
pub fn minimal_period(
    field: &VectorField,
    x0: &[f64],
    horizon: f64,
    return_tol: f64,
    h: f64,
) -> Result<PeriodResult> {
    if !(h > 0.0) || !(horizon > 0.0) {
        return Err(Error::Invalid("need positive step and horizon".into()));
    }
    let chart = field.chart();
    if !chart.contains(x0) {
        return Err(Error::DomainExit { time: 0.0 });
    }
    let speed = field
        .resolve(x0)?
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let trigger = return_tol.max(2.0 * h * speed);
    // the trajectory must first leave the neighbourhood of x0 before a
    // return can count
    let escape = 10.0 * trigger;
    let mut armed = false;

    let mut prev = x0.to_vec();
    let mut prev_t = 0.0;
    let mut prev_d = 0.0;
    let mut curr = rk4_step(field, &prev, h)?;
    chart.wrap(&mut curr);
    let mut curr_t = h;
    let mut curr_d = chart.distance(&curr, x0);

    while curr_t < horizon {
        if !chart.contains(&curr) {
            return Err(Error::DomainExit { time: curr_t });
        }
        let mut next = rk4_step(field, &curr, h)?;
        chart.wrap(&mut next);
        let next_t = curr_t + h;
        let next_d = chart.distance(&next, x0);

        if !armed && curr_d > escape {
            armed = true;
        }
        if armed && curr_d < trigger && prev_d >= curr_d && curr_d <= next_d {
            // bracket [prev_t, next_t] holds a local minimum of the distance
            if let Some(result) =
                refine_return(field, x0, &prev, prev_t, next_t, h)?
            {
                return Ok(PeriodResult {
                    status: result,
                    horizon,
                    step: h,
                });
            }
        }
        prev = curr;
        prev_t = curr_t;
        prev_d = curr_d;
        curr = next;
        curr_t = next_t;
        curr_d = next_d;
    }
    Ok(PeriodResult {
        status: PeriodStatus::NoReturn,
        horizon,
        step: h,
    })
}

/// Bisect the radial speed g(t) = <x(t) - x0, x'(t)> over [lo_t, lo_t + 2h]
/// starting from the cached state at lo_t. Returns None when the refined
/// minimum is not an actual return.
fn refine_return(
    field: &VectorField,
    x0: &[f64],
    lo_state: &[f64],
    lo_t: f64,
    hi_t: f64,
    h: f64,
) -> Result<Option<PeriodStatus>> {
    let chart = field.chart();
    // evaluate g at offset dt from the cached bracket start
    let eval = |dt: f64| -> Result<(Vec<f64>, f64)> {
        let x = if dt == 0.0 {
            lo_state.to_vec()
        } else {
            flow(field, lo_state, dt, h, None)?.point
        };
        let g = radial_speed(field, &x, x0)?;
        Ok((x, g))
    };
    let width = hi_t - lo_t;
    let (_, mut g_lo) = eval(0.0)?;
    let (_, g_hi) = eval(width)?;
    if g_lo > 0.0 || g_hi < 0.0 {
        // not a sign change; treat as a failed bracket
        return Ok(None);
    }
    let mut lo = 0.0;
    let mut hi = width;
    let mut refinements = 0;
    while hi - lo > REFINE_T_TOL {
        let mid = 0.5 * (lo + hi);
        let (_, g_mid) = eval(mid)?;
        if (g_lo <= 0.0) == (g_mid <= 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
        refinements += 1;
        if refinements > 200 {
            break;
        }
    }
    let t_star = 0.5 * (lo + hi);
    let (x_star, _) = eval(t_star)?;
    let return_distance = chart.distance(&x_star, x0);
    if return_distance < REFINED_RETURN_TOL {
        Ok(Some(PeriodStatus::Periodic {
            period: lo_t + t_star,
            return_distance,
            refinements,
        }))
    } else {
        Ok(None)
    }
}

/// Per-orbit outcome inside the constancy suite.
#[derive(Debug, Clone)]
pub enum OrbitOutcome {
    Periodic { period: f64 },
    NoReturn,
    DomainExit { time: f64 },
}

/// Aggregated verdict of the suite.
#[derive(Debug, Clone, PartialEq)]
pub enum SuiteVerdict {
    /// All completed orbits periodic; carries (mean period, absolute spread).
    Periodic { mean: f64, spread: f64 },
    /// All completed orbits ran the full horizon without returning.
    NonPeriodic,
    /// Periodic and non-returning orbits coexist: the dichotomy fails.
    Mixed,
    /// Every sampled orbit left the domain; nothing to conclude.
    AllEscaped,
}

#[derive(Debug, Clone)]
pub struct PeriodSuiteReport {
    pub orbits: Vec<(Vec<f64>, OrbitOutcome)>,
    pub verdict: SuiteVerdict,
    pub escaped: usize,
    pub pass: bool,
}

/// Sample seeded base points and test the dichotomy: either no completed
/// orbit returns, or every completed orbit is periodic and the minimal
/// periods agree within [`PERIOD_SPREAD_REL`] relative spread. Orbits that
/// leave the chart domain (incomplete field) are excluded from the dichotomy
/// but reported.
pub fn period_constancy_suite(
    contact: &ContactChart,
    n_orbits: usize,
    seed: u64,
    horizon: f64,
    return_tol: f64,
    h: f64,
) -> Result<PeriodSuiteReport> {
    let chart = contact.chart();
    let mut orbits = Vec::with_capacity(n_orbits);
    let mut periods = Vec::new();
    let mut no_returns = 0usize;
    let mut escaped = 0usize;
    for x0 in chart.sample_n(n_orbits, seed) {
        let outcome = match minimal_period(contact.reeb(), &x0, horizon, return_tol, h) {
            Ok(result) => match result.status {
                PeriodStatus::Periodic { period, .. } => {
                    periods.push(period);
                    OrbitOutcome::Periodic { period }
                }
                PeriodStatus::NoReturn => {
                    no_returns += 1;
                    OrbitOutcome::NoReturn
                }
            },
            Err(Error::DomainExit { time }) => {
                escaped += 1;
                OrbitOutcome::DomainExit { time }
            }
            Err(e) => return Err(e),
        };
        orbits.push((x0, outcome));
    }
    let verdict = if periods.is_empty() && no_returns == 0 {
        SuiteVerdict::AllEscaped
    } else if periods.is_empty() {
        SuiteVerdict::NonPeriodic
    } else if no_returns > 0 {
        SuiteVerdict::Mixed
    } else {
        let mean = periods.iter().sum::<f64>() / periods.len() as f64;
        let max = periods.iter().fold(f64::NEG_INFINITY, |m, &p| m.max(p));
        let min = periods.iter().fold(f64::INFINITY, |m, &p| m.min(p));
        SuiteVerdict::Periodic {
            mean,
            spread: max - min,
        }
    };
    let pass = match &verdict {
        SuiteVerdict::Periodic { mean, spread } => *spread < PERIOD_SPREAD_REL * mean,
        SuiteVerdict::NonPeriodic => true,
        SuiteVerdict::Mixed | SuiteVerdict::AllEscaped => false,
    };
    Ok(PeriodSuiteReport {
        orbits,
        verdict,
        escaped,
        pass,
    })
}
