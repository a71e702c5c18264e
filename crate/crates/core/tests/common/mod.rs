//! Shared helpers for the integration suites: seeded random expressions and
//! forms over a chart.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reebkit::calculus::{increasing_indices, DifferentialForm};
use reebkit::chart::Chart;
use reebkit::expr::{Expr, Func};
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial/trig mix over `vars`, total on all of R^d.
pub fn random_expr(rng: &mut ChaCha8Rng, vars: &[String], depth: usize) -> Expr {
    if depth == 0 {
        return if rng.random_bool(0.5) {
            Expr::constant(rng.random_range(-2.0..2.0))
        } else {
            Expr::var(vars[rng.random_range(0..vars.len())].clone())
        };
    }
    match rng.random_range(0..7) {
        0 => Expr::add(
            random_expr(rng, vars, depth - 1),
            random_expr(rng, vars, depth - 1),
        ),
        1 => Expr::sub(
            random_expr(rng, vars, depth - 1),
            random_expr(rng, vars, depth - 1),
        ),
        2 => Expr::mul(
            random_expr(rng, vars, depth - 1),
            random_expr(rng, vars, depth - 1),
        ),
        3 => Expr::call(Func::Sin, random_expr(rng, vars, depth - 1)),
        4 => Expr::call(Func::Cos, random_expr(rng, vars, depth - 1)),
        5 => Expr::pow(
            random_expr(rng, vars, depth - 1),
            Expr::constant(rng.random_range(2..4) as f64),
        ),
        _ => Expr::neg(random_expr(rng, vars, depth - 1)),
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_form(
    rng: &mut ChaCha8Rng,
    chart: &Arc<Chart>,
    degree: usize,
    depth: usize,
) -> DifferentialForm {
    let vars = chart.coords().to_vec();
    let mut form = DifferentialForm::zero(chart.clone(), degree).unwrap();
    for idx in increasing_indices(chart.dim(), degree) {
        form.add_term(idx, random_expr(rng, &vars, depth));
    }
    form
}
