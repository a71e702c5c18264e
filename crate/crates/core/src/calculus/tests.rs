use super::*;
use crate::chart::Chart;
use crate::expr::tests::{random_expr, random_point};
use crate::expr::{parse, Expr};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;

fn darboux_chart() -> Arc<Chart> {
    Arc::new(Chart::euclidean("darboux1", &["z", "p", "q"]))
}

fn darboux_eta(chart: &Arc<Chart>) -> DifferentialForm {
    // eta = dz - p dq
    DifferentialForm::one_form(
        chart.clone(),
        vec![Expr::one(), Expr::zero(), Expr::neg(Expr::var("p"))],
    )
    .unwrap()
}

fn hopf_chart() -> Arc<Chart> {
    Arc::new(
        Chart::new(
            "hopf_s3",
            vec!["xi1".into(), "xi2".into(), "phi".into()],
            vec![(0.0, TAU), (0.0, TAU), (0.0, FRAC_PI_2)],
            vec![true, true, false],
            1e-3,
        )
        .unwrap(),
    )
}

fn hopf_eta(chart: &Arc<Chart>) -> DifferentialForm {
    let vars = chart.coords().to_vec();
    DifferentialForm::one_form(
        chart.clone(),
        vec![
            parse("cos(phi)^2", &vars).unwrap(),
            parse("sin(phi)^2", &vars).unwrap(),
            Expr::zero(),
        ],
    )
    .unwrap()
}

fn hopf_base_chart() -> Arc<Chart> {
    Arc::new(
        Chart::new(
            "hopf_base",
            vec!["phi".into(), "psi".into()],
            vec![(0.0, FRAC_PI_2), (0.0, TAU)],
            vec![false, true],
            1e-3,
        )
        .unwrap(),
    )
}

fn random_form(
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

#[test]
fn increasing_indices_enumeration() {
    assert_eq!(increasing_indices(3, 0), vec![Vec::<usize>::new()]);
    assert_eq!(increasing_indices(3, 1), vec![vec![0], vec![1], vec![2]]);
    assert_eq!(
        increasing_indices(4, 2),
        vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3]
        ]
    );
    assert_eq!(increasing_indices(3, 3), vec![vec![0, 1, 2]]);
    assert!(increasing_indices(2, 3).is_empty());
}

#[test]
fn exterior_derivative_of_darboux_form() {
    let chart = darboux_chart();
    let d_eta = exterior_derivative(&darboux_eta(&chart)).unwrap();
    // d(dz - p dq) = -dp ^ dq, i.e. coefficient -1 on the increasing index (p, q)
    assert_eq!(d_eta.degree(), 2);
    assert_eq!(d_eta.coeff(&[1, 2]).as_const(), Some(-1.0));
    assert!(d_eta.coeff(&[0, 1]).is_zero());
    assert!(d_eta.coeff(&[0, 2]).is_zero());
}

#[test]
fn exterior_derivative_squares_to_zero() {
    let chart = darboux_chart();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let f = random_form(&mut rng, &chart, 0, 3);
        let ddf = exterior_derivative(&exterior_derivative(&f).unwrap()).unwrap();
        for _ in 0..20 {
            let p = random_point(&mut rng, 3);
            for v in ddf.eval_coeffs(&p).unwrap().values() {
                assert!(v.abs() < 1e-12, "d(df) = {v} at {p:?}");
            }
        }
    }
}

#[test]
fn exterior_derivative_of_hopf_form() {
    // oracle: d(cos^2 phi dxi1 + sin^2 phi dxi2) = sin(2 phi) dphi ^ (dxi2 - dxi1)
    let chart = hopf_chart();
    let d_eta = exterior_derivative(&hopf_eta(&chart)).unwrap();
    for p in chart.sample_n(30, 3) {
        let c = d_eta.eval_coeffs(&p).unwrap();
        let s2 = (2.0 * p[2]).sin();
        // increasing indices: (xi1, phi) = [0,2] carries +sin(2phi) from
        // moving dphi past dxi1; (xi2, phi) = [1,2] carries -sin(2phi)
        let c02 = c.get(&vec![0, 2]).copied().unwrap_or(0.0);
        let c12 = c.get(&vec![1, 2]).copied().unwrap_or(0.0);
        assert!((c02 - s2).abs() < 1e-12);
        assert!((c12 + s2).abs() < 1e-12);
    }
}

#[test]
fn exterior_derivative_rejects_top_degree() {
    let chart = darboux_chart();
    let mut top = DifferentialForm::zero(chart, 3).unwrap();
    top.add_term(vec![0, 1, 2], Expr::one());
    assert!(matches!(
        exterior_derivative(&top),
        Err(crate::Error::DegreeOverflow { .. })
    ));
}

#[test]
fn wedge_darboux_volume() {
    let chart = darboux_chart();
    let eta = darboux_eta(&chart);
    let d_eta = exterior_derivative(&eta).unwrap();
    let vol = wedge(&eta, &d_eta).unwrap();
    // (dz - p dq) ^ (-dp ^ dq) = -dz ^ dp ^ dq
    assert_eq!(vol.coeff(&[0, 1, 2]).as_const(), Some(-1.0));
}

#[test]
fn wedge_of_one_form_with_itself_vanishes() {
    let chart = darboux_chart();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let alpha = random_form(&mut rng, &chart, 1, 2);
        let sq = wedge(&alpha, &alpha).unwrap();
        for p in chart.sample_n(10, 11) {
            for v in sq.eval_coeffs(&p).unwrap().values() {
                assert!(v.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn wedge_pairs_basis_vectors() {
    let chart = Arc::new(Chart::euclidean("r2", &["x", "y"]));
    let dx = DifferentialForm::one_form(chart.clone(), vec![Expr::one(), Expr::zero()]).unwrap();
    let dy = DifferentialForm::one_form(chart.clone(), vec![Expr::zero(), Expr::one()]).unwrap();
    let dxdy = wedge(&dx, &dy).unwrap();
    let e1 = [1.0, 0.0];
    let e2 = [0.0, 1.0];
    assert_eq!(dxdy.apply(&[0.3, 0.7], &[&e1, &e2]).unwrap(), 1.0);
    assert_eq!(dxdy.apply(&[0.3, 0.7], &[&e2, &e1]).unwrap(), -1.0);
}

#[test]
fn wedge_graded_antisymmetry() {
    let chart = Arc::new(Chart::euclidean("r4", &["a", "b", "c", "d"]));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (ka, kb) in [(1, 1), (1, 2), (2, 2), (2, 1)] {
        let alpha = random_form(&mut rng, &chart, ka, 2);
        let beta = random_form(&mut rng, &chart, kb, 2);
        let ab = wedge(&alpha, &beta).unwrap();
        let ba = wedge(&beta, &alpha).unwrap();
        let sign = if (ka * kb) % 2 == 0 { 1.0 } else { -1.0 };
        for p in chart.sample_n(10, 6) {
            let cab = ab.eval_coeffs(&p).unwrap();
            let cba = ba.eval_coeffs(&p).unwrap();
            for (idx, v) in &cab {
                let w = cba.get(idx).copied().unwrap_or(0.0);
                assert!((v - sign * w).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn wedge_rejects_mismatched_charts_and_overflow() {
    let c1 = darboux_chart();
    let c2 = Arc::new(Chart::euclidean("r2", &["x", "y"]));
    let a = DifferentialForm::one_form(c1.clone(), vec![Expr::one(), Expr::zero(), Expr::zero()])
        .unwrap();
    let b = DifferentialForm::one_form(c2, vec![Expr::one(), Expr::zero()]).unwrap();
    assert!(wedge(&a, &b).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let two = random_form(&mut rng, &c1, 2, 1);
    assert!(wedge(&two, &two).is_err());
}

#[test]
fn interior_product_of_reeb_direction() {
    let chart = darboux_chart();
    let eta = darboux_eta(&chart);
    let dz = VectorField::basis(chart.clone(), 0);
    // i_{dz}(dz - p dq) = 1
    let contracted = interior_product(&dz, &eta).unwrap();
    let f = contracted.as_symbolic().unwrap().as_function().unwrap();
    assert_eq!(f.as_const(), Some(1.0));
    // i_{dz}(dq ^ dp) = 0
    let mut dqdp = DifferentialForm::zero(chart.clone(), 2).unwrap();
    dqdp.add_term(vec![2, 1], Expr::one());
    let zero = interior_product(&dz, &dqdp).unwrap();
    assert!(zero.as_symbolic().unwrap().is_structurally_zero());
}

/// Symbolic expansion oracle for the symplectization 2-form
/// ds ^ eta + s d(eta): contracting with s d/ds must give s * eta.
#[test]
fn interior_product_liouville_identity() {
    let base = darboux_chart();
    let eta = darboux_eta(&base);
    let (ext, s_name) = base.extend("s", (0.0, f64::INFINITY), "_symp");
    let s_idx = ext.index_of(&s_name).unwrap();
    let eta_l = eta.lift_to(ext.clone(), 0).unwrap();
    let d_eta_l = exterior_derivative(&eta_l).unwrap();
    let mut ds = DifferentialForm::zero(ext.clone(), 1).unwrap();
    ds.add_term(vec![s_idx], Expr::one());
    let s = Expr::var(&s_name);
    let omega = wedge(&ds, &eta_l).unwrap().plus(&d_eta_l.scale(&s)).unwrap();

    let mut nabla_components = vec![Expr::zero(); ext.dim()];
    nabla_components[s_idx] = s.clone();
    let nabla = VectorField::symbolic(ext.clone(), nabla_components).unwrap();

    let contracted = interior_product(&nabla, &omega).unwrap();
    let theta = FormHandle::Symbolic(eta_l.scale(&s));
    let pts = ext.sample_n(50, 42);
    let res = max_coeff_residual(&contracted, &theta, &pts).unwrap();
    assert!(res < 1e-12, "i_nabla omega vs s*eta residual {res}");
}

#[test]
fn interior_product_is_an_antiderivation() {
    let chart = Arc::new(Chart::euclidean("r4", &["a", "b", "c", "d"]));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let vars = chart.coords().to_vec();
    for (ka, kb) in [(1, 1), (1, 2), (2, 1)] {
        let alpha = random_form(&mut rng, &chart, ka, 2);
        let beta = random_form(&mut rng, &chart, kb, 2);
        let x = VectorField::symbolic(
            chart.clone(),
            (0..4).map(|_| random_expr(&mut rng, &vars, 2)).collect(),
        )
        .unwrap();
        let lhs = interior_product(&x, &wedge(&alpha, &beta).unwrap()).unwrap();
        let ia = interior_product(&x, &alpha).unwrap();
        let ib = interior_product(&x, &beta).unwrap();
        let sign = if ka % 2 == 0 { 1.0 } else { -1.0 };
        let term1 = wedge(ia.as_symbolic().unwrap(), &beta).unwrap();
        let term2 = wedge(&alpha, ib.as_symbolic().unwrap())
            .unwrap()
            .scale(&Expr::constant(sign));
        let rhs = FormHandle::Symbolic(term1.plus(&term2).unwrap());
        let pts = chart.sample_n(20, 3);
        let res = max_coeff_residual(&lhs, &rhs, &pts).unwrap();
        assert!(res < 1e-10, "antiderivation residual {res} for ({ka},{kb})");
    }
}

#[test]
fn lie_derivative_reeb_invariance() {
    let chart = darboux_chart();
    let eta = darboux_eta(&chart);
    let dz = VectorField::basis(chart.clone(), 0);
    let l = lie_derivative(&dz, &eta).unwrap();
    let pts = chart.sample_n(20, 9);
    assert!(max_coeff_abs(&l, &pts).unwrap() < 1e-12);
}

#[test]
fn lie_derivative_of_function_is_directional_derivative() {
    let chart = darboux_chart();
    let vars = chart.coords().to_vec();
    let f = parse("sin(z)*p + q^2", &vars).unwrap();
    let form = DifferentialForm::function(chart.clone(), f.clone());
    let x = VectorField::symbolic(
        chart.clone(),
        vec![
            parse("q", &vars).unwrap(),
            parse("1", &vars).unwrap(),
            parse("z", &vars).unwrap(),
        ],
    )
    .unwrap();
    let lf = lie_derivative(&x, &form).unwrap();
    for p in chart.sample_n(20, 10) {
        let got = lf.eval_coeffs(&p).unwrap().get(&vec![]).copied().unwrap();
        let want = x.derive(&f, &p).unwrap();
        assert!((got - want).abs() < 1e-12);
    }
}

/// Pointwise (finite-difference) path: 1-homogeneity of the symplectization
/// form, L_nabla omega = omega.
#[test]
fn lie_derivative_homogeneity_fd_path() {
    let base = darboux_chart();
    let eta = darboux_eta(&base);
    let (ext, s_name) = base.extend("s", (0.0, f64::INFINITY), "_symp");
    let s_idx = ext.index_of(&s_name).unwrap();
    let eta_l = eta.lift_to(ext.clone(), 0).unwrap();
    let mut ds = DifferentialForm::zero(ext.clone(), 1).unwrap();
    ds.add_term(vec![s_idx], Expr::one());
    let s = Expr::var(&s_name);
    let omega = wedge(&ds, &eta_l)
        .unwrap()
        .plus(&exterior_derivative(&eta_l).unwrap().scale(&s))
        .unwrap();

    // pointwise resolver forces the finite-difference branch
    let ext2 = ext.clone();
    let nabla = VectorField::pointwise(
        ext.clone(),
        Arc::new(move |p: &[f64]| {
            let mut v = vec![0.0; ext2.dim()];
            v[ext2.dim() - 1] = p[ext2.dim() - 1];
            Ok(v)
        }),
    );
    let l = lie_derivative(&nabla, &omega).unwrap();
    assert!(matches!(l, FormHandle::Pointwise(_)));
    let pts = ext.sample_n(50, 13);
    let res = max_coeff_residual(&l, &FormHandle::Symbolic(omega), &pts).unwrap();
    assert!(res < 1e-6, "L_nabla omega = omega residual {res}");
}

/// Cartan magic formula consistency: symbolic and finite-difference Lie
/// derivatives agree for symbolic fields.
#[test]
fn lie_derivative_symbolic_vs_fd() {
    let chart = darboux_chart();
    let vars = chart.coords().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let omega = random_form(&mut rng, &chart, 1, 2);
        let components: Vec<Expr> = (0..3).map(|_| random_expr(&mut rng, &vars, 2)).collect();
        let x_sym = VectorField::symbolic(chart.clone(), components.clone()).unwrap();
        let chart2 = chart.clone();
        let x_pw = VectorField::pointwise(
            chart.clone(),
            Arc::new(move |p: &[f64]| {
                let binding = chart2.binding(p);
                components.iter().map(|c| c.eval(&binding)).collect()
            }),
        );
        let a = lie_derivative(&x_sym, &omega).unwrap();
        let b = lie_derivative(&x_pw, &omega).unwrap();
        let pts = chart.sample_n(10, 2);
        let res = max_coeff_residual(&a, &b, &pts).unwrap();
        assert!(res < 1e-6, "symbolic vs fd Lie derivative residual {res}");
    }
}

#[test]
fn pullback_along_identity() {
    let chart = darboux_chart();
    let eta = darboux_eta(&chart);
    let id = SmoothMap::identity(chart.clone());
    let back = id.pullback(&eta).unwrap();
    let pts = chart.sample_n(10, 1);
    let res = max_coeff_residual(
        &FormHandle::Symbolic(back),
        &FormHandle::Symbolic(eta),
        &pts,
    )
    .unwrap();
    assert_eq!(res, 0.0);
}

#[test]
fn pullback_jacobian_factor() {
    // (q, p) = (u^2, v) pulls dq ^ dp back to 2u du ^ dv
    let target = Arc::new(Chart::euclidean("qp", &["q", "p"]));
    let source = Arc::new(Chart::euclidean("uv", &["u", "v"]));
    let vars = source.coords().to_vec();
    let map = SmoothMap::new(
        source.clone(),
        target.clone(),
        vec![parse("u^2", &vars).unwrap(), parse("v", &vars).unwrap()],
    )
    .unwrap();
    let mut dqdp = DifferentialForm::zero(target, 2).unwrap();
    dqdp.add_term(vec![0, 1], Expr::one());
    let pulled = map.pullback(&dqdp).unwrap();
    for p in source.sample_n(20, 8) {
        let got = pulled
            .eval_coeffs(&p)
            .unwrap()
            .get(&vec![0, 1])
            .copied()
            .unwrap_or(0.0);
        assert!((got - 2.0 * p[0]).abs() < 1e-13);
    }
}

/// Hopf reduction consistency: p* omega = d eta, comparing against the
/// independent exterior_derivative route.
#[test]
fn pullback_hopf_projection() {
    let total = hopf_chart();
    let base = hopf_base_chart();
    let vars = total.coords().to_vec();
    let proj = SmoothMap::new(
        total.clone(),
        base.clone(),
        vec![
            parse("phi", &vars).unwrap(),
            parse("xi2 - xi1", &vars).unwrap(),
        ],
    )
    .unwrap();
    let base_vars = base.coords().to_vec();
    let mut omega = DifferentialForm::zero(base, 2).unwrap();
    omega.add_term(vec![0, 1], parse("sin(2*phi)", &base_vars).unwrap());
    let pulled = proj.pullback(&omega).unwrap();
    let d_eta = exterior_derivative(&hopf_eta(&total)).unwrap();
    let pts = total.sample_n(100, 42);
    let res = max_coeff_residual(
        &FormHandle::Symbolic(pulled),
        &FormHandle::Symbolic(d_eta),
        &pts,
    )
    .unwrap();
    assert!(res < 1e-10, "p* omega vs d eta residual {res}");
}

#[test]
fn pullback_is_functorial() {
    // (psi . phi)* omega = phi*(psi* omega)
    let a = Arc::new(Chart::euclidean("a", &["u", "v"]));
    let b = Arc::new(Chart::euclidean("b", &["x", "y"]));
    let c = Arc::new(Chart::euclidean("c", &["r", "t"]));
    let av = a.coords().to_vec();
    let bv = b.coords().to_vec();
    let phi = SmoothMap::new(
        a.clone(),
        b.clone(),
        vec![
            parse("u*v", &av).unwrap(),
            parse("u - v^2", &av).unwrap(),
        ],
    )
    .unwrap();
    let psi = SmoothMap::new(
        b.clone(),
        c.clone(),
        vec![
            parse("sin(x) + y", &bv).unwrap(),
            parse("x*y", &bv).unwrap(),
        ],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let omega = random_form(&mut rng, &c, 2, 2);
    let composed = psi.compose(&phi).unwrap();
    let lhs = composed.pullback(&omega).unwrap();
    let rhs = phi.pullback(&psi.pullback(&omega).unwrap()).unwrap();
    let pts = a.sample_n(30, 44);
    let res = max_coeff_residual(&FormHandle::Symbolic(lhs), &FormHandle::Symbolic(rhs), &pts)
        .unwrap();
    assert!(res < 1e-10, "functoriality residual {res}");
}

#[test]
fn bracket_of_coordinate_fields_vanishes() {
    let chart = Arc::new(Chart::euclidean("r2", &["x", "y"]));
    let b = bracket(
        &VectorField::basis(chart.clone(), 0),
        &VectorField::basis(chart.clone(), 1),
    )
    .unwrap();
    for c in b.components().unwrap() {
        assert!(c.is_zero());
    }
}

#[test]
fn bracket_component_formula() {
    // [x d/dy, y d/dx] = x d/dx - y d/dy
    let chart = Arc::new(Chart::euclidean("r2", &["x", "y"]));
    let vars = chart.coords().to_vec();
    let x_field = VectorField::symbolic(
        chart.clone(),
        vec![Expr::zero(), parse("x", &vars).unwrap()],
    )
    .unwrap();
    let y_field = VectorField::symbolic(
        chart.clone(),
        vec![parse("y", &vars).unwrap(), Expr::zero()],
    )
    .unwrap();
    let b = bracket(&x_field, &y_field).unwrap();
    for p in chart.sample_n(10, 2) {
        let v = b.resolve(&p).unwrap();
        assert!((v[0] - p[0]).abs() < 1e-14);
        assert!((v[1] + p[1]).abs() < 1e-14);
    }
}

/// The Reeb field commutes with horizontal lifts on the Hopf chart; the lift
/// is built symbolically from the connection equations eta(X^h) = 0,
/// Tp(X^h) = X.
#[test]
fn bracket_reeb_with_horizontal_lift() {
    let total = hopf_chart();
    let vars = total.coords().to_vec();
    let reeb = VectorField::constant(total.clone(), &[1.0, 1.0, 0.0]).unwrap();
    // lift of X = a(phi,psi) d/dphi + b(phi,psi) d/dpsi:
    //   X^h = -sin^2(phi) b d/dxi1 + cos^2(phi) b d/dxi2 + a d/dphi
    // with psi = xi2 - xi1 substituted
    for (a_src, b_src) in [("1", "0"), ("0", "1"), ("sin(xi2 - xi1)", "cos(phi)")] {
        let a = parse(a_src, &vars).unwrap();
        let b = parse(b_src, &vars).unwrap();
        let lift = VectorField::symbolic(
            total.clone(),
            vec![
                Expr::neg(Expr::mul(
                    parse("sin(phi)^2", &vars).unwrap(),
                    b.clone(),
                )),
                Expr::mul(parse("cos(phi)^2", &vars).unwrap(), b.clone()),
                a.clone(),
            ],
        )
        .unwrap();
        // sanity: the lift is horizontal
        let contracted = interior_product(&lift, &hopf_eta(&total)).unwrap();
        let pts = total.sample_n(30, 12);
        assert!(max_coeff_abs(&contracted, &pts).unwrap() < 1e-12);
        let commutator = bracket(&reeb, &lift).unwrap();
        for p in &pts {
            for v in commutator.resolve(p).unwrap() {
                assert!(v.abs() < 1e-10, "[R, X^h] component {v}");
            }
        }
    }
}

#[test]
fn bracket_rejects_pointwise_fields() {
    let chart = darboux_chart();
    let pw = VectorField::pointwise(chart.clone(), Arc::new(|p: &[f64]| Ok(p.to_vec())));
    let sym = VectorField::basis(chart, 0);
    assert!(matches!(
        bracket(&pw, &sym),
        Err(crate::Error::PointwiseUnsupported)
    ));
}

#[test]
fn surface_integral_unit_square() {
    let plane = Arc::new(Chart::euclidean("r2", &["x", "y"]));
    let params = Arc::new(
        Chart::new(
            "square",
            vec!["u".into(), "v".into()],
            vec![(0.0, 1.0), (0.0, 1.0)],
            vec![false, false],
            0.0,
        )
        .unwrap(),
    );
    let pv = params.coords().to_vec();
    let map = SmoothMap::new(
        params,
        plane.clone(),
        vec![parse("u", &pv).unwrap(), parse("v", &pv).unwrap()],
    )
    .unwrap();
    let surface = ParametrizedSurface::new(map, [false, false], None).unwrap();
    let mut dxdy = DifferentialForm::zero(plane, 2).unwrap();
    dxdy.add_term(vec![0, 1], Expr::one());
    let integral = surface_integral(&dxdy, &surface, (8, 8)).unwrap();
    assert!((integral - 1.0).abs() < 1e-14);
}

/// Closed-form oracle: integral of sin(2 phi) over (0, pi/2) x (0, 2 pi) via
/// the antiderivative -cos(2 phi)/2 equals 2 pi.
#[test]
fn surface_integral_hopf_base() {
    let base = hopf_base_chart();
    let params = Arc::new(
        Chart::new(
            "sigma",
            vec!["u".into(), "v".into()],
            vec![(0.0, FRAC_PI_2), (0.0, TAU)],
            vec![false, true],
            0.0,
        )
        .unwrap(),
    );
    let pv = params.coords().to_vec();
    let map = SmoothMap::new(
        params,
        base.clone(),
        vec![parse("u", &pv).unwrap(), parse("v", &pv).unwrap()],
    )
    .unwrap();
    let surface = ParametrizedSurface::new(map, [false, true], Some(true)).unwrap();
    assert!(surface.is_closed());
    let base_vars = base.coords().to_vec();
    let mut omega = DifferentialForm::zero(base, 2).unwrap();
    omega.add_term(vec![0, 1], parse("sin(2*phi)", &base_vars).unwrap());
    let integral = surface_integral(&omega, &surface, (64, 64)).unwrap();
    assert!((integral - TAU).abs() < 1e-6, "got {integral}, want {TAU}");
}

/// Stokes on a closed surface: the integral of an exact form vanishes.
#[test]
fn surface_integral_of_exact_form_over_torus() {
    let torus = Arc::new(
        Chart::new(
            "t2",
            vec!["x".into(), "y".into()],
            vec![(0.0, TAU), (0.0, TAU)],
            vec![true, true],
            0.0,
        )
        .unwrap(),
    );
    let vars = torus.coords().to_vec();
    let alpha = DifferentialForm::one_form(
        torus.clone(),
        vec![
            parse("cos(x)*sin(y)", &vars).unwrap(),
            parse("sin(x + y)", &vars).unwrap(),
        ],
    )
    .unwrap();
    let d_alpha = exterior_derivative(&alpha).unwrap();
    let map = SmoothMap::identity(torus);
    let surface = ParametrizedSurface::new(map, [true, true], None).unwrap();
    assert!(surface.is_closed());
    let integral = surface_integral(&d_alpha, &surface, (64, 64)).unwrap();
    assert!(integral.abs() < 1e-8, "exact form integrated to {integral}");
}

#[test]
fn surface_integral_rejects_coarse_grids() {
    let plane = Arc::new(Chart::euclidean("r2", &["x", "y"]));
    let params = Arc::new(
        Chart::new(
            "square",
            vec!["u".into(), "v".into()],
            vec![(0.0, 1.0), (0.0, 1.0)],
            vec![false, false],
            0.0,
        )
        .unwrap(),
    );
    let pv = params.coords().to_vec();
    let map = SmoothMap::new(
        params,
        plane.clone(),
        vec![parse("u", &pv).unwrap(), parse("v", &pv).unwrap()],
    )
    .unwrap();
    let surface = ParametrizedSurface::new(map, [false, false], None).unwrap();
    let mut dxdy = DifferentialForm::zero(plane, 2).unwrap();
    dxdy.add_term(vec![0, 1], Expr::one());
    assert!(matches!(
        surface_integral(&dxdy, &surface, (4, 8)),
        Err(crate::Error::GridTooCoarse(..))
    ));
}

#[test]
fn gauss_legendre_degree_exactness() {
    // n-point rule integrates polynomials up to degree 2n-1 exactly
    let (nodes, weights) = gauss_legendre(5);
    for degree in 0..10 {
        let got: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(degree))
            .sum();
        let want = if degree % 2 == 0 {
            2.0 / (degree as f64 + 1.0)
        } else {
            0.0
        };
        assert!((got - want).abs() < 1e-13, "degree {degree}: {got} vs {want}");
    }
}
