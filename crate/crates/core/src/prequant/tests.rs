use super::*;
use crate::contact::contact_to_symplectic;
use crate::dynamics::flow;
use crate::expr::parse;
use crate::rational::Rational;

const SAMPLES: usize = 30;
const SEED: u64 = 42;

/// Circle-bundle Darboux data: eta = dt - p dq on (q, p, t) with the fiber
/// t periodic of length rho = 1.
fn circle_data() -> PrincipalContactData {
    let chart = Arc::new(
        Chart::new(
            "prequant_darboux",
            vec!["q".into(), "p".into(), "t".into()],
            vec![
                (f64::NEG_INFINITY, f64::INFINITY),
                (f64::NEG_INFINITY, f64::INFINITY),
                (0.0, 1.0),
            ],
            vec![false, false, true],
            1e-3,
        )
        .unwrap(),
    );
    let eta = DifferentialForm::one_form(
        chart,
        vec![Expr::neg(Expr::var("p")), Expr::zero(), Expr::one()],
    )
    .unwrap();
    let contact = ContactChart::new(eta, SAMPLES, SEED).unwrap();
    PrincipalContactData::new(
        contact,
        "t",
        Period::finite(Rational::one()).unwrap(),
        SAMPLES,
        SEED,
    )
    .unwrap()
}

/// The R-case: same connection, fiber t in R, infinite period.
fn line_data() -> PrincipalContactData {
    let chart = Arc::new(Chart::euclidean("prequant_line", &["q", "p", "t"]));
    let eta = DifferentialForm::one_form(
        chart,
        vec![Expr::neg(Expr::var("p")), Expr::zero(), Expr::one()],
    )
    .unwrap();
    let contact = ContactChart::new(eta, SAMPLES, SEED).unwrap();
    PrincipalContactData::new(contact, "t", Period::Infinite, SAMPLES, SEED).unwrap()
}

fn gaussian_profile() -> impl Fn(&[f64]) -> Complex64 + Send + Sync {
    |x: &[f64]| {
        let r2 = x[0] * x[0] + x[1] * x[1];
        Complex64::new((-r2 / 2.0).exp() * (1.0 + 0.3 * x[0]), 0.3 * x[1] * (-r2 / 2.0).exp())
    }
}

#[test]
fn normal_form_is_validated() {
    let chart = Arc::new(Chart::euclidean("bad", &["q", "p", "t"]));
    // dt coefficient 2
    let eta = DifferentialForm::one_form(
        chart.clone(),
        vec![Expr::neg(Expr::var("p")), Expr::zero(), Expr::constant(2.0)],
    )
    .unwrap();
    let contact = ContactChart::new(eta, SAMPLES, SEED).unwrap();
    assert!(matches!(
        PrincipalContactData::new(contact, "t", Period::Infinite, SAMPLES, SEED),
        Err(Error::NotNormalForm(_))
    ));
    // connection coefficient depending on the fiber
    let vars = chart.coords().to_vec();
    let eta = DifferentialForm::one_form(
        chart,
        vec![
            parse("-p*(1 + t)", &vars).unwrap(),
            Expr::zero(),
            Expr::one(),
        ],
    )
    .unwrap();
    if let Ok(contact) = ContactChart::new(eta, SAMPLES, SEED) {
        assert!(matches!(
            PrincipalContactData::new(contact, "t", Period::Infinite, SAMPLES, SEED),
            Err(Error::NotNormalForm(_))
        ));
    }
}

#[test]
fn curvature_form_is_dq_dp() {
    let pcd = circle_data();
    let omega = pcd.omega();
    assert_eq!(omega.coeff(&[0, 1]).as_const(), Some(1.0));
}

#[test]
fn hamiltonian_field_solves_the_defining_equation() {
    let pcd = circle_data();
    let base = pcd.base_chart().clone();
    let vars = base.coords().to_vec();
    // i_{X_H}(dq ^ dp) = dp forces X_H = d/dq
    let x_h = hamiltonian_field(&parse("p", &vars).unwrap(), &pcd.omega()).unwrap();
    for u in base.sample_n(20, 3) {
        let v = x_h.resolve(&u).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
    }
    // constant Hamiltonians generate nothing
    let zero = hamiltonian_field(&Expr::constant(4.0), &pcd.omega()).unwrap();
    for u in base.sample_n(10, 4) {
        assert!(zero.resolve(&u).unwrap().iter().all(|v| v.abs() < 1e-14));
    }
}

#[test]
fn hamiltonian_flow_conserves_energy() {
    let pcd = circle_data();
    let vars = pcd.base_chart().coords().to_vec();
    let h = parse("(q^2 + p^2)/2 + q*p/3", &vars).unwrap();
    let x_h = hamiltonian_field(&h, &pcd.omega()).unwrap();
    let u0 = [0.8, -0.3];
    let h0 = h.eval(&pcd.base_chart().binding(&u0)).unwrap();
    for t in [0.5, 1.5, 3.0] {
        let u = flow(&x_h, &u0, t, 1e-3, None).unwrap().point;
        let ht = h.eval(&pcd.base_chart().binding(&u)).unwrap();
        assert!((ht - h0).abs() < 1e-8, "energy drift {}", (ht - h0).abs());
    }
}

#[test]
fn horizontal_lift_components() {
    let pcd = circle_data();
    let base = pcd.base_chart().clone();
    // lift of d/dq picks up +p d/dt (h(d/dq) = -p)
    let lift_q = horizontal_lift(&VectorField::basis(base.clone(), 0), &pcd, SAMPLES, SEED)
        .unwrap();
    let comps = lift_q.components().unwrap();
    assert_eq!(comps[0].as_const(), Some(1.0));
    assert!(comps[1].is_zero());
    for y in pcd.chart().sample_n(10, 5) {
        let v = lift_q.resolve(&y).unwrap();
        assert!((v[2] - y[1]).abs() < 1e-14, "vertical part should be +p");
    }
    // the connection vanishes on d/dp, so the lift is the field itself
    let lift_p = horizontal_lift(&VectorField::basis(base, 1), &pcd, SAMPLES, SEED).unwrap();
    let comps = lift_p.components().unwrap();
    assert!(comps[0].is_zero());
    assert_eq!(comps[1].as_const(), Some(1.0));
    assert!(comps[2].is_zero());
}

#[test]
fn reeb_commutes_with_horizontal_lifts() {
    let pcd = circle_data();
    let vars = pcd.base_chart().coords().to_vec();
    let x = VectorField::symbolic(
        pcd.base_chart().clone(),
        vec![
            parse("sin(p) + q", &vars).unwrap(),
            parse("q*p", &vars).unwrap(),
        ],
    )
    .unwrap();
    let lift = horizontal_lift(&x, &pcd, SAMPLES, SEED).unwrap();
    let reeb = VectorField::basis(pcd.chart().clone(), pcd.fiber_index());
    let commutator = crate::calculus::bracket(&reeb, &lift).unwrap();
    for y in pcd.chart().sample_n(20, 6) {
        for v in commutator.resolve(&y).unwrap() {
            assert!(v.abs() < 1e-12);
        }
    }
}

#[test]
fn covariant_derivative_of_flat_directions() {
    let pcd = circle_data();
    // the base-constant section is flat along d/dp (the connection has no
    // dp component)
    let f = EquivariantFunction::from_base_profile(&pcd, |_| Complex64::new(1.0, 0.0));
    let d = covariant_derivative(
        &VectorField::basis(pcd.base_chart().clone(), 1),
        &f,
        &pcd,
        SAMPLES,
        SEED,
    )
    .unwrap();
    for y in pcd.chart().sample_n(20, 7) {
        assert!(d.eval(&y).norm() < 1e-10);
    }
}

#[test]
fn covariant_derivative_rejects_non_equivariant_input() {
    let pcd = circle_data();
    let chart = pcd.chart().clone();
    let broken = EquivariantFunction::new(
        chart.clone(),
        pcd.period(),
        Arc::new(move |y: &[f64]| Complex64::new(y[2], 0.0)),
    );
    assert!(matches!(
        covariant_derivative(
            &VectorField::basis(pcd.base_chart().clone(), 0),
            &broken,
            &pcd,
            SAMPLES,
            SEED
        ),
        Err(Error::EquivarianceViolation { .. })
    ));
}

#[test]
fn covariant_derivative_is_a_derivation_over_base_functions() {
    let pcd = circle_data();
    let f = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let vars = pcd.base_chart().coords().to_vec();
    let g = parse("1 + q^2/4 + sin(p)/3", &vars).unwrap();
    let base = pcd.base_chart().clone();
    let data = pcd.clone();
    let g2 = g.clone();
    let f2 = f.clone();
    let gf = EquivariantFunction::new(
        pcd.chart().clone(),
        pcd.period(),
        Arc::new(move |y: &[f64]| {
            let u = data.project_point(y);
            let gv = g2.eval(&base.binding(&u)).unwrap();
            gv * f2.eval(y)
        }),
    );
    let vars2 = pcd.base_chart().coords().to_vec();
    let x = VectorField::symbolic(
        pcd.base_chart().clone(),
        vec![
            parse("1 + p/5", &vars2).unwrap(),
            parse("q/3", &vars2).unwrap(),
        ],
    )
    .unwrap();
    let d_gf = covariant_derivative(&x, &gf, &pcd, SAMPLES, SEED).unwrap();
    let d_f = covariant_derivative(&x, &f, &pcd, SAMPLES, SEED).unwrap();
    for y in pcd.chart().sample_n(25, 8) {
        let u = pcd.project_point(&y);
        let binding = pcd.base_chart().binding(&u);
        let gv = g.eval(&binding).unwrap();
        let xg = x.derive(&g, &u).unwrap();
        let lhs = d_gf.eval(&y);
        let rhs = xg * f.eval(&y) + gv * d_f.eval(&y);
        assert!((lhs - rhs).norm() < 1e-6, "Leibniz residual {}", (lhs - rhs).norm());
    }
}

/// Equivariance preservation: D_X keeps the tested-equivariant class.
#[test]
fn covariant_derivative_preserves_equivariance() {
    let pcd = circle_data();
    let f = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let vars = pcd.base_chart().coords().to_vec();
    let x = VectorField::symbolic(
        pcd.base_chart().clone(),
        vec![
            parse("q - p/2", &vars).unwrap(),
            parse("1 + q*p/4", &vars).unwrap(),
        ],
    )
    .unwrap();
    let d = covariant_derivative(&x, &f, &pcd, SAMPLES, SEED).unwrap();
    let residual = d.equivariance_residual(&pcd, 50, SEED).unwrap();
    assert!(residual < OUTPUT_EQUIVARIANCE_TOL, "residual {residual}");
}

/// Calibration run: the frozen curvature sign is the one the Darboux data
/// singles out, and with it the commutator matches
/// CURVATURE_SIGN * (-2 pi i / rho) omega(X, Y) F globally.
#[test]
fn curvature_sign_calibration() {
    let pcd = circle_data();
    let f = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let x = VectorField::basis(pcd.base_chart().clone(), 0);
    let y = VectorField::basis(pcd.base_chart().clone(), 1);
    let (sign, best, other) = calibrate_curvature_sign(&x, &y, &f, &pcd, 15, SEED).unwrap();
    assert_eq!(sign, CURVATURE_SIGN, "calibrated sign flipped");
    assert!(best < 1e-4, "calibrated residual {best}");
    assert!(other > 1e-2, "wrong sign should be visibly off, got {other}");
}

#[test]
fn curvature_matches_for_general_fields() {
    let pcd = circle_data();
    let f = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let omega = pcd.omega();
    let vars = pcd.base_chart().coords().to_vec();
    let pairs = [
        ("1", "0", "0", "1"),
        ("1 + p/4", "q/5", "p/3", "1 - q/6"),
    ];
    for (a, b, c, d) in pairs {
        let x = VectorField::symbolic(
            pcd.base_chart().clone(),
            vec![parse(a, &vars).unwrap(), parse(b, &vars).unwrap()],
        )
        .unwrap();
        let y = VectorField::symbolic(
            pcd.base_chart().clone(),
            vec![parse(c, &vars).unwrap(), parse(d, &vars).unwrap()],
        )
        .unwrap();
        let residual =
            curvature_residual(&x, &y, &f, &pcd, &omega, CURVATURE_SIGN, 15, SEED).unwrap();
        assert!(residual < 1e-4, "curvature residual {residual}");
    }
}

/// The curvature measured by the commutator and the symplectic form produced
/// by contact_to_symplectic on the same data agree.
#[test]
fn curvature_matches_reduced_symplectic_form() {
    let pcd = circle_data();
    let (omega_reduced, _) = contact_to_symplectic(
        pcd.contact(),
        &pcd.projection(),
        &pcd.section(0.25),
        SAMPLES,
        SEED,
    )
    .unwrap();
    let f = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let x = VectorField::basis(pcd.base_chart().clone(), 0);
    let y = VectorField::basis(pcd.base_chart().clone(), 1);
    let residual =
        curvature_residual(&x, &y, &f, &pcd, &omega_reduced, CURVATURE_SIGN, 15, SEED).unwrap();
    assert!(residual < 1e-4, "residual {residual}");
}

#[test]
fn prequantum_operator_of_a_constant_is_scalar_multiplication() {
    let pcd = circle_data();
    let psi = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let result = prequantum_op(&Expr::constant(2.5), &psi, &pcd, None, SAMPLES, SEED).unwrap();
    for y in pcd.chart().sample_n(20, 9) {
        let got = result.output.eval(&y);
        let want = 2.5 * psi.eval(&y);
        assert!((got - want).norm() < 1e-12);
    }
    assert!(result.equivariance_residual < OUTPUT_EQUIVARIANCE_TOL);
}

#[test]
fn prequantum_operator_is_linear() {
    let pcd = circle_data();
    let psi1 = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let psi2 = EquivariantFunction::from_base_profile(&pcd, |x: &[f64]| {
        Complex64::new(x[1], -x[0]) * (-(x[0] * x[0] + x[1] * x[1]) / 4.0).exp()
    });
    let a = Complex64::new(1.3, -0.4);
    let b = Complex64::new(-0.2, 0.9);
    let combo = EquivariantFunction::combine(a, &psi1, b, &psi2).unwrap();
    let vars = pcd.base_chart().coords().to_vec();
    let h = parse("q + p^2/2", &vars).unwrap();
    let lhs = prequantum_op(&h, &combo, &pcd, None, SAMPLES, SEED).unwrap().output;
    let r1 = prequantum_op(&h, &psi1, &pcd, None, SAMPLES, SEED).unwrap().output;
    let r2 = prequantum_op(&h, &psi2, &pcd, None, SAMPLES, SEED).unwrap().output;
    for y in pcd.chart().sample_n(20, 10) {
        let want = a * r1.eval(&y) + b * r2.eval(&y);
        assert!((lhs.eval(&y) - want).norm() < 1e-10);
    }
}

/// Calibration plus five further pairs for the Dirac relation
/// [H_f, H_g] = DIRAC_SIGN i hbar H_{{f,g}}.
#[test]
fn dirac_relation_holds_with_the_calibrated_sign() {
    let pcd = circle_data();
    let psi = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let vars = pcd.base_chart().coords().to_vec();
    let e = |s: &str| parse(s, &vars).unwrap();

    // calibration pair (q, p)
    let good = dirac_residual(&e("q"), &e("p"), &psi, &pcd, DIRAC_SIGN, 15, SEED).unwrap();
    let bad = dirac_residual(&e("q"), &e("p"), &psi, &pcd, -DIRAC_SIGN, 15, SEED).unwrap();
    assert!(good < 1e-3, "calibrated Dirac residual {good}");
    assert!(bad > 1e-2, "wrong sign should fail, got {bad}");

    for (f, g) in [
        ("q", "q*p"),
        ("p", "q^2/2"),
        ("q + p", "q*p/2"),
        ("q^2/2", "p^2/2"),
        ("q*p", "q + 2*p"),
    ] {
        let residual = dirac_residual(&e(f), &e(g), &psi, &pcd, DIRAC_SIGN, 12, SEED).unwrap();
        assert!(residual < 1e-3, "Dirac residual {residual} for ({f}, {g})");
    }
}

#[test]
fn r_case_operator_with_caller_supplied_hbar() {
    let pcd = line_data();
    // infinite period: sections are fiber-invariant functions of the base
    let psi = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let vars = pcd.base_chart().coords().to_vec();
    let h = parse("p", &vars).unwrap();
    assert!(matches!(
        prequantum_op(&h, &psi, &pcd, None, SAMPLES, SEED),
        Err(Error::PeriodUndefined(_))
    ));
    let hbar = 0.7;
    let result = prequantum_op(&h, &psi, &pcd, Some(hbar), SAMPLES, SEED).unwrap();
    // D_X psi = X(psi) here, and X_p = d/dq: compare against a central
    // difference of the profile alone
    for y in pcd.chart().sample_n(15, 11) {
        let mut plus = y.clone();
        plus[0] += 1e-5;
        let mut minus = y.clone();
        minus[0] -= 1e-5;
        let dq = (psi.eval(&plus) - psi.eval(&minus)) / Complex64::new(2e-5, 0.0);
        let want = Complex64::new(0.0, -hbar) * dq + y[1] * psi.eval(&y);
        let got = result.output.eval(&y);
        assert!((got - want).norm() < 1e-6);
    }
}

#[test]
fn hermitian_pairing_properties() {
    let pcd = circle_data();
    let f = EquivariantFunction::from_base_profile(&pcd, gaussian_profile());
    let g = EquivariantFunction::from_base_profile(&pcd, |x: &[f64]| {
        Complex64::new(x[0], x[1]) * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp()
    });
    let rect = [(-4.0, 4.0), (-4.0, 4.0)];
    let ff = hermitian_pairing(&f, &f, &pcd, &rect, 48).unwrap();
    assert!(ff.re > 0.0);
    assert!(ff.im.abs() < 1e-10);
    let fg = hermitian_pairing(&f, &g, &pcd, &rect, 48).unwrap();
    let gf = hermitian_pairing(&g, &f, &pcd, &rect, 48).unwrap();
    assert!((fg - gf.conj()).norm() < 1e-12);
    // phase invariance: <e^{i theta} F, G> = e^{i theta} <F, G>
    let theta = 0.83;
    let rotated = EquivariantFunction::combine(
        Complex64::from_polar(1.0, theta),
        &f,
        Complex64::new(0.0, 0.0),
        &f,
    )
    .unwrap();
    let rfg = hermitian_pairing(&rotated, &g, &pcd, &rect, 48).unwrap();
    assert!((rfg - Complex64::from_polar(1.0, theta) * fg).norm() < 1e-12);
}

/// Formal symmetry of the prequantum operator on sections vanishing to high
/// order at the quadrature boundary.
#[test]
fn operator_is_formally_symmetric() {
    let pcd = circle_data();
    let bump = |x: &[f64]| -> f64 {
        let b = |v: f64| {
            let s = 1.0 - (v / 3.0) * (v / 3.0);
            if s > 0.0 {
                s * s * s * s
            } else {
                0.0
            }
        };
        b(x[0]) * b(x[1])
    };
    let psi = EquivariantFunction::from_base_profile(&pcd, move |x: &[f64]| {
        Complex64::new(bump(x), 0.2 * x[0] * bump(x))
    });
    let bump2 = |x: &[f64]| -> f64 {
        let b = |v: f64| {
            let s = 1.0 - (v / 3.0) * (v / 3.0);
            if s > 0.0 {
                s * s * s * s
            } else {
                0.0
            }
        };
        b(x[0]) * b(x[1])
    };
    let phi = EquivariantFunction::from_base_profile(&pcd, move |x: &[f64]| {
        Complex64::new(0.5 * x[1] * bump2(x), bump2(x))
    });
    let vars = pcd.base_chart().coords().to_vec();
    let h = parse("q^2/2 + p^2/2", &vars).unwrap();
    let h_psi = prequantum_op(&h, &psi, &pcd, None, SAMPLES, SEED).unwrap().output;
    let h_phi = prequantum_op(&h, &phi, &pcd, None, SAMPLES, SEED).unwrap().output;
    let rect = [(-3.0, 3.0), (-3.0, 3.0)];
    let lhs = hermitian_pairing(&h_psi, &phi, &pcd, &rect, 48).unwrap();
    let rhs = hermitian_pairing(&psi, &h_phi, &pcd, &rect, 48).unwrap();
    assert!(
        (lhs - rhs).norm() < 1e-4,
        "symmetry defect {}",
        (lhs - rhs).norm()
    );
}

fn second_circle_data() -> PrincipalContactData {
    let chart = Arc::new(
        Chart::new(
            "prequant_darboux2",
            vec!["x".into(), "y".into(), "s".into()],
            vec![
                (f64::NEG_INFINITY, f64::INFINITY),
                (f64::NEG_INFINITY, f64::INFINITY),
                (0.0, 1.0),
            ],
            vec![false, false, true],
            1e-3,
        )
        .unwrap(),
    );
    let eta = DifferentialForm::one_form(
        chart,
        vec![Expr::neg(Expr::var("y")), Expr::zero(), Expr::one()],
    )
    .unwrap();
    let contact = ContactChart::new(eta, SAMPLES, SEED).unwrap();
    PrincipalContactData::new(
        contact,
        "s",
        Period::finite(Rational::one()).unwrap(),
        SAMPLES,
        SEED,
    )
    .unwrap()
}

#[test]
fn tensor_sections_factor_through_the_quotient() {
    let pcd1 = circle_data();
    let pcd2 = second_circle_data();
    let f1 = EquivariantFunction::from_base_profile(&pcd1, gaussian_profile());
    let f2 = EquivariantFunction::from_base_profile(&pcd2, |x: &[f64]| {
        Complex64::new(1.0, 0.4 * x[0]) * (-(x[0] * x[0] + x[1] * x[1]) / 3.0).exp()
    });
    let t = tensor_section(&f1, &pcd1, &f2, &pcd2, SAMPLES, SEED).unwrap();
    // constant along R_1 - R_2
    let anti = t.anti_diagonal_residual(&pcd1, &pcd2, 50, SEED).unwrap();
    assert!(anti < 1e-6, "anti-diagonal residual {anti}");
    // equivariant along the diagonal with the common period
    let diag = t.diagonal_residual(&pcd1, &pcd2, 50, SEED).unwrap();
    assert!(diag < 1e-8, "diagonal residual {diag}");
}

#[test]
fn tensor_sections_need_matching_periods() {
    let pcd1 = circle_data();
    let chart = Arc::new(
        Chart::new(
            "prequant_darboux3",
            vec!["x".into(), "y".into(), "s".into()],
            vec![
                (f64::NEG_INFINITY, f64::INFINITY),
                (f64::NEG_INFINITY, f64::INFINITY),
                (0.0, 2.0),
            ],
            vec![false, false, true],
            1e-3,
        )
        .unwrap(),
    );
    let eta = DifferentialForm::one_form(
        chart,
        vec![Expr::neg(Expr::var("y")), Expr::zero(), Expr::one()],
    )
    .unwrap();
    let contact = ContactChart::new(eta, SAMPLES, SEED).unwrap();
    let pcd2 = PrincipalContactData::new(
        contact,
        "s",
        Period::finite(Rational::integer(2)).unwrap(),
        SAMPLES,
        SEED,
    )
    .unwrap();
    let f1 = EquivariantFunction::from_base_profile(&pcd1, gaussian_profile());
    let f2 = EquivariantFunction::from_base_profile(&pcd2, gaussian_profile());
    assert!(matches!(
        tensor_section(&f1, &pcd1, &f2, &pcd2, SAMPLES, SEED),
        Err(Error::PeriodMismatch)
    ));
}

/// Theorem-level check: the product Hermitian metric factorizes,
/// <F1 (x) F2, G1 (x) G2> = <F1, G1> <F2, G2>.
#[test]
fn tensor_pairing_factorizes() {
    let pcd1 = circle_data();
    let pcd2 = second_circle_data();
    let f1 = EquivariantFunction::from_base_profile(&pcd1, gaussian_profile());
    let g1 = EquivariantFunction::from_base_profile(&pcd1, |x: &[f64]| {
        Complex64::new(x[1], 1.0) * (-(x[0] * x[0] + x[1] * x[1]) / 2.5).exp()
    });
    let f2 = EquivariantFunction::from_base_profile(&pcd2, |x: &[f64]| {
        Complex64::new(1.0, 0.4 * x[0]) * (-(x[0] * x[0] + x[1] * x[1]) / 3.0).exp()
    });
    let g2 = EquivariantFunction::from_base_profile(&pcd2, |x: &[f64]| {
        Complex64::new(0.7, -x[1]) * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp()
    });
    let t_fg = tensor_section(&f1, &pcd1, &f2, &pcd2, SAMPLES, SEED).unwrap();
    let t_gh = tensor_section(&g1, &pcd1, &g2, &pcd2, SAMPLES, SEED).unwrap();
    let rect1 = [(-4.0, 4.0), (-4.0, 4.0)];
    let rect2 = [(-4.0, 4.0), (-4.0, 4.0)];
    let joint = tensor_pairing(&t_fg, &t_gh, &pcd1, &pcd2, &rect1, &rect2, 24).unwrap();
    let p1 = hermitian_pairing(&f1, &g1, &pcd1, &rect1, 24).unwrap();
    let p2 = hermitian_pairing(&f2, &g2, &pcd2, &rect2, 24).unwrap();
    assert!(
        (joint - p1 * p2).norm() < 1e-6,
        "factorization defect {}",
        (joint - p1 * p2).norm()
    );
}
