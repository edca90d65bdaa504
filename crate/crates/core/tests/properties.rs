//! Property tests for the invariants each module promises.

use covq::dims::{DimScalar, Dimension};
use covq::einstein::{e_special_bracket, e_special_bracket_definitional, EPhasePoint, ESpecialFunction, EinsteinModel};
use covq::galilei::{special_bracket, special_bracket_definitional, GPhasePoint, GSpecialFunction, GalileiModel};
use covq::harness::{emit_report, run_suite_on, LoadedModel, ReportFormat, RunConfig};
use covq::modelspec::parse_expr;
use covq::quantum::{
    classify_h, classify_j, hermitian_bracket, pair_bracket, GaugeConnection, HermitianField, SpacetimePair,
};
use covq::smooth::{
    exterior_derivative, for_each_increasing, lie_bracket, lie_derivative_form, lie_derivative_form_direct, Field,
    PForm, VectorField,
};
use proptest::prelude::*;

const MONOMIALS: usize = 15;

/// Quadratic polynomial on R^4 from its 15 coefficients.
fn quadratic(coeffs: &[f64]) -> Field {
    let x: Vec<Field> = (0..4).map(Field::var).collect();
    let mut terms = vec![Field::constant(coeffs[0])];
    let mut k = 1;
    for i in 0..4 {
        terms.push(&x[i] * coeffs[k]);
        k += 1;
    }
    for i in 0..4 {
        for j in i..4 {
            terms.push(&x[i] * &x[j] * coeffs[k]);
            k += 1;
        }
    }
    Field::sum(terms)
}

fn poly() -> impl Strategy<Value = Field> {
    prop::collection::vec(-1.0..1.0f64, MONOMIALS).prop_map(|c| quadratic(&c))
}

fn vector_field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(), 4).prop_map(VectorField::new)
}

fn point() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0..1.0f64)
}

fn one_form() -> impl Strategy<Value = PForm> {
    prop::collection::vec(poly(), 4).prop_map(PForm::one_form)
}

fn two_form() -> impl Strategy<Value = PForm> {
    prop::collection::vec(poly(), 6).prop_map(|cs| {
        let mut w = PForm::zero(4, 2);
        let mut k = 0;
        for_each_increasing(4, 2, &mut |idx| {
            w.set(idx, cs[k].clone());
            k += 1;
        });
        w
    })
}

fn form_gap(a: &PForm, b: &PForm, p: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for_each_increasing(a.dim(), a.degree(), &mut |idx| {
        let d = a.get(idx).value(p).unwrap() - b.get(idx).value(p).unwrap();
        worst = worst.max(d.abs());
    });
    worst
}

fn vector_gap(a: &VectorField, b: &VectorField, p: &[f64]) -> f64 {
    a.comps.iter().zip(&b.comps).map(|(x, y)| (x.value(p).unwrap() - y.value(p).unwrap()).abs()).fold(0.0, f64::max)
}

fn dimension() -> impl Strategy<Value = Dimension> {
    let exp = || (-6..=6i32, 1..=4i32);
    (exp(), exp(), exp()).prop_map(|(t, l, m)| Dimension::new(t, l, m))
}

proptest! {
    #[test]
    fn dimension_products_associate(a in dimension(), b in dimension(), c in dimension()) {
        let (a, b, c) = (DimScalar::new(1.0, a), DimScalar::new(1.0, b), DimScalar::new(1.0, c));
        let left = a.checked_mul(b).unwrap().checked_mul(c).unwrap();
        let right = a.checked_mul(b.checked_mul(c).unwrap()).unwrap();
        prop_assert_eq!(left.dim, right.dim);
    }

    #[test]
    fn dimensions_form_a_group(a in dimension(), b in dimension()) {
        prop_assert!(a.checked_mul(a.inv()).unwrap().is_none());
        prop_assert_eq!(a.checked_mul(b).unwrap(), b.checked_mul(a).unwrap());
        prop_assert_eq!(a.checked_div(b).unwrap().checked_mul(b).unwrap(), a);
    }

    #[test]
    fn sums_need_equal_dimensions(a in dimension(), b in dimension()) {
        let sum = DimScalar::new(1.0, a).checked_add(DimScalar::new(2.0, b));
        prop_assert_eq!(sum.is_ok(), a == b);
    }
}

#[test]
fn rescaled_metric_has_time_dimension() {
    let scale = Dimension::mass().checked_div(Dimension::action()).unwrap();
    let metric = Dimension::length().powi(2).unwrap();
    assert_eq!(scale.checked_mul(metric).unwrap(), Dimension::time());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exterior_derivative_squares_to_zero(f in poly(), a in one_form(), w in two_form(), p in point()) {
        for form in [PForm::scalar(4, f), a, w] {
            let dd = exterior_derivative(&exterior_derivative(&form).unwrap()).unwrap();
            prop_assert!(dd.max_abs_at(&p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn lie_bracket_satisfies_jacobi(x in vector_field(), y in vector_field(), z in vector_field(), p in point()) {
        let br = |a: &VectorField, b: &VectorField| lie_bracket(a, b).unwrap();
        let parts = [br(&x, &br(&y, &z)), br(&y, &br(&z, &x)), br(&z, &br(&x, &y))];
        for l in 0..4 {
            let total: f64 = parts.iter().map(|v| v.comps[l].value(&p).unwrap()).sum();
            prop_assert!(total.abs() < 1e-9, "component {} = {}", l, total);
        }
    }

    #[test]
    fn cartan_formula_matches_coordinates(x in vector_field(), a in one_form(), w in two_form(), p in point()) {
        for form in [a, w] {
            let cartan = lie_derivative_form(&x, &form).unwrap();
            let direct = lie_derivative_form_direct(&x, &form);
            prop_assert!(form_gap(&cartan, &direct, &p) < 1e-9);
        }
    }

    #[test]
    fn jet_gradient_matches_central_differences(f in poly(), p in point()) {
        let g = (&f * &f).sin() + f.clone();
        let jet = g.jet(&p).unwrap();
        for i in 0..4 {
            let h = 1e-5;
            let (mut lo, mut hi) = (p, p);
            lo[i] -= h;
            hi[i] += h;
            let fd = (g.value(&hi).unwrap() - g.value(&lo).unwrap()) / (2.0 * h);
            prop_assert!((jet.grad[i] - fd).abs() <= 1e-6 * (1.0 + fd.abs()), "{} vs {}", jet.grad[i], fd);
        }
    }
}

fn expr_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0..4usize).prop_map(|i| format!("x{i}")),
        (1..50u32).prop_map(|n| format!("{}", f64::from(n) / 8.0)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]))
                .prop_map(|(a, b, op)| format!("({a}) {op} ({b})")),
            (inner.clone(), prop::sample::select(vec!["sin", "cos", "exp", "abs"]))
                .prop_map(|(a, f)| format!("{f}({a})")),
            (inner.clone(), -3..=3i32).prop_map(|(a, n)| format!("({a})^{n}")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

proptest! {
    #[test]
    fn expression_printing_round_trips(src in expr_source()) {
        let first = parse_expr(&src).unwrap();
        let again = parse_expr(&first.to_string()).unwrap();
        prop_assert_eq!(&again, &first);
        prop_assert_eq!(again.to_string(), first.to_string());
    }
}

fn model_source(name: &str) -> String {
    std::fs::read_to_string(format!("{}/models/{name}.model", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn galilei(name: &str) -> GalileiModel {
    GalileiModel::from_source(&model_source(name)).unwrap()
}

fn einstein(name: &str) -> EinsteinModel {
    EinsteinModel::from_source(&model_source(name)).unwrap()
}

fn g_special() -> impl Strategy<Value = GSpecialFunction> {
    (poly(), prop::collection::vec(poly(), 3), poly()).prop_map(|(f0, fi, fbar)| GSpecialFunction::new(f0, fi, fbar))
}

fn e_special() -> impl Strategy<Value = ESpecialFunction> {
    (vector_field(), poly()).prop_map(|(x, fbar)| ESpecialFunction::new(x, fbar))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn galilei_bracket_closed_form(
        f in g_special(),
        g in g_special(),
        u in prop::array::uniform4(0.0..1.0f64),
        v in prop::array::uniform3(-2.0..2.0f64),
    ) {
        let m = galilei("curved_galilei");
        let p = GPhasePoint::new(m.chart_box.shrunk(0.9).from_unit(u), v).coords();
        let closed = special_bracket(&m, &f, &g).phase_function(&m).value(&p).unwrap();
        let direct = special_bracket_definitional(&m, &f, &g).value(&p).unwrap();
        prop_assert!(close(closed, direct, 1e-8), "{} vs {}", closed, direct);
    }

    #[test]
    fn einstein_bracket_closed_form(
        f in e_special(),
        g in e_special(),
        u in prop::array::uniform4(0.0..1.0f64),
        v in prop::array::uniform3(-0.3..0.3f64),
    ) {
        let m = einstein("schwarzschild_like");
        let p = EPhasePoint::new(m.chart_box.shrunk(0.9).from_unit(u), v);
        prop_assume!(m.check_timelike(&p).is_ok());
        let closed = m.evaluate(&[e_special_bracket(&m, &f, &g).phase_function(&m)], &p).unwrap()[0];
        let direct = e_special_bracket_definitional(&m, &f, &g, &p).unwrap();
        prop_assert!(close(closed, direct, 1e-7), "{} vs {}", closed, direct);
    }

    #[test]
    fn classification_intertwines_brackets(
        potential in prop::collection::vec(poly(), 4),
        x1 in vector_field(), y1 in poly(),
        x2 in vector_field(), y2 in poly(),
        p in point(),
    ) {
        let conn = GaugeConnection::new(potential);
        let (p1, p2) = (SpacetimePair::new(x1, y1), SpacetimePair::new(x2, y2));
        let lhs = hermitian_bracket(&classify_j(&conn, &p1), &classify_j(&conn, &p2));
        let rhs = classify_j(&conn, &pair_bracket(&p1, &p2, &conn.curvature()));
        prop_assert!(lhs.distance_at(&rhs, &p).unwrap() < 1e-8);
    }

    #[test]
    fn classification_round_trips(potential in prop::collection::vec(poly(), 4), x in vector_field(), b in poly(), p in point()) {
        let conn = GaugeConnection::new(potential);
        let y = HermitianField::new(x, b);
        let pair = classify_h(&conn, &y);
        prop_assert!(classify_j(&conn, &pair).distance_at(&y, &p).unwrap() < 1e-12);
        prop_assert!(vector_gap(&pair.x, &y.x, &p) == 0.0);
    }

    #[test]
    fn hermitian_fields_are_complex_linear(x in vector_field(), b in poly(), pts in prop::collection::vec(point(), 1..8)) {
        let y = HermitianField::new(x, b);
        let pts: Vec<Vec<f64>> = pts.into_iter().map(Vec::from).collect();
        let linear = y.to_linear();
        let (ok, residual) = linear.is_hermitian(&pts, 1e-9).unwrap();
        prop_assert!(ok, "residual {}", residual);
        prop_assert!(linear.to_hermitian().distance_at(&y, &pts[0]).unwrap() == 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let model = LoadedModel::from_source(&model_source("curved_galilei")).unwrap();
        let cfg = RunConfig::new(8, seed);
        let a = emit_report(&run_suite_on(&model, "galilei-core", &cfg).unwrap(), ReportFormat::Json);
        let b = emit_report(&run_suite_on(&model, "galilei-core", &cfg).unwrap(), ReportFormat::Json);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn shipped_models_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("models");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "model") {
            covq::harness::load_model(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert_eq!(seen, 6);
}

#[test]
fn model_entries_differentiate_like_finite_differences() {
    for name in
        ["flat_galilei", "uniform_b_galilei", "curved_galilei", "minkowski", "minkowski_uniformF", "schwarzschild_like"]
    {
        let file = covq::modelspec::parse_model(&model_source(name)).unwrap();
        let consts = file.constants.values();
        let entries = file.metric.values().chain(&file.empotential).chain(file.observers.values().flatten());
        for expr in entries {
            let f = covq::modelspec::compile_field(expr, &consts).unwrap();
            for p in file.chart_box.shrunk(0.9).sobol_points(16) {
                for i in 0..4 {
                    let h = 1e-5;
                    let (mut lo, mut hi) = (p, p);
                    lo[i] -= h;
                    hi[i] += h;
                    let fd = (f.value(&hi).unwrap() - f.value(&lo).unwrap()) / (2.0 * h);
                    let exact = f.diff(i).value(&p).unwrap();
                    assert!((exact - fd).abs() <= 1e-6 * (1.0 + fd.abs()), "{name}: {expr} d{i} {exact} vs {fd}");
                }
            }
        }
    }
}
