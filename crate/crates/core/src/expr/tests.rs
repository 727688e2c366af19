use super::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn jet(src: &str, z: Complex64) -> Jet3 {
    AnalyticExpr::parse(src).unwrap().eval_jet(z).unwrap()
}

fn close(a: Complex64, b: Complex64, tol: f64) {
    assert!((a - b).norm() <= tol, "{a} vs {b}");
}

#[test]
fn identity_jet() {
    let j = jet("z", c(0.3, 0.0));
    assert_eq!(j.f0, c(0.3, 0.0));
    assert_eq!(j.f1, c(1.0, 0.0));
    assert_eq!(j.f2, c(0.0, 0.0));
    assert_eq!(j.f3, c(0.0, 0.0));
}

#[test]
fn exp_jet_at_origin() {
    let j = jet("exp(z)", c(0.0, 0.0));
    for v in [j.f0, j.f1, j.f2, j.f3] {
        close(v, c(1.0, 0.0), 1e-15);
    }
}

#[test]
fn koebe_jet_at_origin() {
    // k(z) = z + 2z^2 + 3z^3 + ..., so raw derivatives (0, 1, 4, 18).
    let j = jet("koebe(z)", c(0.0, 0.0));
    close(j.f0, c(0.0, 0.0), 1e-15);
    close(j.f1, c(1.0, 0.0), 1e-15);
    close(j.f2, c(4.0, 0.0), 1e-14);
    close(j.f3, c(18.0, 0.0), 1e-13);
}

#[test]
fn koebe_equals_its_rational_form() {
    let a = AnalyticExpr::parse("koebe(z)").unwrap();
    let b = AnalyticExpr::parse("z/(1-z)^2").unwrap();
    let mut seq = crate::quasi::R2::new();
    for _ in 0..50 {
        let z = seq.next_in_disk(0.9);
        let ja = a.eval_jet(z).unwrap();
        let jb = b.eval_jet(z).unwrap();
        let scale = ja.f3.norm().max(1.0);
        close(ja.f0, jb.f0, 1e-12);
        close(ja.f1, jb.f1, 1e-11 * scale.max(ja.f1.norm()));
        close(ja.f2, jb.f2, 1e-11 * scale.max(ja.f2.norm()));
        close(ja.f3, jb.f3, 1e-11 * scale);
    }
}

#[test]
fn koebe_closed_form_derivatives() {
    // k' = (1+z)/(1-z)^3, k'' = (4+2z)/(1-z)^4, k''' = (18+6z)/(1-z)^5.
    let z = c(0.4, -0.3);
    let j = jet("koebe(z)", z);
    let one = c(1.0, 0.0);
    let d = one - z;
    close(j.f0, z / (d * d), 1e-14);
    close(j.f1, (one + z) / d.powu(3), 1e-13);
    close(j.f2, (4.0 + 2.0 * z) / d.powu(4), 1e-12);
    close(j.f3, (18.0 + 6.0 * z) / d.powu(5), 1e-11);
}

#[test]
fn complex_literals_parse_greedily() {
    let j = jet("0.5+0.25i", c(0.1, 0.1));
    assert_eq!(j.f0, c(0.5, 0.25));
    assert_eq!(j.f1, c(0.0, 0.0));
    // Greedy munch binds the combined literal even inside a product.
    let j = jet("z*1-2i", c(0.5, 0.0));
    assert_eq!(j.f0, c(0.5, -1.0));
    // A plain imaginary literal stands alone.
    let j = jet("2i*z", c(0.5, 0.0));
    assert_eq!(j.f0, c(0.0, 1.0));
    // Exponent suffix on reals.
    let j = jet("2e-1*z", c(0.5, 0.0));
    close(j.f0, c(0.1, 0.0), 1e-16);
}

#[test]
fn subtraction_is_left_associative() {
    let j = jet("1-0.25-0.25", c(0.0, 0.0));
    close(j.f0, c(0.5, 0.0), 1e-16);
}

#[test]
fn negative_and_zero_exponents() {
    let j = jet("z^0", c(0.3, 0.2));
    assert_eq!(j.f0, c(1.0, 0.0));
    let z = c(0.5, 0.1);
    let j = jet("z^-2", z);
    close(j.f0, 1.0 / (z * z), 1e-14);
    close(j.f1, -2.0 / z.powu(3), 1e-13);
}

#[test]
fn conjugate_is_rejected_as_non_analytic() {
    match AnalyticExpr::parse("conj(z)") {
        Err(Error::NonAnalyticConstruct { offset, name }) => {
            assert_eq!(offset, 0);
            assert_eq!(name, "conj");
        }
        other => panic!("expected NonAnalyticConstruct, got {other:?}"),
    }
    assert!(matches!(
        AnalyticExpr::parse("z+abs(z)"),
        Err(Error::NonAnalyticConstruct { offset: 2, .. })
    ));
}

#[test]
fn unknown_identifier_reports_offset() {
    match AnalyticExpr::parse("1+sin(z)") {
        Err(Error::UnknownIdentifier { offset, name }) => {
            assert_eq!(offset, 2);
            assert_eq!(name, "sin");
        }
        other => panic!("expected UnknownIdentifier, got {other:?}"),
    }
}

#[test]
fn syntax_errors_report_offset() {
    assert!(matches!(AnalyticExpr::parse("z+"), Err(Error::Syntax { offset: 2, .. })));
    assert!(matches!(AnalyticExpr::parse("(z"), Err(Error::Syntax { offset: 2, .. })));
    assert!(matches!(AnalyticExpr::parse("z z"), Err(Error::Syntax { offset: 2, .. })));
    assert!(matches!(AnalyticExpr::parse("z^1.5"), Err(Error::Syntax { .. })));
    assert!(matches!(AnalyticExpr::parse(""), Err(Error::Syntax { .. })));
    assert!(matches!(AnalyticExpr::parse("exp z"), Err(Error::Syntax { .. })));
}

#[test]
fn evaluation_requires_open_disk() {
    let e = AnalyticExpr::parse("z").unwrap();
    assert!(matches!(e.eval_jet(c(1.0, 0.0)), Err(Error::OutsideDisk { .. })));
    assert!(matches!(e.eval_jet(c(0.8, 0.7)), Err(Error::OutsideDisk { .. })));
    assert!(e.eval_jet(c(0.999999, 0.0)).is_ok());
}

#[test]
fn quotient_guard_fires() {
    let e = AnalyticExpr::parse("1/z").unwrap();
    assert!(matches!(e.eval_jet(c(0.0, 0.0)), Err(Error::MathDomain { .. })));
    assert!(e.eval_jet(c(0.5, 0.0)).is_ok());
}

#[test]
fn log_cut_guard_fires() {
    let e = AnalyticExpr::parse("log(z-0.5)").unwrap();
    // Argument on the negative real axis.
    assert!(matches!(e.eval_jet(c(0.2, 0.0)), Err(Error::MathDomain { .. })));
    // Argument near 0.
    assert!(matches!(e.eval_jet(c(0.5, 0.0)), Err(Error::MathDomain { .. })));
    // Argument safely to the right of the cut.
    assert!(e.eval_jet(c(0.7, 0.0)).is_ok());
    // Off-axis arguments clear the cut.
    assert!(e.eval_jet(c(0.2, 0.5)).is_ok());
}

#[test]
fn compose_chains_jets() {
    let koebe = AnalyticExpr::parse("koebe(z)").unwrap();
    let half = AnalyticExpr::parse("0.5*z").unwrap();
    let f = AnalyticExpr::compose(&koebe, &half);
    let j = f.eval_jet(c(0.0, 0.0)).unwrap();
    // (koebe o half)'(0) = k'(0) * 0.5.
    close(j.f0, c(0.0, 0.0), 1e-15);
    close(j.f1, c(0.5, 0.0), 1e-15);
    // Same values as the textual substitution koebe(0.5*z).
    let direct = jet("koebe(0.5*z)", c(0.3, 0.1));
    let viac = f.eval_jet(c(0.3, 0.1)).unwrap();
    close(direct.f3, viac.f3, 1e-12 * direct.f3.norm().max(1.0));
}

#[test]
fn compose_rejects_escaping_inner_values() {
    // inner = 2z leaves the disk for |z| >= 0.5.
    let outer = AnalyticExpr::parse("exp(z)").unwrap();
    let inner = AnalyticExpr::parse("2*z").unwrap();
    let f = AnalyticExpr::compose(&outer, &inner);
    assert!(f.eval_jet(c(0.3, 0.0)).is_ok());
    assert!(matches!(f.eval_jet(c(0.6, 0.0)), Err(Error::RangeViolation { .. })));
}

#[test]
fn printing_round_trips() {
    for src in [
        "z",
        "koebe(z)",
        "z/(1-z)^2",
        "exp(0.5*z)-1",
        "(z+0.1)*(z-0.2i)",
        "1-2i",
        "-z^2+3*z",
        "log(1-0.5*z)/0.5",
        "z^-3",
        "2e-1*z",
    ] {
        let e = AnalyticExpr::parse(src).unwrap();
        let printed = e.to_string();
        let back = AnalyticExpr::parse(&printed)
            .unwrap_or_else(|err| panic!("reparse of `{printed}` failed: {err}"));
        let z = c(0.23, -0.17);
        let a = e.eval_jet(z).unwrap();
        let b = back.eval_jet(z).unwrap();
        assert_eq!(a.f0.re.to_bits(), b.f0.re.to_bits(), "{src} -> {printed}");
        assert_eq!(a.f3.re.to_bits(), b.f3.re.to_bits(), "{src} -> {printed}");
        assert_eq!(a.f3.im.to_bits(), b.f3.im.to_bits(), "{src} -> {printed}");
    }
}

#[test]
fn compose_prints_by_substitution() {
    let outer = AnalyticExpr::parse("z/(1-z)").unwrap();
    let inner = AnalyticExpr::parse("0.5*z^2").unwrap();
    let f = AnalyticExpr::compose(&outer, &inner);
    let printed = f.to_string();
    let back = AnalyticExpr::parse(&printed).unwrap();
    let z = c(0.4, 0.2);
    let a = f.eval_jet(z).unwrap();
    let b = back.eval_jet(z).unwrap();
    close(a.f3, b.f3, 1e-12 * a.f3.norm().max(1.0));
}

#[test]
fn builders_match_parsed_trees() {
    let z = AnalyticExpr::var();
    let built = AnalyticExpr::div(
        &z,
        &AnalyticExpr::powi(&AnalyticExpr::sub(&AnalyticExpr::real(1.0), &z), 2),
    );
    let parsed = AnalyticExpr::parse("z/(1-z)^2").unwrap();
    assert_eq!(built, parsed);
}

// Random expression trees: printing then reparsing must preserve evaluation
// bit-for-bit, because the printer re-encodes the exact parse structure.
fn arb_expr() -> impl Strategy<Value = AnalyticExpr> {
    let leaf = prop_oneof![
        Just(AnalyticExpr::var()),
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| AnalyticExpr::constant(c(re, im))),
        (-2.0..2.0f64).prop_map(AnalyticExpr::real),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AnalyticExpr::add(&a, &b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AnalyticExpr::sub(&a, &b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AnalyticExpr::mul(&a, &b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| AnalyticExpr::div(&a, &b)),
            (inner.clone(), 0..4i32).prop_map(|(a, n)| AnalyticExpr::powi(&a, n)),
            inner.clone().prop_map(|a| AnalyticExpr::exp(&a)),
            inner.clone().prop_map(|a| AnalyticExpr::neg(&a)),
            inner.clone().prop_map(|a| AnalyticExpr::koebe(&a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_round_trip_preserves_evaluation(e in arb_expr()) {
        let printed = e.to_string();
        let back = AnalyticExpr::parse(&printed)
            .unwrap_or_else(|err| panic!("reparse of `{printed}` failed: {err}"));
        for z in [c(0.31, 0.0), c(-0.2, 0.4), c(0.05, -0.6)] {
            match (e.eval_jet(z), back.eval_jet(z)) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.f0.re.to_bits(), b.f0.re.to_bits());
                    prop_assert_eq!(a.f0.im.to_bits(), b.f0.im.to_bits());
                    prop_assert_eq!(a.f3.re.to_bits(), b.f3.re.to_bits());
                    prop_assert_eq!(a.f3.im.to_bits(), b.f3.im.to_bits());
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "eval mismatch on `{}`: {:?} vs {:?}", printed, a, b),
            }
        }
    }

    #[test]
    fn first_derivative_matches_secant(re in -0.6..0.6f64, im in -0.6..0.6f64) {
        let e = AnalyticExpr::parse("exp(0.5*z)*(1+z)-koebe(0.3*z)").unwrap();
        let z = c(re, im);
        let h = 1e-6;
        let j = e.eval_jet(z).unwrap();
        let fp = e.eval(z + c(h, 0.0)).unwrap();
        let fm = e.eval(z - c(h, 0.0)).unwrap();
        let fd = (fp - fm) / (2.0 * h);
        prop_assert!((j.f1 - fd).norm() < 1e-7 * j.f1.norm().max(1.0));
    }
}
