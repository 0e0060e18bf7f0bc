use weyl_forge::airyring::{build_darboux_operator, SubspaceSpec};
use weyl_forge::concomitant::WronskianSign;
use weyl_forge::{parse_operator, substitute_airy, DiffOperator};
use weyl_forge_exact::{parse_poly, parse_ratfun, RationalFunction, Var};

fn rf(s: &str) -> RationalFunction {
    parse_ratfun(s).unwrap()
}

fn level_two(a: &str) -> SubspaceSpec {
    let v = |xs: [&str; 4]| xs.iter().map(|s| rf(s)).collect::<Vec<_>>();
    SubspaceSpec {
        roots: vec![(rf("0"), 2)],
        pairs: vec![
            (0, v(["0", a, "0", "1"])),
            (0, v([&format!("-({a})/3"), a, "1", "1"])),
        ],
    }
}

#[test]
fn level_two_simplified_factor() {
    let f = build_darboux_operator(&level_two("0"), WronskianSign::default()).unwrap();
    let want = parse_operator(
        "x*(x^3+4)*D^4 - 4*(x^3+1)*D^3 - 2*x^2*(x^3+1)*D^2 + 2*x*(x^3-8)*D + x^6 + 8*x^3 + 16",
        Var::x(),
    )
    .unwrap();
    assert_eq!(f.p_op, want);
    assert_eq!(f.p, rf("x*(x^3+4)"));
    assert_eq!(f.q, parse_poly("z^2").unwrap());
}

// The reference family has `−16` in the first-order coefficient; setting
// a11 = 0 there must reproduce the simplified factor, which forces `−16x`.
#[test]
fn level_two_family_factor() {
    let f = build_darboux_operator(&level_two("a11"), WronskianSign::default()).unwrap();
    let want = parse_operator(
        "(x^4 - 4*x^3*a11 + 10/3*x^2*a11^2 + (4/3*a11^3 + 4)*x + 1/9*a11^4 - 8*a11)*D^4 \
         + (-4*x^3 + 12*x^2*a11 - 20/3*a11^2*x - 4/3*a11^3 - 4)*D^3 \
         + (-2*x^5 + 8*x^4*a11 - 20/3*a11^2*x^3 - (8/3*a11^3 + 2)*x^2 - (2/9*a11^4 - 4*a11)*x + 10/3*a11^2)*D^2 \
         + (2*x^4 - 4*x^3*a11 - 4/3*x*a11^3 - 16*x - 2/9*a11^4 + 36*a11)*D \
         + x^6 - 4*x^5*a11 + 10/3*x^4*a11^2 + (4/3*a11^3 + 8)*x^3 + (1/9*a11^4 - 22*a11)*x^2 + 16/3*x*a11^2 + 2*a11^3 + 16",
        Var::x(),
    )
    .unwrap();
    assert_eq!(f.p_op, want);
}

#[test]
fn factorization_is_independent_of_the_sign_convention() {
    for spec in [level_two("0"), level_two("a11")] {
        let a = build_darboux_operator(&spec, WronskianSign::Plus).unwrap();
        let b = build_darboux_operator(&spec, WronskianSign::Minus).unwrap();
        assert_eq!(a, b);
        let q = substitute_airy(&a.q, &RationalFunction::zero());
        let w = DiffOperator::function(Var::x(), a.p.pow(2).recip().unwrap());
        assert_eq!(&(&a.p_op.adjoint() * &w) * &a.p_op, &q * &q);
    }
}
