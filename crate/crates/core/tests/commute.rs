use std::time::Instant;

use weyl_forge::bispectral::DressedWave;
use weyl_forge::commute::{
    bc_relation, build_kernel, catalog, discriminant_check, find_commuting, verify_master_symmetry, KernelExpr, Level,
    SolveOptions,
};
use weyl_forge::concomitant::concomitant_matrix;
use weyl_forge::linear::express_in_span;
use weyl_forge::{commutator, parse_operator, DiffOperator};
use weyl_forge_exact::{parse_ratfun, rat, RationalFunction, Var};

fn rf(s: &str) -> RationalFunction {
    parse_ratfun(s).unwrap()
}

fn zop(s: &str) -> DiffOperator {
    parse_operator(s, Var::z()).unwrap()
}

fn symbolic() -> (RationalFunction, RationalFunction) {
    (rf("t1"), rf("t2"))
}

#[test]
fn airy_kernel_is_the_divided_difference() {
    let k = build_kernel(&DressedWave::airy(), &rf("t2")).unwrap();
    assert_eq!(k.coeffs[1][0], rf("1/(z - w)"));
    assert_eq!(k.coeffs[0][1], rf("-1/(z - w)"));
    assert!(k.coeffs[0][0].is_zero() && k.coeffs[1][1].is_zero());
    assert!(k.is_symmetric().unwrap());
}

// Oracle: with K(z,w) = −∫_{t2}^∞ Ψ(x,z)Ψ(x,w) dx, ∂K/∂t2 = Ψ(t2,z)Ψ(t2,w).
#[test]
fn kernels_differentiate_to_the_wave_product() {
    let t2 = rf("t2");
    for level in [Level::Airy, Level::One, Level::Two] {
        let w = level.wave().unwrap();
        let k = build_kernel(&w, &t2).unwrap();
        assert!(k.is_symmetric().unwrap(), "{level:?}");
        let want = KernelExpr::wave_product(&w, &t2).unwrap();
        assert_eq!(k.derivative_t2().unwrap(), want, "{level:?}");
    }
    let w = catalog().unwrap().psi1;
    let k = build_kernel(&w, &t2).unwrap();
    assert!(k.is_symmetric().unwrap());
    assert_eq!(k.derivative_t2().unwrap(), KernelExpr::wave_product(&w, &t2).unwrap());
}

#[test]
fn dressed_kernel_correction_has_no_diagonal_pole() {
    let w = Level::One.wave().unwrap();
    let k = build_kernel(&w, &rf("t2")).unwrap();
    let k_ai = build_kernel(&DressedWave::airy(), &rf("t2")).unwrap();
    let ratio = rf("w/z");
    for i in 0..2 {
        for j in 0..2 {
            let corr = &k.coeffs[i][j] - &(&k_ai.coeffs[i][j] * &ratio);
            assert!(!corr.denom().contains_var(Var::w()) || !rf("z - w").numer().is_constant());
            let zw = rf("z - w");
            let (_, rem) = corr.denom().div_rem_in(zw.numer(), Var::z());
            assert!(!rem.is_zero() || corr.is_zero(), "pole at z = w in r{i}{j}");
        }
    }
}

#[test]
fn master_symmetry_certificates() {
    let c = catalog().unwrap();
    let k_ai = build_kernel(&DressedWave::airy(), &rf("t2")).unwrap();
    assert!(verify_master_symmetry(&c.s_ai, &k_ai).unwrap());
    assert!(!verify_master_symmetry(&zop("D^2"), &k_ai).unwrap());
    let k1 = build_kernel(&Level::One.wave().unwrap(), &rf("t2")).unwrap();
    assert!(verify_master_symmetry(&c.s1.to_operator(), &k1).unwrap());
    assert!(verify_master_symmetry(&c.s1_tilde.to_operator(), &k1).unwrap());
    assert!(!verify_master_symmetry(&c.s_ai, &k1).unwrap());
}

#[test]
fn airy_commuting_operator() {
    let (t1, t2) = symbolic();
    let opts = SolveOptions { factor: Some(Level::Airy.factor(&t1)), parallel: false };
    let sols = find_commuting(&DressedWave::airy(), 2, &t1, &t2, &opts).unwrap();
    assert_eq!(sols.len(), 1);
    let c = catalog().unwrap();
    assert_eq!(sols[0].op, c.s_ai);
    assert_eq!(sols[0].preimage, c.s_ai_preimage);
    let d = sols[0].divided.as_ref().unwrap();
    assert_eq!(d.a, vec![rf("z^2 + (t2 - t1)*z"), rf("1")]);
    assert!(concomitant_matrix(&sols[0].op, &t1).unwrap().is_zero());
    assert!(concomitant_matrix(&sols[0].preimage, &t2).unwrap().is_zero());
}

#[test]
fn level_one_commuting_operators() {
    let (t1, t2) = symbolic();
    let w = Level::One.wave().unwrap();
    let opts = SolveOptions { factor: Some(Level::One.factor(&t1)), parallel: false };
    let t = Instant::now();
    let sols = find_commuting(&w, 6, &t1, &t2, &opts).unwrap();
    assert!(t.elapsed().as_secs() < 60);
    assert_eq!(sols.iter().map(|s| s.op.order()).collect::<Vec<_>>(), vec![4, 6]);
    let c = catalog().unwrap();
    let one = DiffOperator::one(Var::z());

    // order 4: the reference form carries the constant (t1 + t2)/3
    let s1 = &sols[0];
    assert_eq!(&c.s1.to_operator() - &s1.op, one.scale(&rat(1, 3)).left_mul_fn(&rf("t1 + t2")));
    let d = s1.divided.as_ref().unwrap();
    assert_eq!(d.a[2], rf("z^2"));
    assert_eq!(d.a[1], rf("-2*(z^4 + (t2 - t1)*z^3 - 3*t1)"));

    // order 6: the reference form adds a multiple of S1 and a constant
    let diff = &sols[1].op - &c.s1_tilde.to_operator();
    let coords = express_in_span(&diff, &[sols[0].op.clone(), one]).unwrap();
    assert_eq!(coords, vec![rf("9*t1^2 - 6*t1*t2"), rf("-t1*t2*(t1 + t2)")]);

    assert!(commutator(&c.s1.to_operator(), &c.s1_tilde.to_operator()).unwrap().is_zero());
    for s in &sols {
        assert!(s.op.is_symmetric());
        assert!(concomitant_matrix(&s.op, &t1).unwrap().is_zero());
        assert!(concomitant_matrix(&s.preimage, &t2).unwrap().is_zero());
    }
}

#[test]
fn level_one_relation_and_discriminant() {
    let c = catalog().unwrap();
    let rel = bc_relation(&c.s1.to_operator(), &c.s1_tilde.to_operator(), 12).unwrap();
    assert!(rel.evaluate().unwrap().is_zero());
    assert_eq!(rel.weight, 12);
    assert_eq!(rel.coeff(0, 2), rf("1"));
    assert_eq!(rel.coeff(3, 0), rf("-1"));
    // the reference operators need constant shifts to reach the reference curve
    assert_eq!(rel.coeff(2, 0), rf("12*t2 - 18*t1"));
    let wf = rel.weierstrass().unwrap().unwrap();
    assert_eq!(wf.p, rf("-(t1^2 - t1*t2 + t2^2)/3"));
    assert_eq!(wf.q, rf("(t1 - 2*t2)*(2*t1 - t2)*(t1 + t2)/27"));
    assert_eq!(wf.x_shift, rf("6*t1 - 4*t2"));
    assert!(wf.y_shift_x.is_zero());
    assert_eq!(wf.y_shift, rf("-(6*t1*t2^2 - 9*t1^2*t2 + 5*t1^3 + 24)"));
    let w = &wf.curve;
    assert!(w.evaluate().unwrap().is_zero());
    assert_eq!(w.coeff(0, 2), rf("1"));
    assert_eq!(w.coeff(3, 0), rf("-1"));
    assert_eq!(w.coeff(2, 0), rf("0"));
    assert_eq!(w.coeff(1, 0), rf("(t1^2 - t1*t2 + t2^2)/3"));
    assert_eq!(w.coeff(0, 0), rf("-(t1 - 2*t2)*(2*t1 - t2)*(t1 + t2)/27"));

    // −4p³ − 27q² of the reference cubic, expanded by hand
    let d = discriminant_check().unwrap();
    assert_eq!(d.computed, rf("t1^2*t2^2*(t1 - t2)^2"));
    assert!(!d.agrees);
    assert_eq!(d.at_one, (rat(0, 1), rat(-4160, 27)));
}

#[test]
fn trivial_relation() {
    let l = zop("D^2 - z");
    let rel = bc_relation(&l, &(&l * &l), 8).unwrap();
    assert_eq!(rel.terms, vec![((0, 1), rf("1")), ((2, 0), rf("-1"))]);
    assert_eq!(rel.to_string(), "Y + (-1)*X^2 = 0");
    assert!(bc_relation(&l, &zop("D"), 8).is_err());
}

#[test]
fn catalog_fixtures() {
    let c = catalog().unwrap();
    assert_eq!(c.s1_tilde.a[3], rf("z^2"));
    assert_eq!(c.s2_tilde.a[6], rf("z^4"));
    assert_eq!(c.s2.a[5], rf("z^4"));
    assert_eq!(c.p1.p_op, c.p1_reference);
    assert!(c.psi1.same_function(&c.psi1_reference));
    assert_eq!(c.p2.p_op, c.p2_reference);
    assert!(c.psi2.same_function(&c.psi2_reference));
    // the family differs from its reference form only in the D¹ constant
    let diff = &c.p2_family.p_op - &c.p2_family_reference;
    assert_eq!(diff, parse_operator("(16 - 16*x)*D", Var::x()).unwrap());
    for s in [&c.s1, &c.s1_tilde, &c.s2, &c.s2_tilde] {
        assert!(s.to_operator().is_symmetric());
    }
    // translation covariance: the symbolic-s1 wave at s1 = 0
    let at0 = |f: &RationalFunction| f.substitute(Var::new("s1"), &RationalFunction::zero()).unwrap();
    let w0 = Level::One.wave().unwrap();
    assert_eq!(at0(&c.psi1.a), w0.a);
    assert_eq!(at0(&c.psi1.b), w0.b);
}

#[test]
fn odd_orders_are_rejected() {
    let (t1, t2) = symbolic();
    assert!(find_commuting(&DressedWave::airy(), 3, &t1, &t2, &SolveOptions::default()).is_err());
}
