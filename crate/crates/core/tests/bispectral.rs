use weyl_forge::airyring::{build_darboux_operator, SubspaceSpec};
use weyl_forge::bispectral::*;
use weyl_forge::concomitant::WronskianSign;
use weyl_forge::{parse_operator, DiffOperator};
use weyl_forge_exact::{parse_ratfun, RationalFunction, Var};

fn rf(s: &str) -> RationalFunction {
    parse_ratfun(s).unwrap()
}

fn psi1(s1: &str) -> DressedWave {
    let spec = SubspaceSpec {
        roots: vec![(rf(s1), 1)],
        pairs: vec![(0, vec![rf("0"), rf("1")])],
    };
    dress(&build_darboux_operator(&spec, WronskianSign::default()).unwrap()).unwrap()
}

fn psi2() -> DressedWave {
    let v = |xs: [&str; 4]| xs.iter().map(|s| rf(s)).collect::<Vec<_>>();
    let spec = SubspaceSpec {
        roots: vec![(rf("0"), 2)],
        pairs: vec![(0, v(["0", "0", "0", "1"])), (0, v(["0", "0", "1", "1"]))],
    };
    dress(&build_darboux_operator(&spec, WronskianSign::default()).unwrap()).unwrap()
}

#[test]
fn dressed_waves() {
    let w = psi1("s1");
    assert_eq!(w.a, rf("1"));
    assert_eq!(w.b, rf("-1/((x+s1)*(z-s1))"));
    let w2 = psi2();
    assert_eq!(w2.a, rf("1 + 6*(x^3 + x^2*z + 2)/(x*(x^3+4)*z^2)"));
    // direct application; the reference b carries a stray variable
    assert_eq!(w2.b, rf("-4*(x^3*z + 3*x + z)/(x*(x^3+4)*z^2)"));
    let trivial = weyl_forge::airyring::DarbouxFactor {
        p_op: DiffOperator::one(Var::x()),
        p: rf("1"),
        q: weyl_forge_exact::MultiPoly::one(),
    };
    assert!(dress(&trivial).unwrap().same_function(&DressedWave::airy()));
}

#[test]
fn translation_covariance() {
    let general = psi1("s1");
    let zero = psi1("0");
    let s0 = [(Var::new("s1"), rf("0"))];
    assert_eq!(general.a.substitute_many(&s0).unwrap(), zero.a);
    assert_eq!(general.b.substitute_many(&s0).unwrap(), zero.b);
}

#[test]
fn dressed_fourier_map_round_trip() {
    let w = psi1("0");
    let b = AnsatzBounds::default();
    let r = parse_operator("x*x*x", Var::x()).unwrap();
    let s = fourier_dressed(&r, &w, &b).unwrap();
    assert!(act_x(&r, &w).unwrap().same_function(&act_z(&s, &w).unwrap()));
    assert_eq!(fourier_dressed_inverse(&s, &w).unwrap(), r);
    // the Airy case reproduces the classical preimage of the commuting operator
    let sai = parse_operator("D*(t1 - z)*D + (t2 - t1)*z + z^2", Var::z()).unwrap();
    let rai = parse_operator("D*(t2 - x)*D + (t1 - t2)*x + x^2", Var::x()).unwrap();
    assert_eq!(fourier_dressed_inverse(&sai, &DressedWave::airy()).unwrap(), rai);
    assert_eq!(fourier_airy(&rai).unwrap(), sai);
}

#[test]
fn airy_filtration_dimensions() {
    let w = DressedWave::airy();
    let b = AnsatzBounds::default();
    for l in 0..=3 {
        for m in 0..=3 {
            let full = filtration_dim(&w, 2 * l, 2 * m, false, Method::Conjugation, &b).unwrap();
            assert_eq!(full.dim(), 2 * l * m + l + m + 1, "({l},{m})");
            let sym = filtration_dim(&w, 2 * l, 2 * m, true, Method::Conjugation, &b).unwrap();
            assert_eq!(sym.dim(), (l + 1) * (m + 1), "sym ({l},{m})");
            let gens = build_symmetric_generators(&w, l, m).unwrap();
            assert_eq!(gens.dim(), sym.dim());
        }
    }
}

#[test]
fn ansatz_agrees_with_division_on_small_pieces() {
    // conjugated generators carry p^4 in their denominators
    let b = AnsatzBounds {
        max_den_power: 4,
        ..AnsatzBounds::default()
    };
    for w in [DressedWave::airy(), psi1("0")] {
        for (o, c) in [(2, 2), (4, 2), (4, 4)] {
            let d = filtration_dim(&w, o, c, true, Method::Conjugation, &b).unwrap();
            let a = filtration_dim(&w, o, c, true, Method::Ansatz, &b).unwrap();
            assert_eq!(d.dim(), a.dim(), "({o},{c})");
        }
    }
}

#[test]
fn level_one_symmetric_dimensions() {
    let w = psi1("0");
    let b = AnsatzBounds::default();
    for l in 2..=3 {
        for m in 2..=3 {
            let sym = filtration_dim(&w, 2 * l, 2 * m, true, Method::Conjugation, &b).unwrap();
            let gens = build_symmetric_generators(&w, l, m).unwrap();
            assert_eq!(sym.dim(), (l + 1) * (m + 1) - 1);
            assert_eq!(gens.dim(), sym.dim());
        }
    }
    let f = w.dressing.as_ref().unwrap();
    let e = exceptional_block(f).unwrap();
    assert_eq!(weyl_forge::linear::span_rank(&e, Var::x()), 2);
}
