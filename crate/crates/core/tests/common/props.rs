//! Seeded randomized invariant suites shared by the property tests and the
//! acceptance run. Each suite returns the first counterexample, if any.

use proptest::prelude::*;
use proptest::test_runner::{RngSeed, TestRunner};
use weyl_forge::airyring::{wronskian, AiryElement};
use weyl_forge::bispectral::{act_x, act_z, fourier_airy, DressedWave};
use weyl_forge::concomitant::{
    binomial_identity, concomitant_matrix, kernel_pairing, product_concomitant_check, AiryKind, WronskianSign,
};
use weyl_forge::{binom_shift_expand, parse_operator, substitute_airy, DiffOperator};
use weyl_forge_exact::{rat, MultiPoly, Rational, RationalFunction, Var};

pub const CASES: u32 = 200;

fn runner(seed: u64) -> TestRunner {
    TestRunner::new(ProptestConfig {
        cases: CASES,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    })
}

fn check<S: Strategy>(
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(seed).run(&strategy, test).map_err(|e| e.to_string())
}

/// Polynomial in `x` with small integer coefficients, degree ≤ 2.
pub fn poly_x() -> impl Strategy<Value = RationalFunction> {
    prop::collection::vec(-3i64..=3, 1..=3).prop_map(|cs| {
        let x = RationalFunction::var(Var::x());
        cs.iter().rev().fold(RationalFunction::zero(), |acc, &c| &(&acc * &x) + &RationalFunction::int(c))
    })
}

/// Weyl-algebra operator in `x` of order ≤ `max`.
pub fn weyl_op(max: usize) -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec(poly_x(), 1..=max + 1).prop_map(|cs| DiffOperator::new(Var::x(), cs))
}

/// Operator in `x` whose coefficients may have a pole at `x = −1`.
pub fn rational_op(max: usize) -> impl Strategy<Value = DiffOperator> {
    prop::collection::vec((poly_x(), 0u32..2), 1..=max + 1).prop_map(|cs| {
        let d = RationalFunction::from_poly(&MultiPoly::var(Var::x()) + &MultiPoly::int(1));
        let cs = cs.into_iter().map(|(c, e)| &c * &d.pow(e).recip().unwrap()).collect();
        DiffOperator::new(Var::x(), cs)
    })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn airy_kind() -> impl Strategy<Value = AiryKind> {
    prop_oneof![Just(AiryKind::Ai), Just(AiryKind::Bi)]
}

fn shifts() -> Vec<RationalFunction> {
    vec![RationalFunction::zero(), RationalFunction::constant(rat(3, 2))]
}

/// A random element of the Airy ring over two fixed shifts.
fn airy_element() -> impl Strategy<Value = AiryElement> {
    prop::collection::vec((airy_kind(), 0usize..2, 0u32..3, poly_x()), 1..=3).prop_map(|ts| {
        let sh = shifts();
        ts.into_iter().fold(AiryElement::zero(&sh, WronskianSign::Minus), |acc, (kind, k, m, c)| {
            acc.add(&AiryElement::airy(&sh, WronskianSign::Minus, kind, k, m).scale(&c))
        })
    })
}

pub fn neg_transpose_eq(a: &DiffOperator, p: &RationalFunction) -> bool {
    let ma = concomitant_matrix(a, p).unwrap().entries;
    let mb = concomitant_matrix(&a.adjoint(), p).unwrap().entries.transpose();
    (0..ma.rows()).all(|i| (0..ma.cols()).all(|j| ma.get(i, j) == &-mb.get(i, j)))
}

/// `(AB)* = B*A*`, `(A*)* = A` and `ord AB = ord A + ord B`, order ≤ 4.
pub fn adjoint_anti_homomorphism() -> Result<(), String> {
    check(0xad01, (rational_op(4), rational_op(4)), |(a, b)| {
        prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).order(), a.order() + b.order());
        }
        Ok(())
    })
}

/// Printing then parsing an operator is the identity.
pub fn operator_text_round_trip() -> Result<(), String> {
    check(0x7e47, rational_op(4), |a| {
        let back = parse_operator(&a.to_string(), Var::x()).unwrap();
        prop_assert_eq!(back.to_string(), a.to_string());
        prop_assert_eq!(back, a);
        Ok(())
    })
}

/// `M_A = −M_{A*}ᵀ` at a symbolic point.
pub fn concomitant_antisymmetry() -> Result<(), String> {
    check(0xa517, weyl_op(4), |a| {
        prop_assert!(neg_transpose_eq(&a, &RationalFunction::var(Var::new("t1"))));
        Ok(())
    })
}

/// `C_{A1A2}(f,g) = C_{A1}(A2 f, g) + C_{A2}(f, A1* g)`.
pub fn concomitant_product_rule() -> Result<(), String> {
    check(0x9d0c, (weyl_op(3), weyl_op(3), small_rational()), |(a, b, p)| {
        prop_assert!(product_concomitant_check(&a, &b, &RationalFunction::constant(p)).unwrap());
        prop_assert!(product_concomitant_check(&a, &b, &RationalFunction::var(Var::new("t2"))).unwrap());
        Ok(())
    })
}

/// `C_S(f, f) = 0` for symmetric `S = A*A`.
pub fn symmetric_form_alternates() -> Result<(), String> {
    check(0x5a11, (weyl_op(3), prop::collection::vec(poly_x(), 6)), |(a, f)| {
        let s = &a.adjoint() * &a;
        let t1 = RationalFunction::var(Var::new("t1"));
        let m = concomitant_matrix(&s, &t1).unwrap();
        let jets: Vec<_> = f.iter().map(|c| c.substitute(Var::x(), &t1).unwrap()).collect();
        prop_assert!(m.eval(&jets, &jets).is_zero());
        Ok(())
    })
}

/// The closed-form pairing equals the concomitant of `q(L)²` evaluated on
/// Airy-ring jets at a free point, for roots of multiplicity ≤ 2.
pub fn kernel_pairing_closed_form() -> Result<(), String> {
    let strat = (
        small_rational(),
        small_rational(),
        prop::collection::vec(1u32..=2, 1..=2),
        airy_kind(),
        airy_kind(),
        (0usize..2, 0usize..2, 0u32..4, 0u32..4),
    );
    check(0x9a12, strat, |(a, b, d, fk, gk, (j, k, m, n))| {
        prop_assume!(a != b);
        let roots: Vec<(RationalFunction, u32)> =
            [a, b].iter().zip(&d).map(|(r, &d)| (RationalFunction::constant(r.clone()), d)).collect();
        prop_assume!(j < roots.len() && k < roots.len() && m < 2 * roots[j].1 && n < 2 * roots[k].1);
        let sign = WronskianSign::Minus;
        let closed = kernel_pairing(&roots, fk, gk, j, k, m, n, sign).unwrap();
        let z = MultiPoly::var(Var::z());
        let mut q = MultiPoly::int(1);
        for (r, d) in &roots {
            let lin = &z - &MultiPoly::constant(r.constant_value().unwrap());
            for _ in 0..*d {
                q = &q * &lin;
            }
        }
        let op = substitute_airy(&(&q * &q), &RationalFunction::zero());
        let cm = concomitant_matrix(&op, &RationalFunction::var(Var::x())).unwrap();
        let sh: Vec<_> = roots.iter().map(|r| r.0.clone()).collect();
        let jets = |kind, idx, order| {
            let mut e = AiryElement::airy(&sh, sign, kind, idx, order);
            let mut out = Vec::with_capacity(cm.size());
            for _ in 0..cm.size() {
                out.push(e.clone());
                e = e.derive();
            }
            out
        };
        let direct = cm.pair(
            &jets(fk, j, m),
            &jets(gk, k, n),
            |c, u, v| u.mul(v).scale(c),
            |u, v| u.add(&v),
            AiryElement::zero(&sh, sign),
        );
        prop_assert_eq!(direct.as_rational(), Some(closed));
        Ok(())
    })
}

/// Products and derivatives reach the same normal form whichever rewrite
/// (Airy equation or Wronskian relation) fires first.
pub fn airy_ring_confluence() -> Result<(), String> {
    check(0xc0f1, (airy_element(), airy_element(), airy_element()), |(f, g, h)| {
        prop_assert!(f.mul(&g) == g.mul(&f));
        prop_assert!(f.mul(&g).mul(&h) == f.mul(&g.mul(&h)));
        prop_assert!(f.mul(&g.add(&h)) == f.mul(&g).add(&f.mul(&h)));
        let lhs = f.mul(&g).derive();
        let rhs = f.derive().mul(&g).add(&f.mul(&g.derive()));
        prop_assert!(lhs == rhs);
        Ok(())
    })
}

/// `W` is alternating and additive in each slot, and
/// `W(cf, h) = c·W(f, h) − c′·f·h`.
pub fn wronskian_multilinearity() -> Result<(), String> {
    check(0x3a0e, (airy_element(), airy_element(), airy_element(), poly_x()), |(f, g, h, c)| {
        let w = |fs: &[AiryElement]| wronskian(fs).unwrap();
        prop_assert!(w(&[f.clone(), f.clone()]).is_zero());
        prop_assert!(w(&[f.clone(), g.clone()]) == w(&[g.clone(), f.clone()]).scale(&RationalFunction::int(-1)));
        prop_assert!(w(&[f.add(&g), h.clone()]) == w(&[f.clone(), h.clone()]).add(&w(&[g.clone(), h.clone()])));
        let k = RationalFunction::constant(rat(5, 3));
        prop_assert!(w(&[f.scale(&k), h.clone()]) == w(&[f.clone(), h.clone()]).scale(&k));
        let expect = w(&[f.clone(), h.clone()]).scale(&c).sub(&f.mul(&h).scale(&c.derivative(Var::x())));
        prop_assert!(w(&[f.scale(&c), h.clone()]) == expect);
        Ok(())
    })
}

/// Alternating binomial sum against its closed form, brute force.
pub fn binomial_identity_brute_force() -> Result<(), String> {
    check(0xb1a0, (0i64..16, 0i64..16, 0i64..16), |(a, b, m)| {
        let (lhs, rhs) = binomial_identity(a, b, m);
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

/// `(L−a)^m D^n` binomial expansion for `m, n ≤ 5` and random rational `a`.
pub fn shifted_binomial_expansion() -> Result<(), String> {
    check(0x5b1f, (0u32..=5, 0u32..=5, small_rational()), |(m, n, a)| {
        prop_assert!(binom_shift_expand(m, n, &a));
        Ok(())
    })
}

/// `b(R1R2) = b(R2)b(R1)` and `R·Ψ = b(R)·Ψ` for the Airy wave.
pub fn airy_fourier_anti_homomorphism() -> Result<(), String> {
    check(0xf0a1, (weyl_op(2), weyl_op(2)), |(r1, r2)| {
        let b = |r: &DiffOperator| fourier_airy(r).unwrap();
        prop_assert_eq!(b(&(&r1 * &r2)), &b(&r2) * &b(&r1));
        let w = DressedWave::airy();
        prop_assert!(act_x(&r1, &w).unwrap().same_function(&act_z(&b(&r1), &w).unwrap()));
        Ok(())
    })
}

/// The suites named by the acceptance criteria, in order.
pub fn required_suites() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("adjoint anti-homomorphism", adjoint_anti_homomorphism),
        ("concomitant antisymmetry", concomitant_antisymmetry),
        ("concomitant product rule", concomitant_product_rule),
        ("kernel pairing closed form vs direct", kernel_pairing_closed_form),
        ("Airy-ring reduction confluence", airy_ring_confluence),
        ("Wronskian multilinearity", wronskian_multilinearity),
        ("binomial identity brute force", binomial_identity_brute_force),
    ]
}
