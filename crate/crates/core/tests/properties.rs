mod common;

use common::props;

macro_rules! suite {
    ($name:ident) => {
        #[test]
        fn $name() {
            if let Err(e) = props::$name() {
                panic!("{e}");
            }
        }
    };
}

suite!(adjoint_anti_homomorphism);
suite!(operator_text_round_trip);
suite!(concomitant_antisymmetry);
suite!(concomitant_product_rule);
suite!(symmetric_form_alternates);
suite!(kernel_pairing_closed_form);
suite!(airy_ring_confluence);
suite!(wronskian_multilinearity);
suite!(binomial_identity_brute_force);
suite!(shifted_binomial_expansion);
suite!(airy_fourier_anti_homomorphism);

#[test]
fn fixed_examples() {
    use weyl_forge::parse_operator;
    use weyl_forge_exact::{RationalFunction, Var};
    let a = parse_operator("x*D^3 + D + x^2", Var::x()).unwrap();
    assert!(props::neg_transpose_eq(&a, &RationalFunction::var(Var::new("t1"))));
    assert_eq!(props::CASES, 200);
}
