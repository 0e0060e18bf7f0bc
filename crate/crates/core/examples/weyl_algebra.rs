//! Operator arithmetic: products, adjoints, the Airy operator and the
//! divided symmetric template.
use weyl_forge::{binom_shift_expand, commutator, parse_operator, DividedForm};
use weyl_forge_exact::{parse_ratfun, rat, Var};

fn main() -> weyl_forge::Result<()> {
    let x = Var::x();
    let l = parse_operator("D^2 - x", x)?;
    let d = parse_operator("D", x)?;
    println!("L = {l}\n[L, D] = {}", commutator(&l, &d)?);
    let p = parse_operator("(x+s1)*D^2 - D - (x+s1)^2", x)?;
    println!("P = {p}\nP* = {}", p.adjoint());
    let all = (0..=5).all(|m| (0..=5).all(|n| binom_shift_expand(m, n, &rat(-3, 2))));
    println!("(L + 3/2)^m D^n expansion holds for m, n <= 5: {all}");
    let s = DividedForm::new(
        Var::z(),
        0,
        parse_ratfun("t1 - z")?,
        vec![parse_ratfun("z^2 + (t2 - t1)*z")?, parse_ratfun("1")?],
    );
    let op = s.to_operator();
    println!("{s}\n  = {op}\nsymmetric: {}", op.is_symmetric());
    Ok(())
}
