//! Bilinear concomitants: matrices at a point and closed-form pairings on
//! the kernel of `q(L)²`.
use weyl_forge::concomitant::{concomitant_matrix, kernel_pairing, AiryKind, WronskianSign};
use weyl_forge::parse_operator;
use weyl_forge_exact::{parse_ratfun, RationalFunction, Var};

fn main() -> weyl_forge::Result<()> {
    let s = parse_operator("D*(t1 - z)*D + (t2 - t1)*z + z^2", Var::z())?;
    for at in ["t1", "t2"] {
        let m = concomitant_matrix(&s, &parse_ratfun(at)?)?;
        println!("C_S at {at} vanishes: {}", m.is_zero());
    }
    let roots = [(RationalFunction::zero(), 2)];
    for m in 0..4 {
        for n in 0..4 {
            let v = kernel_pairing(&roots, AiryKind::Ai, AiryKind::Bi, 0, 0, m, n, WronskianSign::default())?;
            print!("{:>8}", v.to_string());
        }
        println!();
    }
    Ok(())
}
