//! Integral kernels and the master-symmetry certificate.
use weyl_forge::commute::{build_kernel, catalog, verify_master_symmetry, KernelExpr, Level};
use weyl_forge_exact::parse_ratfun;

fn main() -> weyl_forge::Result<()> {
    let t2 = parse_ratfun("t2")?;
    let c = catalog()?;
    for level in [Level::Airy, Level::One] {
        let w = level.wave()?;
        let k = build_kernel(&w, &t2)?;
        println!("{} kernel:\n{k}", level.name());
        println!("symmetric: {}", k.is_symmetric()?);
        println!("dK/dt2 = Psi(t2,z)Psi(t2,w): {}", k.derivative_t2()? == KernelExpr::wave_product(&w, &t2)?);
    }
    let k1 = build_kernel(&Level::One.wave()?, &t2)?;
    println!("S1 commutes with K1: {}", verify_master_symmetry(&c.s1.to_operator(), &k1)?);
    println!("S_Ai commutes with K1: {}", verify_master_symmetry(&c.s_ai, &k1)?);
    Ok(())
}
