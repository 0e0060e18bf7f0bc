//! The generalized Fourier map of a dressed wave and its inverse.
use weyl_forge::bispectral::{act_x, act_z, fourier_dressed, fourier_dressed_inverse, AnsatzBounds};
use weyl_forge::commute::Level;
use weyl_forge::parse_operator;
use weyl_forge_exact::Var;

fn main() -> weyl_forge::Result<()> {
    let w = Level::One.wave()?;
    println!("Psi1 = ({})*Ai(x+z) + ({})*Ai'(x+z)", w.a, w.b);
    let r = parse_operator("x^3", Var::x())?;
    let s = fourier_dressed(&r, &w, &AnsatzBounds::from_env())?;
    println!("b(x^3) = {s}");
    println!("x^3 Psi = b(x^3) Psi: {}", act_x(&r, &w)?.same_function(&act_z(&s, &w)?));
    println!("inverse recovers x^3: {}", fourier_dressed_inverse(&s, &w)? == r);
    Ok(())
}
