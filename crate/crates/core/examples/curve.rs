//! The Burchnall–Chaundy curve of the level-one commuting pair.
use weyl_forge::commute::{bc_relation, catalog};

fn main() -> weyl_forge::Result<()> {
    let c = catalog()?;
    let (x, y) = (c.s1.to_operator(), c.s1_tilde.to_operator());
    let rel = bc_relation(&x, &y, 12)?;
    println!("{rel}\nannihilates the pair: {}", rel.evaluate()?.is_zero());
    if let Some(wf) = rel.weierstrass()? {
        println!("with X' = X + ({}), Y' = Y + ({})*X + ({}):", wf.x_shift, wf.y_shift_x, wf.y_shift);
        println!("{}", wf.curve);
    }
    Ok(())
}
