//! Dimensions of symmetric Fourier-algebra pieces for the level-two wave.
use std::time::Instant;

use weyl_forge::bispectral::{filtration_dim, AnsatzBounds, Method};
use weyl_forge::commute::Level;

fn main() -> weyl_forge::Result<()> {
    let w = Level::Two.wave()?;
    let ord: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let t = Instant::now();
    let f = filtration_dim(&w, ord, ord, true, Method::Conjugation, &AnsatzBounds::from_env())?;
    println!("dim F_sym^({ord},{ord})(Psi2) = {} (certified {}) in {:?}", f.dim(), f.certified, t.elapsed());
    Ok(())
}
