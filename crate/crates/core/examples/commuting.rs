//! Differential operators commuting with the level-one integral operator.
use std::time::Instant;

use weyl_forge::linear::express_in_span;
use weyl_forge::DiffOperator;
use weyl_forge_exact::Var;
use weyl_forge::commute::{catalog, find_commuting, Level, SolveOptions};

fn main() -> weyl_forge::Result<()> {
    let level = std::env::args().nth(1).and_then(|s| Level::parse(&s)).unwrap_or(Level::One);
    let order: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(6);
    let (t1, t2) = level.default_endpoints();
    let w = level.wave()?;
    let opts = SolveOptions { factor: Some(level.factor(&t1)), parallel: false };
    let t = Instant::now();
    let sols = find_commuting(&w, order, &t1, &t2, &opts)?;
    println!("{} solutions in {:?}", sols.len(), t.elapsed());
    for s in &sols {
        println!("order {}:", s.op.order());
        match &s.divided {
            Some(d) => println!("{d}"),
            None => println!("{}", s.op),
        }
    }
    let c = catalog()?;
    let reference = match level {
        Level::Airy => vec![c.s_ai.clone()],
        Level::One => vec![c.s1.to_operator(), c.s1_tilde.to_operator()],
        Level::Two => vec![c.s2.to_operator(), c.s2_tilde.to_operator()],
    };
    // the solver's basis is reduced; reference forms may differ by lower solutions
    for p in &reference {
        let Some(found) = sols.iter().find(|s| s.op.order() == p.order()) else {
            continue;
        };
        let mut lower: Vec<DiffOperator> =
            sols.iter().filter(|s| s.op.order() < p.order()).map(|s| s.op.clone()).collect();
        lower.push(DiffOperator::one(Var::z()));
        match express_in_span(&(&found.op - p), &lower) {
            Some(c) => println!("order {}: found - reference = {:?} on lower solutions and 1", p.order(), c.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            None => println!("order {}: reference form is not congruent to the solver output", p.order()),
        }
    }
    Ok(())
}
