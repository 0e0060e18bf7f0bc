//! Lagrangian checks and Darboux factors `P*(1/p²)P = q(L)²`.
use weyl_forge::airyring::{build_darboux_operator, check_lagrangian};
use weyl_forge::cli::parse_spec_file;
use weyl_forge::concomitant::WronskianSign;
use weyl_forge::{substitute_airy, DiffOperator};
use weyl_forge_exact::{RationalFunction, Var};

fn main() -> weyl_forge::Result<()> {
    let sign = WronskianSign::default();
    let specs = [
        ("rank one, alpha = (0, 1)", "root s1 1\npair 0 0 1\n"),
        ("rank one, alpha = (1, 1)", "root 0 1\npair 0 1 1\n"),
        ("rank two", "root 0 2\npair 0 0 0 0 1\npair 0 0 0 1 1\n"),
    ];
    for (name, text) in specs {
        let spec = parse_spec_file(text).map_err(weyl_forge::Error::Invalid)?;
        let report = check_lagrangian(&spec, sign)?;
        println!("{name}: lagrangian {}", report.ok);
        for (i, j, r, v) in &report.violations {
            println!("  pairs ({i},{j}) at root {r}: {v}");
        }
        if !report.ok {
            continue;
        }
        let f = build_darboux_operator(&spec, sign)?;
        let w = DiffOperator::function(Var::x(), f.p.pow(2).recip()?);
        let lhs = &(&f.p_op.adjoint() * &w) * &f.p_op;
        let ql = substitute_airy(&f.q, &RationalFunction::zero());
        println!("  P = {}\n  p = {}, q = {}\n  identity holds: {}", f.p_op, f.p, f.q, lhs == &ql * &ql);
    }
    Ok(())
}
