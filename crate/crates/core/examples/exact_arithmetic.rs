//! Reduced rational functions and an exact nullspace.
use weyl_forge_exact::{parse_ratfun, RFMatrix, Var};

fn main() -> Result<(), weyl_forge_exact::ExactError> {
    let a = parse_ratfun("(x^2 - t1^2)/(x + t1)")?;
    println!("(x^2 - t1^2)/(x + t1) = {a}");
    let b = parse_ratfun("1/(z - w) - 1/(z + w)")?;
    println!("1/(z - w) - 1/(z + w) = {b}");
    println!("d/dz of that = {}", b.derivative(Var::z()));
    let m = RFMatrix::from_rows(vec![
        vec![parse_ratfun("1")?, parse_ratfun("x")?, parse_ratfun("x^2")?],
        vec![parse_ratfun("t1")?, parse_ratfun("t1*x")?, parse_ratfun("t1*x^2")?],
    ])?;
    for v in m.nullspace() {
        let shown: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        println!("kernel vector [{}]", shown.join(", "));
    }
    Ok(())
}
