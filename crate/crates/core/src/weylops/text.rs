//! Operator text grammar: the exact-crate infix grammar with `D` as the
//! derivation in the ambient variable and `*` as composition.

use weyl_forge_exact::{parse_expr, ExactError, Parseable, Rational, RationalFunction, Var};

use super::DiffOperator;
use crate::error::Result;

impl Parseable for DiffOperator {
    type Ctx = Var;

    fn from_rational(c: Rational, var: &Var) -> Self {
        DiffOperator::constant(*var, c)
    }

    fn from_symbol(name: &str, var: &Var) -> std::result::Result<Self, ExactError> {
        if name == "D" {
            return Ok(DiffOperator::derivation(*var));
        }
        Ok(DiffOperator::function(*var, RationalFunction::var(Var::new(name))))
    }

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }

    fn mul(self, rhs: Self) -> std::result::Result<Self, ExactError> {
        Ok(&self * &rhs)
    }

    /// `A / f` is `A ∘ (1/f)`; only functions may be divided by.
    fn div(self, rhs: Self) -> std::result::Result<Self, ExactError> {
        let f = rhs
            .as_function()
            .ok_or_else(|| ExactError::Parse("division by a differential operator".into()))?;
        Ok(self.right_mul_fn(&f.recip()?))
    }

    fn neg(self) -> Self {
        -self
    }

    fn pow(self, e: i64) -> std::result::Result<Self, ExactError> {
        if e >= 0 {
            return Ok(DiffOperator::pow(&self, e as u32));
        }
        let f = self
            .as_function()
            .ok_or_else(|| ExactError::Parse("negative power of a differential operator".into()))?;
        Ok(DiffOperator::function(self.var(), f.pow_i(e as i32)?))
    }
}

/// Parses e.g. `(x^3+4)*x*D^4 - 4*(x^3+1)*D^3` with `D` the derivation in `var`.
pub fn parse_operator(s: &str, var: Var) -> Result<DiffOperator> {
    let mut op: DiffOperator = parse_expr(s, &var)?;
    // a bare constant has no variable preference
    if op.order() == 0 {
        op = DiffOperator::new(var, op.coeffs().to_vec());
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order_matters() {
        let x = Var::x();
        let a = parse_operator("D*x", x).unwrap();
        let b = parse_operator("x*D + 1", x).unwrap();
        assert_eq!(a, b);
        let c = parse_operator("D/x", x).unwrap();
        assert_eq!(c, parse_operator("1/x*D - 1/x^2", x).unwrap());
        assert!(parse_operator("1/D", x).is_err());
    }

    #[test]
    fn display_round_trip() {
        let z = Var::z();
        for s in ["z^2*D^3 - (z-t1)/z*D + 7", "-D^2 + 1/(z^2-4)", "0", "-3/2"] {
            let op = parse_operator(s, z).unwrap();
            assert_eq!(parse_operator(&op.to_string(), z).unwrap(), op, "{s}");
        }
    }
}
