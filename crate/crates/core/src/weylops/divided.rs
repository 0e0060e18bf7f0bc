//! Divided symmetric template `v^{-s} (Σ_k D^k a_k f^k D^k) v^{-s}`.

use std::fmt;

use weyl_forge_exact::{RationalFunction, Var};

use super::DiffOperator;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DividedForm {
    pub var: Var,
    /// Power of the sandwiching `1/v^s`.
    pub s: u32,
    /// The factor `f` raised to `k` next to `a_k` (e.g. `z − t1` or `1 − z`).
    pub factor: RationalFunction,
    pub a: Vec<RationalFunction>,
}

impl DividedForm {
    pub fn new(var: Var, s: u32, factor: RationalFunction, a: Vec<RationalFunction>) -> Self {
        DividedForm { var, s, factor, a }
    }

    fn sandwich(&self) -> RationalFunction {
        RationalFunction::var(self.var).pow(self.s)
    }

    pub fn to_operator(&self) -> DiffOperator {
        let v = self.var;
        let mut inner = DiffOperator::zero(v);
        for (k, ak) in self.a.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            let dk = DiffOperator::derivation_pow(v, k);
            let mid = DiffOperator::function(v, ak * &self.factor.pow(k as u32));
            inner = &inner + &(&(&dk * &mid) * &dk);
        }
        let w = self.sandwich().recip().expect("sandwich is a nonzero monomial");
        inner.left_mul_fn(&w).right_mul_fn(&w)
    }

    /// Recovers the template coefficients from a normal form, or `None`
    /// when `v^s op v^s` is not of the shape `Σ D^k g_k D^k`.
    pub fn from_operator(
        op: &DiffOperator,
        s: u32,
        factor: &RationalFunction,
    ) -> Option<DividedForm> {
        let v = op.var();
        let w = RationalFunction::var(v).pow(s);
        let mut t = op.left_mul_fn(&w).right_mul_fn(&w);
        if t.is_zero() {
            return Some(DividedForm::new(v, s, factor.clone(), Vec::new()));
        }
        if t.order() % 2 == 1 {
            return None;
        }
        let top = t.order() / 2;
        let mut a = vec![RationalFunction::zero(); top + 1];
        for k in (0..=top).rev() {
            if k > 0 && !t.coeff(2 * k + 1).is_zero() {
                return None;
            }
            let g = t.coeff(2 * k);
            if g.is_zero() {
                continue;
            }
            let dk = DiffOperator::derivation_pow(v, k);
            t = &t - &(&(&dk * &DiffOperator::function(v, g.clone())) * &dk);
            a[k] = if k == 0 {
                g
            } else {
                &g * &factor.pow(k as u32).recip().ok()?
            };
        }
        if !t.is_zero() {
            return None;
        }
        Some(DividedForm::new(v, s, factor.clone(), a))
    }

    pub fn is_polynomial(&self) -> bool {
        self.a.iter().all(|c| c.is_polynomial())
    }

    /// Scales so that the top `a_k` has a monic numerator.
    pub fn monic(&self) -> DividedForm {
        let Some(top) = self.a.iter().rev().find(|c| !c.is_zero()) else {
            return self.clone();
        };
        let lc = top.numer().leading_coeff();
        let inv = lc.recip();
        DividedForm {
            a: self.a.iter().map(|c| c.scale(&inv)).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Display for DividedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        let wrap = |s: u32| match s {
            0 => String::new(),
            1 => format!("(1/{v})"),
            _ => format!("(1/{v}^{s})"),
        };
        write!(f, "{}[sum_k D^k a_k ({})^k D^k]{}", wrap(self.s), self.factor, wrap(self.s))?;
        for (k, ak) in self.a.iter().enumerate() {
            write!(f, "\n  a{k} = {ak}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylops::parse_operator;
    use weyl_forge_exact::parse_ratfun;

    #[test]
    fn round_trip_through_normal_form() {
        let z = Var::z();
        let form = DividedForm::new(
            z,
            1,
            parse_ratfun("z - t1").unwrap(),
            vec![parse_ratfun("z^3 - 2").unwrap(), parse_ratfun("t2*z").unwrap(), parse_ratfun("z^2").unwrap()],
        );
        let op = form.to_operator();
        assert!(op.is_symmetric());
        assert_eq!(DividedForm::from_operator(&op, 1, &form.factor), Some(form));
    }

    #[test]
    fn airy_commuting_operator_template() {
        let z = Var::z();
        let s = parse_operator("D*(t1 - z)*D + (t2 - t1)*z + z^2", z).unwrap();
        let f = DividedForm::from_operator(&s, 0, &parse_ratfun("t1 - z").unwrap()).unwrap();
        assert_eq!(f.a, vec![parse_ratfun("(t2-t1)*z + z^2").unwrap(), RationalFunction::one()]);
        assert!(DividedForm::from_operator(&parse_operator("D", z).unwrap(), 0, &f.factor).is_none());
    }
}
