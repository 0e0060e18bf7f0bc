//! Reduced multivariate rational functions over ℚ.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::gcd::gcd;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbol::Var;
use crate::ExactError;

/// `num / den` with `gcd(num, den) = 1` and `den` monic in the term order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(MultiPoly::int(n))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    /// Reduced, sign-normalized `n / d`.
    pub fn new(n: MultiPoly, d: MultiPoly) -> Result<Self, ExactError> {
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalize(n, d))
    }

    fn normalize(n: MultiPoly, d: MultiPoly) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        if let Some(c) = d.constant_value() {
            return RationalFunction {
                num: n.scale(&c.recip()),
                den: MultiPoly::one(),
            };
        }
        let g = gcd(&n, &d);
        let (n, d) = if g.is_one() {
            (n, d)
        } else {
            (
                n.div_exact(&g).expect("gcd divides numerator"),
                d.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::scale_monic(n, d)
    }

    fn scale_monic(n: MultiPoly, d: MultiPoly) -> Self {
        let lc = d.leading_coeff();
        if lc.is_one() {
            RationalFunction { num: n, den: d }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: n.scale(&inv),
                den: d.scale(&inv),
            }
        }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        if self.den.is_one() {
            return Self::from_poly(&self.num * p);
        }
        let g = gcd(p, &self.den);
        if g.is_one() {
            return RationalFunction {
                num: &self.num * p,
                den: self.den.clone(),
            };
        }
        Self::scale_monic(
            &self.num * &p.div_exact(&g).unwrap(),
            self.den.div_exact(&g).unwrap(),
        )
    }

    pub fn div_poly(&self, p: &MultiPoly) -> Result<Self, ExactError> {
        if p.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self * &Self::new(MultiPoly::one(), p.clone())?)
    }

    pub fn pow(&self, e: u32) -> Self {
        // powers of reduced fractions stay reduced
        Self::scale_monic(self.num.pow(e), self.den.pow(e))
    }

    pub fn pow_i(&self, e: i32) -> Result<Self, ExactError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.recip()?.pow((-e) as u32))
        }
    }

    pub fn derivative(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        // (n/d)' = (n' d - n d') / d^2; only factors of d can cancel
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalize(top, self.den.pow(2))
    }

    /// Replaces `v` by the rational function `value`.
    pub fn substitute(&self, v: Var, value: &RationalFunction) -> Result<Self, ExactError> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let n = subst_poly(&self.num, v, value);
        let d = subst_poly(&self.den, v, value);
        if d.is_zero() {
            return Err(ExactError::Pole(format!("{v} = {value}")));
        }
        Ok(&n / &d)
    }

    pub fn substitute_many(&self, subs: &[(Var, RationalFunction)]) -> Result<Self, ExactError> {
        let mut out = self.clone();
        // simultaneous: route through fresh placeholders is unnecessary as
        // long as no replacement mentions a later-substituted symbol
        let later_vars: Vec<Var> = subs.iter().map(|s| s.0).collect();
        let clash = subs
            .iter()
            .any(|(_, val)| val.vars().iter().any(|v| later_vars.contains(v)));
        if !clash {
            for (v, val) in subs {
                out = out.substitute(*v, val)?;
            }
            return Ok(out);
        }
        let n = subst_many_poly(&self.num, subs);
        let d = subst_many_poly(&self.den, subs);
        if d.is_zero() {
            return Err(ExactError::Pole("simultaneous substitution".into()));
        }
        Ok(&n / &d)
    }

    pub fn eval(&self, point: &[(Var, Rational)]) -> Result<Rational, ExactError> {
        let n = self
            .num
            .eval(point)
            .ok_or_else(|| ExactError::Unbound(format!("{self}")))?;
        let d = self
            .den
            .eval(point)
            .ok_or_else(|| ExactError::Unbound(format!("{self}")))?;
        if d.is_zero() {
            return Err(ExactError::Pole(format!("{self}")));
        }
        Ok(n / d)
    }
}

fn subst_poly(p: &MultiPoly, v: Var, value: &RationalFunction) -> RationalFunction {
    if let Some(vp) = value.as_polynomial() {
        return RationalFunction::from_poly(p.substitute(v, vp));
    }
    // homogenize: sum c_k a^k b^(n-k) over b^n
    let cs = p.coeffs_in(v);
    if cs.is_empty() {
        return RationalFunction::zero();
    }
    let n = cs.len() - 1;
    let (a, b) = (value.numer(), value.denom());
    let mut apow = vec![MultiPoly::one()];
    let mut bpow = vec![MultiPoly::one()];
    for k in 1..=n {
        apow.push(&apow[k - 1] * a);
        bpow.push(&bpow[k - 1] * b);
    }
    let mut top = MultiPoly::zero();
    for (k, c) in cs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        top = &top + &(&(c * &apow[k]) * &bpow[n - k]);
    }
    RationalFunction::normalize(top, bpow[n].clone())
}

fn subst_many_poly(p: &MultiPoly, subs: &[(Var, RationalFunction)]) -> RationalFunction {
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let mut rest = *m;
        let mut term = RationalFunction::constant(c.clone());
        for (v, val) in subs {
            let e = m.exp(*v);
            if e > 0 {
                rest.set_exp(*v, 0);
                term = &term * &val.pow(e as u32);
            }
        }
        acc = &acc + &term.mul_poly(&MultiPoly::monomial(rest, Rational::one()));
    }
    acc
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        add_sub(self, rhs, false)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        add_sub(self, rhs, true)
    }
}

fn add_sub(a: &RationalFunction, b: &RationalFunction, neg: bool) -> RationalFunction {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if neg { -b } else { b.clone() };
    }
    let comb = |x: &MultiPoly, y: &MultiPoly| if neg { x - y } else { x + y };
    if a.den == b.den {
        if a.den.is_one() {
            return RationalFunction::from_poly(comb(&a.num, &b.num));
        }
        return RationalFunction::normalize(comb(&a.num, &b.num), a.den.clone());
    }
    if a.den.is_one() {
        return RationalFunction {
            num: comb(&(&a.num * &b.den), &b.num),
            den: b.den.clone(),
        };
    }
    if b.den.is_one() {
        return RationalFunction {
            num: comb(&a.num, &(&b.num * &a.den)),
            den: a.den.clone(),
        };
    }
    // Henrici: only factors of gcd(da, db) can cancel
    let g = gcd(&a.den, &b.den);
    if g.is_one() {
        let num = comb(&(&a.num * &b.den), &(&b.num * &a.den));
        return RationalFunction::scale_monic(num, &a.den * &b.den);
    }
    let da = a.den.div_exact(&g).unwrap();
    let db = b.den.div_exact(&g).unwrap();
    let num = comb(&(&a.num * &db), &(&b.num * &da));
    if num.is_zero() {
        return RationalFunction::zero();
    }
    let g2 = gcd(&num, &g);
    let (num, g) = if g2.is_one() {
        (num, g)
    } else {
        (num.div_exact(&g2).unwrap(), g.div_exact(&g2).unwrap())
    };
    RationalFunction::scale_monic(num, &(&da * &db) * &g)
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        RationalFunction::scale_monic(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::recip`] to handle it.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<MultiPoly> for RationalFunction {
    fn from(p: MultiPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        RationalFunction::constant(c)
    }
}

impl From<Var> for RationalFunction {
    fn from(v: Var) -> Self {
        RationalFunction::var(v)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

fn needs_parens(p: &MultiPoly) -> bool {
    p.num_terms() > 1 || p.leading_coeff() < Rational::zero()
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if needs_parens(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let single_power = self.den.num_terms() == 1
            && self.den.leading_coeff().is_one()
            && self.den.vars().len() == 1;
        if !single_power {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MultiPoly {
        MultiPoly::var(Var::x())
    }

    #[test]
    fn cancels_common_factor() {
        let one = MultiPoly::one();
        let r = RationalFunction::new(&x().pow(2) - &one, &x() - &one).unwrap();
        assert_eq!(r, RationalFunction::from_poly(&x() + &one));
    }

    #[test]
    fn zero_numerator_and_zero_denominator() {
        let r = RationalFunction::new(MultiPoly::zero(), &x().pow(3) + &MultiPoly::int(4)).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.denom(), &MultiPoly::one());
        assert!(matches!(
            RationalFunction::new(x(), MultiPoly::zero()),
            Err(ExactError::DivisionByZero)
        ));
    }

    #[test]
    fn derivative_quotient_rule() {
        let r = RationalFunction::new(MultiPoly::one(), x()).unwrap();
        let d = r.derivative(Var::x());
        assert_eq!(d, RationalFunction::new(MultiPoly::int(-1), x().pow(2)).unwrap());
    }

    #[test]
    fn display_is_parenthesized() {
        let one = MultiPoly::one();
        let r = RationalFunction::new(&x() + &one, &x().pow(2) - &MultiPoly::int(4)).unwrap();
        assert_eq!(r.to_string(), "(x + 1)/(x^2 - 4)");
        let s = RationalFunction::new(MultiPoly::int(-2), x()).unwrap();
        assert_eq!(s.to_string(), "(-2)/x");
    }
}
