//! Ordinary differential operators with rational-function coefficients.
//!
//! An operator is `Σ c_k D^k` with every derivative to the right of its
//! coefficient. Trailing zero coefficients are never stored, so the
//! coefficient vector is a canonical form.

mod divided;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use weyl_forge_exact::{binomial, int, MultiPoly, Rational, RationalFunction, Var};

use crate::error::{Error, Result};

pub use divided::DividedForm;
pub use text::parse_operator;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    var: Var,
    coeffs: Vec<RationalFunction>,
}

impl DiffOperator {
    pub fn zero(var: Var) -> Self {
        DiffOperator { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> Self {
        Self::function(var, RationalFunction::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Self::function(var, RationalFunction::constant(c))
    }

    /// Multiplication by `f`.
    pub fn function(var: Var, f: RationalFunction) -> Self {
        Self::new(var, vec![f])
    }

    /// The derivation `D` in `var`.
    pub fn derivation(var: Var) -> Self {
        Self::new(var, vec![RationalFunction::zero(), RationalFunction::one()])
    }

    /// `D^k`.
    pub fn derivation_pow(var: Var, k: usize) -> Self {
        let mut c = vec![RationalFunction::zero(); k + 1];
        c[k] = RationalFunction::one();
        Self::new(var, c)
    }

    /// `c_k` at index `k`; trailing zeros are dropped.
    pub fn new(var: Var, mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOperator { var, coeffs }
    }

    /// The Airy operator `D² − (x + s)`.
    pub fn airy(var: Var, s: &RationalFunction) -> Self {
        let shift = &RationalFunction::var(var) + s;
        Self::new(var, vec![-shift, RationalFunction::zero(), RationalFunction::one()])
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    /// Coefficient of `D^k` (zero beyond the order).
    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; the zero operator has order 0.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// `Some(f)` when the operator is multiplication by `f`.
    pub fn as_function(&self) -> Option<RationalFunction> {
        match self.coeffs.len() {
            0 => Some(RationalFunction::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// True when every coefficient is a polynomial in the operator variable
    /// with denominators free of it.
    pub fn is_weyl(&self) -> bool {
        self.coeffs.iter().all(|c| !c.denom().contains_var(self.var))
    }

    fn check_var(&self, other: &DiffOperator) -> Result<()> {
        if self.var != other.var && !self.is_zero_order_const() && !other.is_zero_order_const() {
            return Err(Error::VariableMismatch(self.var.name(), other.var.name()));
        }
        Ok(())
    }

    // constants live in every variable
    fn is_zero_order_const(&self) -> bool {
        self.coeffs.len() <= 1 && self.coeffs.iter().all(|c| !c.contains_var(self.var))
    }

    fn join_var(&self, other: &DiffOperator) -> Var {
        if self.is_zero_order_const() {
            other.var
        } else {
            self.var
        }
    }

    pub fn try_add(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.check_var(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Ok(Self::new(self.join_var(other), c))
    }

    pub fn try_sub(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.try_add(&-other)
    }

    /// Normal-ordered product `self ∘ other`.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.check_var(other)?;
        let var = self.join_var(other);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(var));
        }
        let mut acc: Vec<RationalFunction> =
            vec![RationalFunction::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        // t = D^i ∘ other, advanced one derivation at a time
        let mut t = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                t = derive_once(&t, var);
            }
            if a.is_zero() {
                continue;
            }
            for (j, c) in t.iter().enumerate() {
                if !c.is_zero() {
                    acc[j] = &acc[j] + &(a * c);
                }
            }
        }
        Ok(Self::new(var, acc))
    }

    pub fn pow(&self, n: u32) -> DiffOperator {
        let mut acc = Self::one(self.var);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `f ∘ self`.
    pub fn left_mul_fn(&self, f: &RationalFunction) -> DiffOperator {
        Self::new(self.var, self.coeffs.iter().map(|c| c * f).collect())
    }

    /// `self ∘ f`.
    pub fn right_mul_fn(&self, f: &RationalFunction) -> DiffOperator {
        self * &Self::function(self.var, f.clone())
    }

    pub fn scale(&self, c: &Rational) -> DiffOperator {
        Self::new(self.var, self.coeffs.iter().map(|e| e.scale(c)).collect())
    }

    /// Formal adjoint `Σ (−D)^k ∘ c_k`.
    pub fn adjoint(&self) -> DiffOperator {
        let n = self.coeffs.len();
        let mut out = vec![RationalFunction::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // (−1)^k Σ_j C(k,j) c^{(k−j)} D^j
            let mut der = c.clone();
            let mut derivs = vec![der.clone()];
            for _ in 0..k {
                der = der.derivative(self.var);
                derivs.push(der.clone());
            }
            for j in 0..=k {
                let d = &derivs[k - j];
                if d.is_zero() {
                    continue;
                }
                let mut coef = Rational::from_integer(binomial(k as i64, j as i64));
                if k % 2 == 1 {
                    coef = -coef;
                }
                out[j] = &out[j] + &d.scale(&coef);
            }
        }
        Self::new(self.var, out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjoint() == *self
    }

    /// Applies the operator to a function of `var`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        let mut d = f.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                d = d.derivative(self.var);
            }
            if !c.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// `self = Y ∘ p + R` with `ord R < ord p`.
    pub fn right_divide(&self, p: &DiffOperator) -> Result<(DiffOperator, DiffOperator)> {
        self.check_var(p)?;
        if p.is_zero() {
            return Err(weyl_forge_exact::ExactError::DivisionByZero.into());
        }
        let var = self.join_var(p);
        let lp = p.leading_coeff().recip()?;
        let mut r = self.clone();
        r.var = var;
        let mut y = vec![RationalFunction::zero(); self.order().saturating_sub(p.order()) + 1];
        while !r.is_zero() && r.order() >= p.order() {
            let k = r.order() - p.order();
            let c = &r.leading_coeff() * &lp;
            let term = &Self::function(var, c.clone()) * &(&Self::derivation_pow(var, k) * p);
            r = r.try_sub(&term)?;
            y[k] = c;
        }
        Ok((Self::new(var, y), r))
    }

    /// `self = p ∘ Y + R` with `ord R < ord p`.
    pub fn left_divide(&self, p: &DiffOperator) -> Result<(DiffOperator, DiffOperator)> {
        self.check_var(p)?;
        if p.is_zero() {
            return Err(weyl_forge_exact::ExactError::DivisionByZero.into());
        }
        let var = self.join_var(p);
        let lp = p.leading_coeff().recip()?;
        let mut r = self.clone();
        r.var = var;
        let mut y = Self::zero(var);
        while !r.is_zero() && r.order() >= p.order() {
            let k = r.order() - p.order();
            let c = &r.leading_coeff() * &lp;
            let mono = Self::function(var, c).compose(&Self::derivation_pow(var, k))?;
            r = r.try_sub(&p.compose(&mono)?)?;
            y = y.try_add(&mono)?;
        }
        Ok((y, r))
    }

    /// Moves a constant operator (no dependence on its variable) to `to`;
    /// anything else is returned unchanged.
    pub fn rename_if_constant(&self, to: Var) -> DiffOperator {
        if self.var != to && self.is_zero_order_const() {
            Self::new(to, self.coeffs.clone())
        } else {
            self.clone()
        }
    }

    /// Renames the operator variable, substituting it inside every coefficient.
    pub fn rename(&self, to: Var) -> DiffOperator {
        let v = RationalFunction::var(to);
        let c = self
            .coeffs
            .iter()
            .map(|c| c.substitute(self.var, &v).expect("renaming cannot create poles"))
            .collect();
        Self::new(to, c)
    }

    /// Substitutes parameters (not the operator variable) in every coefficient.
    pub fn substitute_params(&self, subs: &[(Var, RationalFunction)]) -> Result<DiffOperator> {
        let c = self
            .coeffs
            .iter()
            .map(|c| c.substitute_many(subs))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::new(self.var, c))
    }
}

/// `D ∘ Σ t_j D^j` as a coefficient vector.
fn derive_once(t: &[RationalFunction], var: Var) -> Vec<RationalFunction> {
    let mut out = vec![RationalFunction::zero(); t.len() + 1];
    for (j, c) in t.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out[j] = &out[j] + &c.derivative(var);
        out[j + 1] = &out[j + 1] + c;
    }
    out
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator> {
    a.compose(b)?.try_sub(&b.compose(a)?)
}

/// `q(L)` for `L = D² − (x + s1)` in `x`; `q` is a polynomial in `z`
/// whose coefficients may carry parameters.
pub fn substitute_airy(q: &MultiPoly, s1: &RationalFunction) -> DiffOperator {
    let x = Var::x();
    let l = DiffOperator::airy(x, s1);
    let cs = q.coeffs_in(Var::z());
    let mut acc = DiffOperator::zero(x);
    for c in cs.iter().rev() {
        acc = &(&acc * &l) + &DiffOperator::function(x, RationalFunction::from_poly(c.clone()));
    }
    acc
}

/// Checks `(L−a)^m D^n = Σ_j C(m,j)·n!/(n−j)!·D^{n−j}(L−a)^{m−j}` in `x`.
pub fn binom_shift_expand(m: u32, n: u32, a: &Rational) -> bool {
    let x = Var::x();
    let la = DiffOperator::airy(x, &RationalFunction::constant(a.clone()));
    let d = DiffOperator::derivation(x);
    let lhs = &la.pow(m) * &d.pow(n);
    let mut rhs = DiffOperator::zero(x);
    let mut falling = int(1);
    for j in 0..=m.min(n) {
        if j > 0 {
            falling *= int((n - j + 1) as i64);
        }
        let c = Rational::from_integer(binomial(m as i64, j as i64)) * &falling;
        let term = (&d.pow(n - j) * &la.pow(m - j)).scale(&c);
        rhs = &rhs + &term;
    }
    lhs == rhs
}

impl Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        self.try_add(rhs).expect("operator variables differ")
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        self.try_sub(rhs).expect("operator variables differ")
    }
}

impl Mul for &DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: &DiffOperator) -> DiffOperator {
        self.compose(rhs).expect("operator variables differ")
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        DiffOperator::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: DiffOperator) -> DiffOperator {
        &self + &rhs
    }
}

impl Sub for DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: DiffOperator) -> DiffOperator {
        &self - &rhs
    }
}

impl Mul for DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: DiffOperator) -> DiffOperator {
        &self * &rhs
    }
}

impl Neg for DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        -&self
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.numer().leading_coeff() < int(0);
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let dpart = match k {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            if k == 0 {
                write!(f, "({mag})")?;
            } else if mag.is_one() {
                write!(f, "{dpart}")?;
            } else {
                write!(f, "({mag})*{dpart}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.var.name(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str) -> DiffOperator {
        parse_operator(s, Var::x()).unwrap()
    }

    #[test]
    fn weyl_relation() {
        let x = Var::x();
        let d = DiffOperator::derivation(x);
        let xo = DiffOperator::function(x, RationalFunction::var(x));
        assert_eq!(&d * &xo, op("x*D + 1"));
        assert_eq!(commutator(&d, &xo).unwrap(), DiffOperator::one(x));
        let l = DiffOperator::airy(x, &RationalFunction::zero());
        // L·D = D·L + 1 forces [L, D] = +1
        assert_eq!(commutator(&l, &d).unwrap(), op("1"));
        assert_eq!(&l * &l, op("D^4 - 2*x*D^2 - 2*D + x^2"));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(op("D").adjoint(), op("-D"));
        let l = op("D^2 - x");
        assert_eq!(l.adjoint(), l);
        let p1 = op("(x+s1)*D^2 - D - (x+s1)^2");
        assert_eq!(p1.adjoint(), op("(x+s1)*D^2 + 3*D - (x+s1)^2"));
    }

    #[test]
    fn airy_substitution() {
        let z = MultiPoly::var(Var::z());
        let zero = RationalFunction::zero();
        assert_eq!(substitute_airy(&z, &zero), op("D^2 - x"));
        assert_eq!(substitute_airy(&z.pow(2), &zero), op("D^4 - 2*x*D^2 - 2*D + x^2"));
        let q4 = substitute_airy(&z.pow(4), &zero);
        assert_eq!(q4.order(), 8);
        assert!(q4.leading_coeff().is_one());
        // constant term is L⁴ applied to 1: 1 → −x → x² → 2 − x³ → x⁴ − 8x
        assert_eq!(q4.coeff(0), weyl_forge_exact::parse_ratfun("x^4 - 8*x").unwrap());
    }

    #[test]
    fn binomial_expansion() {
        assert!(binom_shift_expand(1, 1, &int(0)));
        assert!(binom_shift_expand(0, 4, &int(2)));
        assert!(binom_shift_expand(3, 2, &int(5)));
    }

    #[test]
    fn divisions() {
        let p = op("x*D^2 - D - x^2");
        let b = &op("D^3 + x*D") * &p;
        let (y, r) = b.right_divide(&p).unwrap();
        assert!(r.is_zero());
        assert_eq!(y, op("D^3 + x*D"));
        let b = &(&p * &op("D + 1/x")) + &op("3");
        let (y, r) = b.left_divide(&p).unwrap();
        assert_eq!(y, op("D + 1/x"));
        assert_eq!(r, op("3"));
    }
}
