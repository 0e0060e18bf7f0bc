//! Infix expression parser shared by every exact type.
//!
//! Grammar: `+ - * / ^`, parentheses, integer literals, identifiers.
//! Juxtaposition after a number (`3x`, `2(x+1)`) is multiplication.
//! Whitespace is insignificant.

use num_bigint::BigInt;

use crate::poly::MultiPoly;
use crate::ratfun::RationalFunction;
use crate::rational::Rational;
use crate::symbol::Var;
use crate::ExactError;

/// Target algebra of [`parse_expr`].
pub trait Parseable: Sized {
    /// Extra information atoms need (e.g. the ambient variable of an operator).
    type Ctx;
    fn from_rational(c: Rational, ctx: &Self::Ctx) -> Self;
    fn from_symbol(name: &str, ctx: &Self::Ctx) -> Result<Self, ExactError>;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Result<Self, ExactError>;
    fn div(self, rhs: Self) -> Result<Self, ExactError>;
    fn neg(self) -> Self;
    fn pow(self, e: i64) -> Result<Self, ExactError>;
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, ExactError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(ExactError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, C> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a C,
}

impl<C> Parser<'_, C> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr<T: Parseable<Ctx = C>>(&mut self) -> Result<T, ExactError> {
        let mut acc = self.term::<T>()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<T: Parseable<Ctx = C>>(&mut self) -> Result<T, ExactError> {
        let mut acc = self.unary::<T>()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<T: Parseable<Ctx = C>>(&mut self) -> Result<T, ExactError> {
        if self.eat('-') {
            return Ok(self.unary::<T>()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power<T: Parseable<Ctx = C>>(&mut self) -> Result<T, ExactError> {
        let was_number = matches!(self.peek(), Some(Tok::Num(_)));
        let mut base = self.atom::<T>()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    i64::try_from(n).map_err(|_| ExactError::Parse("exponent too large".into()))?
                }
                Some(Tok::Op('(')) => {
                    self.pos += 1;
                    let neg2 = self.eat('-');
                    let Some(Tok::Num(n)) = self.peek().cloned() else {
                        return Err(ExactError::Parse("exponent must be an integer".into()));
                    };
                    self.pos += 1;
                    if !self.eat(')') {
                        return Err(ExactError::Parse("missing ')' in exponent".into()));
                    }
                    let e = i64::try_from(n)
                        .map_err(|_| ExactError::Parse("exponent too large".into()))?;
                    if neg2 {
                        -e
                    } else {
                        e
                    }
                }
                _ => return Err(ExactError::Parse("exponent must be an integer".into())),
            };
            base = base.pow(if neg { -e } else { e })?;
        }
        if was_number && matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
            // implicit product: 3x, 2(x+1)
            let rest = self.power::<T>()?;
            base = base.mul(rest)?;
        }
        Ok(base)
    }

    fn atom<T: Parseable<Ctx = C>>(&mut self) -> Result<T, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(T::from_rational(Rational::from_integer(n), self.ctx))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                T::from_symbol(&name, self.ctx)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ExactError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(ExactError::Parse(format!("unexpected token {t:?}"))),
            None => Err(ExactError::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse_expr<T: Parseable>(s: &str, ctx: &T::Ctx) -> Result<T, ExactError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(ExactError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, ctx };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExactError::Parse(format!(
            "trailing input at token {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(v)
}

fn symbol_name_ok(name: &str) -> Result<(), ExactError> {
    if name.chars().next().is_some_and(|c| c.is_alphabetic()) {
        Ok(())
    } else {
        Err(ExactError::Parse(format!("bad symbol {name:?}")))
    }
}

impl Parseable for RationalFunction {
    type Ctx = ();
    fn from_rational(c: Rational, _: &()) -> Self {
        RationalFunction::constant(c)
    }
    fn from_symbol(name: &str, _: &()) -> Result<Self, ExactError> {
        symbol_name_ok(name)?;
        Ok(RationalFunction::var(Var::new(name)))
    }
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
    fn mul(self, rhs: Self) -> Result<Self, ExactError> {
        Ok(&self * &rhs)
    }
    fn div(self, rhs: Self) -> Result<Self, ExactError> {
        Ok(&self * &rhs.recip()?)
    }
    fn neg(self) -> Self {
        -self
    }
    fn pow(self, e: i64) -> Result<Self, ExactError> {
        self.pow_i(e as i32)
    }
}

/// Parses a rational function such as `(x^2-1)/(z-t1)`.
pub fn parse_ratfun(s: &str) -> Result<RationalFunction, ExactError> {
    parse_expr(s, &())
}

/// Parses a polynomial; division is allowed only by nonzero constants.
pub fn parse_poly(s: &str) -> Result<MultiPoly, ExactError> {
    let r = parse_ratfun(s)?;
    if !r.is_polynomial() {
        return Err(ExactError::Parse(format!("{s:?} is not a polynomial")));
    }
    Ok(r.into_parts().0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn round_trip_display() {
        for s in ["x^2 - 1", "(x + 1)/(x^2 - 4)", "3/2*x*z - t1", "(-2)/x"] {
            let r = parse_ratfun(s).unwrap();
            assert_eq!(parse_ratfun(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn implicit_and_negative_powers() {
        let a = parse_ratfun("3x^2 + 2(x+1)").unwrap();
        let b = parse_ratfun("3*x^2 + 2*x + 2").unwrap();
        assert_eq!(a, b);
        let c = parse_ratfun("x^-2").unwrap();
        assert_eq!(c, parse_ratfun("1/x^2").unwrap());
        assert_eq!(parse_poly("x/2").unwrap(), MultiPoly::var(Var::x()).scale(&rat(1, 2)));
    }

    #[test]
    fn errors() {
        assert!(parse_ratfun("x +").is_err());
        assert!(parse_ratfun("1/0").is_err());
        assert!(parse_poly("1/x").is_err());
        assert!(parse_ratfun("x $ 2").is_err());
    }
}
