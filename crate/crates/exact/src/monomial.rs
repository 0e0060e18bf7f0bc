use std::cmp::Ordering;
use std::fmt;

use crate::symbol::{Var, MAX_VARS};

/// Exponent vector over the global symbol table.
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// compared from the highest symbol id down (so `x` dominates `z`, which
/// dominates the parameters).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
    };

    pub fn var(v: Var, e: u16) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.exps[v.index()]
    }

    pub fn set_exp(&mut self, v: Var, e: u16) {
        self.exps[v.index()] = e;
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        out
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            if *a < *b {
                return None;
            }
            *a -= *b;
        }
        Some(out)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.exps.iter_mut().zip(other.exps.iter()) {
            *a = (*a).min(*b);
        }
        out
    }

    /// Variables with a nonzero exponent, in increasing id order.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var(i as u8), e))
    }

    /// Highest-id variable present, if any.
    pub fn top_var(&self) -> Option<Var> {
        self.exps
            .iter()
            .rposition(|&e| e > 0)
            .map(|i| Var(i as u8))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        // highest id first, matching the term order
        let mut first = true;
        for i in (0..MAX_VARS).rev() {
            let e = self.exps[i];
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", Var(i as u8))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x = Var::x();
        let z = Var::z();
        let x2 = Monomial::var(x, 2);
        let xz = Monomial::var(x, 1).mul(&Monomial::var(z, 1));
        let z3 = Monomial::var(z, 3);
        assert!(z3 > x2);
        assert!(x2 > xz);
        assert!(xz > Monomial::var(z, 2));
        assert_eq!(xz.to_string(), "x*z");
    }
}
