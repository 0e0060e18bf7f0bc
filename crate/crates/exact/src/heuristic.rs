//! Heuristic GCD by integer evaluation and `ξ`-adic lifting.
//!
//! Every candidate is confirmed by exact division, so a returned value is
//! always the true primitive GCD; `None` means the heuristic gave up.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbol::Var;

/// Evaluation points whose size times degree exceeds this many bits are
/// left to the pseudo-remainder fallback.
const MAX_BITS: u64 = 1 << 16;
const TRIES: usize = 6;

fn max_abs(p: &MultiPoly) -> BigInt {
    p.terms().iter().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn int_content(p: &MultiPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

fn eval_at(p: &MultiPoly, v: Var, xi: &BigInt) -> MultiPoly {
    let mut pows: Vec<BigInt> = vec![BigInt::one()];
    let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
    for (m, c) in p.terms() {
        let e = m.exp(v) as usize;
        while pows.len() <= e {
            let next = pows.last().unwrap() * xi;
            pows.push(next);
        }
        let mut m2 = *m;
        m2.set_exp(v, 0);
        *acc.entry(m2).or_default() += c.numer() * &pows[e];
    }
    MultiPoly::from_distinct_terms(
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::from_integer(c)))
            .collect(),
    )
}

/// Rebuilds `G` from `γ = G(ξ)` with coefficients in `(−ξ/2, ξ/2]`.
fn lift(gamma: &MultiPoly, v: Var, xi: &BigInt) -> MultiPoly {
    let half: BigInt = xi / 2;
    let mut cur: Vec<(Monomial, BigInt)> =
        gamma.terms().iter().map(|(m, c)| (*m, c.numer().clone())).collect();
    let mut terms = Vec::new();
    let mut i: u16 = 0;
    while !cur.is_empty() {
        if i == u16::MAX {
            return MultiPoly::zero();
        }
        for (m, c) in cur.iter_mut() {
            let mut r = c.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            // exact: c − r is a multiple of ξ
            *c = (&*c - &r) / xi;
            if !r.is_zero() {
                let mut m2 = *m;
                m2.set_exp(v, i);
                terms.push((m2, Rational::from_integer(r)));
            }
        }
        cur.retain(|(_, c)| !c.is_zero());
        i += 1;
    }
    MultiPoly::from_distinct_terms(terms)
}

/// Divides every coefficient by the integer `c` exactly.
fn div_int(p: &MultiPoly, c: &BigInt) -> MultiPoly {
    if c.is_one() {
        return p.clone();
    }
    MultiPoly::from_distinct_terms(
        p.terms().iter().map(|(m, a)| (*m, Rational::from_integer(a.numer() / c))).collect(),
    )
}

/// Full GCD over `ℤ` of integer polynomials, content included; unverified.
fn full_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let (ca, cb) = (int_content(a), int_content(b));
    let c = Rational::from_integer(ca.gcd(&cb));
    if a.is_constant() || b.is_constant() {
        return Some(MultiPoly::constant(c));
    }
    let pa = div_int(a, &ca);
    let pb = div_int(b, &cb);
    Some(candidate(&pa, &pb, false)?.scale(&c))
}

/// Primitive GCD of two nonzero integer-primitive polynomials.
pub fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    candidate(a, b, true)
}

/// Inner levels skip the division test: a wrong image only produces an
/// outer candidate that fails its own test.
fn candidate(a: &MultiPoly, b: &MultiPoly, verify: bool) -> Option<MultiPoly> {
    if a.is_constant() || b.is_constant() {
        return Some(MultiPoly::one());
    }
    let av = a.vars();
    let bv = b.vars();
    let Some(&v) = av.iter().rev().find(|v| bv.contains(v)) else {
        return Some(MultiPoly::one());
    };
    let deg = a.degree_in(v).unwrap_or(0).max(b.degree_in(v).unwrap_or(0)) as u64;
    let mut xi: BigInt = 2 * max_abs(a).min(max_abs(b)) + 2;
    for _ in 0..TRIES {
        if xi.bits() * (deg + 1) > MAX_BITS {
            return None;
        }
        let ea = eval_at(a, v, &xi);
        let eb = eval_at(b, v, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            let gamma = full_gcd(&ea, &eb)?;
            let g = lift(&gamma, v, &xi);
            if !g.is_zero() {
                let g = g.primitive_integer();
                if !verify || (a.div_exact(&g).is_some() && b.div_exact(&g).is_some()) {
                    return Some(g);
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}
