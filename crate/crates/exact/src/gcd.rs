//! Multivariate polynomial GCD.
//!
//! Monomial content is split off first. Then a modular image in each
//! variable bounds the degree of the GCD in that variable: a variable whose
//! bound is zero cannot occur in the GCD, so the problem drops to the
//! contents. Only the remaining variables need a primitive pseudo-remainder
//! sequence, run in the variable of least degree, and only after the
//! evaluation heuristic gives up. Results are
//! integer-primitive with positive leading coefficient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::heuristic::heuristic_gcd;
use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::symbol::{Var, MAX_VARS};

const P: u64 = (1 << 62) - 57;

pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive_integer();
    }
    if b.is_zero() {
        return a.primitive_integer();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let m = ma.gcd(&mb);
    let one = Rational::one();
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let g = gcd_no_monomial(&a1, &b1);
    g.mul_monomial(&m, &one).primitive_integer()
}

fn strip_monomial(p: &MultiPoly, m: &Monomial) -> MultiPoly {
    if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&MultiPoly::monomial(*m, Rational::one()))
            .expect("monomial content divides")
    }
}

fn monomial_content(p: &MultiPoly) -> Monomial {
    let mut it = p.terms().iter();
    let mut m = it.next().map_or(Monomial::ONE, |t| t.0);
    for (t, _) in it {
        if m.is_one() {
            break;
        }
        m = m.gcd(t);
    }
    m
}

/// Both arguments nonzero and free of monomial factors.
fn gcd_no_monomial(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.num_terms() == 1 || b.num_terms() == 1 {
        return MultiPoly::one();
    }
    let mut vars = a.vars();
    vars.extend(b.vars());
    vars.sort();
    vars.dedup();
    let bounds = degree_bounds(a, b, &vars);
    let live: Vec<(Var, u16)> = vars
        .iter()
        .zip(&bounds)
        .filter(|(_, &d)| d > 0)
        .map(|(v, d)| (*v, *d))
        .collect();
    if live.is_empty() {
        return MultiPoly::one();
    }
    // a variable the gcd cannot contain: recurse on the contents
    if let Some(&v) = vars.iter().zip(&bounds).find(|(_, &d)| d == 0).map(|(v, _)| v) {
        let ca = content_in(a, v);
        if ca.is_constant() {
            return MultiPoly::one();
        }
        let cb = content_in(b, v);
        return gcd(&ca, &cb);
    }
    // cheap common case: one divides the other
    let fits = |p: &MultiPoly| live.iter().all(|(v, d)| p.degree_in(*v) == Some(*d));
    if fits(b) && b.num_terms() <= a.num_terms() && a.div_exact(b).is_some() {
        return b.primitive_integer();
    }
    if fits(a) && a.num_terms() <= b.num_terms() && b.div_exact(a).is_some() {
        return a.primitive_integer();
    }
    if let Some(g) = heuristic_gcd(&a.primitive_integer(), &b.primitive_integer()) {
        return g;
    }
    let v = live
        .iter()
        .map(|(v, _)| *v)
        .min_by_key(|v| (a.degree_in(*v).max(b.degree_in(*v)), std::cmp::Reverse(*v)))
        .unwrap();
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = if pa.degree_in(v) >= pb.degree_in(v) {
        primitive_prs(pa, pb, v)
    } else {
        primitive_prs(pb, pa, v)
    };
    &c * &g
}

/// Per-variable upper bounds on the degree of `gcd(a, b)`, from univariate
/// images modulo a prime at pseudo-random points.
fn degree_bounds(a: &MultiPoly, b: &MultiPoly, vars: &[Var]) -> Vec<u16> {
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut point = [0u64; MAX_VARS];
    vars.iter()
        .map(|&v| {
            let da = a.degree_in(v).unwrap_or(0);
            let db = b.degree_in(v).unwrap_or(0);
            let fallback = da.min(db);
            if fallback == 0 {
                return 0;
            }
            for _ in 0..4 {
                for p in point.iter_mut() {
                    seed = seed
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    *p = (seed >> 3) % P;
                }
                let (Some(ia), Some(ib)) = (image(a, v, &point), image(b, v, &point)) else {
                    continue;
                };
                if ia.len() != da as usize + 1 || ib.len() != db as usize + 1 {
                    continue;
                }
                return (gcd_mod(ia, ib).len() - 1) as u16;
            }
            fallback
        })
        .collect()
}

/// Univariate image in `v` with the other symbols evaluated at `point`,
/// trailing zeros trimmed; `None` if a denominator vanishes.
fn image(p: &MultiPoly, v: Var, point: &[u64; MAX_VARS]) -> Option<Vec<u64>> {
    let deg = p.degree_in(v).unwrap_or(0) as usize;
    let mut out = vec![0u64; deg + 1];
    let pb = BigInt::from(P);
    for (m, c) in p.terms() {
        let n = c.numer().mod_floor(&pb).to_u64().unwrap();
        let d = c.denom().mod_floor(&pb).to_u64().unwrap();
        if d == 0 {
            return None;
        }
        let mut t = mul_mod(n, inv_mod(d), P);
        for (w, e) in m.vars() {
            if w != v {
                t = mul_mod(t, pow_mod(point[w.index()], e as u64), P);
            }
        }
        let k = m.exp(v) as usize;
        out[k] = add_mod(out[k], t);
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Some(out)
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) && !b.is_empty() {
        let r = rem_mod(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn rem_mod(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = inv_mod(b[db]);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let f = mul_mod(r[dr], inv, P);
        if f != 0 {
            for (j, bj) in b.iter().enumerate() {
                let k = dr - db + j;
                r[k] = sub_mod(r[k], mul_mod(f, *bj, P));
            }
        }
        r.pop();
        if r.is_empty() {
            r.push(0);
            break;
        }
    }
    trim(&mut r);
    r
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (P - b)
    }
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, P);
        }
        a = mul_mod(a, a, P);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

/// LCM normalized like [`gcd`].
pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).primitive_integer()
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut cs: Vec<MultiPoly> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    // small coefficients first: the running gcd shrinks fastest
    cs.sort_by_key(|c| c.num_terms());
    let mut acc = MultiPoly::zero();
    for c in cs {
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one();
        }
    }
    acc
}

pub fn primitive_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive_integer()
}

fn primitive_prs(mut a: MultiPoly, mut b: MultiPoly, v: Var) -> MultiPoly {
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return primitive_in(&b, v);
        }
        if !r.contains_var(v) {
            return MultiPoly::one();
        }
        a = b;
        b = primitive_in(&r, v);
    }
}

/// Sparse pseudo-remainder of `a` by `b` in `v`.
pub fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: Var) -> MultiPoly {
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = &bc[db];
    let mut r = a.coeffs_in(v);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (j, bj) in bc.iter().enumerate() {
            let k = dr - db + j;
            r[k] = &r[k] - &(&lr * bj);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        // keep integer coefficients small
        if let Some(cont) = content_rational(&r) {
            for c in r.iter_mut() {
                *c = c.scale(&cont);
            }
        }
    }
    MultiPoly::from_coeffs_in(v, &r)
}

fn content_rational(cs: &[MultiPoly]) -> Option<Rational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in cs {
        for (_, a) in c.terms() {
            num = num.gcd(a.numer());
            den = den.lcm(a.denom());
        }
    }
    if num.is_zero() {
        return None;
    }
    let c = Rational::new(num, den);
    if c.is_one() {
        None
    } else {
        Some(c.recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn v(n: &str) -> MultiPoly {
        MultiPoly::var(Var::new(n))
    }

    #[test]
    fn univariate_gcd() {
        let x = v("x");
        let one = MultiPoly::one();
        let a = &(&x - &one) * &(&x + &MultiPoly::int(2));
        let b = &(&x - &one) * &(&x - &MultiPoly::int(3));
        assert_eq!(gcd(&a, &b), &x - &one);
    }

    #[test]
    fn multivariate_gcd_with_content() {
        let x = v("x");
        let z = v("z");
        let t = v("t1");
        let common = &(&x * &z) + &t;
        let a = &(&common * &(&x + &z)) * &t;
        let b = &(&common * &(&x - &z).pow(2)) * &(&t * &z);
        let g = gcd(&a, &b);
        assert_eq!(g, (&common * &t).primitive_integer());
    }

    #[test]
    fn scalar_multiples_normalize() {
        let x = v("x");
        let a = (&x + &MultiPoly::one()).scale(&rat(3, 2));
        let b = (&x + &MultiPoly::one()).scale(&rat(-5, 1));
        assert_eq!(gcd(&a, &b), &x + &MultiPoly::one());
        assert!(gcd(&x, &(&x + &MultiPoly::one())).is_one());
    }

    #[test]
    fn gcd_free_of_a_shared_variable() {
        // gcd involves x only though both inputs involve z
        let x = v("x");
        let z = v("z");
        let common = &(&x * &x) + &MultiPoly::int(3);
        let a = &common * &(&z + &x);
        let b = &common * &(&(&z * &z) - &x);
        assert_eq!(gcd(&a, &b), common);
    }
}
