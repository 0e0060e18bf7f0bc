//! Bilinear concomitants as matrices on jets.
//!
//! `C_R(f,g;p) = jet(f)ᵀ M jet(g)` with jets `(h(p), h′(p), …, h^{(m−1)}(p))`.

use num_bigint::BigInt;
use weyl_forge_exact::{binomial, factorial, ExactError, MultiPoly, RFMatrix, Rational, RationalFunction, Var};

use crate::error::{Error, Result};
use crate::weylops::DiffOperator;

/// Sign of the determinant Wronskian `Ai·Bi′ − Ai′·Bi = σ/π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WronskianSign {
    Plus,
    Minus,
}

impl Default for WronskianSign {
    /// `Ai′Bi − AiBi′ = 1/π`, i.e. `σ = −1`.
    fn default() -> Self {
        WronskianSign::Minus
    }
}

impl WronskianSign {
    pub fn sigma(self) -> i64 {
        match self {
            WronskianSign::Plus => 1,
            WronskianSign::Minus => -1,
        }
    }

    /// `Ai·Bi′ − Ai′·Bi` as `σ/π`.
    pub fn det_wronskian(self) -> RationalFunction {
        RationalFunction::int(self.sigma())
            .div_poly(&MultiPoly::var(Var::pi()))
            .expect("pi is nonzero")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcomitantMatrix {
    pub point: RationalFunction,
    pub entries: RFMatrix,
}

impl ConcomitantMatrix {
    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn is_zero(&self) -> bool {
        (0..self.size()).all(|i| self.entries.row(i).iter().all(|e| e.is_zero()))
    }

    /// `jet(f)ᵀ M jet(g)`; jets shorter than the size are zero-padded.
    pub fn pair<T>(&self, jf: &[T], jg: &[T], mul: impl Fn(&RationalFunction, &T, &T) -> T, add: impl Fn(T, T) -> T, zero: T) -> T
    where
        T: Clone,
    {
        let mut acc = zero;
        for i in 0..self.size().min(jf.len()) {
            for j in 0..self.size().min(jg.len()) {
                let m = self.entries.get(i, j);
                if !m.is_zero() {
                    acc = add(acc, mul(m, &jf[i], &jg[j]));
                }
            }
        }
        acc
    }

    /// Scalar pairing on rational jets.
    pub fn eval(&self, jf: &[RationalFunction], jg: &[RationalFunction]) -> RationalFunction {
        self.pair(jf, jg, |m, a, b| &(m * a) * b, |a, b| &a + &b, RationalFunction::zero())
    }
}

fn eval_at(c: &RationalFunction, var: Var, p: &RationalFunction) -> Result<RationalFunction> {
    c.substitute(var, p).map_err(|e| match e {
        ExactError::DivisionByZero | ExactError::Pole(_) => Error::Pole(p.to_string()),
        other => other.into(),
    })
}

/// Matrix of `C_R(·,·;p)`; the size is `ord R` (at least 1 for order 0, all zeros).
pub fn concomitant_matrix(r: &DiffOperator, p: &RationalFunction) -> Result<ConcomitantMatrix> {
    concomitant_matrix_sized(r, p, r.order().max(1))
}

/// As [`concomitant_matrix`] embedded in a larger `size × size` block.
pub fn concomitant_matrix_sized(
    r: &DiffOperator,
    p: &RationalFunction,
    size: usize,
) -> Result<ConcomitantMatrix> {
    let n = r.order();
    if size < n {
        return Err(Error::Invalid(format!("size {size} below order {n}")));
    }
    let var = r.var();
    let mut m = RFMatrix::zeros(size, size);
    for j in 1..=n {
        let dj = r.coeff(j);
        if dj.is_zero() {
            continue;
        }
        // derivatives d_j^{(0..j−1)} at p
        let mut ders = Vec::with_capacity(j);
        let mut d = dj;
        for i in 0..j {
            if i > 0 {
                d = d.derivative(var);
            }
            ders.push(eval_at(&d, var, p)?);
        }
        for k in 0..j {
            for l in 0..=k {
                let dv = &ders[k - l];
                if dv.is_zero() {
                    continue;
                }
                let mut c = Rational::from_integer(binomial(k as i64, l as i64));
                if k % 2 == 1 {
                    c = -c;
                }
                let (row, col) = (j - 1 - k, l);
                let cur = m.get(row, col).clone();
                m.set(row, col, &cur + &dv.scale(&c));
            }
        }
    }
    Ok(ConcomitantMatrix {
        point: p.clone(),
        entries: m,
    })
}

/// Rows `i < rows`: `(A h)^{(i)} = Σ_j T[i][j] h^{(j)}` at `p`, `j < cols`.
pub fn jet_transfer(a: &DiffOperator, p: &RationalFunction, rows: usize, cols: usize) -> Result<RFMatrix> {
    let var = a.var();
    let d = DiffOperator::derivation(var);
    let mut t = RFMatrix::zeros(rows, cols);
    let mut cur = a.clone();
    for i in 0..rows {
        if i > 0 {
            cur = &d * &cur;
        }
        if cur.order() >= cols && !cur.is_zero() {
            return Err(Error::Invalid("jet too short for transfer".into()));
        }
        for (j, c) in cur.coeffs().iter().enumerate() {
            if !c.is_zero() {
                t.set(i, j, eval_at(c, var, p)?);
            }
        }
    }
    Ok(t)
}

/// Checks `C_{A1 A2}(f,g) = C_{A1}(A2 f, g) + C_{A2}(f, A1* g)` as jet forms at `p`.
pub fn product_concomitant_check(a1: &DiffOperator, a2: &DiffOperator, p: &RationalFunction) -> Result<bool> {
    let prod = a1.compose(a2)?;
    let n = prod.order().max(1);
    let lhs = concomitant_matrix_sized(&prod, p, n)?.entries;
    let (n1, n2) = (a1.order(), a2.order());
    // an order-0 factor contributes the zero form to its slot
    let first = if n1 == 0 {
        RFMatrix::zeros(n, n)
    } else {
        // Tᵀ M1 E: left slot through A2
        let m1 = concomitant_matrix_sized(a1, p, n1)?.entries;
        let t2 = jet_transfer(a2, p, n1, n)?;
        t2.transpose().mul(&m1)?.mul(&embedding(n1, n))?
    };
    let second = if n2 == 0 {
        RFMatrix::zeros(n, n)
    } else {
        // E2ᵀ M2 T1*: right slot through A1*
        let m2 = concomitant_matrix_sized(a2, p, n2)?.entries;
        let t1s = jet_transfer(&a1.adjoint(), p, n2, n)?;
        embedding(n2, n).transpose().mul(&m2)?.mul(&t1s)?
    };
    let mut ok = true;
    for i in 0..n {
        for j in 0..n {
            if &(first.get(i, j) + second.get(i, j)) != lhs.get(i, j) {
                ok = false;
            }
        }
    }
    Ok(ok)
}

/// `k × n` truncation: the first `k` jet entries.
fn embedding(k: usize, n: usize) -> RFMatrix {
    let mut e = RFMatrix::zeros(k, n);
    for i in 0..k.min(n) {
        e.set(i, i, RationalFunction::one());
    }
    e
}

/// Airy function family of a kernel element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AiryKind {
    Ai,
    Bi,
}

/// `C_L(f,g) = f′g − fg′` for `f,g ∈ {Ai, Bi}` at a common shift.
pub fn concomitant_wronskian(f: AiryKind, g: AiryKind, sign: WronskianSign) -> RationalFunction {
    use AiryKind::*;
    match (f, g) {
        (Ai, Bi) => -sign.det_wronskian(),
        (Bi, Ai) => sign.det_wronskian(),
        _ => RationalFunction::zero(),
    }
}

/// Closed-form `C_{q(L)²}(f^{(m)}(x+a_j), g^{(n)}(x+a_k))` for
/// `q(z) = Π (z − a_i)^{d_i}`.
pub fn kernel_pairing(
    roots: &[(RationalFunction, u32)],
    f: AiryKind,
    g: AiryKind,
    j: usize,
    k: usize,
    m: u32,
    n: u32,
    sign: WronskianSign,
) -> Result<RationalFunction> {
    let (Some(rj), Some(rk)) = (roots.get(j), roots.get(k)) else {
        return Err(Error::Index(format!("root {j} or {k} of {}", roots.len())));
    };
    if m >= 2 * rj.1 || n >= 2 * rk.1 {
        return Err(Error::Index(format!("derivative orders ({m},{n}) out of range")));
    }
    let dk = rk.1;
    if j != k || m + n + 1 < 2 * dk {
        return Ok(RationalFunction::zero());
    }
    let r = m + n + 1 - 2 * dk;
    let z = Var::z();
    // q(z)²/(z − a_k)^{2d_k}
    let mut h = RationalFunction::one();
    for (i, (a, d)) in roots.iter().enumerate() {
        if i != k {
            let lin = &RationalFunction::var(z) - a;
            h = &h * &lin.pow(2 * d);
        }
    }
    let mut hd = h;
    for _ in 0..r {
        hd = hd.derivative(z);
    }
    let at = hd.substitute(z, &rk.0)?;
    let c = Rational::new(factorial(m as u64) * factorial(n as u64), factorial(r as u64));
    Ok(&at.scale(&c) * &concomitant_wronskian(f, g, sign))
}

/// Both sides of `Σ_k (−1)^k C(k+a,k) C(b,m−k) = C(b−1−a, m)`.
pub fn binomial_identity(a: i64, b: i64, m: i64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::from(0);
    for k in 0..=m {
        let t = binomial(k + a, k) * binomial(b, m - k);
        if k % 2 == 1 {
            lhs -= t;
        } else {
            lhs += t;
        }
    }
    (lhs, binomial(b - 1 - a, m))
}
