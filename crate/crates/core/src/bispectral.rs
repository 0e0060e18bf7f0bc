//! Airy-type bispectral waves, their Fourier algebras and the generalized
//! Fourier map.
//!
//! A wave is `Ψ = a·Ai(x+z) + b·Ai′(x+z)` with `a, b` rational in `x, z`.
//! Operators act through `Ai″(x+z) = (x+z)·Ai(x+z)`, so equality of waves
//! is equality of the pair `(a, b)`.

use weyl_forge_exact::{MultiPoly, Rational, RationalFunction, Var};

use crate::airyring::DarbouxFactor;
use crate::error::{Error, Result};
use crate::linear::{combine_ops, operator_relations, rref, LinearSystem};
use crate::weylops::DiffOperator;

/// `Ψ = a·Ai(x+z) + b·Ai′(x+z)`, optionally remembering its dressing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DressedWave {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub dressing: Option<DarbouxFactor>,
}

impl DressedWave {
    /// `Ψ_Ai = Ai(x+z)`.
    pub fn airy() -> Self {
        DressedWave {
            a: RationalFunction::one(),
            b: RationalFunction::zero(),
            dressing: None,
        }
    }

    pub fn from_parts(a: RationalFunction, b: RationalFunction) -> Self {
        DressedWave { a, b, dressing: None }
    }

    /// Equal as functions (the dressing is ignored).
    pub fn same_function(&self, other: &DressedWave) -> bool {
        self.a == other.a && self.b == other.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Order of the dressing operator (0 for `Ψ_Ai`).
    pub fn dressing_order(&self) -> usize {
        self.dressing.as_ref().map_or(0, |d| d.p_op.order())
    }

    /// `(P, p, q(z))` with the identity dressing for `Ψ_Ai`.
    fn dressing_parts(&self) -> (DiffOperator, RationalFunction, RationalFunction) {
        match &self.dressing {
            Some(d) => (
                d.p_op.clone(),
                d.p.clone(),
                RationalFunction::from_poly(d.q.clone()),
            ),
            None => (
                DiffOperator::one(Var::x()),
                RationalFunction::one(),
                RationalFunction::one(),
            ),
        }
    }
}

/// One derivative in `var ∈ {x, z}` of `a·Ai + b·Ai′`.
fn derive_pair(a: &RationalFunction, b: &RationalFunction, var: Var) -> (RationalFunction, RationalFunction) {
    let arg = &RationalFunction::var(Var::x()) + &RationalFunction::var(Var::z());
    (&a.derivative(var) + &(&arg * b), a + &b.derivative(var))
}

fn act(op: &DiffOperator, w: &DressedWave) -> DressedWave {
    let var = op.var();
    let (mut a, mut b) = (w.a.clone(), w.b.clone());
    let mut ra = RationalFunction::zero();
    let mut rb = RationalFunction::zero();
    for (k, c) in op.coeffs().iter().enumerate() {
        if k > 0 {
            (a, b) = derive_pair(&a, &b, var);
        }
        if !c.is_zero() {
            ra = &ra + &(c * &a);
            rb = &rb + &(c * &b);
        }
    }
    DressedWave::from_parts(ra, rb)
}

fn expect_var(op: &DiffOperator, v: Var) -> Result<()> {
    if op.var() == v || op.order() == 0 && op.coeffs().iter().all(|c| !c.contains_var(op.var())) {
        Ok(())
    } else {
        Err(Error::VariableMismatch(op.var().name(), v.name()))
    }
}

/// `R(x, ∂x)·Ψ`.
pub fn act_x(r: &DiffOperator, w: &DressedWave) -> Result<DressedWave> {
    expect_var(r, Var::x())?;
    Ok(act(&r.rename_if_constant(Var::x()), w))
}

/// `S(z, ∂z)·Ψ`.
pub fn act_z(s: &DiffOperator, w: &DressedWave) -> Result<DressedWave> {
    expect_var(s, Var::z())?;
    Ok(act(&s.rename_if_constant(Var::z()), w))
}

/// `Ψ = (1/(p q)) P·Ψ_Ai`.
pub fn dress(f: &DarbouxFactor) -> Result<DressedWave> {
    let w = act_x(&f.p_op, &DressedWave::airy())?;
    let pq = f.p.mul_poly(&f.q);
    let inv = pq.recip()?;
    Ok(DressedWave {
        a: &w.a * &inv,
        b: &w.b * &inv,
        dressing: Some(f.clone()),
    })
}

/// `c[k][j]`: coefficient of `var^j D^k`, all functions to the left.
pub fn weyl_coefficients(op: &DiffOperator) -> Result<Vec<Vec<RationalFunction>>> {
    let v = op.var();
    op.coeffs()
        .iter()
        .map(|c| {
            if c.denom().contains_var(v) {
                return Err(Error::NotPolynomial(format!("{c} in {v}")));
            }
            let den = RationalFunction::from_poly(c.denom().clone());
            c.numer()
                .coeffs_in(v)
                .into_iter()
                .map(|n| Ok(&RationalFunction::from_poly(n) / &den))
                .collect()
        })
        .collect()
}

/// `Σ c_kj img_d^k ∘ img_v^j`: the anti-isomorphism on monomials `v^j D^k`.
fn anti_map(op: &DiffOperator, img_v: &DiffOperator, img_d: &DiffOperator) -> Result<DiffOperator> {
    let cs = weyl_coefficients(op)?;
    let target = img_d.var();
    let maxj = cs.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut vpow = vec![DiffOperator::one(target)];
    for j in 1..maxj {
        vpow.push(&vpow[j - 1] * img_v);
    }
    let mut out = DiffOperator::zero(target);
    let mut dpow = DiffOperator::one(target);
    for (k, row) in cs.iter().enumerate() {
        if k > 0 {
            dpow = &dpow * img_d;
        }
        if row.iter().all(|c| c.is_zero()) {
            continue;
        }
        let inner = combine_ops(target, row, &vpow[..row.len()]);
        out = &out + &(&dpow * &inner);
    }
    Ok(out)
}

/// `b(x^j D^k) = ∂z^k (∂z² − z)^j`.
pub fn fourier_airy(r: &DiffOperator) -> Result<DiffOperator> {
    expect_var(r, Var::x())?;
    let z = Var::z();
    anti_map(
        &r.rename_if_constant(Var::x()),
        &DiffOperator::airy(z, &RationalFunction::zero()),
        &DiffOperator::derivation(z),
    )
}

/// `b⁻¹(z^j ∂z^k) = D^k L^j`.
pub fn fourier_airy_inverse(s: &DiffOperator) -> Result<DiffOperator> {
    expect_var(s, Var::z())?;
    let x = Var::x();
    anti_map(
        &s.rename_if_constant(Var::z()),
        &DiffOperator::airy(x, &RationalFunction::zero()),
        &DiffOperator::derivation(x),
    )
}

/// `b_Ψ(R)` through `(1/q) b[P*(1/p) R (1/p) P] (1/q)`, falling back to a
/// linear ansatz when the conjugate is not a Weyl element; always verified.
pub fn fourier_dressed(r: &DiffOperator, w: &DressedWave, bounds: &AnsatzBounds) -> Result<DiffOperator> {
    expect_var(r, Var::x())?;
    let r = r.rename_if_constant(Var::x());
    let lhs = act_x(&r, w)?;
    let (pop, p, q) = w.dressing_parts();
    let pinv = p.recip()?;
    let qinv = q.recip()?;
    let x = pop.adjoint().right_mul_fn(&pinv).compose(&r)?.right_mul_fn(&pinv).compose(&pop)?;
    if x.is_weyl() {
        let s = fourier_airy(&x)?.left_mul_fn(&qinv).right_mul_fn(&qinv);
        if act_z(&s, w)?.same_function(&lhs) {
            return Ok(s);
        }
    }
    let cord = bounds.cord.unwrap_or(r.order() + 4 * w.dressing_order() + 4);
    fourier_ansatz(&lhs, w, cord, bounds)
}

/// Solves `S·Ψ = target` with `S` of order `≤ cord` and coefficients
/// `M_k(z)/q^E`, `deg M_k ≤` the degree cap.
fn fourier_ansatz(target: &DressedWave, w: &DressedWave, cord: usize, bounds: &AnsatzBounds) -> Result<DiffOperator> {
    let (_, _, q) = w.dressing_parts();
    let den = q.pow(bounds.max_den_power).recip()?;
    let cap = bounds.degree_cap(cord, cord);
    let z = Var::z();
    let mut monos = Vec::new();
    for k in 0..=cord {
        for d in 0..=cap {
            let c = &RationalFunction::from_poly(MultiPoly::var_pow(z, d as u16)) * &den;
            monos.push(DiffOperator::derivation_pow(z, k).left_mul_fn(&c));
        }
    }
    let n = monos.len();
    let mut sys = LinearSystem::new(n + 1, &[Var::x(), z]);
    let mut av = Vec::with_capacity(n + 1);
    let mut bv = Vec::with_capacity(n + 1);
    for (i, m) in monos.iter().enumerate() {
        let img = act_z(m, w)?;
        av.push((i, img.a));
        bv.push((i, img.b));
    }
    av.push((n, -target.a.clone()));
    bv.push((n, -target.b.clone()));
    sys.add_identity(&av);
    sys.add_identity(&bv);
    let ker = sys.nullspace();
    let sol = ker
        .into_iter()
        .find(|v| v[n].is_one())
        .ok_or_else(|| Error::NotInFourierAlgebra(format!("no image of order ≤ {cord}, degree ≤ {cap}")))?;
    Ok(combine_ops(z, &sol[..n], &monos))
}

/// `b_Ψ⁻¹(S)`: `q S q` pulled back by `b⁻¹`, then divided by `P` on the
/// right and `P*` on the left; verified.
pub fn fourier_dressed_inverse(s: &DiffOperator, w: &DressedWave) -> Result<DiffOperator> {
    expect_var(s, Var::z())?;
    let s = s.rename_if_constant(Var::z());
    let (pop, p, q) = w.dressing_parts();
    let wz = s.left_mul_fn(&q).right_mul_fn(&q);
    if !wz.is_weyl() {
        return Err(Error::NotInFourierAlgebra(format!("q S q is not polynomial: {wz}")));
    }
    let b = fourier_airy_inverse(&wz)?;
    let (y, rem) = b.right_divide(&pop)?;
    if !rem.is_zero() {
        return Err(Error::NotInFourierAlgebra("P does not divide on the right".into()));
    }
    let (zq, rem) = y.left_divide(&pop.adjoint())?;
    if !rem.is_zero() {
        return Err(Error::NotInFourierAlgebra("P* does not divide on the left".into()));
    }
    let a = zq.left_mul_fn(&p).right_mul_fn(&p);
    if !act_x(&a, w)?.same_function(&act_z(&s, w)?) {
        return Err(Error::NotInFourierAlgebra("preimage fails verification".into()));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Exact: conjugate into the Weyl algebra and divide.
    #[default]
    Conjugation,
    /// Joint linear ansatz on both sides; a lower bound.
    Ansatz,
}

/// Degree envelope for ansatz solves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzBounds {
    /// Numerator degree cap is `ord + cord + slack`.
    pub slack: usize,
    /// Denominators are `p(x)^E`, `q(z)^E` with this `E`.
    pub max_den_power: u32,
    /// Hard cap on numerator degrees (from `WEYL_FORGE_MAX_DEGREE`).
    pub max_degree: Option<usize>,
    /// Order cap on the `z` side for [`fourier_dressed`] fallbacks.
    pub cord: Option<usize>,
}

impl Default for AnsatzBounds {
    fn default() -> Self {
        AnsatzBounds {
            slack: 8,
            max_den_power: 2,
            max_degree: None,
            cord: None,
        }
    }
}

pub const MAX_DEGREE_ENV: &str = "WEYL_FORGE_MAX_DEGREE";

impl AnsatzBounds {
    /// Defaults with the environment degree cap applied.
    pub fn from_env() -> Self {
        let max_degree = std::env::var(MAX_DEGREE_ENV).ok().and_then(|s| s.trim().parse().ok());
        AnsatzBounds {
            max_degree,
            ..Self::default()
        }
    }

    pub fn degree_cap(&self, ord: usize, cord: usize) -> usize {
        let d = ord + cord + self.slack;
        self.max_degree.map_or(d, |m| d.min(m))
    }
}

/// A filtered piece of a Fourier algebra with the `b_Ψ` images of its basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSubspace {
    pub side: Side,
    pub ord_bound: usize,
    pub cord_bound: usize,
    /// Operators in `x`.
    pub basis: Vec<DiffOperator>,
    /// `b_Ψ(basis[i])`, operators in `z`.
    pub images: Vec<DiffOperator>,
    pub symmetric: bool,
    /// False when the dimension is only a lower bound (ansatz truncation).
    pub certified: bool,
}

impl FourierSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The same subspace viewed from the `z` side.
    pub fn mirrored(&self) -> FourierSubspace {
        FourierSubspace {
            side: match self.side {
                Side::X => Side::Z,
                Side::Z => Side::X,
            },
            ord_bound: self.cord_bound,
            cord_bound: self.ord_bound,
            basis: self.images.clone(),
            images: self.basis.clone(),
            symmetric: self.symmetric,
            certified: self.certified,
        }
    }
}

/// `𝔉_x(Ψ)^{ord, cord}`, optionally restricted to `R = R*`.
pub fn filtration_dim(
    w: &DressedWave,
    ord: usize,
    cord: usize,
    symmetric: bool,
    method: Method,
    bounds: &AnsatzBounds,
) -> Result<FourierSubspace> {
    match method {
        Method::Conjugation => filtration_by_division(w, ord, cord, symmetric),
        Method::Ansatz => filtration_by_ansatz(w, ord, cord, symmetric, bounds),
    }
}

/// Unknown `W = q S q = Σ w_jk z^j ∂^k` in the Weyl algebra. Conditions:
/// `ord b⁻¹(W) ≤ ord + 2 ord P`, `W = W*` if symmetric, then exact right
/// division by `P` and left division by `P*`.
fn filtration_by_division(w: &DressedWave, ord: usize, cord: usize, symmetric: bool) -> Result<FourierSubspace> {
    let (x, z) = (Var::x(), Var::z());
    let (pop, p, q) = w.dressing_parts();
    let n = pop.order();
    let big = ord + 2 * n;
    // weighted degree (z ↦ 2, ∂ ↦ 1) of a valid W is at most cord + big + 1
    let wmax = cord + big + 1;
    let mut idx = Vec::new();
    for k in (0..=cord).rev() {
        for j in (0..=(wmax - k) / 2).rev() {
            idx.push((j, k));
        }
    }
    let wmono: Vec<DiffOperator> = idx
        .iter()
        .map(|&(j, k)| {
            DiffOperator::derivation_pow(z, k)
                .left_mul_fn(&RationalFunction::from_poly(MultiPoly::var_pow(z, j as u16)))
        })
        .collect();
    let bmono: Vec<DiffOperator> = wmono.iter().map(fourier_airy_inverse).collect::<Result<_>>()?;

    // stage 1: order and symmetry, polynomial data only
    let mut sys = LinearSystem::new(idx.len(), &[x, z]);
    let top = bmono.iter().map(|b| b.order()).max().unwrap_or(0);
    for i in big + 1..=top {
        let vals: Vec<(usize, RationalFunction)> =
            bmono.iter().enumerate().map(|(u, b)| (u, b.coeff(i))).collect();
        sys.add_identity(&vals);
    }
    if symmetric {
        let skew: Vec<DiffOperator> = wmono.iter().map(|m| m - &m.adjoint()).collect();
        for i in 0..=cord {
            let vals: Vec<(usize, RationalFunction)> =
                skew.iter().enumerate().map(|(u, s)| (u, s.coeff(i))).collect();
            sys.add_identity(&vals);
        }
    }
    let k1 = sys.nullspace();
    let b1: Vec<DiffOperator> = k1.iter().map(|v| combine_ops(x, v, &bmono)).collect();

    // stage 2: divisibility
    let pstar = pop.adjoint();
    let mut rems = Vec::with_capacity(b1.len());
    for b in &b1 {
        let (y, r1) = b.right_divide(&pop)?;
        let (_, r2) = y.left_divide(&pstar)?;
        rems.push((r1, r2));
    }
    let mut sys2 = LinearSystem::new(b1.len(), &[x]);
    for i in 0..n.max(1) {
        let v1: Vec<(usize, RationalFunction)> =
            rems.iter().enumerate().map(|(u, r)| (u, r.0.coeff(i))).collect();
        let v2: Vec<(usize, RationalFunction)> =
            rems.iter().enumerate().map(|(u, r)| (u, r.1.coeff(i))).collect();
        sys2.add_identity(&v1);
        sys2.add_identity(&v2);
    }
    let k2 = sys2.nullspace();

    // canonical basis: reduced echelon in the W-monomial coordinates
    let coords: Vec<Vec<RationalFunction>> = k2
        .iter()
        .map(|c| {
            (0..idx.len())
                .map(|u| {
                    c.iter()
                        .zip(&k1)
                        .filter(|(a, _)| !a.is_zero())
                        .fold(RationalFunction::zero(), |acc, (a, v)| &acc + &(a * &v[u]))
                })
                .collect()
        })
        .collect();
    let reduced = rref(coords);
    let qinv = q.recip()?;
    let mut basis = Vec::with_capacity(reduced.len());
    let mut images = Vec::with_capacity(reduced.len());
    for v in &reduced {
        let wz = combine_ops(z, v, &wmono);
        let b = combine_ops(x, v, &bmono);
        let (y, r1) = b.right_divide(&pop)?;
        let (zq, r2) = y.left_divide(&pstar)?;
        if !r1.is_zero() || !r2.is_zero() {
            return Err(Error::Invalid("division remainder after solving".into()));
        }
        let a = zq.left_mul_fn(&p).right_mul_fn(&p);
        let s = wz.left_mul_fn(&qinv).right_mul_fn(&qinv);
        if !act_x(&a, w)?.same_function(&act_z(&s, w)?) {
            return Err(Error::Invalid(format!("basis element fails R·Ψ = S·Ψ: {a}")));
        }
        basis.push(a);
        images.push(s);
    }
    Ok(FourierSubspace {
        side: Side::X,
        ord_bound: ord,
        cord_bound: cord,
        basis,
        images,
        symmetric,
        certified: true,
    })
}

/// Joint ansatz `R = Σ N_k(x)/p^E ∂x^k`, `S = Σ M_k(z)/q^E ∂z^k` with
/// `R·Ψ = S·Ψ`, projected to the `R` component.
fn filtration_by_ansatz(
    w: &DressedWave,
    ord: usize,
    cord: usize,
    symmetric: bool,
    bounds: &AnsatzBounds,
) -> Result<FourierSubspace> {
    let (x, z) = (Var::x(), Var::z());
    let (_, p, q) = w.dressing_parts();
    let e = if w.dressing.is_some() { bounds.max_den_power } else { 0 };
    let pden = p.pow(e).recip()?;
    let qden = q.pow(e).recip()?;
    let cap = bounds.degree_cap(ord, cord);
    let mono = |v: Var, k: usize, d: usize, den: &RationalFunction| {
        let c = &RationalFunction::from_poly(MultiPoly::var_pow(v, d as u16)) * den;
        DiffOperator::derivation_pow(v, k).left_mul_fn(&c)
    };
    let mut amono = Vec::new();
    for k in (0..=ord).rev() {
        for d in (0..=cap).rev() {
            amono.push(mono(x, k, d, &pden));
        }
    }
    let mut smono = Vec::new();
    for k in (0..=cord).rev() {
        for d in (0..=cap).rev() {
            smono.push(mono(z, k, d, &qden));
        }
    }
    let na = amono.len();
    let n = na + smono.len();
    let mut sys = LinearSystem::new(n, &[x, z]);
    let mut av = Vec::with_capacity(n);
    let mut bv = Vec::with_capacity(n);
    for (i, m) in amono.iter().enumerate() {
        let img = act_x(m, w)?;
        av.push((i, img.a));
        bv.push((i, img.b));
    }
    for (i, m) in smono.iter().enumerate() {
        let img = act_z(m, w)?;
        av.push((na + i, -img.a));
        bv.push((na + i, -img.b));
    }
    sys.add_identity(&av);
    sys.add_identity(&bv);
    if symmetric {
        let skew: Vec<DiffOperator> = amono.iter().map(|m| m - &m.adjoint()).collect();
        for i in 0..=ord {
            let vals: Vec<(usize, RationalFunction)> =
                skew.iter().enumerate().map(|(u, s)| (u, s.coeff(i))).collect();
            sys.add_identity(&vals);
        }
    }
    let ker = sys.nullspace();
    let reduced: Vec<Vec<RationalFunction>> = rref(ker)
        .into_iter()
        .filter(|v| v[..na].iter().any(|c| !c.is_zero()))
        .collect();
    let basis = reduced.iter().map(|v| combine_ops(x, &v[..na], &amono)).collect();
    let images = reduced.iter().map(|v| combine_ops(z, &v[na..], &smono)).collect();
    Ok(FourierSubspace {
        side: Side::X,
        ord_bound: ord,
        cord_bound: cord,
        basis,
        images,
        symmetric,
        certified: false,
    })
}

/// `L^j x^k + x^k L^j`, `j ≤ ℓ`, `k ≤ m`: a basis of `𝔉_{x,sym}^{2ℓ,2m}(Ψ_Ai)`.
pub fn airy_symmetric_basis(ell: usize, m: usize) -> Vec<DiffOperator> {
    let x = Var::x();
    let l = DiffOperator::airy(x, &RationalFunction::zero());
    let mut out = Vec::new();
    let mut lp = DiffOperator::one(x);
    for j in 0..=ell {
        if j > 0 {
            lp = &lp * &l;
        }
        for k in 0..=m {
            let xk = DiffOperator::function(x, RationalFunction::from_poly(MultiPoly::var_pow(x, k as u16)));
            out.push(&(&lp * &xk) + &(&xk * &lp));
        }
    }
    out
}

/// The two-dimensional block `{(1/p) P R p + p R* P* (1/p) : R ∈ {1, ∂x}}`.
pub fn exceptional_block(f: &DarbouxFactor) -> Result<Vec<DiffOperator>> {
    let x = Var::x();
    let pinv = f.p.recip()?;
    let pstar = f.p_op.adjoint();
    [DiffOperator::one(x), DiffOperator::derivation(x)]
        .iter()
        .map(|r| {
            let left = f.p_op.left_mul_fn(&pinv).compose(r)?.right_mul_fn(&f.p);
            let right = r.adjoint().left_mul_fn(&f.p).compose(&pstar)?.right_mul_fn(&pinv);
            left.try_add(&right)
        })
        .collect()
}

/// Explicit spanning set of `𝔉_{x,sym}^{2ℓ,2m}(Ψ)` for the trivial and the
/// order-two dressings, reduced to an independent subset.
pub fn build_symmetric_generators(w: &DressedWave, ell: usize, m: usize) -> Result<FourierSubspace> {
    let x = Var::x();
    let gens: Vec<DiffOperator> = match &w.dressing {
        None => airy_symmetric_basis(ell, m),
        Some(f) if f.p_op.order() == 2 => {
            if ell < 2 || m < 2 {
                return Err(Error::Invalid(format!("generators need ℓ, m ≥ 2, got ({ell}, {m})")));
            }
            let pinv = f.p.recip()?;
            let pstar = f.p_op.adjoint();
            let mut g = Vec::new();
            // (1/p) P R P* (1/p) conjugates to q(L)² R q(L)²
            for r in airy_symmetric_basis(ell - 2, m) {
                g.push(f.p_op.left_mul_fn(&pinv).compose(&r)?.compose(&pstar)?.right_mul_fn(&pinv));
            }
            for r in airy_symmetric_basis(1, m - 2) {
                g.push(r.left_mul_fn(&f.p).right_mul_fn(&f.p));
            }
            g.extend(exceptional_block(f)?);
            g.push(DiffOperator::one(x));
            g
        }
        Some(f) => {
            return Err(Error::Invalid(format!(
                "explicit generators are known for dressings of order 0 and 2, not {}",
                f.p_op.order()
            )))
        }
    };
    let keep = independent_subset(&gens, x);
    let basis: Vec<DiffOperator> = keep.into_iter().map(|i| gens[i].clone()).collect();
    let images = basis
        .iter()
        .map(|a| fourier_dressed(a, w, &AnsatzBounds::default()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierSubspace {
        side: Side::X,
        ord_bound: 2 * ell,
        cord_bound: 2 * m,
        basis,
        images,
        symmetric: true,
        certified: true,
    })
}

/// Indices of a maximal independent subset, preferring earlier entries.
pub fn independent_subset(ops: &[DiffOperator], var: Var) -> Vec<usize> {
    let rel = operator_relations(ops, var);
    // each relation expresses its last nonzero entry through earlier ones
    let dependent: Vec<usize> = rel
        .iter()
        .filter_map(|v| v.iter().rposition(|c| !c.is_zero()))
        .collect();
    (0..ops.len()).filter(|i| !dependent.contains(i)).collect()
}

/// `f ∈ 𝒜 = {f ∈ ℚ[x] : p | f′}`.
pub fn in_cusp_ring(f: &RationalFunction, p: &MultiPoly) -> bool {
    let x = Var::x();
    let Some(poly) = f.as_polynomial() else {
        return false;
    };
    let d = poly.derivative(x);
    d.is_zero() || d.div_rem_in(p, x).1.is_zero()
}

/// `1` and `∫₀ p·x^k` for `deg ≤ max_deg`.
pub fn cusp_ring_generators(p: &MultiPoly, max_deg: usize) -> Vec<MultiPoly> {
    let x = Var::x();
    let dp = p.degree_in(x).unwrap_or(0) as usize;
    let mut out = vec![MultiPoly::one()];
    for k in 0..max_deg.saturating_sub(dp + 1) + 1 {
        if k + dp + 1 > max_deg {
            break;
        }
        let integrand = p * &MultiPoly::var_pow(x, k as u16);
        out.push(antiderivative(&integrand, x));
    }
    out
}

fn antiderivative(p: &MultiPoly, v: Var) -> MultiPoly {
    MultiPoly::from_terms(p.terms().iter().map(|(m, c)| {
        let e = m.exp(v);
        let mut m2 = *m;
        m2.set_exp(v, e + 1);
        (m2, c / &Rational::from_integer((e as i64 + 1).into()))
    }))
}

/// `A·𝒜 ⊆ 𝒜` tested on generators up to `max_deg`.
pub fn preserves_cusp_ring(a: &DiffOperator, p: &MultiPoly, max_deg: usize) -> bool {
    cusp_ring_generators(p, max_deg)
        .iter()
        .all(|g| in_cusp_ring(&a.apply(&RationalFunction::from_poly(g.clone())), p))
}

/// `f ∈ span{z⁻², z⁻¹} ⊕ z²ℚ[z]`.
pub fn in_cusp_module(f: &RationalFunction) -> bool {
    let z = Var::z();
    if f.is_zero() {
        return true;
    }
    // denominator must be a power of z
    let den = f.denom();
    if den.num_terms() != 1 || den.vars().iter().any(|&v| v != z) {
        return false;
    }
    let shift = den.degree_in(z).unwrap_or(0) as i32;
    if f.numer().vars().iter().any(|&v| v != z) {
        return false;
    }
    f.numer().terms().iter().all(|(m, _)| {
        let e = m.exp(z) as i32 - shift;
        e == -2 || e == -1 || e >= 2
    })
}

/// `S·ℳ ⊆ ℳ` on `z⁻², z⁻¹, z², …, z^max_deg`.
pub fn preserves_cusp_module(s: &DiffOperator, max_deg: usize) -> bool {
    let z = Var::z();
    let zr = RationalFunction::var(z);
    let mut gens = vec![zr.pow_i(-2).unwrap(), zr.pow_i(-1).unwrap()];
    gens.extend((2..=max_deg).map(|k| zr.pow(k as u32)));
    gens.iter().all(|g| in_cusp_module(&s.apply(g)))
}
