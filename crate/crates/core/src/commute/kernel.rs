//! Kernels `K(z,w) = Σ r_ij(z,w)·Ai^{(i)}(t2+z)·Ai^{(j)}(t2+w)` and the
//! master-symmetry certificate `S_z K = S_w K`.

use std::fmt;

use weyl_forge_exact::{RationalFunction, Var};

use crate::bispectral::DressedWave;
use crate::concomitant::concomitant_matrix;
use crate::error::{Error, Result};
use crate::weylops::DiffOperator;

type Grid = [[RationalFunction; 2]; 2];

fn zero_grid() -> Grid {
    std::array::from_fn(|_| std::array::from_fn(|_| RationalFunction::zero()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelExpr {
    pub t2: RationalFunction,
    /// `coeffs[i][j]` multiplies `Ai^{(i)}(t2+z)·Ai^{(j)}(t2+w)`.
    pub coeffs: Grid,
}

/// One `u`-derivative of `a·Ai(u) + b·Ai′(u)` with `u = arg`, coefficients
/// differentiated in `var`.
fn derive_pair(
    a: &RationalFunction,
    b: &RationalFunction,
    var: Var,
    arg: &RationalFunction,
) -> (RationalFunction, RationalFunction) {
    (&a.derivative(var) + &(arg * b), a + &b.derivative(var))
}

impl KernelExpr {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    fn arg(&self, v: Var) -> RationalFunction {
        &self.t2 + &RationalFunction::var(v)
    }

    /// `K(w, z)` in the same representation.
    pub fn swapped(&self) -> Result<KernelExpr> {
        let (z, w) = (Var::z(), Var::w());
        let subs = [(z, RationalFunction::var(w)), (w, RationalFunction::var(z))];
        let mut out = zero_grid();
        for i in 0..2 {
            for j in 0..2 {
                out[j][i] = self.coeffs[i][j].substitute_many(&subs)?;
            }
        }
        Ok(KernelExpr { t2: self.t2.clone(), coeffs: out })
    }

    /// `r_ij(z,w) = r_ji(w,z)`.
    pub fn is_symmetric(&self) -> Result<bool> {
        Ok(self.swapped()?.coeffs == self.coeffs)
    }

    /// One derivative in `z` (rows carry the `z` Airy factor).
    fn d_z(&self) -> Grid {
        let (z, arg) = (Var::z(), self.arg(Var::z()));
        let mut out = zero_grid();
        for j in 0..2 {
            let (a, b) = derive_pair(&self.coeffs[0][j], &self.coeffs[1][j], z, &arg);
            out[0][j] = a;
            out[1][j] = b;
        }
        out
    }

    /// One derivative in `w` (columns carry the `w` Airy factor).
    fn d_w(&self) -> Grid {
        let (w, arg) = (Var::w(), self.arg(Var::w()));
        let mut out = zero_grid();
        for i in 0..2 {
            let (a, b) = derive_pair(&self.coeffs[i][0], &self.coeffs[i][1], w, &arg);
            out[i][0] = a;
            out[i][1] = b;
        }
        out
    }

    fn apply_with(&self, s: &DiffOperator, var: Var) -> Result<KernelExpr> {
        let s = s.rename_if_constant(Var::z());
        if s.var() != Var::z() {
            return Err(Error::VariableMismatch(s.var().name(), "z".into()));
        }
        let subs = [(Var::z(), RationalFunction::var(var))];
        let mut cur = self.clone();
        let mut acc = zero_grid();
        for (k, c) in s.coeffs().iter().enumerate() {
            if k > 0 {
                cur.coeffs = if var == Var::z() { cur.d_z() } else { cur.d_w() };
            }
            if c.is_zero() {
                continue;
            }
            let c = c.substitute_many(&subs)?;
            for (row, crow) in acc.iter_mut().zip(&cur.coeffs) {
                for (e, ce) in row.iter_mut().zip(crow) {
                    *e = &*e + &(&c * ce);
                }
            }
        }
        Ok(KernelExpr { t2: self.t2.clone(), coeffs: acc })
    }

    /// `S(z, ∂z)` acting on the first argument.
    pub fn apply_z(&self, s: &DiffOperator) -> Result<KernelExpr> {
        self.apply_with(s, Var::z())
    }

    /// `S(w, ∂w)` acting on the second argument (`S` is given in `z`).
    pub fn apply_w(&self, s: &DiffOperator) -> Result<KernelExpr> {
        self.apply_with(s, Var::w())
    }

    /// `∂K/∂t2` when `t2` is a symbol.
    pub fn derivative_t2(&self) -> Result<KernelExpr> {
        let t = self
            .t2
            .vars()
            .into_iter()
            .find(|&v| self.t2 == RationalFunction::var(v))
            .ok_or_else(|| Error::Invalid(format!("t2 = {} is not a symbol", self.t2)))?;
        let mut out = zero_grid();
        let (gz, gw) = (self.d_z(), self.d_w());
        // the Airy factors move with t2 exactly as with z or w; remove the
        // coefficient derivatives d_z / d_w included and add the t2 one
        for i in 0..2 {
            for j in 0..2 {
                let r = &self.coeffs[i][j];
                let own = &(&r.derivative(t) - &r.derivative(Var::z())) - &r.derivative(Var::w());
                out[i][j] = &(&gz[i][j] + &gw[i][j]) + &own;
            }
        }
        Ok(KernelExpr { t2: self.t2.clone(), coeffs: out })
    }

    /// `Ψ(t2, z)·Ψ(t2, w)`.
    pub fn wave_product(wave: &DressedWave, t2: &RationalFunction) -> Result<KernelExpr> {
        let at = |f: &RationalFunction| f.substitute(Var::x(), t2);
        let (az, bz) = (at(&wave.a)?, at(&wave.b)?);
        let to_w = [(Var::z(), RationalFunction::var(Var::w()))];
        let (aw, bw) = (az.substitute_many(&to_w)?, bz.substitute_many(&to_w)?);
        let coeffs = [[&az * &aw, &az * &bw], [&bz * &aw, &bz * &bw]];
        Ok(KernelExpr { t2: t2.clone(), coeffs })
    }
}

impl std::ops::Sub for &KernelExpr {
    type Output = KernelExpr;
    fn sub(self, o: &KernelExpr) -> KernelExpr {
        let mut out = zero_grid();
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = &self.coeffs[i][j] - &o.coeffs[i][j];
            }
        }
        KernelExpr { t2: self.t2.clone(), coeffs: out }
    }
}

impl fmt::Display for KernelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["Ai", "Ai'"];
        let mut first = true;
        for i in 0..2 {
            for j in 0..2 {
                let c = &self.coeffs[i][j];
                if c.is_zero() {
                    continue;
                }
                if !first {
                    writeln!(f, " +")?;
                }
                first = false;
                write!(f, "({c})*{}(t2+z)*{}(t2+w)", names[i], names[j])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "\n  with t2 = {}", self.t2)
    }
}

/// `x`-jets `f^{(k)}(t2)` of `a·Ai(x+v) + b·Ai′(x+v)` as `(Ai, Ai′)`
/// coefficient pairs at `t2+v`.
fn airy_jets(
    a: &RationalFunction,
    b: &RationalFunction,
    v: Var,
    t2: &RationalFunction,
    n: usize,
) -> Result<Vec<(RationalFunction, RationalFunction)>> {
    let x = Var::x();
    let arg = &RationalFunction::var(x) + &RationalFunction::var(v);
    let (mut ca, mut cb) = (a.clone(), b.clone());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k > 0 {
            (ca, cb) = derive_pair(&ca, &cb, x, &arg);
        }
        out.push((ca.substitute(x, t2)?, cb.substitute(x, t2)?));
    }
    Ok(out)
}

/// `K` for `Ψ_Ai`: `(Ai′(t2+z)Ai(t2+w) − Ai(t2+z)Ai′(t2+w))/(z − w)`; for a
/// dressed wave `(q(w)/q(z))·K_Ai + (1/q(z))·C_P(Ψ_Ai(·,z), Ψ(·,w)/p; t2)`.
pub fn build_kernel(wave: &DressedWave, t2: &RationalFunction) -> Result<KernelExpr> {
    let (z, w) = (Var::z(), Var::w());
    let inv = (&RationalFunction::var(z) - &RationalFunction::var(w)).recip()?;
    let mut coeffs = zero_grid();
    coeffs[1][0] = inv.clone();
    coeffs[0][1] = -inv;
    let Some(d) = &wave.dressing else {
        return Ok(KernelExpr { t2: t2.clone(), coeffs });
    };
    let qz = RationalFunction::from_poly(d.q.clone());
    let to_w = [(z, RationalFunction::var(w))];
    let qw = qz.substitute_many(&to_w)?;
    let qzinv = qz.recip()?;
    let ratio = &qw * &qzinv;
    for c in coeffs.iter_mut().flatten() {
        *c = &*c * &ratio;
    }
    let n = d.p_op.order();
    let m = concomitant_matrix(&d.p_op, t2)?;
    let jf = airy_jets(&RationalFunction::one(), &RationalFunction::zero(), z, t2, n)?;
    let pinv = d.p.recip()?;
    let ga = (&wave.a * &pinv).substitute_many(&to_w)?;
    let gb = (&wave.b * &pinv).substitute_many(&to_w)?;
    let jg = airy_jets(&ga, &gb, w, t2, n)?;
    for (r, fr) in jf.iter().enumerate() {
        for (c, gc) in jg.iter().enumerate() {
            let e = m.entries.get(r, c);
            if e.is_zero() {
                continue;
            }
            let e = e * &qzinv;
            let f = [&fr.0, &fr.1];
            let g = [&gc.0, &gc.1];
            for i in 0..2 {
                for j in 0..2 {
                    if f[i].is_zero() || g[j].is_zero() {
                        continue;
                    }
                    coeffs[i][j] = &coeffs[i][j] + &(&(&e * f[i]) * g[j]);
                }
            }
        }
    }
    Ok(KernelExpr { t2: t2.clone(), coeffs })
}

/// `S(z,∂z)·K = S(w,∂w)·K` exactly.
pub fn verify_master_symmetry(s: &DiffOperator, k: &KernelExpr) -> Result<bool> {
    Ok((&k.apply_z(s)? - &k.apply_w(s)?).is_zero())
}
