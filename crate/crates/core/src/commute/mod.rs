//! Differential operators commuting with the integral operators
//! `f ↦ ∫_{t1}^∞ K(z,w) f(w) dw`, `K(z,w) = ∫_{t2}^∞ Ψ(x,z)Ψ(x,w) dx`.
//!
//! Candidates are symmetric elements of a Fourier-algebra piece; the
//! commuting ones are those whose concomitant vanishes at `t1` and whose
//! preimage's concomitant vanishes at `t2`.

mod catalog;
mod kernel;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use weyl_forge_exact::{MultiPoly, Rational, RationalFunction, Var};

use crate::bispectral::{filtration_dim, AnsatzBounds, DressedWave, Method};
use crate::concomitant::concomitant_matrix_sized;
use crate::error::{Error, Result};
use crate::linear::{combine_ops, operator_relations, rref, LinearSystem};
use crate::weylops::{commutator, DiffOperator, DividedForm};

pub use catalog::{catalog, level_one_spec, level_two_spec, Catalog, Level};
pub use kernel::{build_kernel, verify_master_symmetry, KernelExpr};

/// A solution of the commuting problem with its `x`-side preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingOperator {
    /// `S(z, ∂z)`.
    pub op: DiffOperator,
    /// `b_Ψ⁻¹(S)` in `x`.
    pub preimage: DiffOperator,
    /// Divided template data when `S` fits it.
    pub divided: Option<DividedForm>,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Template factor `f` in `Σ ∂^k a_k f^k ∂^k`; `None` skips the template.
    pub factor: Option<RationalFunction>,
    pub parallel: bool,
}

/// `(k, j) ↦` coefficient of `z^j ∂^k` in a Weyl element.
fn weyl_coords(op: &DiffOperator) -> Result<BTreeMap<(usize, usize), RationalFunction>> {
    let z = Var::z();
    let mut out = BTreeMap::new();
    for (k, c) in op.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.denom().contains_var(z) {
            return Err(Error::NotPolynomial(op.to_string()));
        }
        let den = RationalFunction::from_poly(c.denom().clone()).recip()?;
        for (j, cj) in c.numer().coeffs_in(z).into_iter().enumerate() {
            if !cj.is_zero() {
                out.insert((k, j), &RationalFunction::from_poly(cj) * &den);
            }
        }
    }
    Ok(out)
}

/// `q(z)` of the dressing, `1` for `Ψ_Ai`.
fn wave_q(w: &DressedWave) -> RationalFunction {
    w.dressing
        .as_ref()
        .map_or_else(RationalFunction::one, |d| RationalFunction::from_poly(d.q.clone()))
}

/// Power `s` with `q = z^s`, if `q` is a monomial.
fn monomial_power(q: &RationalFunction) -> Option<u32> {
    let z = Var::z();
    let s = q.as_polynomial()?.degree_in(z)?;
    (RationalFunction::var(z).pow(s as u32) == *q).then_some(s as u32)
}

/// Scales `op` to the monic divided template, or to a monic top coefficient.
fn normalize(op: &DiffOperator, q: &RationalFunction, factor: Option<&RationalFunction>) -> (DiffOperator, Option<DividedForm>) {
    let form = match (factor, monomial_power(q)) {
        (Some(f), Some(s)) => DividedForm::from_operator(op, s, f),
        _ => None,
    };
    let lc = match &form {
        Some(d) => d.a.iter().rev().find(|c| !c.is_zero()).map(|c| c.numer().leading_coeff()),
        None => Some(op.leading_coeff().numer().leading_coeff()),
    };
    let Some(lc) = lc.filter(|c| *c != Rational::from_integer(0.into())) else {
        return (op.clone(), form);
    };
    let inv = lc.recip();
    (op.scale(&inv), form.map(|d| d.monic()))
}

/// Reduced basis, modulo constants, of symmetric `S ∈ 𝔉_z(Ψ)` with
/// `ord S ≤ order`, `ord b⁻¹(S) ≤ order`, `C_S(·,·;t1) = 0` and
/// `C_{b⁻¹(S)}(·,·;t2) = 0`, ordered by increasing order.
pub fn find_commuting(
    w: &DressedWave,
    order: usize,
    t1: &RationalFunction,
    t2: &RationalFunction,
    opts: &SolveOptions,
) -> Result<Vec<CommutingOperator>> {
    if order % 2 == 1 || order == 0 {
        return Err(Error::Invalid(format!("order must be even and positive, got {order}")));
    }
    let piece = filtration_dim(w, order, order, true, Method::Conjugation, &AnsatzBounds::default())?;
    let n = piece.dim();
    let mut sys = LinearSystem::new(n, &[]).parallel(opts.parallel);
    let mats_s = piece
        .images
        .iter()
        .map(|s| concomitant_matrix_sized(&s.rename_if_constant(Var::z()), t1, order))
        .collect::<Result<Vec<_>>>()?;
    let mats_a = piece
        .basis
        .iter()
        .map(|a| concomitant_matrix_sized(&a.rename_if_constant(Var::x()), t2, order))
        .collect::<Result<Vec<_>>>()?;
    for mats in [&mats_s, &mats_a] {
        for r in 0..order {
            for c in 0..order {
                let vals: Vec<(usize, RationalFunction)> =
                    mats.iter().enumerate().map(|(u, m)| (u, m.entries.get(r, c).clone())).collect();
                sys.add_identity(&vals);
            }
        }
    }
    let ker = sys.nullspace();

    // coordinates of q S q, columns by (k, j) descending, then the kernel vector
    let q = wave_q(w);
    let z = Var::z();
    let sols: Vec<DiffOperator> = ker.iter().map(|v| combine_ops(z, v, &piece.images)).collect();
    let coords = sols
        .iter()
        .map(|s| weyl_coords(&s.left_mul_fn(&q).right_mul_fn(&q)))
        .collect::<Result<Vec<_>>>()?;
    let keys: BTreeSet<(usize, usize)> = coords.iter().flat_map(|c| c.keys().copied()).collect();
    let keys: Vec<(usize, usize)> = keys.into_iter().rev().collect();
    let rows: Vec<Vec<RationalFunction>> = coords
        .iter()
        .zip(&ker)
        .map(|(c, v)| {
            keys.iter()
                .map(|k| c.get(k).cloned().unwrap_or_else(RationalFunction::zero))
                .chain(v.iter().cloned())
                .collect()
        })
        .collect();
    let reduced = rref(rows);

    let mut out = Vec::new();
    for row in reduced {
        let v = &row[keys.len()..];
        let s = combine_ops(z, v, &piece.images);
        if s.order() == 0 && s.coeff(0).constant_value().is_some() {
            continue;
        }
        let a = combine_ops(Var::x(), v, &piece.basis);
        let (s_n, divided) = normalize(&s, &q, opts.factor.as_ref());
        let scale = if s.is_zero() {
            RationalFunction::one()
        } else {
            &s_n.leading_coeff() / &s.leading_coeff()
        };
        out.push(CommutingOperator {
            op: s_n,
            preimage: a.left_mul_fn(&scale),
            divided,
        });
    }
    out.sort_by_key(|c| c.op.order());
    Ok(out)
}

/// One stage of the certificate chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub stages: Vec<Stage>,
    pub relation: Option<OperatorCurve>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.passed)
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| !s.passed)
    }
}

/// Symmetry, concomitant vanishing at both endpoints, master symmetry on
/// the kernel, pairwise commutators and (for two operators) a
/// Burchnall–Chaundy relation.
pub fn certify(
    w: &DressedWave,
    ops: &[CommutingOperator],
    t1: &RationalFunction,
    t2: &RationalFunction,
    bc_max_weight: usize,
) -> Result<Certificate> {
    let k = build_kernel(w, t2)?;
    let mut stages = Vec::new();
    let mut push = |name: String, passed: bool| stages.push(Stage { name, passed });
    push("kernel symmetric".into(), k.is_symmetric()?);
    for (i, c) in ops.iter().enumerate() {
        let s = &c.op;
        push(format!("S{i}: S = S*"), s.is_symmetric());
        push(
            format!("S{i}: concomitant at t1 vanishes"),
            concomitant_matrix_sized(s, t1, s.order().max(1))?.is_zero(),
        );
        let a = &c.preimage;
        push(
            format!("S{i}: preimage concomitant at t2 vanishes"),
            concomitant_matrix_sized(a, t2, a.order().max(1))?.is_zero(),
        );
        let agrees = crate::bispectral::act_x(a, w)?.same_function(&crate::bispectral::act_z(s, w)?);
        push(format!("S{i}: b(preimage) = S"), agrees);
        push(format!("S{i}: master symmetry"), verify_master_symmetry(s, &k)?);
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            push(format!("[S{i}, S{j}] = 0"), commutator(&ops[i].op, &ops[j].op)?.is_zero());
        }
    }
    let mut relation = None;
    if ops.len() == 2 {
        match bc_relation(&ops[0].op, &ops[1].op, bc_max_weight) {
            Ok(c) => {
                push("BC relation annihilates the pair".into(), c.evaluate()?.is_zero());
                relation = Some(c);
            }
            Err(Error::NoRelation(_)) => push(format!("BC relation within weight {bc_max_weight}"), false),
            Err(e) => return Err(e),
        }
    }
    Ok(Certificate { stages, relation })
}

/// `F(X, Y) = Σ c_ij X^i Y^j = 0` for a commuting pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorCurve {
    pub generators: (DiffOperator, DiffOperator),
    /// `((i, j), c_ij)`, highest weight first; the leading term has coefficient 1.
    pub terms: Vec<((u32, u32), RationalFunction)>,
    /// Weighted degree `i·ord X + j·ord Y` of the leading term.
    pub weight: usize,
}

impl OperatorCurve {
    /// `F(X, Y)` as an operator; zero for a valid relation.
    pub fn evaluate(&self) -> Result<DiffOperator> {
        let (x, y) = &self.generators;
        let var = x.var();
        let mut acc = DiffOperator::zero(var);
        for ((i, j), c) in &self.terms {
            let m = &x.pow(*i) * &y.pow(*j);
            acc = &acc + &m.left_mul_fn(c);
        }
        Ok(acc)
    }

    /// `F` as a polynomial in symbols `X`, `Y` when the coefficients are
    /// polynomial in the parameters.
    pub fn to_poly(&self) -> Option<MultiPoly> {
        let (vx, vy) = (Var::new("X"), Var::new("Y"));
        let mut acc = MultiPoly::zero();
        for ((i, j), c) in &self.terms {
            let m = &MultiPoly::var_pow(vx, *i as u16) * &MultiPoly::var_pow(vy, *j as u16);
            acc = &acc + &(&m * c.as_polynomial()?);
        }
        Some(acc)
    }

    pub fn coeff(&self, i: u32, j: u32) -> RationalFunction {
        self.terms
            .iter()
            .find(|(ij, _)| *ij == (i, j))
            .map_or_else(RationalFunction::zero, |(_, c)| c.clone())
    }
}

/// `Y'² = X'³ + P·X' + Q` with `Y' = Y + (c11·X + c01)/2`, `X' = X + A/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassForm {
    pub curve: OperatorCurve,
    /// `X' − X` (a constant).
    pub x_shift: RationalFunction,
    /// `Y' − Y = y_shift_x·X + y_shift`.
    pub y_shift_x: RationalFunction,
    pub y_shift: RationalFunction,
    pub p: RationalFunction,
    pub q: RationalFunction,
}

impl OperatorCurve {
    /// Short Weierstrass form for a weight-`3·ord X` relation with leading
    /// terms `Y² − X³`, re-derived on the shifted generators.
    pub fn weierstrass(&self) -> Result<Option<WeierstrassForm>> {
        let allowed = [(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)];
        if self.terms.iter().any(|(ij, _)| !allowed.contains(ij))
            || !self.coeff(0, 2).is_one()
            || self.coeff(3, 0) != -RationalFunction::one()
        {
            return Ok(None);
        }
        let (x, y) = &self.generators;
        let half = Rational::new(1.into(), 2.into());
        let (c11, c01) = (self.coeff(1, 1).scale(&half), self.coeff(0, 1).scale(&half));
        let y_op = &x.left_mul_fn(&c11) + &DiffOperator::function(x.var(), c01.clone());
        // Y² + 2c11 XY + 2c01 Y = Y'² − (c11 X + c01)², so
        // Y'² = X³ + A X² + B X + C
        let a = &(&c11 * &c11) - &self.coeff(2, 0);
        let b = &(&(&c11 * &c01) + &(&c11 * &c01)) - &self.coeff(1, 0);
        let c = &(&c01 * &c01) - &self.coeff(0, 0);
        let x_shift = a.scale(&Rational::new(1.into(), 3.into()));
        // X = X' − A/3
        let p = &b - (&(&a * &a).scale(&Rational::new(1.into(), 3.into())));
        let q = &(&c - &(&a * &b).scale(&Rational::new(1.into(), 3.into())))
            + &(&a * &(&a * &a)).scale(&Rational::new(2.into(), 27.into()));
        let xp = x + &DiffOperator::function(x.var(), x_shift.clone());
        let yp = y + &y_op;
        let curve = bc_relation(&xp, &yp, self.weight)?;
        Ok(Some(WeierstrassForm { curve, x_shift, y_shift_x: c11, y_shift: c01, p, q }))
    }
}

impl fmt::Display for OperatorCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |i: u32, j: u32| {
            let mut parts = Vec::new();
            match i {
                0 => {}
                1 => parts.push("X".to_string()),
                _ => parts.push(format!("X^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("Y".to_string()),
                _ => parts.push(format!("Y^{j}")),
            }
            parts.join("*")
        };
        let mut first = true;
        for ((i, j), c) in &self.terms {
            let m = mono(*i, *j);
            let term = match (m.is_empty(), c.is_one()) {
                (true, _) => format!("({c})"),
                (false, true) => m,
                (false, false) => format!("({c})*{m}"),
            };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{term}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " = 0")
    }
}

/// Minimal-weight relation among `X^i Y^j` with `i·ord X + j·ord Y ≤
/// max_weight`. A relation needs two monomials of equal top weight, so only
/// such weights are tried.
pub fn bc_relation(x: &DiffOperator, y: &DiffOperator, max_weight: usize) -> Result<OperatorCurve> {
    if !commutator(x, y)?.is_zero() {
        return Err(Error::Invalid("generators do not commute".into()));
    }
    let (a, b) = (x.order(), y.order());
    if a == 0 || b == 0 {
        return Err(Error::Invalid("generators must have positive order".into()));
    }
    let mut monos: Vec<(usize, u32, u32)> = Vec::new();
    for j in 0..=max_weight / b {
        for i in 0..=(max_weight - j * b) / a {
            monos.push((i * a + j * b, i as u32, j as u32));
        }
    }
    // weight descending, then Y-power descending
    monos.sort_by(|p, q| q.0.cmp(&p.0).then(q.2.cmp(&p.2)));
    let mut weights: Vec<usize> = monos.iter().map(|m| m.0).collect();
    weights.dedup();
    let candidates: Vec<usize> = weights
        .iter()
        .rev()
        .copied()
        .filter(|&wt| monos.iter().filter(|m| m.0 == wt).count() >= 2)
        .collect();
    let var = x.var();
    let mut xp = vec![DiffOperator::one(var)];
    let mut yp = vec![DiffOperator::one(var)];
    for wt in candidates {
        let used: Vec<&(usize, u32, u32)> = monos.iter().filter(|m| m.0 <= wt).collect();
        let ops: Vec<DiffOperator> = used
            .iter()
            .map(|&&(_, i, j)| {
                while xp.len() <= i as usize {
                    let next = &xp[xp.len() - 1] * x;
                    xp.push(next);
                }
                while yp.len() <= j as usize {
                    let next = &yp[yp.len() - 1] * y;
                    yp.push(next);
                }
                &xp[i as usize] * &yp[j as usize]
            })
            .collect();
        let rels = operator_relations(&ops, var);
        // the relation whose leading monomial comes last is the minimal one
        let Some(v) = rels
            .iter()
            .filter(|v| used.iter().zip(v.iter()).any(|(m, c)| m.0 == wt && !c.is_zero()))
            .max_by_key(|v| v.iter().position(|c| !c.is_zero()))
        else {
            continue;
        };
        let lead = v.iter().position(|c| !c.is_zero()).expect("nonzero relation");
        let inv = v[lead].recip()?;
        let terms = used
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| ((m.1, m.2), c * &inv))
            .collect();
        return Ok(OperatorCurve {
            generators: (x.clone(), y.clone()),
            terms,
            weight: used[lead].0,
        });
    }
    Err(Error::NoRelation(format!("weight ≤ {max_weight} with orders ({a}, {b})")))
}

/// Discriminant of `X³ − ((t1²−t1t2+t2²)/3)X + (t1−2t2)(2t1−t2)(t1+t2)/27`
/// against the reference closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantReport {
    pub computed: RationalFunction,
    pub reference: RationalFunction,
    /// Equal up to a nonzero constant factor.
    pub agrees: bool,
    /// `(computed, reference)` at `t1 = t2 = 1`.
    pub at_one: (Rational, Rational),
}

pub fn discriminant_check() -> Result<DiscriminantReport> {
    let rf = |s: &str| weyl_forge_exact::parse_ratfun(s).map_err(Error::from);
    let p = rf("-(t1^2 - t1*t2 + t2^2)/3")?;
    let q = rf("(t1 - 2*t2)*(2*t1 - t2)*(t1 + t2)/27")?;
    // x³ + p x + q has discriminant −4p³ − 27q²
    let computed = &p.pow(3).scale(&Rational::from_integer((-4).into())) - &q.pow(2).scale(&Rational::from_integer(27.into()));
    let reference = rf(
        "-16/27*(260*t1^6 - 780*t1^5*t2 - 627*t1^4*t2^2 + 2554*t1^3*t2^3 - 627*t1^2*t2^4 - 780*t1*t2^5 + 260*t2^6)",
    )?;
    let one = Rational::from_integer(1.into());
    let pt = [(Var::new("t1"), one.clone()), (Var::new("t2"), one)];
    let at_one = (computed.eval(&pt)?, reference.eval(&pt)?);
    // agreement up to a nonzero constant factor
    let ratio = &computed / &reference;
    Ok(DiscriminantReport {
        agrees: ratio.constant_value().is_some(),
        computed,
        reference,
        at_one,
    })
}
