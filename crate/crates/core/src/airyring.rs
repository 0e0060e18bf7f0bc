//! The differential ring generated by `Ai, Ai′, Bi, Bi′` at shifted arguments.
//!
//! Per shift `a_k` there are four symbols `A_k, A′_k, B_k, B′_k`; second
//! derivatives never appear (`A″ = (x + a)·A`) and the monomial `A′_k·B_k`
//! is always rewritten through `A_k B′_k − A′_k B_k = σ/π`.

use std::collections::BTreeMap;
use std::fmt;

use weyl_forge_exact::{MultiPoly, RFMatrix, RationalFunction, Var};

use crate::concomitant::{kernel_pairing, AiryKind, WronskianSign};
use crate::error::{Error, Result};
use crate::weylops::{substitute_airy, DiffOperator};

const A: usize = 0;
const AP: usize = 1;
const B: usize = 2;
const BP: usize = 3;

/// Exponents of the `4r` symbols, symbol `4k + s` for shift `k`.
type Key = Vec<u8>;

#[derive(Clone, PartialEq, Eq)]
pub struct AiryElement {
    shifts: Vec<RationalFunction>,
    sign: WronskianSign,
    terms: BTreeMap<Key, RationalFunction>,
}

impl AiryElement {
    pub fn zero(shifts: &[RationalFunction], sign: WronskianSign) -> Self {
        AiryElement {
            shifts: shifts.to_vec(),
            sign,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(shifts: &[RationalFunction], sign: WronskianSign, c: RationalFunction) -> Self {
        let mut e = Self::zero(shifts, sign);
        e.add_term(vec![0; 4 * shifts.len()], c);
        e
    }

    fn symbol(shifts: &[RationalFunction], sign: WronskianSign, k: usize, s: usize) -> Self {
        let mut key = vec![0; 4 * shifts.len()];
        key[4 * k + s] = 1;
        let mut e = Self::zero(shifts, sign);
        e.add_term(key, RationalFunction::one());
        e
    }

    /// `Ai^{(m)}(x + a_k)` or `Bi^{(m)}(x + a_k)`, reduced.
    pub fn airy(shifts: &[RationalFunction], sign: WronskianSign, kind: AiryKind, k: usize, m: u32) -> Self {
        let s = match kind {
            AiryKind::Ai => A,
            AiryKind::Bi => B,
        };
        let mut e = Self::symbol(shifts, sign, k, s);
        for _ in 0..m {
            e = e.derive();
        }
        e
    }

    pub fn shifts(&self) -> &[RationalFunction] {
        &self.shifts
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient when no Airy symbol survives.
    pub fn as_rational(&self) -> Option<RationalFunction> {
        match self.terms.len() {
            0 => Some(RationalFunction::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                k.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Raw insertion without reduction.
    fn add_term(&mut self, key: Key, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Rewrites every `A′_k B_k` until none remain.
    fn reduce(mut self) -> Self {
        let r = self.shifts.len();
        let w = self.sign.det_wronskian();
        loop {
            let hit = self
                .terms
                .keys()
                .find(|key| (0..r).any(|k| key[4 * k + AP] > 0 && key[4 * k + B] > 0))
                .cloned();
            let Some(key) = hit else {
                return self;
            };
            let c = self.terms.remove(&key).unwrap();
            let k = (0..r).find(|&k| key[4 * k + AP] > 0 && key[4 * k + B] > 0).unwrap();
            // A′B = AB′ − σ/π
            let mut base = key.clone();
            base[4 * k + AP] -= 1;
            base[4 * k + B] -= 1;
            let mut ab = base.clone();
            ab[4 * k + A] += 1;
            ab[4 * k + BP] += 1;
            self.add_term(ab, c.clone());
            self.add_term(base, -&(&c * &w));
        }
    }

    fn same_ring(&self, other: &AiryElement) {
        assert!(
            self.shifts == other.shifts && self.sign == other.sign,
            "Airy elements over different shift lists"
        );
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero(&self.shifts, self.sign);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &AiryElement) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &AiryElement) -> Self {
        self.add(&other.scale(&RationalFunction::int(-1)))
    }

    pub fn mul(&self, other: &AiryElement) -> Self {
        self.same_ring(other);
        let mut out = Self::zero(&self.shifts, self.sign);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let key: Key = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.add_term(key, v1 * v2);
            }
        }
        out.reduce()
    }

    /// `d/dx` with the Airy equation at each shift.
    pub fn derive(&self) -> Self {
        let x = Var::x();
        let mut out = Self::zero(&self.shifts, self.sign);
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c.derivative(x));
            for (i, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (k, s) = (i / 4, i % 4);
                let mut rest = key.clone();
                rest[i] -= 1;
                let ce = c.scale(&weyl_forge_exact::int(e as i64));
                match s {
                    A | B => {
                        rest[i + 1] += 1;
                        out.add_term(rest, ce);
                    }
                    _ => {
                        rest[i - 1] += 1;
                        let arg = &RationalFunction::var(x) + &self.shifts[k];
                        out.add_term(rest, &ce * &arg);
                    }
                }
            }
        }
        out.reduce()
    }

    /// The value at `x = t` with symbols read at `t + a_k`: only the
    /// coefficients change.
    pub fn substitute_x(&self, t: &RationalFunction) -> Result<Self> {
        let mut out = Self::zero(&self.shifts, self.sign);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.substitute(Var::x(), t)?);
        }
        Ok(out)
    }

    /// Coefficients on the basis `{A_k, A′_k}` for elements linear in one shift's `A` symbols.
    pub fn linear_ai_coeffs(&self, k: usize) -> Option<(RationalFunction, RationalFunction)> {
        let mut a = RationalFunction::zero();
        let mut b = RationalFunction::zero();
        for (key, c) in &self.terms {
            let total: u32 = key.iter().map(|&e| e as u32).sum();
            if total != 1 {
                return None;
            }
            if key[4 * k + A] == 1 {
                a = c.clone();
            } else if key[4 * k + AP] == 1 {
                b = c.clone();
            } else {
                return None;
            }
        }
        Some((a, b))
    }
}

impl fmt::Display for AiryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["Ai", "Ai'", "Bi", "Bi'"];
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in key.iter().enumerate() {
                if e > 0 {
                    write!(f, "*{}[{}]", names[i % 4], i / 4)?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AiryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Determinant of `rows[i][cols[j]]` by expansion over column subsets.
fn det_rows(m: &[Vec<AiryElement>], rows: &[usize], proto: &AiryElement) -> AiryElement {
    let n = rows.len();
    let one = AiryElement::constant(&proto.shifts, proto.sign, RationalFunction::one());
    if n == 0 {
        return one;
    }
    // dp[mask] = det of rows[0..|mask|] on the columns in mask
    let mut dp: Vec<Option<AiryElement>> = vec![None; 1 << n];
    dp[0] = Some(one);
    for mask in 1usize..(1 << n) {
        let r = mask.count_ones() as usize - 1;
        let mut acc = AiryElement::zero(&proto.shifts, proto.sign);
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = &m[rows[r]][c];
            if entry.is_zero() {
                continue;
            }
            let rest = mask & !(1 << c);
            let sub = dp[rest].as_ref().unwrap();
            if sub.is_zero() {
                continue;
            }
            let greater = (mask >> (c + 1)).count_ones();
            let t = entry.mul(sub);
            acc = if greater % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
        }
        dp[mask] = Some(acc);
    }
    dp[(1 << n) - 1].take().unwrap()
}

/// Rows of derivatives `0..n` of each function.
fn derivative_table(fs: &[AiryElement], n: usize) -> Vec<Vec<AiryElement>> {
    let mut rows = vec![fs.to_vec()];
    for i in 1..n {
        let next = rows[i - 1].iter().map(|e| e.derive()).collect();
        rows.push(next);
    }
    rows
}

/// `det[f_j^{(i)}]`.
pub fn wronskian(fs: &[AiryElement]) -> Result<AiryElement> {
    let Some(first) = fs.first() else {
        return Err(Error::Invalid("empty wronskian".into()));
    };
    let n = fs.len();
    let table = derivative_table(fs, n);
    let rows: Vec<usize> = (0..n).collect();
    Ok(det_rows(&table, &rows, first))
}

/// Roots `(a_k, d_k)` of `q` and pair-generators `(root, α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceSpec {
    pub roots: Vec<(RationalFunction, u32)>,
    pub pairs: Vec<(usize, Vec<RationalFunction>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianReport {
    pub ok: bool,
    /// Failing `(i, j, root)` with the condition value.
    pub violations: Vec<(usize, usize, usize, RationalFunction)>,
}

impl SubspaceSpec {
    pub fn shifts(&self) -> Vec<RationalFunction> {
        self.roots.iter().map(|r| r.0.clone()).collect()
    }

    pub fn degree(&self) -> u32 {
        self.roots.iter().map(|r| r.1).sum()
    }

    /// Shape checks: one pair per unit of `Σ d_k`, α lengths `2 d_k`,
    /// pairs at each root independent and no more than `d_k` of them.
    pub fn validate(&self) -> Result<()> {
        if self.pairs.len() != self.degree() as usize {
            return Err(Error::Invalid(format!(
                "{} pairs for total multiplicity {}",
                self.pairs.len(),
                self.degree()
            )));
        }
        for (i, (root, alpha)) in self.pairs.iter().enumerate() {
            let Some((_, d)) = self.roots.get(*root) else {
                return Err(Error::Index(format!("pair {i} names root {root}")));
            };
            if alpha.len() != 2 * *d as usize {
                return Err(Error::Invalid(format!(
                    "pair {i} has {} coefficients, expected {}",
                    alpha.len(),
                    2 * d
                )));
            }
        }
        for (k, (_, d)) in self.roots.iter().enumerate() {
            let rows: Vec<Vec<RationalFunction>> =
                self.pairs.iter().filter(|p| p.0 == k).map(|p| p.1.clone()).collect();
            if rows.len() != *d as usize {
                return Err(Error::Invalid(format!("root {k} carries {} pairs, expected {d}", rows.len())));
            }
            if RFMatrix::from_rows(rows.clone())?.rank() != rows.len() {
                return Err(Error::Invalid(format!("pairs at root {k} are dependent")));
            }
        }
        Ok(())
    }

    /// `f_i = Σ α_{im} Ai^{(m)}(x + a_{ℓ_i})` (or `Bi`).
    pub fn generator(&self, i: usize, kind: AiryKind, sign: WronskianSign) -> AiryElement {
        let shifts = self.shifts();
        let (root, alpha) = &self.pairs[i];
        let mut acc = AiryElement::zero(&shifts, sign);
        for (m, a) in alpha.iter().enumerate() {
            if !a.is_zero() {
                let t = AiryElement::airy(&shifts, sign, kind, *root, m as u32).scale(a);
                acc = acc.add(&t);
            }
        }
        acc
    }

    /// `q(z) = Π (z − a_k)^{d_k}`.
    pub fn q(&self) -> Result<MultiPoly> {
        let z = MultiPoly::var(Var::z());
        let mut q = MultiPoly::one();
        for (a, d) in &self.roots {
            let a = a
                .as_polynomial()
                .ok_or_else(|| Error::Invalid(format!("root {a} must be polynomial in the parameters")))?;
            q = &q * &(&z - a).pow(*d);
        }
        Ok(q)
    }
}

/// Lagrangian conditions `C_{q(L)²}(f_i, g_j) = 0` for all pairs on a common root.
pub fn check_lagrangian(spec: &SubspaceSpec, sign: WronskianSign) -> Result<LagrangianReport> {
    spec.validate()?;
    let mut violations = Vec::new();
    for (i, (ri, ai)) in spec.pairs.iter().enumerate() {
        for (j, (rj, aj)) in spec.pairs.iter().enumerate() {
            if ri != rj {
                continue;
            }
            let mut val = RationalFunction::zero();
            for (m, am) in ai.iter().enumerate() {
                for (n, an) in aj.iter().enumerate() {
                    if am.is_zero() || an.is_zero() {
                        continue;
                    }
                    let kp = kernel_pairing(
                        &spec.roots,
                        AiryKind::Ai,
                        AiryKind::Bi,
                        *ri,
                        *rj,
                        m as u32,
                        n as u32,
                        sign,
                    )?;
                    val = &val + &(&(am * an) * &kp);
                }
            }
            if !val.is_zero() {
                violations.push((i, j, *ri, val));
            }
        }
    }
    Ok(LagrangianReport {
        ok: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxFactor {
    pub p_op: DiffOperator,
    pub p: RationalFunction,
    pub q: MultiPoly,
}

/// The bordered Wronskian `W(f_1..f_d, g_1..g_d, ·)` as an operator,
/// normalized so its leading coefficient `p` is monic in `x`.
pub fn build_darboux_operator(spec: &SubspaceSpec, sign: WronskianSign) -> Result<DarbouxFactor> {
    let report = check_lagrangian(spec, sign)?;
    if !report.ok {
        let (i, j, k, v) = &report.violations[0];
        return Err(Error::NotLagrangian(format!("pairs ({i},{j}) at root {k}: {v}")));
    }
    let d = spec.pairs.len();
    let mut fs: Vec<AiryElement> = (0..d).map(|i| spec.generator(i, AiryKind::Ai, sign)).collect();
    fs.extend((0..d).map(|i| spec.generator(i, AiryKind::Bi, sign)));
    let n = 2 * d;
    let table = derivative_table(&fs, n + 1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        // cofactor of f^{(i)} in the last column
        let rows: Vec<usize> = (0..=n).filter(|&r| r != i).collect();
        let minor = det_rows(&table, &rows, &fs[0]);
        let c = minor
            .as_rational()
            .ok_or_else(|| Error::NotRational(format!("coefficient of D^{i}: {minor}")))?;
        coeffs.push(if (i + n).is_multiple_of(2) { c } else { -c });
    }
    let raw = DiffOperator::new(Var::x(), coeffs);
    if raw.order() != n {
        return Err(Error::Invalid("generators are dependent (wronskian vanishes)".into()));
    }
    let lead = raw.leading_coeff();
    let top = lead
        .numer()
        .coeffs_in(Var::x())
        .last()
        .cloned()
        .ok_or_else(|| Error::Invalid("zero leading coefficient".into()))?;
    let kappa = RationalFunction::new(top, lead.denom().clone())?;
    let p_op = raw.left_mul_fn(&kappa.recip()?);
    if p_op.coeffs().iter().any(|c| c.contains_var(Var::pi())) {
        return Err(Error::NotRational(format!("pi survives normalization: {p_op}")));
    }
    let p = p_op.leading_coeff();
    let q = spec.q()?;
    let lhs = &(&p_op.adjoint() * &DiffOperator::function(Var::x(), p.pow(2).recip()?)) * &p_op;
    let ql = substitute_airy(&q, &RationalFunction::zero());
    if lhs != &ql * &ql {
        return Err(Error::FactorizationFails(format!("P = {p_op}")));
    }
    Ok(DarbouxFactor { p_op, p, q })
}
