//! Linear conditions `Σ y_u f_u = 0` with rational-function data.
//!
//! Each group of values is cleared to a common denominator and split by
//! monomials in the free variables; the resulting rows live over the
//! parameter field. Rows that turn out purely rational are solved by the
//! sparse modular solver, otherwise by fraction-free elimination.

use std::collections::{BTreeMap, HashMap};

use weyl_forge_exact::{lcm, Monomial, MultiPoly, QMatrix, RFMatrix, Rational, RationalFunction, Var};

use crate::weylops::DiffOperator;

#[derive(Clone, Debug)]
pub struct LinearSystem {
    unknowns: usize,
    free: Vec<Var>,
    rows: Vec<BTreeMap<usize, MultiPoly>>,
    parallel: bool,
}

impl LinearSystem {
    /// `free` are the variables identities must hold in (e.g. `x`, `z`).
    pub fn new(unknowns: usize, free: &[Var]) -> Self {
        LinearSystem {
            unknowns,
            free: free.to_vec(),
            rows: Vec::new(),
            parallel: false,
        }
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `Σ_u y_u vals[u] = 0` identically in the free variables; `vals` is sparse.
    pub fn add_identity(&mut self, vals: &[(usize, RationalFunction)]) {
        let vals: Vec<&(usize, RationalFunction)> = vals.iter().filter(|(_, v)| !v.is_zero()).collect();
        if vals.is_empty() {
            return;
        }
        let l = vals.iter().fold(MultiPoly::one(), |acc, (_, v)| lcm(&acc, v.denom()));
        let mut split: HashMap<Monomial, BTreeMap<usize, Vec<(Monomial, Rational)>>> = HashMap::new();
        for (u, v) in vals {
            let n = v.numer() * &l.div_exact(v.denom()).expect("lcm is a multiple");
            for (m, c) in n.terms() {
                let mut fm = Monomial::ONE;
                let mut pm = *m;
                for &fv in &self.free {
                    fm.set_exp(fv, m.exp(fv));
                    pm.set_exp(fv, 0);
                }
                split.entry(fm).or_default().entry(*u).or_default().push((pm, c.clone()));
            }
        }
        let mut keys: Vec<Monomial> = split.keys().copied().collect();
        keys.sort();
        for k in keys {
            let row: BTreeMap<usize, MultiPoly> = split
                .remove(&k)
                .unwrap()
                .into_iter()
                .map(|(u, ts)| (u, MultiPoly::from_terms(ts)))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            if !row.is_empty() {
                self.rows.push(row);
            }
        }
    }

    /// A dense identity over all unknowns.
    pub fn add_dense(&mut self, vals: &[RationalFunction]) {
        let sparse: Vec<(usize, RationalFunction)> = vals.iter().cloned().enumerate().collect();
        self.add_identity(&sparse);
    }

    fn is_rational(&self) -> bool {
        self.rows.iter().all(|r| r.values().all(|p| p.is_constant()))
    }

    /// Kernel basis in reduced form (free column 1, other free columns 0).
    pub fn nullspace(&self) -> Vec<Vec<RationalFunction>> {
        if self.is_rational() {
            let mut q = QMatrix::new(self.unknowns);
            for r in &self.rows {
                q.push_row(r.iter().map(|(&u, p)| (u, p.constant_value().unwrap())));
            }
            return q
                .nullspace(self.parallel)
                .into_iter()
                .map(|v| v.into_iter().map(RationalFunction::constant).collect())
                .collect();
        }
        let dense: Vec<Vec<RationalFunction>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![RationalFunction::zero(); self.unknowns];
                for (&u, p) in r {
                    row[u] = RationalFunction::from_poly(p.clone());
                }
                row
            })
            .collect();
        if dense.is_empty() {
            return (0..self.unknowns)
                .map(|i| {
                    let mut v = vec![RationalFunction::zero(); self.unknowns];
                    v[i] = RationalFunction::one();
                    v
                })
                .collect();
        }
        RFMatrix::from_rows(dense)
            .expect("rows share a width")
            .free_column_kernel()
    }
}

/// Reduced row echelon form; zero rows dropped, each pivot scaled to 1.
pub fn rref(mut rows: Vec<Vec<RationalFunction>>) -> Vec<Vec<RationalFunction>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("pivot is nonzero");
        for e in rows[r].iter_mut() {
            if !e.is_zero() {
                *e = &*e * &inv;
            }
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, pe) in row.iter_mut().zip(&pivot) {
                if !pe.is_zero() {
                    *e = &*e - &(&f * pe);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// `Σ c_i v_i` over rational-function vectors.
pub fn combine<T, F>(coeffs: &[RationalFunction], items: &[T], zero: T, add_scaled: F) -> T
where
    F: Fn(T, &T, &RationalFunction) -> T,
{
    let mut acc = zero;
    for (c, it) in coeffs.iter().zip(items) {
        if !c.is_zero() {
            acc = add_scaled(acc, it, c);
        }
    }
    acc
}

/// `Σ c_i A_i` for operators in one variable.
pub fn combine_ops(var: Var, coeffs: &[RationalFunction], ops: &[DiffOperator]) -> DiffOperator {
    combine(coeffs, ops, DiffOperator::zero(var), |acc, op, c| {
        &acc + &op.left_mul_fn(c)
    })
}

/// Kernel of `y ↦ Σ y_i A_i` on coefficient lists (identities in `var`).
pub fn operator_relations(ops: &[DiffOperator], var: Var) -> Vec<Vec<RationalFunction>> {
    let mut sys = LinearSystem::new(ops.len(), &[var]);
    let ord = ops.iter().map(|o| o.order()).max().unwrap_or(0);
    for k in 0..=ord {
        let vals: Vec<(usize, RationalFunction)> =
            ops.iter().enumerate().map(|(i, o)| (i, o.coeff(k))).collect();
        sys.add_identity(&vals);
    }
    sys.nullspace()
}

/// `c` with `target = Σ c_i gens_i`, if `target` lies in the span.
pub fn express_in_span(target: &DiffOperator, gens: &[DiffOperator]) -> Option<Vec<RationalFunction>> {
    let var = target.var();
    let ops: Vec<DiffOperator> = std::iter::once(target.clone())
        .chain(gens.iter().map(|g| g.rename_if_constant(var)))
        .collect();
    let v = operator_relations(&ops, var).into_iter().find(|v| !v[0].is_zero())?;
    let inv = (-v[0].clone()).recip().ok()?;
    Some(v[1..].iter().map(|c| c * &inv).collect())
}

/// Dimension of the span of `ops` over the parameter field.
pub fn span_rank(ops: &[DiffOperator], var: Var) -> usize {
    ops.len() - operator_relations(ops, var).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use weyl_forge_exact::parse_ratfun;

    fn rf(s: &str) -> RationalFunction {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn identities_split_by_free_monomials() {
        // y0·x + y1·(t x) + y2 = 0 in x ⇒ y2 = 0, y0 = −t y1
        let mut s = LinearSystem::new(3, &[Var::x()]);
        s.add_dense(&[rf("x"), rf("t1*x"), rf("1")]);
        let k = s.nullspace();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(v[2].is_zero());
        assert_eq!(&v[0] / &v[1], -rf("t1"));
    }

    #[test]
    fn rational_rows_and_denominators() {
        let mut s = LinearSystem::new(2, &[Var::x()]);
        s.add_dense(&[rf("1/(x+1)"), rf("1/(x^2+2*x+1)*(x+1)")]);
        assert_eq!(s.nullspace(), vec![vec![rf("-1"), rf("1")]]);
        let x = Var::x();
        let ops = vec![
            DiffOperator::derivation(x),
            DiffOperator::function(x, rf("x")),
            &DiffOperator::derivation(x) + &DiffOperator::function(x, rf("2*x")),
        ];
        assert_eq!(span_rank(&ops, x), 2);
        assert_eq!(express_in_span(&ops[2], &ops[..2]), Some(vec![rf("1"), rf("2")]));
        assert_eq!(express_in_span(&ops[1], &ops[..1]), None);
    }
}
