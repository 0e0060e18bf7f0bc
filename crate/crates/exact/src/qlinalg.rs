//! Sparse linear systems over ℚ.
//!
//! Rank and pivot structure come from elimination modulo a 62-bit prime.
//! The kernel is then solved exactly on the independent rows only and every
//! basis vector is checked against all original rows; a failed check means
//! the prime was unlucky and the next one is tried.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::rational::Rational;

const PRIMES: [u64; 6] = [
    (1 << 62) - 57,
    (1 << 62) - 87,
    (1 << 62) - 117,
    (1 << 62) - 143,
    (1 << 62) - 153,
    (1 << 62) - 167,
];

/// Row as `(column, value)` pairs, columns strictly increasing, no zeros.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, Debug, Default)]
pub struct QMatrix {
    cols: usize,
    rows: Vec<SparseRow>,
}

impl QMatrix {
    pub fn new(cols: usize) -> Self {
        QMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Adds a row given as unsorted `(column, value)` pairs; duplicates are summed.
    pub fn push_row<I: IntoIterator<Item = (usize, Rational)>>(&mut self, entries: I) {
        let mut row: Vec<(usize, Rational)> = entries.into_iter().collect();
        row.sort_by_key(|e| e.0);
        let mut out: SparseRow = Vec::with_capacity(row.len());
        for (c, v) in row {
            assert!(c < self.cols, "column {c} out of range");
            match out.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        self.rows.push(out);
    }

    pub fn push_dense(&mut self, row: &[Rational]) {
        self.push_row(row.iter().cloned().enumerate());
    }

    /// Exact rank (equals the dimension count used by [`Self::nullspace`]).
    pub fn rank(&self) -> usize {
        self.cols - self.nullspace(false).len()
    }

    /// Kernel basis in reduced form: one vector per free column, that column
    /// equal to 1 and the other free columns 0. Identical with or without
    /// `parallel`.
    pub fn nullspace(&self, parallel: bool) -> Vec<Vec<Rational>> {
        for &p in &PRIMES {
            let Some((rows, pivots)) = self.modular_profile(p) else {
                continue;
            };
            let basis = self.exact_kernel(&rows, &pivots, parallel);
            if self.verify(&basis, parallel) {
                return basis;
            }
        }
        // every prime unlucky: fall back to plain exact elimination
        let all: Vec<usize> = (0..self.rows.len()).collect();
        let pivots = self.exact_pivots(&all);
        self.exact_kernel(&all, &pivots, parallel)
    }

    /// Independent rows and their pivot columns modulo `p`, or `None` when
    /// some denominator vanishes mod `p`.
    fn modular_profile(&self, p: u64) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut used_rows = Vec::new();
        for (ri, row) in self.rows.iter().enumerate() {
            let mut v = vec![0u64; self.cols];
            for (c, q) in row {
                v[*c] = reduce_mod(q, p)?;
            }
            for (pc, b) in &basis {
                let f = v[*pc];
                if f == 0 {
                    continue;
                }
                for (vi, bi) in v.iter_mut().zip(b) {
                    if *bi != 0 {
                        *vi = sub_mod(*vi, mul_mod(f, *bi, p), p);
                    }
                }
            }
            if let Some(pc) = v.iter().position(|&e| e != 0) {
                let inv = inv_mod(v[pc], p);
                for e in v.iter_mut() {
                    *e = mul_mod(*e, inv, p);
                }
                // keep earlier pivots reduced against the new one
                for (_, b) in basis.iter_mut() {
                    let f = b[pc];
                    if f == 0 {
                        continue;
                    }
                    for (bi, vi) in b.iter_mut().zip(&v) {
                        if *vi != 0 {
                            *bi = sub_mod(*bi, mul_mod(f, *vi, p), p);
                        }
                    }
                }
                basis.push((pc, v));
                used_rows.push(ri);
                if basis.len() == self.cols {
                    break;
                }
            }
        }
        let pivots = basis.iter().map(|(pc, _)| *pc).collect();
        Some((used_rows, pivots))
    }

    fn exact_pivots(&self, rows: &[usize]) -> Vec<usize> {
        let mut a: Vec<Vec<Rational>> = rows.iter().map(|&r| self.dense(r)).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for e in a[r].iter_mut() {
                *e *= &inv;
            }
            let pr = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (e, pe) in row.iter_mut().zip(&pr) {
                        if !pe.is_zero() {
                            *e -= &f * pe;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn dense(&self, r: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.cols];
        for (c, q) in &self.rows[r] {
            v[*c] = q.clone();
        }
        v
    }

    /// Reduces the selected rows to the form `I` on `pivots` and reads off the kernel.
    fn exact_kernel(&self, rows: &[usize], pivots: &[usize], parallel: bool) -> Vec<Vec<Rational>> {
        let mut a: Vec<Vec<Rational>> = rows.iter().map(|&r| self.dense(r)).collect();
        let mut pivots_done: Vec<usize> = Vec::with_capacity(pivots.len());
        let mut row_of_pivot: Vec<usize> = Vec::new();
        for &c in pivots {
            let Some(r) = (0..a.len())
                .filter(|i| !row_of_pivot.contains(i))
                .find(|&i| !a[i][c].is_zero())
            else {
                // singular on this prime's pivot set; verification will reject
                continue;
            };
            let inv = a[r][c].recip();
            for e in a[r].iter_mut() {
                if !e.is_zero() {
                    *e *= &inv;
                }
            }
            let pr = a[r].clone();
            let nz: Vec<usize> = (0..self.cols).filter(|&j| !pr[j].is_zero()).collect();
            let update = |(i, row): (usize, &mut Vec<Rational>)| {
                if i == r || row[c].is_zero() {
                    return;
                }
                let f = row[c].clone();
                for &j in &nz {
                    let t = &f * &pr[j];
                    row[j] -= t;
                }
            };
            if parallel {
                a.par_iter_mut().enumerate().for_each(update);
            } else {
                a.iter_mut().enumerate().for_each(update);
            }
            pivots_done.push(c);
            row_of_pivot.push(r);
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots_done {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let build = |&f: &usize| {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (k, &pc) in pivots_done.iter().enumerate() {
                let e = &a[row_of_pivot[k]][f];
                if !e.is_zero() {
                    v[pc] = -e.clone();
                }
            }
            v
        };
        if parallel {
            free.par_iter().map(build).collect()
        } else {
            free.iter().map(build).collect()
        }
    }

    fn verify(&self, basis: &[Vec<Rational>], parallel: bool) -> bool {
        let check = |v: &Vec<Rational>| {
            self.rows.iter().all(|row| {
                let mut s = Rational::zero();
                for (c, q) in row {
                    if !v[*c].is_zero() {
                        s += q * &v[*c];
                    }
                }
                s.is_zero()
            })
        };
        if parallel {
            basis.par_iter().all(check)
        } else {
            basis.iter().all(check)
        }
    }

    /// One solution of `A y = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Rational], parallel: bool) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows.len(), "right-hand side length");
        // kernel of [A | -b] with the last coordinate free
        let mut aug = QMatrix::new(self.cols + 1);
        for (row, bi) in self.rows.iter().zip(b) {
            aug.push_row(row.iter().cloned().chain([(self.cols, -bi.clone())]));
        }
        let ker = aug.nullspace(parallel);
        let v = ker.into_iter().find(|v| v[self.cols].is_one())?;
        let mut y = v;
        y.pop();
        Some(y)
    }
}

fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = q.numer().mod_floor(&pb).to_u64().unwrap();
    let d = q.denom().mod_floor(&pb).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    debug_assert!(!q.denom().is_negative());
    Some(mul_mod(n, inv_mod(d, p), p))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn kernel_of_rank_one() {
        let mut m = QMatrix::new(3);
        m.push_dense(&[int(1), int(2), int(3)]);
        m.push_dense(&[int(2), int(4), int(6)]);
        let k = m.nullspace(false);
        assert_eq!(k, vec![vec![int(-2), int(1), int(0)], vec![int(-3), int(0), int(1)]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_and_inconsistency() {
        let mut m = QMatrix::new(2);
        m.push_dense(&[int(1), int(1)]);
        m.push_dense(&[int(1), int(-1)]);
        assert_eq!(m.solve(&[int(3), int(1)], false), Some(vec![int(2), int(1)]));
        let mut s = QMatrix::new(1);
        s.push_dense(&[int(0)]);
        s.push_dense(&[int(2)]);
        assert_eq!(s.num_rows(), 2);
        assert_eq!(s.solve(&[int(1), int(0)], false), None);
        let mut t = QMatrix::new(1);
        t.push_dense(&[int(1)]);
        t.push_dense(&[int(1)]);
        assert_eq!(t.solve(&[int(1), int(2)], false), None);
    }

    #[test]
    fn denominators_divisible_by_the_first_prime() {
        let p = BigInt::from(PRIMES[0]);
        let mut m = QMatrix::new(2);
        m.push_row([(0, Rational::new(BigInt::one(), p)), (1, rat(-1, 1))]);
        let k = m.nullspace(false);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][1], int(1));
        assert_eq!(k[0][0], Rational::from_integer(BigInt::from(PRIMES[0])));
    }
}
