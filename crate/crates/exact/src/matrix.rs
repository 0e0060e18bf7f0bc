//! Dense matrices over ℚ(symbols) with fraction-free elimination.

use std::fmt;

use crate::gcd::{gcd, lcm};
use crate::poly::MultiPoly;
use crate::ratfun::RationalFunction;
use crate::ExactError;

#[derive(Clone, PartialEq, Eq)]
pub struct RFMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl RFMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RFMatrix {
            rows,
            cols,
            entries: vec![RationalFunction::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RationalFunction::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::Dimension("ragged rows".into()));
        }
        Ok(RFMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RationalFunction] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RFMatrix) -> Result<RFMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RationalFunction::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[RationalFunction]) -> Result<Vec<RationalFunction>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::Dimension(format!(
                "{} columns, vector of length {}",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(RationalFunction::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Each row scaled by the lcm of its denominators.
    fn polynomial_rows(&self) -> Vec<Vec<MultiPoly>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row
                    .iter()
                    .filter(|e| !e.is_zero())
                    .fold(MultiPoly::one(), |acc, e| lcm(&acc, e.denom()));
                row.iter()
                    .map(|e| {
                        if e.is_zero() {
                            MultiPoly::zero()
                        } else {
                            &e.numer().clone() * &l.div_exact(e.denom()).unwrap()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Fraction-free Gauss-Jordan form; returns the rows and the pivot columns.
    fn bareiss_rref(&self) -> (Vec<Vec<MultiPoly>>, Vec<usize>) {
        let mut a = self.polynomial_rows();
        let mut pivots = Vec::new();
        let mut prev = MultiPoly::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // smallest nonzero entry keeps growth down; ties go to the lowest row
            let Some(p) = (r..self.rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| (a[i][c].num_terms(), i))
            else {
                continue;
            };
            a.swap(r, p);
            let piv = a[r][c].clone();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = a[i][c].clone();
                let mut row: Vec<MultiPoly> = (0..self.cols)
                    .map(|j| &(&piv * &a[i][j]) - &(&f * &a[r][j]))
                    .collect();
                if !prev.is_one() {
                    let exact: Option<Vec<MultiPoly>> =
                        row.iter().map(|t| t.div_exact(&prev)).collect();
                    match exact {
                        Some(q) => row = q,
                        None => primitive_row(&mut row),
                    }
                }
                a[i] = row;
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.bareiss_rref().1.len()
    }

    /// Basis of the right kernel, as the rows of a reduced echelon matrix
    /// (each leading entry 1, zero above and below it in other vectors).
    pub fn nullspace(&self) -> Vec<Vec<RationalFunction>> {
        echelon_basis(self.free_column_kernel())
    }

    /// Kernel with one vector per free column: that column 1, other free columns 0.
    pub fn free_column_kernel(&self) -> Vec<Vec<RationalFunction>> {
        let (a, pivots) = self.bareiss_rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![RationalFunction::zero(); self.cols];
            v[f] = RationalFunction::one();
            for (k, &pc) in pivots.iter().enumerate() {
                if a[k][f].is_zero() {
                    continue;
                }
                let val = RationalFunction::new(-&a[k][f], a[k][pc].clone())
                    .expect("pivot is nonzero");
                v[pc] = val;
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<RationalFunction, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RationalFunction::one());
        }
        let mut scale = RationalFunction::one();
        let mut a: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row
                .iter()
                .filter(|e| !e.is_zero())
                .fold(MultiPoly::one(), |acc, e| lcm(&acc, e.denom()));
            scale = scale.div_poly(&l)?;
            a.push(
                row.iter()
                    .map(|e| {
                        if e.is_zero() {
                            MultiPoly::zero()
                        } else {
                            &e.numer().clone() * &l.div_exact(e.denom()).unwrap()
                        }
                    })
                    .collect(),
            );
        }
        let mut sign = 1;
        let mut prev = MultiPoly::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(RationalFunction::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[i][k] = MultiPoly::zero();
            }
            prev = a[k][k].clone();
        }
        let d = RationalFunction::from_poly(a[n - 1][n - 1].clone());
        let d = if sign < 0 { -d } else { d };
        Ok(&d * &scale)
    }
}

fn echelon_basis(mut b: Vec<Vec<RationalFunction>>) -> Vec<Vec<RationalFunction>> {
    let n = b.first().map_or(0, |v| v.len());
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..b.len()).find(|&i| !b[i][c].is_zero()) else {
            continue;
        };
        b.swap(r, p);
        let inv = b[r][c].recip().expect("nonzero");
        if !inv.is_one() {
            for e in b[r].iter_mut() {
                *e = &*e * &inv;
            }
        }
        let pr = b[r].clone();
        for (i, row) in b.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, pe) in row.iter_mut().zip(&pr) {
                if !pe.is_zero() {
                    *e = &*e - &(&f * pe);
                }
            }
        }
        r += 1;
    }
    b
}

fn primitive_row(row: &mut [MultiPoly]) {
    let g = row
        .iter()
        .filter(|t| !t.is_zero())
        .fold(MultiPoly::zero(), |acc, t| gcd(&acc, t));
    if g.is_zero() || g.is_one() {
        return;
    }
    for t in row.iter_mut() {
        *t = t.div_exact(&g).unwrap();
    }
}

impl fmt::Debug for RFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RFMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
