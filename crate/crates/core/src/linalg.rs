//! Exact integer and rational linear algebra: Hermite and Smith normal
//! forms, fraction-free determinants, and solvers used by ideal arithmetic
//! and the class-group relation lattice.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fp::FpCtx;

/// Dense integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        debug_assert!(rows.iter().all(|x| x.len() == c));
        IMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// rows of `other` appended below `self`.
    pub fn vstack(&self, other: &IMat) -> IMat {
        debug_assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..self.cols {
                    s += self.at(i, j) * &v[j];
                }
                s
            })
            .collect()
    }
}

/// Row-style Hermite normal form.
///
/// Returns the nonzero rows of the unique row-echelon basis of the row
/// lattice: pivots positive, entries above each pivot reduced into
/// `[0, pivot)`, pivot columns strictly increasing.
pub fn hnf_rows(m: &IMat) -> IMat {
    let mut a = m.clone();
    let rows = a.rows;
    let cols = a.cols;
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // eliminate below using gcd steps
        loop {
            // find row with smallest nonzero |entry| in this column at/below pivot_row
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !a.at(i, col).is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if a.at(i, col).abs() < a.at(b, col).abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pivot_row, b);
            let mut done = true;
            let pv = a.at(pivot_row, col).clone();
            for i in pivot_row + 1..rows {
                if a.at(i, col).is_zero() {
                    continue;
                }
                let q = div_round(a.at(i, col), &pv);
                if !q.is_zero() {
                    for j in 0..cols {
                        let sub = &q * a.at(pivot_row, j);
                        *a.at_mut(i, j) -= sub;
                    }
                }
                if !a.at(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.at(pivot_row, col).is_zero() {
            continue;
        }
        if a.at(pivot_row, col).is_negative() {
            for j in 0..cols {
                let v = -a.at(pivot_row, j).clone();
                *a.at_mut(pivot_row, j) = v;
            }
        }
        // reduce entries above the pivot
        let pv = a.at(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = a.at(i, col).div_floor(&pv);
            if !q.is_zero() {
                for j in 0..cols {
                    let sub = &q * a.at(pivot_row, j);
                    *a.at_mut(i, j) -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    // keep nonzero rows only
    let mut rows_out = Vec::new();
    for i in 0..pivot_row {
        rows_out.push(a.row(i).to_vec());
    }
    IMat::from_rows(rows_out)
}

/// Quotient rounding toward the nearest integer (keeps HNF pivots small).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * BigInt::from(2);
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det_bareiss(m: &IMat) -> BigInt {
    debug_assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            let swap = (k + 1..n).find(|&i| !a.at(i, k).is_zero());
            match swap {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / &prev;
                *a.at_mut(i, j) = v;
            }
            *a.at_mut(i, k) = BigInt::zero();
        }
        prev = a.at(k, k).clone();
    }
    sign * a.at(n - 1, n - 1).clone()
}

/// Smith normal form `U * M * V = D`.
///
/// Returns the diagonal (length `min(rows, cols)`, nonnegative, each dividing
/// the next) together with the right transform `V` (cols × cols unimodular).
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub right: IMat,
}

pub fn smith_normal_form(m: &IMat) -> Snf {
    let mut a = m.clone();
    let rows = a.rows;
    let cols = a.cols;
    let mut v = IMat::identity(cols);
    let n = rows.min(cols);

    fn col_swap(a: &mut IMat, v: &mut IMat, x: usize, y: usize) {
        if x == y {
            return;
        }
        for i in 0..a.rows {
            let c = a.cols;
            a.data.swap(i * c + x, i * c + y);
        }
        for i in 0..v.rows {
            let c = v.cols;
            v.data.swap(i * c + x, i * c + y);
        }
    }
    // col y -= q * col x
    fn col_sub(a: &mut IMat, v: &mut IMat, y: usize, q: &BigInt, x: usize) {
        for i in 0..a.rows {
            let s = q * a.at(i, x);
            *a.at_mut(i, y) -= s;
        }
        for i in 0..v.rows {
            let s = q * v.at(i, x);
            *v.at_mut(i, y) -= s;
        }
    }

    let mut t = 0usize;
    while t < n {
        // smallest-magnitude nonzero entry in the trailing block becomes pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a.at(i, j).is_zero()
                    && pivot.map_or(true, |(pi, pj)| a.at(i, j).abs() < a.at(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        col_swap(&mut a, &mut v, t, pj);

        'reduce: loop {
            // clear column t below the pivot
            for i in t + 1..rows {
                if !a.at(i, t).is_zero() {
                    let q = div_round(a.at(i, t), a.at(t, t));
                    for j in 0..cols {
                        let s = &q * a.at(t, j);
                        *a.at_mut(i, j) -= s;
                    }
                    if !a.at(i, t).is_zero() {
                        a.swap_rows(t, i);
                        continue 'reduce;
                    }
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if !a.at(t, j).is_zero() {
                    let q = div_round(a.at(t, j), a.at(t, t));
                    col_sub(&mut a, &mut v, j, &q, t);
                    if !a.at(t, j).is_zero() {
                        col_swap(&mut a, &mut v, t, j);
                        continue 'reduce;
                    }
                }
            }
            // pivot must divide every entry of the trailing block
            let pv = a.at(t, t).clone();
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a.at(i, j) % &pv).is_zero() {
                        // fold row i into row t and restart
                        for jj in 0..cols {
                            let add = a.at(i, jj).clone();
                            *a.at_mut(t, jj) += add;
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..n).map(|i| a.at(i, i).abs()).collect();
    Snf { diag, right: v }
}

/// Solve `A x = b` over the integers. Returns one solution if it exists.
///
/// Works by echelonizing `[A^T | I]`: the transform part expresses each
/// echelon row as an integer combination of the columns of `A`, so reducing
/// `b` through the echelon yields the coefficient vector.
pub fn solve_integer(a: &IMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert_eq!(a.rows, b.len());
    let at = a.transpose();
    let n = at.rows; // = a.cols
    let mut work = IMat::zero(n, at.cols + n);
    for i in 0..n {
        for j in 0..at.cols {
            *work.at_mut(i, j) = at.at(i, j).clone();
        }
        *work.at_mut(i, at.cols + i) = BigInt::one();
    }
    let h = hnf_rows(&work);
    // rows of h: [row-echelon basis of row space of A^T | transform]
    // express b as integer combo of the echelon rows restricted to A^T part
    let m = at.cols;
    let mut coeffs = vec![BigInt::zero(); h.rows];
    let mut target: Vec<BigInt> = b.to_vec();
    for r in 0..h.rows {
        // pivot column of row r within first m columns
        let piv = (0..m).find(|&j| !h.at(r, j).is_zero());
        let Some(pj) = piv else { continue };
        let q = &target[pj] / h.at(r, pj);
        if !(&target[pj] % h.at(r, pj)).is_zero() {
            return None;
        }
        for j in 0..m {
            let s = &q * h.at(r, j);
            target[j] -= s;
        }
        coeffs[r] = q;
    }
    if target.iter().any(|t| !t.is_zero()) {
        return None;
    }
    // x = sum coeffs[r] * transform_row(r)
    let mut x = vec![BigInt::zero(); n];
    for r in 0..h.rows {
        if coeffs[r].is_zero() {
            continue;
        }
        for i in 0..n {
            x[i] += &coeffs[r] * h.at(r, m + i);
        }
    }
    Some(x)
}

/// Rational solve of `A x = b` by Gaussian elimination; `None` if inconsistent
/// or underdetermined without a canonical solution.
pub fn solve_rational(a: &IMat, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let rows = a.rows;
    let cols = a.cols;
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = (0..cols)
                .map(|j| BigRational::from(a.at(i, j).clone()))
                .collect();
            r.push(BigRational::from(b[i].clone()));
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0usize;
    for col in 0..cols {
        let Some(sel) = (prow..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(prow, sel);
        let pv = m[prow][col].clone();
        for j in col..=cols {
            m[prow][j] = &m[prow][j] / &pv;
        }
        for i in 0..rows {
            if i != prow && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=cols {
                    let s = &f * &m[prow][j];
                    m[i][j] = &m[i][j] - s;
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == rows {
            break;
        }
    }
    // consistency
    for i in prow..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Rational matrix inverse; panics on singular input (callers verify).
pub fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let Some(sel) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return None;
        };
        a.swap(col, sel);
        inv.swap(col, sel);
        let pv = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &pv;
            inv[col][j] = &inv[col][j] / &pv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let s = &f * &a[col][j];
                    a[i][j] = &a[i][j] - s;
                    let s = &f * &inv[col][j];
                    inv[i][j] = &inv[i][j] - s;
                }
            }
        }
    }
    Some(inv)
}

/// Determinant of a rational matrix.
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(sel) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if sel != col {
            a.swap(col, sel);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for j in col..n {
            a[col][j] = &a[col][j] / &pv;
        }
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..n {
                    let s = &f * &a[col][j];
                    a[i][j] = &a[i][j] - s;
                }
            }
        }
    }
    det
}

/// Solve `M x = b` for a square rational matrix; `None` when singular.
pub fn solve_rational_q(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n) && b.len() == n);
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let sel = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, sel);
        let pv = a[col][col].clone();
        for j in col..=n {
            a[col][j] = &a[col][j] / &pv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=n {
                    let s = &f * &a[col][j];
                    a[i][j] = &a[i][j] - s;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n].clone()).collect())
}

/// Inverse of a square matrix over GF(p); `None` when singular mod p.
pub fn invert_mod_p(ctx: &FpCtx, m: &IMat) -> Option<IMat> {
    debug_assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| ctx.norm(m.at(i, j))).collect())
        .collect();
    let mut inv: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let sel = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, sel);
        inv.swap(col, sel);
        let piv_inv = ctx.inv(&a[col][col].clone());
        for j in 0..n {
            a[col][j] = ctx.mul(&a[col][j], &piv_inv);
            inv[col][j] = ctx.mul(&inv[col][j], &piv_inv);
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let s = ctx.mul(&f, &a[col][j]);
                    a[i][j] = ctx.sub(&a[i][j], &s);
                    let s = ctx.mul(&f, &inv[col][j]);
                    inv[i][j] = ctx.sub(&inv[i][j], &s);
                }
            }
        }
    }
    Some(IMat::from_rows(inv))
}

/// Basis of the kernel of `A` over GF(p): returns vectors of length `cols`.
pub fn kernel_mod_p(ctx: &FpCtx, a: &IMat) -> Vec<Vec<BigInt>> {
    let rows = a.rows;
    let cols = a.cols;
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| ctx.norm(a.at(i, j))).collect())
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut prow = 0usize;
    for col in 0..cols {
        let Some(sel) = (prow..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(prow, sel);
        let inv = ctx.inv(&m[prow][col].clone());
        for j in col..cols {
            m[prow][j] = ctx.mul(&m[prow][j], &inv);
        }
        for i in 0..rows {
            if i != prow && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    let s = ctx.mul(&f, &m[prow][j]);
                    m[i][j] = ctx.sub(&m[i][j], &s);
                }
            }
        }
        pivot_of_col[col] = Some(prow);
        prow += 1;
        if prow == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![BigInt::zero(); cols];
        v[free] = BigInt::one();
        for col in 0..cols {
            if let Some(pr) = pivot_of_col[col] {
                // x_col = -m[pr][free]
                v[col] = ctx.sub(&BigInt::zero(), &m[pr][free]);
            }
        }
        basis.push(v);
    }
    basis
}
