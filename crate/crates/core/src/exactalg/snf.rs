//! Smith normal form over the integers.
//!
//! The elimination runs on arbitrary-precision integers so that entry growth
//! in the transforms never overflows; results are narrowed back to machine
//! words only at the boundary.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Arbitrary-precision dense matrix used by the elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_int(a: &IntMatrix) -> Self {
        Self {
            rows: a.rows(),
            cols: a.cols(),
            data: a.data().iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn to_int(&self) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_i64().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::new(self.rows, self.cols, data))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, o: &BigMatrix) -> BigMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = BigMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            *self.get_mut(dst, j) += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            *self.get_mut(i, dst) += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(self.get_mut(r, j));
            *self.get_mut(r, j) = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(self.get_mut(i, c));
            *self.get_mut(i, c) = v;
        }
    }
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, `d1 | d2 | ...`.
/// `u_inv` is carried along so callers can move between bases without
/// inverting.
#[derive(Clone, Debug)]
pub struct BigSmith {
    pub u: BigMatrix,
    pub u_inv: BigMatrix,
    pub d: BigMatrix,
    pub v: BigMatrix,
    pub rank: usize,
}

impl BigSmith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Machine-word view of a Smith decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }
}

/// Smith normal form of an integer matrix. Total; fails only if the final
/// transforms do not fit in machine words (use [`smith_big`] then).
pub fn smith_normal_form(a: &IntMatrix) -> Result<Smith> {
    let s = smith_big(&BigMatrix::from_int(a));
    Ok(Smith { u: s.u.to_int()?, d: s.d.to_int()?, v: s.v.to_int()? })
}

pub fn smith_big(a: &BigMatrix) -> BigSmith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = BigMatrix::identity(m);
    let mut u_inv = BigMatrix::identity(m);
    let mut v = BigMatrix::identity(n);
    let mut rank = 0;

    // Row operations are mirrored on u (left) and inversely on u_inv (right).
    macro_rules! row_add {
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: &BigInt = $q;
            d.add_row($dst, $src, q);
            u.add_row($dst, $src, q);
            let nq = -q;
            u_inv.add_col($src, $dst, &nq);
        }};
    }
    macro_rules! row_swap {
        ($a:expr, $b:expr) => {{
            d.swap_rows($a, $b);
            u.swap_rows($a, $b);
            u_inv.swap_cols($a, $b);
        }};
    }

    for t in 0..m.min(n) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() {
                    match best {
                        Some((bi, bj)) if d.get(bi, bj).abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap!(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut changed = false;
            // Clear column t below the pivot.
            for i in (t + 1)..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                row_add!(i, t, &(-q));
                if !d.get(i, t).is_zero() {
                    row_swap!(t, i);
                    changed = true;
                }
            }
            // Clear row t right of the pivot.
            for j in (t + 1)..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                let nq = -q;
                d.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            let p = d.get(t, t).clone();
            let bad = ((t + 1)..m).find(|&i| ((t + 1)..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    row_add!(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        rank += 1;
    }
    BigSmith { u, u_inv, d, v, rank }
}

/// Generators of the integer kernel `{x : a x = 0}` as columns.
pub fn integer_kernel(a: &IntMatrix) -> Result<IntMatrix> {
    let s = smith_big(&BigMatrix::from_int(a));
    let n = a.cols();
    let mut cols = Vec::new();
    for j in s.rank..n {
        let c = (0..n)
            .map(|i| s.v.get(i, j).to_i64().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        cols.push(c);
    }
    Ok(IntMatrix::from_columns(n, &cols))
}

pub(crate) fn big_det(a: &BigMatrix) -> BigInt {
    // Bareiss fraction-free elimination.
    let n = a.rows;
    assert_eq!(n, a.cols);
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !m.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                *m.get_mut(i, j) = num / &prev;
            }
        }
        prev = m.get(k, k).clone();
    }
    sign * m.get(n - 1, n - 1).clone()
}

/// Determinant of a square integer matrix, exact.
pub fn determinant(a: &IntMatrix) -> BigInt {
    big_det(&BigMatrix::from_int(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows, rows.first().map_or(0, |r| r.len())).unwrap()
    }

    fn check(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a).unwrap();
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check(&m(&[vec![2, 0], vec![0, 3]])).diagonal(), vec![1, 6]);
        assert_eq!(check(&IntMatrix::identity(2)).diagonal(), vec![1, 1]);
        assert_eq!(check(&m(&[vec![2, 4], vec![6, 8]])).diagonal(), vec![2, 4]);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        assert_eq!(check(&IntMatrix::zeros(2, 3)).diagonal(), vec![0, 0]);
        assert_eq!(check(&m(&[vec![4, 6, 10]])).diagonal(), vec![2]);
        assert_eq!(check(&IntMatrix::zeros(0, 2)).diagonal(), Vec::<i64>::new());
    }

    #[test]
    fn kernel_of_row() {
        let a = m(&[vec![2, 4]]);
        let k = integer_kernel(&a).unwrap();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn growth_stays_exact() {
        // Entries near the machine limit force big intermediates.
        let big = 3_000_000_000i64;
        let a = m(&[vec![big, big - 1], vec![big + 7, big + 3]]);
        let s = smith_big(&BigMatrix::from_int(&a));
        let prod = s.u.mul(&BigMatrix::from_int(&a)).mul(&s.v);
        assert_eq!(prod, s.d);
        assert_eq!(s.u.mul(&s.u_inv), BigMatrix::identity(2));
    }
}
