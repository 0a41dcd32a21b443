//! Linear systems over `Z` and `Z/n` with canonical particular solutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::howell::{howell_rows, reduce_against};
use super::matrix::IntMatrix;
use super::snf::{smith_big, BigMatrix};
use super::Ring;
use crate::error::{Error, Result};

/// Solution set of `a x = b`: `particular + span(kernel columns)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// `cols(a) x cols(b)`; column `j` solves `a x = b[:, j]`.
    pub particular: IntMatrix,
    /// Generators of `{x : a x = 0}`, one per column.
    pub kernel: IntMatrix,
}

/// Solves `a x = b`. Returns `None` when some column of `b` has no solution.
///
/// The particular solution is canonical: over `Z/n` it is the
/// lexicographically smallest representative (entries in `[0, n)`) of its
/// coset modulo the kernel; over `Z` it is reduced modulo the Hermite basis
/// of the kernel lattice.
pub fn solve_linear(a: &IntMatrix, b: &IntMatrix, ring: Ring) -> Result<Option<Solution>> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "system has {} equations but right-hand side has {} rows",
            a.rows(),
            b.rows()
        )));
    }
    match ring {
        Ring::IntegersMod(n) => Ok(solve_mod(a, b, n)),
        Ring::Integers => solve_integers(a, b),
    }
}

/// Solves a system whose `i`-th equation holds modulo `moduli[i]`
/// (`0` means exactly). Over `Z/n` every modulus must divide `n`.
pub fn solve_congruences(
    a: &IntMatrix,
    b: &IntMatrix,
    moduli: &[i64],
    ring: Ring,
) -> Result<Option<Solution>> {
    if moduli.len() != a.rows() {
        return Err(Error::Dimension("one modulus per equation required".into()));
    }
    match ring {
        Ring::IntegersMod(n) => {
            let mut sa = a.clone();
            let mut sb = b.clone();
            for (i, &m) in moduli.iter().enumerate() {
                let m = if m == 0 { n } else { m };
                if n % m != 0 {
                    return Err(Error::Dimension(format!("modulus {m} does not divide {n}")));
                }
                let f = n / m;
                for j in 0..sa.cols() {
                    sa[(i, j)] = ((sa[(i, j)] as i128 * f as i128).rem_euclid(n as i128)) as i64;
                }
                for j in 0..sb.cols() {
                    sb[(i, j)] = ((sb[(i, j)] as i128 * f as i128).rem_euclid(n as i128)) as i64;
                }
            }
            Ok(solve_mod(&sa, &sb, n))
        }
        Ring::Integers => {
            let slack: Vec<usize> =
                moduli.iter().enumerate().filter(|(_, &m)| m != 0).map(|(i, _)| i).collect();
            let mut ext = IntMatrix::zeros(a.rows(), a.cols() + slack.len());
            ext.set_block(0, 0, a);
            for (k, &i) in slack.iter().enumerate() {
                ext[(i, a.cols() + k)] = moduli[i];
            }
            let Some(sol) = solve_integers(&ext, b)? else { return Ok(None) };
            let keep: Vec<usize> = (0..a.cols()).collect();
            Ok(Some(Solution {
                particular: sol.particular.select_rows(&keep),
                kernel: sol.kernel.select_rows(&keep),
            }))
        }
    }
}

fn solve_mod(a: &IntMatrix, b: &IntMatrix, n: i64) -> Option<Solution> {
    let (m, k) = (a.rows(), a.cols());
    // Rows of [a^T | I]; a combination y of them with first block b^T gives y a^T = b^T.
    let at = a.transpose();
    let rows: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            let mut r = at.row(i).to_vec();
            r.extend((0..k).map(|j| i64::from(i == j)));
            r
        })
        .collect();
    let h = howell_rows(rows, m + k, n);
    let (lead, kern): (Vec<_>, Vec<_>) = h.into_iter().partition(|(c, _)| *c < m);
    let kern_tail: Vec<(usize, Vec<i64>)> =
        kern.iter().map(|(c, r)| (c - m, r[m..].to_vec())).collect();

    let mut particular = IntMatrix::zeros(k, b.cols());
    for j in 0..b.cols() {
        let mut w: Vec<i64> = b.column(j).iter().map(|x| x.rem_euclid(n)).collect();
        w.extend(std::iter::repeat_n(0, k));
        for (c, r) in &lead {
            let p = r[*c];
            if w[*c] % p != 0 {
                return None;
            }
            let q = w[*c] / p;
            if q != 0 {
                for (x, &y) in w.iter_mut().zip(r) {
                    *x = ((*x as i128 - q as i128 * y as i128).rem_euclid(n as i128)) as i64;
                }
            }
        }
        if w[..m].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x: Vec<i64> = w[m..].iter().map(|&v| (-v).rem_euclid(n)).collect();
        reduce_against(&mut x, &kern_tail, n);
        for (i, v) in x.into_iter().enumerate() {
            particular[(i, j)] = v;
        }
    }
    let kernel = IntMatrix::from_columns(k, &kern_tail.into_iter().map(|(_, r)| r).collect::<Vec<_>>());
    Some(Solution { particular, kernel })
}

fn solve_integers(a: &IntMatrix, b: &IntMatrix) -> Result<Option<Solution>> {
    let k = a.cols();
    let s = smith_big(&BigMatrix::from_int(a));
    let c = s.u.mul(&BigMatrix::from_int(b));
    let diag = s.diagonal();

    // Kernel lattice basis, then its row Hermite form for canonical reduction.
    let mut kernel_rows: Vec<Vec<BigInt>> = (s.rank..k)
        .map(|j| (0..k).map(|i| s.v.get(i, j).clone()).collect())
        .collect();
    hermite_rows(&mut kernel_rows);

    let mut particular = IntMatrix::zeros(k, b.cols());
    for j in 0..b.cols() {
        let mut y = vec![BigInt::zero(); k];
        for i in 0..c.rows {
            let ci = c.get(i, j);
            if i < s.rank {
                let (q, r) = ci.div_rem(&diag[i]);
                if !r.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return Ok(None);
            }
        }
        let mut x: Vec<BigInt> = (0..k)
            .map(|r| (0..k).map(|t| s.v.get(r, t) * &y[t]).sum())
            .collect();
        for row in &kernel_rows {
            let Some(pc) = row.iter().position(|e| !e.is_zero()) else { continue };
            let q = x[pc].div_floor(&row[pc]);
            if !q.is_zero() {
                for (xi, ri) in x.iter_mut().zip(row) {
                    *xi -= &q * ri;
                }
            }
        }
        for (i, v) in x.into_iter().enumerate() {
            particular[(i, j)] = v.to_i64().ok_or(Error::Overflow)?;
        }
    }
    let cols = kernel_rows
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.to_i64().ok_or(Error::Overflow)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(Solution { particular, kernel: IntMatrix::from_columns(k, &cols) }))
}

/// In-place row Hermite normal form (positive pivots, entries above reduced).
/// Rows are assumed linearly independent.
fn hermite_rows(rows: &mut Vec<Vec<BigInt>>) {
    let Some(width) = rows.first().map(Vec::len) else { return };
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, best);
            let mut done = true;
            for i in (r + 1)..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pr = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            let pr = rows[r].clone();
            for row in rows.iter_mut().take(r) {
                let q = row[c].div_floor(&pr[c]);
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
            r += 1;
        }
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[i64]) -> IntMatrix {
        IntMatrix::new(v.len(), 1, v.to_vec())
    }

    #[test]
    fn two_x_is_two_mod_four() {
        let s = solve_linear(&col(&[2]), &col(&[2]), Ring::IntegersMod(4)).unwrap().unwrap();
        assert_eq!(s.particular, col(&[1]));
        assert_eq!(s.kernel, col(&[2]));
    }

    #[test]
    fn zero_system_has_full_kernel() {
        let s = solve_linear(&IntMatrix::zeros(1, 1), &col(&[0]), Ring::IntegersMod(4))
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, col(&[0]));
        assert_eq!(s.kernel, col(&[1]));
    }

    #[test]
    fn two_x_is_one_mod_four_unsolvable() {
        assert!(solve_linear(&col(&[2]), &col(&[1]), Ring::IntegersMod(4)).unwrap().is_none());
    }

    #[test]
    fn integers() {
        let a = IntMatrix::from_rows(&[vec![2, 4]], 2).unwrap();
        let s = solve_linear(&a, &col(&[6]), Ring::Integers).unwrap().unwrap();
        assert_eq!(a.mul(&s.particular).unwrap(), col(&[6]));
        assert_eq!(s.kernel.cols(), 1);
        assert!(solve_linear(&a, &col(&[3]), Ring::Integers).unwrap().is_none());
    }

    #[test]
    fn congruences_over_integers() {
        // 3x = 1 (mod 5)
        let s = solve_congruences(&col(&[3]), &col(&[1]), &[5], Ring::Integers).unwrap().unwrap();
        assert_eq!((3 * s.particular[(0, 0)]).rem_euclid(5), 1);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(solve_linear(&col(&[1, 2]), &col(&[1]), Ring::Integers).is_err());
    }
}
