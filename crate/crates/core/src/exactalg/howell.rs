//! Howell form over `Z/n`.
//!
//! `Z/n` is not a field, so plain row echelon forms lose information about
//! the row span. The Howell form adds, for every pivot `p`, the annihilator
//! multiple `(n/p) * row` back into the elimination; the result has the
//! property that the rows whose first `k` entries vanish span exactly the
//! vectors of the row span whose first `k` entries vanish. That makes
//! membership, kernels and canonical coset representatives computable by
//! greedy reduction.

use super::matrix::IntMatrix;
use super::{gcd, xgcd};

/// The unit `u` mod `n` with `u * a == gcd(a, n) (mod n)`.
pub(crate) fn normalizing_unit(a: i64, n: i64) -> i64 {
    let a = a.rem_euclid(n);
    if a == 0 {
        return 1;
    }
    let g = gcd(a, n);
    let (a1, n1) = (a / g, n / g);
    let u0 = if n1 == 1 {
        0
    } else {
        let (_, s, _) = xgcd(a1, n1);
        s.rem_euclid(n1)
    };
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += n1;
    }
    u.rem_euclid(n)
}

fn combine(v: &mut [i64], w: &[i64], q: i64, n: i64) {
    if q == 0 {
        return;
    }
    let (q, n) = (q as i128, n as i128);
    for (x, &y) in v.iter_mut().zip(w) {
        *x = ((*x as i128 + q * y as i128).rem_euclid(n)) as i64;
    }
}

fn scale(v: &mut [i64], c: i64, n: i64) {
    let (c, n) = (c as i128, n as i128);
    for x in v.iter_mut() {
        *x = ((*x as i128 * c).rem_euclid(n)) as i64;
    }
}

/// Pivot rows of the Howell form, in order, with their pivot columns.
/// Zero rows are dropped.
pub(crate) fn howell_rows(rows: Vec<Vec<i64>>, cols: usize, n: i64) -> Vec<(usize, Vec<i64>)> {
    let mut pending: Vec<Vec<i64>> = rows
        .into_iter()
        .map(|mut r| {
            for x in r.iter_mut() {
                *x = x.rem_euclid(n);
            }
            r
        })
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<(usize, Vec<i64>)> = Vec::new();

    for j in 0..cols {
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest = Vec::with_capacity(pending.len());
        for mut r in pending.drain(..) {
            if r[j] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let (a, b) = (p[j], r[j]);
                    let (g, s, t) = xgcd(a, b);
                    // [s t; b/g -a/g] has determinant -1.
                    let mut np = p.clone();
                    scale(&mut np, s, n);
                    combine(&mut np, &r, t, n);
                    let mut nr = p;
                    scale(&mut nr, b / g, n);
                    scale(&mut r, a / g, n);
                    combine(&mut nr, &r, -1, n);
                    debug_assert_eq!(nr[j], 0);
                    if nr.iter().any(|&x| x != 0) {
                        rest.push(nr);
                    }
                    pivot = Some(np);
                }
            }
        }
        pending = rest;
        if let Some(mut p) = pivot {
            let u = normalizing_unit(p[j], n);
            scale(&mut p, u, n);
            let g = p[j];
            debug_assert_eq!(n % g, 0);
            let mut ann = p.clone();
            scale(&mut ann, n / g, n);
            if ann.iter().any(|&x| x != 0) {
                pending.push(ann);
            }
            out.push((j, p));
        }
    }

    // Reduce entries above each pivot into [0, pivot).
    for k in 0..out.len() {
        let (c, pk) = (out[k].0, out[k].1.clone());
        let p = pk[c];
        for row in out.iter_mut().take(k) {
            let q = row.1[c].div_euclid(p);
            combine(&mut row.1, &pk, -q, n);
        }
    }
    out
}

/// Howell form of `a` over `Z/n`. The result has `max(rows(a), r)` rows
/// where `r` is the number of nonzero Howell rows; zero rows come last.
pub fn howell_form_mod(a: &IntMatrix, n: i64) -> IntMatrix {
    let rows = howell_rows(a.to_rows(), a.cols(), n);
    let total = a.rows().max(rows.len());
    let mut out = IntMatrix::zeros(total, a.cols());
    for (i, (_, r)) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    out
}

/// Greedy reduction of `v` against Howell rows restricted to columns
/// `offset..`. Returns the coefficients used, one per row.
pub(crate) fn reduce_against(
    v: &mut [i64],
    rows: &[(usize, Vec<i64>)],
    n: i64,
) -> Vec<i64> {
    let mut coeffs = vec![0; rows.len()];
    for (k, (c, r)) in rows.iter().enumerate() {
        let p = r[*c];
        let q = v[*c].div_euclid(p);
        if q != 0 {
            combine(v, r, -q, n);
            coeffs[k] = q;
        }
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn span(a: &IntMatrix, n: i64) -> BTreeSet<Vec<i64>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0; a.cols()]);
        loop {
            let mut grown = set.clone();
            for v in &set {
                for i in 0..a.rows() {
                    let w: Vec<i64> =
                        v.iter().zip(a.row(i)).map(|(x, y)| (x + y).rem_euclid(n)).collect();
                    grown.insert(w);
                }
            }
            if grown.len() == set.len() {
                return set;
            }
            set = grown;
        }
    }

    #[test]
    fn examples() {
        let a = IntMatrix::new(1, 1, vec![2]);
        assert_eq!(howell_form_mod(&a, 4), a);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(howell_form_mod(&z, 4), z);
        let b = IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]], 2).unwrap();
        assert_eq!(howell_form_mod(&b, 4), b);
        assert_eq!(span(&b, 4).len(), 8);
    }

    #[test]
    fn annihilator_row_appears() {
        // span{(2,1)} mod 4 contains (0,2), which needs its own row.
        let a = IntMatrix::new(1, 2, vec![2, 1]);
        let h = howell_form_mod(&a, 4);
        assert_eq!(h.to_rows(), vec![vec![2, 1], vec![0, 2]]);
        assert_eq!(span(&a, 4), span(&h, 4));
    }

    #[test]
    fn unit_normalization() {
        for n in [4, 6, 9, 12, 30] {
            for a in 1..n {
                let u = normalizing_unit(a, n);
                assert_eq!(gcd(u, n), 1);
                assert_eq!((u * a).rem_euclid(n), gcd(a, n));
            }
        }
    }
}
