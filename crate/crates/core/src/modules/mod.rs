//! Finitely presented modules in invariant-factor form, their
//! homomorphisms, and the constructions built from them.

mod algebra;
mod ext;
mod hom;
mod map;
mod system;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Ring;

pub use algebra::{
    cokernel, direct_sum, image, kernel, normalize, pushout, quotient, submodule, Cokernel,
    DirectSum, Normalized, Pushout, SubquotientWitness,
};
pub use ext::{ext1_module, ext1_with_cover, free_cover, injective_hull};
pub use hom::{hom_module, HomSpace};
pub use map::ModuleMap;
pub use system::{MapSystem, SystemSolution, Term, UnknownId};

/// `R/(d1) + R/(d2) + ...` with `d1 | d2 | ...`.
///
/// Over `Z/n` every factor divides `n` and the factor `n` is a free summand.
/// Over `Z` a factor `0` is a free summand; zeros sort last. The zero module
/// has no factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpModule {
    ring: Ring,
    factors: Vec<i64>,
}

impl FpModule {
    pub fn new(ring: Ring, factors: Vec<i64>) -> Result<Self> {
        for w in factors.windows(2) {
            let ok = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
            if !ok {
                return Err(Error::InvalidModule(format!(
                    "factors {factors:?} do not form a divisibility chain"
                )));
            }
        }
        for &d in &factors {
            match ring {
                Ring::Integers if d == 1 || d < 0 => {
                    return Err(Error::InvalidModule(format!("invalid factor {d} over Z")))
                }
                Ring::IntegersMod(n) if d <= 1 || n % d != 0 => {
                    return Err(Error::InvalidModule(format!("factor {d} does not divide {n}")))
                }
                _ => {}
            }
        }
        Ok(Self { ring, factors })
    }

    /// Any list of cyclic orders, normalized to invariant-factor form.
    pub fn from_cyclic_orders(ring: Ring, orders: &[i64]) -> Result<Self> {
        let raw: Vec<i64> = orders.iter().map(|&d| ring.reduce_order(d)).collect();
        Ok(algebra::normalize_diagonal(ring, &raw)?.module)
    }

    pub fn zero(ring: Ring) -> Self {
        Self { ring, factors: Vec::new() }
    }

    pub fn cyclic(ring: Ring, d: i64) -> Result<Self> {
        if d == 1 {
            return Ok(Self::zero(ring));
        }
        Self::new(ring, vec![d])
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        Self { ring, factors: vec![ring.free_factor(); rank] }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn gens(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        let f = self.ring.free_factor();
        self.factors.iter().all(|&d| d == f)
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|&d| d != 0)
    }

    /// Number of elements; `None` for modules with a free `Z` summand or
    /// sizes beyond `u64`.
    pub fn order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, &d| {
            if d == 0 {
                None
            } else {
                acc.checked_mul(d as u64)
            }
        })
    }

    /// Reduces an element to canonical coordinates in place.
    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.factors) {
            if d != 0 {
                *x = x.rem_euclid(d);
            }
        }
    }

    pub fn zero_element(&self) -> Vec<i64> {
        vec![0; self.gens()]
    }

    /// All elements in lexicographic order of canonical coordinates.
    pub fn elements(&self) -> Result<Elements> {
        if !self.is_finite() {
            return Err(Error::UnsupportedRing("cannot enumerate an infinite module".into()));
        }
        Ok(Elements { factors: self.factors.clone(), next: Some(vec![0; self.gens()]) })
    }

    /// Position of an element in [`FpModule::elements`] order.
    pub fn element_index(&self, v: &[i64]) -> u64 {
        v.iter().zip(&self.factors).fold(0u64, |acc, (&x, &d)| acc * d as u64 + x as u64)
    }

    pub fn element_at(&self, mut idx: u64) -> Vec<i64> {
        let mut v = vec![0; self.gens()];
        for (x, &d) in v.iter_mut().zip(&self.factors).rev() {
            *x = (idx % d as u64) as i64;
            idx /= d as u64;
        }
        v
    }

    pub fn require_same_ring(&self, other: &FpModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)));
        }
        Ok(())
    }
}

impl Ring {
    /// Interprets a cyclic order as an invariant factor in this ring:
    /// over `Z/n` the order `0` (free) becomes `n` and `R/(d)` is `R/(gcd(d, n))`.
    pub(crate) fn reduce_order(self, d: i64) -> i64 {
        match self {
            Ring::Integers => d.abs(),
            Ring::IntegersMod(n) => crate::exactalg::gcd(d, n),
        }
    }
}

pub struct Elements {
    factors: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for Elements {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.factors[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Rank over `F_p` of an integer matrix.
pub(crate) fn rank_mod_p(rows: Vec<Vec<i64>>, p: i64) -> usize {
    let mut rows: Vec<Vec<i64>> =
        rows.into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = crate::exactalg::normalizing_unit(rows[rank][c], p);
        for x in rows[rank].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        let pr = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let q = row[c];
                for (x, &y) in row.iter_mut().zip(&pr) {
                    *x = (*x - q * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn valuation(mut n: i64, p: i64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z4: Ring = Ring::IntegersMod(4);

    #[test]
    fn construction_rules() {
        assert!(FpModule::new(Z4, vec![2, 4]).is_ok());
        assert!(FpModule::new(Z4, vec![4, 2]).is_err());
        assert!(FpModule::new(Z4, vec![3]).is_err());
        assert!(FpModule::new(Ring::Integers, vec![2, 0, 0]).is_ok());
        assert!(FpModule::new(Ring::Integers, vec![0, 2]).is_err());
    }

    #[test]
    fn cyclic_orders_normalize() {
        let m = FpModule::from_cyclic_orders(Ring::Integers, &[2, 3]).unwrap();
        assert_eq!(m.factors(), &[6]);
        let m = FpModule::from_cyclic_orders(Z4, &[4, 2]).unwrap();
        assert_eq!(m.factors(), &[2, 4]);
    }

    #[test]
    fn element_enumeration() {
        let m = FpModule::new(Z4, vec![2, 4]).unwrap();
        let all: Vec<_> = m.elements().unwrap().collect();
        assert_eq!(all.len(), 8);
        for (i, v) in all.iter().enumerate() {
            assert_eq!(m.element_index(v), i as u64);
            assert_eq!(&m.element_at(i as u64), v);
        }
        assert_eq!(FpModule::zero(Z4).elements().unwrap().count(), 1);
    }

    #[test]
    fn small_number_theory() {
        assert_eq!(prime_factors(12), vec![2, 3]);
        assert_eq!(valuation(12, 2), 2);
        assert_eq!(rank_mod_p(vec![vec![1, 1], vec![2, 2]], 3), 1);
    }
}
