use std::fmt;

use serde::{Deserialize, Serialize};

use super::{prime_factors, rank_mod_p, FpModule};
use crate::error::{Error, Result};
use crate::exactalg::{solve_congruences, IntMatrix, Ring};

/// A homomorphism between modules in canonical coordinates.
///
/// Column `j` is the image of source generator `j`; row `i` is reduced
/// modulo target factor `i`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: IntMatrix,
}

impl ModuleMap {
    pub fn new(source: FpModule, target: FpModule, matrix: IntMatrix) -> Result<Self> {
        source.require_same_ring(&target)?;
        if matrix.shape() != (target.gens(), source.gens()) {
            return Err(Error::Dimension(format!(
                "matrix is {:?} but map {} -> {} needs {}x{}",
                matrix.shape(),
                source,
                target,
                target.gens(),
                source.gens()
            )));
        }
        let matrix = matrix.reduce_rows(target.factors());
        for (i, &e) in target.factors().iter().enumerate() {
            for (j, &d) in source.factors().iter().enumerate() {
                let a = matrix[(i, j)];
                let ok = match (e, d) {
                    (0, 0) => true,
                    (0, _) => a == 0,
                    (_, _) => (d as i128 * a as i128) % e as i128 == 0,
                };
                if !ok {
                    return Err(Error::IllDefinedMap(format!(
                        "generator {j} of order {d} cannot map to {a} in Z/{e}"
                    )));
                }
            }
        }
        Ok(Self { source, target, matrix })
    }

    /// Skips the well-definedness check; the matrix is still reduced.
    pub(crate) fn new_unchecked(source: FpModule, target: FpModule, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.gens(), source.gens()));
        let matrix = matrix.reduce_rows(target.factors());
        Self { source, target, matrix }
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.gens(), source.gens()),
        }
    }

    pub fn identity(m: &FpModule) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            matrix: IntMatrix::identity(m.gens()).reduce_rows(m.factors()),
        }
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> Ring {
        self.source.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.source.gens() {
            return Err(Error::Dimension("element has wrong length".into()));
        }
        let mut y = match self.ring() {
            Ring::IntegersMod(n) => {
                let mut y = vec![0i64; self.target.gens()];
                for (i, yi) in y.iter_mut().enumerate() {
                    let mut acc = 0i128;
                    for (j, &xj) in x.iter().enumerate() {
                        acc += self.matrix[(i, j)] as i128 * xj as i128;
                    }
                    *yi = acc.rem_euclid(n as i128) as i64;
                }
                y
            }
            Ring::Integers => self.matrix.mul_vec(x)?,
        };
        self.target.reduce(&mut y);
        Ok(y)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if inner.target != self.source {
            return Err(Error::Dimension(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        let m = match self.ring() {
            Ring::IntegersMod(n) => self.matrix.mul_mod(&inner.matrix, n)?,
            Ring::Integers => self.matrix.mul(&inner.matrix)?,
        };
        Ok(Self::new_unchecked(inner.source.clone(), self.target.clone(), m))
    }

    fn same_shape(&self, o: &ModuleMap) -> Result<()> {
        if self.source != o.source || self.target != o.target {
            return Err(Error::Dimension("maps have different source or target".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &ModuleMap) -> Result<ModuleMap> {
        self.same_shape(o)?;
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&o.matrix)?))
    }

    pub fn sub(&self, o: &ModuleMap) -> Result<ModuleMap> {
        self.same_shape(o)?;
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.sub(&o.matrix)?))
    }

    pub fn neg(&self) -> ModuleMap {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: i64) -> Result<ModuleMap> {
        let c = self.ring().reduce(c);
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c)?))
    }

    /// Some `x` with `f(x) = y`, if `y` lies in the image.
    pub fn preimage(&self, y: &[i64]) -> Result<Option<Vec<i64>>> {
        let b = IntMatrix::new(y.len(), 1, y.to_vec());
        let sol = solve_congruences(&self.matrix, &b, self.target.factors(), self.ring())?;
        Ok(sol.map(|s| {
            let mut x = s.particular.column(0);
            self.source.reduce(&mut x);
            x
        }))
    }

    pub fn is_mono(&self) -> Result<bool> {
        if self.source.is_finite() && self.target.is_finite() {
            return Ok(self.finite_is_mono());
        }
        Ok(super::kernel(self)?.inclusion.source().is_zero())
    }

    pub fn is_epi(&self) -> Result<bool> {
        if self.source.is_finite() && self.target.is_finite() {
            return Ok(self.finite_is_epi());
        }
        Ok(super::cokernel(self)?.quotient.is_zero())
    }

    pub fn is_iso(&self) -> Result<bool> {
        Ok(self.is_mono()? && self.is_epi()?)
    }

    fn primes(&self) -> Vec<i64> {
        let mut ps: Vec<i64> = self
            .source
            .factors()
            .iter()
            .chain(self.target.factors())
            .flat_map(|&d| prime_factors(d))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    // Injective iff injective on each p-socle: the socle generators
    // (d_j/p) e_j are sent to vectors read in target socle coordinates.
    fn finite_is_mono(&self) -> bool {
        let (src, tgt) = (self.source.factors(), self.target.factors());
        for p in self.primes() {
            let cols: Vec<usize> = (0..src.len()).filter(|&j| src[j] % p == 0).collect();
            if cols.is_empty() {
                continue;
            }
            let rows_t: Vec<usize> = (0..tgt.len()).filter(|&i| tgt[i] % p == 0).collect();
            let vecs: Vec<Vec<i64>> = cols
                .iter()
                .map(|&j| {
                    let s = src[j] / p;
                    rows_t
                        .iter()
                        .map(|&i| {
                            let y = (self.matrix[(i, j)] as i128 * s as i128)
                                .rem_euclid(tgt[i] as i128) as i64;
                            y / (tgt[i] / p)
                        })
                        .collect()
                })
                .collect();
            if rank_mod_p(vecs, p) < cols.len() {
                return false;
            }
        }
        true
    }

    // Surjective iff surjective after reducing mod each prime.
    fn finite_is_epi(&self) -> bool {
        let tgt = self.target.factors();
        for p in self.primes() {
            let rows: Vec<Vec<i64>> = (0..tgt.len())
                .filter(|&i| tgt[i] % p == 0)
                .map(|i| self.matrix.row(i).to_vec())
                .collect();
            let need = rows.len();
            if need > 0 && rank_mod_p(rows, p) < need {
                return false;
            }
        }
        true
    }
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.source, self.target, self.matrix.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z4: Ring = Ring::IntegersMod(4);

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    fn brute_mono(f: &ModuleMap) -> bool {
        f.source().elements().unwrap().filter(|x| f.apply(x).unwrap().iter().all(|&y| y == 0)).count()
            == 1
    }

    fn brute_epi(f: &ModuleMap) -> bool {
        let img: std::collections::BTreeSet<_> =
            f.source().elements().unwrap().map(|x| f.apply(&x).unwrap()).collect();
        img.len() as u64 == f.target().order().unwrap()
    }

    #[test]
    fn well_definedness() {
        assert!(ModuleMap::new(m(&[2]), m(&[4]), IntMatrix::new(1, 1, vec![2])).is_ok());
        assert!(ModuleMap::new(m(&[2]), m(&[4]), IntMatrix::new(1, 1, vec![1])).is_err());
        assert!(ModuleMap::new(m(&[4]), m(&[2]), IntMatrix::new(1, 1, vec![1])).is_ok());
        let z = Ring::Integers;
        let t = FpModule::new(z, vec![2]).unwrap();
        let f = FpModule::free(z, 1);
        assert!(ModuleMap::new(t, f, IntMatrix::new(1, 1, vec![1])).is_err());
    }

    #[test]
    fn mono_epi_agree_with_enumeration() {
        let mods = [m(&[2]), m(&[4]), m(&[2, 2]), m(&[2, 4]), m(&[4, 4])];
        for s in &mods {
            for t in &mods {
                let hs = super::super::hom_module(s, t).unwrap();
                for e in hs.module.elements().unwrap() {
                    let f = hs.decode(&e).unwrap();
                    assert_eq!(f.is_mono().unwrap(), brute_mono(&f), "{f:?}");
                    assert_eq!(f.is_epi().unwrap(), brute_epi(&f), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn composition() {
        let two = ModuleMap::new(m(&[4]), m(&[4]), IntMatrix::new(1, 1, vec![2])).unwrap();
        assert!(two.compose(&two).unwrap().is_zero());
        let id = ModuleMap::identity(&m(&[4]));
        assert_eq!(id.compose(&two).unwrap(), two);
    }
}
