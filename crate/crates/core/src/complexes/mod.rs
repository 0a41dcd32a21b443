//! Bounded cochain complexes (differentials raise degree), chain maps,
//! homotopies, cones, Hom-complexes and the homotopy/splitting solvers.

mod chain;
mod cone;
mod exact;
mod homcx;
mod solvers;

use std::borrow::Cow;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Ring;
use crate::modules::{FpModule, ModuleMap};

pub use chain::{ChainMap, Homotopy, ShortExactOfComplexes};
pub use cone::{cone_sequence, mapping_cone};
pub use exact::{homology, is_exact, ExactnessReport};
pub use homcx::{chain_maps, hom_complex, ChainMapSpace, HomComplex};
pub use solvers::{extend_along, factor_through, null_homotopy, splits};

/// A complex `C^lo -> ... -> C^hi`, zero outside its support.
///
/// Zero components at either end are trimmed on construction, so equal
/// complexes compare equal. The zero complex has an empty support.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Complex {
    ring: Ring,
    lo: i32,
    components: Vec<FpModule>,
    /// `diffs[i]` is `d^{lo+i}: C^{lo+i} -> C^{lo+i+1}`; one fewer than components.
    diffs: Vec<ModuleMap>,
    zero: FpModule,
}

impl Complex {
    /// Builds a complex from components starting at degree `lo`. Does not
    /// require `d∘d = 0`; see [`validate`].
    pub fn new(ring: Ring, lo: i32, components: Vec<FpModule>, diffs: Vec<ModuleMap>) -> Result<Self> {
        if components.is_empty() {
            if !diffs.is_empty() {
                return Err(Error::InvalidComplex("differentials without components".into()));
            }
            return Ok(Self::zero(ring));
        }
        if diffs.len() + 1 != components.len() {
            return Err(Error::InvalidComplex(format!(
                "{} components need {} differentials, got {}",
                components.len(),
                components.len() - 1,
                diffs.len()
            )));
        }
        for c in &components {
            if c.ring() != ring {
                return Err(Error::RingMismatch(format!("component over {} in a complex over {ring}", c.ring())));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.source() != &components[i] || d.target() != &components[i + 1] {
                return Err(Error::InvalidComplex(format!(
                    "differential at degree {} has the wrong source or target",
                    lo + i as i32
                )));
            }
        }
        let mut c = Self { ring, lo, components, diffs, zero: FpModule::zero(ring) };
        c.trim();
        Ok(c)
    }

    /// Like [`Complex::new`] but rejects `d∘d != 0`.
    pub fn checked(ring: Ring, lo: i32, components: Vec<FpModule>, diffs: Vec<ModuleMap>) -> Result<Self> {
        let c = Self::new(ring, lo, components, diffs)?;
        if let Some(k) = validate(&c)?.first_violation {
            return Err(Error::InvalidComplex(format!("d∘d is nonzero at degree {k}")));
        }
        Ok(c)
    }

    /// Builds from the components on `[lo, hi]` and a differential per degree.
    pub fn from_fn(
        ring: Ring,
        lo: i32,
        hi: i32,
        mut component: impl FnMut(i32) -> FpModule,
        mut diff: impl FnMut(i32, &FpModule, &FpModule) -> Result<ModuleMap>,
    ) -> Result<Self> {
        if hi < lo {
            return Ok(Self::zero(ring));
        }
        let comps: Vec<FpModule> = (lo..=hi).map(&mut component).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let i = (k - lo) as usize;
            diffs.push(diff(k, &comps[i], &comps[i + 1])?);
        }
        Self::new(ring, lo, comps, diffs)
    }

    fn trim(&mut self) {
        while self.components.last().is_some_and(FpModule::is_zero) {
            self.components.pop();
            self.diffs.pop();
        }
        let lead = self.components.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.components.drain(..lead);
            self.diffs.drain(..lead.min(self.diffs.len()));
            self.lo += lead as i32;
        }
        if self.components.is_empty() {
            self.lo = 0;
            self.diffs.clear();
        }
    }

    pub fn zero(ring: Ring) -> Self {
        Self { ring, lo: 0, components: Vec::new(), diffs: Vec::new(), zero: FpModule::zero(ring) }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Support `[lo, hi]`; `None` for the zero complex.
    pub fn support(&self) -> Option<(i32, i32)> {
        if self.is_zero() {
            None
        } else {
            Some((self.lo, self.lo + self.components.len() as i32 - 1))
        }
    }

    /// Support bounds with the empty-range convention `lo > hi` for zero.
    pub fn bounds(&self) -> (i32, i32) {
        self.support().unwrap_or((0, -1))
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        let (lo, hi) = self.bounds();
        lo..=hi
    }

    pub fn component(&self, k: i32) -> &FpModule {
        let (lo, hi) = self.bounds();
        if k < lo || k > hi {
            return &self.zero;
        }
        &self.components[(k - lo) as usize]
    }

    /// `d^k: C^k -> C^{k+1}`.
    pub fn diff(&self, k: i32) -> Cow<'_, ModuleMap> {
        let (lo, hi) = self.bounds();
        if k >= lo && k < hi {
            Cow::Borrowed(&self.diffs[(k - lo) as usize])
        } else {
            Cow::Owned(ModuleMap::zero(self.component(k), self.component(k + 1)))
        }
    }

    pub fn components(&self) -> &[FpModule] {
        &self.components
    }

    /// Total number of elements across degrees, if finite.
    pub fn total_order(&self) -> Option<u64> {
        self.components.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.order()?))
    }

    pub fn total_size(&self) -> Option<u64> {
        self.components.iter().try_fold(0u64, |acc, c| acc.checked_add(c.order()?))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for k in self.degrees() {
            if k > self.lo {
                write!(f, " --{:?}--> ", self.diff(k - 1).matrix().to_rows())?;
            }
            write!(f, "[{k}]{}", self.component(k))?;
        }
        Ok(())
    }
}

/// Result of checking `d∘d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    /// Degree `k` where `d^{k+1} ∘ d^k != 0`, the lowest one.
    pub first_violation: Option<i32>,
}

pub fn validate(c: &Complex) -> Result<Validation> {
    for k in c.degrees() {
        if !c.diff(k + 1).compose(&c.diff(k))?.is_zero() {
            return Ok(Validation { valid: false, first_violation: Some(k) });
        }
    }
    Ok(Validation { valid: true, first_violation: None })
}

/// `C[k]`: degree `m` holds `C^{m+k}`, differential times `(-1)^k`.
pub fn shift(c: &Complex, k: i32) -> Complex {
    if c.is_zero() {
        return c.clone();
    }
    let diffs = if k % 2 == 0 { c.diffs.clone() } else { c.diffs.iter().map(ModuleMap::neg).collect() };
    Complex { ring: c.ring, lo: c.lo - k, components: c.components.clone(), diffs, zero: c.zero.clone() }
}

/// `D^n(M)`: `M` in degrees `n` and `n+1`, identity between them.
pub fn disk(n: i32, m: &FpModule) -> Complex {
    Complex::new(m.ring(), n, vec![m.clone(), m.clone()], vec![ModuleMap::identity(m)])
        .expect("disk is well formed")
}

/// `S^n(M)`: `M` in degree `n` only.
pub fn sphere(n: i32, m: &FpModule) -> Complex {
    Complex::new(m.ring(), n, vec![m.clone()], Vec::new()).expect("sphere is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::IntMatrix;

    const Z4: Ring = Ring::IntegersMod(4);

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&Complex::zero(Z4)).unwrap().valid);
        assert!(validate(&disk(0, &m(&[2]))).unwrap().valid);
        let z4 = m(&[4]);
        let id = ModuleMap::identity(&z4);
        let bad = Complex::new(Z4, 0, vec![z4.clone(), z4.clone(), z4.clone()], vec![id.clone(), id]).unwrap();
        assert_eq!(validate(&bad).unwrap().first_violation, Some(0));
        assert!(Complex::checked(Z4, 0, bad.components.clone(), bad.diffs.clone()).is_err());
    }

    #[test]
    fn trimming_and_zero_disk() {
        assert!(disk(0, &FpModule::zero(Z4)).is_zero());
        let c = Complex::new(Z4, -1, vec![FpModule::zero(Z4), m(&[2])], vec![ModuleMap::zero(&FpModule::zero(Z4), &m(&[2]))]).unwrap();
        assert_eq!(c, sphere(0, &m(&[2])));
    }

    #[test]
    fn shifts() {
        let d = disk(0, &m(&[4]));
        assert_eq!(shift(&d, 0), d);
        assert_eq!(shift(&sphere(0, &m(&[2])), 1), sphere(-1, &m(&[2])));
        let s = shift(&d, 1);
        assert_eq!(s.support(), Some((-1, 0)));
        assert_eq!(s.diff(-1).matrix(), &IntMatrix::new(1, 1, vec![3]));
        assert_eq!(shift(&s, -1), d);
        let d2 = disk(0, &m(&[2]));
        assert_eq!(shift(&d2, 1).diff(-1).matrix(), &IntMatrix::new(1, 1, vec![1]));
    }

    #[test]
    fn outside_support_is_zero() {
        let s = sphere(2, &m(&[2]));
        assert!(s.component(0).is_zero());
        assert!(s.diff(2).is_zero());
        assert_eq!(s.diff(2).source(), &m(&[2]));
    }
}
