use serde::Serialize;

use super::Complex;
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::modules::{kernel, quotient, FpModule};

/// Per-degree homology of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub exact: bool,
    /// `(k, H^k)` for every degree in the support.
    pub homology: Vec<(i32, FpModule)>,
    /// `(k, |ker d^k|, |im d^{k-1}|)` when finite.
    pub sizes: Vec<(i32, Option<u64>, Option<u64>)>,
}

impl ExactnessReport {
    /// Lowest degree with nonzero homology.
    pub fn first_nonexact(&self) -> Option<i32> {
        self.homology.iter().find(|(_, h)| !h.is_zero()).map(|(k, _)| *k)
    }
}

/// `H^k = ker d^k / im d^{k-1}`.
pub fn homology(c: &Complex, k: i32) -> Result<(FpModule, Option<u64>, Option<u64>)> {
    let ker = kernel(&c.diff(k))?;
    let incoming = c.diff(k - 1);
    let mut cols = Vec::with_capacity(incoming.source().gens());
    for j in 0..incoming.source().gens() {
        let y = incoming.matrix().column(j);
        match ker.inclusion.preimage(&y)? {
            Some(x) => cols.push(x),
            None => {
                return Err(Error::InvalidComplex(format!("image of d^{} is not inside ker d^{k}", k - 1)))
            }
        }
    }
    let gens = IntMatrix::from_columns(ker.sub().gens(), &cols);
    let (h, _) = quotient(ker.sub(), &gens)?;
    let kord = ker.sub().order();
    let iord = match (kord, h.order()) {
        (Some(a), Some(b)) if b > 0 => Some(a / b),
        _ => None,
    };
    Ok((h, kord, iord))
}

pub fn is_exact(c: &Complex) -> Result<ExactnessReport> {
    let mut homs = Vec::new();
    let mut sizes = Vec::new();
    for k in c.degrees() {
        let (h, ko, io) = homology(c, k)?;
        homs.push((k, h));
        sizes.push((k, ko, io));
    }
    let exact = homs.iter().all(|(_, h)| h.is_zero());
    Ok(ExactnessReport { exact, homology: homs, sizes })
}

#[cfg(test)]
mod tests {
    use super::super::{disk, sphere};
    use super::*;
    use crate::exactalg::Ring;
    use crate::modules::ModuleMap;

    const Z4: Ring = Ring::IntegersMod(4);

    #[test]
    fn examples() {
        let z2 = FpModule::new(Z4, vec![2]).unwrap();
        let z4 = FpModule::new(Z4, vec![4]).unwrap();
        assert!(is_exact(&disk(0, &z2)).unwrap().exact);
        let r = is_exact(&sphere(0, &z2)).unwrap();
        assert!(!r.exact);
        assert_eq!(r.homology, vec![(0, z2.clone())]);

        let two = ModuleMap::new(z4.clone(), z4.clone(), IntMatrix::new(1, 1, vec![2])).unwrap();
        let c = Complex::new(Z4, 0, vec![z4.clone(), z4.clone()], vec![two]).unwrap();
        let r = is_exact(&c).unwrap();
        assert_eq!(r.homology, vec![(0, z2.clone()), (1, z2)]);
        assert_eq!(r.sizes[1], (1, Some(4), Some(2)));
        assert_eq!(r.first_nonexact(), Some(0));
    }

    #[test]
    fn integer_homology() {
        let z = Ring::Integers;
        let f = FpModule::free(z, 1);
        let three = ModuleMap::new(f.clone(), f.clone(), IntMatrix::new(1, 1, vec![3])).unwrap();
        let c = Complex::new(z, 0, vec![f.clone(), f], vec![three]).unwrap();
        let r = is_exact(&c).unwrap();
        assert!(r.homology[0].1.is_zero());
        assert_eq!(r.homology[1].1, FpModule::new(z, vec![3]).unwrap());
    }
}
