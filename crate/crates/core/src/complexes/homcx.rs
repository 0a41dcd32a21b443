use std::collections::BTreeMap;

use super::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::modules::{direct_sum, hom_module, kernel, DirectSum, FpModule, HomSpace, ModuleMap, SubquotientWitness};

/// Degree `n` of `Hom(X, Y)`: `+_i Hom(X^i, Y^{i+n})`.
#[derive(Clone, Debug)]
struct Block {
    n: i32,
    parts: Vec<(i32, HomSpace)>,
    sum: DirectSum,
}

impl Block {
    fn build(x: &Complex, y: &Complex, n: i32) -> Result<Self> {
        let mut parts = Vec::new();
        for i in x.degrees() {
            let t = y.component(i + n);
            if !t.is_zero() {
                parts.push((i, hom_module(x.component(i), t)?));
            }
        }
        let mods: Vec<FpModule> = parts.iter().map(|(_, h)| h.module.clone()).collect();
        let sum = direct_sum(x.ring(), &mods)?;
        Ok(Self { n, parts, sum })
    }

    fn encode(&self, family: &BTreeMap<i32, ModuleMap>) -> Result<Vec<i64>> {
        let mut acc = self.sum.module.zero_element();
        for (p, (i, h)) in self.parts.iter().enumerate() {
            if let Some(f) = family.get(i) {
                let v = self.sum.injections[p].apply(&h.encode(f)?)?;
                for (a, b) in acc.iter_mut().zip(v) {
                    *a += b;
                }
            }
        }
        self.sum.module.reduce(&mut acc);
        Ok(acc)
    }

    fn decode(&self, e: &[i64]) -> Result<BTreeMap<i32, ModuleMap>> {
        let mut out = BTreeMap::new();
        for (p, (i, h)) in self.parts.iter().enumerate() {
            out.insert(*i, h.decode(&self.sum.projections[p].apply(e)?)?);
        }
        Ok(out)
    }
}

/// `(∂f)^i = d_Y^{i+n} f^i - (-1)^n f^{i+1} d_X^i`.
fn differential(x: &Complex, y: &Complex, from: &Block, to: &Block) -> Result<ModuleMap> {
    let n = from.n;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut cols = Vec::with_capacity(from.sum.module.gens());
    for g in 0..from.sum.module.gens() {
        let mut e = from.sum.module.zero_element();
        e[g] = 1;
        let fam = from.decode(&e)?;
        let mut out = BTreeMap::new();
        for (i, _) in &to.parts {
            let i = *i;
            let mut v = ModuleMap::zero(x.component(i), y.component(i + n + 1));
            if let Some(fi) = fam.get(&i) {
                v = v.add(&y.diff(i + n).compose(fi)?)?;
            }
            if let Some(fi1) = fam.get(&(i + 1)) {
                let t = fi1.compose(&x.diff(i))?;
                v = if sign == 1 { v.sub(&t)? } else { v.add(&t)? };
            }
            out.insert(i, v);
        }
        cols.push(to.encode(&out)?);
    }
    ModuleMap::new(
        from.sum.module.clone(),
        to.sum.module.clone(),
        IntMatrix::from_columns(to.sum.module.gens(), &cols),
    )
}

/// The complex `Hom(X, Y)` with a codec for its elements.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub complex: Complex,
    x: Complex,
    y: Complex,
    blocks: BTreeMap<i32, Block>,
}

pub fn hom_complex(x: &Complex, y: &Complex) -> Result<HomComplex> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch("Hom complex between different rings".into()));
    }
    let ring = x.ring();
    if x.is_zero() || y.is_zero() {
        return Ok(HomComplex { complex: Complex::zero(ring), x: x.clone(), y: y.clone(), blocks: BTreeMap::new() });
    }
    let (xl, xh) = x.bounds();
    let (yl, yh) = y.bounds();
    let (lo, hi) = (yl - xh, yh - xl);
    let mut blocks = BTreeMap::new();
    for n in lo..=hi + 1 {
        blocks.insert(n, Block::build(x, y, n)?);
    }
    let mut diffs = Vec::new();
    for n in lo..hi {
        diffs.push(differential(x, y, &blocks[&n], &blocks[&(n + 1)])?);
    }
    let comps = (lo..=hi).map(|n| blocks[&n].sum.module.clone()).collect();
    let complex = Complex::new(ring, lo, comps, diffs)?;
    Ok(HomComplex { complex, x: x.clone(), y: y.clone(), blocks })
}

impl HomComplex {
    /// Element of degree `n` as a family `i -> (X^i -> Y^{i+n})`.
    pub fn decode(&self, n: i32, e: &[i64]) -> Result<BTreeMap<i32, ModuleMap>> {
        match self.blocks.get(&n) {
            Some(b) => b.decode(e),
            None => Ok(BTreeMap::new()),
        }
    }

    pub fn encode(&self, n: i32, family: &BTreeMap<i32, ModuleMap>) -> Result<Vec<i64>> {
        match self.blocks.get(&n) {
            Some(b) => b.encode(family),
            None => Ok(Vec::new()),
        }
    }

    pub fn source(&self) -> &Complex {
        &self.x
    }

    pub fn target(&self) -> &Complex {
        &self.y
    }
}

/// The group of chain maps `X -> Y`, as degree-0 cycles of `Hom(X, Y)`.
#[derive(Clone, Debug)]
pub struct ChainMapSpace {
    pub x: Complex,
    pub y: Complex,
    /// Invariant-factor form of the group of chain maps.
    pub module: FpModule,
    block: Option<Block>,
    cycles: Option<SubquotientWitness>,
}

pub fn chain_maps(x: &Complex, y: &Complex) -> Result<ChainMapSpace> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch("chain maps between different rings".into()));
    }
    let b0 = Block::build(x, y, 0)?;
    if b0.sum.module.is_zero() {
        return Ok(ChainMapSpace { x: x.clone(), y: y.clone(), module: FpModule::zero(x.ring()), block: None, cycles: None });
    }
    let b1 = Block::build(x, y, 1)?;
    let d = differential(x, y, &b0, &b1)?;
    let z = kernel(&d)?;
    Ok(ChainMapSpace {
        x: x.clone(),
        y: y.clone(),
        module: z.sub().clone(),
        block: Some(b0),
        cycles: Some(z),
    })
}

impl ChainMapSpace {
    pub fn decode(&self, e: &[i64]) -> Result<ChainMap> {
        let (Some(b), Some(z)) = (&self.block, &self.cycles) else {
            return Ok(ChainMap::zero(&self.x, &self.y));
        };
        let fam = b.decode(&z.inclusion.apply(e)?)?;
        ChainMap::from_parts(&self.x, &self.y, fam.into_iter().collect())
    }

    pub fn encode(&self, f: &ChainMap) -> Result<Vec<i64>> {
        let (Some(b), Some(z)) = (&self.block, &self.cycles) else {
            return Ok(Vec::new());
        };
        let fam: BTreeMap<i32, ModuleMap> = f.components().map(|(k, m)| (k, m.clone())).collect();
        let h = b.encode(&fam)?;
        z.inclusion
            .preimage(&h)?
            .ok_or_else(|| Error::NotChainMap("family is not a cycle".into()))
    }

    /// Chain maps corresponding to the canonical generators.
    pub fn generators(&self) -> Result<Vec<ChainMap>> {
        (0..self.module.gens())
            .map(|k| {
                let mut e = self.module.zero_element();
                e[k] = 1;
                self.decode(&e)
            })
            .collect()
    }

    /// Every chain map, in element order.
    pub fn maps(&self) -> Result<impl Iterator<Item = Result<ChainMap>> + '_> {
        Ok(self.module.elements()?.map(move |e| self.decode(&e)))
    }

    pub fn count(&self) -> Option<u64> {
        self.module.order()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{disk, is_exact, sphere};
    use super::*;
    use crate::exactalg::Ring;

    const Z4: Ring = Ring::IntegersMod(4);

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    #[test]
    fn hom_from_sphere_is_single_column() {
        let y = disk(0, &m(&[2, 4]));
        let h = hom_complex(&sphere(0, &m(&[4])), &y).unwrap();
        for n in y.degrees() {
            assert_eq!(h.complex.component(n), &hom_module(&m(&[4]), y.component(n)).unwrap().module);
        }
        assert!(hom_complex(&y, &Complex::zero(Z4)).unwrap().complex.is_zero());
    }

    #[test]
    fn sphere_into_disk_has_no_homology() {
        let h = hom_complex(&sphere(0, &m(&[2])), &disk(0, &m(&[2]))).unwrap();
        assert!(is_exact(&h.complex).unwrap().exact);
    }

    #[test]
    fn cycles_match_chain_maps() {
        let x = disk(0, &m(&[2]));
        let y = disk(0, &m(&[4]));
        let space = chain_maps(&x, &y).unwrap();
        // Chain maps D(Z/2) -> D(Z/4) are determined by f^0 in Hom(Z/2, Z/4).
        assert_eq!(space.count(), Some(2));
        for f in space.maps().unwrap() {
            let f = f.unwrap();
            assert!(f.first_noncommuting().unwrap().is_none());
            assert_eq!(space.decode(&space.encode(&f).unwrap()).unwrap(), f);
        }
    }
}
