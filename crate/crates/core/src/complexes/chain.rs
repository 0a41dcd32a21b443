use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use super::Complex;
use crate::error::{Error, Result};
use crate::modules::ModuleMap;

/// A family `f^k: X^k -> Y^k` commuting with the differentials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    comps: BTreeMap<i32, ModuleMap>,
}

/// Degrees where both complexes are nonzero.
pub(crate) fn common_degrees(x: &Complex, y: &Complex) -> std::ops::RangeInclusive<i32> {
    let (a, b) = x.bounds();
    let (c, d) = y.bounds();
    a.max(c)..=b.min(d)
}

/// Degrees where either complex is nonzero, widened by one on each side.
pub(crate) fn span_degrees(x: &Complex, y: &Complex) -> std::ops::RangeInclusive<i32> {
    let (a, b) = x.bounds();
    let (c, d) = y.bounds();
    match (x.is_zero(), y.is_zero()) {
        #[allow(clippy::reversed_empty_ranges)]
        (true, true) => 0..=-1,
        (true, false) => (c - 1)..=(d + 1),
        (false, true) => (a - 1)..=(b + 1),
        _ => (a.min(c) - 1)..=(b.max(d) + 1),
    }
}

impl ChainMap {
    /// Builds and verifies a chain map from its components. Missing degrees
    /// are zero; zero components are dropped so equality is structural.
    pub fn new(source: &Complex, target: &Complex, comps: Vec<(i32, ModuleMap)>) -> Result<Self> {
        let f = Self::from_parts(source, target, comps)?;
        if let Some(k) = f.first_noncommuting()? {
            return Err(Error::NotChainMap(format!("square at degree {k} does not commute")));
        }
        Ok(f)
    }

    /// Checks shapes but not the commuting squares.
    pub fn from_parts(source: &Complex, target: &Complex, comps: Vec<(i32, ModuleMap)>) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch("chain map between different rings".into()));
        }
        let mut map = BTreeMap::new();
        for (k, m) in comps {
            if m.source() != source.component(k) || m.target() != target.component(k) {
                return Err(Error::Dimension(format!("component at degree {k} has the wrong shape")));
            }
            if !m.is_zero() {
                map.insert(k, m);
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), comps: map })
    }

    pub fn from_fn(
        source: &Complex,
        target: &Complex,
        mut f: impl FnMut(i32) -> Result<ModuleMap>,
    ) -> Result<Self> {
        let comps = common_degrees(source, target).map(|k| Ok((k, f(k)?))).collect::<Result<Vec<_>>>()?;
        Self::new(source, target, comps)
    }

    pub fn zero(source: &Complex, target: &Complex) -> Self {
        Self { source: source.clone(), target: target.clone(), comps: BTreeMap::new() }
    }

    pub fn identity(c: &Complex) -> Self {
        let comps = c
            .degrees()
            .filter(|&k| !c.component(k).is_zero())
            .map(|k| (k, ModuleMap::identity(c.component(k))))
            .collect();
        Self { source: c.clone(), target: c.clone(), comps }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn component(&self, k: i32) -> Cow<'_, ModuleMap> {
        match self.comps.get(&k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(ModuleMap::zero(self.source.component(k), self.target.component(k))),
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (i32, &ModuleMap)> {
        self.comps.iter().map(|(&k, m)| (k, m))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(ModuleMap::is_zero)
    }

    /// Lowest degree `k` with `d_Y^k f^k != f^{k+1} d_X^k`.
    pub fn first_noncommuting(&self) -> Result<Option<i32>> {
        for k in span_degrees(&self.source, &self.target) {
            let lhs = self.target.diff(k).compose(&self.component(k))?;
            let rhs = self.component(k + 1).compose(&self.source.diff(k))?;
            if lhs != rhs {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.target != self.source {
            return Err(Error::Dimension("chain maps are not composable".into()));
        }
        let mut comps = Vec::new();
        for k in common_degrees(&inner.source, &self.target) {
            comps.push((k, self.component(k).compose(&inner.component(k))?));
        }
        Self::from_parts(&inner.source, &self.target, comps)
    }

    fn combine(&self, o: &ChainMap, f: impl Fn(&ModuleMap, &ModuleMap) -> Result<ModuleMap>) -> Result<ChainMap> {
        if self.source != o.source || self.target != o.target {
            return Err(Error::Dimension("chain maps have different source or target".into()));
        }
        let comps = common_degrees(&self.source, &self.target)
            .map(|k| Ok((k, f(&self.component(k), &o.component(k))?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(&self.source, &self.target, comps)
    }

    pub fn add(&self, o: &ChainMap) -> Result<ChainMap> {
        self.combine(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &ChainMap) -> Result<ChainMap> {
        self.combine(o, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> ChainMap {
        let comps = self.comps.iter().map(|(&k, m)| (k, m.neg())).collect();
        Self { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn is_degreewise_mono(&self) -> Result<bool> {
        for k in self.source.degrees() {
            if !self.component(k).is_mono()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_degreewise_epi(&self) -> Result<bool> {
        for k in self.target.degrees() {
            if !self.component(k).is_epi()? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.comps.iter().map(|(k, m)| (k, m.matrix().to_rows()))).finish()
    }
}

/// `s^k: X^k -> Y^{k-1}` with `s^{k+1} d^k + d^{k-1} s^k = f^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub map: ChainMap,
    comps: BTreeMap<i32, ModuleMap>,
}

impl Homotopy {
    pub fn new(map: &ChainMap, comps: Vec<(i32, ModuleMap)>) -> Result<Self> {
        let (x, y) = (map.source(), map.target());
        let mut out = BTreeMap::new();
        for (k, s) in comps {
            if s.source() != x.component(k) || s.target() != y.component(k - 1) {
                return Err(Error::Dimension(format!("homotopy component {k} has the wrong shape")));
            }
            out.insert(k, s);
        }
        Ok(Self { map: map.clone(), comps: out })
    }

    pub fn component(&self, k: i32) -> Cow<'_, ModuleMap> {
        match self.comps.get(&k) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(ModuleMap::zero(
                self.map.source().component(k),
                self.map.target().component(k - 1),
            )),
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (i32, &ModuleMap)> {
        self.comps.iter().map(|(&k, m)| (k, m))
    }

    /// Lowest degree where the defining identity fails.
    pub fn first_violation(&self) -> Result<Option<i32>> {
        let (x, y) = (self.map.source(), self.map.target());
        for k in span_degrees(x, y) {
            let a = self.component(k + 1).compose(&x.diff(k))?;
            let b = y.diff(k - 1).compose(&self.component(k))?;
            if a.add(&b)? != *self.map.component(k) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    pub fn verify(&self) -> Result<bool> {
        Ok(self.first_violation()?.is_none())
    }
}

/// `0 -> left -> middle -> right -> 0`, exact in each degree.
#[derive(Clone, Debug)]
pub struct ShortExactOfComplexes {
    pub left: Complex,
    pub middle: Complex,
    pub right: Complex,
    pub inj: ChainMap,
    pub surj: ChainMap,
}

impl ShortExactOfComplexes {
    pub fn new(inj: ChainMap, surj: ChainMap) -> Result<Self> {
        let s = Self {
            left: inj.source().clone(),
            middle: inj.target().clone(),
            right: surj.target().clone(),
            inj,
            surj,
        };
        if let Some(msg) = s.first_defect()? {
            return Err(Error::Hypothesis(msg));
        }
        Ok(s)
    }

    /// Describes the first failure of degreewise exactness, if any.
    pub fn first_defect(&self) -> Result<Option<String>> {
        if self.surj.source() != &self.middle {
            return Err(Error::Dimension("maps do not share the middle complex".into()));
        }
        for k in self.middle.degrees().chain(self.left.degrees()).chain(self.right.degrees()) {
            let i = self.inj.component(k);
            let p = self.surj.component(k);
            if !i.is_mono()? {
                return Ok(Some(format!("inclusion not mono at degree {k}")));
            }
            if !p.is_epi()? {
                return Ok(Some(format!("projection not epi at degree {k}")));
            }
            if !p.compose(&i)?.is_zero() {
                return Ok(Some(format!("composite nonzero at degree {k}")));
            }
            let ker = crate::modules::kernel(&p)?;
            for g in 0..ker.sub().gens() {
                let y = ker.inclusion.matrix().column(g);
                if i.preimage(&y)?.is_none() {
                    return Ok(Some(format!("kernel larger than image at degree {k}")));
                }
            }
        }
        Ok(None)
    }
}

