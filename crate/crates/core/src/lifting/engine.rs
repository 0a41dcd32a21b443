//! Surjectivity of restriction maps between Hom groups, shared by the
//! module and complex checkers.

use std::collections::HashMap;
use std::hash::Hash;

use crate::complexes::{chain_maps, extend_along, factor_through, ChainMap, ChainMapSpace, Complex};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::modules::{hom_module, FpModule, HomSpace, MapSystem, ModuleMap, Term};
use crate::xclass::Caps;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    /// Maps `A -> obj` must extend along `A -> B`.
    Inject,
    /// Maps `obj -> B` must lift through `A -> B`.
    Project,
}

pub(crate) trait HomGroup<M> {
    fn module(&self) -> &FpModule;
    fn encode(&self, f: &M) -> Result<Vec<i64>>;
    fn decode(&self, e: &[i64]) -> Result<M>;
    fn generators(&self) -> Result<Vec<M>>;
}

impl HomGroup<ModuleMap> for HomSpace {
    fn module(&self) -> &FpModule {
        &self.module
    }
    fn encode(&self, f: &ModuleMap) -> Result<Vec<i64>> {
        HomSpace::encode(self, f)
    }
    fn decode(&self, e: &[i64]) -> Result<ModuleMap> {
        HomSpace::decode(self, e)
    }
    fn generators(&self) -> Result<Vec<ModuleMap>> {
        HomSpace::generators(self)
    }
}

impl HomGroup<ChainMap> for ChainMapSpace {
    fn module(&self) -> &FpModule {
        &self.module
    }
    fn encode(&self, f: &ChainMap) -> Result<Vec<i64>> {
        ChainMapSpace::encode(self, f)
    }
    fn decode(&self, e: &[i64]) -> Result<ChainMap> {
        ChainMapSpace::decode(self, e)
    }
    fn generators(&self) -> Result<Vec<ChainMap>> {
        ChainMapSpace::generators(self)
    }
}

pub(crate) trait Arrow: Clone + PartialEq + Sized {
    type Object: Clone + Eq + Hash;
    type Space: HomGroup<Self>;
    fn src(&self) -> &Self::Object;
    fn tgt(&self) -> &Self::Object;
    fn then(&self, inner: &Self) -> Result<Self>;
    fn space(a: &Self::Object, b: &Self::Object) -> Result<Self::Space>;
    /// `g` with `g ∘ phi = f`, by a direct solve.
    fn extend(phi: &Self, f: &Self) -> Result<Option<Self>>;
    /// `g` with `q ∘ g = h`, by a direct solve.
    fn factor(q: &Self, h: &Self) -> Result<Option<Self>>;
}

impl Arrow for ModuleMap {
    type Object = FpModule;
    type Space = HomSpace;
    fn src(&self) -> &FpModule {
        self.source()
    }
    fn tgt(&self) -> &FpModule {
        self.target()
    }
    fn then(&self, inner: &Self) -> Result<Self> {
        self.compose(inner)
    }
    fn space(a: &FpModule, b: &FpModule) -> Result<HomSpace> {
        hom_module(a, b)
    }
    fn extend(phi: &Self, f: &Self) -> Result<Option<Self>> {
        let mut sys = MapSystem::new(phi.ring());
        let g = sys.unknown(phi.target(), f.target());
        sys.equation(&[Term::new(g).right(phi)], f)?;
        Ok(sys.solve()?.map(|s| s.particular[g].clone()))
    }
    fn factor(q: &Self, h: &Self) -> Result<Option<Self>> {
        let mut sys = MapSystem::new(q.ring());
        let g = sys.unknown(h.source(), q.source());
        sys.equation(&[Term::new(g).left(q)], h)?;
        Ok(sys.solve()?.map(|s| s.particular[g].clone()))
    }
}

impl Arrow for ChainMap {
    type Object = Complex;
    type Space = ChainMapSpace;
    fn src(&self) -> &Complex {
        self.source()
    }
    fn tgt(&self) -> &Complex {
        self.target()
    }
    fn then(&self, inner: &Self) -> Result<Self> {
        self.compose(inner)
    }
    fn space(a: &Complex, b: &Complex) -> Result<ChainMapSpace> {
        chain_maps(a, b)
    }
    fn extend(phi: &Self, f: &Self) -> Result<Option<Self>> {
        extend_along(phi, f)
    }
    fn factor(q: &Self, h: &Self) -> Result<Option<Self>> {
        factor_through(q, h)
    }
}

/// The first test map along which the property fails, the first offending
/// map in element order, and whether exhaustive enumeration confirmed it.
pub(crate) struct Failure<M> {
    pub test: M,
    pub map: M,
    pub exhaustive: bool,
}

struct Cached<M: Arrow> {
    space: M::Space,
    gens: Vec<M>,
}

fn lookup<M: Arrow>(
    cache: &mut HashMap<(M::Object, M::Object), Cached<M>>,
    a: &M::Object,
    b: &M::Object,
) -> Result<()> {
    let key = (a.clone(), b.clone());
    if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
        let space = M::space(a, b)?;
        let gens = space.generators()?;
        e.insert(Cached { space, gens });
    }
    Ok(())
}

pub(crate) fn first_failure<M: Arrow>(
    obj: &M::Object,
    tests: &[M],
    side: Side,
    caps: &Caps,
) -> Result<Option<Failure<M>>> {
    let mut cache: HashMap<(M::Object, M::Object), Cached<M>> = HashMap::new();
    for phi in tests {
        let (from, to) = match side {
            Side::Inject => {
                lookup(&mut cache, phi.tgt(), obj)?;
                lookup(&mut cache, phi.src(), obj)?;
                ((phi.tgt().clone(), obj.clone()), (phi.src().clone(), obj.clone()))
            }
            Side::Project => {
                lookup(&mut cache, obj, phi.src())?;
                lookup(&mut cache, obj, phi.tgt())?;
                ((obj.clone(), phi.src().clone()), (obj.clone(), phi.tgt().clone()))
            }
        };
        let (big, small) = (&cache[&from], &cache[&to]);
        if small.space.module().is_zero() {
            continue;
        }
        let cols = big
            .gens
            .iter()
            .map(|g| {
                let image = match side {
                    Side::Inject => g.then(phi)?,
                    Side::Project => phi.then(g)?,
                };
                small.space.encode(&image)
            })
            .collect::<Result<Vec<_>>>()?;
        let rho = ModuleMap::new_unchecked(
            big.space.module().clone(),
            small.space.module().clone(),
            IntMatrix::from_columns(small.space.module().gens(), &cols),
        );
        if rho.is_epi()? {
            continue;
        }
        for e in small.space.module().elements()? {
            if rho.preimage(&e)?.is_some() {
                continue;
            }
            let map = small.space.decode(&e)?;
            let exhaustive = confirm(phi, &map, side, &big.space, caps)?;
            return Ok(Some(Failure { test: phi.clone(), map, exhaustive }));
        }
        return Err(Error::Inconsistent("restriction is not onto yet every element has a preimage".into()));
    }
    Ok(None)
}

/// Re-checks a counterexample with the direct solver and, when the Hom
/// group is small enough, by trying every candidate.
fn confirm<M: Arrow>(phi: &M, map: &M, side: Side, big: &M::Space, caps: &Caps) -> Result<bool> {
    let direct = match side {
        Side::Inject => M::extend(phi, map)?,
        Side::Project => M::factor(phi, map)?,
    };
    if direct.is_some() {
        return Err(Error::Inconsistent("direct solve found a map the restriction test missed".into()));
    }
    let Some(count) = big.module().order() else { return Ok(false) };
    if count > caps.hom_size {
        return Ok(false);
    }
    for e in big.module().elements()? {
        let g = big.decode(&e)?;
        let image = match side {
            Side::Inject => g.then(phi)?,
            Side::Project => phi.then(&g)?,
        };
        if image == *map {
            return Err(Error::Inconsistent("exhaustive search found a solution".into()));
        }
    }
    Ok(true)
}
