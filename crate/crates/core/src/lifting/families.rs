//! The test maps quantified over by the lifting checkers.
//!
//! Besides every admissible map between universe members, each family
//! carries one canonical witness per class member: the presentation
//! `K -> F` of `Q` (injective side) and the hull quotient `I(K) -> I(K)/K`
//! (projective side). Their restriction maps have cokernel `Ext^1(Q, -)`
//! and `Ext^1(-, K)`, so the lifting and `Ext^1` criteria agree exactly.

use super::engine::{first_failure, Side};
use super::verdict::{Evidence, Verdict};
use crate::complexes::{chain_maps, disk, sphere, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::modules::{cokernel, free_cover, injective_hull, kernel, FpModule, ModuleMap};
use crate::xclass::{enumerate_epis, enumerate_monos, Caps, ComplexUniverse, ModuleUniverse, XClass};

fn presentation(q: &FpModule) -> Result<ModuleMap> {
    Ok(kernel(&free_cover(q))?.inclusion)
}

fn hull_quotient(k: &FpModule) -> Result<ModuleMap> {
    let (_, e) = injective_hull(k)?;
    Ok(cokernel(&e)?.projection)
}

/// Monos (or epis) between universe modules with cokernel (or kernel) in
/// the class, isomorphisms and zero sources (targets) left out.
#[derive(Clone, Debug)]
pub struct ModuleFamily {
    pub(crate) side: Side,
    pub tests: Vec<ModuleMap>,
    pub universe: String,
}

impl ModuleFamily {
    pub fn injective(x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Self> {
        let mods: Vec<FpModule> = u.members().into_iter().filter(|m| !m.is_zero()).collect();
        let mut tests = Vec::new();
        for a in &mods {
            for b in &mods {
                for i in enumerate_monos(a, b, caps)? {
                    if !i.is_epi()? && x.contains_module(&cokernel(&i)?.quotient) {
                        tests.push(i);
                    }
                }
            }
        }
        for q in mods.iter().filter(|q| x.contains_module(q)) {
            let p = presentation(q)?;
            if !p.source().is_zero() && !tests.contains(&p) {
                tests.push(p);
            }
        }
        Ok(Self { side: Side::Inject, tests, universe: format!("monos with cokernel in {x} between {u}") })
    }

    pub fn projective(x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Self> {
        let mods: Vec<FpModule> = u.members().into_iter().filter(|m| !m.is_zero()).collect();
        let mut tests = Vec::new();
        for a in &mods {
            for b in &mods {
                for q in enumerate_epis(a, b, caps)? {
                    if !q.is_mono()? && x.contains_module(kernel(&q)?.sub()) {
                        tests.push(q);
                    }
                }
            }
        }
        for k in mods.iter().filter(|k| x.contains_module(k)) {
            let q = hull_quotient(k)?;
            if !q.target().is_zero() && !tests.contains(&q) {
                tests.push(q);
            }
        }
        Ok(Self { side: Side::Project, tests, universe: format!("epis with kernel in {x} between {u}") })
    }

    pub fn check(&self, m: &FpModule, caps: &Caps) -> Result<Verdict> {
        let n = self.tests.len() as u64;
        Ok(match first_failure(m, &self.tests, self.side, caps)? {
            None => Verdict::certified(&self.universe, n),
            Some(f) => {
                let evidence = match self.side {
                    Side::Inject => Evidence::ModuleNoExtension { mono: f.test, map: f.map },
                    Side::Project => Evidence::ModuleNoLift { epi: f.test, map: f.map },
                };
                let mut v = Verdict::fails(&self.universe, n, evidence);
                v.exhaustive = f.exhaustive;
                v
            }
        })
    }
}

fn degreewise_sizes_fit(small: &Complex, big: &Complex) -> bool {
    small.degrees().all(|k| small.component(k).order() <= big.component(k).order())
}

/// Degreewise monos (or epis) of complexes in a universe whose cokernel
/// (or kernel) complex lies in the class.
#[derive(Clone, Debug)]
pub struct ComplexFamily {
    pub(crate) side: Side,
    pub tests: Vec<ChainMap>,
    pub universe: String,
}

impl ComplexFamily {
    pub fn injective(x: &XClass, cu: &ComplexUniverse, caps: &Caps) -> Result<Self> {
        let members: Vec<Complex> = cu.members()?.into_iter().filter(|c| !c.is_zero()).collect();
        let mut tests = Vec::new();
        for a in &members {
            for b in &members {
                if a == b || !degreewise_sizes_fit(a, b) || !support_within(a, b) {
                    continue;
                }
                for f in maps_between(a, b, caps)? {
                    if f.is_degreewise_mono()? && !f.is_degreewise_epi()? && cokernels_in(&f, x)? {
                        tests.push(f);
                    }
                }
            }
        }
        for k in cu.lo..cu.hi {
            for q in cu.modules.members().iter().filter(|q| !q.is_zero() && x.contains_module(q)) {
                let p = presentation(q)?;
                if p.source().is_zero() {
                    continue;
                }
                let w = disk_map(k, &p)?;
                if !tests.contains(&w) {
                    tests.push(w);
                }
            }
        }
        Ok(Self { side: Side::Inject, tests, universe: format!("degreewise monos with cokernel in C({x}) among {cu}") })
    }

    pub fn projective(x: &XClass, cu: &ComplexUniverse, caps: &Caps) -> Result<Self> {
        let members: Vec<Complex> = cu.members()?.into_iter().filter(|c| !c.is_zero()).collect();
        let mut tests = Vec::new();
        for a in &members {
            for b in &members {
                if a == b || !degreewise_sizes_fit(b, a) || !support_within(b, a) {
                    continue;
                }
                for f in maps_between(a, b, caps)? {
                    if f.is_degreewise_epi()? && !f.is_degreewise_mono()? && kernels_in(&f, x)? {
                        tests.push(f);
                    }
                }
            }
        }
        for k in cu.lo..cu.hi {
            for m in cu.modules.members().iter().filter(|m| !m.is_zero() && x.contains_module(m)) {
                let q = hull_quotient(m)?;
                if q.target().is_zero() {
                    continue;
                }
                let w = disk_map(k, &q)?;
                if !tests.contains(&w) {
                    tests.push(w);
                }
            }
        }
        Ok(Self { side: Side::Project, tests, universe: format!("degreewise epis with kernel in C({x}) among {cu}") })
    }

    /// Adds one more test map, e.g. a witness a lemma's proof relies on.
    pub fn with_test(mut self, f: ChainMap) -> Self {
        if !self.tests.contains(&f) {
            self.tests.push(f);
        }
        self
    }

    pub fn check(&self, c: &Complex, caps: &Caps) -> Result<Verdict> {
        let n = self.tests.len() as u64;
        Ok(match first_failure(c, &self.tests, self.side, caps)? {
            None => Verdict::certified(&self.universe, n),
            Some(f) => {
                let evidence = match self.side {
                    Side::Inject => Evidence::NoExtension { mono: f.test, map: f.map },
                    Side::Project => Evidence::NoLift { epi: f.test, map: f.map },
                };
                let mut v = Verdict::fails(&self.universe, n, evidence);
                v.exhaustive = f.exhaustive;
                v
            }
        })
    }
}

fn support_within(a: &Complex, b: &Complex) -> bool {
    match (a.support(), b.support()) {
        (Some((al, ah)), Some((bl, bh))) => bl <= al && ah <= bh,
        _ => true,
    }
}

fn maps_between(a: &Complex, b: &Complex, caps: &Caps) -> Result<Vec<ChainMap>> {
    let space = chain_maps(a, b)?;
    match space.count() {
        Some(c) if c <= caps.hom_size => {}
        _ => return Err(Error::CapExceeded("chain-map group too large to enumerate".into())),
    }
    let maps = space.maps()?.collect();
    maps
}

fn cokernels_in(f: &ChainMap, x: &XClass) -> Result<bool> {
    for k in f.target().degrees() {
        if !x.contains_module(&cokernel(&f.component(k))?.quotient) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn kernels_in(f: &ChainMap, x: &XClass) -> Result<bool> {
    for k in f.source().degrees() {
        if !x.contains_module(kernel(&f.component(k))?.sub()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `D^k(f): D^k(A) -> D^k(B)`.
pub(crate) fn disk_map(k: i32, f: &ModuleMap) -> Result<ChainMap> {
    ChainMap::new(&disk(k, f.source()), &disk(k, f.target()), vec![(k, f.clone()), (k + 1, f.clone())])
}

/// `S^k(f)`.
pub(crate) fn sphere_map(k: i32, f: &ModuleMap) -> Result<ChainMap> {
    ChainMap::new(&sphere(k, f.source()), &sphere(k, f.target()), vec![(k, f.clone())])
}
