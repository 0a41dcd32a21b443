//! Per-module approximations fed to the complex builders.

use crate::error::{Error, Result};
use crate::lifting::{x_injective_module, x_projective_module, ModuleFamily};
use crate::modules::{cokernel, free_cover, hom_module, injective_hull, kernel, FpModule, MapSystem, ModuleMap, Term};
use crate::xclass::{enumerate_epis, enumerate_monos, Caps, ModuleUniverse, XClass};

/// Supplies an onto X-projective precover with kernel in the class.
pub trait PrecoverOracle {
    fn name(&self) -> String;
    fn precover(&self, m: &FpModule) -> Result<ModuleMap>;
}

/// Supplies a one-to-one X-injective preenvelope with cokernel in the class.
pub trait PreenvelopeOracle {
    fn name(&self) -> String;
    fn preenvelope(&self, m: &FpModule) -> Result<ModuleMap>;
}

/// The free module on the generators. Valid for the class of all modules.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeCover;

impl PrecoverOracle for FreeCover {
    fn name(&self) -> String {
        "free cover".into()
    }
    fn precover(&self, m: &FpModule) -> Result<ModuleMap> {
        Ok(free_cover(m))
    }
}

/// The injective hull over `Z/n`. Valid for the class of all modules.
#[derive(Clone, Copy, Debug, Default)]
pub struct InjectiveHull;

impl PreenvelopeOracle for InjectiveHull {
    fn name(&self) -> String {
        "injective hull".into()
    }
    fn preenvelope(&self, m: &FpModule) -> Result<ModuleMap> {
        Ok(injective_hull(m)?.1)
    }
}

/// First universe module, in enumeration order, carrying an epi (mono)
/// with the required properties.
#[derive(Clone, Debug)]
pub struct UniverseSearch {
    pub class: XClass,
    pub universe: ModuleUniverse,
    pub caps: Caps,
}

fn factors_through(q: &ModuleMap, h: &ModuleMap) -> Result<bool> {
    let mut sys = MapSystem::new(q.ring());
    let g = sys.unknown(h.source(), q.source());
    sys.equation(&[Term::new(g).left(q)], h)?;
    Ok(sys.solve()?.is_some())
}

fn extends_along(e: &ModuleMap, h: &ModuleMap) -> Result<bool> {
    let mut sys = MapSystem::new(e.ring());
    let g = sys.unknown(e.target(), h.target());
    sys.equation(&[Term::new(g).right(e)], h)?;
    Ok(sys.solve()?.is_some())
}

impl UniverseSearch {
    fn projectives(&self) -> Result<Vec<FpModule>> {
        let fam = ModuleFamily::projective(&self.class, &self.universe, &self.caps)?;
        let mut out = Vec::new();
        for p in self.universe.members() {
            if fam.check(&p, &self.caps)?.holds() {
                out.push(p);
            }
        }
        Ok(out)
    }

    fn injectives(&self) -> Result<Vec<FpModule>> {
        let fam = ModuleFamily::injective(&self.class, &self.universe, &self.caps)?;
        let mut out = Vec::new();
        for e in self.universe.members() {
            if fam.check(&e, &self.caps)?.holds() {
                out.push(e);
            }
        }
        Ok(out)
    }
}

impl PrecoverOracle for UniverseSearch {
    fn name(&self) -> String {
        format!("search over {}", self.universe)
    }
    fn precover(&self, m: &FpModule) -> Result<ModuleMap> {
        if m.is_zero() {
            return Ok(ModuleMap::identity(m));
        }
        let ps = self.projectives()?;
        for p in &ps {
            for q in enumerate_epis(p, m, &self.caps)? {
                if !self.class.contains_module(kernel(&q)?.sub()) {
                    continue;
                }
                let mut ok = true;
                'rivals: for r in &ps {
                    for h in hom_module(r, m)?.generators()? {
                        if !factors_through(&q, &h)? {
                            ok = false;
                            break 'rivals;
                        }
                    }
                }
                if ok {
                    return Ok(q);
                }
            }
        }
        Err(Error::Hypothesis(format!("no precover of {m} within {}", self.universe)))
    }
}

impl PreenvelopeOracle for UniverseSearch {
    fn name(&self) -> String {
        format!("search over {}", self.universe)
    }
    fn preenvelope(&self, m: &FpModule) -> Result<ModuleMap> {
        if m.is_zero() {
            return Ok(ModuleMap::identity(m));
        }
        let es = self.injectives()?;
        for e in &es {
            for i in enumerate_monos(m, e, &self.caps)? {
                if !self.class.contains_module(&cokernel(&i)?.quotient) {
                    continue;
                }
                let mut ok = true;
                'rivals: for r in &es {
                    for h in hom_module(m, r)?.generators()? {
                        if !extends_along(&i, &h)? {
                            ok = false;
                            break 'rivals;
                        }
                    }
                }
                if ok {
                    return Ok(i);
                }
            }
        }
        Err(Error::Hypothesis(format!("no preenvelope of {m} within {}", self.universe)))
    }
}

/// Free cover for the class of all modules, universe search otherwise.
pub fn module_epi_precover(m: &FpModule, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<(FpModule, ModuleMap)> {
    let q = match x {
        XClass::All => FreeCover.precover(m)?,
        _ => UniverseSearch { class: x.clone(), universe: u.clone(), caps: *caps }.precover(m)?,
    };
    Ok((q.source().clone(), q))
}

/// Injective hull for the class of all modules, universe search otherwise.
pub fn module_mono_preenvelope(
    m: &FpModule,
    x: &XClass,
    u: &ModuleUniverse,
    caps: &Caps,
) -> Result<(FpModule, ModuleMap)> {
    let e = match x {
        XClass::All => InjectiveHull.preenvelope(m)?,
        _ => UniverseSearch { class: x.clone(), universe: u.clone(), caps: *caps }.preenvelope(m)?,
    };
    Ok((e.target().clone(), e))
}

/// Properties a module precover `q: P -> M` must have; empty when all hold.
pub fn module_precover_defects(q: &ModuleMap, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Vec<String>> {
    let mut out = Vec::new();
    if !q.is_epi()? {
        out.push("not onto".into());
    }
    if !x.contains_module(kernel(q)?.sub()) {
        out.push("kernel not in the class".into());
    }
    if !x_projective_module(q.source(), x, u, caps)?.holds() {
        out.push("source not X-projective".into());
    }
    for r in u.members() {
        if !x_projective_module(&r, x, u, caps)?.holds() {
            continue;
        }
        for h in hom_module(&r, q.target())?.generators()? {
            if !factors_through(q, &h)? {
                out.push(format!("a map from {r} does not factor"));
            }
        }
    }
    Ok(out)
}

/// Dual of [`module_precover_defects`] for `e: M -> E`.
pub fn module_preenvelope_defects(e: &ModuleMap, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Vec<String>> {
    let mut out = Vec::new();
    if !e.is_mono()? {
        out.push("not one-to-one".into());
    }
    if !x.contains_module(&cokernel(e)?.quotient) {
        out.push("cokernel not in the class".into());
    }
    if !x_injective_module(e.target(), x, u, caps)?.holds() {
        out.push("target not X-injective".into());
    }
    for r in u.members() {
        if !x_injective_module(&r, x, u, caps)?.holds() {
            continue;
        }
        for h in hom_module(e.source(), &r)?.generators()? {
            if !extends_along(e, &h)? {
                out.push(format!("a map into {r} does not extend"));
            }
        }
    }
    Ok(out)
}
