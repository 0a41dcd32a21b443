//! From-scratch re-verification of builder output.

use std::collections::HashMap;

use serde::Serialize;

use super::oracle::{FreeCover, InjectiveHull, UniverseSearch};
use super::precover::{precover_with, ConstraintCheck, PrecoverResult};
use super::preenvelope::{preenvelope_with, PreenvelopeResult};
use crate::complexes::{chain_maps, extend_along, factor_through, is_exact, Complex};
use crate::error::Result;
use crate::lifting::{ComplexFamily, ModuleFamily};
use crate::modules::{cokernel, kernel};
use crate::xclass::{Caps, ComplexUniverse, ModuleUniverse, XClass};

/// Precover with the builtin oracle for the class of all modules and a
/// universe search otherwise.
pub fn precover_bounded(y: &Complex, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<PrecoverResult> {
    match x {
        XClass::All => precover_with(y, &FreeCover),
        _ => precover_with(y, &UniverseSearch { class: x.clone(), universe: u.clone(), caps: *caps }),
    }
}

pub fn preenvelope_bounded(y: &Complex, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<PreenvelopeResult> {
    match x {
        XClass::All => preenvelope_with(y, &InjectiveHull),
        _ => preenvelope_with(y, &UniverseSearch { class: x.clone(), universe: u.clone(), caps: *caps }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub universe: String,
    pub exact: bool,
    /// Degreewise epi (precover) or mono (preenvelope).
    pub degreewise: bool,
    /// Kernel (precover) or cokernel (preenvelope) components in the class.
    pub class_membership: bool,
    /// Components X-projective (precover) or X-injective (preenvelope).
    pub components: bool,
    pub competitors: usize,
    pub factorization: bool,
    pub constraints: Vec<ConstraintCheck>,
    pub violations: Vec<String>,
}

impl BuildReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn new(universe: String, constraints: Vec<ConstraintCheck>) -> Self {
        let violations = constraints
            .iter()
            .filter(|c| !c.holds)
            .map(|c| format!("degree {}: {} fails", c.degree, c.constraint))
            .collect();
        Self {
            universe,
            exact: true,
            degreewise: true,
            class_membership: true,
            components: true,
            competitors: 0,
            factorization: true,
            constraints,
            violations,
        }
    }
}

struct Competitors {
    universe: String,
    members: Vec<Complex>,
}

/// Re-verifies builds, caching the families and competitor lists of each
/// complex universe it meets.
pub struct BuildVerifier {
    pub class: XClass,
    pub bound: u64,
    pub caps: Caps,
    modules: ModuleUniverse,
    module_proj: Option<ModuleFamily>,
    module_inj: Option<ModuleFamily>,
    competitors: HashMap<(i32, i32, bool), Competitors>,
}

impl BuildVerifier {
    pub fn new(ring: crate::exactalg::Ring, class: XClass, bound: u64, caps: Caps) -> Result<Self> {
        Ok(Self {
            modules: ModuleUniverse::new(ring, bound, &caps)?,
            class,
            bound,
            caps,
            module_proj: None,
            module_inj: None,
            competitors: HashMap::new(),
        })
    }

    pub fn modules(&self) -> &ModuleUniverse {
        &self.modules
    }

    fn competitors(&mut self, y: &Complex, projective: bool) -> Result<&Competitors> {
        let cu = ComplexUniverse::around(y, self.bound, &self.caps)?;
        let key = (cu.lo, cu.hi, projective);
        if !self.competitors.contains_key(&key) {
            let fam = if projective {
                ComplexFamily::projective(&self.class, &cu, &self.caps)?
            } else {
                ComplexFamily::injective(&self.class, &cu, &self.caps)?
            };
            let mut members = Vec::new();
            for c in cu.members()? {
                if !c.is_zero() && fam.check(&c, &self.caps)?.holds() {
                    members.push(c);
                }
            }
            self.competitors.insert(key, Competitors { universe: cu.to_string(), members });
        }
        Ok(&self.competitors[&key])
    }

    pub fn verify_precover(&mut self, y: &Complex, res: &PrecoverResult) -> Result<BuildReport> {
        let caps = self.caps;
        let mut rep = BuildReport::new(String::new(), res.constraint_checks()?);
        let g = &res.map;
        if g.source() != &res.cover || g.target() != y || g.first_noncommuting()?.is_some() {
            rep.violations.push("map is not a chain map from the cover onto the input".into());
        }
        if let Some(k) = is_exact(&res.cover)?.first_nonexact() {
            rep.exact = false;
            rep.violations.push(format!("cover not exact at degree {k}"));
        }
        for k in y.degrees() {
            if !g.component(k).is_epi()? {
                rep.degreewise = false;
                rep.violations.push(format!("not onto in degree {k}"));
            }
        }
        for k in res.cover.degrees() {
            if !self.class.contains_module(kernel(&g.component(k))?.sub()) {
                rep.class_membership = false;
                rep.violations.push(format!("kernel in degree {k} not in {}", self.class));
            }
        }
        if self.module_proj.is_none() {
            self.module_proj = Some(ModuleFamily::projective(&self.class, &self.modules, &caps)?);
        }
        let fam = self.module_proj.as_ref().expect("just built");
        for k in res.cover.degrees() {
            if !fam.check(res.cover.component(k), &caps)?.holds() {
                rep.components = false;
                rep.violations.push(format!("component in degree {k} not X-projective"));
            }
        }
        let comp = self.competitors(y, true)?;
        rep.universe = comp.universe.clone();
        rep.competitors = comp.members.len();
        for c in &comp.members {
            for h in chain_maps(c, y)?.generators()? {
                if factor_through(g, &h)?.is_none() {
                    rep.factorization = false;
                    rep.violations.push(format!("a map from {} does not factor", describe(c)));
                }
            }
        }
        Ok(rep)
    }

    pub fn verify_preenvelope(&mut self, y: &Complex, res: &PreenvelopeResult) -> Result<BuildReport> {
        let caps = self.caps;
        let mut rep = BuildReport::new(String::new(), res.constraint_checks()?);
        let g = &res.map;
        if g.source() != y || g.target() != &res.envelope || g.first_noncommuting()?.is_some() {
            rep.violations.push("map is not a chain map from the input into the result".into());
        }
        if let Some(k) = is_exact(&res.envelope)?.first_nonexact() {
            rep.exact = false;
            rep.violations.push(format!("result not exact at degree {k}"));
        }
        for k in y.degrees() {
            if !g.component(k).is_mono()? {
                rep.degreewise = false;
                rep.violations.push(format!("not one-to-one in degree {k}"));
            }
        }
        for k in res.envelope.degrees() {
            if !self.class.contains_module(&cokernel(&g.component(k))?.quotient) {
                rep.class_membership = false;
                rep.violations.push(format!("cokernel in degree {k} not in {}", self.class));
            }
        }
        if self.module_inj.is_none() {
            self.module_inj = Some(ModuleFamily::injective(&self.class, &self.modules, &caps)?);
        }
        let fam = self.module_inj.as_ref().expect("just built");
        for k in res.envelope.degrees() {
            if !fam.check(res.envelope.component(k), &caps)?.holds() {
                rep.components = false;
                rep.violations.push(format!("component in degree {k} not X-injective"));
            }
        }
        let comp = self.competitors(y, false)?;
        rep.universe = comp.universe.clone();
        rep.competitors = comp.members.len();
        for c in &comp.members {
            for h in chain_maps(y, c)?.generators()? {
                if extend_along(g, &h)?.is_none() {
                    rep.factorization = false;
                    rep.violations.push(format!("a map into {} does not extend", describe(c)));
                }
            }
        }
        Ok(rep)
    }
}

pub(crate) fn describe(c: &Complex) -> String {
    let (lo, _) = c.bounds();
    let parts: Vec<String> = c.components().iter().map(|m| m.to_string()).collect();
    format!("[{}] from degree {lo}", parts.join(" -> "))
}
