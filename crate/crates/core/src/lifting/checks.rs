use std::collections::HashSet;

use serde::Serialize;

use super::families::{sphere_map, ComplexFamily, ModuleFamily};
use super::verdict::{Evidence, Status, Verdict};
use crate::complexes::{
    chain_maps, cone_sequence, extend_along, hom_complex, is_exact, null_homotopy, shift, sphere, ChainMap,
    Complex, Homotopy,
};
use crate::error::{Error, Result};
use crate::modules::{cokernel, ext1_module, hom_module, image, kernel, FpModule, ModuleMap};
use crate::xclass::{Caps, ComplexUniverse, Eps1Universe, ModuleUniverse, XClass};

/// Lifting criterion, cross-checked against `Ext^1(Q, e) = 0` for every
/// nonzero class member `Q` of the universe.
pub fn x_injective_module(e: &FpModule, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Verdict> {
    let fam = ModuleFamily::injective(x, u, caps)?;
    x_injective_module_with(e, x, u, &fam, caps)
}

pub fn x_injective_module_with(
    e: &FpModule,
    x: &XClass,
    u: &ModuleUniverse,
    fam: &ModuleFamily,
    caps: &Caps,
) -> Result<Verdict> {
    let mut v = fam.check(e, caps)?;
    let by_ext = injective_by_ext(e, x, u)?;
    v.cross_check = Some(by_ext.is_none() == v.holds());
    if let Some(q) = by_ext {
        v.notes.push(format!("Ext^1({q}, {e}) is nonzero"));
    }
    Ok(v)
}

/// The first class member `Q` of the universe with `Ext^1(Q, e) != 0`.
pub fn injective_by_ext(e: &FpModule, x: &XClass, u: &ModuleUniverse) -> Result<Option<FpModule>> {
    for q in u.members() {
        if !q.is_zero() && x.contains_module(&q) && !ext1_module(&q, e)?.is_zero() {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

pub fn x_projective_module(p: &FpModule, x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Verdict> {
    ModuleFamily::projective(x, u, caps)?.check(p, caps)
}

pub fn x_injective_complex(c: &Complex, x: &XClass, cu: &ComplexUniverse, caps: &Caps) -> Result<Verdict> {
    ComplexFamily::injective(x, cu, caps)?.check(c, caps)
}

pub fn x_projective_complex(c: &Complex, x: &XClass, cu: &ComplexUniverse, caps: &Caps) -> Result<Verdict> {
    ComplexFamily::projective(x, cu, caps)?.check(c, caps)
}

fn components_pass(c: &Complex, fam: &ModuleFamily, caps: &Caps) -> Result<Option<Verdict>> {
    for k in c.degrees() {
        let v = fam.check(c.component(k), caps)?;
        if !v.holds() {
            let mut out = Verdict::fails(&v.universe, v.instances, Evidence::Component { degree: k, verdict: Box::new(v.clone()) });
            out.exhaustive = v.exhaustive;
            return Ok(Some(out));
        }
    }
    Ok(None)
}

/// Components pass the module check and `Hom(E, i)` is exact for every `E`
/// in the universe.
pub fn dg_x_injective(i: &Complex, x: &XClass, eu: &Eps1Universe, caps: &Caps) -> Result<Verdict> {
    let fam = ModuleFamily::injective(x, &eu.modules, caps)?;
    if let Some(v) = components_pass(i, &fam, caps)? {
        return Ok(v);
    }
    hom_exact_against(i, eu, caps, true)
}

/// Components pass the module check and `Hom(i, E)` is exact for every `E`
/// in the universe.
pub fn dg_x_projective(i: &Complex, x: &XClass, eu: &Eps1Universe, caps: &Caps) -> Result<Verdict> {
    let fam = ModuleFamily::projective(x, &eu.modules, caps)?;
    if let Some(v) = components_pass(i, &fam, caps)? {
        return Ok(v);
    }
    hom_exact_against(i, eu, caps, false)
}

fn hom_exact_against(i: &Complex, eu: &Eps1Universe, caps: &Caps, into: bool) -> Result<Verdict> {
    let universe = eu.to_string();
    let members = eu.members(caps)?;
    let mut n = 0;
    for e in members.iter().filter(|e| !e.is_zero()) {
        n += 1;
        let h = if into { hom_complex(e, i)? } else { hom_complex(i, e)? };
        let rep = is_exact(&h.complex)?;
        if let Some(k) = rep.first_nonexact() {
            let homology = rep.homology.iter().find(|(d, _)| *d == k).expect("listed degree").1.clone();
            let mut v = Verdict::fails(&universe, n, Evidence::Homology { probe: e.clone(), degree: k, homology });
            v.exhaustive = match brute_homology_order(&h.complex, k, caps)? {
                Some(o) if o > 1 => true,
                Some(_) => return Err(Error::Inconsistent("enumeration finds no homology".into())),
                None => false,
            };
            return Ok(v);
        }
    }
    Ok(Verdict::certified(universe, n))
}

/// `|ker d^k| / |im d^{k-1}|` by listing elements, when small enough.
pub fn brute_homology_order(c: &Complex, k: i32, caps: &Caps) -> Result<Option<u64>> {
    let (m, prev) = (c.component(k), c.component(k - 1));
    let small = |x: &FpModule| x.order().is_some_and(|o| o <= caps.hom_size);
    if !small(m) || !small(prev) {
        return Ok(None);
    }
    let d = c.diff(k);
    let mut ker = 0u64;
    for e in m.elements()? {
        if d.apply(&e)?.iter().all(|&v| v == 0) {
            ker += 1;
        }
    }
    let incoming = c.diff(k - 1);
    let mut img = HashSet::new();
    for e in prev.elements()? {
        img.insert(incoming.apply(&e)?);
    }
    Ok(Some(ker / img.len() as u64))
}

/// Every chain map `shift(E, -1) -> i` with `E` in the universe is
/// null-homotopic.
pub fn eps1_perp_homotopy(i: &Complex, eu: &Eps1Universe, caps: &Caps) -> Result<Verdict> {
    let universe = eu.to_string();
    let mut n = 0;
    for e in eu.members(caps)?.iter().filter(|e| !e.is_zero()) {
        n += 1;
        let s = shift(e, -1);
        let space = chain_maps(&s, i)?;
        let mut ok = true;
        for g in space.generators()? {
            if null_homotopy(&g)?.is_none() {
                ok = false;
                break;
            }
        }
        if ok {
            continue;
        }
        for g in space.maps()? {
            let g = g?;
            if null_homotopy(&g)?.is_some() {
                continue;
            }
            let mut v = Verdict::fails(&universe, n, Evidence::NotNullHomotopic { probe: e.clone(), map: g.clone() });
            v.exhaustive = confirm_not_null(&g, caps)?;
            return Ok(v);
        }
        return Err(Error::Inconsistent("a generator failed but every element is null-homotopic".into()));
    }
    Ok(Verdict::certified(universe, n))
}

/// Tries every family `s^k: X^k -> Y^{k-1}`. `None` when there are too
/// many to enumerate.
pub fn exhaustive_null_homotopy(f: &ChainMap, caps: &Caps) -> Result<Option<Option<Homotopy>>> {
    let (x, y) = (f.source(), f.target());
    let mut spaces = Vec::new();
    let mut total: u64 = 1;
    for k in x.degrees() {
        let t = y.component(k - 1);
        if x.component(k).is_zero() || t.is_zero() {
            continue;
        }
        let h = hom_module(x.component(k), t)?;
        let Some(c) = h.count() else { return Ok(None) };
        total = match total.checked_mul(c) {
            Some(t) if t <= caps.hom_size => t,
            _ => return Ok(None),
        };
        spaces.push((k, h));
    }
    for idx in 0..total {
        let mut rest = idx;
        let mut comps = Vec::with_capacity(spaces.len());
        for (k, h) in &spaces {
            let c = h.count().expect("finite");
            comps.push((*k, h.decode(&h.module.element_at(rest % c))?));
            rest /= c;
        }
        let s = Homotopy::new(f, comps)?;
        if s.verify()? {
            return Ok(Some(Some(s)));
        }
    }
    Ok(Some(None))
}

fn confirm_not_null(f: &ChainMap, caps: &Caps) -> Result<bool> {
    match exhaustive_null_homotopy(f, caps)? {
        Some(Some(_)) => Err(Error::Inconsistent("exhaustive search found a null-homotopy".into())),
        Some(None) => Ok(true),
        None => Ok(false),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomSide {
    /// `Hom(I, A) -> Hom(I, B) -> Hom(I, C)`.
    Left,
    /// `Hom(C, I) -> Hom(B, I) -> Hom(A, I)`.
    Right,
}

/// Exactness at the middle of the Hom sequence induced by `A -> B -> C`,
/// with the modules placed as spheres in every degree of the probe's
/// support. The row must be exact at `B` with `ker theta` (left) or
/// `C / im theta` (right) in the class. When a universe is given, the
/// probe must also pass the matching complex-level check first.
pub fn hom_exactness(
    beta: &ModuleMap,
    theta: &ModuleMap,
    probe: &Complex,
    side: HomSide,
    x: &XClass,
    cu: Option<&ComplexUniverse>,
    caps: &Caps,
) -> Result<Verdict> {
    let universe = match cu {
        Some(cu) => cu.to_string(),
        None => "the probe as given".to_string(),
    };
    if beta.target() != theta.source() {
        return Err(Error::Dimension("beta and theta are not composable".into()));
    }
    if !theta.compose(beta)?.is_zero() {
        return Ok(Verdict::unestablished(universe, "theta ∘ beta is not zero"));
    }
    let k = kernel(theta)?;
    if image(beta)?.sub().order() != k.sub().order() {
        return Ok(Verdict::unestablished(universe, "the row is not exact at the middle term"));
    }
    match side {
        HomSide::Left if !x.contains_module(k.sub()) => {
            return Ok(Verdict::unestablished(universe, format!("ker theta = {} is not in {x}", k.sub())));
        }
        HomSide::Right => {
            let q = cokernel(theta)?.quotient;
            if !x.contains_module(&q) {
                return Ok(Verdict::unestablished(universe, format!("C / im theta = {q} is not in {x}")));
            }
        }
        _ => {}
    }
    if let Some(cu) = cu {
        let v = match side {
            HomSide::Left => x_projective_complex(probe, x, cu, caps)?,
            HomSide::Right => x_injective_complex(probe, x, cu, caps)?,
        };
        if !v.holds() {
            return Ok(Verdict::unestablished(universe, "the probe did not pass the complex-level check"));
        }
    }
    let mut n = 0;
    for d in probe.degrees() {
        n += 1;
        if let Some(map) = middle_defect(beta, theta, probe, side, d, caps)? {
            let mut v = Verdict::fails(&universe, n, Evidence::NotInImage { degree: d, map });
            v.exhaustive = true;
            return Ok(v);
        }
    }
    Ok(Verdict::certified(universe, n))
}

/// The first map into (or out of) the middle sphere that is killed by the
/// outgoing map but has no preimage, by listing both groups.
fn middle_defect(
    beta: &ModuleMap,
    theta: &ModuleMap,
    probe: &Complex,
    side: HomSide,
    d: i32,
    caps: &Caps,
) -> Result<Option<ChainMap>> {
    let (sa, sb, sc) = (sphere(d, beta.source()), sphere(d, beta.target()), sphere(d, theta.target()));
    let (b_, t_) = (sphere_map(d, beta)?, sphere_map(d, theta)?);
    let (first, mid) = match side {
        HomSide::Left => (chain_maps(probe, &sa)?, chain_maps(probe, &sb)?),
        HomSide::Right => (chain_maps(&sc, probe)?, chain_maps(&sb, probe)?),
    };
    for s in [&first, &mid] {
        if s.count().is_none_or(|c| c > caps.hom_size) {
            return Err(Error::CapExceeded("Hom group too large to list".into()));
        }
    }
    let mut hit = HashSet::new();
    for f in first.maps()? {
        let f = f?;
        let g = match side {
            HomSide::Left => b_.compose(&f)?,
            HomSide::Right => f.compose(&t_)?,
        };
        hit.insert(g);
    }
    for g in mid.maps()? {
        let g = g?;
        let killed = match side {
            HomSide::Left => t_.compose(&g)?.is_zero(),
            HomSide::Right => g.compose(&b_)?.is_zero(),
        };
        if killed && !hit.contains(&g) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Source X-projective, target in `C(X)`.
    FromProjective,
    /// Source in `C(X)`, target X-injective.
    ToInjective,
}

/// Verifies the hypotheses, then returns the null-homotopy of `f`.
///
/// The complex-level check uses the universe plus the cone sequence of the
/// relevant identity, the one test map the argument needs.
pub fn null_map_property(
    f: &ChainMap,
    direction: Direction,
    x: &XClass,
    cu: &ComplexUniverse,
    caps: &Caps,
) -> Result<Verdict> {
    let universe = cu.to_string();
    let (src, tgt) = (f.source(), f.target());
    let pre = match direction {
        Direction::FromProjective => {
            if !x.contains_complex(tgt) {
                return Ok(Verdict::unestablished(universe, format!("target is not a complex over {x}")));
            }
            let seq = cone_sequence(&ChainMap::identity(&shift(tgt, -1)))?;
            ComplexFamily::projective(x, cu, caps)?.with_test(seq.surj).check(src, caps)?
        }
        Direction::ToInjective => {
            if !x.contains_complex(src) {
                return Ok(Verdict::unestablished(universe, format!("source is not a complex over {x}")));
            }
            let seq = cone_sequence(&ChainMap::identity(src))?;
            ComplexFamily::injective(x, cu, caps)?.with_test(seq.inj).check(tgt, caps)?
        }
    };
    if !pre.holds() {
        let what = match direction {
            Direction::FromProjective => "source is not X-projective",
            Direction::ToInjective => "target is not X-injective",
        };
        let mut v = Verdict::unestablished(universe, format!("{what} under the universe"));
        v.notes.push(format!("{:?}", pre.evidence));
        return Ok(v);
    }
    match null_homotopy(f)? {
        Some(h) => {
            if !h.verify()? {
                return Err(Error::Inconsistent("returned homotopy does not verify".into()));
            }
            Ok(Verdict::new(Status::Holds, universe, pre.instances, Evidence::Homotopy(h)))
        }
        None => {
            let mut v = Verdict::fails(universe, pre.instances, Evidence::NotNullHomotopic {
                probe: src.clone(),
                map: f.clone(),
            });
            v.exhaustive = confirm_not_null(f, caps)?;
            Ok(v)
        }
    }
}

/// A retraction of `incl: xc -> y` once `xc` is known X-injective and the
/// cokernel complex lies in the class.
pub fn summand_retraction(
    xc: &Complex,
    y: &Complex,
    incl: &ChainMap,
    x: &XClass,
    cu: &ComplexUniverse,
    caps: &Caps,
) -> Result<Option<ChainMap>> {
    if incl.source() != xc || incl.target() != y {
        return Err(Error::Dimension("inclusion does not go from xc to y".into()));
    }
    if !incl.is_degreewise_mono()? {
        return Err(Error::Hypothesis("the inclusion is not degreewise injective".into()));
    }
    for k in y.degrees() {
        let q = cokernel(&incl.component(k))?.quotient;
        if !x.contains_module(&q) {
            return Err(Error::Hypothesis(format!("cokernel {q} at degree {k} is not in {x}")));
        }
    }
    let v = ComplexFamily::injective(x, cu, caps)?.with_test(incl.clone()).check(xc, caps)?;
    if !v.holds() {
        return Err(Error::Hypothesis("xc is not X-injective under the universe".into()));
    }
    let r = extend_along(incl, &ChainMap::identity(xc))?;
    if let Some(r) = &r {
        if r.compose(incl)? != ChainMap::identity(xc) {
            return Err(Error::Inconsistent("retraction fails r ∘ incl = id".into()));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::disk;
    use crate::exactalg::{IntMatrix, Ring};

    const Z4: Ring = Ring::IntegersMod(4);

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    fn caps() -> Caps {
        Caps::default()
    }

    fn mu(b: u64) -> ModuleUniverse {
        ModuleUniverse::new(Z4, b, &caps()).unwrap()
    }

    #[test]
    fn module_injectivity_examples() {
        let v = x_injective_module(&m(&[4]), &XClass::All, &mu(8), &caps()).unwrap();
        assert!(v.holds());
        assert_eq!(v.cross_check, Some(true));

        let v = x_injective_module(&m(&[2]), &XClass::All, &mu(8), &caps()).unwrap();
        assert!(!v.holds());
        assert_eq!(v.cross_check, Some(true));
        assert!(v.exhaustive);
        let Evidence::ModuleNoExtension { mono, map } = &v.evidence else { panic!("{:?}", v.evidence) };
        assert_eq!((mono.source(), mono.target()), (&m(&[2]), &m(&[4])));
        assert_eq!(mono.matrix(), &IntMatrix::new(1, 1, vec![2]));
        assert_eq!(map, &ModuleMap::identity(&m(&[2])));

        for e in [m(&[2]), m(&[2, 4]), FpModule::zero(Z4)] {
            assert!(x_injective_module(&e, &XClass::ZeroOnly, &mu(8), &caps()).unwrap().holds());
        }
    }

    #[test]
    fn module_projectivity_examples() {
        assert!(x_projective_module(&m(&[4, 4]), &XClass::All, &mu(8), &caps()).unwrap().holds());
        let v = x_projective_module(&m(&[2]), &XClass::All, &mu(8), &caps()).unwrap();
        let Evidence::ModuleNoLift { epi, map } = &v.evidence else { panic!() };
        assert_eq!((epi.source(), epi.target()), (&m(&[4]), &m(&[2])));
        assert_eq!(map, &ModuleMap::identity(&m(&[2])));
        assert!(x_projective_module(&m(&[2]), &XClass::ZeroOnly, &mu(8), &caps()).unwrap().holds());
    }

    fn cu(c: &Complex) -> ComplexUniverse {
        ComplexUniverse::around(c, 4, &caps()).unwrap()
    }

    #[test]
    fn complex_examples() {
        let t = std::time::Instant::now();
        let d = disk(0, &m(&[4]));
        assert!(x_injective_complex(&d, &XClass::All, &cu(&d), &caps()).unwrap().holds());
        assert!(x_projective_complex(&d, &XClass::All, &cu(&d), &caps()).unwrap().holds());
        let s = sphere(0, &m(&[2]));
        assert!(!x_injective_complex(&s, &XClass::All, &cu(&s), &caps()).unwrap().holds());
        assert!(!x_projective_complex(&s, &XClass::All, &cu(&s), &caps()).unwrap().holds());
        assert!(x_injective_complex(&s, &XClass::ZeroOnly, &cu(&s), &caps()).unwrap().holds());
        let z = Complex::zero(Z4);
        assert!(x_projective_complex(&z, &XClass::All, &cu(&z), &caps()).unwrap().holds());
        eprintln!("complex examples: {:?}", t.elapsed());
    }

    fn eu(c: &Complex) -> Eps1Universe {
        Eps1Universe::around(c, XClass::All, 8, &caps()).unwrap()
    }

    #[test]
    fn dg_and_perp_examples() {
        let s4 = sphere(0, &m(&[4]));
        assert!(dg_x_injective(&s4, &XClass::All, &eu(&s4), &caps()).unwrap().holds());
        assert!(dg_x_projective(&s4, &XClass::All, &eu(&s4), &caps()).unwrap().holds());
        assert!(eps1_perp_homotopy(&s4, &eu(&s4), &caps()).unwrap().holds());
        let z = Complex::zero(Z4);
        assert!(eps1_perp_homotopy(&z, &eu(&z), &caps()).unwrap().holds());
        assert!(dg_x_injective(&z, &XClass::All, &eu(&z), &caps()).unwrap().holds());

        let s2 = sphere(0, &m(&[2]));
        let v = dg_x_injective(&s2, &XClass::All, &eu(&s2), &caps()).unwrap();
        assert!(matches!(v.evidence, Evidence::Component { degree: 0, .. }));
        let v = eps1_perp_homotopy(&s2, &eu(&s2), &caps()).unwrap();
        assert!(!v.holds());
        assert!(v.exhaustive);
    }

    #[test]
    fn hom_exactness_examples() {
        let (z2, z4) = (m(&[2]), m(&[4]));
        let two = ModuleMap::new(z2.clone(), z4.clone(), IntMatrix::new(1, 1, vec![2])).unwrap();
        let proj = ModuleMap::new(z4.clone(), z2.clone(), IntMatrix::new(1, 1, vec![1])).unwrap();
        let probe = disk(0, &m(&[4, 4]));
        let v = hom_exactness(&two, &proj, &probe, HomSide::Left, &XClass::All, None, &caps()).unwrap();
        assert!(v.holds());
        let zero = FpModule::zero(Z4);
        let into = ModuleMap::zero(&zero, &z4);
        let id = ModuleMap::identity(&z4);
        assert!(hom_exactness(&into, &id, &sphere(0, &z2), HomSide::Left, &XClass::ZeroOnly, None, &caps())
            .unwrap()
            .holds());
        let v = hom_exactness(&two, &id, &probe, HomSide::Left, &XClass::All, None, &caps()).unwrap();
        assert_eq!(v.status, Status::HypothesisNotEstablished);
        let v = hom_exactness(&two, &proj, &probe, HomSide::Left, &XClass::ZeroOnly, None, &caps()).unwrap();
        assert_eq!(v.status, Status::HypothesisNotEstablished);
        // Z/4 -2-> Z/4 -2-> Z/4 is exact, but Hom(Z/2, -) of it is not.
        let dbl = ModuleMap::new(z4.clone(), z4.clone(), IntMatrix::new(1, 1, vec![2])).unwrap();
        let v = hom_exactness(&dbl, &dbl, &sphere(0, &z2), HomSide::Left, &XClass::All, None, &caps()).unwrap();
        assert!(!v.holds());
        assert!(matches!(v.evidence, Evidence::NotInImage { degree: 0, .. }));
        let v = hom_exactness(&dbl, &dbl, &probe, HomSide::Left, &XClass::All, None, &caps()).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn null_map_examples() {
        let f4 = m(&[4]);
        let d = disk(0, &f4);
        let s = sphere(0, &f4);
        let c = ComplexUniverse::around(&d, 4, &caps()).unwrap();
        let f = ChainMap::new(&d, &s, vec![(0, ModuleMap::identity(&f4))]).unwrap();
        let v = null_map_property(&f, Direction::FromProjective, &XClass::Free, &c, &caps()).unwrap();
        assert!(v.holds(), "{v:?}");
        let Evidence::Homotopy(h) = &v.evidence else { panic!() };
        assert!(h.verify().unwrap());

        let z = ChainMap::zero(&d, &s);
        let v = null_map_property(&z, Direction::FromProjective, &XClass::Free, &c, &caps()).unwrap();
        let Evidence::Homotopy(h) = &v.evidence else { panic!() };
        assert!(h.components().all(|(_, s)| s.is_zero()));

        let g = ChainMap::new(&s, &d, vec![]).unwrap();
        let v = null_map_property(&g, Direction::ToInjective, &XClass::Free, &c, &caps()).unwrap();
        assert!(v.holds());

        let s2 = sphere(0, &m(&[2]));
        let id = ChainMap::identity(&s2);
        let v = null_map_property(&id, Direction::ToInjective, &XClass::All, &c, &caps()).unwrap();
        assert_eq!(v.status, Status::HypothesisNotEstablished);
    }

    #[test]
    fn retraction_examples() {
        let f4 = m(&[4]);
        let d = disk(0, &f4);
        let c = ComplexUniverse::around(&d, 4, &caps()).unwrap();
        let r = summand_retraction(&d, &d, &ChainMap::identity(&d), &XClass::All, &c, &caps()).unwrap();
        assert_eq!(r, Some(ChainMap::identity(&d)));
        let z = Complex::zero(Z4);
        let r = summand_retraction(&z, &d, &ChainMap::zero(&z, &d), &XClass::All, &c, &caps()).unwrap();
        assert!(r.unwrap().is_zero());
    }
}
