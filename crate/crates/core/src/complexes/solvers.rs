use std::collections::BTreeMap;

use super::chain::{common_degrees, span_degrees};
use super::{ChainMap, Complex, Homotopy, ShortExactOfComplexes};
use crate::error::Result;
use crate::modules::{MapSystem, ModuleMap, Term, UnknownId};

/// Adds unknowns `g^k: X^k -> Y^k` constrained to form a chain map.
pub(crate) fn chain_unknowns(sys: &mut MapSystem, x: &Complex, y: &Complex) -> Result<BTreeMap<i32, UnknownId>> {
    let mut ids = BTreeMap::new();
    for k in common_degrees(x, y) {
        ids.insert(k, sys.unknown(x.component(k), y.component(k)));
    }
    for k in span_degrees(x, y) {
        let (src, tgt) = (x.component(k), y.component(k + 1));
        if src.is_zero() || tgt.is_zero() {
            continue;
        }
        let dy = y.diff(k);
        let dx = x.diff(k);
        let mut terms = Vec::new();
        if let Some(&g) = ids.get(&k) {
            terms.push(Term::new(g).left(&dy));
        }
        if let Some(&g) = ids.get(&(k + 1)) {
            terms.push(Term::new(g).right(&dx).times(-1));
        }
        if !terms.is_empty() {
            sys.equation(&terms, &ModuleMap::zero(src, tgt))?;
        }
    }
    Ok(ids)
}

fn assemble(x: &Complex, y: &Complex, ids: &BTreeMap<i32, UnknownId>, sol: &[ModuleMap]) -> Result<ChainMap> {
    let comps = ids.iter().map(|(&k, &u)| (k, sol[u].clone())).collect();
    ChainMap::from_parts(x, y, comps)
}

/// The canonical `s` with `s d + d s = f`, if one exists.
pub fn null_homotopy(f: &ChainMap) -> Result<Option<Homotopy>> {
    let (x, y) = (f.source(), f.target());
    let mut sys = MapSystem::new(x.ring());
    let mut ids = BTreeMap::new();
    for k in x.degrees() {
        let t = y.component(k - 1);
        if !t.is_zero() {
            ids.insert(k, sys.unknown(x.component(k), t));
        }
    }
    for k in common_degrees(x, y) {
        let dx = x.diff(k);
        let dy = y.diff(k - 1);
        let mut terms = Vec::new();
        if let Some(&s) = ids.get(&(k + 1)) {
            terms.push(Term::new(s).right(&dx));
        }
        if let Some(&s) = ids.get(&k) {
            terms.push(Term::new(s).left(&dy));
        }
        sys.equation(&terms, &f.component(k))?;
    }
    let Some(sol) = sys.solve()? else { return Ok(None) };
    let comps = ids.iter().map(|(&k, &u)| (k, sol.particular[u].clone())).collect();
    Ok(Some(Homotopy::new(f, comps)?))
}

/// A chain-map retraction `r` of `seq.inj`, if one exists.
pub fn splits(seq: &ShortExactOfComplexes) -> Result<Option<ChainMap>> {
    let (m, l) = (&seq.middle, &seq.left);
    let mut sys = MapSystem::new(m.ring());
    let ids = chain_unknowns(&mut sys, m, l)?;
    for k in l.degrees() {
        let inj = seq.inj.component(k);
        let id = ModuleMap::identity(l.component(k));
        match ids.get(&k) {
            Some(&r) => sys.equation(&[Term::new(r).right(&inj)], &id)?,
            None => sys.equation(&[], &id)?,
        }
    }
    let Some(sol) = sys.solve()? else { return Ok(None) };
    Ok(Some(assemble(m, l, &ids, &sol.particular)?))
}

/// A chain map `g: B -> C` with `g ∘ phi = f`, if one exists.
pub fn extend_along(phi: &ChainMap, f: &ChainMap) -> Result<Option<ChainMap>> {
    let (a, b, c) = (phi.source(), phi.target(), f.target());
    let mut sys = MapSystem::new(a.ring());
    let ids = chain_unknowns(&mut sys, b, c)?;
    for k in common_degrees(a, c) {
        let p = phi.component(k);
        match ids.get(&k) {
            Some(&g) => sys.equation(&[Term::new(g).right(&p)], &f.component(k))?,
            None => sys.equation(&[], &f.component(k))?,
        }
    }
    let Some(sol) = sys.solve()? else { return Ok(None) };
    Ok(Some(assemble(b, c, &ids, &sol.particular)?))
}

/// A chain map `g: P -> A` with `q ∘ g = h`, if one exists.
pub fn factor_through(q: &ChainMap, h: &ChainMap) -> Result<Option<ChainMap>> {
    let (a, b, p) = (q.source(), q.target(), h.source());
    let mut sys = MapSystem::new(a.ring());
    let ids = chain_unknowns(&mut sys, p, a)?;
    for k in common_degrees(p, b) {
        let qk = q.component(k);
        match ids.get(&k) {
            Some(&g) => sys.equation(&[Term::new(g).left(&qk)], &h.component(k))?,
            None => sys.equation(&[], &h.component(k))?,
        }
    }
    let Some(sol) = sys.solve()? else { return Ok(None) };
    Ok(Some(assemble(p, a, &ids, &sol.particular)?))
}
