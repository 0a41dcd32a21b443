//! Envelope search inside `E = sum_k D^{k-1}(H^k)`, where `H^k` is the
//! injective hull of `B^k`. `B` sits in `E` via `b -> (e^{k+1} d b, e^k b)`.

use serde::Serialize;

use crate::complexes::{extend_along, chain_maps, validate, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::lifting::{x_injective_complex, ComplexFamily, Verdict};
use crate::modules::{direct_sum, injective_hull, quotient, FpModule, ModuleMap, SubquotientWitness};
use crate::exactalg::IntMatrix;
use crate::xclass::{enumerate_submodules, Caps, ComplexUniverse, ModuleUniverse, XClass};

/// Ambient complex and the embedding of `B`.
#[derive(Clone, Debug)]
pub struct HullEmbedding {
    pub ambient: Complex,
    pub embedding: ChainMap,
}

pub fn hull_embedding(b: &Complex) -> Result<HullEmbedding> {
    let ring = b.ring();
    ring.require_modular("an injective embedding")?;
    let Some((lo, hi)) = b.support() else {
        let z = Complex::zero(ring);
        return Ok(HullEmbedding { embedding: ChainMap::zero(b, &z), ambient: z });
    };
    let zero = FpModule::zero(ring);
    let mut hulls = Vec::new();
    for k in lo..=hi {
        hulls.push(injective_hull(b.component(k))?);
    }
    let hull = |k: i32| -> (FpModule, ModuleMap) {
        if k < lo || k > hi {
            (zero.clone(), ModuleMap::zero(b.component(k), &zero))
        } else {
            hulls[(k - lo) as usize].clone()
        }
    };
    // E^j = H^{j+1} + H^j.
    let sums = (lo - 1..=hi + 1)
        .map(|j| direct_sum(ring, &[hull(j + 1).0, hull(j).0]))
        .collect::<Result<Vec<_>>>()?;
    let at = |j: i32| &sums[(j - lo + 1) as usize];
    let mut comps = Vec::new();
    let mut diffs = Vec::new();
    let mut parts = Vec::new();
    for j in lo - 1..=hi {
        comps.push(at(j).module.clone());
        if j < hi {
            diffs.push(at(j + 1).injections[1].compose(&at(j).projections[0])?);
        }
        if j >= lo {
            let (_, e_next) = hull(j + 1);
            let (_, e) = hull(j);
            let top = e_next.compose(&b.diff(j))?;
            parts.push((j, at(j).into_sum(b.component(j), &[Some(&top), Some(&e)])?));
        }
    }
    let ambient = Complex::checked(ring, lo - 1, comps, diffs)?;
    let embedding = ChainMap::new(b, &ambient, parts)?;
    Ok(HullEmbedding { ambient, embedding })
}

#[derive(Clone, Debug)]
struct Piece {
    witness: SubquotientWitness,
    set: Vec<bool>,
    size: u64,
}

/// A subcomplex of the ambient complex, one piece index per degree.
type Choice = Vec<usize>;

struct Lattice<'a> {
    ambient: &'a Complex,
    lo: i32,
    pieces: Vec<Vec<Piece>>,
    base: Vec<Vec<bool>>,
}

fn element_set(w: &SubquotientWitness) -> Result<Vec<bool>> {
    let amb = &w.ambient;
    let mut set = vec![false; amb.order().unwrap_or(0) as usize];
    for x in w.sub().elements()? {
        set[amb.element_index(&w.inclusion.apply(&x)?) as usize] = true;
    }
    Ok(set)
}

fn subset(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| !x || y)
}

impl<'a> Lattice<'a> {
    fn piece(&self, c: &Choice, j: usize) -> &Piece {
        &self.pieces[j][c[j]]
    }

    fn closed_step(&self, j: usize, from: usize, to: usize) -> Result<bool> {
        let k = self.lo + j as i32;
        let d = self.ambient.diff(k);
        let src = &self.pieces[j][from];
        let dst = &self.pieces[j + 1][to];
        let gens = src.witness.inclusion.matrix();
        for g in 0..gens.cols() {
            let y = d.apply(&gens.column(g))?;
            if !dst.set[self.ambient.component(k + 1).element_index(&y) as usize] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn enumerate(&self, limit: u64) -> Result<Vec<Choice>> {
        let n = self.pieces.len();
        let mut out = Vec::new();
        let mut stack: Vec<Choice> = (0..self.pieces[0].len()).map(|i| vec![i]).collect();
        stack.reverse();
        let mut visited = 0u64;
        while let Some(c) = stack.pop() {
            visited += 1;
            if visited > limit {
                return Err(Error::CapExceeded("subcomplex lattice too large to enumerate".into()));
            }
            if c.len() == n {
                out.push(c);
                continue;
            }
            let j = c.len() - 1;
            for t in (0..self.pieces[j + 1].len()).rev() {
                if self.closed_step(j, c[j], t)? {
                    let mut next = c.clone();
                    next.push(t);
                    stack.push(next);
                }
            }
        }
        Ok(out)
    }

    fn size(&self, c: &Choice) -> u64 {
        (0..c.len()).map(|j| self.piece(c, j).size).sum()
    }

    fn contains(&self, big: &Choice, small: &Choice) -> bool {
        (0..big.len()).all(|j| subset(&self.piece(small, j).set, &self.piece(big, j).set))
    }

    /// Every cyclic subcomplex `<x> -> <dx>` of `c` with `x != 0` meets the
    /// base. Returns the number of elements checked, or `None` on failure.
    fn essential(&self, c: &Choice) -> Result<Option<u64>> {
        let mut checked = 0;
        for j in 0..c.len() {
            let k = self.lo + j as i32;
            let m = self.ambient.component(k);
            let next = self.ambient.component(k + 1);
            let d = self.ambient.diff(k);
            let exp = m.factors().iter().copied().max().unwrap_or(1);
            for (idx, &inside) in self.piece(c, j).set.iter().enumerate() {
                if !inside || idx == 0 {
                    continue;
                }
                checked += 1;
                let x = m.element_at(idx as u64);
                let dx = d.apply(&x)?;
                let meets = (1..exp).any(|r| {
                    let mut a: Vec<i64> = x.iter().map(|v| v * r).collect();
                    m.reduce(&mut a);
                    let ia = m.element_index(&a) as usize;
                    if ia != 0 && self.base[j][ia] {
                        return true;
                    }
                    let mut b: Vec<i64> = dx.iter().map(|v| v * r).collect();
                    next.reduce(&mut b);
                    let ib = next.element_index(&b) as usize;
                    j + 1 < c.len() && ib != 0 && self.base[j + 1][ib]
                });
                if !meets {
                    return Ok(None);
                }
            }
        }
        Ok(Some(checked))
    }

    /// `A^k / B^k` for every degree.
    fn quotients(&self, c: &Choice, emb: &ChainMap) -> Result<Vec<FpModule>> {
        (0..c.len())
            .map(|j| {
                let k = self.lo + j as i32;
                let w = &self.piece(c, j).witness;
                let b = emb.component(k);
                let cols = (0..b.source().gens())
                    .map(|g| {
                        let y = b.matrix().column(g);
                        w.inclusion.preimage(&y)?.ok_or_else(|| Error::Inconsistent("base not inside subcomplex".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(quotient(w.sub(), &IntMatrix::from_columns(w.sub().gens(), &cols))?.0)
            })
            .collect()
    }

    fn complex(&self, c: &Choice) -> Result<Complex> {
        let ring = self.ambient.ring();
        let comps: Vec<FpModule> = (0..c.len()).map(|j| self.piece(c, j).witness.sub().clone()).collect();
        let mut diffs = Vec::new();
        for j in 0..c.len().saturating_sub(1) {
            let d = self.ambient.diff(self.lo + j as i32);
            let src = &self.piece(c, j).witness;
            let dst = &self.piece(c, j + 1).witness;
            let cols = (0..src.sub().gens())
                .map(|g| {
                    let y = d.apply(&src.inclusion.matrix().column(g))?;
                    dst.inclusion.preimage(&y)?.ok_or_else(|| Error::Inconsistent("subcomplex not closed".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            diffs.push(ModuleMap::new(comps[j].clone(), comps[j + 1].clone(), IntMatrix::from_columns(comps[j + 1].gens(), &cols))?);
        }
        Complex::checked(ring, self.lo, comps, diffs)
    }

    fn inclusion_of_base(&self, c: &Choice, t: &Complex, b: &Complex, emb: &ChainMap) -> Result<ChainMap> {
        let mut parts = Vec::new();
        for k in b.degrees() {
            if b.component(k).is_zero() {
                continue;
            }
            let j = (k - self.lo) as usize;
            let w = &self.piece(c, j).witness;
            let e = emb.component(k);
            let cols = (0..e.source().gens())
                .map(|g| {
                    w.inclusion.preimage(&e.matrix().column(g))?.ok_or_else(|| Error::Inconsistent("base not inside".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            parts.push((k, ModuleMap::new(b.component(k).clone(), t.component(k).clone(), IntMatrix::from_columns(t.component(k).gens(), &cols))?));
        }
        ChainMap::new(b, t, parts)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EssentialityCertificate {
    /// Nonzero elements `x` of `T` whose cyclic subcomplex was checked.
    pub elements_checked: u64,
    pub subcomplexes_enumerated: usize,
    pub essential_extensions: usize,
    pub admissible: usize,
}

#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    pub ambient: Complex,
    pub embedding: ChainMap,
    /// Largest essential extension of `B` inside the ambient complex.
    pub hull: Complex,
    pub envelope: Complex,
    pub inclusion: ChainMap,
    pub certificate: EssentialityCertificate,
    /// No admissible subcomplex strictly contains the chosen one.
    pub maximal: bool,
    pub x_injective: Verdict,
    pub competitors: usize,
    pub factorization_failures: Vec<String>,
}

/// First violation of closure under quotients or extensions among the
/// universe's short exact sequences `N -> M -> M/N`.
pub fn class_closure_defect(x: &XClass, u: &ModuleUniverse, caps: &Caps) -> Result<Option<String>> {
    for m in u.members() {
        for w in enumerate_submodules(&m, caps)? {
            let (n, q) = (w.sub(), &w.quotient);
            if x.contains_module(&m) && !x.contains_module(q) {
                return Ok(Some(format!("{x} not closed under quotients: {m} / {n} = {q}")));
            }
            if x.contains_module(n) && x.contains_module(q) && !x.contains_module(&m) {
                return Ok(Some(format!("{x} not closed under extensions: {n} -> {m} -> {q}")));
            }
        }
    }
    Ok(None)
}

/// Maximal `T` with `B <= T <= E_B` and `T/B` an X-complex, where `E_B` is
/// a largest essential extension of `B` in the hull embedding. `None` when
/// no subcomplex qualifies, which needs `0` outside the class.
pub fn x_injective_envelope(b: &Complex, x: &XClass, bound: u64, caps: &Caps) -> Result<Option<EnvelopeResult>> {
    if let Some(k) = validate(b)?.first_violation {
        return Err(Error::InvalidComplex(format!("d∘d != 0 at degree {k}")));
    }
    let ring = b.ring();
    let u = ModuleUniverse::new(ring, bound, caps)?;
    if let Some(why) = class_closure_defect(x, &u, caps)? {
        return Err(Error::Hypothesis(why));
    }
    let HullEmbedding { ambient, embedding } = hull_embedding(b)?;
    let total: u64 = ambient.components().iter().map(|m| m.order().unwrap_or(u64::MAX)).sum();
    if total > caps.module_size * caps.window as u64 {
        return Err(Error::CapExceeded(format!("ambient complex has {total} elements")));
    }
    if ambient.is_zero() {
        let cu = ComplexUniverse::around(b, bound, caps)?;
        let x_injective = x_injective_complex(&ambient, x, &cu, caps)?;
        return Ok(Some(EnvelopeResult {
            hull: ambient.clone(),
            envelope: ambient.clone(),
            inclusion: embedding.clone(),
            ambient,
            embedding,
            certificate: EssentialityCertificate {
                elements_checked: 0,
                subcomplexes_enumerated: 1,
                essential_extensions: 1,
                admissible: 1,
            },
            maximal: true,
            x_injective,
            competitors: 0,
            factorization_failures: Vec::new(),
        }));
    }
    let (lo, hi) = ambient.bounds();
    let mut pieces = Vec::new();
    let mut base = Vec::new();
    for k in lo..=hi {
        let m = ambient.component(k);
        let e = embedding.component(k);
        let mut bset = vec![false; m.order().unwrap_or(0) as usize];
        for y in e.source().elements()? {
            bset[m.element_index(&e.apply(&y)?) as usize] = true;
        }
        let mut row = Vec::new();
        for w in enumerate_submodules(m, caps)? {
            let set = element_set(&w)?;
            if subset(&bset, &set) {
                let size = w.sub().order().unwrap_or(0);
                row.push(Piece { witness: w, set, size });
            }
        }
        pieces.push(row);
        base.push(bset);
    }
    let lattice = Lattice { ambient: &ambient, lo, pieces, base };
    let all = lattice.enumerate(caps.hom_size)?;

    let mut essential = Vec::new();
    for c in &all {
        if lattice.essential(c)?.is_some() {
            essential.push(c.clone());
        }
    }
    let Some(hull_choice) = largest(&lattice, &essential) else {
        return Err(Error::Inconsistent("the base itself is not essential over itself".into()));
    };
    let mut admissible = Vec::new();
    for c in &all {
        if lattice.contains(&hull_choice, c) && lattice.quotients(c, &embedding)?.iter().all(|q| x.contains_module(q)) {
            admissible.push(c.clone());
        }
    }
    let Some(t_choice) = largest(&lattice, &admissible) else {
        return Ok(None);
    };
    let maximal = !admissible.iter().any(|c| c != &t_choice && lattice.contains(c, &t_choice));
    let Some(elements_checked) = lattice.essential(&t_choice)? else {
        return Err(Error::Inconsistent("a subcomplex of an essential extension is not essential".into()));
    };

    let hull = lattice.complex(&hull_choice)?;
    let envelope = lattice.complex(&t_choice)?;
    let inclusion = lattice.inclusion_of_base(&t_choice, &envelope, b, &embedding)?;

    let cu = ComplexUniverse::around(&envelope, bound, caps)?;
    let x_injective = x_injective_complex(&envelope, x, &cu, caps)?;
    let fam = ComplexFamily::injective(x, &cu, caps)?;
    let mut competitors = 0;
    let mut factorization_failures = Vec::new();
    for c in cu.members()? {
        if !fam.check(&c, caps)?.holds() {
            continue;
        }
        competitors += 1;
        for h in chain_maps(b, &c)?.generators()? {
            if extend_along(&inclusion, &h)?.is_none() {
                factorization_failures.push(format!("a map into {} does not extend", super::verify::describe(&c)));
            }
        }
    }
    Ok(Some(EnvelopeResult {
        ambient: ambient.clone(),
        embedding: embedding.clone(),
        hull,
        envelope,
        inclusion,
        certificate: EssentialityCertificate {
            elements_checked,
            subcomplexes_enumerated: all.len(),
            essential_extensions: essential.len(),
            admissible: admissible.len(),
        },
        maximal,
        x_injective,
        competitors,
        factorization_failures,
    }))
}

fn largest(lattice: &Lattice<'_>, cs: &[Choice]) -> Option<Choice> {
    let mut best: Option<&Choice> = None;
    for c in cs {
        if best.is_none_or(|b| lattice.size(c) > lattice.size(b)) {
            best = Some(c);
        }
    }
    best.cloned()
}
