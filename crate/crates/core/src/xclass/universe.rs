use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::XClass;
use crate::complexes::{disk, sphere, Complex};
use crate::error::{Error, Result};
use crate::exactalg::{IntMatrix, Ring};
use crate::modules::{hom_module, submodule, FpModule, ModuleMap, SubquotientWitness};

/// Enumeration limits. `HOMKIT_CAP` overrides them as `N` (module size)
/// or `N:W` (module size and window width).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub module_size: u64,
    pub window: usize,
    /// Largest Hom group that may be enumerated element by element.
    pub hom_size: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { module_size: 64, window: 5, hom_size: 1 << 16 }
    }
}

impl Caps {
    pub fn from_env() -> Self {
        std::env::var("HOMKIT_CAP").ok().and_then(|v| Self::parse(&v)).unwrap_or_default()
    }

    pub fn parse(v: &str) -> Option<Self> {
        let mut caps = Self::default();
        let mut it = v.trim().splitn(2, ':');
        caps.module_size = it.next()?.parse().ok()?;
        if let Some(w) = it.next() {
            caps.window = w.parse().ok()?;
        }
        Some(caps)
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

/// All modules over `Z/n` with at most `bound` elements, one per
/// isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleUniverse {
    pub ring: Ring,
    pub bound: u64,
}

impl ModuleUniverse {
    pub fn new(ring: Ring, bound: u64, caps: &Caps) -> Result<Self> {
        ring.require_modular("a module universe")?;
        if bound > caps.module_size {
            return Err(Error::CapExceeded(format!(
                "module bound {bound} exceeds the cap {}",
                caps.module_size
            )));
        }
        Ok(Self { ring, bound })
    }

    pub fn members(&self) -> Vec<FpModule> {
        enumerate_modules(self)
    }
}

impl fmt::Display for ModuleUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "modules over {} with at most {} elements", self.ring, self.bound)
    }
}

/// Sorted by order, then number of factors, then factors.
pub fn enumerate_modules(u: &ModuleUniverse) -> Vec<FpModule> {
    let n = u.ring.modulus().expect("modular universe");
    let divisors: Vec<i64> = (2..=n).filter(|d| n % d == 0).collect();
    let mut out = vec![Vec::new()];
    fn grow(prefix: &mut Vec<i64>, size: u64, bound: u64, divs: &[i64], out: &mut Vec<Vec<i64>>) {
        for &d in divs {
            if prefix.last().is_some_and(|&l| d % l != 0) {
                continue;
            }
            let s = size * d as u64;
            if s > bound {
                continue;
            }
            prefix.push(d);
            out.push(prefix.clone());
            grow(prefix, s, bound, divs, out);
            prefix.pop();
        }
    }
    grow(&mut Vec::new(), 1, u.bound, &divisors, &mut out);
    let mut mods: Vec<FpModule> =
        out.into_iter().map(|f| FpModule::new(u.ring, f).expect("valid chain")).collect();
    mods.sort_by_key(|m| (m.order(), m.gens(), m.factors().to_vec()));
    mods
}

fn check_sizes(a: &FpModule, b: &FpModule, caps: &Caps) -> Result<u64> {
    for m in [a, b] {
        match m.order() {
            Some(o) if o <= caps.module_size => {}
            _ => return Err(Error::CapExceeded(format!("module {m} exceeds the size cap"))),
        }
    }
    let h = hom_module(a, b)?;
    match h.count() {
        Some(c) if c <= caps.hom_size => Ok(c),
        _ => Err(Error::CapExceeded(format!("Hom({a}, {b}) is too large to enumerate"))),
    }
}

/// All injective maps `a -> b`, in Hom-element order.
pub fn enumerate_monos(a: &FpModule, b: &FpModule, caps: &Caps) -> Result<Vec<ModuleMap>> {
    check_sizes(a, b, caps)?;
    if a.order() > b.order() {
        return Ok(Vec::new());
    }
    let h = hom_module(a, b)?;
    let mut out = Vec::new();
    for f in h.maps()? {
        if f.is_mono()? {
            out.push(f);
        }
    }
    Ok(out)
}

/// All surjective maps `a -> b`, in Hom-element order.
pub fn enumerate_epis(a: &FpModule, b: &FpModule, caps: &Caps) -> Result<Vec<ModuleMap>> {
    check_sizes(a, b, caps)?;
    if a.order() < b.order() {
        return Ok(Vec::new());
    }
    let h = hom_module(a, b)?;
    let mut out = Vec::new();
    for f in h.maps()? {
        if f.is_epi()? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Every submodule of a finite module, as witnesses, sorted by order and
/// then by element set.
pub fn enumerate_submodules(b: &FpModule, caps: &Caps) -> Result<Vec<SubquotientWitness>> {
    let size = match b.order() {
        Some(o) if o <= caps.module_size => o as usize,
        _ => return Err(Error::CapExceeded(format!("module {b} exceeds the size cap"))),
    };
    let elems: Vec<Vec<i64>> = b.elements()?.collect();
    let add = |x: &[i64], y: &[i64]| -> Vec<i64> {
        let mut s: Vec<i64> = x.iter().zip(y).map(|(a, c)| a + c).collect();
        b.reduce(&mut s);
        s
    };
    let words = size.div_ceil(64);
    let close = |set: &mut Vec<u64>, x: usize| {
        // Adds the cyclic group of x, then closes under addition.
        let mut frontier: Vec<usize> = vec![x];
        while let Some(i) = frontier.pop() {
            if set[i / 64] >> (i % 64) & 1 == 1 {
                continue;
            }
            set[i / 64] |= 1 << (i % 64);
            let members: Vec<usize> = (0..size).filter(|&j| set[j / 64] >> (j % 64) & 1 == 1).collect();
            for j in members {
                let s = b.element_index(&add(&elems[i], &elems[j])) as usize;
                if set[s / 64] >> (s % 64) & 1 == 0 {
                    frontier.push(s);
                }
            }
        }
    };
    let mut zero = vec![0u64; words];
    zero[0] |= 1;
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut found: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    let mut queue = vec![(zero.clone(), Vec::<usize>::new())];
    seen.insert(zero);
    while let Some((set, gens)) = queue.pop() {
        for x in 0..size {
            if set[x / 64] >> (x % 64) & 1 == 1 {
                continue;
            }
            let mut next = set.clone();
            close(&mut next, x);
            if seen.insert(next.clone()) {
                let mut g = gens.clone();
                g.push(x);
                queue.push((next, g));
            }
        }
        found.push((set, gens));
    }
    found.sort_by_key(|(s, _)| (s.iter().map(|w| w.count_ones()).sum::<u32>(), s.clone()));
    found
        .into_iter()
        .map(|(_, gens)| {
            let cols: Vec<Vec<i64>> = gens.iter().map(|&i| elems[i].clone()).collect();
            submodule(b, &IntMatrix::from_columns(b.gens(), &cols))
        })
        .collect()
}

/// Complexes for the complex-level quantifiers: the zero complex, spheres
/// and disks on universe modules placed in `[lo, hi]`, and two-term
/// complexes with a nonzero non-invertible differential on modules of at
/// most `general_bound` elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexUniverse {
    pub modules: ModuleUniverse,
    pub lo: i32,
    pub hi: i32,
    pub general_bound: u64,
}

impl ComplexUniverse {
    pub fn new(modules: ModuleUniverse, lo: i32, hi: i32, general_bound: u64, caps: &Caps) -> Result<Self> {
        let width = (hi - lo + 1).max(0) as usize;
        if width > caps.window {
            return Err(Error::CapExceeded(format!("window width {width} exceeds the cap {}", caps.window)));
        }
        Ok(Self { modules, lo, hi, general_bound })
    }

    /// The default universe around a complex: its support widened by one.
    pub fn around(c: &Complex, bound: u64, caps: &Caps) -> Result<Self> {
        let (lo, hi) = c.support().unwrap_or((0, 0));
        let modules = ModuleUniverse::new(c.ring(), bound, caps)?;
        Self::new(modules, lo - 1, hi + 1, bound.min(4), caps)
    }

    pub fn members(&self) -> Result<Vec<Complex>> {
        let ring = self.modules.ring;
        let mods: Vec<FpModule> = self.modules.members().into_iter().filter(|m| !m.is_zero()).collect();
        let mut out = vec![Complex::zero(ring)];
        for k in self.lo..=self.hi {
            out.extend(mods.iter().map(|m| sphere(k, m)));
        }
        for k in self.lo..self.hi {
            out.extend(mods.iter().map(|m| disk(k, m)));
        }
        let small: Vec<&FpModule> =
            mods.iter().filter(|m| m.order().is_some_and(|o| o <= self.general_bound)).collect();
        for k in self.lo..self.hi {
            for a in &small {
                for b in &small {
                    for d in hom_module(a, b)?.maps()? {
                        if d.is_zero() || d.is_iso()? {
                            continue;
                        }
                        out.push(Complex::new(ring, k, vec![(*a).clone(), (*b).clone()], vec![d])?);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ComplexUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "complexes in degrees [{}, {}] over {}: spheres and disks on {}, two-term complexes on modules of at most {} elements",
            self.lo, self.hi, self.modules.ring, self.modules, self.general_bound
        )
    }
}

/// Exact complexes whose kernels lie in the class: disks `D^j(M)` and short
/// exact complexes `A -> B -> B/A` starting at `j` in `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct Eps1Universe {
    pub modules: ModuleUniverse,
    pub lo: i32,
    pub hi: i32,
    pub class: XClass,
}

impl Eps1Universe {
    pub fn new(modules: ModuleUniverse, lo: i32, hi: i32, class: XClass, caps: &Caps) -> Result<Self> {
        let width = (hi - lo + 1).max(0) as usize;
        if width > caps.window {
            return Err(Error::CapExceeded(format!("window width {width} exceeds the cap {}", caps.window)));
        }
        Ok(Self { modules, lo, hi, class })
    }

    /// Every placement whose shift `E[-1]` meets the support of `c`.
    pub fn around(c: &Complex, class: XClass, bound: u64, caps: &Caps) -> Result<Self> {
        let (lo, hi) = c.support().unwrap_or((0, 0));
        let modules = ModuleUniverse::new(c.ring(), bound, caps)?;
        Self::new(modules, lo - 3, hi - 1, class, caps)
    }

    pub fn members(&self, caps: &Caps) -> Result<Vec<Complex>> {
        enumerate_eps1(self, caps)
    }
}

impl fmt::Display for Eps1Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exact complexes with kernels in {} starting in degrees [{}, {}]: disks and short exact complexes on {}",
            self.class, self.lo, self.hi, self.modules
        )
    }
}

pub fn enumerate_eps1(u: &Eps1Universe, caps: &Caps) -> Result<Vec<Complex>> {
    let ring = u.modules.ring;
    let mods: Vec<FpModule> = u.modules.members().into_iter().filter(|m| !m.is_zero()).collect();
    let mut out = vec![Complex::zero(ring)];
    for j in u.lo..=u.hi {
        out.extend(mods.iter().filter(|m| u.class.contains_module(m)).map(|m| disk(j, m)));
    }
    let mut triples = Vec::new();
    for b in &mods {
        for w in enumerate_submodules(b, caps)? {
            if w.sub().is_zero() || w.quotient.is_zero() {
                continue;
            }
            if u.class.contains_module(w.sub()) && u.class.contains_module(&w.quotient) {
                triples.push(w);
            }
        }
    }
    for j in u.lo..=u.hi {
        for w in &triples {
            out.push(Complex::new(
                ring,
                j,
                vec![w.sub().clone(), w.ambient.clone(), w.quotient.clone()],
                vec![w.inclusion.clone(), w.quotient_map.clone()],
            )?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::is_exact;
    use crate::modules::kernel;

    const Z4: Ring = Ring::IntegersMod(4);

    fn mu(r: Ring, b: u64) -> ModuleUniverse {
        ModuleUniverse::new(r, b, &Caps::default()).unwrap()
    }

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    #[test]
    fn module_enumeration() {
        let fs: Vec<Vec<i64>> = mu(Z4, 4).members().iter().map(|m| m.factors().to_vec()).collect();
        assert_eq!(fs, vec![vec![], vec![2], vec![4], vec![2, 2]]);
        assert_eq!(mu(Z4, 1).members(), vec![FpModule::zero(Z4)]);
        let fs: Vec<Vec<i64>> =
            mu(Ring::IntegersMod(2), 8).members().iter().map(|m| m.factors().to_vec()).collect();
        assert_eq!(fs, vec![vec![], vec![2], vec![2, 2], vec![2, 2, 2]]);
        assert!(ModuleUniverse::new(Z4, 65, &Caps::default()).is_err());
        assert!(ModuleUniverse::new(Ring::Integers, 4, &Caps::default()).is_err());
    }

    #[test]
    fn mono_enumeration() {
        let c = Caps::default();
        assert_eq!(enumerate_monos(&FpModule::zero(Z4), &m(&[4]), &c).unwrap().len(), 1);
        let ms = enumerate_monos(&m(&[2]), &m(&[4]), &c).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].matrix()[(0, 0)], 2);
        assert!(enumerate_monos(&m(&[4]), &m(&[2]), &c).unwrap().is_empty());
        assert_eq!(enumerate_epis(&m(&[4]), &m(&[2]), &c).unwrap().len(), 1);
    }

    #[test]
    fn submodule_counts() {
        let c = Caps::default();
        // Z/2 + Z/2 has five subgroups, Z/4 three, Z/2 + Z/4 eight.
        assert_eq!(enumerate_submodules(&m(&[2, 2]), &c).unwrap().len(), 5);
        assert_eq!(enumerate_submodules(&m(&[4]), &c).unwrap().len(), 3);
        assert_eq!(enumerate_submodules(&m(&[2, 4]), &c).unwrap().len(), 8);
    }

    #[test]
    fn eps1_members() {
        let c = Caps::default();
        let u = Eps1Universe::new(mu(Z4, 1), 0, 0, XClass::All, &c).unwrap();
        assert_eq!(u.members(&c).unwrap(), vec![Complex::zero(Z4)]);
        let all = Eps1Universe::new(mu(Z4, 8), 0, 0, XClass::All, &c).unwrap().members(&c).unwrap();
        assert!(all.contains(&disk(0, &m(&[2]))));
        let free = Eps1Universe::new(mu(Z4, 8), 0, 0, XClass::Free, &c).unwrap().members(&c).unwrap();
        assert!(!free.contains(&disk(0, &m(&[2]))));
        for e in all.iter().chain(&free) {
            assert!(is_exact(e).unwrap().exact);
        }
        for e in &free {
            for k in e.degrees() {
                assert!(XClass::Free.contains_module(kernel(&e.diff(k)).unwrap().sub()));
            }
        }
    }

    #[test]
    fn caps_parse() {
        assert_eq!(Caps::parse("128").unwrap().module_size, 128);
        assert_eq!(Caps::parse("128:7").unwrap().window, 7);
        assert!(Caps::parse("x").is_none());
    }
}
