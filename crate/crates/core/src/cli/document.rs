//! The JSON document format for complexes and chain maps.
//!
//! ```json
//! {"ring": {"mod": 4}, "modules": {"0": [4], "1": [4]}, "diff": {"0": [[2]]}}
//! ```
//!
//! Matrices are lists of rows: row `i` belongs to target generator `i`,
//! column `j` is the image of source generator `j`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::complexes::{ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exactalg::{IntMatrix, Ring};
use crate::modules::{FpModule, ModuleMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    #[serde(rename = "mod", default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integers: Option<bool>,
}

pub type Matrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub ring: RingDoc,
    #[serde(default)]
    pub modules: BTreeMap<i32, Vec<i64>>,
    #[serde(default)]
    pub diff: BTreeMap<i32, Matrix>,
}

/// A complex given inline or as a path relative to the referring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum ComplexRef {
    Inline(ComplexDoc),
    Path(String),
}

// Untagged buffering loses integer map keys, so dispatch on the raw value.
impl<'de> Deserialize<'de> for ComplexRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(p) => Ok(ComplexRef::Path(p)),
            v => serde_json::from_value(v).map(ComplexRef::Inline).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMapDoc {
    pub source: ComplexRef,
    pub target: ComplexRef,
    #[serde(default)]
    pub map: BTreeMap<i32, Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMapDoc {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub matrix: Matrix,
}

pub fn ring_doc(r: Ring) -> RingDoc {
    match r {
        Ring::IntegersMod(n) => RingDoc { modulus: Some(n), integers: None },
        Ring::Integers => RingDoc { modulus: None, integers: Some(true) },
    }
}

pub fn parse_ring(d: &RingDoc) -> Result<Ring> {
    match (d.modulus, d.integers) {
        (Some(n), None | Some(false)) => Ring::modular(n),
        (None, Some(true)) => Ok(Ring::Integers),
        _ => Err(Error::Parse("ring must be {\"mod\": n} or {\"integers\": true}".into())),
    }
}

fn rows(m: &IntMatrix) -> Matrix {
    m.to_rows()
}

fn matrix(rows: &Matrix, r: usize, c: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse(format!("{what}: expected a {r}x{c} matrix")));
    }
    if r == 0 {
        return Ok(IntMatrix::zeros(0, c));
    }
    IntMatrix::from_rows(rows, c)
}

pub fn module_map_doc(f: &ModuleMap) -> ModuleMapDoc {
    ModuleMapDoc {
        source: f.source().factors().to_vec(),
        target: f.target().factors().to_vec(),
        matrix: rows(f.matrix()),
    }
}

pub fn parse_module_map(ring: Ring, d: &ModuleMapDoc) -> Result<ModuleMap> {
    let s = FpModule::new(ring, d.source.clone())?;
    let t = FpModule::new(ring, d.target.clone())?;
    let m = matrix(&d.matrix, t.gens(), s.gens(), "module map")?;
    ModuleMap::new(s, t, m)
}

/// Canonical: only nonzero components and nonzero differentials appear.
pub fn complex_doc(c: &Complex) -> ComplexDoc {
    let mut modules = BTreeMap::new();
    let mut diff = BTreeMap::new();
    for k in c.degrees() {
        let m = c.component(k);
        if m.is_zero() {
            continue;
        }
        modules.insert(k, m.factors().to_vec());
        let d = c.diff(k);
        if !d.is_zero() {
            diff.insert(k, rows(d.matrix()));
        }
    }
    ComplexDoc { ring: ring_doc(c.ring()), modules, diff }
}

/// Builds the complex without checking `d∘d = 0`.
pub fn parse_complex(d: &ComplexDoc) -> Result<Complex> {
    let ring = parse_ring(&d.ring)?;
    let mut mods = BTreeMap::new();
    for (&k, f) in &d.modules {
        mods.insert(k, FpModule::new(ring, f.clone())?);
    }
    for &k in d.diff.keys() {
        let declared = mods.contains_key(&k) && mods.contains_key(&(k + 1));
        if !declared && d.diff[&k].iter().flatten().any(|&v| v != 0) {
            return Err(Error::Parse(format!("differential at degree {k} between undeclared modules")));
        }
    }
    let (Some(&lo), Some(&hi)) = (mods.keys().next(), mods.keys().next_back()) else {
        return Ok(Complex::zero(ring));
    };
    let zero = FpModule::zero(ring);
    let comp = |k: i32| mods.get(&k).cloned().unwrap_or_else(|| zero.clone());
    Complex::from_fn(ring, lo, hi, comp, |k, a, b| {
        let m = match d.diff.get(&k) {
            Some(r) => matrix(r, b.gens(), a.gens(), &format!("differential at degree {k}"))?,
            None => IntMatrix::zeros(b.gens(), a.gens()),
        };
        ModuleMap::new(a.clone(), b.clone(), m)
    })
}

pub fn chain_map_doc(f: &ChainMap) -> ChainMapDoc {
    ChainMapDoc {
        source: ComplexRef::Inline(complex_doc(f.source())),
        target: ComplexRef::Inline(complex_doc(f.target())),
        map: f.components().filter(|(_, m)| !m.is_zero()).map(|(k, m)| (k, rows(m.matrix()))).collect(),
    }
}

fn resolve(r: &ComplexRef, base: &Path) -> Result<Complex> {
    match r {
        ComplexRef::Inline(d) => parse_complex(d),
        ComplexRef::Path(p) => {
            let path: PathBuf = base.join(p);
            match load(&path)? {
                Document::Complex(c) => Ok(c),
                Document::Map(_) => Err(Error::Parse(format!("{} holds a chain map, not a complex", path.display()))),
            }
        }
    }
}

/// Builds the chain map without checking the commuting squares.
pub fn parse_chain_map(d: &ChainMapDoc, base: &Path) -> Result<ChainMap> {
    let x = resolve(&d.source, base)?;
    let y = resolve(&d.target, base)?;
    let mut comps = Vec::new();
    for (&k, r) in &d.map {
        let (a, b) = (x.component(k), y.component(k));
        let m = matrix(r, b.gens(), a.gens(), &format!("chain map at degree {k}"))?;
        comps.push((k, ModuleMap::new(a.clone(), b.clone(), m)?));
    }
    ChainMap::from_parts(&x, &y, comps)
}

#[derive(Clone, Debug)]
pub enum Document {
    Complex(Complex),
    Map(ChainMap),
}

pub fn parse_value(v: &Value, base: &Path) -> Result<Document> {
    let bad = |e: serde_json::Error| Error::Parse(e.to_string());
    if v.get("map").is_some() {
        let d: ChainMapDoc = serde_json::from_value(v.clone()).map_err(bad)?;
        Ok(Document::Map(parse_chain_map(&d, base)?))
    } else if v.get("ring").is_some() {
        let d: ComplexDoc = serde_json::from_value(v.clone()).map_err(bad)?;
        Ok(Document::Complex(parse_complex(&d)?))
    } else {
        Err(Error::Parse("expected a complex or chain map document".into()))
    }
}

pub fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_value(&v, path.parent().unwrap_or(Path::new(".")))
}

pub fn to_json<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("documents serialize")
}
