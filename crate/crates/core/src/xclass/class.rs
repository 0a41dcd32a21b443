use std::fmt;
use std::str::FromStr;

use regex::Regex;

use crate::complexes::Complex;
use crate::error::{Error, Result};
use crate::modules::FpModule;

/// A decidable class of modules.
#[derive(Clone, Debug)]
pub enum XClass {
    All,
    ZeroOnly,
    Free,
    /// Modules killed by `p`: every invariant factor divides `p`.
    AnnihilatedBy(i64),
    /// Full match of a regex against the comma-joined invariant factors
    /// (`"2,4"`; the zero module is `""`).
    FactorPredicate { pattern: String, regex: Regex, include_zero: bool },
}

impl XClass {
    pub fn predicate(pattern: &str, include_zero: bool) -> Result<Self> {
        let regex = Regex::new(&format!("^(?:{pattern})$"))
            .map_err(|e| Error::Parse(format!("bad class pattern: {e}")))?;
        Ok(XClass::FactorPredicate { pattern: pattern.to_string(), regex, include_zero })
    }

    pub fn contains_module(&self, m: &FpModule) -> bool {
        match self {
            XClass::FactorPredicate { regex, include_zero, .. } => {
                if m.is_zero() {
                    return *include_zero;
                }
                regex.is_match(&factor_string(m))
            }
            _ if m.is_zero() => true,
            XClass::All => true,
            XClass::ZeroOnly => false,
            XClass::Free => m.is_free(),
            XClass::AnnihilatedBy(p) => m.factors().iter().all(|&d| d != 0 && p % d == 0),
        }
    }

    pub fn contains_complex(&self, c: &Complex) -> bool {
        c.components().iter().all(|m| self.contains_module(m))
    }
}

pub(crate) fn factor_string(m: &FpModule) -> String {
    m.factors().iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl FromStr for XClass {
    type Err = Error;

    /// `all`, `zero`, `free`, `ann:p`, `pred:<regex>`; `pred0:<regex>`
    /// additionally excludes the zero module.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "all" => return Ok(XClass::All),
            "zero" => return Ok(XClass::ZeroOnly),
            "free" => return Ok(XClass::Free),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("ann:") {
            let p: i64 = p.parse().map_err(|_| Error::Parse(format!("bad annihilator in {s:?}")))?;
            if p < 1 {
                return Err(Error::Parse("annihilator must be positive".into()));
            }
            return Ok(XClass::AnnihilatedBy(p));
        }
        if let Some(r) = s.strip_prefix("pred0:") {
            return XClass::predicate(r, false);
        }
        if let Some(r) = s.strip_prefix("pred:") {
            return XClass::predicate(r, true);
        }
        Err(Error::Parse(format!("unknown class {s:?}")))
    }
}

impl fmt::Display for XClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XClass::All => write!(f, "all"),
            XClass::ZeroOnly => write!(f, "zero"),
            XClass::Free => write!(f, "free"),
            XClass::AnnihilatedBy(p) => write!(f, "ann:{p}"),
            XClass::FactorPredicate { pattern, include_zero: true, .. } => write!(f, "pred:{pattern}"),
            XClass::FactorPredicate { pattern, .. } => write!(f, "pred0:{pattern}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{disk, sphere};
    use crate::exactalg::Ring;

    const Z4: Ring = Ring::IntegersMod(4);

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(XClass::All.contains_module(&m(&[2, 4])));
        assert!(!XClass::Free.contains_module(&m(&[2])));
        assert!(XClass::AnnihilatedBy(2).contains_module(&m(&[2, 2])));
        assert!(!XClass::AnnihilatedBy(2).contains_module(&m(&[4])));
        assert!(XClass::ZeroOnly.contains_module(&FpModule::zero(Z4)));
        assert!(!XClass::ZeroOnly.contains_module(&m(&[2])));
    }

    #[test]
    fn complex_membership() {
        for x in [XClass::All, XClass::ZeroOnly, XClass::Free, XClass::AnnihilatedBy(2)] {
            assert!(x.contains_complex(&Complex::zero(Z4)));
        }
        assert!(!XClass::Free.contains_complex(&disk(0, &m(&[2]))));
        assert!(XClass::Free.contains_complex(&sphere(0, &m(&[4, 4]))));
    }

    #[test]
    fn parsing() {
        for s in ["all", "zero", "free", "ann:2", "pred:(2,)*4", "pred0:2"] {
            assert_eq!(s.parse::<XClass>().unwrap().to_string(), s);
        }
        assert!("ann:x".parse::<XClass>().is_err());
        assert!("pred:(".parse::<XClass>().is_err());
        assert!("bogus".parse::<XClass>().is_err());
        let p: XClass = "pred:(2,)*4".parse().unwrap();
        assert!(p.contains_module(&m(&[2, 4])));
        assert!(!p.contains_module(&m(&[2, 2])));
        assert!(p.contains_module(&FpModule::zero(Z4)));
        let q: XClass = "pred0:2".parse().unwrap();
        assert!(!q.contains_module(&FpModule::zero(Z4)));
    }
}
