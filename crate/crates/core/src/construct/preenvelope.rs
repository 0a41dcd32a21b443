//! Bounded preenvelope by induction downward from the top degree.
//!
//! After the step at `l` the complex `E` lives in `[l-1, hi]`, starts with
//! `E_new -> E_new + E^l -> ...` and receives `Y^l -> ... -> Y^hi`.

use serde::Serialize;

use super::oracle::PreenvelopeOracle;
use super::precover::{product, reduced, ConstraintCheck, OracleCall};
use crate::complexes::{validate, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::modules::{cokernel, direct_sum, FpModule, MapSystem, ModuleMap, Term};

/// One gluing step: `Y^l` enters through `f: Y^l -> E_new`.
#[derive(Clone, Debug, Serialize)]
pub struct PreenvelopeStep {
    pub degree: i32,
    /// `a: Y^l -> Y^{l+1}`.
    pub a: ModuleMap,
    /// `g^{l+1}: Y^{l+1} -> E^{l+1}`.
    pub g_next: ModuleMap,
    pub f: ModuleMap,
    /// `d^l: E^l -> E^{l+1}` before gluing.
    pub lambda: ModuleMap,
    /// `E_new -> E^{l+1}`, equal to `lambda t`.
    pub s: ModuleMap,
    /// `E_new -> E^l`.
    pub t: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct PreenvelopeResult {
    pub envelope: Complex,
    pub map: ChainMap,
    pub oracle_calls: Vec<OracleCall>,
    pub steps: Vec<PreenvelopeStep>,
    /// `(k, coker map^k)`.
    pub cokernel: Vec<(i32, FpModule)>,
}

pub const S_F: &str = "s f = g^{l+1} a";
pub const LAMBDA_T: &str = "lambda t = s";

fn call(oracle: &dyn PreenvelopeOracle, m: &FpModule, degree: i32, calls: &mut Vec<OracleCall>) -> Result<ModuleMap> {
    let f = oracle.preenvelope(m)?;
    if f.source() != m || !f.is_mono()? {
        return Err(Error::Hypothesis(format!("oracle returned no mono out of {m}")));
    }
    calls.push(OracleCall { degree, oracle: oracle.name(), module: m.clone(), approximation: f.target().clone() });
    Ok(f)
}

pub fn preenvelope_with(y: &Complex, oracle: &dyn PreenvelopeOracle) -> Result<PreenvelopeResult> {
    if let Some(k) = validate(y)?.first_violation {
        return Err(Error::InvalidComplex(format!("d∘d != 0 at degree {k}")));
    }
    let ring = y.ring();
    let Some((lo, hi)) = y.support() else {
        let z = Complex::zero(ring);
        return Ok(PreenvelopeResult {
            map: ChainMap::zero(y, &z),
            envelope: z,
            oracle_calls: Vec::new(),
            steps: Vec::new(),
            cokernel: Vec::new(),
        });
    };
    let mut calls = Vec::new();
    let f0 = call(oracle, y.component(hi), hi, &mut calls)?;
    let e0 = f0.target().clone();
    // comps[0] sits in degree `bottom`.
    let mut bottom = hi - 1;
    let mut comps = vec![e0.clone(), e0.clone()];
    let mut diffs = vec![ModuleMap::identity(&e0)];
    // g[0] is the component in degree `bottom + 1`.
    let mut g = vec![f0];
    let mut steps = Vec::new();

    for l in (lo..hi).rev() {
        debug_assert_eq!(bottom, l);
        let a = y.diff(l).into_owned();
        let g_next = g[0].clone();
        let lambda = diffs[0].clone();
        let f = call(oracle, y.component(l), l, &mut calls)?;
        let en = f.target().clone();
        let rhs = g_next.compose(&a)?;
        let mut sys = MapSystem::new(ring);
        let s = sys.unknown(&en, &comps[1]);
        let t = sys.unknown(&en, &comps[0]);
        sys.equation(&[Term::new(s).right(&f)], &rhs)?;
        sys.equation(&[Term::new(t).left(&lambda), Term::new(s).times(-1)], &ModuleMap::zero(&en, &comps[1]))?;
        let Some(sol) = sys.solve()? else {
            return Err(Error::Unsolvable(format!(
                "degree {l}: no s, t with {S_F}, {LAMBDA_T} (E_new = {en}, E^l = {})",
                comps[0]
            )));
        };
        let (s, t) = (sol.particular[s].clone(), sol.particular[t].clone());

        let sum = direct_sum(ring, &[en.clone(), comps[0].clone()])?;
        let minus_t = t.neg();
        let lambda_low = sum.into_sum(&en, &[Some(&ModuleMap::identity(&en)), Some(&minus_t)])?;
        let lambda_high = sum.out_of_sum(&comps[1], &[Some(&s), Some(&lambda)])?;
        let g_l = sum.into_sum(y.component(l), &[Some(&f), None])?;
        steps.push(PreenvelopeStep { degree: l, a, g_next, f, lambda, s, t });
        comps[0] = sum.module.clone();
        comps.insert(0, en);
        diffs[0] = lambda_high;
        diffs.insert(0, lambda_low);
        g.insert(0, g_l);
        bottom -= 1;
    }

    let envelope = Complex::checked(ring, bottom, comps, diffs)?;
    let parts: Vec<(i32, ModuleMap)> = g.into_iter().enumerate().map(|(i, m)| (bottom + 1 + i as i32, m)).collect();
    let map = ChainMap::new(y, &envelope, parts)?;
    let cokernel = envelope
        .degrees()
        .map(|k| Ok((k, cokernel(&map.component(k))?.quotient)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PreenvelopeResult { envelope, map, oracle_calls: calls, steps, cokernel })
}

impl PreenvelopeResult {
    pub fn constraint_checks(&self) -> Result<Vec<ConstraintCheck>> {
        let mut out = Vec::new();
        for st in &self.steps {
            out.push(ConstraintCheck {
                degree: st.degree,
                constraint: S_F.into(),
                holds: product(&st.s, &st.f)? == product(&st.g_next, &st.a)?,
            });
            out.push(ConstraintCheck {
                degree: st.degree,
                constraint: LAMBDA_T.into(),
                holds: product(&st.lambda, &st.t)? == reduced(&st.s),
            });
        }
        Ok(out)
    }
}
