//! Bounded precover by induction on the top degree.
//!
//! Cohomological indexing throughout: `Y^lo -> ... -> Y^hi`. After the step
//! at `n` the cover `D` lives in `[lo, n+2]` with `D^{n+2} = P^{n+1}` and
//! maps onto the truncation `Y^lo -> ... -> Y^{n+1}`.

use serde::Serialize;

use super::oracle::PrecoverOracle;
use crate::complexes::{validate, ChainMap, Complex};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::modules::{direct_sum, kernel, FpModule, MapSystem, ModuleMap, Term};

#[derive(Clone, Debug, Serialize)]
pub struct OracleCall {
    pub degree: i32,
    pub oracle: String,
    pub module: FpModule,
    pub approximation: FpModule,
}

/// One gluing step: `Y^{n+1}` enters through `f^{n+1}: P^{n+1} -> Y^{n+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct PrecoverStep {
    pub degree: i32,
    /// `a^n: Y^n -> Y^{n+1}`.
    pub a: ModuleMap,
    /// `(0, f^n): D^n -> Y^n`.
    pub g: ModuleMap,
    pub f_next: ModuleMap,
    /// `lambda^{n-1}: D^{n-1} -> D^n`.
    pub lambda_prev: ModuleMap,
    /// `lambda^n: D^n -> D^{n+1}` before gluing.
    pub lambda: ModuleMap,
    pub s1: ModuleMap,
    pub s2: ModuleMap,
    /// Constraints left out because the full system had no solution.
    pub dropped: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PrecoverResult {
    pub cover: Complex,
    pub map: ChainMap,
    pub oracle_calls: Vec<OracleCall>,
    pub steps: Vec<PrecoverStep>,
    /// `(k, ker map^k)`.
    pub kernel: Vec<(i32, FpModule)>,
}

pub const F_S1: &str = "f^{n+1} s1 = a^n (0,f^n)";
pub const S1_LAMBDA: &str = "s1 lambda^{n-1} = 0";
pub const S2_LAMBDA: &str = "s2 lambda^n = s1";
pub const F_S2: &str = "f^{n+1} s2 = 0";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub degree: i32,
    pub constraint: String,
    pub holds: bool,
}

fn call(oracle: &dyn PrecoverOracle, m: &FpModule, degree: i32, calls: &mut Vec<OracleCall>) -> Result<ModuleMap> {
    let f = oracle.precover(m)?;
    if f.target() != m || !f.is_epi()? {
        return Err(Error::Hypothesis(format!("oracle returned no epi onto {m}")));
    }
    calls.push(OracleCall { degree, oracle: oracle.name(), module: m.clone(), approximation: f.source().clone() });
    Ok(f)
}

pub fn precover_with(y: &Complex, oracle: &dyn PrecoverOracle) -> Result<PrecoverResult> {
    if let Some(k) = validate(y)?.first_violation {
        return Err(Error::InvalidComplex(format!("d∘d != 0 at degree {k}")));
    }
    let ring = y.ring();
    let Some((lo, hi)) = y.support() else {
        let z = Complex::zero(ring);
        return Ok(PrecoverResult {
            map: ChainMap::zero(&z, y),
            cover: z,
            oracle_calls: Vec::new(),
            steps: Vec::new(),
            kernel: Vec::new(),
        });
    };
    let mut calls = Vec::new();
    let f0 = call(oracle, y.component(lo), lo, &mut calls)?;
    let p0 = f0.source().clone();
    let mut comps = vec![p0.clone(), p0.clone()];
    let mut diffs = vec![ModuleMap::identity(&p0)];
    let mut g = vec![f0];
    let mut steps = Vec::new();

    for n in lo..hi {
        let i = (n - lo) as usize;
        let dn = diffs[i].clone();
        let dprev = if i == 0 { ModuleMap::zero(&FpModule::zero(ring), &comps[0]) } else { diffs[i - 1].clone() };
        let a = y.diff(n).into_owned();
        let gn = g[i].clone();
        let f = call(oracle, y.component(n + 1), n + 1, &mut calls)?;
        let p = f.source().clone();
        let rhs = a.compose(&gn)?;
        let solve = |with_f_s2: bool| -> Result<Option<(ModuleMap, ModuleMap)>> {
            let mut sys = MapSystem::new(ring);
            let s1 = sys.unknown(&comps[i], &p);
            let s2 = sys.unknown(&comps[i + 1], &p);
            sys.equation(&[Term::new(s1).left(&f)], &rhs)?;
            sys.equation(&[Term::new(s1).right(&dprev)], &ModuleMap::zero(dprev.source(), &p))?;
            sys.equation(&[Term::new(s2).right(&dn), Term::new(s1).times(-1)], &ModuleMap::zero(&comps[i], &p))?;
            if with_f_s2 {
                sys.equation(&[Term::new(s2).left(&f)], &ModuleMap::zero(&comps[i + 1], f.target()))?;
            }
            Ok(sys.solve()?.map(|s| (s.particular[s1].clone(), s.particular[s2].clone())))
        };
        let (s1, s2, dropped) = match solve(true)? {
            Some((s1, s2)) => (s1, s2, Vec::new()),
            None => match solve(false)? {
                Some((s1, s2)) => (s1, s2, vec![F_S2.to_string()]),
                None => {
                    return Err(Error::Unsolvable(format!(
                        "degree {n}: no s1, s2 with {F_S1}, {S1_LAMBDA}, {S2_LAMBDA} (D^n = {}, P^{{n+1}} = {p})",
                        comps[i]
                    )))
                }
            },
        };

        let sum = direct_sum(ring, &[comps[i + 1].clone(), p.clone()])?;
        let lambda1 = sum.into_sum(&comps[i], &[Some(&dn), Some(&s1)])?;
        let minus = ModuleMap::identity(&p).neg();
        let lambda_next = sum.out_of_sum(&p, &[Some(&s2), Some(&minus)])?;
        let g_next = sum.out_of_sum(y.component(n + 1), &[None, Some(&f)])?;
        steps.push(PrecoverStep {
            degree: n,
            a,
            g: gn,
            f_next: f,
            lambda_prev: dprev,
            lambda: dn,
            s1,
            s2,
            dropped,
        });
        comps[i + 1] = sum.module.clone();
        comps.push(p);
        diffs[i] = lambda1;
        diffs.push(lambda_next);
        g.push(g_next);
    }

    let cover = Complex::checked(ring, lo, comps, diffs)?;
    let parts: Vec<(i32, ModuleMap)> = g.into_iter().enumerate().map(|(i, m)| (lo + i as i32, m)).collect();
    let map = ChainMap::new(&cover, y, parts)?;
    let kernel = cover
        .degrees()
        .map(|k| Ok((k, kernel(&map.component(k))?.sub().clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrecoverResult { cover, map, oracle_calls: calls, steps, kernel })
}

/// `left * right` with plain integer arithmetic, reduced modulo the
/// factors of `target`.
pub(crate) fn product(left: &ModuleMap, right: &ModuleMap) -> Result<IntMatrix> {
    Ok(left.matrix().mul(right.matrix())?.reduce_rows(left.target().factors()))
}

pub(crate) fn reduced(m: &ModuleMap) -> IntMatrix {
    m.matrix().reduce_rows(m.target().factors())
}

impl PrecoverResult {
    /// The four constraints of every step, recomputed from the recorded
    /// matrices.
    pub fn constraint_checks(&self) -> Result<Vec<ConstraintCheck>> {
        let mut out = Vec::new();
        for st in &self.steps {
            let mut push = |name: &str, holds: bool| {
                out.push(ConstraintCheck { degree: st.degree, constraint: name.to_string(), holds })
            };
            push(F_S1, product(&st.f_next, &st.s1)? == product(&st.a, &st.g)?);
            push(S1_LAMBDA, product(&st.s1, &st.lambda_prev)?.is_zero());
            push(S2_LAMBDA, product(&st.s2, &st.lambda)? == reduced(&st.s1));
            push(F_S2, product(&st.f_next, &st.s2)?.is_zero());
        }
        Ok(out)
    }
}
