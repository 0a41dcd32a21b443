use super::{shift, ChainMap, Complex, ShortExactOfComplexes};
use crate::error::Result;
use crate::modules::{direct_sum, DirectSum, ModuleMap};

/// `M(f)^k = X^{k+1} + Y^k` with differential `[[-d_X, 0], [f, d_Y]]`,
/// together with `0 -> Y -> M(f) -> X[1] -> 0`.
pub fn mapping_cone(f: &ChainMap) -> Result<(Complex, ShortExactOfComplexes)> {
    let (x, y) = (f.source(), f.target());
    let ring = x.ring();
    let (xl, xh) = x.bounds();
    let (yl, yh) = y.bounds();
    let (lo, hi) = match (x.is_zero(), y.is_zero()) {
        (true, true) => (0, -1),
        (true, false) => (yl, yh),
        (false, true) => (xl - 1, xh - 1),
        _ => ((xl - 1).min(yl), (xh - 1).max(yh)),
    };
    let sums: Vec<DirectSum> = (lo..=hi + 1)
        .map(|k| direct_sum(ring, &[x.component(k + 1).clone(), y.component(k).clone()]))
        .collect::<Result<_>>()?;
    let at = |k: i32| &sums[(k - lo) as usize];

    let mut diffs = Vec::new();
    for k in lo..hi {
        let (s, t) = (at(k), at(k + 1));
        let top = x.diff(k + 1).neg().compose(&s.projections[0])?;
        let bottom = f
            .component(k + 1)
            .compose(&s.projections[0])?
            .add(&y.diff(k).compose(&s.projections[1])?)?;
        diffs.push(t.into_sum(&s.module, &[Some(&top), Some(&bottom)])?);
    }
    let comps = (lo..=hi).map(|k| at(k).module.clone()).collect();
    let cone = Complex::new(ring, lo, comps, diffs)?;

    let xs = shift(x, 1);
    let inj_parts: Vec<(i32, ModuleMap)> =
        (lo..=hi).map(|k| (k, at(k).injections[1].clone())).collect();
    let surj_parts: Vec<(i32, ModuleMap)> =
        (lo..=hi).map(|k| (k, at(k).projections[0].clone())).collect();
    let inj = ChainMap::from_parts(y, &cone, inj_parts)?;
    let surj = ChainMap::from_parts(&cone, &xs, surj_parts)?;
    let seq = ShortExactOfComplexes { left: y.clone(), middle: cone.clone(), right: xs, inj, surj };
    Ok((cone, seq))
}

pub fn cone_sequence(f: &ChainMap) -> Result<ShortExactOfComplexes> {
    Ok(mapping_cone(f)?.1)
}
