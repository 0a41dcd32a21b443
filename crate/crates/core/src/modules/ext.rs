use super::algebra::normalize_diagonal;
use super::{cokernel, hom_module, kernel, prime_factors, valuation, FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;

/// The free module on the generators of `m` and its canonical epi.
pub fn free_cover(m: &FpModule) -> ModuleMap {
    let f = FpModule::free(m.ring(), m.gens());
    ModuleMap::new_unchecked(f, m.clone(), IntMatrix::identity(m.gens()))
}

/// `Ext^1(M, N)` computed from the one-step presentation
/// `0 -> K -> F -> M -> 0` given by `cover: F -> M`.
pub fn ext1_with_cover(cover: &ModuleMap, n: &FpModule) -> Result<FpModule> {
    if !cover.source().is_free() {
        return Err(Error::Hypothesis("presentation must start from a free module".into()));
    }
    if !cover.is_epi()? {
        return Err(Error::Hypothesis("presentation map must be onto".into()));
    }
    let k = kernel(cover)?;
    let h0 = hom_module(cover.source(), n)?;
    let h1 = hom_module(k.sub(), n)?;
    let cols = h0
        .generators()?
        .iter()
        .map(|g| h1.encode(&g.compose(&k.inclusion)?))
        .collect::<Result<Vec<_>>>()?;
    let restrict = ModuleMap::new_unchecked(
        h0.module.clone(),
        h1.module.clone(),
        IntMatrix::from_columns(h1.module.gens(), &cols),
    );
    Ok(cokernel(&restrict)?.quotient)
}

pub fn ext1_module(m: &FpModule, n: &FpModule) -> Result<FpModule> {
    m.require_same_ring(n)?;
    ext1_with_cover(&free_cover(m), n)
}

/// Injective hull over `Z/n`: each `Z/d` embeds into `+_{p | d} Z/p^{v_p(n)}`.
pub fn injective_hull(m: &FpModule) -> Result<(FpModule, ModuleMap)> {
    let n = m.ring().require_modular("an injective hull")?;
    let mut orders = Vec::new();
    let mut entries = Vec::new();
    for (j, &d) in m.factors().iter().enumerate() {
        for p in prime_factors(d) {
            let a = valuation(n, p);
            let q = p.pow(a);
            orders.push(q);
            entries.push((orders.len() - 1, j, p.pow(a - valuation(d, p))));
        }
    }
    let mut raw = IntMatrix::zeros(orders.len(), m.gens());
    for (i, j, v) in entries {
        raw[(i, j)] = v;
    }
    let nz = normalize_diagonal(m.ring(), &orders)?;
    let emb = nz.to_canonical.mul_mod(&raw, n)?;
    let embedding = ModuleMap::new_unchecked(m.clone(), nz.module.clone(), emb);
    Ok((nz.module, embedding))
}
