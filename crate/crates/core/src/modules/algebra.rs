use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactalg::{integer_kernel, smith_big, BigMatrix, IntMatrix, Ring};

/// A module in invariant-factor form together with the change of basis
/// from the raw generators of its presentation.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub module: FpModule,
    /// `k x g`: raw coordinates to canonical coordinates.
    pub to_canonical: IntMatrix,
    /// `g x k`: canonical generator `i` written in raw generators.
    pub from_canonical: IntMatrix,
}

/// Normalizes `R^g / (column span of relations)`.
pub fn normalize(ring: Ring, gens: usize, relations: &IntMatrix) -> Result<Normalized> {
    if relations.rows() != gens {
        return Err(Error::Dimension(format!(
            "relations have {} rows for {gens} generators",
            relations.rows()
        )));
    }
    let rel = match ring {
        Ring::IntegersMod(n) => {
            relations.hstack(&IntMatrix::diagonal(&vec![n; gens]))?
        }
        Ring::Integers => relations.clone(),
    };
    let s = smith_big(&BigMatrix::from_int(&rel));
    let diag = s.diagonal();
    let modulus = ring.modulus().map(BigInt::from);
    let narrow = |x: &BigInt, m: Option<&BigInt>| -> Result<i64> {
        let x = match m {
            Some(m) if !m.is_zero() => x.mod_floor(m),
            _ => x.clone(),
        };
        x.to_i64().ok_or(Error::Overflow)
    };

    let mut factors = Vec::new();
    let mut to_rows = Vec::new();
    let mut from_cols = Vec::new();
    for i in 0..gens {
        let d = match diag.get(i) {
            Some(x) if i < s.rank => x.to_i64().ok_or(Error::Overflow)?,
            _ => 0,
        };
        if d == 1 {
            continue;
        }
        factors.push(d);
        let dm = BigInt::from(d);
        to_rows.push(
            (0..gens).map(|j| narrow(s.u.get(i, j), Some(&dm))).collect::<Result<Vec<_>>>()?,
        );
        from_cols.push(
            (0..gens)
                .map(|j| narrow(s.u_inv.get(j, i), modulus.as_ref()))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(Normalized {
        module: FpModule::new(ring, factors)?,
        to_canonical: IntMatrix::from_rows(&to_rows, gens)?,
        from_canonical: IntMatrix::from_columns(gens, &from_cols),
    })
}

/// Normalizes `R/(d1) + ... + R/(dk)` for arbitrary orders.
pub(crate) fn normalize_diagonal(ring: Ring, orders: &[i64]) -> Result<Normalized> {
    let chain = orders.iter().all(|&d| d != 1)
        && orders.windows(2).all(|w| if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 });
    if chain {
        if let Ok(module) = FpModule::new(ring, orders.to_vec()) {
            let k = orders.len();
            return Ok(Normalized {
                module,
                to_canonical: IntMatrix::identity(k),
                from_canonical: IntMatrix::identity(k),
            });
        }
    }
    normalize(ring, orders.len(), &IntMatrix::diagonal(orders))
}

/// Relation columns of a module: one column `d e_i` per torsion factor.
fn relation_columns(m: &FpModule) -> IntMatrix {
    let cols: Vec<Vec<i64>> = m
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(i, &d)| {
            let mut c = vec![0; m.gens()];
            c[i] = d;
            c
        })
        .collect();
    IntMatrix::from_columns(m.gens(), &cols)
}

fn ring_mul(ring: Ring, a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    match ring {
        Ring::IntegersMod(n) => a.mul_mod(b, n),
        Ring::Integers => a.mul(b),
    }
}

/// A submodule `A <= M` with its inclusion and the quotient `M -> M/A`.
#[derive(Clone, Debug)]
pub struct SubquotientWitness {
    pub ambient: FpModule,
    pub inclusion: ModuleMap,
    pub quotient_map: ModuleMap,
    pub quotient: FpModule,
}

impl SubquotientWitness {
    pub fn sub(&self) -> &FpModule {
        self.inclusion.source()
    }
}

/// Quotient `M / <columns of gens>` and its projection.
pub fn quotient(m: &FpModule, gens: &IntMatrix) -> Result<(FpModule, ModuleMap)> {
    if gens.rows() != m.gens() {
        return Err(Error::Dimension("generator columns have wrong length".into()));
    }
    let rel = relation_columns(m).hstack(gens)?;
    let nz = normalize(m.ring(), m.gens(), &rel)?;
    let q = ModuleMap::new_unchecked(m.clone(), nz.module.clone(), nz.to_canonical);
    Ok((nz.module, q))
}

/// The submodule generated by the columns of `gens`.
pub fn submodule(m: &FpModule, gens: &IntMatrix) -> Result<SubquotientWitness> {
    if gens.rows() != m.gens() {
        return Err(Error::Dimension("generator columns have wrong length".into()));
    }
    let ring = m.ring();
    let s = gens.cols();
    let k = integer_kernel(&gens.hstack(&relation_columns(m))?)?;
    let top: Vec<usize> = (0..s).collect();
    let rel = k.select_rows(&top);
    let nz = normalize(ring, s, &rel)?;
    let incl_m = ring_mul(ring, gens, &nz.from_canonical)?;
    let inclusion = ModuleMap::new_unchecked(nz.module, m.clone(), incl_m);
    let (quot, quotient_map) = quotient(m, gens)?;
    Ok(SubquotientWitness { ambient: m.clone(), inclusion, quotient_map, quotient: quot })
}

/// `ker f` as a submodule of the source.
pub fn kernel(f: &ModuleMap) -> Result<SubquotientWitness> {
    let src = f.source();
    let rel = relation_columns(f.target());
    let k = integer_kernel(&f.matrix().hstack(&rel)?)?;
    let top: Vec<usize> = (0..src.gens()).collect();
    let mut gens = k.select_rows(&top);
    if let Some(n) = f.ring().modulus() {
        gens = gens.reduce_mod(n);
    }
    submodule(src, &gens)
}

/// `im f` as a submodule of the target.
pub fn image(f: &ModuleMap) -> Result<SubquotientWitness> {
    submodule(f.target(), f.matrix())
}

/// `coker f` and the projection from the target.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub quotient: FpModule,
    pub projection: ModuleMap,
}

pub fn cokernel(f: &ModuleMap) -> Result<Cokernel> {
    let (quotient, projection) = quotient(f.target(), f.matrix())?;
    Ok(Cokernel { quotient, projection })
}

/// `M1 + ... + Mk` with injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FpModule,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub fn direct_sum(ring: Ring, parts: &[FpModule]) -> Result<DirectSum> {
    for p in parts {
        if p.ring() != ring {
            return Err(Error::RingMismatch(format!("summand over {} in a sum over {ring}", p.ring())));
        }
    }
    let raw: Vec<i64> = parts.iter().flat_map(|p| p.factors().iter().copied()).collect();
    let nz = normalize_diagonal(ring, &raw)?;
    let mut injections = Vec::with_capacity(parts.len());
    let mut projections = Vec::with_capacity(parts.len());
    let mut off = 0;
    for p in parts {
        let idx: Vec<usize> = (off..off + p.gens()).collect();
        injections.push(ModuleMap::new_unchecked(
            p.clone(),
            nz.module.clone(),
            nz.to_canonical.select_cols(&idx),
        ));
        projections.push(ModuleMap::new_unchecked(
            nz.module.clone(),
            p.clone(),
            nz.from_canonical.select_rows(&idx),
        ));
        off += p.gens();
    }
    Ok(DirectSum { module: nz.module, injections, projections })
}

impl DirectSum {
    /// The map `X -> sum` with components `maps[i]: X -> M_i`.
    pub fn into_sum(&self, source: &FpModule, maps: &[Option<&ModuleMap>]) -> Result<ModuleMap> {
        let mut acc = ModuleMap::zero(source, &self.module);
        for (inj, m) in self.injections.iter().zip(maps) {
            if let Some(m) = m {
                acc = acc.add(&inj.compose(m)?)?;
            }
        }
        Ok(acc)
    }

    /// The map `sum -> Y` with components `maps[i]: M_i -> Y`.
    pub fn out_of_sum(&self, target: &FpModule, maps: &[Option<&ModuleMap>]) -> Result<ModuleMap> {
        let mut acc = ModuleMap::zero(&self.module, target);
        for (proj, m) in self.projections.iter().zip(maps) {
            if let Some(m) = m {
                acc = acc.add(&m.compose(proj)?)?;
            }
        }
        Ok(acc)
    }
}

/// Pushout of `alpha: S -> A` along a mono `iota: S -> B`:
/// `P = (A + B) / {(alpha(s), -iota(s))}`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: FpModule,
    /// `A -> P`; mono because `iota` is.
    pub alpha_leg: ModuleMap,
    /// `B -> P`.
    pub iota_leg: ModuleMap,
    pub sum: DirectSum,
    pub projection: ModuleMap,
    /// Columns generate the relation submodule of `A + B`.
    pub relations: IntMatrix,
}

pub fn pushout(alpha: &ModuleMap, iota: &ModuleMap) -> Result<Pushout> {
    if alpha.source() != iota.source() {
        return Err(Error::Dimension("pushout legs need a common source".into()));
    }
    if !iota.is_mono()? {
        return Err(Error::NotMono);
    }
    let ring = alpha.ring();
    let sum = direct_sum(ring, &[alpha.target().clone(), iota.target().clone()])?;
    let rel_map = sum.into_sum(alpha.source(), &[Some(alpha), Some(&iota.neg())])?;
    let relations = rel_map.matrix().clone();
    let (module, projection) = quotient(&sum.module, &relations)?;
    let alpha_leg = projection.compose(&sum.injections[0])?;
    let iota_leg = projection.compose(&sum.injections[1])?;
    Ok(Pushout { module, alpha_leg, iota_leg, sum, projection, relations })
}
