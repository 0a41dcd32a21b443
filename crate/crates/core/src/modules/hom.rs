use super::algebra::normalize_diagonal;
use super::{FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactalg::{gcd, IntMatrix, Ring};

/// `Hom(M, N)` as a module, with a codec between its elements and maps.
///
/// Entry `(i, j)` of a map is `scale_ij * c_ij` where `c_ij` ranges over a
/// cyclic group of order `gcd(d_j, e_i)`; those cyclic groups are the raw
/// generators, then normalized.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: FpModule,
    pub target: FpModule,
    pub module: FpModule,
    cells: Vec<Cell>,
    to_canonical: IntMatrix,
    from_canonical: IntMatrix,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    row: usize,
    col: usize,
    scale: i64,
}

pub fn hom_module(m: &FpModule, n: &FpModule) -> Result<HomSpace> {
    m.require_same_ring(n)?;
    let mut cells = Vec::new();
    let mut orders = Vec::new();
    for (i, &e) in n.factors().iter().enumerate() {
        for (j, &d) in m.factors().iter().enumerate() {
            let (scale, order) = match (e, d) {
                (0, 0) => (1, 0),
                (0, _) => continue,
                (_, 0) => (1, e),
                _ => {
                    let g = gcd(d, e);
                    (e / g, g)
                }
            };
            if order == 1 {
                continue;
            }
            cells.push(Cell { row: i, col: j, scale });
            orders.push(order);
        }
    }
    let nz = normalize_diagonal(m.ring(), &orders)?;
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        module: nz.module,
        cells,
        to_canonical: nz.to_canonical,
        from_canonical: nz.from_canonical,
    })
}

impl HomSpace {
    pub fn ring(&self) -> Ring {
        self.source.ring()
    }

    pub fn encode(&self, f: &ModuleMap) -> Result<Vec<i64>> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(Error::Dimension("map does not belong to this Hom module".into()));
        }
        let raw: Vec<i64> =
            self.cells.iter().map(|c| f.matrix()[(c.row, c.col)] / c.scale).collect();
        let mut x = self.to_canonical.mul_vec(&raw)?;
        if let Some(n) = self.ring().modulus() {
            x.iter_mut().for_each(|v| *v = v.rem_euclid(n));
        }
        self.module.reduce(&mut x);
        Ok(x)
    }

    pub fn decode(&self, x: &[i64]) -> Result<ModuleMap> {
        if x.len() != self.module.gens() {
            return Err(Error::Dimension("element has wrong length".into()));
        }
        let mut raw = self.from_canonical.mul_vec(x)?;
        if let Some(n) = self.ring().modulus() {
            raw.iter_mut().for_each(|v| *v = v.rem_euclid(n));
        }
        let mut mat = IntMatrix::zeros(self.target.gens(), self.source.gens());
        for (c, &r) in self.cells.iter().zip(&raw) {
            mat[(c.row, c.col)] =
                crate::exactalg::narrow(c.scale as i128 * r as i128)?;
        }
        Ok(ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), mat))
    }

    /// The maps corresponding to the canonical generators.
    pub fn generators(&self) -> Result<Vec<ModuleMap>> {
        (0..self.module.gens())
            .map(|k| {
                let mut e = vec![0; self.module.gens()];
                e[k] = 1;
                self.decode(&e)
            })
            .collect()
    }

    /// Every map `M -> N`, in element order of the Hom module.
    pub fn maps(&self) -> Result<impl Iterator<Item = ModuleMap> + '_> {
        Ok(self.module.elements()?.map(move |e| self.decode(&e).expect("decodable element")))
    }

    /// Number of maps, if finite and representable.
    pub fn count(&self) -> Option<u64> {
        self.module.order()
    }
}
