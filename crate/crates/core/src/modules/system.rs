//! Linear systems whose unknowns are module maps.
//!
//! An equation reads `sum_t coeff_t * left_t ∘ U_t ∘ right_t = rhs`. Each
//! unknown `U: P -> Q` is parametrized entrywise as in the Hom module, so
//! every solution is a well-defined map.

use super::{FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactalg::{gcd, narrow, solve_congruences, IntMatrix, Ring};

pub type UnknownId = usize;

#[derive(Clone, Copy, Debug)]
pub struct Term<'a> {
    pub coeff: i64,
    pub left: Option<&'a ModuleMap>,
    pub unknown: UnknownId,
    pub right: Option<&'a ModuleMap>,
}

impl<'a> Term<'a> {
    pub fn new(unknown: UnknownId) -> Self {
        Self { coeff: 1, left: None, unknown, right: None }
    }

    pub fn left(mut self, l: &'a ModuleMap) -> Self {
        self.left = Some(l);
        self
    }

    pub fn right(mut self, r: &'a ModuleMap) -> Self {
        self.right = Some(r);
        self
    }

    pub fn times(mut self, c: i64) -> Self {
        self.coeff = c;
        self
    }
}

#[derive(Clone, Debug)]
struct Unknown {
    source: FpModule,
    target: FpModule,
    offset: usize,
    cells: Vec<(usize, usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct MapSystem {
    ring: Ring,
    unknowns: Vec<Unknown>,
    nvars: usize,
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    moduli: Vec<i64>,
}

/// Canonical solution plus generators of the homogeneous solutions.
#[derive(Clone, Debug)]
pub struct SystemSolution {
    pub particular: Vec<ModuleMap>,
    pub kernel: Vec<Vec<ModuleMap>>,
}

pub(crate) fn cell_layout(m: &FpModule, n: &FpModule) -> Vec<(usize, usize, i64)> {
    let mut cells = Vec::new();
    for (i, &e) in n.factors().iter().enumerate() {
        for (j, &d) in m.factors().iter().enumerate() {
            let scale = match (e, d) {
                (0, 0) => 1,
                (0, _) => continue,
                (_, 0) => 1,
                _ => {
                    let g = gcd(d, e);
                    if g == 1 {
                        continue;
                    }
                    e / g
                }
            };
            cells.push((i, j, scale));
        }
    }
    cells
}

impl MapSystem {
    pub fn new(ring: Ring) -> Self {
        Self { ring, unknowns: Vec::new(), nvars: 0, rows: Vec::new(), rhs: Vec::new(), moduli: Vec::new() }
    }

    pub fn unknown(&mut self, source: &FpModule, target: &FpModule) -> UnknownId {
        let cells = cell_layout(source, target);
        let offset = self.nvars;
        self.nvars += cells.len();
        for r in &mut self.rows {
            r.resize(self.nvars, 0);
        }
        self.unknowns.push(Unknown { source: source.clone(), target: target.clone(), offset, cells });
        self.unknowns.len() - 1
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn equation(&mut self, terms: &[Term<'_>], rhs: &ModuleMap) -> Result<()> {
        let (p, q) = (rhs.source(), rhs.target());
        let base = self.rows.len();
        for r in 0..q.gens() {
            for c in 0..p.gens() {
                self.rows.push(vec![0; self.nvars]);
                self.rhs.push(rhs.matrix()[(r, c)]);
                self.moduli.push(q.factors()[r]);
            }
        }
        for t in terms {
            let u = self
                .unknowns
                .get(t.unknown)
                .ok_or_else(|| Error::Dimension(format!("no unknown {}", t.unknown)))?
                .clone();
            let lt = t.left.map_or(&u.target, |l| l.target());
            let rs = t.right.map_or(&u.source, |r| r.source());
            let lin = t.left.map_or(&u.target, |l| l.source());
            let rout = t.right.map_or(&u.source, |r| r.target());
            if lt != q || rs != p || lin != &u.target || rout != &u.source {
                return Err(Error::Dimension("term does not match the equation's shape".into()));
            }
            for &(i, j, scale) in &u.cells {
                let var = u.offset + cell_index(&u, i, j);
                for r in 0..q.gens() {
                    let lri = match t.left {
                        Some(l) => l.matrix()[(r, i)],
                        None => i64::from(r == i),
                    };
                    if lri == 0 {
                        continue;
                    }
                    for c in 0..p.gens() {
                        let rjc = match t.right {
                            Some(rm) => rm.matrix()[(j, c)],
                            None => i64::from(j == c),
                        };
                        if rjc == 0 {
                            continue;
                        }
                        let row = base + r * p.gens() + c;
                        let m = self.moduli[row];
                        let mut v = t.coeff as i128 * lri as i128 * scale as i128 * rjc as i128;
                        v += self.rows[row][var] as i128;
                        if m != 0 {
                            v = v.rem_euclid(m as i128);
                        }
                        self.rows[row][var] = narrow(v)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn decode(&self, x: &[i64]) -> Vec<ModuleMap> {
        self.unknowns
            .iter()
            .map(|u| {
                let mut mat = IntMatrix::zeros(u.target.gens(), u.source.gens());
                for (k, &(i, j, scale)) in u.cells.iter().enumerate() {
                    let e = u.target.factors()[i];
                    let v = scale as i128 * x[u.offset + k] as i128;
                    mat[(i, j)] = if e != 0 { v.rem_euclid(e as i128) as i64 } else { v as i64 };
                }
                ModuleMap::new_unchecked(u.source.clone(), u.target.clone(), mat)
            })
            .collect()
    }

    pub fn solve(&self) -> Result<Option<SystemSolution>> {
        let a = IntMatrix::from_rows(&self.rows, self.nvars)?;
        let b = IntMatrix::new(self.rhs.len(), 1, self.rhs.clone());
        let Some(sol) = solve_congruences(&a, &b, &self.moduli, self.ring)? else {
            return Ok(None);
        };
        let particular = self.decode(&sol.particular.column(0));
        let mut kernel: Vec<Vec<ModuleMap>> = Vec::new();
        for k in 0..sol.kernel.cols() {
            let maps = self.decode(&sol.kernel.column(k));
            if maps.iter().any(|m| !m.is_zero()) && !kernel.contains(&maps) {
                kernel.push(maps);
            }
        }
        Ok(Some(SystemSolution { particular, kernel }))
    }
}

fn cell_index(u: &Unknown, i: usize, j: usize) -> usize {
    u.cells.iter().position(|&(a, b, _)| a == i && b == j).expect("cell exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z4: Ring = Ring::IntegersMod(4);

    fn m(f: &[i64]) -> FpModule {
        FpModule::new(Z4, f.to_vec()).unwrap()
    }

    #[test]
    fn factor_through_multiplication_by_two() {
        // Find h: Z/4 -> Z/4 with 2h = 2 (i.e. two ∘ h = two).
        let z4 = m(&[4]);
        let two = ModuleMap::new(z4.clone(), z4.clone(), IntMatrix::new(1, 1, vec![2])).unwrap();
        let mut sys = MapSystem::new(Z4);
        let h = sys.unknown(&z4, &z4);
        sys.equation(&[Term::new(h).left(&two)], &two).unwrap();
        let sol = sys.solve().unwrap().unwrap();
        assert_eq!(sol.particular[0].matrix()[(0, 0)], 1);
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(sol.kernel[0][0].matrix()[(0, 0)], 2);
    }

    #[test]
    fn solutions_are_well_defined_maps() {
        // Lift id: Z/2 -> Z/2 through the projection Z/4 -> Z/2: impossible.
        let (z2, z4) = (m(&[2]), m(&[4]));
        let proj = ModuleMap::new(z4.clone(), z2.clone(), IntMatrix::new(1, 1, vec![1])).unwrap();
        let mut sys = MapSystem::new(Z4);
        let u = sys.unknown(&z2, &z4);
        sys.equation(&[Term::new(u).left(&proj)], &ModuleMap::identity(&z2)).unwrap();
        assert!(sys.solve().unwrap().is_none());
    }

    #[test]
    fn shape_errors() {
        let (z2, z4) = (m(&[2]), m(&[4]));
        let mut sys = MapSystem::new(Z4);
        let u = sys.unknown(&z2, &z4);
        assert!(sys.equation(&[Term::new(u)], &ModuleMap::identity(&z2)).is_err());
    }
}
