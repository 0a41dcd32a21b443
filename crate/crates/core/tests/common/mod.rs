#![allow(dead_code)]

use homkit::complexes::{chain_maps, ChainMap, Complex};
use homkit::exactalg::Ring;
use homkit::modules::{cokernel, hom_module, FpModule, ModuleMap};
use homkit::xclass::{Caps, ModuleUniverse};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn modules_upto(ring: Ring, size: u64) -> Vec<FpModule> {
    ModuleUniverse::new(ring, size, &Caps::default()).unwrap().members()
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

pub fn random_element(rng: &mut ChaCha8Rng, m: &FpModule) -> Vec<i64> {
    match m.order() {
        Some(o) => m.element_at(rng.gen_range(0..o)),
        None => (0..m.gens()).map(|_| rng.gen_range(-3..=3)).collect(),
    }
}

pub fn random_map(rng: &mut ChaCha8Rng, a: &FpModule, b: &FpModule) -> ModuleMap {
    let h = hom_module(a, b).unwrap();
    h.decode(&random_element(rng, &h.module)).unwrap()
}

/// Each differential factors through the cokernel of the previous one, so
/// `d∘d = 0` by construction.
pub fn random_complex(rng: &mut ChaCha8Rng, lo: i32, mods: &[FpModule]) -> Complex {
    let ring = mods[0].ring();
    let mut diffs: Vec<ModuleMap> = Vec::new();
    for w in mods.windows(2) {
        let d = match diffs.last() {
            None => random_map(rng, &w[0], &w[1]),
            Some(prev) => {
                let q = cokernel(prev).unwrap();
                random_map(rng, &q.quotient, &w[1]).compose(&q.projection).unwrap()
            }
        };
        diffs.push(d);
    }
    Complex::checked(ring, lo, mods.to_vec(), diffs).unwrap()
}

/// A complex in degrees `lo..lo + width` with components drawn from `pool`.
pub fn random_complex_in(rng: &mut ChaCha8Rng, lo: i32, width: usize, pool: &[FpModule]) -> Complex {
    let mods: Vec<FpModule> = (0..width).map(|_| pick(rng, pool).clone()).collect();
    random_complex(rng, lo, &mods)
}

pub fn random_chain_map(rng: &mut ChaCha8Rng, x: &Complex, y: &Complex) -> ChainMap {
    let s = chain_maps(x, y).unwrap();
    s.decode(&random_element(rng, &s.module)).unwrap()
}
