//! The class `X` as a membership oracle, and the finite universes that
//! bound every "for all modules/complexes" quantifier.

mod class;
mod universe;

pub use class::XClass;
pub use universe::{
    enumerate_eps1, enumerate_epis, enumerate_modules, enumerate_monos, enumerate_submodules, Caps,
    ComplexUniverse, Eps1Universe, ModuleUniverse,
};
