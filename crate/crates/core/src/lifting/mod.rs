//! Universe-bounded checkers for relative injectivity and projectivity,
//! returning certificates or the first counterexample in enumeration order.

mod checks;
mod engine;
mod families;
mod verdict;

pub use checks::{
    brute_homology_order, dg_x_injective, dg_x_projective, eps1_perp_homotopy, exhaustive_null_homotopy,
    hom_exactness, injective_by_ext, null_map_property, summand_retraction, x_injective_complex,
    x_injective_module, x_injective_module_with, x_projective_complex, x_projective_module, Direction, HomSide,
};
pub use families::{ComplexFamily, ModuleFamily};
pub use verdict::{Evidence, Status, Verdict};
