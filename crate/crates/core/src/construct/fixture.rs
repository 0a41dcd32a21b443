use crate::complexes::Complex;
use crate::exactalg::{IntMatrix, Ring};
use crate::modules::{FpModule, ModuleMap};

/// `0 -> Z/4 --2--> Z/4 -> 0` over `Z/4` in degrees 0 and 1.
///
/// Both components are self-injective, but the complex is not exact
/// (homology `Z/2` in each degree), so it is not an injective complex.
/// The classical counterexample needs an injective ring with a one-to-one
/// endomorphism that is not onto; over a finite ring no such map exists,
/// so this complex stands in for it.
pub fn fixture_injective_components_not_injective_complex() -> Complex {
    let ring = Ring::IntegersMod(4);
    let z4 = FpModule::new(ring, vec![4]).expect("Z/4");
    let d = ModuleMap::new(z4.clone(), z4.clone(), IntMatrix::new(1, 1, vec![2])).expect("multiplication by 2");
    Complex::new(ring, 0, vec![z4.clone(), z4], vec![d]).expect("d∘d = 0 in a two-term complex")
}
