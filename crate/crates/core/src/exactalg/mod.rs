//! Exact integer and modular linear algebra: Smith form over `Z`, Howell
//! form over `Z/n`, and canonical linear-system solving.

mod howell;
mod matrix;
mod snf;
mod solve;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use howell::howell_form_mod;
pub(crate) use howell::normalizing_unit;
pub use matrix::IntMatrix;
pub(crate) use matrix::narrow;
pub use snf::{
    determinant, integer_kernel, smith_big, smith_normal_form, BigMatrix, BigSmith, Smith,
};
pub use solve::{solve_congruences, solve_linear, Solution};

/// The computable coefficient rings: `Z` and `Z/n` for `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    IntegersMod(i64),
}

impl Ring {
    pub fn modular(n: i64) -> Result<Ring> {
        if n < 2 {
            return Err(Error::UnsupportedRing(format!("modulus must be >= 2, got {n}")));
        }
        Ok(Ring::IntegersMod(n))
    }

    pub fn modulus(self) -> Option<i64> {
        match self {
            Ring::Integers => None,
            Ring::IntegersMod(n) => Some(n),
        }
    }

    /// The invariant factor of a free rank-one summand: `n` over `Z/n`,
    /// `0` over `Z`.
    pub fn free_factor(self) -> i64 {
        self.modulus().unwrap_or(0)
    }

    pub fn reduce(self, x: i64) -> i64 {
        match self {
            Ring::Integers => x,
            Ring::IntegersMod(n) => x.rem_euclid(n),
        }
    }

    pub fn require_modular(self, what: &str) -> Result<i64> {
        self.modulus()
            .ok_or_else(|| Error::UnsupportedRing(format!("{what} needs a ring Z/n")))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::IntegersMod(n) => write!(f, "Z/{n}"),
        }
    }
}

/// Howell form of a matrix over `Z/n`. Over `Z` use the Smith form instead.
pub fn howell_form(a: &IntMatrix, ring: Ring) -> Result<IntMatrix> {
    match ring {
        Ring::IntegersMod(n) => Ok(howell_form_mod(a, n)),
        Ring::Integers => Err(Error::UnsupportedRing(
            "Howell form is defined over Z/n; use smith_normal_form over Z".into(),
        )),
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}
