//! Exact continued fractions, certified circle rotations and the
//! box-dimension machinery for alpha-beta orbits.
//!
//! Everything that is certified is computed in exact rational arithmetic.
//! Logarithms appear only as `f64` report values.

pub mod certify;
pub mod cf;
pub mod convergent;
pub mod dimension;
pub mod dioph;
pub mod error;
pub mod interval;
pub mod orbit;
pub mod scalar;
pub mod wire;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use cf::{CfKind, CfNumber, GrowthRule, DEFAULT_DEPTH_CAP};
pub use dimension::{
    box_count, embed_threshold, extract_separated_subset, theorem_bound, upper_box_dim_estimate,
    BoundParams, BoxCountSample, SeparationParams, SeparationWitness, WindowPick,
};
pub use dioph::{make_number, DiophantineSpec, Tau};
pub use error::{Error, Result};
pub use interval::{CircleArc, Interval};
pub use orbit::{gen_omega, OmegaWord, Strategy};

pub type Rational = BigRational;
pub type CertifiedValue = Interval<BigRational>;
pub type Convergent = convergent::ConvergentOf<BigInt>;
