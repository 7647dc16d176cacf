//! Exact arithmetic for twisted K3 surfaces of degree 2: quadratic-field
//! scalars, integral lattices, the Mukai lattice with B-field twists, and
//! the central charges and walls of the stability conditions `sigma_m`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod intmat;
pub mod lattice;
pub mod mukai;
pub mod scalar;
pub mod scenario;
pub mod stability;

pub use error::{Error, Result};
pub use lattice::{Gram, Lattice, Representation, Signature, StandardLattice};
pub use mukai::{BField, MukaiVector};
pub use scalar::{phase_cmp, ComplexQE, Phase, QuadExt, Rational};
pub use scenario::{build_default_scenario, Scenario, ScenarioSpec, TwistProfile};
pub use stability::ChargeParams;
