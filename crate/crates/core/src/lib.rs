//! Exact-rational computation engine for multisymplectic observable
//! algebras on coordinate models.
//!
//! The crate builds, over a single coordinate patch with a closed
//! 1-nondegenerate form, the graded bracket algebra of Hamiltonian forms,
//! covariant Noether currents of a Lie algebra action, and the Koszul and
//! Chevalley-Eilenberg complexes whose homology computes the observables of
//! the reduced model. All arithmetic is exact over the rationals.

pub mod error;
pub mod exterior;
pub mod linalg;
pub mod mono;
pub mod par;
pub mod rat;

pub use error::{Error, Result};
pub use exterior::{
    contract, ext_d, lie_derivative, mv_wedge, poincare_primitive, vf_bracket, wedge, PolyForm,
    PolyMultivector,
};
pub use rat::Rat;

pub mod action;
pub mod model;
pub mod mstruct;
pub mod report;
pub mod spaces;

pub use model::{load_model, Model, ModelData};
pub use mstruct::HamiltonianPair;
pub mod observable;
