//! Exact computations around level-one affine vertex algebras of the Deligne
//! exceptional series: root systems and Weyl groups, Chevalley bases and
//! adjoint trace identities, the `(c, d)` classification, q-series and string
//! functions, lattice invariants, and Virasoro/affine mode calculus.

pub mod affine_fock;
pub mod classification;
pub mod error;
pub mod lattice_invariants;
pub mod lie_algebra;
pub mod linalg;
pub mod q_series;
pub mod rational;
pub mod root_system;
pub mod runner;
pub mod virasoro;

pub use error::{Error, Result};
pub use rational::Q;
