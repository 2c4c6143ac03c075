//! Root systems, dominance and imaginary cones of Coxeter groups given by a
//! Coxeter datum.
//!
//! Everything is generic over [`Scalar`]: `f64` and `f32` compare under a
//! tolerance, [`Rational`] is exact and serves as the test oracle whenever
//! every form value is rational.
//!
//! ```
//! use coxdom::{catalog, dominance, ExactStore};
//!
//! let mut store = ExactStore::new(catalog::affine_a2().unwrap());
//! let dn = dominance::enumerate_dn(&mut store, 0).unwrap();
//! assert_eq!(dn.set(0).len(), 6);
//! ```

pub mod catalog;
pub mod chain;
pub mod cone;
pub mod datum;
pub mod dihedral;
pub mod dominance;
pub mod element;
pub mod error;
pub mod height;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod store;

pub use datum::{load_datum, BondOrder, BondSpec, CoxeterDatum};
pub use element::{reduce_word, GroupElement};
pub use error::{Error, Result};
pub use scalar::{Rational, Scalar, Tolerance};
pub use store::{Root, RootId, RootStore, SignedRoot};

pub type Datum = CoxeterDatum<f64>;
pub type Datum32 = CoxeterDatum<f32>;
pub type ExactDatum = CoxeterDatum<Rational>;
pub type Store = RootStore<f64>;
pub type ExactStore = RootStore<Rational>;
