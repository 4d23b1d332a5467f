//! Exact characteristic numbers of closed even-dimensional manifolds from
//! the fixed-point data of singular Riemannian flows.
//!
//! Characteristic numbers are computed as sums of residues over the
//! components of the fixed-point set, with all arithmetic in exact rationals.
//! The crate also carries the supporting linear algebra for linear flows:
//! skeigen decomposition of skew-symmetric matrices, commutant block
//! structure, and closure dimensions of Kronecker-type flows.

pub mod charforms;
pub mod error;
pub mod exactnum;
pub mod kronecker;
pub mod linalg;
pub mod localize;
pub mod polyring;

pub use error::{Error, Result};
pub use exactnum::Rat;
