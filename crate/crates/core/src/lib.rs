pub mod carlitz;
pub mod drinfeld;
pub mod error;
pub mod field;
pub mod frac;
pub mod laurent;
pub mod lvalue;
pub mod matrix;
pub mod motive;
pub mod poly;
pub mod report;
pub mod residue;
pub mod sparse;
pub mod taylor;
pub mod tmodule;

pub use error::{Error, Result};
pub use field::{lucas_binomial, PrimeField};
pub use frac::Frac;
pub use laurent::LaurentSeries;
pub use poly::{monic_irreducibles, PolyA};
pub use sparse::SparsePoly;
pub use taylor::{taylor_of_fraction, TPoly, ThetaTaylor};
