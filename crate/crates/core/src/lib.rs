pub mod character;
pub mod context;
pub mod cyclo;
pub mod error;
pub mod hecke;
pub mod integrate;
pub mod laurent;
pub mod padic;
pub mod scalar;
pub mod sl2;

pub use character::{AddChar, ExtChar, MultCharacter, Root};
pub use context::FieldContext;
pub use cyclo::{CycloField, Cyclotomic};
pub use laurent::LaurentPoly;
pub use padic::PadicNum;
pub use sl2::{CellDecomp, GroupElem, Subgroup, TorusElem};

/// Exact element of a cyclotomic field over `Q`.
pub type CycNum = Cyclotomic<num_rational::BigRational>;
/// Laurent polynomial in `X = q^(-s)` with cyclotomic coefficients.
pub type Laurent = LaurentPoly<CycNum>;
