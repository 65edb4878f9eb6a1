//! Finite-sum evaluation of the p-adic integrals: shell sums, Gauss sums,
//! Whittaker functionals, intertwining operators and local coefficients.

pub mod functionals;
pub mod induced;
pub mod quadrature;

pub use functionals::{
    factors_and_equations, intertwine, local_coefficient, whittaker_omega, Factors,
    LocalCoefficient, Weyl,
};
pub use induced::{gauss_sum, induced_eval, InducedSpace, InducedVec};
pub use quadrature::{principal_value, shell_integral, Basis, Mono, PrincipalValue};
