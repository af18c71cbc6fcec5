pub mod boundary;
pub mod degeneration;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod orbitlab;
pub mod quad;
pub mod quadlattice;
pub mod scalar;
pub mod special;
pub mod thetaforms;
pub mod weilrep;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CoeffFn64 = thetaforms::CoeffFn<f64>;
pub type VVQExpansion64 = thetaforms::VVQExpansion<f64>;
pub type CuspContribution64 = boundary::CuspContribution<f64>;
pub type ResidueFit64 = orbitlab::ResidueFit<f64>;
pub type CMatrix64 = weilrep::CMatrix<f64>;
