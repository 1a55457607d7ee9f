//! Finite reduced products, filters on finite index sets, formal relations
//! and strongly independent matrices.

pub mod check;
pub mod corpus;
pub mod eklab;
pub mod gf;
pub mod redprod;
pub mod relcheck;
pub mod setfam;
pub mod suites;
pub mod ualg;

pub use check::Check;
