pub mod error;
pub mod exactla;
pub mod ilp;
pub mod instances;
pub mod lp;
pub mod measures;
pub mod petersen;
pub mod polytopish;

pub use error::{Error, Result};
pub use exactla::{Matrix, Rational, Vector};
