//! Exact and numerical machinery for Appell-type polynomial sequences, delta
//! rational functions (polylogarithms of integer order), Lipschitz summation
//! and universal Bernoulli congruences.

pub mod appell;
pub mod error;
pub mod formal_group;
pub mod lipschitz;
pub mod multipoly;
pub mod numeric;
pub mod par;
pub mod poly;
pub mod polylog;
pub mod rational;
pub mod report;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
pub use multipoly::{Monomial, MultiPoly};
pub use poly::Polynomial;
pub use rational::Rational;
pub use ring::Ring;
pub use series::TruncatedSeries;
