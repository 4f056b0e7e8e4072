//! The coefficient-ring abstraction shared by polynomials and truncated series.
//!
//! Every ring here is a ℚ-algebra, so scaling by a rational is always defined.
//! Elements carry enough shape (for example the arity of a multivariate
//! polynomial) to build their own zero and one, which is why the constructors
//! are `*_like` methods instead of associated constants.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::rational::Rational;

pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn scale(&self, r: &Rational) -> Self;
    fn constant_like(&self, r: &Rational) -> Self {
        self.one_like().scale(r)
    }

    /// Multiplicative inverse when `self` is a nonzero rational constant.
    fn unit_inverse(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn unit_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
