//! Power series truncated at a fixed order N over a [`Ring`].
//!
//! A series of order N stores exactly the coefficients of t⁰..t^N. Binary
//! operations require equal orders and never produce coefficients beyond N.

use crate::error::{Error, Result};
use crate::rational::{factorial, int, Rational};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R = Rational> {
    coeffs: Vec<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// Pads with zeros or truncates so that the result has order `order`.
    /// `coeffs` must be non-empty so the ring shape is known.
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        let zero = coeffs[0].zero_like();
        coeffs.resize(order + 1, zero);
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    fn zero_elem(&self) -> R {
        self.coeffs[0].zero_like()
    }

    pub fn one_like(&self) -> Self {
        Self::new(vec![self.coeffs[0].one_like()], self.order())
    }

    /// The series `t` in the same ring and order.
    pub fn identity_like(&self) -> Self {
        let mut c = vec![self.zero_elem(); self.order() + 1];
        if self.order() >= 1 {
            c[1] = self.coeffs[0].one_like();
        }
        TruncatedSeries { coeffs: c }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![self.zero_elem(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `self / other`; the divisor's constant term must be a rational unit.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let inv0 = other.coeffs[0].unit_inverse().ok_or(Error::NonUnitConstant)?;
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !other.coeffs[j].is_zero() {
                    acc = acc.sub(&other.coeffs[j].mul(&out[k - j]));
                }
            }
            out.push(acc.mul(&inv0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn recip(&self) -> Result<Self> {
        self.one_like().div(self)
    }

    /// outer(inner); `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant);
        }
        let mut acc = Self::new(vec![self.coeffs[self.order()].clone()], self.order());
        for c in self.coeffs[..self.order()].iter().rev() {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    /// Compositional inverse by Lagrange inversion:
    /// [tᵏ] g = (1/k) [s^{k-1}] (s / f(s))ᵏ.
    pub fn reversion(&self) -> Result<Self> {
        let n = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonZeroConstant);
        }
        if n == 0 {
            return Ok(self.clone());
        }
        self.coeffs[1].unit_inverse().ok_or(Error::NonUnitLinear)?;
        // f(s)/s has order n-1; h = s/f(s).
        let shifted = TruncatedSeries { coeffs: self.coeffs[1..].to_vec() };
        let h = shifted.recip()?;
        let mut out = vec![self.zero_elem(); n + 1];
        let mut power = h.one_like();
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            power = power.mul_unchecked(&h);
            *slot = power.coeffs[k - 1].scale(&int(k as i64).recip());
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// k!·[tᵏ] for every k.
    pub fn egf_coefficients(&self) -> Vec<R> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&Rational::from_integer(factorial(k as u32))))
            .collect()
    }
}

impl TruncatedSeries<Rational> {
    pub fn from_rationals(coeffs: Vec<Rational>, order: usize) -> Self {
        if coeffs.is_empty() {
            return Self::new(vec![int(0)], order);
        }
        Self::new(coeffs, order)
    }

    /// Σ tᵏ/k! shifted by `offset` factorial index: coefficient of tᵏ is
    /// 1/(k+offset)!. `offset = 0` is eᵗ, `offset = 1` is (eᵗ-1)/t.
    pub fn exp_like(order: usize, offset: u32) -> Self {
        let coeffs = (0..=order)
            .map(|k| Rational::from_integer(factorial(k as u32 + offset)).recip())
            .collect();
        Self::new(coeffs, order)
    }

    /// eᵗ - 1
    pub fn exp_minus_one(order: usize) -> Self {
        let mut s = Self::exp_like(order, 0);
        s.coeffs[0] = int(0);
        s
    }

    /// log(1 + s)
    pub fn log_one_plus(order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|k| match k {
                0 => int(0),
                _ => {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    int(sign) / int(k as i64)
                }
            })
            .collect();
        Self::new(coeffs, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::MultiPoly;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn s(c: &[i64], order: usize) -> TruncatedSeries {
        TruncatedSeries::new(c.iter().map(|&x| int(x)).collect(), order)
    }

    #[test]
    fn products() {
        assert_eq!(s(&[1, 1], 2).mul(&s(&[1, -1], 2)).unwrap(), s(&[1, 0, -1], 2));
        let a = s(&[3, 1, 4, 1], 3);
        assert_eq!(a.mul(&a.one_like()).unwrap(), a);
        let e = TruncatedSeries::exp_like(2, 0);
        assert_eq!(e.mul(&e).unwrap().egf_coefficients()[..3], [int(1), int(2), int(4)]);
        // Σ tᵏ/k! squared: raw coefficients 1, 2, 2
        assert_eq!(e.mul(&e).unwrap().coeffs(), &[int(1), int(2), int(2)]);
        assert!(matches!(a.mul(&s(&[1], 2)), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn division() {
        assert_eq!(s(&[1], 3).div(&s(&[1, -1], 3)).unwrap(), s(&[1, 1, 1, 1], 3));
        let a = s(&[2, 5, -1], 2);
        assert_eq!(a.div(&a).unwrap(), a.one_like());
        let b = TruncatedSeries::exp_like(4, 1).recip().unwrap();
        assert_eq!(b.coeffs(), &[int(1), ratio(-1, 2), ratio(1, 12), int(0), ratio(-1, 720)]);
        assert_eq!(s(&[1], 2).div(&s(&[0, 1], 2)), Err(Error::NonUnitConstant));
    }

    #[test]
    fn composition() {
        let f = s(&[0, 2, 3, -1], 3);
        let t = f.identity_like();
        assert_eq!(t.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&t).unwrap(), f);
        let log = TruncatedSeries::log_one_plus(5);
        let expm1 = TruncatedSeries::exp_minus_one(5);
        assert_eq!(log.compose(&expm1).unwrap(), log.identity_like());
        assert_eq!(f.compose(&s(&[1, 1], 3)), Err(Error::NonZeroConstant));
    }

    #[test]
    fn reversion_examples() {
        let t = s(&[0, 1], 4);
        assert_eq!(t.reversion().unwrap(), t);
        let f = TruncatedSeries::new(vec![int(0), int(1), ratio(1, 2), ratio(1, 3), ratio(1, 4)], 4);
        let g = f.reversion().unwrap();
        assert_eq!(g.coeffs()[1..4], [int(1), ratio(-1, 2), ratio(1, 6)]);
        assert_eq!(s(&[0, 0, 1], 2).reversion(), Err(Error::NonUnitLinear));
        assert_eq!(s(&[1, 1], 2).reversion(), Err(Error::NonZeroConstant));
    }

    #[test]
    fn symbolic_reversion() {
        let m = 2;
        let c1 = MultiPoly::var(1, m);
        let c2 = MultiPoly::var(2, m);
        let zero = MultiPoly::zero(m);
        let one = zero.one_like();
        let f = TruncatedSeries::new(
            vec![zero.clone(), one.clone(), c1.scale(&ratio(1, 2)), c2.scale(&ratio(1, 3))],
            3,
        );
        let g = f.reversion().unwrap();
        assert_eq!(g.coeff(1), &one);
        assert_eq!(g.coeff(2), &c1.scale(&ratio(-1, 2)));
        let expected = c1.mul(&c1).scale(&ratio(3, 6)).sub(&c2.scale(&ratio(2, 6)));
        assert_eq!(g.coeff(3), &expected);
        assert_eq!(f.compose(&g).unwrap(), f.identity_like());
    }

    fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-9i64..9, 1i64..6), order - 1).prop_map(move |v| {
            let mut c = vec![int(0), int(1)];
            c.extend(v.into_iter().map(|(n, d)| ratio(n, d)));
            TruncatedSeries::new(c, order)
        })
    }

    fn any_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec((-9i64..9, 1i64..6), order + 1)
            .prop_map(move |v| TruncatedSeries::new(v.into_iter().map(|(n, d)| ratio(n, d)).collect(), order))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reversion_round_trip(f in (2usize..=12).prop_flat_map(unit_series)) {
            let g = f.reversion().unwrap();
            prop_assert_eq!(f.compose(&g).unwrap(), f.identity_like());
            prop_assert_eq!(g.compose(&f).unwrap(), f.identity_like());
        }

        #[test]
        fn mul_commutes_and_associates(a in any_series(6), b in any_series(6), c in any_series(6)) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        }
    }
}
