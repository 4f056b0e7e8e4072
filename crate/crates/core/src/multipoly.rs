//! Sparse multivariate polynomials in c₁..c_m over ℚ.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};
use crate::ring::Ring;

/// Exponent vector. The derived ordering compares total degree first and then
/// the exponents lexicographically, which is graded-lex with c₁ > c₂ > ….
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { degree: exps.iter().sum(), exps }
    }

    pub fn one(arity: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; arity] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.degree
    }

    /// Degree with cᵢ counted as weight i.
    pub fn weight(&self) -> u32 {
        self.exps.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// Zero polynomials compare equal whatever their arity.
impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.arity == other.arity || self.terms.is_empty())
    }
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(r: Rational, arity: usize) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), r);
        p
    }

    /// The variable cᵢ (1-based).
    pub fn var(i: usize, arity: usize) -> Self {
        assert!(i >= 1 && i <= arity, "variable c{i} outside arity {arity}");
        let mut exps = vec![0; arity];
        exps[i - 1] = 1;
        let mut p = Self::zero(arity);
        p.add_term(Monomial::new(exps), Rational::one());
        p
    }

    /// Builds from (exponents, coefficient) pairs; zero coefficients dropped.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (exps, c) in terms {
            assert_eq!(exps.len(), arity, "exponent vector arity");
            p.add_term(Monomial::new(exps), c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.arity))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(self.one_like(), |acc, _| Ring::mul(&acc, self))
    }

    /// Substitutes rational values for c₁..c_m.
    pub fn specialize(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.arity, "specialization arity");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exps.iter().zip(values).fold(c.clone(), |acc, (&e, v)| {
                    if e == 0 {
                        acc
                    } else {
                        acc * num_traits::pow(v.clone(), e as usize)
                    }
                })
            })
            .sum()
    }

    /// Re-embeds into a ring with at least as many variables.
    pub fn with_arity(&self, arity: usize) -> Self {
        assert!(arity >= self.arity, "cannot drop variables");
        let mut p = Self::zero(arity);
        for (m, c) in &self.terms {
            let mut exps = m.exps.clone();
            exps.resize(arity, 0);
            p.add_term(Monomial::new(exps), c.clone());
        }
        p
    }

    /// Drops trailing variables, which must not occur.
    pub fn restrict_arity(&self, arity: usize) -> Self {
        assert!(arity <= self.arity, "cannot add variables");
        let mut p = Self::zero(arity);
        for (m, c) in &self.terms {
            assert!(m.exps[arity..].iter().all(|&e| e == 0), "dropped variable occurs");
            p.add_term(Monomial::new(m.exps[..arity].to_vec()), c.clone());
        }
        p
    }

    /// Applies `f` to every coefficient; zero results are dropped.
    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let mut p = Self::zero(self.arity);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(rational::is_integer)
    }

    /// Every term has the same weight (cᵢ weighing i).
    pub fn is_weighted_homogeneous(&self, weight: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == weight)
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.arity, other.arity, "multivariate arity mismatch");
    }
}

impl Ring for MultiPoly {
    fn zero_like(&self) -> Self {
        Self::zero(self.arity)
    }

    fn one_like(&self) -> Self {
        Self::constant(Rational::one(), self.arity)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = Self::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        if Zero::is_zero(r) {
            return self.zero_like();
        }
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect(),
        }
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        (m.degree == 0).then(|| Self::constant(c.recip(), self.arity))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let vars: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("c{}", i + 1) } else { format!("c{}^{}", i + 1, e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if One::is_one(&a) {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    exponents: Vec<u32>,
    #[serde(serialize_with = "rational::serialize_rational", deserialize_with = "rational::deserialize_rational")]
    coeff: Rational,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| WireTerm { exponents: m.exps.clone(), coeff: c.clone() }))
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = Vec::<WireTerm>::deserialize(d)?;
        let arity = wire.first().map_or(0, |t| t.exponents.len());
        if wire.iter().any(|t| t.exponents.len() != arity) {
            return Err(serde::de::Error::custom("inconsistent exponent arity"));
        }
        Ok(MultiPoly::from_terms(arity, wire.into_iter().map(|t| (t.exponents, t.coeff))))
    }
}
