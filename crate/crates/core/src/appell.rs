//! Appell sequences generated by t·e^{xt} / ((eᵗ − 1)·g(t)).
//!
//! With A(t) = t/((eᵗ−1)g(t)) the sequence is A_n(x) = n!·[tⁿ] A(t)e^{xt}, and
//! the boundary jumps φ_j = A_j(1) − A_j(0) satisfy Σ φ_j t^j/j! = A(t)(eᵗ−1).

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{powi, two_pi_i};
use crate::poly::Polynomial;
use crate::rational::{self, binomial, factorial, int, Rational};
use crate::series::TruncatedSeries;

/// B₀..B_n.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    TruncatedSeries::exp_like(n, 1)
        .recip()
        .expect("(e^t-1)/t has unit constant term")
        .egf_coefficients()
}

pub fn bernoulli_poly(n: usize) -> Polynomial {
    convolve(&bernoulli_numbers(n), n)
}

/// Σ_k C(n,k)·a_k·x^{n−k}
fn convolve(numbers: &[Rational], n: usize) -> Polynomial {
    let coeffs = (0..=n)
        .map(|d| Rational::from_integer(binomial(n as u32, d as u32)) * &numbers[n - d])
        .collect();
    Polynomial::new(coeffs)
}

/// The denominator factor g of the generating function, with g(0) = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct AppellDescriptor {
    label: String,
    g: TruncatedSeries,
    max_degree: usize,
}

#[derive(Serialize, Deserialize)]
struct DescriptorFile {
    label: String,
    #[serde(serialize_with = "rational::serialize_rationals", deserialize_with = "rational::deserialize_rationals")]
    g_coefficients: Vec<Rational>,
    max_degree: usize,
}

pub const BUILTIN_LABELS: [&str; 3] = ["bernoulli", "a-seq", "b-seq"];

/// Degree bound for built-in descriptors when none is requested.
pub const DEFAULT_MAX_DEGREE: usize = 40;

impl AppellDescriptor {
    /// Taylor coefficients of g beyond the listed ones are zero.
    pub fn new(label: impl Into<String>, g_coefficients: Vec<Rational>, max_degree: usize) -> Result<Self> {
        let label = label.into();
        if g_coefficients.first() != Some(&Rational::one()) {
            return Err(Error::InvalidDescriptor(format!("{label}: g(0) must be 1")));
        }
        let order = (max_degree + 1).max(g_coefficients.len() - 1);
        Ok(AppellDescriptor { label, g: TruncatedSeries::from_rationals(g_coefficients, order), max_degree })
    }

    pub fn builtin(label: &str, max_degree: usize) -> Result<Self> {
        let order = max_degree + 1;
        let g: Vec<Rational> = match label {
            "bernoulli" => vec![int(1)],
            // sin t / t
            "a-seq" => (0..=order)
                .map(|k| match k % 2 {
                    0 => signed_inv_factorial(k / 2, k as u32 + 1),
                    _ => int(0),
                })
                .collect(),
            // cos t
            "b-seq" => (0..=order)
                .map(|k| match k % 2 {
                    0 => signed_inv_factorial(k / 2, k as u32),
                    _ => int(0),
                })
                .collect(),
            _ => return Err(Error::InvalidDescriptor(format!("unknown descriptor label {label:?}"))),
        };
        Self::new(label, g, max_degree)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let f: DescriptorFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(f.label, f.g_coefficients, f.max_degree)
    }

    /// A registry file holds one descriptor object or an array of them.
    pub fn registry_from_json(json: &str) -> Result<Vec<Self>> {
        let value: serde_json::Value = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let items = match value {
            serde_json::Value::Array(items) => items,
            other => vec![other],
        };
        items
            .into_iter()
            .map(|v| {
                let f: DescriptorFile = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
                Self::new(f.label, f.g_coefficients, f.max_degree)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let f = DescriptorFile {
            label: self.label.clone(),
            g_coefficients: self.g.coeffs().to_vec(),
            max_degree: self.max_degree,
        };
        serde_json::to_string(&f).expect("descriptor serializes")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn sequence(&self) -> Result<AppellSequence> {
        AppellSequence::from_descriptor(self)
    }
}

fn signed_inv_factorial(half: usize, f: u32) -> Rational {
    let r = Rational::from_integer(factorial(f)).recip();
    if half.is_multiple_of(2) {
        r
    } else {
        -r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    /// φ_j = 0 for every even j.
    EvenVanishing,
    /// φ_j = 0 for every odd j.
    OddVanishing,
    Neither,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::EvenVanishing => "even-vanishing",
            Parity::OddVanishing => "odd-vanishing",
            Parity::Neither => "neither",
        })
    }
}

/// φ₁..φ_n with the parity class read off the values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiVector {
    #[serde(serialize_with = "rational::serialize_rationals")]
    pub values: Vec<Rational>,
    pub parity: Parity,
}

impl PhiVector {
    pub fn new(values: Vec<Rational>) -> Self {
        let vanish = |rem: usize| values.iter().enumerate().all(|(i, v)| (i + 1) % 2 != rem || v.is_zero());
        let parity = if vanish(0) {
            Parity::EvenVanishing
        } else if vanish(1) {
            Parity::OddVanishing
        } else {
            Parity::Neither
        };
        PhiVector { values, parity }
    }

    /// φ_j, 1-based; zero past the stored range.
    pub fn get(&self, j: usize) -> Rational {
        assert!(j >= 1);
        self.values.get(j - 1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// c_k = ∫₀¹ A_n(t) e^{−2πikt} dt for k ≠ 0, in the closed form
/// Σ_j w_j·(2πik)^{−(n+1−j)} with exact weights w_j = −n!·φ_j/j!.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficient {
    pub n: usize,
    pub k: i64,
    /// w_1..w_n
    pub weights: Vec<Rational>,
    pub value: Complex64,
}

impl fmt::Display for FourierCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({w})/(2πi·{})^{}", self.k, self.n - i)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact data of one Appell sequence up to a fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct AppellSequence {
    label: String,
    /// A_0(0)..A_N(0)
    numbers: Vec<Rational>,
    phi: Vec<Rational>,
}

impl AppellSequence {
    /// Computes φ both from A_j(1) − A_j(0) and from t/g(t), and fails if
    /// the two disagree.
    pub fn from_descriptor(d: &AppellDescriptor) -> Result<Self> {
        let n = d.max_degree;
        let g = d.g.truncate(n);
        let denom = TruncatedSeries::exp_like(n, 1).mul(&g)?;
        let numbers = denom.recip()?.egf_coefficients();
        let t = g.identity_like();
        let via_g: Vec<Rational> = t.div(&g)?.egf_coefficients().into_iter().skip(1).collect();
        let seq = AppellSequence { label: d.label.clone(), phi: via_g, numbers };
        let direct = seq.phi_direct(n);
        if direct != seq.phi {
            let j = direct.iter().zip(&seq.phi).position(|(a, b)| a != b).unwrap_or(0) + 1;
            return Err(Error::Inconsistent(format!(
                "{}: phi_{j} is {} directly but {} from t/g(t)",
                d.label,
                direct[j - 1],
                seq.phi[j - 1]
            )));
        }
        Ok(seq)
    }

    /// The sequence with jumps φ₁..φ_N, i.e. generating function Φ(t)/(eᵗ−1)
    /// with Φ = Σ φ_j t^j/j!. Unlike descriptors this allows φ₁ = 0.
    pub fn from_phi(label: impl Into<String>, phi: Vec<Rational>) -> Result<Self> {
        let n = phi.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty phi vector".into()));
        }
        let over_t: Vec<Rational> = phi
            .iter()
            .enumerate()
            .map(|(i, p)| p / Rational::from_integer(factorial(i as u32 + 1)))
            .collect();
        let over_t = TruncatedSeries::from_rationals(over_t, n);
        let numbers = over_t.div(&TruncatedSeries::exp_like(n, 1))?.egf_coefficients();
        let seq = AppellSequence { label: label.into(), numbers, phi };
        debug_assert_eq!(seq.phi_direct(n), seq.phi);
        Ok(seq)
    }

    fn phi_direct(&self, n: usize) -> Vec<Rational> {
        (1..=n)
            .map(|j| {
                (0..j)
                    .map(|k| Rational::from_integer(binomial(j as u32, k as u32)) * &self.numbers[k])
                    .sum()
            })
            .collect()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_degree(&self) -> usize {
        self.numbers.len() - 1
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::OrderOverflow { requested: n, available: self.max_degree() });
        }
        Ok(())
    }

    /// A_0(0)..A_n(0)
    pub fn numbers(&self, n: usize) -> Result<&[Rational]> {
        self.check(n)?;
        Ok(&self.numbers[..=n])
    }

    pub fn poly(&self, n: usize) -> Result<Polynomial> {
        self.check(n)?;
        Ok(convolve(&self.numbers, n))
    }

    /// φ₁..φ_n
    pub fn phi(&self, n: usize) -> Result<PhiVector> {
        self.check(n)?;
        Ok(PhiVector::new(self.phi[..n].to_vec()))
    }

    /// c₀ = ∫₀¹ A_n, per degree.
    pub fn c0(&self, n: usize) -> Result<Rational> {
        Ok(self.poly(n)?.integral_01())
    }

    /// A_n − c₀, the mean-zero member used by the inversion formulas.
    pub fn centered_poly(&self, n: usize) -> Result<Polynomial> {
        let p = self.poly(n)?;
        let c0 = p.integral_01();
        Ok(&p - &Polynomial::constant(c0))
    }

    pub fn fourier(&self, n: usize, k: i64) -> Result<FourierCoefficient> {
        if n == 0 {
            return Err(Error::InvalidArgument("Fourier coefficients need n >= 1".into()));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k = 0 is the mean c0, see AppellSequence::c0".into()));
        }
        self.check(n)?;
        let nf = Rational::from_integer(factorial(n as u32));
        let weights: Vec<Rational> = (1..=n)
            .map(|j| -&nf * &self.phi[j - 1] / Rational::from_integer(factorial(j as u32)))
            .collect();
        let base = two_pi_i() * k as f64;
        let value = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| rational::to_f64(w) * powi(base, -((n - i) as i64)))
            .sum();
        Ok(FourierCoefficient { n, k, weights, value })
    }
}

pub fn appell_numbers(d: &AppellDescriptor, n: usize) -> Result<Vec<Rational>> {
    Ok(d.sequence()?.numbers(n)?.to_vec())
}

pub fn appell_poly(d: &AppellDescriptor, n: usize) -> Result<Polynomial> {
    d.sequence()?.poly(n)
}

pub fn phi_vector(d: &AppellDescriptor, n: usize) -> Result<PhiVector> {
    d.sequence()?.phi(n)
}

pub fn fourier_coefficient(d: &AppellDescriptor, n: usize, k: i64) -> Result<FourierCoefficient> {
    d.sequence()?.fourier(n, k)
}

/// The polynomial R with p(τ)·log(1 − 1/τ) + R(τ) = O(1/τ) at infinity.
///
/// Since log(1 − 1/τ) = −Σ τ^{−k}/k, the coefficient of τ^d in R is
/// Σ_{k≥1} p_{d+k}/k.
pub fn r_poly(p: &Polynomial) -> Polynomial {
    let c = p.coeffs();
    let coeffs = (0..c.len().saturating_sub(1))
        .map(|d| (d + 1..c.len()).map(|i| &c[i] / int((i - d) as i64)).sum())
        .collect();
    Polynomial::new(coeffs)
}
