//! The Lazard universal formal group over ℚ[c₁, c₂, …], universal Bernoulli
//! numbers and their von Staudt and Kummer congruences.
//!
//! F(s) = Σ cᵢ s^{i+1}/(i+1) with c₀ = 1, G = F⁻¹, and t/G(t) generates the
//! universal Bernoulli numbers B̂ₙ. Each B̂ₙ is weighted homogeneous of weight n
//! when cᵢ has weight i, so it only involves c₁..cₙ.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::appell::bernoulli_numbers;
use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::par::{self, Execution};
use crate::poly::Polynomial;
use crate::rational::{self, binomial, factorial, int, ratio, Rational};
use crate::ring::Ring;
use crate::series::TruncatedSeries;

/// Largest series order accepted by [`build_formal_group`].
pub const MAX_ORDER: usize = 21;
/// Largest index accepted by [`universal_bernoulli`].
pub const MAX_BERNOULLI_INDEX: usize = MAX_ORDER - 1;
/// Largest even index accepted by [`classical_cvs_check`].
pub const MAX_CVS_INDEX: u32 = 30;

#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupData {
    order: usize,
    f: TruncatedSeries<MultiPoly>,
    g: TruncatedSeries<MultiPoly>,
}

/// Builds F and G to order `order` over ℚ[c₁..c_{order−1}].
pub fn build_formal_group(order: usize) -> Result<FormalGroupData> {
    if !(2..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderGuard { requested: order, min: 2, max: MAX_ORDER });
    }
    let arity = order - 1;
    let mut coeffs = vec![MultiPoly::zero(arity); order + 1];
    coeffs[1] = MultiPoly::constant(int(1), arity);
    for i in 1..order {
        coeffs[i + 1] = MultiPoly::var(i, arity).scale(&ratio(1, i as i64 + 1));
    }
    let f = TruncatedSeries::new(coeffs, order);
    let g = f.reversion()?;
    Ok(FormalGroupData { order, f, g })
}

impl FormalGroupData {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of symbolic coefficients c₁..c_m.
    pub fn arity(&self) -> usize {
        self.order - 1
    }

    pub fn f(&self) -> &TruncatedSeries<MultiPoly> {
        &self.f
    }

    pub fn g(&self) -> &TruncatedSeries<MultiPoly> {
        &self.g
    }

    /// Φ(s₁, s₂) = G(F(s₁) + F(s₂)) to total degree `order`.
    pub fn two_variable_law(&self) -> BivariateSeries {
        let n = self.order;
        let arity = self.arity();
        let mut sum = BivariateSeries::zero(n, arity);
        for k in 1..=n {
            sum.coeffs[k][0] = self.f.coeff(k).clone();
            sum.coeffs[0][k] = self.f.coeff(k).clone();
        }
        let mut acc = BivariateSeries::zero(n, arity);
        acc.coeffs[0][0] = self.g.coeff(n).clone();
        for k in (0..n).rev() {
            acc = acc.mul(&sum);
            acc.coeffs[0][0] = acc.coeffs[0][0].add(self.g.coeff(k));
        }
        acc
    }

    /// F and G with rational values substituted for c₁..c_m.
    pub fn specialize(&self, values: &[Rational]) -> (TruncatedSeries, TruncatedSeries) {
        (specialize_series(&self.f, values), specialize_series(&self.g, values))
    }
}

/// Power series in s₁, s₂ truncated at a total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries {
    order: usize,
    coeffs: Vec<Vec<MultiPoly>>,
}

impl BivariateSeries {
    fn zero(order: usize, arity: usize) -> Self {
        let coeffs = (0..=order).map(|i| vec![MultiPoly::zero(arity); order + 1 - i]).collect();
        BivariateSeries { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of s₁ⁱ s₂ʲ, zero beyond the order.
    pub fn coeff(&self, i: usize, j: usize) -> MultiPoly {
        match self.coeffs.get(i).and_then(|row| row.get(j)) {
            Some(c) => c.clone(),
            None => self.coeffs[0][0].zero_like(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.order;
        let mut out = BivariateSeries::zero(n, self.coeffs[0][0].arity());
        for (i1, row1) in self.coeffs.iter().enumerate() {
            for (j1, a) in row1.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=n - i1 - j1 {
                    for j2 in 0..=n - i1 - j1 - i2 {
                        let b = &other.coeffs[i2][j2];
                        if !b.is_zero() {
                            let cell = &mut out.coeffs[i1 + i2][j1 + j2];
                            *cell = cell.add(&a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn specialize_series(s: &TruncatedSeries<MultiPoly>, values: &[Rational]) -> TruncatedSeries {
    let coeffs = s.coeffs().iter().map(|c| c.specialize(&fit(values, c.arity()))).collect();
    TruncatedSeries::new(coeffs, s.order())
}

/// Pads with zeros or drops trailing values to match `arity`.
fn fit(values: &[Rational], arity: usize) -> Vec<Rational> {
    let mut v = values.to_vec();
    v.resize(arity, int(0));
    v
}

/// The values of c₁..c_{order−1} for which the universal G equals `g`.
/// Requires g(0) = 0 and g′(0) = 1.
pub fn coefficients_for_exponential(g: &TruncatedSeries) -> Result<Vec<Rational>> {
    if !Zero::is_zero(g.coeff(0)) || !num_traits::One::is_one(g.coeff(1)) {
        return Err(Error::InvalidArgument("exponential must be t + O(t^2)".into()));
    }
    let f = g.reversion()?;
    Ok((1..g.order()).map(|i| f.coeff(i + 1) * int(i as i64 + 1)).collect())
}

/// cᵢ = (−1)^i, under which F(s) = log(1+s) and G(t) = eᵗ − 1.
pub fn classical_specialization(arity: usize) -> Vec<Rational> {
    (1..=arity).map(|i| int(if i % 2 == 0 { 1 } else { -1 })).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniversalBernoulli {
    numbers: Vec<MultiPoly>,
}

/// B̂₀..B̂_N over ℚ[c₁..c_N].
pub fn universal_bernoulli(n: usize) -> Result<UniversalBernoulli> {
    if n > MAX_BERNOULLI_INDEX {
        return Err(Error::OrderGuard { requested: n, min: 0, max: MAX_BERNOULLI_INDEX });
    }
    let fg = build_formal_group((n + 1).max(2))?;
    let g = fg.g();
    // G(t)/t has order one less than G.
    let shifted = TruncatedSeries::new(g.coeffs()[1..].to_vec(), g.order() - 1);
    let numbers = shifted.recip()?.egf_coefficients().into_iter().take(n + 1).collect();
    Ok(UniversalBernoulli { numbers })
}

/// B_k^G(x) = Σ C(k,j) B̂_j x^{k−j} for k = 0..N.
pub fn universal_bernoulli_polys(n: usize) -> Result<Vec<Polynomial<MultiPoly>>> {
    Ok(universal_bernoulli(n)?.polynomials())
}

impl UniversalBernoulli {
    pub fn max_index(&self) -> usize {
        self.numbers.len() - 1
    }

    pub fn arity(&self) -> usize {
        self.numbers[0].arity()
    }

    pub fn numbers(&self) -> &[MultiPoly] {
        &self.numbers
    }

    pub fn number(&self, n: usize) -> Result<&MultiPoly> {
        self.numbers.get(n).ok_or(Error::OrderOverflow { requested: n, available: self.max_index() })
    }

    pub fn polynomials(&self) -> Vec<Polynomial<MultiPoly>> {
        (0..self.numbers.len()).map(|k| self.polynomial(k)).collect()
    }

    pub fn polynomial(&self, k: usize) -> Polynomial<MultiPoly> {
        let coeffs = (0..=k)
            .map(|i| self.numbers[k - i].scale(&Rational::from_integer(binomial(k as u32, i as u32))))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn specialize(&self, values: &[Rational]) -> Vec<Rational> {
        self.numbers.iter().map(|b| b.specialize(&fit(values, b.arity()))).collect()
    }

    /// B̂ₙ + Σ_{(p−1)|n} c_{p−1}^{n/(p−1)}/p for even n, and
    /// B̂ₙ − (c₁ⁿ + c₁^{n−3}c₃)/2 for odd n > 1, over ℚ[c₁..cₙ].
    pub fn von_staudt_expression(&self, n: usize) -> Result<MultiPoly> {
        if !(2..=self.max_index()).contains(&n) {
            return Err(Error::OrderGuard { requested: n, min: 2, max: self.max_index() });
        }
        let b = self.number(n)?.restrict_arity(n);
        let c = |i: usize| MultiPoly::var(i, n);
        if n.is_multiple_of(2) {
            let correction = rational::primes_up_to(n as u64 + 1)
                .into_iter()
                .filter(|&p| (n as u64).is_multiple_of(p - 1))
                .fold(b.zero_like(), |acc, p| {
                    let e = (n as u64 / (p - 1)) as u32;
                    acc.add(&c(p as usize - 1).pow(e).scale(&ratio(1, p as i64)))
                });
            Ok(b.add(&correction))
        } else {
            let correction = c(1).pow(n as u32).add(&c(1).pow(n as u32 - 3).mul(&c(3)));
            Ok(b.sub(&correction.scale(&ratio(1, 2))))
        }
    }

    pub fn von_staudt(&self, n: usize) -> Result<CongruenceVerdict> {
        let expr = self.von_staudt_expression(n)?;
        let witness = expr.map_coefficients(|c| c - c.floor());
        let id = if n.is_multiple_of(2) { CongruenceId::US1 } else { CongruenceId::US2 };
        let mut metadata = BTreeMap::new();
        metadata.insert("reduction".into(), "fractional part of each coefficient".into());
        Ok(CongruenceVerdict::new(id, n as u32, None, Witness::Polynomial(witness), metadata))
    }

    /// B̂_{n+p−1}/(n+p−1) − (B̂ₙ/n)·c_{p−1} over ℚ[c₁..c_{n+p−1}].
    pub fn kummer_expression(&self, n: usize, p: u64) -> Result<MultiPoly> {
        kummer_precondition(n, p)?;
        let m = n + p as usize - 1;
        if m > self.max_index() {
            return Err(Error::OrderOverflow { requested: m, available: self.max_index() });
        }
        let hi = self.number(m)?.restrict_arity(m).scale(&ratio(1, m as i64));
        let lo = self.number(n)?.restrict_arity(n).with_arity(m).scale(&ratio(1, n as i64));
        Ok(hi.sub(&lo.mul(&MultiPoly::var(p as usize - 1, m))))
    }

    pub fn kummer(&self, n: usize, p: u64) -> Result<CongruenceVerdict> {
        let expr = self.kummer_expression(n, p)?;
        let witness = expr.map_coefficients(|c| match rational::p_adic_valuation(c, p) {
            Some(v) if v < 1 => c.clone(),
            _ => Rational::zero(),
        });
        let mut metadata = BTreeMap::new();
        metadata.insert("reduction".into(), format!("coefficients with {p}-adic valuation below 1"));
        Ok(CongruenceVerdict::new(CongruenceId::UK, n as u32, Some(p), Witness::Polynomial(witness), metadata))
    }
}

fn kummer_precondition(n: usize, p: u64) -> Result<()> {
    if p < 2 || rational::primes_up_to(p).last() != Some(&p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let r = n as u64 % (p - 1);
    if n < 2 || r <= 1 {
        return Err(Error::NotApplicable(format!("n={n} is congruent to 0 or 1 mod {}", p - 1)));
    }
    Ok(())
}

pub fn von_staudt_check(n: usize) -> Result<CongruenceVerdict> {
    if n < 2 {
        return Err(Error::OrderGuard { requested: n, min: 2, max: MAX_BERNOULLI_INDEX });
    }
    universal_bernoulli(n)?.von_staudt(n)
}

pub fn kummer_check(n: usize, p: u64) -> Result<CongruenceVerdict> {
    kummer_precondition(n, p)?;
    universal_bernoulli(n + p as usize - 1)?.kummer(n, p)
}

/// Bₙ + Σ_{(p−1)|n} 1/p ∈ ℤ for even n. The metadata also evaluates the
/// variant summing over p | n.
pub fn classical_cvs_check(n: u32) -> Result<CongruenceVerdict> {
    if n == 1 {
        return Err(Error::InvalidArgument("odd n: B_1 = -1/2".into()));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("odd n: B_{n} = 0")));
    }
    if !(2..=MAX_CVS_INDEX).contains(&n) {
        return Err(Error::OrderGuard { requested: n as usize, min: 2, max: MAX_CVS_INDEX as usize });
    }
    let b = bernoulli_numbers(n as usize)[n as usize].clone();
    let primes = rational::primes_up_to(n as u64 + 1);
    let sum_over = |keep: &dyn Fn(u64) -> bool| -> (Rational, Vec<u64>) {
        let ps: Vec<u64> = primes.iter().copied().filter(|&p| keep(p)).collect();
        let total = ps.iter().fold(b.clone(), |acc, &p| acc + ratio(1, p as i64));
        (total, ps)
    };
    let (value, ps) = sum_over(&|p| (n as u64).is_multiple_of(p - 1));
    let (alt_value, alt_ps) = sum_over(&|p| (n as u64).is_multiple_of(p));
    let join = |ps: &[u64]| ps.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut metadata = BTreeMap::new();
    metadata.insert("bernoulli".into(), rational::format_rational(&b));
    metadata.insert("condition".into(), "(p-1) | n".into());
    metadata.insert("primes".into(), join(&ps));
    metadata.insert("value".into(), rational::format_rational(&value));
    metadata.insert("alt_condition".into(), "p | n".into());
    metadata.insert("alt_primes".into(), join(&alt_ps));
    metadata.insert("alt_value".into(), rational::format_rational(&alt_value));
    metadata.insert("alt_integral".into(), rational::is_integer(&alt_value).to_string());
    let witness = Witness::Rational(&value - value.floor());
    Ok(CongruenceVerdict::new(CongruenceId::CvS, n, None, witness, metadata))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CongruenceId {
    US1,
    US2,
    UK,
    CvS,
}

/// What is left after reduction; the congruence holds iff it is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Polynomial(MultiPoly),
    Rational(
        #[serde(serialize_with = "rational::serialize_rational", deserialize_with = "rational::deserialize_rational")]
        Rational,
    ),
}

impl Witness {
    pub fn is_zero(&self) -> bool {
        match self {
            Witness::Polynomial(p) => p.is_zero(),
            Witness::Rational(r) => Zero::is_zero(r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub id: CongruenceId,
    pub n: u32,
    pub p: Option<u64>,
    pub holds: bool,
    pub witness: Witness,
    pub metadata: BTreeMap<String, String>,
}

impl CongruenceVerdict {
    fn new(id: CongruenceId, n: u32, p: Option<u64>, witness: Witness, metadata: BTreeMap<String, String>) -> Self {
        CongruenceVerdict { id, n, p, holds: witness.is_zero(), witness, metadata }
    }

    /// Recomputes the check from scratch and compares every field.
    pub fn recheck(&self) -> Result<bool> {
        let fresh = match self.id {
            CongruenceId::US1 | CongruenceId::US2 => von_staudt_check(self.n as usize)?,
            CongruenceId::UK => {
                let p = self.p.ok_or_else(|| Error::InvalidArgument("UK verdict without p".into()))?;
                kummer_check(self.n as usize, p)?
            }
            CongruenceId::CvS => classical_cvs_check(self.n)?,
        };
        Ok(fresh == *self && self.holds == self.witness.is_zero())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// US1/US2 for 2 ≤ n ≤ `max_n`, UK for p ∈ `kummer_primes` over all admissible n
/// with n + p − 1 ≤ `max_n`, and the classical theorem for even n ≤ 30. Sorted
/// by (id, n, p).
pub fn congruence_suite(exec: Execution, max_n: usize, kummer_primes: &[u64]) -> Result<Vec<CongruenceVerdict>> {
    let ub = universal_bernoulli(max_n)?;
    enum Job {
        Staudt(usize),
        Kummer(usize, u64),
        Classical(u32),
    }
    let mut jobs: Vec<Job> = (2..=max_n).map(Job::Staudt).collect();
    for &p in kummer_primes {
        for n in 2..=max_n {
            if n + p as usize - 1 <= max_n && kummer_precondition(n, p).is_ok() {
                jobs.push(Job::Kummer(n, p));
            }
        }
    }
    jobs.extend((1..=MAX_CVS_INDEX / 2).map(|k| Job::Classical(2 * k)));
    let mut out = par::map(exec, &jobs, |job| match *job {
        Job::Staudt(n) => ub.von_staudt(n),
        Job::Kummer(n, p) => ub.kummer(n, p),
        Job::Classical(n) => classical_cvs_check(n),
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|a| (a.id, a.n, a.p));
    Ok(out)
}

/// n!·[tⁿ] t/G(t) after specializing G, for comparing against the universal numbers.
pub fn bernoulli_from_exponential(g: &TruncatedSeries, n: usize) -> Result<Vec<Rational>> {
    let shifted = TruncatedSeries::new(g.coeffs()[1..].to_vec(), g.order() - 1);
    let b = shifted.recip()?;
    Ok((0..=n.min(b.order())).map(|k| b.coeff(k) * Rational::from_integer(factorial(k as u32))).collect())
}
