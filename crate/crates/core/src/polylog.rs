//! Delta rational functions δ_n(q) = Σ_{k≥1} kⁿqᵏ and their extensions
//! Δ_n built from the jumps of an Appell sequence.
//!
//! For n ≥ 0 δ_n is rational with a pole of order n+1 at q = 1. For n ≤ −1 it
//! is the polylogarithm Li_{−n}(q), continued to ℂ∖[1,∞).

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::appell::{AppellSequence, Parity, PhiVector};
use crate::error::{Error, Result};
use crate::numeric::{ensure_finite, polylog_log_series, powi, two_pi_i, LOG_SERIES_MAX_MU, TWO_PI};
use crate::poly::Polynomial;
use crate::rational::{self, factorial, int, Rational};
use crate::report::DefectReport;

/// Power series are used for |q| ≤ this radius, the inversion formula for
/// |q| ≥ its reciprocal.
pub const SERIES_RADIUS: f64 = 0.9;

/// Relative truncation target for every series evaluation.
const TARGET: f64 = 1e-17;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    RationalClosedForm,
    InversionContinuation,
    /// Expansion of Li_m(e^μ) in powers of μ = log q.
    LogSeries,
    /// Linear combination of δ values.
    Combination,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::RationalClosedForm => "rational-closed-form",
            Method::InversionContinuation => "inversion-continuation",
            Method::LogSeries => "log-series",
            Method::Combination => "combination",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Number of series terms (0 for closed forms).
    pub truncation: usize,
    /// Bound on the truncation error of `value`.
    pub tail_bound: f64,
    pub method: Method,
}

impl EvalResult {
    fn closed(value: Complex64) -> Self {
        EvalResult { value, truncation: 0, tail_bound: 0.0, method: Method::RationalClosedForm }
    }
}

/// Numerators N_n with δ_n(q) = N_n(q)/(1 − q)^{n+1}:
/// N₀ = q, N_{n+1} = q(1 − q)N_n′ + (n+1)qN_n.
pub fn delta_numerator(n: usize) -> Polynomial {
    const CACHED: usize = 64;
    static TABLE: OnceLock<Vec<Polynomial>> = OnceLock::new();
    let table = TABLE.get_or_init(|| numerators(CACHED));
    if n <= CACHED {
        table[n].clone()
    } else {
        numerators(n).pop().expect("non-empty")
    }
}

fn numerators(n: usize) -> Vec<Polynomial> {
    let q = Polynomial::x();
    let q_one_minus_q = Polynomial::from_i64(&[0, 1, -1]);
    let mut out = vec![q.clone()];
    for m in 0..n {
        let prev = &out[m];
        let next = &(&q_one_minus_q * &prev.derivative()) + &(&q * prev).scale(&int(m as i64 + 1));
        out.push(next);
    }
    out
}

fn closed_form(n: usize, q: Complex64) -> Result<EvalResult> {
    if q == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    let num = delta_numerator(n).eval_complex(q);
    Ok(EvalResult::closed(ensure_finite(num / powi(1.0 - q, n as i64 + 1))?))
}

/// Σ_{k=1}^{K} k^{−m} qᵏ with K chosen so that the bound
/// (K+1)^{−m}|q|^{K+1}/(1 − |q|) meets the target.
fn power_series(m: u32, q: Complex64) -> EvalResult {
    let r = q.norm();
    debug_assert!(r < 1.0);
    let mut sum = Complex64::zero();
    let mut qk = Complex64::new(1.0, 0.0);
    let mut k = 0usize;
    loop {
        let tail = series_tail(m, r, k);
        if tail <= TARGET * sum.norm() || tail < f64::MIN_POSITIVE {
            return EvalResult { value: sum, truncation: k, tail_bound: tail, method: Method::Series };
        }
        k += 1;
        qk *= q;
        sum += qk * (k as f64).powi(-(m as i32));
    }
}

fn series_tail(m: u32, r: f64, k: usize) -> f64 {
    ((k + 1) as f64).powi(-(m as i32)) * r.powi(k as i32 + 1) / (1.0 - r)
}

/// Σ_{k=1}^{K} k^{−m} qᵏ for an explicit K, used to audit tail bounds.
pub fn delta_partial_sum(n: i64, q: Complex64, k_max: usize) -> Complex64 {
    let mut sum = Complex64::zero();
    let mut qk = Complex64::new(1.0, 0.0);
    for k in 1..=k_max {
        qk *= q;
        sum += qk * (k as f64).powi(n as i32);
    }
    sum
}

fn on_cut(q: Complex64) -> bool {
    q.im == 0.0 && q.re > 1.0
}

/// log q with arg in (0, 2π); q must not lie on [0, +∞).
pub fn log_upper_branch(q: Complex64) -> Complex64 {
    let mut arg = q.im.atan2(q.re);
    if arg <= 0.0 {
        arg += TWO_PI;
    }
    Complex64::new(q.norm().ln(), arg)
}

fn log_series(m: u32, q: Complex64) -> Result<EvalResult> {
    let mu = q.ln();
    if mu.norm() > LOG_SERIES_MAX_MU {
        return Err(Error::OutOfRange(format!("q = {q} outside the log-series region")));
    }
    let s = polylog_log_series(m, mu, 1e-17)?;
    Ok(EvalResult { value: s.value, truncation: s.terms, tail_bound: s.tail_bound, method: Method::LogSeries })
}

/// −(2πi)^m/m!·B_m(log q/(2πi)), the right side of the inversion formula.
fn inversion_rhs(p: &Polynomial, m: u32, q: Complex64) -> Complex64 {
    let x = log_upper_branch(q) / two_pi_i();
    let scale = powi(two_pi_i(), m as i64) / rational::to_f64(&Rational::from_integer(factorial(m)));
    -scale * p.eval_complex(x)
}

fn bernoulli(m: u32) -> Polynomial {
    crate::appell::bernoulli_poly(m as usize)
}

/// δ_n(q) on the principal sheet.
pub fn delta_eval(n: i64, q: Complex64) -> Result<EvalResult> {
    let q = ensure_finite(q)?;
    if n >= 0 {
        return closed_form(n as usize, q);
    }
    let m = (-n) as u32;
    let r = q.norm();
    if q == Complex64::new(1.0, 0.0) {
        return if m == 1 { Err(Error::Pole) } else { log_series(m, q) };
    }
    if on_cut(q) {
        return Err(Error::CutViolation);
    }
    if r <= SERIES_RADIUS {
        return Ok(power_series(m, q));
    }
    if r >= 1.0 / SERIES_RADIUS {
        let inner = power_series(m, 1.0 / q);
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let value = inversion_rhs(&bernoulli(m), m, q) - sign * inner.value;
        return Ok(EvalResult {
            value: ensure_finite(value)?,
            truncation: inner.truncation,
            tail_bound: inner.tail_bound,
            method: Method::InversionContinuation,
        });
    }
    log_series(m, q)
}

/// δ_n(q) without the inversion formula: closed forms, power series inside
/// the disk and the log expansion elsewhere.
pub fn delta_eval_direct(n: i64, q: Complex64) -> Result<EvalResult> {
    let q = ensure_finite(q)?;
    if n >= 0 {
        return closed_form(n as usize, q);
    }
    let m = (-n) as u32;
    if q == Complex64::new(1.0, 0.0) && m == 1 {
        return Err(Error::Pole);
    }
    if on_cut(q) {
        return Err(Error::CutViolation);
    }
    if q.norm() <= SERIES_RADIUS {
        return Ok(power_series(m, q));
    }
    log_series(m, q)
}

fn check_off_ray(n: i64, q: Complex64) -> Result<()> {
    if n <= 0 && q.im == 0.0 && q.re >= 0.0 {
        return Err(Error::CutViolation);
    }
    Ok(())
}

/// |δ_n(q) + (−1)ⁿδ_n(1/q) − RHS| with both δ values evaluated directly.
pub fn inversion_defect(n: i64, q: Complex64) -> Result<f64> {
    Ok(inversion_report(n, q)?.abs_defect)
}

/// Both sides of the inversion identity at q.
pub fn inversion_report(n: i64, q: Complex64) -> Result<DefectReport> {
    let q = ensure_finite(q)?;
    check_off_ray(n, q)?;
    let a = delta_eval_direct(n, q)?;
    let b = delta_eval_direct(n, 1.0 / q)?;
    let lhs = a.value + parity_sign(n) * b.value;
    let rhs = if n >= 1 { Complex64::zero() } else { inversion_rhs(&bernoulli((-n) as u32), (-n) as u32, q) };
    let floor = 64.0 * f64::EPSILON * (a.value.norm() + b.value.norm() + rhs.norm());
    let truncation = a.truncation.max(b.truncation) as u64;
    Ok(DefectReport::new("inversion", "", n, q, truncation, lhs, rhs, a.tail_bound + b.tail_bound, floor))
}

fn parity_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// |δ_n(qᵏ) − k^{−1−n} Σ_{Λᵏ=1} δ_n(Λq)|
pub fn root_of_unity_check(n: i64, k: u32, q: Complex64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let q = ensure_finite(q)?;
    let r = q.norm();
    if r > 1.0 || (r == 1.0 && n > -2) {
        return Err(Error::OutOfRange(format!("|q| = {r} outside the disk")));
    }
    let lhs = delta_eval(n, q.powu(k))?.value;
    let mut sum = Complex64::zero();
    for j in 0..k {
        let lambda = Complex64::from_polar(1.0, TWO_PI * j as f64 / k as f64);
        sum += delta_eval(n, lambda * q)?.value;
    }
    Ok((lhs - sum * (k as f64).powi(-1 - n as i32)).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignCase {
    /// Jumps vanish at even indices.
    #[serde(rename = "P-case")]
    P,
    /// Jumps vanish at odd indices.
    #[serde(rename = "Q-case")]
    Q,
}

impl SignCase {
    pub fn from_parity(p: Parity) -> Option<SignCase> {
        match p {
            Parity::EvenVanishing => Some(SignCase::P),
            Parity::OddVanishing => Some(SignCase::Q),
            Parity::Neither => None,
        }
    }
}

impl fmt::Display for SignCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignCase::P => "P-case",
            SignCase::Q => "Q-case",
        })
    }
}

/// Δ_n for one Appell sequence. For n ≤ −1,
/// Δ_n(q) = Σ_k a_k qᵏ with a_k = Σ_{j=1}^{−n} (φ_j/j!)(2πi)^{j−1} k^{n+j−1},
/// which equals Σ_j (φ_j/j!)(2πi)^{j−1} δ_{n+j−1}(q).
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedDeltaSpec {
    pub phi: PhiVector,
    pub n: i64,
    pub sign_case: SignCase,
    /// P_{−n} = A_{−n} − c₀ for n ≤ −1.
    centered: Option<Polynomial>,
}

impl ExtendedDeltaSpec {
    /// The sign case is taken from the computed parity of φ.
    pub fn new(seq: &AppellSequence, n: i64) -> Result<Self> {
        let parity = seq.phi(seq.max_degree())?.parity;
        let sign_case = SignCase::from_parity(parity).ok_or_else(|| {
            Error::NotApplicable(format!("{}: jumps vanish at neither parity", seq.label()))
        })?;
        Self::with_case(seq, n, sign_case)
    }

    pub fn with_case(seq: &AppellSequence, n: i64, sign_case: SignCase) -> Result<Self> {
        let m = n.min(0).unsigned_abs() as usize;
        let phi = seq.phi(m.max(1))?;
        let centered = if n <= -1 { Some(seq.centered_poly(m)?) } else { None };
        Ok(ExtendedDeltaSpec { phi, n, sign_case, centered })
    }

    /// (φ_j/j!)(2πi)^{j−1} for j = 1..−n.
    fn weights(&self) -> Vec<Complex64> {
        let m = (-self.n) as usize;
        (1..=m)
            .map(|j| {
                let c = rational::to_f64(&(self.phi.get(j) / Rational::from_integer(factorial(j as u32))));
                c * powi(two_pi_i(), j as i64 - 1)
            })
            .collect()
    }

    /// a_k(n) for n ≤ −1.
    pub fn coefficient(&self, k: u64) -> Complex64 {
        assert!(self.n <= -1);
        self.weights()
            .iter()
            .enumerate()
            .map(|(i, w)| w * (k as f64).powi(self.n as i32 + i as i32))
            .sum()
    }

    fn inversion_sign(&self) -> f64 {
        match (self.sign_case, self.n <= -1) {
            (SignCase::Q, true) => -parity_sign(self.n),
            _ => parity_sign(self.n),
        }
    }

    fn rhs(&self, q: Complex64) -> Complex64 {
        match &self.centered {
            Some(p) => inversion_rhs(p, (-self.n) as u32, q),
            None if self.n == 0 => Complex64::new(-1.0, 0.0),
            None => Complex64::zero(),
        }
    }
}

fn extended_eval_with(spec: &ExtendedDeltaSpec, q: Complex64, direct: bool) -> Result<EvalResult> {
    let q = ensure_finite(q)?;
    let eval = if direct { delta_eval_direct } else { delta_eval };
    if spec.n >= 0 {
        return eval(spec.n, q);
    }
    let w = spec.weights();
    let r = q.norm();
    if r <= SERIES_RADIUS {
        // |a_k| ≤ W/k with W = Σ|w_j|.
        let big_w: f64 = w.iter().map(|c| c.norm()).sum();
        let mut sum = Complex64::zero();
        let mut qk = Complex64::new(1.0, 0.0);
        let mut k = 0u64;
        loop {
            let tail = big_w * r.powi(k as i32 + 1) / ((k + 1) as f64 * (1.0 - r));
            if tail <= TARGET * sum.norm() || tail < f64::MIN_POSITIVE {
                return Ok(EvalResult { value: sum, truncation: k as usize, tail_bound: tail, method: Method::Series });
            }
            k += 1;
            qk *= q;
            sum += qk * spec.coefficient(k);
        }
    }
    let mut value = Complex64::zero();
    let mut tail = 0.0;
    let mut terms = 0;
    for (i, wj) in w.iter().enumerate() {
        if wj.is_zero() {
            continue;
        }
        let d = eval(spec.n + i as i64, q)?;
        value += wj * d.value;
        tail += wj.norm() * d.tail_bound;
        terms = terms.max(d.truncation);
    }
    Ok(EvalResult { value, truncation: terms, tail_bound: tail, method: Method::Combination })
}

pub fn extended_delta_eval(spec: &ExtendedDeltaSpec, q: Complex64) -> Result<EvalResult> {
    extended_eval_with(spec, q, false)
}

/// Defect of Δ_n(q) ± Δ_n(1/q) = −(2πi)^{−n}/(−n)!·P_{−n}(log q/(2πi)), both
/// Δ values evaluated without the inversion formula. The sign is (−1)ⁿ in
/// the P-case and (−1)^{n+1} in the Q-case (n ≤ −1).
pub fn extended_inversion_defect(spec: &ExtendedDeltaSpec, q: Complex64) -> Result<f64> {
    let q = ensure_finite(q)?;
    check_off_ray(spec.n, q)?;
    let a = extended_eval_with(spec, q, true)?.value;
    let b = extended_eval_with(spec, 1.0 / q, true)?.value;
    Ok((a + spec.inversion_sign() * b - spec.rhs(q)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appell::AppellDescriptor;
    use crate::numeric::{c64, integrate_segment};
    use std::f64::consts::PI;

    fn seq(label: &str) -> AppellSequence {
        AppellDescriptor::builtin(label, 12).unwrap().sequence().unwrap()
    }

    #[test]
    fn spec_values() {
        assert!((delta_eval(0, c64(0.5, 0.0)).unwrap().value - 1.0).norm() < 1e-15);
        assert!((delta_eval(-1, c64(0.5, 0.0)).unwrap().value - 2f64.ln()).norm() < 1e-15);
        assert!((delta_eval(1, c64(0.5, 0.0)).unwrap().value - 2.0).norm() < 1e-15);
        let z2 = delta_eval(-2, c64(1.0, 0.0)).unwrap();
        assert!((z2.value - PI * PI / 6.0).norm() < 1e-14);
        assert_eq!(delta_eval(1, c64(1.0, 0.0)), Err(Error::Pole));
        assert_eq!(delta_eval(-1, c64(1.0, 0.0)), Err(Error::Pole));
        assert_eq!(delta_eval(-2, c64(3.0, 0.0)), Err(Error::CutViolation));
        assert_eq!(delta_eval(-2, c64(f64::NAN, 0.0)), Err(Error::NonFinite));
    }

    #[test]
    fn numerator_table() {
        // δ₂ = q(1+q)/(1−q)³
        assert_eq!(delta_numerator(2), Polynomial::from_i64(&[0, 1, 1]));
        assert_eq!(delta_numerator(3), Polynomial::from_i64(&[0, 1, 4, 1]));
        let far = delta_numerator(70);
        let q = c64(0.3, 0.1);
        let direct = delta_partial_sum(70, q, 4000);
        let closed = far.eval_complex(q) / powi(1.0 - q, 71);
        assert!((closed - direct).norm() < 1e-9 * direct.norm());
    }

    #[test]
    fn logarithm_everywhere_off_the_cut() {
        for q in [c64(0.5, 0.5), c64(-0.95, 0.1), c64(0.2, 1.0), c64(-3.0, 0.5), c64(1.05, -0.02), c64(0.0, -8.0)] {
            let v = delta_eval(-1, q).unwrap();
            assert!((v.value + (1.0 - q).ln()).norm() < 1e-13, "{q} via {}", v.method);
        }
    }

    #[test]
    fn methods_agree_across_regions() {
        // The log expansion covers both the disk edge and the outside.
        for n in -5..=-1 {
            for q in [c64(-1.2, 0.3), c64(0.6, -0.9), c64(-0.5, 0.8), c64(0.1, 0.85)] {
                let a = delta_eval(n, q).unwrap().value;
                let b = delta_eval_direct(n, q).unwrap();
                let c = log_series(-n as u32, q).unwrap().value;
                assert!((a - b.value).norm() < 1e-12, "n={n} q={q}");
                assert!((a - c).norm() < 1e-12, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn inversion_examples() {
        assert!(inversion_defect(2, c64(0.0, 2.0)).unwrap() < 1e-12);
        assert!(inversion_defect(-2, c64(-1.0, 0.0)).unwrap() < 1e-12);
        let v = delta_eval(-2, c64(-1.0, 0.0)).unwrap().value;
        assert!((v + PI * PI / 12.0).norm() < 1e-14);
        assert!(inversion_defect(0, c64(-1.0, 0.0)).unwrap() < 1e-15);
        assert_eq!(inversion_defect(-1, c64(0.5, 0.0)), Err(Error::CutViolation));
    }

    #[test]
    fn root_of_unity_examples() {
        assert!(root_of_unity_check(0, 2, c64(1.0 / 3.0, 0.0)).unwrap() < 1e-14);
        assert!(root_of_unity_check(-1, 2, c64(0.5, 0.0)).unwrap() < 1e-12);
        assert!(root_of_unity_check(-2, 3, c64(0.4, 0.3)).unwrap() < 1e-10);
        assert!(root_of_unity_check(-3, 4, c64(0.0, 1.0)).unwrap() < 1e-10);
    }

    #[test]
    fn q_derivative_ladder() {
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in -3..=2 {
            for _ in 0..20 {
                let q = Complex64::from_polar(0.8 * next().sqrt(), TWO_PI * next());
                let h = 1e-5;
                let f = |z: Complex64| delta_eval(n, z).unwrap().value;
                let d = (f(q * (1.0 + h)) - f(q * (1.0 - h))) / (2.0 * h);
                let target = f(q).norm().max(delta_eval(n + 1, q).unwrap().value.norm());
                assert!((d - delta_eval(n + 1, q).unwrap().value).norm() < 1e-6 * target.max(1e-3), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn dilogarithm_integral() {
        for q in [c64(0.5, 0.0), c64(-0.9, 0.0), c64(0.3, 0.7), c64(-0.2, -0.6)] {
            let i = integrate_segment(|t| -(1.0 - t).ln() / t, c64(1e-300, 0.0), q, 1e-14);
            let v = delta_eval(-2, q).unwrap().value;
            assert!((i.value - v).norm() < 1e-9, "{q}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for n in -4..=3 {
            for q in [c64(0.5, 0.4), c64(-2.0, 1.0), c64(0.95, 0.2), c64(-0.3, -1.0)] {
                let a = delta_eval(n, q.conj()).unwrap().value;
                let b = delta_eval(n, q).unwrap().value.conj();
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn tail_bound_audit() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for i in 0..100 {
            let n = -1 - (i % 5) as i64;
            let q = Complex64::from_polar(SERIES_RADIUS * next(), TWO_PI * next());
            let r = delta_eval(n, q).unwrap();
            let longer = delta_partial_sum(n, q, r.truncation + 2000);
            let roundoff = 1e-15 * longer.norm().max(1e-300);
            assert!((r.value - longer).norm() <= r.tail_bound + roundoff, "n={n} q={q}");
        }
    }

    #[test]
    fn extended_bernoulli_collapses() {
        let s = seq("bernoulli");
        for n in -4..=-1 {
            let spec = ExtendedDeltaSpec::new(&s, n).unwrap();
            for q in [c64(0.5, 0.1), c64(-2.0, 0.3), c64(0.3, -0.92)] {
                let a = extended_delta_eval(&spec, q).unwrap().value;
                let b = delta_eval(n, q).unwrap().value;
                assert!((a - b).norm() < 1e-12, "n={n} q={q}");
            }
        }
        let zero = ExtendedDeltaSpec::new(&s, 0).unwrap();
        assert!((extended_delta_eval(&zero, c64(0.5, 0.0)).unwrap().value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn extended_matches_fourier_side() {
        // Σ_{k≥1} c_k qᵏ = −3!(2πi)^{−3} Δ_{−3}(q) for the c₀-free P₃ of the a-sequence.
        let s = seq("a-seq");
        let spec = ExtendedDeltaSpec::new(&s, -3).unwrap();
        let q = c64(0.5, 0.0);
        let p = s.centered_poly(3).unwrap();
        let mut oracle = Complex64::zero();
        for k in 1..=80i64 {
            let ck = crate::numeric::integrate(
                |t| p.eval_complex(c64(t, 0.0)) * Complex64::from_polar(1.0, -TWO_PI * k as f64 * t),
                0.0,
                1.0,
                1e-15,
            )
            .value;
            oracle += ck * q.powi(k as i32);
        }
        let delta = extended_delta_eval(&spec, q).unwrap().value;
        let lhs = -6.0 * delta / powi(two_pi_i(), 3);
        assert!((lhs - oracle).norm() < 1e-9, "{lhs} vs {oracle}");
    }

    #[test]
    fn extended_inversion() {
        let b = seq("bernoulli");
        for n in -3..=3 {
            let spec = ExtendedDeltaSpec::new(&b, n).unwrap();
            let q = c64(0.4, 0.5);
            let d = extended_inversion_defect(&spec, q).unwrap();
            assert!(d < 1e-10, "n={n} d={d}");
            assert!((d - inversion_defect(n, q).unwrap()).abs() < 1e-12);
        }
        let a = seq("a-seq");
        for n in 1..=3 {
            let spec = ExtendedDeltaSpec::new(&a, n).unwrap();
            assert!(extended_inversion_defect(&spec, Complex64::from_polar(2.0, PI / 3.0)).unwrap() < 1e-12);
        }
        for label in ["a-seq", "b-seq"] {
            let spec = ExtendedDeltaSpec::new(&seq(label), -2).unwrap();
            assert!(extended_inversion_defect(&spec, c64(-0.5, 0.0)).unwrap() < 1e-8, "{label}");
        }
    }

    #[test]
    fn q_case_inversion_sign() {
        let phi: Vec<Rational> = (1..=6).map(|j| int((j % 2 == 0) as i64)).collect();
        let s = AppellSequence::from_phi("cosh", phi).unwrap();
        for n in -6..=-1 {
            let spec = ExtendedDeltaSpec::new(&s, n).unwrap();
            assert_eq!(spec.sign_case, SignCase::Q);
            let d = extended_inversion_defect(&spec, c64(-0.3, 0.5)).unwrap();
            assert!(d < 1e-10, "n={n} d={d}");
            let wrong = ExtendedDeltaSpec::with_case(&s, n, SignCase::P).unwrap();
            if n <= -2 {
                assert!(extended_inversion_defect(&wrong, c64(-0.3, 0.5)).unwrap() > 1e-3);
            }
        }
    }
}
