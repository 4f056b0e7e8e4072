//! Representing functions of compactly supported hyperfunctions on [0,1],
//! their sums over integer translates, and the Lipschitz summation checks.
//!
//! Every representing function here has the form
//! φ(τ) = −(1/π)·Σ_{m≥0} ⟨u, xᵐ⟩ τ^{−m−1} near infinity, where u is the
//! hyperfunction and ⟨u, ψ⟩ = (i/2)∮ φψ dz around [0,1].

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::appell::{bernoulli_poly, r_poly, AppellSequence};
use crate::error::{Error, Result};
use crate::numeric::{bernoulli_even_ratio, ensure_finite, integrate_segment, powi, two_pi_i, CompensatedSum, TWO_PI};
use crate::par::{self, Execution};
use crate::poly::Polynomial;
use crate::polylog::{delta_eval, extended_delta_eval, ExtendedDeltaSpec, SignCase};
use crate::rational::{self, factorial, int, Rational};
use crate::report::{DefectReport, Measure};

/// Beyond this modulus φ is evaluated from its moment expansion.
const EXPANSION_RADIUS: f64 = 4.0;
const MOMENTS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    /// n < 0: a derivative of the Dirac delta at 0.
    DeltaDerivative,
    /// n = 0
    LogConstant,
    /// n > 0: −P_n/n! on [0,1].
    PolyLog { p: Vec<f64>, r: Vec<f64>, n_fact: f64 },
    /// φ(τ + 1) − φ(τ)
    TranslateDifference(Box<RepresentingFunction>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepresentingFunction {
    label: String,
    n: i64,
    kind: Kind,
    /// P_n and R(P_n) for n > 0.
    polys: Option<(Polynomial, Polynomial)>,
    /// ⟨u, xᵐ⟩ for m < MOMENTS.
    moments: Vec<Rational>,
    moments_f64: Vec<f64>,
    /// Δ_{−n} data when it differs from δ_{−n}.
    delta: Option<ExtendedDeltaSpec>,
    sign_case: Option<SignCase>,
}

impl RepresentingFunction {
    /// The Bernoulli family: δ^{(−n)} for n < 0, δ − 1 on [0,1] for n = 0
    /// and −B_n/n! on [0,1] for n > 0.
    pub fn bernoulli(n: i64) -> Self {
        let moments = if n < 0 {
            let m = (-n) as usize;
            (0..MOMENTS)
                .map(|j| match j == m {
                    true => Rational::from_integer(factorial(m as u32)) * int(if m.is_multiple_of(2) { 1 } else { -1 }),
                    false => Rational::zero(),
                })
                .collect()
        } else if n == 0 {
            (0..MOMENTS).map(|j| int((j == 0) as i64) - Rational::new(1.into(), (j as i64 + 1).into())).collect()
        } else {
            poly_moments(&bernoulli_poly(n as usize), n as u32)
        };
        let kind = match n {
            n if n < 0 => Kind::DeltaDerivative,
            0 => Kind::LogConstant,
            _ => poly_kind(&bernoulli_poly(n as usize), n as u32),
        };
        let polys = (n > 0).then(|| {
            let p = bernoulli_poly(n as usize);
            let r = r_poly(&p);
            (p, r)
        });
        Self::assemble("bernoulli".into(), n, kind, polys, moments, None, Some(SignCase::P))
    }

    /// −P_n/n! on [0,1] with P_n = A_n − ∫₀¹A_n; n ≥ 1.
    pub fn appell(seq: &AppellSequence, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("appell representing functions need n >= 1".into()));
        }
        let p = seq.centered_poly(n)?;
        let parity = seq.phi(seq.max_degree())?.parity;
        let sign_case = SignCase::from_parity(parity);
        let delta = ExtendedDeltaSpec::with_case(seq, -(n as i64), sign_case.unwrap_or(SignCase::P))?;
        let kind = poly_kind(&p, n as u32);
        let moments = poly_moments(&p, n as u32);
        let r = r_poly(&p);
        Ok(Self::assemble(seq.label().into(), n as i64, kind, Some((p, r)), moments, Some(delta), sign_case))
    }

    /// The family of `seq` at any n. For n ≤ 0 the hyperfunctions do not
    /// depend on the sequence and coincide with the Bernoulli ones.
    pub fn for_sequence(seq: &AppellSequence, n: i64) -> Result<Self> {
        if n >= 1 {
            return Self::appell(seq, n as usize);
        }
        let mut rf = Self::bernoulli(n);
        rf.label = seq.label().into();
        Ok(rf)
    }

    /// φ(τ + 1) − φ(τ): the representing function of u(x + 1) − u(x), whose
    /// translate sum telescopes to zero.
    pub fn translate_difference(inner: RepresentingFunction) -> Self {
        let label = format!("{}-difference", inner.label);
        let n = inner.n;
        RepresentingFunction {
            label,
            n,
            kind: Kind::TranslateDifference(Box::new(inner)),
            polys: None,
            moments: Vec::new(),
            moments_f64: Vec::new(),
            delta: None,
            sign_case: None,
        }
    }

    fn assemble(
        label: String,
        n: i64,
        kind: Kind,
        polys: Option<(Polynomial, Polynomial)>,
        moments: Vec<Rational>,
        delta: Option<ExtendedDeltaSpec>,
        sign_case: Option<SignCase>,
    ) -> Self {
        let moments_f64 = moments.iter().map(rational::to_f64).collect();
        RepresentingFunction { label, n, kind, polys, moments, moments_f64, delta, sign_case }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn case_tag(&self) -> &'static str {
        match self.kind {
            Kind::DeltaDerivative => "delta-derivative",
            Kind::LogConstant => "log-constant",
            Kind::PolyLog { .. } => "poly-log-remainder",
            Kind::TranslateDifference(_) => "translate-difference",
        }
    }

    /// (P_n, R_n) for n > 0.
    pub fn polynomials(&self) -> Option<&(Polynomial, Polynomial)> {
        self.polys.as_ref()
    }

    pub fn sign_case(&self) -> Option<SignCase> {
        self.sign_case
    }

    /// ⟨u, xᵐ⟩, exact.
    pub fn exact_pairing(&self, m: usize) -> Result<Rational> {
        if let Kind::TranslateDifference(_) = self.kind {
            return Err(Error::NotApplicable("support is not [0,1]".into()));
        }
        if m < MOMENTS {
            return Ok(self.moments[m].clone());
        }
        Ok(match (&self.kind, &self.polys) {
            (Kind::PolyLog { .. }, Some((p, _))) => poly_moment(p, self.n as u32, m),
            (Kind::LogConstant, _) => -Rational::new(1.into(), (m as i64 + 1).into()),
            _ => Rational::zero(),
        })
    }

    /// ⟨u, ψ⟩, exact.
    pub fn exact_pairing_poly(&self, psi: &Polynomial) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in psi.coeffs().iter().enumerate() {
            acc += c * self.exact_pairing(m)?;
        }
        Ok(acc)
    }

    /// φ(τ); τ must lie off [0,1].
    pub fn eval(&self, tau: Complex64) -> Result<Complex64> {
        let tau = ensure_finite(tau)?;
        if let Kind::TranslateDifference(inner) = &self.kind {
            return Ok(inner.eval(tau + 1.0)? - inner.eval(tau)?);
        }
        if tau.im == 0.0 && (0.0..=1.0).contains(&tau.re) {
            return Err(Error::OnSegment);
        }
        Ok(self.eval_unchecked(tau))
    }

    fn eval_unchecked(&self, tau: Complex64) -> Complex64 {
        match &self.kind {
            Kind::TranslateDifference(inner) => inner.eval_unchecked(tau + 1.0) - inner.eval_unchecked(tau),
            Kind::DeltaDerivative => {
                let m = -self.n;
                let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
                let f = rational::to_f64(&Rational::from_integer(factorial(m as u32)));
                sign * f / (PI * powi(tau, m + 1))
            }
            _ if tau.norm() >= EXPANSION_RADIUS => self.expansion(tau),
            Kind::LogConstant => -(1.0 + tau * (1.0 - 1.0 / tau).ln()) / (PI * tau),
            Kind::PolyLog { p, r, n_fact } => {
                let l = (1.0 - 1.0 / tau).ln();
                -(horner(p, tau) * l + horner(r, tau)) / (PI * n_fact)
            }
        }
    }

    /// −(1/π) Σ_m ⟨u,xᵐ⟩ τ^{−m−1}, truncated where |τ|^{−m} drops below 1e−18.
    fn expansion(&self, tau: Complex64) -> Complex64 {
        let w = 1.0 / tau;
        let terms = ((18.0 * std::f64::consts::LN_10 / tau.norm().ln()).ceil() as usize + 1).min(MOMENTS);
        let mut acc = Complex64::zero();
        for mu in self.moments_f64[..terms].iter().rev() {
            acc = acc * w + mu;
        }
        -(acc * w) / PI
    }

    /// Leading power d with φ(τ) ~ τ^{−d}.
    fn decay_order(&self) -> usize {
        match &self.kind {
            Kind::TranslateDifference(inner) => inner.decay_order() + 1,
            _ => self.moments.iter().position(|m| !m.is_zero()).map_or(MOMENTS, |m| m + 1),
        }
    }
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a)
}

fn poly_kind(p: &Polynomial, n: u32) -> Kind {
    let r = r_poly(p);
    Kind::PolyLog {
        p: p.coeffs().iter().map(rational::to_f64).collect(),
        r: r.coeffs().iter().map(rational::to_f64).collect(),
        n_fact: rational::to_f64(&Rational::from_integer(factorial(n))),
    }
}

/// −(1/n!)∫₀¹ p(x)xᵐ dx
fn poly_moment(p: &Polynomial, n: u32, m: usize) -> Rational {
    let s: Rational = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c / int((i + m + 1) as i64))
        .sum();
    -s / Rational::from_integer(factorial(n))
}

fn poly_moments(p: &Polynomial, n: u32) -> Vec<Rational> {
    (0..MOMENTS).map(|m| poly_moment(p, n, m)).collect()
}

pub fn phi_repr(rf: &RepresentingFunction, tau: Complex64) -> Result<Complex64> {
    rf.eval(tau)
}

/// Σ_{k=−K}^{K} φ(τ + k), compensated, in a fixed reduction order.
pub fn translate_sum_with(exec: Execution, rf: &RepresentingFunction, tau: Complex64, k: u64) -> Result<CompensatedSum> {
    let tau = ensure_finite(tau)?;
    if tau.im == 0.0 {
        return Err(Error::InvalidArgument("translate sums need Im tau != 0".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let k = k as i64;
    Ok(par::sum_range(exec, -k, k, |j| rf.eval_unchecked(tau + j as f64)))
}

pub fn translate_sum(rf: &RepresentingFunction, tau: Complex64, k: u64) -> Result<Complex64> {
    Ok(translate_sum_with(Execution::default(), rf, tau, k)?.value())
}

/// Σ_{|k|>K} φ(τ+k) from the moment expansion, each Σ_{k>K}(τ±k)^{−m−1}
/// summed by Euler–Maclaurin. Requires ⟨u,1⟩ = 0 and K ≥ 2|τ| + 10.
pub fn tail_correction(rf: &RepresentingFunction, tau: Complex64, k: u64) -> Result<Complex64> {
    if matches!(rf.kind, Kind::TranslateDifference(_)) || !rf.moments[0].is_zero() {
        return Err(Error::NotApplicable(format!("{}: no tail expansion", rf.label)));
    }
    if (k as f64) < 2.0 * tau.norm() + 10.0 {
        return Err(Error::InvalidArgument("K too small for the tail expansion".into()));
    }
    let a = (k + 1) as f64;
    let mut total = Complex64::zero();
    for (m, mu) in rf.moments_f64.iter().enumerate().take(24).skip(1) {
        if *mu == 0.0 {
            continue;
        }
        let s = m as u32 + 1;
        let right = em_tail(s, tau, a).0;
        let left = sign_pow(s as i64) * em_tail(s, -tau, a).0;
        total += mu * (right + left);
    }
    Ok(-total / PI)
}

fn tail_estimate(rf: &RepresentingFunction, tau: Complex64, k: u64) -> f64 {
    match tail_correction(rf, tau, k) {
        Ok(c) => c.norm(),
        Err(_) => {
            let d = rf.decay_order().max(2) as f64;
            let kf = k as f64;
            kf * (rf.eval_unchecked(tau + kf).norm() + rf.eval_unchecked(tau - kf).norm()) / (d - 1.0)
        }
    }
}

fn sign_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The sign of Δ_{−n}(1/q) on the lower half-plane: (−1)^{n−1} in the
/// P-case, (−1)ⁿ in the Q-case.
pub fn lower_sign(case: SignCase, n: i64) -> f64 {
    match case {
        SignCase::P => sign_pow(n - 1),
        SignCase::Q => sign_pow(n),
    }
}

fn delta_side(rf: &RepresentingFunction, q: Complex64) -> Result<Complex64> {
    Ok(match &rf.delta {
        Some(spec) => extended_delta_eval(spec, q)?.value,
        None => delta_eval(-rf.n, q)?.value,
    })
}

/// Translate sum of φ against 2i(2πi)^{−n}Δ_{−n}(q) for Im τ > 0, or
/// 2i(2πi)^{−n}·s·Δ_{−n}(1/q) for Im τ < 0 with s from the sign case.
pub fn lipschitz_defect_with(exec: Execution, rf: &RepresentingFunction, tau: Complex64, k: u64) -> Result<DefectReport> {
    let sign = if tau.im < 0.0 {
        let case = rf
            .sign_case
            .ok_or_else(|| Error::NotApplicable(format!("{}: no sign case for the lower half-plane", rf.label)))?;
        lower_sign(case, rf.n)
    } else {
        1.0
    };
    lipschitz_defect_signed(exec, rf, tau, k, sign)
}

pub fn lipschitz_defect(rf: &RepresentingFunction, tau: Complex64, k: u64) -> Result<DefectReport> {
    lipschitz_defect_with(Execution::default(), rf, tau, k)
}

/// As [`lipschitz_defect_with`] with an explicit lower-half-plane sign.
pub fn lipschitz_defect_signed(
    exec: Execution,
    rf: &RepresentingFunction,
    tau: Complex64,
    k: u64,
    lower_sign: f64,
) -> Result<DefectReport> {
    if matches!(rf.kind, Kind::TranslateDifference(_)) {
        return Err(Error::NotApplicable("no q-series side for translate differences".into()));
    }
    let sum = translate_sum_with(exec, rf, tau, k)?;
    let q = Complex64::from_polar((-TWO_PI * tau.im).exp(), TWO_PI * tau.re);
    let scale = 2.0 * Complex64::i() * powi(two_pi_i(), -rf.n);
    let rhs = if tau.im > 0.0 { scale * delta_side(rf, q)? } else { scale * lower_sign * delta_side(rf, 1.0 / q)? };
    let floor = 64.0 * f64::EPSILON * (sum.abs_sum() + rhs.norm());
    Ok(DefectReport::new("lipschitz", &rf.label, rf.n, tau, k, sum.value(), rhs, tail_estimate(rf, tau, k), floor))
}

/// [`lipschitz_defect_with`] with the truncated tail added back through
/// [`tail_correction`].
pub fn lipschitz_defect_corrected(exec: Execution, rf: &RepresentingFunction, tau: Complex64, k: u64) -> Result<DefectReport> {
    let raw = lipschitz_defect_with(exec, rf, tau, k)?;
    let corr = tail_correction(rf, tau, k)?;
    let lhs = raw.lhs + corr;
    Ok(DefectReport::new("lipschitz-corrected", &rf.label, rf.n, tau, k, lhs, raw.rhs, corr.norm(), raw.noise_floor))
}

/// Checks Σ_{n∈ℤ}(n+z)^{−k} = ((−2πi)ᵏ/(k−1)!) Σ_{r≥1} r^{k−1} e^{2πirz}.
///
/// The left side is the symmetric partial sum over |n| ≤ K plus an
/// Euler–Maclaurin estimate of both tails; the right side is summed until
/// its geometric tail bound is negligible.
pub fn classical_lipschitz_check(k: u32, z: Complex64, trunc: u64) -> Result<DefectReport> {
    let z = ensure_finite(z)?;
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if z.im <= 0.0 {
        return Err(Error::InvalidArgument("Im z must be positive".into()));
    }
    let kk = trunc.max(1) as i64;
    let mut lhs = CompensatedSum::new();
    for n in -kk..=kk {
        lhs.add(powi(z + n as f64, -(k as i64)));
    }
    let a = (kk + 1) as f64;
    let (right, e1) = em_tail(k, z, a);
    let (left, e2) = em_tail(k, -z, a);
    let sign = sign_pow(k as i64);
    lhs.add(right);
    lhs.add(sign * left);

    let q = Complex64::from_polar((-TWO_PI * z.im).exp(), TWO_PI * z.re);
    let rq = q.norm();
    let mut rhs_sum = CompensatedSum::new();
    let mut qr = Complex64::new(1.0, 0.0);
    let mut r = 0u64;
    let mut rhs_tail;
    loop {
        r += 1;
        qr *= q;
        rhs_sum.add(qr * (r as f64).powi(k as i32 - 1));
        // Terms beyond r shrink at least by ρ = |q|((r+2)/(r+1))^{k−1} < 1.
        let rho = rq * ((r + 2) as f64 / (r + 1) as f64).powi(k as i32 - 1);
        let next = ((r + 1) as f64).powi(k as i32 - 1) * rq.powi(r as i32 + 1);
        rhs_tail = if rho < 1.0 { next / (1.0 - rho) } else { f64::INFINITY };
        if rhs_tail <= 1e-18 * rhs_sum.value().norm() || r > 1_000_000 {
            break;
        }
    }
    let pref = powi(-two_pi_i(), k as i64) / rational::to_f64(&Rational::from_integer(factorial(k - 1)));
    let rhs = pref * rhs_sum.value();
    let floor = 64.0 * f64::EPSILON * (lhs.abs_sum() + rhs.norm());
    let tail = e1 + e2 + pref.norm() * rhs_tail;
    Ok(DefectReport::new("classical-lipschitz", "", k as i64, z, trunc, lhs.value(), rhs, tail, floor).with_measure(Measure::Relative))
}

/// Smallest K = 25·2ʲ whose reported tail estimate is below 1e−14 of the
/// right side, capped at 2²⁰.
pub fn classical_truncation(k: u32, z: Complex64) -> Result<u64> {
    let mut trunc = 25;
    loop {
        let r = classical_lipschitz_check(k, z, trunc)?;
        if r.tail_estimate <= 1e-14 * r.rhs.norm() || trunc >= 1 << 20 {
            return Ok(trunc);
        }
        trunc *= 2;
    }
}

/// Σ_{n≥a} (n+z)^{−k} by Euler–Maclaurin at a; returns the value and the
/// size of the last correction used.
fn em_tail(k: u32, z: Complex64, a: f64) -> (Complex64, f64) {
    let x = z + a;
    let kf = k as f64;
    let mut s = powi(x, 1 - k as i64) / (kf - 1.0) + 0.5 * powi(x, -(k as i64));
    // f^{(2j−1)}(a) = −k(k+1)…(k+2j−2)·(a+z)^{−k−2j+1}
    let mut rising = kf;
    let mut last = 0.0;
    for j in 1..=8usize {
        if j > 1 {
            rising *= (kf + 2.0 * j as f64 - 3.0) * (kf + 2.0 * j as f64 - 2.0);
        }
        let deriv = -rising * powi(x, -(k as i64) - 2 * j as i64 + 1);
        let term = -bernoulli_even_ratio(j) * deriv;
        s += term;
        last = term.norm();
    }
    (s, last)
}

/// π²/sin²(πz) = Σ_n (n+z)^{−2}
pub fn cosecant_squared_oracle(z: Complex64) -> Complex64 {
    let s = (PI * z).sin();
    PI * PI / (s * s)
}

/// Axis-parallel rectangle [x0, x1] × [−h, h] around [0,1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectangle {
    pub x0: f64,
    pub x1: f64,
    pub h: f64,
}

impl Rectangle {
    pub fn with_margin(margin: f64) -> Self {
        Rectangle { x0: -margin, x1: 1.0 + margin, h: margin }
    }

    fn margin(&self) -> f64 {
        (-self.x0).min(self.x1 - 1.0).min(self.h)
    }
}

/// (i/2)∮ φψ dz counterclockwise around the rectangle, by adaptive
/// Gauss–Legendre on each edge.
pub fn contour_pairing_fn(phi: impl Fn(Complex64) -> Complex64, psi: &Polynomial, rect: Rectangle) -> Result<Complex64> {
    if rect.margin() < 0.1 {
        return Err(Error::InvalidArgument(format!("contour margin {} below 0.1", rect.margin())));
    }
    let psi_f: Vec<f64> = psi.coeffs().iter().map(rational::to_f64).collect();
    let f = |z: Complex64| phi(z) * horner(&psi_f, z);
    let corners = [
        Complex64::new(rect.x0, -rect.h),
        Complex64::new(rect.x1, -rect.h),
        Complex64::new(rect.x1, rect.h),
        Complex64::new(rect.x0, rect.h),
    ];
    let mut total = Complex64::zero();
    for i in 0..4 {
        total += integrate_segment(f, corners[i], corners[(i + 1) % 4], 1e-14).value;
    }
    Ok(0.5 * Complex64::i() * total)
}

pub fn contour_pairing(rf: &RepresentingFunction, psi: &Polynomial, rect: Rectangle) -> Result<Complex64> {
    if matches!(rf.kind, Kind::TranslateDifference(_)) {
        return Err(Error::NotApplicable("support is not [0,1]".into()));
    }
    contour_pairing_fn(|z| rf.eval_unchecked(z), psi, rect)
}

/// Contour pairing against xᵐ compared with the exact moment. The point
/// records (m, rectangle half-height).
pub fn pairing_check(rf: &RepresentingFunction, m: usize, rect: Rectangle) -> Result<DefectReport> {
    let lhs = contour_pairing(rf, &Polynomial::monomial(m), rect)?;
    let rhs = Complex64::new(rational::to_f64(&rf.exact_pairing(m)?), 0.0);
    let floor = 1e-13 * (1.0 + lhs.norm() + rhs.norm());
    Ok(DefectReport::new("pairing", &rf.label, rf.n, Complex64::new(m as f64, rect.h), 0, lhs, rhs, 1e-14, floor))
}

/// δ_n(e^{2πix}e^{−2πε}) + (−1)ⁿδ_n(e^{−2πix}e^{−2πε}) for n ≤ −1.
pub fn boundary_lhs(n: i64, x: f64, eps: f64) -> Result<Complex64> {
    let r = (-TWO_PI * eps).exp();
    let up = delta_eval(n, Complex64::from_polar(r, TWO_PI * x))?.value;
    let down = delta_eval(n, Complex64::from_polar(r, -TWO_PI * x))?.value;
    Ok(up + sign_pow(n) * down)
}

/// (2πi)^{−n}·(−B_{−n}(x)/(−n)!)
pub fn boundary_rhs(n: i64, x: f64) -> Complex64 {
    let m = (-n) as u32;
    let b = bernoulli_poly(m as usize).eval_f64(x) / rational::to_f64(&Rational::from_integer(factorial(m)));
    -powi(two_pi_i(), m as i64) * b
}

fn check_boundary_args(n: i64, x: f64, eps: f64) -> Result<()> {
    if n > -1 {
        return Err(Error::InvalidArgument("boundary check needs n <= -1".into()));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidArgument("x must lie in (0,1)".into()));
    }
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(Error::InvalidArgument("eps must lie in (0, 0.1]".into()));
    }
    Ok(())
}

/// Unextrapolated defect at a single ε.
pub fn boundary_raw_defect(n: i64, x: f64, eps: f64) -> Result<f64> {
    check_boundary_args(n, x, eps)?;
    Ok((boundary_lhs(n, x, eps)? - boundary_rhs(n, x)).norm())
}

/// Richardson extrapolation ε → 0 from ε, ε/2, ε/4 (ratio 2).
pub fn boundary_value_check(n: i64, x: f64, eps: f64) -> Result<DefectReport> {
    check_boundary_args(n, x, eps)?;
    let l0 = boundary_lhs(n, x, eps)?;
    let l1 = boundary_lhs(n, x, eps / 2.0)?;
    let l2 = boundary_lhs(n, x, eps / 4.0)?;
    let r01 = 2.0 * l1 - l0;
    let r12 = 2.0 * l2 - l1;
    let extrapolated = (4.0 * r12 - r01) / 3.0;
    let rhs = boundary_rhs(n, x);
    let floor = 64.0 * f64::EPSILON * (l2.norm() + rhs.norm());
    let tail = (extrapolated - r12).norm();
    Ok(DefectReport::new("boundary", "bernoulli", n, Complex64::new(x, eps), 0, extrapolated, rhs, tail, floor))
}

/// Exact coefficient helper for tests and reports: −∫₀¹B_n xᵐ/n!.
pub fn bernoulli_moment(n: u32, m: usize) -> Rational {
    poly_moment(&bernoulli_poly(n as usize), n, m)
}
