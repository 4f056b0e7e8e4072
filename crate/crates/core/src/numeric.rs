//! Floating-point machinery: compensated sums, Gauss–Legendre quadrature,
//! ζ at integers and the logarithmic expansion of polylogarithms about q = 1.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::appell::bernoulli_numbers;
use crate::error::{Error, Result};
use crate::rational::{factorial, to_f64, Rational};

pub const TWO_PI: f64 = 2.0 * PI;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2πi
pub fn two_pi_i() -> Complex64 {
    c64(0.0, TWO_PI)
}

pub fn ensure_finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}

/// zⁿ for any integer n.
pub fn powi(z: Complex64, n: i64) -> Complex64 {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        z.powu((-n) as u32).inv()
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, forms with `e` exponents and
/// fractions such as `1/2+3/4i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let imag_part = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => parse_real(p).ok_or_else(bad),
        }
    };
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return ensure_finite(c64(parse_real(&t).ok_or_else(bad)?, 0.0));
    };
    // Split at the last sign that is not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let z = match split {
        Some(k) => c64(parse_real(&body[..k]).ok_or_else(bad)?, imag_part(&body[k..])?),
        None => c64(0.0, imag_part(body)?),
    };
    ensure_finite(z)
}

fn parse_real(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.parse::<f64>().ok()? / b.parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
        self.abs += x.norm();
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
        // add() counted the partial sums themselves; replace with the true total.
        self.abs += other.abs - other.sum.norm() - other.comp.norm();
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    /// Σ|xₖ|, the scale against which rounding error is measured.
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 - 1.0) * z * p2 - (j as f64 - 1.0) * p3) / j as f64;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(20))
}

fn gl_panel(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let (x, w) = gl20();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(w).map(|(&xi, &wi)| f(mid + half * xi) * wi).sum::<Complex64>() * half
}

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub error_estimate: f64,
}

/// Adaptive composite Gauss–Legendre (20 points per panel) of a
/// complex-valued function over the real interval [a, b].
///
/// A panel is accepted once its two halves agree to within its share of
/// `tol` or to within rounding of the panel magnitude; at most 2¹⁴ panels
/// are ever evaluated.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Quadrature {
    const MAX_PANELS: usize = 1 << 14;
    struct State<'a, F> {
        f: &'a F,
        panels: usize,
    }
    fn recurse<F: Fn(f64) -> Complex64>(
        st: &mut State<'_, F>,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
    ) -> (Complex64, f64) {
        let m = 0.5 * (a + b);
        let left = gl_panel(st.f, a, m);
        let right = gl_panel(st.f, m, b);
        st.panels += 2;
        let sum = left + right;
        let err = (sum - whole).norm();
        let floor = 64.0 * f64::EPSILON * (left.norm() + right.norm());
        if err <= tol.max(floor) || st.panels >= MAX_PANELS || m <= a || m >= b {
            return (sum, err);
        }
        let (l, el) = recurse(st, a, m, left, 0.5 * tol);
        let (r, er) = recurse(st, m, b, right, 0.5 * tol);
        (l + r, el + er)
    }
    let whole = gl_panel(&f, a, b);
    let mut st = State { f: &f, panels: 1 };
    let (value, error_estimate) = recurse(&mut st, a, b, whole, tol);
    Quadrature { value, error_estimate }
}

/// ∫ f(z) dz along the straight segment from z0 to z1.
pub fn integrate_segment(f: impl Fn(Complex64) -> Complex64, z0: Complex64, z1: Complex64, tol: f64) -> Quadrature {
    let dz = z1 - z0;
    let q = integrate(|s| f(z0 + dz * s), 0.0, 1.0, tol / dz.norm().max(1e-300));
    Quadrature { value: q.value * dz, error_estimate: q.error_estimate * dz.norm() }
}

/// B₂ⱼ/(2j)! in floating point, j = 0..=60.
pub fn bernoulli_even_ratio(j: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let b = bernoulli_numbers(120);
        (0..=60)
            .map(|j| to_f64(&(&b[2 * j] / Rational::from_integer(factorial(2 * j as u32)))))
            .collect()
    });
    t[j]
}

/// ζ(s) for integer s ≥ 2.
pub fn zeta_int(s: u32) -> f64 {
    assert!(s >= 2, "zeta_int needs s >= 2");
    if s > 50 {
        return (1..=4).map(|k| (k as f64).powi(-(s as i32))).sum();
    }
    const N: u32 = 12;
    let sf = s as f64;
    let nf = N as f64;
    let mut sum: f64 = (1..N).map(|k| (k as f64).powf(-sf)).sum();
    sum += nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf);
    // Σ B₂ⱼ/(2j)! · s(s+1)…(s+2j-2) · N^{1-s-2j}
    let mut rising = sf;
    for j in 1..=12usize {
        if j > 1 {
            rising *= (sf + 2.0 * j as f64 - 3.0) * (sf + 2.0 * j as f64 - 2.0);
        }
        sum += bernoulli_even_ratio(j) * rising * nf.powf(1.0 - sf - 2.0 * j as f64);
    }
    sum
}

pub fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Largest |μ| accepted by [`polylog_log_series`] (a fixed fraction of the
/// radius of convergence 2π).
pub const LOG_SERIES_MAX_MU: f64 = 0.9 * TWO_PI;

#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: Complex64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// Li_m(e^μ), principal branch, from the expansion about μ = 0:
///
/// Li_m(e^μ) = Σ_{k≠m-1} ζ(m-k) μᵏ/k! + μ^{m-1}/(m-1)! · (H_{m-1} - log(-μ)).
///
/// The odd-index tail is bounded using |B₂ᵢ|/(2i)! < 4/(2π)^{2i}.
pub fn polylog_log_series(m: u32, mu: Complex64, target: f64) -> Result<SeriesValue> {
    assert!(m >= 1);
    let r = mu.norm() / TWO_PI;
    if mu.norm() > LOG_SERIES_MAX_MU {
        return Err(Error::OutOfRange(format!("|log q| = {} too large for the log expansion", mu.norm())));
    }
    if mu.norm() == 0.0 && m == 1 {
        return Err(Error::Pole);
    }
    let mut sum = CompensatedSum::new();
    let mut mu_pow = Complex64::new(1.0, 0.0);
    let mut fact = 1.0;
    for k in 0..m.saturating_sub(1) {
        sum.add(mu_pow * (zeta_int(m - k) / fact));
        mu_pow *= mu;
        fact *= (k + 1) as f64;
    }
    // mu_pow = μ^{m-1}, fact = (m-1)!
    let lead = mu_pow / fact;
    if mu.norm() > 0.0 {
        sum.add(lead * (harmonic(m - 1) - (-mu).ln()));
    }
    let mu_m = mu_pow * mu;
    sum.add(-mu_m / (2.0 * fact * m as f64));

    let x2 = (mu / TWO_PI) * (mu / TWO_PI);
    let mut xpow = Complex64::new(1.0, 0.0);
    let scale = mu.norm().powi(m as i32 - 1);
    let mut terms = m as usize + 1;
    let mut tail = 0.0;
    for i in 1..=400u32 {
        xpow *= x2;
        let denom: f64 = (0..m).map(|l| (2 * i + l) as f64).product();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(mu_pow * xpow * (sign * 2.0 * zeta_int(2 * i) / denom));
        terms += 2;
        tail = 4.0 * scale * r.powi(2 * i as i32 + 2) / (1.0 - r * r);
        if tail <= target {
            break;
        }
    }
    Ok(SeriesValue { value: sum.value(), terms, tail_bound: tail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0.5").unwrap(), c64(0.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c64(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("0.3+0.7i").unwrap(), c64(0.3, 0.7));
        assert_eq!(parse_complex("1e-3-2.5e+1i").unwrap(), c64(1e-3, -25.0));
        assert_eq!(parse_complex("1/2+i").unwrap(), c64(0.5, 1.0));
        assert_eq!(parse_complex("-1/4-3/4i").unwrap(), c64(-0.25, -0.75));
        assert!(parse_complex("1/").is_err());
        assert!(parse_complex("1/0").is_err());
        assert!(parse_complex("empty").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((i - 2.0 / 19.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_quadrature() {
        let q = integrate(|t| c64((TWO_PI * t).cos(), (TWO_PI * t).sin()) * t, 0.0, 1.0, 1e-13);
        // ∫₀¹ t e^{2πit} dt = 1/(2πi)
        assert!((q.value - c64(0.0, -1.0 / TWO_PI)).norm() < 1e-13);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_int(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_int(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta_int(3) - 1.202_056_903_159_594_2).abs() < 1e-15);
        assert!((zeta_int(60) - 1.0).abs() < 1e-17);
    }

    #[test]
    fn log_series_against_closed_forms() {
        // Li₁(q) = -log(1-q)
        for q in [c64(0.95, 0.1), c64(-1.0, 0.0), c64(0.3, -0.95), c64(1.05, 0.02)] {
            let v = polylog_log_series(1, q.ln(), 1e-18).unwrap();
            assert!((v.value + (1.0 - q).ln()).norm() < 1e-14, "{q}");
        }
        // Li₂(-1) = -π²/12, Li₂(1) = π²/6
        let v = polylog_log_series(2, c64(0.0, PI), 1e-18).unwrap();
        assert!((v.value - c64(-PI * PI / 12.0, 0.0)).norm() < 1e-14);
        let v = polylog_log_series(2, c64(0.0, 0.0), 1e-18).unwrap();
        assert!((v.value.re - PI * PI / 6.0).abs() < 1e-15);
        assert!(polylog_log_series(1, c64(0.0, 0.0), 1e-18).is_err());
        assert!(polylog_log_series(2, c64(6.0, 0.0), 1e-18).is_err());
    }

    #[test]
    fn compensated_sum_merges() {
        let mut a = CompensatedSum::new();
        let mut b = CompensatedSum::new();
        a.add(c64(1e16, 0.0));
        b.add(c64(1.0, -1.0));
        b.add(c64(-1e16, 0.0));
        a.merge(&b);
        assert_eq!(a.value(), c64(1.0, -1.0));
        assert!((a.abs_sum() - 2e16).abs() < 8.0);
    }
}
