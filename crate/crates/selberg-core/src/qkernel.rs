//! Scalar kernels: the `e`/`s` conventions, q-brackets, complex Gamma, the
//! Selberg closed form, intersection numbers, characteristic exponents and
//! the genericity test on an exponent chart.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub const GENERICITY_TOL: f64 = 1e-9;
pub const POLE_TOL: f64 = 1e-12;

/// `e(A) = exp(πi·A)`.
pub fn e_half(a: C64) -> C64 {
    let x = reduce_mod2(a.re);
    let mag = (-PI * a.im).exp();
    C64::new(mag * cos_pi(x), mag * sin_pi(x))
}

/// `sin(πx)` with the argument reduced modulo 2 first.
pub fn sin_pi(x: f64) -> f64 {
    let r = reduce_mod2(x);
    // exact zeros at the integers
    if r == 0.0 || r == 1.0 || r == -1.0 {
        return 0.0;
    }
    if r.abs() == 0.5 {
        return r.signum();
    }
    (PI * r).sin()
}

pub fn cos_pi(x: f64) -> f64 {
    let r = reduce_mod2(x);
    if r.abs() == 0.5 {
        return 0.0;
    }
    (PI * r).cos()
}

/// `sin(πz)` for complex `z`.
pub fn sin_pi_c(z: C64) -> C64 {
    let y = PI * z.im;
    C64::new(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}

pub fn cos_pi_c(z: C64) -> C64 {
    let y = PI * z.im;
    C64::new(cos_pi(z.re) * y.cosh(), -sin_pi(z.re) * y.sinh())
}

/// Maps `x` into `[-1, 1)`.
fn reduce_mod2(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r >= 1.0 {
        r - 2.0
    } else {
        r
    }
}

/// `[n]_q = 1 + q + … + q^(n−1)`.
pub fn q_bracket(n: i64, q: C64) -> Result<C64> {
    if n < 0 {
        return Err(Error::InvalidInput(format!(
            "q-bracket index {n} is negative"
        )));
    }
    let mut sum = C64::new(0.0, 0.0);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..n {
        sum += p;
        p *= q;
    }
    Ok(sum)
}

/// Unit-modulus deformation parameter `q = e(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    pub g: C64,
    pub q: C64,
}

impl QContext {
    pub fn new(g: C64) -> Self {
        QContext { g, q: e_half(g) }
    }

    /// `q^alpha = e(alpha·g)` for any real (typically half-integer) `alpha`.
    pub fn qpow(&self, alpha: f64) -> C64 {
        e_half(self.g * alpha)
    }

    /// `⟨e(λ)·q^alpha⟩_1 = 2i·s(λ + alpha·g)`.
    pub fn angle1(&self, lambda: C64, alpha: f64) -> C64 {
        I * 2.0 * sin_pi_c(lambda + self.g * alpha)
    }
}

/// `⟨A⟩_n = A[n]_q − A⁻¹[n]_{q⁻¹}`.
pub fn angle_bracket(a: C64, n: i64, ctx: &QContext) -> Result<C64> {
    if a.norm() == 0.0 {
        return Err(Error::InvalidInput("angle bracket of zero".into()));
    }
    Ok(a * q_bracket(n, ctx.q)? - q_bracket(n, ctx.q.inv())? / a)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex Gamma via the Lanczos approximation, with reflection for `Re z < 1/2`.
pub fn complex_gamma(z: C64) -> Result<C64> {
    if z.re <= 0.5 {
        let n = z.re.round();
        if n <= 0.0 {
            let d = (z - n).norm();
            if d < POLE_TOL {
                return Err(Error::GammaPole {
                    arg: format!("{z}"),
                    nearest: n as i64,
                    distance: d,
                });
            }
        }
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        return C64::new(PI, 0.0) / (sin_pi_c(z) * gamma_unchecked(C64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = C64::new(LANCZOS[0], 0.0);
    for (k, &p) in LANCZOS.iter().enumerate().skip(1) {
        acc += p / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * acc
}

pub fn beta(x: C64, y: C64) -> Result<C64> {
    Ok(complex_gamma(x)? * complex_gamma(y)? / complex_gamma(x + y)?)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `C(j, 2)` as a float; `C(0,2) = C(1,2) = 0`.
pub fn choose2(j: usize) -> f64 {
    (j * j.saturating_sub(1) / 2) as f64
}

/// Selberg integral over the ordered simplex:
/// `(1/m!) Π Γ(α+(j−1)γ)Γ(β+(j−1)γ)Γ(jγ+1) / (Γ(α+β+(m+j−2)γ)Γ(γ+1))`.
pub fn selberg(m: usize, alpha: C64, beta: C64, gamma: C64) -> Result<C64> {
    let mut acc = C64::new(1.0 / factorial(m), 0.0);
    fn tag(j: usize, f: &'static str) -> impl Fn(Error) -> Error {
        move |e: Error| match e {
            Error::GammaPole {
                arg,
                nearest,
                distance,
            } => Error::GammaPole {
                arg: format!("{arg} (factor {f}, j={j})"),
                nearest,
                distance,
            },
            other => other,
        }
    }
    for j in 1..=m {
        let jf = j as f64;
        let num = complex_gamma(alpha + gamma * (jf - 1.0)).map_err(tag(j, "Γ(α+(j−1)γ)"))?
            * complex_gamma(beta + gamma * (jf - 1.0)).map_err(tag(j, "Γ(β+(j−1)γ)"))?
            * complex_gamma(gamma * jf + 1.0).map_err(tag(j, "Γ(jγ+1)"))?;
        let den = complex_gamma(alpha + beta + gamma * ((m + j) as f64 - 2.0))
            .map_err(tag(j, "Γ(α+β+(m+j−2)γ)"))?
            * complex_gamma(gamma + 1.0).map_err(tag(j, "Γ(γ+1)"))?;
        acc *= num / den;
    }
    Ok(acc)
}

fn checked_sin(x: C64, what: &str, j: usize) -> Result<C64> {
    let s = sin_pi_c(x);
    if s.norm() < POLE_TOL {
        return Err(Error::vanishing(what, format!("j={j}"), s.norm()));
    }
    Ok(s)
}

/// Self-intersection number of the loaded ordered simplex:
/// `m!·(i/2)^m·Π s(α+β+(m+j−2)γ)s(γ) / (s(α+(j−1)γ)s(β+(j−1)γ)s(jγ))`.
pub fn intersection_jm(m: usize, alpha: C64, beta: C64, gamma: C64) -> Result<C64> {
    let mut acc = C64::new(factorial(m), 0.0) * (I / 2.0).powu(m as u32);
    for j in 1..=m {
        let jf = j as f64;
        let num = sin_pi_c(alpha + beta + gamma * ((m + j) as f64 - 2.0)) * sin_pi_c(gamma);
        let den = checked_sin(alpha + gamma * (jf - 1.0), "s(α+(j−1)γ)", j)?
            * checked_sin(beta + gamma * (jf - 1.0), "s(β+(j−1)γ)", j)?
            * checked_sin(gamma * jf, "s(jγ)", j)?;
        acc *= num / den;
    }
    Ok(acc)
}

/// The exponent pack `(m, a, b, c, g)`; `λ∞ = −a−b−c−(m−1)g` is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentChart {
    pub m: usize,
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub g: C64,
}

impl ExponentChart {
    pub fn new(m: usize, a: C64, b: C64, c: C64, g: C64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        Ok(ExponentChart { m, a, b, c, g })
    }

    pub fn real(m: usize, a: f64, b: f64, c: f64, g: f64) -> Result<Self> {
        Self::new(m, a.into(), b.into(), c.into(), g.into())
    }

    pub fn lambda_inf(&self) -> C64 {
        -self.a - self.b - self.c - self.g * (self.m as f64 - 1.0)
    }

    pub fn qctx(&self) -> QContext {
        QContext::new(self.g)
    }

    /// Same chart with `a` and `b` exchanged.
    pub fn swap_ab(&self) -> Self {
        ExponentChart {
            a: self.b,
            b: self.a,
            ..*self
        }
    }

    pub fn is_real(&self) -> bool {
        [self.a, self.b, self.c, self.g].iter().all(|z| z.im == 0.0)
    }

    /// Real parts `(a, b, c, g)`; only meaningful when `is_real`.
    pub fn real_parts(&self) -> (f64, f64, f64, f64) {
        (self.a.re, self.b.re, self.c.re, self.g.re)
    }

    pub fn violations(&self) -> Vec<GenericityViolation> {
        genericity_check(self, GENERICITY_TOL)
    }

    pub fn require_generic(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::NonGeneric(msg.join("; ")))
        }
    }
}

/// The chart `m = 2ρ, a = b = c = −ρ/(2ρ+1), g = 1/(2ρ+1)`.
pub fn dtype_chart(rho: usize) -> Result<ExponentChart> {
    if rho == 0 {
        return Err(Error::InvalidInput("rho must be positive".into()));
    }
    let den = (2 * rho + 1) as f64;
    let a = -(rho as f64) / den;
    ExponentChart::real(2 * rho, a, a, a, 1.0 / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    Zero,
    One,
    Infinity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharExponents {
    pub singularity: Singularity,
    pub values: Vec<C64>,
}

/// Local exponents `e_j` at 0, 1 or ∞ for `0 ≤ j ≤ m`.
pub fn char_exponents(chart: &ExponentChart, at: Singularity) -> CharExponents {
    let m = chart.m;
    let ExponentChart { a, b, c, g, .. } = *chart;
    let values = (0..=m)
        .map(|j| {
            let jf = j as f64;
            match at {
                Singularity::Zero => (a + c + 1.0) * jf + g * choose2(j),
                Singularity::One => (b + c + 1.0) * jf + g * choose2(j),
                Singularity::Infinity => {
                    -(a + b + 1.0) * jf - c * m as f64 - g * (choose2(j) + (j * (m - j)) as f64)
                }
            }
        })
        .collect();
    CharExponents {
        singularity: at,
        values,
    }
}

/// Smallest distance from the integers of any difference of local exponents at 0, 1 or ∞.
/// Near zero, local monodromy eigenvalues almost coincide and the connection matrix is
/// badly conditioned even when the chart is generic.
pub fn resonance_distance(chart: &ExponentChart) -> f64 {
    let mut worst = f64::INFINITY;
    for at in [Singularity::Zero, Singularity::One, Singularity::Infinity] {
        let e = char_exponents(chart, at).values;
        for j in 0..e.len() {
            for k in 0..j {
                let d = e[j] - e[k];
                worst = worst.min(C64::new(d.re - d.re.round(), d.im).norm());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
    C,
    LambdaInf,
    G,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityViolation {
    pub family: Family,
    pub i: usize,
    pub value: C64,
    pub nearest: i64,
}

impl fmt::Display for GenericityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::A => "i·a+C(i,2)g",
            Family::B => "i·b+C(i,2)g",
            Family::C => "i·c+C(i,2)g",
            Family::LambdaInf => "i·λ∞+C(i,2)g",
            Family::G => "C(i,2)g",
        };
        write!(
            f,
            "{name} at i={} equals {} ≈ {}",
            self.i, self.value, self.nearest
        )
    }
}

/// Lists every quantity of the five families within `tol` of an integer.
pub fn genericity_check(chart: &ExponentChart, tol: f64) -> Vec<GenericityViolation> {
    let mut out = Vec::new();
    let linf = chart.lambda_inf();
    for i in 1..=chart.m {
        let shift = chart.g * choose2(i);
        let fams = [
            (Family::A, chart.a * i as f64 + shift),
            (Family::B, chart.b * i as f64 + shift),
            (Family::C, chart.c * i as f64 + shift),
            (Family::LambdaInf, linf * i as f64 + shift),
            (Family::G, shift),
        ];
        for (family, value) in fams {
            // C(1,2)g = 0 carries no condition
            if family == Family::G && i < 2 {
                continue;
            }
            let nearest = value.re.round();
            if (value - nearest).norm() < tol {
                out.push(GenericityViolation {
                    family,
                    i,
                    value,
                    nearest: nearest as i64,
                });
            }
        }
    }
    out
}

/// `J_k(α,β,γ)` products at the chart's cycle `C_k`:
/// `C(m,k)·J_k(a, c, g/2)·J_{m−k}(b, λ∞, g/2)`.
pub fn cycle_self_intersection(chart: &ExponentChart, k: usize) -> Result<C64> {
    if k > chart.m {
        return Err(Error::InvalidInput(format!(
            "cycle index {k} exceeds m={}",
            chart.m
        )));
    }
    let half = chart.g / 2.0;
    let near = intersection_jm(k, chart.a, chart.c, half)?;
    let far = intersection_jm(chart.m - k, chart.b, chart.lambda_inf(), half)?;
    Ok(binomial(chart.m, k) * near * far)
}
