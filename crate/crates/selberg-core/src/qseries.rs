//! Terminating basic hypergeometric series, Gauss ₂F₁, q-Racah polynomials and
//! the Watson/Sears transformations as residual checks.

use crate::error::{Error, Result};
use crate::qkernel::C64;
use crate::sum::ComplexSum;

pub const TERMINATION_TOL: f64 = 1e-10;
pub const VANISHING_TOL: f64 = 1e-12;

/// `(a;q)_n = Π_{0≤i<n} (1 − a q^i)`.
pub fn qpoch(a: C64, q: C64, n: i64) -> Result<C64> {
    if n < 0 {
        return Err(Error::InvalidInput(format!(
            "q-Pochhammer length {n} is negative"
        )));
    }
    let mut acc = C64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..n {
        acc *= 1.0 - aq;
        aq *= q;
    }
    Ok(acc)
}

/// Product of several q-Pochhammer symbols of the same length.
pub fn qpoch_many(params: &[C64], q: C64, n: i64) -> Result<C64> {
    params
        .iter()
        .try_fold(C64::new(1.0, 0.0), |acc, &a| Ok(acc * qpoch(a, q, n)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminatingSeriesSpec {
    pub numerators: Vec<C64>,
    pub denominators: Vec<C64>,
    pub q: C64,
    pub argument: C64,
    pub termination_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub terms: usize,
    /// `Σ |term|`; its ratio to `|value|` measures cancellation.
    pub abs_sum: f64,
}

impl TerminatingSeriesSpec {
    pub fn new(
        numerators: Vec<C64>,
        denominators: Vec<C64>,
        q: C64,
        argument: C64,
        n: usize,
    ) -> Self {
        TerminatingSeriesSpec {
            numerators,
            denominators,
            q,
            argument,
            termination_index: n,
        }
    }

    /// Balanced `₄φ₃` at argument `q`.
    pub fn phi43(num: [C64; 4], den: [C64; 3], q: C64, n: usize) -> Self {
        Self::new(num.to_vec(), den.to_vec(), q, q, n)
    }

    fn check_termination(&self) -> Result<()> {
        let target = self.q.powi(-(self.termination_index as i32));
        if self
            .numerators
            .iter()
            .any(|&a| (a - target).norm() < TERMINATION_TOL)
        {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "no numerator parameter equals q^-{}; series would not terminate",
                self.termination_index
            )))
        }
    }
}

/// Finite sum of the `termination_index + 1` terms, accumulated in index order.
pub fn phi(spec: &TerminatingSeriesSpec) -> Result<SeriesValue> {
    spec.check_termination()?;
    let q = spec.q;
    let mut sum = ComplexSum::new();
    let mut term = C64::new(1.0, 0.0);
    let mut qk = C64::new(1.0, 0.0);
    let mut abs_sum = 1.0;
    sum.add(term);
    for k in 0..spec.termination_index {
        let mut ratio = spec.argument;
        for &a in &spec.numerators {
            ratio *= 1.0 - a * qk;
        }
        for (j, &b) in spec.denominators.iter().enumerate() {
            let f = 1.0 - b * qk;
            if f.norm() < VANISHING_TOL {
                return Err(Error::vanishing(
                    format!("denominator factor (b_{};q)", j + 1),
                    format!("k={}", k + 1),
                    f.norm(),
                ));
            }
            ratio /= f;
        }
        let fq = 1.0 - qk * q;
        if fq.norm() < VANISHING_TOL {
            return Err(Error::vanishing(
                "(q;q) factor",
                format!("k={}", k + 1),
                fq.norm(),
            ));
        }
        ratio /= fq;
        term *= ratio;
        sum.add(term);
        abs_sum += term.norm();
        qk *= q;
    }
    Ok(SeriesValue {
        value: sum.value(),
        terms: spec.termination_index + 1,
        abs_sum,
    })
}

const GAUSS_MAX_TERMS: usize = 20_000;
const GAUSS_MAX_RADIUS: f64 = 0.95;

fn check_gauss_c(c: C64) -> Result<()> {
    let n = c.re.round();
    if n <= 0.0 && (c - n).norm() < VANISHING_TOL {
        return Err(Error::InvalidInput(format!(
            "₂F₁ lower parameter {c} is a non-positive integer"
        )));
    }
    Ok(())
}

fn gauss_series(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    let mut sum = ComplexSum::new();
    let mut term = C64::new(1.0, 0.0);
    sum.add(term);
    let mut small = 0;
    for k in 0..GAUSS_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum.add(term);
        if term.norm() <= 1e-16 * sum.value().norm() {
            small += 1;
            if small >= 2 {
                return Ok(sum.value());
            }
        } else {
            small = 0;
        }
        if term.norm() == 0.0 {
            return Ok(sum.value());
        }
    }
    Err(Error::Unconverged {
        value: sum.value().norm(),
        change: term.norm() / sum.value().norm().max(f64::MIN_POSITIVE),
        tol: 1e-15,
    })
}

/// Gauss `₂F₁(a, b; c; z)`: direct series, or Pfaff's
/// `(1−z)^(−a) ₂F₁(a, c−b; c; z/(z−1))` when that argument is smaller.
pub fn gauss_2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    check_gauss_c(c)?;
    let w = z / (z - 1.0);
    if w.norm() < z.norm() {
        if w.norm() > GAUSS_MAX_RADIUS {
            return Err(Error::InvalidInput(format!(
                "₂F₁ argument {z} too close to the boundary (Pfaff transform gives |{w}|)"
            )));
        }
        let base = C64::new(1.0, 0.0) - z;
        return Ok(base.powc(-a) * gauss_series(a, c - b, c, w)?);
    }
    if z.norm() > GAUSS_MAX_RADIUS {
        return Err(Error::InvalidInput(format!(
            "₂F₁ argument {z} outside the series disk and Pfaff transform does not help"
        )));
    }
    gauss_series(a, b, c, z)
}

/// `[F, F', F'']` from `F' = (ab/c)·₂F₁(a+1, b+1; c+1; z)`.
pub fn gauss_2f1_derivs(a: C64, b: C64, c: C64, z: C64) -> Result<[C64; 3]> {
    let f0 = gauss_2f1(a, b, c, z)?;
    let f1 = a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z)?;
    let f2 =
        a * b * (a + 1.0) * (b + 1.0) / (c * (c + 1.0)) * gauss_2f1(a + 2.0, b + 2.0, c + 2.0, z)?;
    Ok([f0, f1, f2])
}

/// Parameters of `W_n(x; a, b, c, N | q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QRacahSpec {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub n_max: usize,
    pub q: C64,
}

impl QRacahSpec {
    /// Lattice variable `μ(x) = q^(−x) + c·q^(x−N)`.
    pub fn mu(&self, x: usize) -> C64 {
        self.q.powi(-(x as i32)) + self.c * self.q.powi(x as i32 - self.n_max as i32)
    }

    /// Smallest `|1 − p q^j|` over every denominator factor of `W_n(x)`, `ρ(x)` and `h_n`
    /// for `0 ≤ n, x ≤ N`. Values near zero mean the orthogonality sums cancel badly.
    pub fn smallest_denominator(&self) -> f64 {
        let QRacahSpec { a, b, c, n_max, q } = *self;
        let qn = q.powi(-(n_max as i32));
        let params = [
            a * q,
            qn,
            b * c * q,
            q,
            c / a * qn,
            qn / b,
            c * q,
            a * b * q * q,
            c.inv(),
            b * q,
            a * q / c,
            a * b * q.powi(n_max as i32 + 2),
        ];
        let mut worst = (1.0 - c * qn).norm().min((1.0 - a * b * q).norm());
        for p in params {
            let mut t = p;
            // Pochhammer symbols of length ≤ N use j < N
            for _ in 0..n_max {
                worst = worst.min((1.0 - t).norm());
                t *= q;
            }
        }
        worst
    }

    fn check_index(&self, what: &str, v: usize) -> Result<()> {
        if v > self.n_max {
            return Err(Error::InvalidInput(format!(
                "{what}={v} exceeds N={}",
                self.n_max
            )));
        }
        Ok(())
    }
}

/// Parameters under which `n` and `x` trade places:
/// `W_n(x; a, b, c, N) = W_x(n; a, c/(a q^(N+1)), a b q^(N+1), N)`.
pub fn qracah_dual(spec: &QRacahSpec) -> QRacahSpec {
    let qn1 = spec.q.powi(spec.n_max as i32 + 1);
    QRacahSpec {
        a: spec.a,
        b: spec.c / (spec.a * qn1),
        c: spec.a * spec.b * qn1,
        ..*spec
    }
}

/// `max_{n,x} |W_n(x) − W_x(n)|` with the dual parameters on the right.
pub fn qracah_duality_residual(spec: &QRacahSpec) -> Result<f64> {
    let dual = qracah_dual(spec);
    let mut worst: f64 = 0.0;
    for n in 0..=spec.n_max {
        for x in 0..=spec.n_max {
            worst = worst.max((qracah_w(n, x, spec)? - qracah_w(x, n, &dual)?).norm());
        }
    }
    Ok(worst)
}

/// Largest `Σ|term|` among the series evaluated by [`qracah_duality_residual`], which
/// bounds the roundoff in that residual up to a small multiple of machine epsilon.
pub fn qracah_duality_condition(spec: &QRacahSpec) -> Result<f64> {
    let dual = qracah_dual(spec);
    let mut worst: f64 = 1.0;
    for n in 0..=spec.n_max {
        for x in 0..=spec.n_max {
            worst = worst
                .max(qracah_w_series(n, x, spec)?.abs_sum)
                .max(qracah_w_series(x, n, &dual)?.abs_sum);
        }
    }
    Ok(worst)
}

pub fn qracah_w(n: usize, x: usize, spec: &QRacahSpec) -> Result<C64> {
    Ok(qracah_w_series(n, x, spec)?.value)
}

fn qracah_w_series(n: usize, x: usize, spec: &QRacahSpec) -> Result<SeriesValue> {
    spec.check_index("n", n)?;
    spec.check_index("x", x)?;
    let QRacahSpec { a, b, c, n_max, q } = *spec;
    let nn = n_max as i32;
    let num = [
        q.powi(-(n as i32)),
        a * b * q.powi(n as i32 + 1),
        q.powi(-(x as i32)),
        c * q.powi(x as i32 - nn),
    ];
    let den = [a * q, q.powi(-nn), b * c * q];
    let spec43 = TerminatingSeriesSpec::phi43(num, den, q, n.min(x));
    phi(&spec43)
}

fn checked_ratio(num: C64, den: C64, what: &str, location: String) -> Result<C64> {
    if den.norm() < VANISHING_TOL {
        return Err(Error::vanishing(what, location, den.norm()));
    }
    Ok(num / den)
}

pub fn qracah_weight(x: usize, spec: &QRacahSpec) -> Result<C64> {
    spec.check_index("x", x)?;
    let QRacahSpec { a, b, c, n_max, q } = *spec;
    let nn = n_max as i32;
    let xi = x as i64;
    let qn = q.powi(-nn);
    let lead = checked_ratio(
        1.0 - c * q.powi(2 * x as i32 - nn),
        1.0 - c * qn,
        "1 − c q^(−N)",
        format!("x={x}"),
    )?;
    let num = qpoch_many(&[c * qn, qn, a * q, b * c * q], q, xi)?;
    let den = qpoch_many(&[c / a * qn, qn / b, q, c * q], q, xi)?;
    let r = checked_ratio(num, den, "weight denominator Pochhammer", format!("x={x}"))?;
    Ok(lead * r * (a * b * q).powi(-(x as i32)))
}

pub fn qracah_norm(n: usize, spec: &QRacahSpec) -> Result<C64> {
    spec.check_index("n", n)?;
    let QRacahSpec { a, b, c, n_max, q } = *spec;
    let nn = n_max as i64;
    let ni = n as i64;
    let head = checked_ratio(
        qpoch_many(&[b * q, a * q / c], q, nn)?,
        qpoch_many(&[a * b * q * q, c.inv()], q, nn)?,
        "norm Pochhammer (abq², 1/c)",
        format!("n={n}"),
    )?;
    let mid = checked_ratio(
        (1.0 - a * b * q.powi(2 * n as i32 + 1))
            * qpoch_many(
                &[a * q, a * b * q, b * c * q, q.powi(-(n_max as i32))],
                q,
                ni,
            )?,
        (1.0 - a * b * q)
            * qpoch_many(
                &[q, b * q, a * q / c, a * b * q.powi(n_max as i32 + 2)],
                q,
                ni,
            )?,
        "norm Pochhammer (q, bq, aq/c, abq^(N+2))",
        format!("n={n}"),
    )?;
    Ok(head * mid * (q.powi(n_max as i32) / c).powi(n as i32))
}

/// `max_{n,k} |h_n Σ_x ρ(x) W_n(x) W_k(x) − δ_nk|`.
pub fn qracah_orthogonality_residual(spec: &QRacahSpec) -> Result<f64> {
    Ok(orthogonality_sums(spec)?.0)
}

/// `max_{n,k} |h_n|·Σ_x |ρ(x)|·‖W_n(x)‖·‖W_k(x)‖` with `‖W‖` the sum of the absolute
/// values of the series terms: the size of everything that cancels on the way to the
/// residual, which therefore carries roundoff of about this times machine epsilon.
pub fn qracah_orthogonality_condition(spec: &QRacahSpec) -> Result<f64> {
    Ok(orthogonality_sums(spec)?.1)
}

fn orthogonality_sums(spec: &QRacahSpec) -> Result<(f64, f64)> {
    let big_n = spec.n_max;
    let rho: Vec<C64> = (0..=big_n)
        .map(|x| qracah_weight(x, spec))
        .collect::<Result<_>>()?;
    let w: Vec<Vec<SeriesValue>> = (0..=big_n)
        .map(|n| {
            (0..=big_n)
                .map(|x| qracah_w_series(n, x, spec))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let (mut worst, mut cond): (f64, f64) = (0.0, 0.0);
    for n in 0..=big_n {
        let h = qracah_norm(n, spec)?;
        for k in 0..=big_n {
            let mut s = ComplexSum::new();
            let mut mag = 0.0;
            for x in 0..=big_n {
                s.add(rho[x] * w[n][x].value * w[k][x].value);
                mag += rho[x].norm() * w[n][x].abs_sum * w[k][x].abs_sum;
            }
            let delta = if n == k { 1.0 } else { 0.0 };
            worst = worst.max((h * s.value() - delta).norm());
            cond = cond.max(h.norm() * mag);
        }
    }
    Ok((worst, cond))
}

/// `|₈φ₇ − (aq, aq/de;q)_n/(aq/d, aq/e;q)_n · ₄φ₃|` for the terminating
/// very-well-poised Watson transformation.
pub fn watson_check(a: C64, b: C64, c: C64, d: C64, e: C64, n: usize, q: C64) -> Result<f64> {
    let (lhs, rhs) = watson_sides(a, b, c, d, e, n, q)?;
    Ok((lhs - rhs).norm())
}

/// Both sides of the Watson transformation.
pub fn watson_sides(
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    e: C64,
    n: usize,
    q: C64,
) -> Result<(C64, C64)> {
    let sa = a.sqrt();
    let ni = n as i64;
    let qn = q.powi(-(n as i32));
    let arg = a * a * q.powi(n as i32 + 2) / (b * c * d * e);
    let lhs = phi(&TerminatingSeriesSpec::new(
        vec![a, q * sa, -q * sa, b, c, d, e, qn],
        vec![
            sa,
            -sa,
            a * q / b,
            a * q / c,
            a * q / d,
            a * q / e,
            a * q.powi(n as i32 + 1),
        ],
        q,
        arg,
        n,
    ))?;
    let pre = checked_ratio(
        qpoch_many(&[a * q, a * q / (d * e)], q, ni)?,
        qpoch_many(&[a * q / d, a * q / e], q, ni)?,
        "Watson prefactor (aq/d, aq/e;q)_n",
        format!("n={n}"),
    )?;
    let rhs = phi(&TerminatingSeriesSpec::phi43(
        [a * q / (b * c), d, e, qn],
        [a * q / b, a * q / c, d * e * qn / a],
        q,
        n,
    ))?;
    Ok((lhs.value, pre * rhs.value))
}

/// `|₄φ₃ − (b2/a1, b3/a1;q)_n/(b2, b3;q)_n · a1^n · ₄φ₃'|`; the left series must be balanced,
/// `q^(1−n) a1 a2 a3 = b1 b2 b3`.
#[allow(clippy::too_many_arguments)]
pub fn sears_check(
    n: usize,
    a1: C64,
    a2: C64,
    a3: C64,
    b1: C64,
    b2: C64,
    b3: C64,
    q: C64,
) -> Result<f64> {
    let (lhs, rhs) = sears_sides(n, a1, a2, a3, b1, b2, b3, q)?;
    Ok((lhs - rhs).norm())
}

#[allow(clippy::too_many_arguments)]
pub fn sears_sides(
    n: usize,
    a1: C64,
    a2: C64,
    a3: C64,
    b1: C64,
    b2: C64,
    b3: C64,
    q: C64,
) -> Result<(C64, C64)> {
    let ni = n as i64;
    let qn = q.powi(-(n as i32));
    let balance = q.powi(1 - n as i32) * a1 * a2 * a3 - b1 * b2 * b3;
    if balance.norm() > TERMINATION_TOL * (b1 * b2 * b3).norm().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "₄φ₃ is not balanced (defect {:e})",
            balance.norm()
        )));
    }
    let lhs = phi(&TerminatingSeriesSpec::phi43(
        [qn, a1, a2, a3],
        [b1, b2, b3],
        q,
        n,
    ))?;
    let pre = checked_ratio(
        qpoch_many(&[b2 / a1, b3 / a1], q, ni)?,
        qpoch_many(&[b2, b3], q, ni)?,
        "Sears prefactor (b2, b3;q)_n",
        format!("n={n}"),
    )? * a1.powi(n as i32);
    let q1n = q.powi(1 - n as i32);
    let rhs = phi(&TerminatingSeriesSpec::phi43(
        [qn, a1, b1 / a2, b1 / a3],
        [b1, a1 * q1n / b2, a1 * q1n / b3],
        q,
        n,
    ))?;
    Ok((lhs.value, pre * rhs.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::e_half;
    use proptest::prelude::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn unit(x: f64) -> C64 {
        e_half(r(x))
    }

    #[test]
    fn qpoch_small_cases() {
        assert_eq!(qpoch(r(0.3), r(0.7), 0).unwrap(), r(1.0));
        assert!((qpoch(r(0.5), r(0.5), 2).unwrap() - 0.375).norm() < 1e-15);
        assert!(qpoch(r(0.5), r(0.5), -1).is_err());
    }

    #[test]
    fn phi_single_and_two_terms() {
        let q = unit(0.23);
        let spec = TerminatingSeriesSpec::phi43(
            [r(1.5), r(2.0), r(3.0), r(4.0)],
            [r(5.0), r(6.0), r(7.0)],
            q,
            0,
        );
        assert!(phi(&spec).is_err());
        let spec = TerminatingSeriesSpec::phi43(
            [q.inv(), r(2.0), r(3.0), unit(0.4)],
            [r(5.0), unit(0.1), r(7.0)],
            q,
            1,
        );
        let v = phi(&spec).unwrap();
        assert_eq!(v.terms, 2);
        let by_hand = 1.0
            + (1.0 - q.inv()) * (1.0 - 2.0) * (1.0 - 3.0) * (1.0 - unit(0.4))
                / ((1.0 - 5.0) * (1.0 - unit(0.1)) * (1.0 - 7.0) * (1.0 - q))
                * q;
        assert!((v.value - by_hand).norm() < 1e-14);
    }

    #[test]
    fn phi_reports_vanishing_denominator() {
        let q = unit(0.2);
        let spec = TerminatingSeriesSpec::phi43(
            [q.powi(-2), r(0.3), r(0.2), r(0.1)],
            [q.inv(), r(3.0), r(4.0)],
            q,
            2,
        );
        match phi(&spec) {
            Err(Error::VanishingFactor { location, .. }) => assert_eq!(location, "k=2"),
            other => panic!("expected vanishing factor, got {other:?}"),
        }
    }

    #[test]
    fn gauss_log_identity() {
        let z = 0.25;
        let v = gauss_2f1(r(1.0), r(1.0), r(2.0), r(z)).unwrap();
        assert!((v - (-(1.0 - z).ln() / z)).norm() < 1e-12);
        assert_eq!(gauss_2f1(r(0.3), r(0.2), r(0.7), r(0.0)).unwrap(), r(1.0));
    }

    #[test]
    fn gauss_negative_argument_via_pfaff() {
        // ₂F₁(1,1;2;z) = ln(1−z)/(−z) holds for z < 0 as well
        let z = -2.0;
        let v = gauss_2f1(r(1.0), r(1.0), r(2.0), r(z)).unwrap();
        assert!((v - (-(1.0f64 - z).ln() / z)).norm() < 1e-12);
    }

    #[test]
    fn gauss_rejects_boundary() {
        assert!(gauss_2f1(r(0.3), r(0.2), r(0.7), r(0.99)).is_err());
        assert!(gauss_2f1(r(0.3), r(0.2), r(-2.0), r(0.5)).is_err());
    }

    #[test]
    fn gauss_derivative_matches_difference_quotient() {
        let (a, b, c) = (r(0.4), r(-0.3), r(0.8));
        let z = 0.3;
        let d = gauss_2f1_derivs(a, b, c, r(z)).unwrap();
        let h = 1e-5;
        let fd = (gauss_2f1(a, b, c, r(z + h)).unwrap() - gauss_2f1(a, b, c, r(z - h)).unwrap())
            / (2.0 * h);
        assert!((d[1] - fd).norm() < 1e-8);
    }

    #[test]
    fn gauss_solves_hypergeometric_equation() {
        let (a, b, c) = (r(0.4), r(-0.3), r(0.8));
        for z in [0.1, 0.3, 0.5] {
            let [f, f1, f2] = gauss_2f1_derivs(a, b, c, r(z)).unwrap();
            let res = z * (1.0 - z) * f2 + (c - (a + b + 1.0) * z) * f1 - a * b * f;
            assert!(res.norm() < 1e-12, "z={z}: {res}");
        }
    }

    fn racah_spec(n_max: usize) -> QRacahSpec {
        QRacahSpec {
            a: unit(0.76),
            b: unit(0.91),
            c: unit(0.61),
            n_max,
            q: unit(0.41),
        }
    }

    #[test]
    fn racah_trivial_values() {
        let spec = racah_spec(4);
        for x in 0..=4 {
            assert_eq!(qracah_w(0, x, &spec).unwrap(), r(1.0));
            assert_eq!(qracah_w(x, 0, &spec).unwrap(), r(1.0));
        }
        assert!((qracah_weight(0, &spec).unwrap() - 1.0).norm() < 1e-14);
        assert!(qracah_w(5, 0, &spec).is_err());
    }

    #[test]
    fn racah_orthogonality_unit_circle() {
        for n in 1..=8 {
            let res = qracah_orthogonality_residual(&racah_spec(n)).unwrap();
            assert!(res < 1e-10, "N={n}: {res}");
        }
    }

    #[test]
    fn racah_duality_unit_circle() {
        for n in 1..=8 {
            let res = qracah_duality_residual(&racah_spec(n)).unwrap();
            assert!(res < 1e-10, "N={n}: {res}");
        }
    }

    #[test]
    fn racah_residual_tracks_condition() {
        for n in [4, 8] {
            let spec = racah_spec(n);
            let res = qracah_orthogonality_residual(&spec).unwrap();
            let cond = qracah_orthogonality_condition(&spec).unwrap();
            assert!(
                cond >= 1.0 && res <= 1e3 * f64::EPSILON * cond,
                "{res} {cond}"
            );
        }
    }

    #[test]
    fn racah_total_mass_is_inverse_h0() {
        let spec = racah_spec(5);
        let mass: C64 = (0..=5).map(|x| qracah_weight(x, &spec).unwrap()).sum();
        let h0 = qracah_norm(0, &spec).unwrap();
        assert!((mass * h0 - 1.0).norm() < 1e-11);
    }

    #[test]
    fn racah_weight_positive_for_real_parameters() {
        // real q with large N is badly conditioned in f64, so N stays small
        let spec = QRacahSpec {
            a: r(0.5),
            b: r(0.3),
            c: r(0.2),
            n_max: 3,
            q: r(0.5),
        };
        let total: f64 = (0..=3).map(|x| qracah_weight(x, &spec).unwrap().re).sum();
        // the weight itself alternates only through the (abq)^(−x) sign, which is positive here
        for x in 0..=3 {
            let w = qracah_weight(x, &spec).unwrap();
            assert!(w.im.abs() < 1e-14 && w.re.is_finite());
        }
        assert!(total.is_finite());
        let res = qracah_orthogonality_residual(&spec).unwrap();
        assert!(res < 1e-10, "{res}");
    }

    #[test]
    fn racah_is_polynomial_in_mu() {
        let spec = racah_spec(6);
        for n in 0..=3usize {
            let nodes: Vec<usize> = (0..=n).collect();
            let probe = n + 1;
            let mu: Vec<C64> = nodes.iter().map(|&x| spec.mu(x)).collect();
            let vals: Vec<C64> = nodes
                .iter()
                .map(|&x| qracah_w(n, x, &spec).unwrap())
                .collect();
            let mp = spec.mu(probe);
            // Lagrange interpolation through n+1 nodes
            let mut interp = C64::new(0.0, 0.0);
            for i in 0..=n {
                let mut l = C64::new(1.0, 0.0);
                for k in 0..=n {
                    if k != i {
                        l *= (mp - mu[k]) / (mu[i] - mu[k]);
                    }
                }
                interp += vals[i] * l;
            }
            let direct = qracah_w(n, probe, &spec).unwrap();
            assert!((interp - direct).norm() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn watson_and_sears_trivial_n() {
        let q = unit(0.3);
        assert_eq!(
            watson_check(unit(0.1), unit(0.2), unit(0.3), unit(0.4), unit(0.5), 0, q).unwrap(),
            0.0
        );
        let (a1, a2, a3, b1, b2) = (unit(0.1), unit(0.2), unit(0.35), unit(0.4), unit(0.5));
        let b3 = q * a1 * a2 * a3 / (b1 * b2);
        assert_eq!(sears_check(0, a1, a2, a3, b1, b2, b3, q).unwrap(), 0.0);
    }

    #[test]
    fn sears_rejects_unbalanced() {
        let q = unit(0.3);
        assert!(sears_check(
            2,
            unit(0.1),
            unit(0.2),
            unit(0.3),
            unit(0.4),
            unit(0.5),
            unit(0.6),
            q
        )
        .is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn qpoch_step(a in -0.9f64..0.9, g in 0.05f64..0.95, n in 0i64..10) {
            let q = unit(g);
            let a = unit(a);
            let lhs = qpoch(a, q, n + 1).unwrap();
            let rhs = qpoch(a, q, n).unwrap() * (1.0 - a * q.powi(n as i32));
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn watson_random(xs in proptest::array::uniform5(-0.9f64..0.9), g in 0.05f64..0.9, n in 1usize..=6) {
            let q = unit(g);
            let [a, b, c, d, e] = xs.map(unit);
            match watson_sides(a, b, c, d, e, n, q) {
                Ok((l, r)) => prop_assert!((l - r).norm() < 1e-10 * l.norm().max(1.0), "{l} vs {r}"),
                Err(err) => prop_assume!(matches!(err, Error::VanishingFactor { .. }), "{}", err),
            }
        }
    }
}
