//! Connection matrices `p_ij` between the solution bases at `0` and at `1`
//! (or `∞`), in five equivalent closed forms.
//!
//! All forms are written in the symmetric parameters `λ1, λ2, λ3` with
//! `λ_ij = λ_i + λ_j`. The basis at 0 versus 1 uses `(λ1, λ2, λ3) = (a, c, b)`;
//! the basis at 0 versus ∞ uses `(c, a, b)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qkernel::{cos_pi, dtype_chart, e_half, sin_pi, sin_pi_c, ExponentChart, C64};
use crate::qseries::{
    phi, qpoch, qracah_orthogonality_residual, QRacahSpec, TerminatingSeriesSpec,
};
use crate::sum::ComplexSum;

/// A denominator bracket `⟨e(x)⟩₁ = 2i·s(x)` below this modulus is treated as a pole.
pub const BRACKET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Balanced43Form {
    /// The ₄φ₃ obtained directly from Watson's transformation.
    Direct,
    /// The same series after Sears' transformation (q-Racah parameters).
    Sears,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    SumA,
    SumB,
    WellPoised87,
    Balanced43(Balanced43Form),
    RacahUniform,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::SumA,
        Variant::SumB,
        Variant::WellPoised87,
        Variant::Balanced43(Balanced43Form::Direct),
        Variant::Balanced43(Balanced43Form::Sears),
        Variant::RacahUniform,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::SumA => "sum-a",
            Variant::SumB => "sum-b",
            Variant::WellPoised87 => "well-poised-8phi7",
            Variant::Balanced43(Balanced43Form::Direct) => "balanced-4phi3",
            Variant::Balanced43(Balanced43Form::Sears) => "balanced-4phi3-sears",
            Variant::RacahUniform => "q-racah",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        Variant::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// Which formula of a regime-split variant to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `i + j ≤ m` formula when it applies, otherwise `i + j ≥ m`.
    Auto,
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambdas {
    pub l1: C64,
    pub l2: C64,
    pub l3: C64,
}

impl Lambdas {
    pub fn zero_one(chart: &ExponentChart) -> Self {
        Lambdas {
            l1: chart.a,
            l2: chart.c,
            l3: chart.b,
        }
    }

    pub fn zero_inf(chart: &ExponentChart) -> Self {
        Lambdas {
            l1: chart.c,
            l2: chart.a,
            l3: chart.b,
        }
    }

    /// The chart whose zero-one dictionary gives these λ's.
    pub fn induced_chart(&self, m: usize, g: C64) -> Result<ExponentChart> {
        ExponentChart::new(m, self.l1, self.l3, self.l2, g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pair {
    ZeroOne,
    ZeroInf,
    Generic(Lambdas),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Genericity {
    Require,
    Allow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    pub m: usize,
    pub pair: Pair,
    pub variant: Variant,
    pub entries: DMatrix<C64>,
}

/// Running product of sines with pole detection on the denominators.
struct SineProduct<'a> {
    acc: C64,
    at: &'a str,
}

impl<'a> SineProduct<'a> {
    fn new(at: &'a str, sign: f64) -> Self {
        SineProduct {
            acc: C64::new(sign, 0.0),
            at,
        }
    }

    fn num(&mut self, x: C64) {
        self.acc *= sin_pi_c(x);
    }

    fn den(&mut self, x: C64, factor: &str) -> Result<()> {
        let s = sin_pi_c(x);
        if 2.0 * s.norm() < BRACKET_TOL {
            return Err(Error::vanishing(
                format!("bracket ⟨e({factor})⟩₁"),
                self.at.to_string(),
                2.0 * s.norm(),
            ));
        }
        self.acc /= s;
        Ok(())
    }
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn half(n: i64) -> f64 {
    n as f64 / 2.0
}

struct Ctx {
    m: usize,
    l1: C64,
    l2: C64,
    l3: C64,
    l12: C64,
    l23: C64,
    l123: C64,
    g: C64,
}

impl Ctx {
    fn new(m: usize, lam: &Lambdas, g: C64) -> Self {
        Ctx {
            m,
            l1: lam.l1,
            l2: lam.l2,
            l3: lam.l3,
            l12: lam.l1 + lam.l2,
            l23: lam.l2 + lam.l3,
            l123: lam.l1 + lam.l2 + lam.l3,
            g,
        }
    }

    /// `q^k = e(k g)`.
    fn q(&self, k: f64) -> C64 {
        e_half(self.g * k)
    }

    /// `e(2λ)·q^k`.
    fn eq(&self, lambda: C64, k: f64) -> C64 {
        e_half(lambda * 2.0 + self.g * k)
    }
}

fn sum_a(c: &Ctx, i: usize, j: usize, at: &str) -> Result<C64> {
    let (m, g) = (c.m as i64, c.g);
    let (ii, jj) = (i as i64, j as i64);
    let mut tot = ComplexSum::new();
    for k in 0..=(m - ii) {
        let l = jj - k;
        if l < 0 || l > ii {
            continue;
        }
        let mut p = SineProduct::new(at, sign(k as usize));
        for r in 1..=(m - ii - k) {
            p.num(c.l1 + g * half(ii + r - 1));
            p.den(c.l23 + g * (k as f64 + half(ii + r - 1)), "λ23")?;
        }
        for r in 1..=k {
            p.num(c.l2 + g * half(ii + r - 1));
            p.den(c.l23 + g * (k as f64 + half(ii - r - 1)), "λ23")?;
        }
        for r in 1..=(ii - l) {
            p.num(c.l123 + g * half(m + ii + k - r - 1));
            p.num(g * half(m - ii - k + r));
            p.den(c.l23 + g * (jj as f64 + half(r - 1)), "λ23")?;
            p.den(g * half(r), "q^(r/2)")?;
        }
        for r in 1..=l {
            p.num(c.l3 + g * half(k + r - 1));
            p.num(g * half(k + r));
            p.den(c.l23 + g * (jj as f64 - half(r + 1)), "λ23")?;
            p.den(g * half(r), "q^(r/2)")?;
        }
        tot.add(p.acc);
    }
    Ok(tot.value() * sign(i))
}

fn sum_b(c: &Ctx, i: usize, j: usize, at: &str) -> Result<C64> {
    let (m, g) = (c.m as i64, c.g);
    let (ii, jj) = (i as i64, j as i64);
    let mut tot = ComplexSum::new();
    for k in 0..=ii {
        let l = jj - k;
        if l < 0 || l > m - ii {
            continue;
        }
        let mut p = SineProduct::new(at, sign(l as usize));
        for r in 1..=(ii - k) {
            p.num(c.l123 + g * half(m + ii - r - 1));
            p.den(c.l23 + g * (k as f64 + half(m - ii + r - 1)), "λ23")?;
        }
        for r in 1..=k {
            p.num(c.l3 + g * half(m - ii + r - 1));
            p.den(c.l23 + g * (k as f64 + half(m - ii - r - 1)), "λ23")?;
        }
        for r in 1..=(m - ii - l) {
            p.num(c.l1 + g * half(ii - k + r - 1));
            p.num(g * half(ii - k + r));
            p.den(c.l23 + g * (jj as f64 + half(r - 1)), "λ23")?;
            p.den(g * half(r), "q^(r/2)")?;
        }
        for r in 1..=l {
            p.num(c.l2 + g * half(k + r - 1));
            p.num(g * half(k + r));
            p.den(c.l23 + g * (jj as f64 - half(r + 1)), "λ23")?;
            p.den(g * half(r), "q^(r/2)")?;
        }
        tot.add(p.acc);
    }
    Ok(tot.value() * sign(i))
}

fn low_regime(m: usize, i: usize, j: usize, regime: Regime) -> Result<bool> {
    match regime {
        Regime::Auto => Ok(i + j <= m),
        Regime::Low if i + j <= m => Ok(true),
        Regime::High if i + j >= m => Ok(false),
        _ => Err(Error::InvalidInput(format!(
            "regime {regime:?} does not cover (i,j)=({i},{j}) at m={m}"
        ))),
    }
}

/// Watson parameters `(n, √a, b, c, d, e)` of the ₈φ₇ for entry `(i, j)`.
fn wp87_parameters(c: &Ctx, i: usize, j: usize, low: bool) -> (usize, C64, C64, C64, C64, C64) {
    let (m, ii, jj) = (c.m as f64, i as f64, j as f64);
    if low {
        let sqrt_a = e_half(-c.l23 + c.g * ((-2.0 * jj + 1.0 - ii) / 2.0));
        (
            i,
            sqrt_a,
            c.eq(c.l1, m - jj),
            c.eq(-c.l3, 1.0 - jj),
            c.eq(-c.l23, 1.0 - m - jj),
            c.q(-jj),
        )
    } else {
        let sqrt_a = e_half(-c.l23 + c.g * ((1.0 + ii - 2.0 * m) / 2.0));
        (
            c.m - i,
            sqrt_a,
            c.eq(c.l1, ii),
            c.eq(-c.l3, 1.0 + ii - m),
            c.eq(-c.l23, 1.0 - m - jj),
            c.q(jj - m),
        )
    }
}

fn well_poised(c: &Ctx, i: usize, j: usize, regime: Regime, at: &str) -> Result<C64> {
    let (m, g) = (c.m as i64, c.g);
    let (ii, jj) = (i as i64, j as i64);
    let low = low_regime(c.m, i, j, regime)?;
    let mut p;
    if low {
        p = SineProduct::new(at, sign(i + j));
        for r in 1..=(m - ii - jj) {
            p.num(c.l1 + g * half(ii + r - 1));
            p.den(c.l23 + g * (jj as f64 + half(ii + r - 1)), "λ23")?;
        }
        for r in 1..=jj {
            p.num(c.l2 + g * half(ii + r - 1));
            p.den(c.l23 + g * half(ii + jj + r - 2), "λ23")?;
        }
        for r in 1..=ii {
            p.num(c.l123 + g * half(m + jj + r - 2));
            p.num(g * half(m - ii - jj + r));
            p.den(c.l23 + g * (jj as f64 + half(r - 1)), "λ23")?;
            p.den(g * half(r), "q^(r/2)")?;
        }
    } else {
        p = SineProduct::new(at, sign(c.m));
        for r in 1..=(m - ii) {
            p.num(c.l2 + g * half(ii + r - 1));
            p.den(c.l23 + g * half(m + r - 2), "λ23")?;
        }
        for r in 1..=(m - jj) {
            p.num(c.l123 + g * half(m + jj + r - 2));
            p.den(c.l23 + g * (jj as f64 + half(r - 1)), "λ23")?;
        }
        for r in 1..=(ii + jj - m) {
            p.num(c.l3 + g * half(m - ii + r - 1));
            p.num(g * half(m - ii + r));
            p.den(c.l23 + g * half(m - ii + jj + r - 2), "λ23")?;
            p.den(g * half(r), "q^(r/2)")?;
        }
    }
    let (n, sa, b, cc, d, e) = wp87_parameters(c, i, j, low);
    let q = c.q(1.0);
    let a = sa * sa;
    let arg = c.eq(-c.l12, 2.0 - ii as f64);
    let spec = TerminatingSeriesSpec::new(
        vec![a, q * sa, -q * sa, b, cc, d, e, c.q(-(n as f64))],
        vec![
            sa,
            -sa,
            a * q / b,
            a * q / cc,
            a * q / d,
            a * q / e,
            a * c.q(n as f64 + 1.0),
        ],
        q,
        arg,
        n,
    );
    Ok(p.acc * located(phi(&spec), at)?.value)
}

fn located<T>(r: Result<T>, at: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::VanishingFactor {
            what,
            location,
            modulus,
        } => Error::VanishingFactor {
            what,
            location: format!("{at}, {location}"),
            modulus,
        },
        other => other,
    })
}

fn balanced43(
    c: &Ctx,
    i: usize,
    j: usize,
    regime: Regime,
    form: Balanced43Form,
    at: &str,
) -> Result<C64> {
    let (m, g) = (c.m as i64, c.g);
    let (ii, jj) = (i as i64, j as i64);
    let (mf, fi, fj) = (m as f64, ii as f64, jj as f64);
    let low = low_regime(c.m, i, j, regime)?;
    let q = c.q(1.0);
    let sears = form == Balanced43Form::Sears;
    let racah_series = || {
        TerminatingSeriesSpec::phi43(
            [
                c.q(-fj),
                c.q(-fi),
                c.eq(c.l23, fj - 1.0),
                c.eq(c.l12, fi - 1.0),
            ],
            [c.q(-mf), c.eq(c.l2, 0.0), c.eq(c.l123, mf - 1.0)],
            q,
            i.min(j),
        )
    };
    let mut p = SineProduct::new(at, if low || sears { sign(i + j) } else { sign(c.m) });
    for r in 1..=ii {
        p.num(g * half(m - ii + r));
        p.den(g * half(r), "q^(r/2)")?;
    }
    p.num(c.l23 + g * (fj - 0.5));
    for r in 1..=(m + 1) {
        p.den(c.l23 + g * half(jj + r - 2), "λ23")?;
    }
    let spec = match (low, sears) {
        (true, false) => {
            for r in 1..=ii {
                p.num(c.l123 + g * half(m + jj + r - 2));
            }
            for r in 1..=jj {
                p.num(c.l2 + g * half(ii + r - 1));
            }
            for r in 1..=(m - ii - jj) {
                p.num(c.l1 + g * half(ii + r - 1));
            }
            TerminatingSeriesSpec::phi43(
                [
                    c.q(-fj),
                    c.q(-fi),
                    c.eq(-c.l23, 1.0 - fj - mf),
                    c.eq(-c.l12, 1.0 - fi - mf),
                ],
                [
                    c.q(-mf),
                    c.eq(-c.l2, 1.0 - fi - fj),
                    c.eq(-c.l123, 2.0 - fi - fj - mf),
                ],
                q,
                i.min(j),
            )
        }
        (true, true) => {
            for r in 1..=ii {
                p.num(c.l123 + g * half(m + r - 2));
            }
            for r in 1..=jj {
                p.num(c.l2 + g * half(r - 1));
            }
            for r in 1..=(m - ii - jj) {
                p.num(c.l1 + g * half(ii + r - 1));
            }
            racah_series()
        }
        (false, false) => {
            for r in 1..=(m - jj) {
                p.num(c.l123 + g * half(m + jj + r - 2));
            }
            for r in 1..=(ii + jj - m) {
                p.num(c.l3 + g * half(m - ii + r - 1));
            }
            for r in 1..=(m - ii) {
                p.num(c.l2 + g * half(ii + r - 1));
            }
            TerminatingSeriesSpec::phi43(
                [
                    c.eq(-c.l12, 1.0 - fi - mf),
                    c.eq(-c.l23, 1.0 - fj - mf),
                    c.q(fj - mf),
                    c.q(fi - mf),
                ],
                [
                    c.eq(-c.l123, 2.0 - 2.0 * mf),
                    c.eq(-c.l2, 1.0 - mf),
                    c.q(-mf),
                ],
                q,
                (c.m - i).min(c.m - j),
            )
        }
        (false, true) => {
            for r in 1..=ii {
                p.num(c.l123 + g * half(m + r - 2));
            }
            for r in 1..=jj {
                p.num(c.l2 + g * half(r - 1));
            }
            for r in 1..=(ii + jj - m) {
                p.den(c.l1 + g * half(m - jj + r - 1), "λ1")?;
            }
            racah_series()
        }
    };
    Ok(p.acc * located(phi(&spec), at)?.value)
}

fn checked_div(num: C64, den: C64, what: &str, at: &str) -> Result<C64> {
    if den.norm() < BRACKET_TOL {
        return Err(Error::vanishing(what, at.to_string(), den.norm()));
    }
    Ok(num / den)
}

fn racah_uniform(c: &Ctx, i: usize, j: usize, at: &str) -> Result<C64> {
    let q = c.q(1.0);
    let (m, ii, jj) = (c.m as i64, i as i64, j as i64);
    let (mf, fi, fj) = (m as f64, ii as f64, jj as f64);
    let mut pre = checked_div(
        1.0 - c.eq(c.l23, 2.0 * fj - 1.0),
        1.0 - c.eq(c.l23, fj - 1.0),
        "1 − e(2λ23)q^(j−1)",
        at,
    )?;
    pre *= checked_div(
        qpoch(c.eq(c.l123, mf - 1.0), q, ii)?,
        qpoch(c.eq(c.l1, 0.0), q, ii)?,
        "(e(2λ1);q)_i",
        at,
    )?;
    pre *= checked_div(
        qpoch(c.eq(c.l1, 0.0), q, m)?,
        qpoch(c.eq(c.l23, fj), q, m)?,
        "(e(2λ23)q^j;q)_m",
        at,
    )?;
    pre *= checked_div(
        qpoch(c.eq(c.l2, 0.0), q, jj)?,
        qpoch(c.eq(-c.l1, 1.0 - mf), q, jj)?,
        "(e(−2λ1)q^(1−m);q)_j",
        at,
    )?;
    pre *= checked_div(qpoch(c.q(-mf), q, ii)?, qpoch(q, q, ii)?, "(q;q)_i", at)?;
    pre *= e_half(c.l1 * (-mf - fj) + c.l2 * (mf - fi - fj) + c.l3 * (mf - fi) + c.g * fi);
    let spec = TerminatingSeriesSpec::phi43(
        [
            c.q(-fi),
            c.eq(c.l12, fi - 1.0),
            c.q(-fj),
            c.eq(c.l23, fj - 1.0),
        ],
        [c.eq(c.l2, 0.0), c.q(-mf), c.eq(c.l123, mf - 1.0)],
        q,
        i.min(j),
    );
    Ok(pre * located(phi(&spec), at)?.value)
}

/// One connection coefficient `p_ij` for the λ-parameters.
pub fn entry(
    m: usize,
    lam: &Lambdas,
    g: C64,
    i: usize,
    j: usize,
    variant: Variant,
    regime: Regime,
) -> Result<C64> {
    if i > m || j > m {
        return Err(Error::InvalidInput(format!(
            "entry ({i},{j}) outside 0..={m}"
        )));
    }
    let c = Ctx::new(m, lam, g);
    let at = format!("(i,j)=({i},{j})");
    match variant {
        Variant::SumA => sum_a(&c, i, j, &at),
        Variant::SumB => sum_b(&c, i, j, &at),
        Variant::WellPoised87 => well_poised(&c, i, j, regime, &at),
        Variant::Balanced43(form) => balanced43(&c, i, j, regime, form, &at),
        Variant::RacahUniform => racah_uniform(&c, i, j, &at),
    }
}

/// The argument `a²q^(n+2)/(bcde)` of the ₈φ₇ in entry `(i, j)`, from the substituted parameters.
pub fn wp87_argument(m: usize, lam: &Lambdas, g: C64, i: usize, j: usize) -> C64 {
    let c = Ctx::new(m, lam, g);
    let (n, sa, b, cc, d, e) = wp87_parameters(&c, i, j, i + j <= m);
    let a = sa * sa;
    a * a * c.q(n as f64 + 2.0) / (b * cc * d * e)
}

pub fn connect_generic(
    m: usize,
    lam: Lambdas,
    g: C64,
    variant: Variant,
    genericity: Genericity,
) -> Result<ConnectionMatrix> {
    connect_with_pair(m, lam, g, variant, genericity, Pair::Generic(lam))
}

fn connect_with_pair(
    m: usize,
    lam: Lambdas,
    g: C64,
    variant: Variant,
    genericity: Genericity,
    pair: Pair,
) -> Result<ConnectionMatrix> {
    if genericity == Genericity::Require {
        lam.induced_chart(m, g)?.require_generic()?;
    }
    let mut entries = DMatrix::from_element(m + 1, m + 1, C64::new(0.0, 0.0));
    for i in 0..=m {
        for j in 0..=m {
            entries[(i, j)] = entry(m, &lam, g, i, j, variant, Regime::Auto)?;
        }
    }
    Ok(ConnectionMatrix {
        m,
        pair,
        variant,
        entries,
    })
}

/// `I_i = Σ_j p_ij J_j` for `0 < z < 1`.
pub fn connect_01(
    chart: &ExponentChart,
    variant: Variant,
    genericity: Genericity,
) -> Result<ConnectionMatrix> {
    connect_with_pair(
        chart.m,
        Lambdas::zero_one(chart),
        chart.g,
        variant,
        genericity,
        Pair::ZeroOne,
    )
}

/// `I_i = Σ_j p_ij K_j` for `z < 0`; the zero-one matrix with `a` and `c` exchanged.
pub fn connect_0inf(
    chart: &ExponentChart,
    variant: Variant,
    genericity: Genericity,
) -> Result<ConnectionMatrix> {
    connect_with_pair(
        chart.m,
        Lambdas::zero_inf(chart),
        chart.g,
        variant,
        genericity,
        Pair::ZeroInf,
    )
}

/// Largest deviation of any variant, in every regime that covers the entry, from the
/// `SumA` matrix, relative to `max(1, |p_ij|)`.
pub fn variant_spread(chart: &ExponentChart) -> Result<f64> {
    let reference = connect_01(chart, Variant::SumA, Genericity::Require)?.entries;
    let lam = Lambdas::zero_one(chart);
    let m = chart.m;
    let mut worst: f64 = 0.0;
    for v in Variant::ALL.into_iter().skip(1) {
        let regimes: &[Regime] = match v {
            Variant::WellPoised87 | Variant::Balanced43(_) => &[Regime::Low, Regime::High],
            _ => &[Regime::Auto],
        };
        for i in 0..=m {
            for j in 0..=m {
                for &regime in regimes {
                    if low_regime(m, i, j, regime).is_err() {
                        continue;
                    }
                    let x = entry(m, &lam, chart.g, i, j, v, regime)?;
                    let r = reference[(i, j)];
                    worst = worst.max((x - r).norm() / r.norm().max(1.0));
                }
            }
        }
    }
    Ok(worst)
}

/// Largest `|x − y| / max(1, |x|)` over matching entries.
pub fn max_entry_diff(x: &DMatrix<C64>, y: &DMatrix<C64>) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max)
}

fn identity_residual(prod: &DMatrix<C64>) -> f64 {
    let n = prod.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - d).norm());
        }
    }
    worst
}

/// `max |Σ_x p_ix(a,b,c) p_xj(b,a,c) − δ_ij|`.
pub fn inverse_identity_residual(chart: &ExponentChart, variant: Variant) -> Result<f64> {
    let p = connect_01(chart, variant, Genericity::Require)?;
    let q = connect_01(&chart.swap_ab(), variant, Genericity::Require)?;
    Ok(identity_residual(&(p.entries * q.entries)))
}

/// The q-Racah parameters `a' = e(2c)/q, b' = e(2a)/q, c' = e(2(b+c))q^(m−1), N = m`
/// under which the inversion identity becomes orthogonality.
pub fn inversion_racah_spec(chart: &ExponentChart) -> QRacahSpec {
    let g = chart.g;
    QRacahSpec {
        a: e_half(chart.c * 2.0 - g),
        b: e_half(chart.a * 2.0 - g),
        c: e_half((chart.b + chart.c) * 2.0 + g * (chart.m as f64 - 1.0)),
        n_max: chart.m,
        q: e_half(g),
    }
}

pub fn inversion_orthogonality_residual(chart: &ExponentChart) -> Result<f64> {
    qracah_orthogonality_residual(&inversion_racah_spec(chart))
}

/// Zero-one matrix at `m = 2ρ, a = b = c = −ρ/(2ρ+1), g = 1/(2ρ+1)`.
pub fn dtype_connection(rho: usize) -> Result<ConnectionMatrix> {
    connect_01(&dtype_chart(rho)?, Variant::SumA, Genericity::Allow)
}

/// Residuals of `p_ij = (−1)^i p_{i,m−j}` and `p_ij = (−1)^j p_{m−i,j}` on the D-type chart.
pub fn dtype_symmetry_residual(rho: usize) -> Result<(f64, f64)> {
    let p = dtype_connection(rho)?.entries;
    let m = 2 * rho;
    let (mut r1, mut r2): (f64, f64) = (0.0, 0.0);
    for i in 0..=m {
        for j in 0..=m {
            r1 = r1.max((p[(i, j)] - sign(i) * p[(i, m - j)]).norm());
            r2 = r2.max((p[(i, j)] - sign(j) * p[(m - i, j)]).norm());
        }
    }
    Ok((r1, r2))
}

/// Closed-form row `i ∈ {0, 1, 2, m−2, m−1, m}` of the D-type matrix.
pub fn dtype_closed_row(rho: usize, i: usize) -> Result<Vec<f64>> {
    if rho == 0 {
        return Err(Error::InvalidInput("rho must be positive".into()));
    }
    let m = 2 * rho;
    let np = (2 * (2 * rho + 1)) as f64;
    let d = (2 * rho + 1) as f64;
    let rf = rho as f64;
    let s = sin_pi;
    let supported = [0, 1, 2, m.saturating_sub(2), m - 1, m];
    if !supported.contains(&i) || i > m {
        return Err(Error::InvalidInput(format!(
            "no closed form for row {i} at rho={rho}"
        )));
    }
    let row = (0..=m)
        .map(|j| {
            let jf = j as f64;
            let edge = s((2.0 * jf + 1.0) / np);
            let sj = sign(j);
            if i == 0 {
                sj * edge
            } else if i == m {
                edge
            } else if i == 1 || i == m - 1 {
                let v = s(1.0 / np) * s((2.0 * jf + 1.0) / d) / s(1.0 / d);
                if i == 1 {
                    -sj * v
                } else {
                    -v
                }
            } else {
                let t1 = s(2.0 / np) * s(3.0 / np) * s(jf / np) * s((jf + 1.0) / np)
                    / (s(1.0 / np).powi(2) * s(rf / d) * s((rf + 1.0) / d));
                let t2 = s(3.0 / np)
                    * s(4.0 / np)
                    * s((jf - 1.0) / np)
                    * s(jf / np)
                    * s((jf + 1.0) / np)
                    * s((jf + 2.0) / np)
                    / (s(1.0 / d)
                        * s(rf / d).powi(2)
                        * s(1.0 / np)
                        * s((2.0 * rf - 1.0) / np).powi(2));
                let v = edge * (1.0 - t1 + t2);
                if i == 2 {
                    sj * v
                } else {
                    v
                }
            }
        })
        .collect();
    Ok(row)
}

/// Closed-form column `j ∈ {0, 1, m−1, m}` of the D-type matrix.
pub fn dtype_closed_col(rho: usize, j: usize) -> Result<Vec<f64>> {
    if rho == 0 {
        return Err(Error::InvalidInput("rho must be positive".into()));
    }
    let m = 2 * rho;
    let np = (2 * (2 * rho + 1)) as f64;
    if ![0, 1, m - 1, m].contains(&j) {
        return Err(Error::InvalidInput(format!(
            "no closed form for column {j} at rho={rho}"
        )));
    }
    let col = (0..=m)
        .map(|i| {
            let si = sign(i);
            let s1 = sin_pi(1.0 / np);
            if j == 0 {
                si * s1
            } else if j == m {
                s1
            } else {
                let v = sin_pi(3.0 / np) * cos_pi((2.0 * i as f64 + 1.0) / np) / cos_pi(1.0 / np);
                if j == 1 {
                    -si * v
                } else {
                    -v
                }
            }
        })
        .collect();
    Ok(col)
}
