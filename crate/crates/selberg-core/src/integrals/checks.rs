//! Identities checked against quadrature: leading asymptotics, reflections,
//! numeric connection, the scalar ODEs and the first-order system.

use nalgebra::DMatrix;

use super::raw::eval_raw;
use super::scaled::{self, Derivatives, Pairings};
use super::{eval_sample, require_real, BasisTag, CycleDescriptor, QuadratureConfig};
use crate::connection::{connect_01, connect_0inf, Genericity, Pair, Variant};
use crate::error::{Error, Result};
use crate::qkernel::{choose2, factorial, selberg, ExponentChart, C64};

fn selberg_re(n: usize, alpha: f64, beta: f64, gamma: f64) -> Result<f64> {
    Ok(selberg(
        n,
        C64::new(alpha, 0.0),
        C64::new(beta, 0.0),
        C64::new(gamma, 0.0),
    )?
    .re)
}

/// Leading term `coefficient·x^exponent` of `I_j` as `z → 0` (`x = |z|`), of `J_j` as
/// `z → 1` (`x = 1 − z`) and of `K_j` as `z → −∞` (`x = −z`).
pub fn leading_asymptotic(j: usize, chart: &ExponentChart, tag: BasisTag) -> Result<(f64, f64)> {
    let (a, b, c, g) = require_real(chart)?;
    let m = chart.m;
    if j > m {
        return Err(Error::InvalidInput(format!(
            "basis index {j} exceeds m={m}"
        )));
    }
    let linf = chart.lambda_inf().re;
    let h = g / 2.0;
    let jf = j as f64;
    let mf = factorial(m);
    match tag {
        BasisTag::I => Ok((
            mf * selberg_re(j, a + 1.0, c + 1.0, h)? * selberg_re(m - j, linf - 1.0, b + 1.0, h)?,
            (a + c + 1.0) * jf + choose2(j) * g,
        )),
        BasisTag::J => Ok((
            mf * selberg_re(j, b + 1.0, c + 1.0, h)? * selberg_re(m - j, linf - 1.0, a + 1.0, h)?,
            (b + c + 1.0) * jf + choose2(j) * g,
        )),
        BasisTag::K => {
            let mj = m - j;
            Ok((
                mf * selberg_re(j, a + 1.0, b + 1.0, h)? * selberg_re(mj, linf - 1.0, c + 1.0, h)?,
                (a + b + 1.0) * mj as f64 + m as f64 * c + (choose2(mj) + (j * mj) as f64) * g,
            ))
        }
        BasisTag::Raw => Err(Error::InvalidInput(
            "raw cycles have no leading term".into(),
        )),
    }
}

/// `|value/(coefficient·x^exponent) − 1|` with the basis evaluated at distance `x` from its point.
pub fn asymptotic_residual(
    j: usize,
    chart: &ExponentChart,
    tag: BasisTag,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (coef, ex) = leading_asymptotic(j, chart, tag)?;
    let z = match tag {
        BasisTag::I => x,
        BasisTag::J => 1.0 - x,
        BasisTag::K => -x,
        BasisTag::Raw => {
            return Err(Error::InvalidInput(
                "raw cycles have no leading term".into(),
            ))
        }
    };
    let v = super::eval_basis(j, chart, z, tag, cfg)?.value;
    Ok((v / (coef * x.powf(ex)) - 1.0).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    /// `J_j(a,b,c;z) = I_j(b,a,c;1−z)` for `0 < z < 1`.
    LeftRight,
    /// `K_j(a,b,c;z) = (−z)^((a+b+c+1)m + C(m,2)g)·I_j(a,c,b;1/z)` for `z < 0`.
    Inversion,
}

/// Largest relative gap between the direct integral over the `J`/`K` chamber and
/// the reflected `I`-integral.
pub fn reflection_residual(
    chart: &ExponentChart,
    z: f64,
    kind: Reflection,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let tag = match kind {
        Reflection::LeftRight => BasisTag::J,
        Reflection::Inversion => BasisTag::K,
    };
    let m = chart.m;
    let mut worst: f64 = 0.0;
    for j in 0..=m {
        let direct = eval_raw(
            chart,
            z,
            CycleDescriptor::basis_jk(m, j, tag).occupancy,
            cfg,
        )?
        .value;
        let reflected = super::eval_basis(j, chart, z, tag, cfg)?.value;
        worst = worst.max((direct - reflected).abs() / reflected.abs());
    }
    Ok(worst)
}

fn apply(p: &DMatrix<C64>, v: &[f64]) -> Vec<C64> {
    (0..p.nrows())
        .map(|i| (0..p.ncols()).map(|j| p[(i, j)] * v[j]).sum())
        .collect()
}

/// `max_i |I_i − Σ_j p_ij X_j| / max_i |I_i|` with `X = J` (zero-one) or `X = K` (zero-∞).
pub fn connection_residual_numeric(
    chart: &ExponentChart,
    z: f64,
    pair: Pair,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let (p, tag) = match pair {
        Pair::ZeroOne => (
            connect_01(chart, Variant::SumA, Genericity::Require)?,
            BasisTag::J,
        ),
        Pair::ZeroInf => (
            connect_0inf(chart, Variant::SumA, Genericity::Require)?,
            BasisTag::K,
        ),
        Pair::Generic(_) => {
            return Err(Error::InvalidInput(
                "numeric check needs the zero-one or zero-∞ pair".into(),
            ))
        }
    };
    let i_vals = eval_sample(chart, z, BasisTag::I, cfg)?;
    let x_vals = eval_sample(chart, z, tag, cfg)?;
    let px = apply(&p.entries, &x_vals.values);
    let scale = i_vals.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap = i_vals
        .values
        .iter()
        .zip(&px)
        .map(|(x, y)| (y - x).norm())
        .fold(0.0, f64::max);
    Ok(gap / scale)
}

/// `d^n/dz^n` of `I_j` (`z < 1`) or `J_j` (`0 < z < 1`) for `n = 0..=3`.
pub fn basis_derivatives(
    j: usize,
    chart: &ExponentChart,
    z: f64,
    tag: BasisTag,
    cfg: &QuadratureConfig,
) -> Result<Derivatives> {
    cfg.validate()?;
    let (a, b, c, g) = require_real(chart)?;
    let m = chart.m;
    if j > m {
        return Err(Error::InvalidInput(format!(
            "basis index {j} exceeds m={m}"
        )));
    }
    match tag {
        BasisTag::I => scaled::derivatives(a, b, c, g, m, j, z, cfg),
        BasisTag::J => {
            if !(0.0 < z && z < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "J-basis needs 0 < z < 1; got {z}"
                )));
            }
            let mut d = scaled::derivatives(b, a, c, g, m, j, 1.0 - z, cfg)?;
            d.values[1] = -d.values[1];
            d.values[3] = -d.values[3];
            Ok(d)
        }
        _ => Err(Error::InvalidInput(
            "derivatives are available for the I and J bases".into(),
        )),
    }
}

/// Terms of the scalar ODE (`m = 1` hypergeometric, `m = 2` third order) applied to
/// derivatives `d = [f, f', f'', …]` at `z`.
pub fn ode_terms(chart: &ExponentChart, z: f64, d: &[C64]) -> Result<Vec<C64>> {
    let (a, b, c, g) = require_real(chart)?;
    match chart.m {
        1 => {
            if d.len() < 3 {
                return Err(Error::InvalidInput("m=1 needs f, f', f''".into()));
            }
            Ok(vec![
                d[2] * (z * (z - 1.0)),
                d[1] * (a + c - (a + b + 2.0 * c) * z),
                d[0] * (c * (a + b + c + 1.0)),
            ])
        }
        2 => {
            if d.len() < 4 {
                return Err(Error::InvalidInput("m=2 needs f..f'''".into()));
            }
            let k1 = -g - 3.0 * b - 3.0 * c;
            let k2 = -g - 3.0 * a - 3.0 * c;
            let l1 = (b + c) * (2.0 * b + 2.0 * c + g + 1.0);
            let l2 = (a + c) * (2.0 * a + 2.0 * c + g + 1.0);
            let l3 = (b + c) * (2.0 * a + 2.0 * c + g + 1.0)
                + (a + c) * (2.0 * b + 2.0 * c + g + 1.0)
                + (c - 1.0) * (a + b + c)
                + (3.0 * c + g) * (a + b + c + g + 1.0);
            let s = 2.0 * a + 2.0 * b + 2.0 * c + g + 2.0;
            let m1 = -c * (2.0 * b + 2.0 * c + g + 1.0) * s;
            let m2 = -c * (2.0 * a + 2.0 * c + g + 1.0) * s;
            let zz = z * (z - 1.0);
            Ok(vec![
                d[3] * (zz * zz),
                d[2] * ((k1 * z + k2 * (z - 1.0)) * zz),
                d[1] * (l1 * z * z + l2 * (z - 1.0) * (z - 1.0) + l3 * zz),
                d[0] * (m1 * z + m2 * (z - 1.0)),
            ])
        }
        m => Err(Error::InvalidInput(format!(
            "scalar ODE available for m ∈ {{1, 2}}, got {m}"
        ))),
    }
}

/// `|Σ terms| / Σ |terms|`.
pub fn relative_sum(terms: &[C64]) -> f64 {
    let s: C64 = terms.iter().sum();
    let scale: f64 = terms.iter().map(|t| t.norm()).sum();
    s.norm() / scale
}

/// Worst ODE residual over `I_0..I_m` at `z`.
pub fn ode_residual(chart: &ExponentChart, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..=chart.m {
        let d = basis_derivatives(j, chart, z, BasisTag::I, cfg)?;
        let dc: Vec<C64> = d.values.iter().map(|&x| C64::new(x, 0.0)).collect();
        worst = worst.max(relative_sum(&ode_terms(chart, z, &dc)?));
    }
    Ok(worst)
}

/// All pairings `⟨φ̃_i⟩`, `i = 0..=m`, and their `z`-derivatives on an `I` or `J` cycle.
pub fn phi_pairings(
    cycle: &CycleDescriptor,
    chart: &ExponentChart,
    z: f64,
    cfg: &QuadratureConfig,
) -> Result<Pairings> {
    cfg.validate()?;
    let (a, b, c, g) = require_real(chart)?;
    let m = chart.m;
    if cycle.m() != m {
        return Err(Error::InvalidInput(format!(
            "cycle has {} variables, chart has m={m}",
            cycle.m()
        )));
    }
    match cycle.basis {
        BasisTag::I => scaled::pairings(a, b, c, g, m, cycle.index, z, cfg),
        BasisTag::J => {
            // t ↦ 1 − t exchanges 1/t and −1/(t−1), hence φ̃_i ↦ (−1)^m φ̃_(m−i)
            let p = scaled::pairings(b, a, c, g, m, cycle.index, 1.0 - z, cfg)?;
            let sgn = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
            Ok(Pairings {
                values: p.values.iter().rev().map(|v| sgn * v).collect(),
                derivs: p.derivs.iter().rev().map(|v| -sgn * v).collect(),
                errors: p.errors.iter().rev().copied().collect(),
                converged: p.converged,
            })
        }
        _ => Err(Error::InvalidInput(
            "pairings are available on I and J cycles".into(),
        )),
    }
}

pub fn phi_pairing(
    i: usize,
    cycle: &CycleDescriptor,
    chart: &ExponentChart,
    z: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if i > chart.m {
        return Err(Error::InvalidInput(format!(
            "form index {i} exceeds m={}",
            chart.m
        )));
    }
    Ok(phi_pairings(cycle, chart, z, cfg)?.values[i])
}

/// Right-hand side of the first-order system for `d/dz ⟨φ̃_i⟩`, split into its terms.
pub fn system_rhs_terms(chart: &ExponentChart, z: f64, p: &[f64], i: usize) -> Result<Vec<f64>> {
    let (a, b, c, g) = require_real(chart)?;
    let m = chart.m;
    let mf = m as f64;
    if p.len() != m + 1 || i > m {
        return Err(Error::InvalidInput(format!(
            "need {} pairings and i ≤ m",
            m + 1
        )));
    }
    let f = i as f64;
    Ok(if i == 0 {
        let k = mf / (z - 1.0);
        vec![k * (b + c + (mf - 1.0) * g / 2.0) * p[0], k * a * p[1]]
    } else if i == m {
        let k = mf / z;
        vec![k * (a + c + (mf - 1.0) * g / 2.0) * p[m], k * b * p[m - 1]]
    } else {
        let k0 = f / z;
        let k1 = (mf - f) / (z - 1.0);
        vec![
            k0 * (a + c + (f - 1.0) * g / 2.0) * p[i],
            k0 * (b + (mf - f) * g / 2.0) * p[i - 1],
            k1 * (b + c + (mf - f - 1.0) * g / 2.0) * p[i],
            k1 * (a + f * g / 2.0) * p[i + 1],
        ]
    })
}

/// Worst relative gap between `d/dz ⟨φ̃_i⟩` and the system's right-hand side, over
/// every `I_j` cycle and every `i` (the middle equation is applied for `1 ≤ i ≤ m−1`).
pub fn ode_system_residual(chart: &ExponentChart, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let m = chart.m;
    let mut worst: f64 = 0.0;
    for j in 0..=m {
        let pr = phi_pairings(&CycleDescriptor::basis_i(m, j), chart, z, cfg)?;
        for i in 0..=m {
            let terms = system_rhs_terms(chart, z, &pr.values, i)?;
            let rhs: f64 = terms.iter().sum();
            let scale = terms
                .iter()
                .map(|t| t.abs())
                .sum::<f64>()
                .max(pr.derivs[i].abs());
            worst = worst.max((pr.derivs[i] - rhs).abs() / scale);
        }
    }
    Ok(worst)
}
