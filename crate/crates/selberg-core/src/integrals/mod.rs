//! Numerical evaluation of the basis integrals `I_j`, `J_j`, `K_j` and of the
//! twisted forms `⟨φ̃_i⟩`, for `m ≤ 3` and real exponents in the region of
//! absolute convergence.
//!
//! `I_j(a,b,c;z) = m!·∫ Π t^a (1−t)^b |t−z|^c Π|t_k−t_l|^g` over
//! `0 < t_1 < … < t_j < z` and `1 < t_(j+1) < … < t_m`. In the evaluator the
//! near variables are written `t = κs` and the far ones `t = 1/u`, so `z`
//! only enters through `|κ|^e` and the smooth factors `(1−κs)^b`, `(1−κu)^c`,
//! `(1−κsu)^g`. Then `J_j(a,b,c;z) = I_j(b,a,c;1−z)` and
//! `K_j(a,b,c;z) = |z|^((a+b+c+1)m + C(m,2)g)·I_j(a,c,b;1/z)`.
//! An independent raw-domain evaluator integrates any interval occupancy
//! directly on the real line.

mod checks;
mod raw;
mod scaled;
pub mod simplex;
pub mod tanh_sinh;

pub use checks::*;
pub use raw::eval_raw;
pub use scaled::{Derivatives, Pairings};
pub use tanh_sinh::Schedule;

use crate::error::{Error, Result};
use crate::qkernel::{choose2, ExponentChart};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Coarsest tanh-sinh step `2^(−min_level)`.
    pub min_level: u32,
    /// Finest step `2^(−max_level)`.
    pub max_level: u32,
    pub rel_tol: f64,
    /// Required distance of every convergence inequality from its boundary.
    pub margin: f64,
    pub schedule: Schedule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            min_level: 3,
            max_level: 6,
            rel_tol: 1e-10,
            margin: 0.05,
            schedule: Schedule::Parallel,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol < 1e-12 || !self.rel_tol.is_finite() {
            return Err(Error::InvalidInput(format!(
                "rel_tol {} below 1e-12",
                self.rel_tol
            )));
        }
        if self.margin <= 0.0 {
            return Err(Error::InvalidInput(
                "convergence margin must be positive".into(),
            ));
        }
        if self.min_level > self.max_level || self.max_level > 10 {
            return Err(Error::InvalidInput(format!(
                "levels {}..{} out of order or too fine",
                self.min_level, self.max_level
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    I,
    J,
    K,
    Raw,
}

/// Occupancy `(i1, j1, i2, j2)` of the four intervals cut out by `0, 1, z`, left to right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleDescriptor {
    pub occupancy: [usize; 4],
    pub basis: BasisTag,
    pub index: usize,
}

impl CycleDescriptor {
    pub fn m(&self) -> usize {
        self.occupancy.iter().sum()
    }

    /// `I_j ↔ (0, j, 0, m−j)`.
    pub fn basis_i(m: usize, j: usize) -> Self {
        CycleDescriptor {
            occupancy: [0, j, 0, m - j],
            basis: BasisTag::I,
            index: j,
        }
    }

    /// `J_j` (for `0 < z < 1`) and `K_j` (for `z < 0`) both occupy `(m−j, 0, j, 0)`.
    pub fn basis_jk(m: usize, j: usize, tag: BasisTag) -> Self {
        CycleDescriptor {
            occupancy: [m - j, 0, j, 0],
            basis: tag,
            index: j,
        }
    }

    pub fn raw(occupancy: [usize; 4]) -> Self {
        CycleDescriptor {
            occupancy,
            basis: BasisTag::Raw,
            index: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSample {
    pub z: f64,
    pub basis: BasisTag,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub converged: bool,
}

/// Level-doubling driver: stops once the largest relative change of any moment is below `rel_tol`.
pub(crate) fn refine<const K: usize>(
    cfg: &QuadratureConfig,
    mut eval: impl FnMut(u32) -> [f64; K],
) -> ([f64; K], [f64; K], bool, u32) {
    let mut prev = eval(cfg.min_level);
    let mut errs = [f64::INFINITY; K];
    for level in cfg.min_level + 1..=cfg.max_level {
        let cur = eval(level);
        let scale = cur
            .iter()
            .map(|x| x.abs())
            .fold(f64::MIN_POSITIVE, f64::max);
        for k in 0..K {
            errs[k] = (cur[k] - prev[k]).abs();
        }
        let change = errs.iter().copied().fold(0.0, f64::max) / scale;
        prev = cur;
        if change < cfg.rel_tol {
            return (prev, errs, true, level);
        }
    }
    (prev, errs, false, cfg.max_level)
}

pub(crate) fn require_real(chart: &ExponentChart) -> Result<(f64, f64, f64, f64)> {
    if !chart.is_real() {
        return Err(Error::InvalidInput(
            "quadrature needs real exponents".into(),
        ));
    }
    if chart.m > simplex::MAX_VARS {
        return Err(Error::InvalidInput(format!(
            "quadrature supports m ≤ {}, got {}",
            simplex::MAX_VARS,
            chart.m
        )));
    }
    Ok(chart.real_parts())
}

/// Exponents at the four singular points of a cycle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointExponents {
    pub at_zero: f64,
    pub at_one: f64,
    pub at_z: f64,
    /// In the variable `u = 1/t`: `−a−b−c−(m−1)g−2`.
    pub at_inf: f64,
}

/// Selberg-type absolute convergence: for every singular point with `n` adjacent
/// variables, `e + 1 + (k−1)g/2 > margin` for `k = 1..n`; for interior collisions
/// `1 + kg/2 > margin`.
pub(crate) fn check_convergence(
    exps: PointExponents,
    g: f64,
    z: f64,
    occupancy: [usize; 4],
    margin: f64,
) -> Result<()> {
    let [o0, o1, o2, o3] = occupancy;
    // intervals in order: (−∞,p0), (p0,p1), (p1,p2), (p2,∞)
    let points = sorted_points(z, exps)?;
    let mut checks = vec![("∞", exps.at_inf, o0 + o3)];
    checks.push((points[0].0, points[0].1, o0 + o1));
    checks.push((points[1].0, points[1].1, o1 + o2));
    checks.push((points[2].0, points[2].1, o2 + o3));
    for (name, e, n) in checks {
        for k in 1..=n {
            let lhs = e + 1.0 + (k as f64 - 1.0) * g / 2.0;
            if lhs <= margin {
                return Err(Error::Divergent(format!(
                    "at {name}: exponent {e} with {k} colliding variables gives {lhs:.4} ≤ margin {margin}"
                )));
            }
        }
    }
    let biggest = occupancy.iter().copied().max().unwrap_or(0);
    for k in 2..=biggest {
        let lhs = 1.0 + k as f64 * g / 2.0;
        if lhs <= margin {
            return Err(Error::Divergent(format!(
                "interior collision of {k} variables: 1 + kg/2 = {lhs:.4} ≤ margin {margin}"
            )));
        }
    }
    Ok(())
}

/// `(name, exponent, position)` of `0, 1, z` sorted by position.
pub(crate) fn sorted_points(z: f64, exps: PointExponents) -> Result<[(&'static str, f64, f64); 3]> {
    if !z.is_finite() || z == 0.0 || z == 1.0 {
        return Err(Error::InvalidInput(format!(
            "z = {z} coincides with a singular point"
        )));
    }
    let mut pts = [
        ("0", exps.at_zero, 0.0),
        ("1", exps.at_one, 1.0),
        ("z", exps.at_z, z),
    ];
    pts.sort_by(|x, y| x.2.total_cmp(&y.2));
    Ok(pts)
}

impl PointExponents {
    pub fn of_chart(a: f64, b: f64, c: f64, g: f64, m: usize) -> Self {
        PointExponents {
            at_zero: a,
            at_one: b,
            at_z: c,
            at_inf: -a - b - c - (m as f64 - 1.0) * g - 2.0,
        }
    }
}

/// Exponent of `|κ|` pulled out of `I_j` by `t = κs`.
pub(crate) fn scale_exponent(a: f64, c: f64, g: f64, j: usize) -> f64 {
    (a + c + 1.0) * j as f64 + choose2(j) * g
}

pub(crate) fn factorial(m: usize) -> f64 {
    crate::qkernel::factorial(m)
}

/// `I_j`, `J_j` or `K_j` at `z` (or a raw cycle, with `j` ignored).
pub fn eval_basis(
    j: usize,
    chart: &ExponentChart,
    z: f64,
    tag: BasisTag,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let (a, b, c, g) = require_real(chart)?;
    let m = chart.m;
    if j > m {
        return Err(Error::InvalidInput(format!(
            "basis index {j} exceeds m={m}"
        )));
    }
    match tag {
        BasisTag::I => {
            if z >= 1.0 || z == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "I-basis needs z < 1, z ≠ 0; got {z}"
                )));
            }
            scaled::eval(a, b, c, g, m, j, z, cfg)
        }
        BasisTag::J => {
            if !(0.0 < z && z < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "J-basis needs 0 < z < 1; got {z}"
                )));
            }
            scaled::eval(b, a, c, g, m, j, 1.0 - z, cfg)
        }
        BasisTag::K => {
            if z >= 0.0 {
                return Err(Error::InvalidInput(format!("K-basis needs z < 0; got {z}")));
            }
            let e = (a + b + c + 1.0) * m as f64 + choose2(m) * g;
            let est = scaled::eval(a, c, b, g, m, j, 1.0 / z, cfg)?;
            let f = z.abs().powf(e);
            Ok(Estimate {
                value: est.value * f,
                error: est.error * f,
                ..est
            })
        }
        BasisTag::Raw => Err(Error::InvalidInput(
            "raw cycles need an occupancy; use eval_raw".into(),
        )),
    }
}

/// All `m+1` functions of a basis at `z`.
pub fn eval_sample(
    chart: &ExponentChart,
    z: f64,
    tag: BasisTag,
    cfg: &QuadratureConfig,
) -> Result<SolutionSample> {
    let mut values = Vec::with_capacity(chart.m + 1);
    let mut errors = Vec::with_capacity(chart.m + 1);
    let mut converged = true;
    for j in 0..=chart.m {
        let e = eval_basis(j, chart, z, tag, cfg)?;
        values.push(e.value);
        errors.push(e.error);
        converged &= e.converged;
    }
    Ok(SolutionSample {
        z,
        basis: tag,
        values,
        errors,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig {
            rel_tol: 1e-13,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = QuadratureConfig {
            margin: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn divergent_far_group_rejected() {
        // a+b+c+g = −0.9 > −1: two variables in (1, ∞) do not converge
        let chart = ExponentChart::real(2, -0.4, -0.4, -0.4, 0.3).unwrap();
        let err =
            eval_basis(0, &chart, 0.5, BasisTag::I, &QuadratureConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Divergent(_)), "{err}");
        assert!(err.is_input_rejection());
    }

    #[test]
    fn basis_domains_enforced() {
        let chart = ExponentChart::real(1, -0.4, -0.4, -0.4, 0.3).unwrap();
        let cfg = QuadratureConfig::default();
        assert!(eval_basis(0, &chart, 0.5, BasisTag::K, &cfg).is_err());
        assert!(eval_basis(0, &chart, -0.5, BasisTag::J, &cfg).is_err());
        assert!(eval_basis(2, &chart, 0.5, BasisTag::I, &cfg).is_err());
    }

    #[test]
    fn descriptors_sum_to_m() {
        for j in 0..=3 {
            assert_eq!(CycleDescriptor::basis_i(3, j).m(), 3);
            assert_eq!(CycleDescriptor::basis_jk(3, j, BasisTag::J).m(), 3);
        }
    }
}
