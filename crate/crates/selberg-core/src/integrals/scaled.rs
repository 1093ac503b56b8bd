//! `I_j(a,b,c;κ)` in the scaled variables, with κ-derivatives up to third order
//! and the pairings `⟨φ̃_i⟩` on the same cycle.

use super::simplex::{Simplex, MAX_VARS};
use super::tanh_sinh::{grid_sum, nodes, Node};
use super::{
    check_convergence, factorial, refine, scale_exponent, Estimate, PointExponents,
    QuadratureConfig,
};
use crate::error::{Error, Result};

const MAX_SMOOTH: usize = 6;

#[derive(Debug, Clone, Copy)]
struct Params {
    a: f64,
    b: f64,
    c: f64,
    g: f64,
    m: usize,
    j: usize,
    kappa: f64,
}

impl Params {
    fn far_exponent(&self) -> f64 {
        -self.a - self.b - self.c - (self.m as f64 - 1.0) * self.g - 2.0
    }
}

/// Log of the κ-independent part plus the smooth factors `(1 − κv)^coef`.
struct Point {
    log_g: f64,
    near: Simplex,
    far: Simplex,
    smooth: [(f64, f64); MAX_SMOOTH],
    n_smooth: usize,
}

fn point(p: &Params, ns: &[Node], idx: &[usize]) -> Point {
    let near = Simplex::new(ns, &idx[..p.j]);
    let far = Simplex::new(ns, &idx[p.j..]);
    let big_a = p.far_exponent();
    let mut l = near.log_weight + far.log_weight;
    let mut smooth = [(0.0, 0.0); MAX_SMOOTH];
    let mut n_smooth = 0;
    let mut push = |coef: f64, v: f64| {
        smooth[n_smooth] = (coef, v);
        n_smooth += 1;
    };
    for k in 0..near.n {
        l += p.a * near.ls[k] + p.c * near.lom[k];
        for q in 0..k {
            l += p.g * near.ldiff(q, k);
        }
        push(p.b, near.ls[k].exp());
    }
    for k in 0..far.n {
        l += big_a * far.ls[k] + p.b * far.lom[k];
        for q in 0..k {
            l += p.g * far.ldiff(q, k);
        }
        push(p.c, far.ls[k].exp());
    }
    for k in 0..near.n {
        for q in 0..far.n {
            push(p.g, (near.ls[k] + far.ls[q]).exp());
        }
    }
    for &(coef, v) in &smooth[..n_smooth] {
        l += coef * (-p.kappa * v).ln_1p();
    }
    Point {
        log_g: l,
        near,
        far,
        smooth,
        n_smooth,
    }
}

/// `[L', L'', L''']` of `L = Σ coef·ln(1 − κv)`.
fn log_derivs(p: &Params, pt: &Point) -> [f64; 3] {
    let mut d = [0.0; 3];
    for &(coef, v) in &pt.smooth[..pt.n_smooth] {
        let r = v / (1.0 - p.kappa * v);
        d[0] -= coef * r;
        d[1] -= coef * r * r;
        d[2] -= 2.0 * coef * r * r * r;
    }
    d
}

fn check(p: &Params, cfg: &QuadratureConfig) -> Result<()> {
    if p.kappa >= 1.0 || p.kappa == 0.0 || !p.kappa.is_finite() {
        return Err(Error::InvalidInput(format!(
            "scaled argument κ = {} must satisfy κ < 1, κ ≠ 0",
            p.kappa
        )));
    }
    if p.j > p.m || p.m > MAX_VARS {
        return Err(Error::InvalidInput(format!(
            "cycle index {} with m = {}",
            p.j, p.m
        )));
    }
    let exps = PointExponents::of_chart(p.a, p.b, p.c, p.g, p.m);
    check_convergence(exps, p.g, p.kappa, [0, p.j, 0, p.m - p.j], cfg.margin)
}

fn moments<const K: usize>(
    p: &Params,
    cfg: &QuadratureConfig,
    f: impl Fn(&Params, &Point) -> [f64; K] + Sync,
) -> ([f64; K], [f64; K], bool, u32) {
    refine::<K>(cfg, |level| {
        let ns = nodes(level);
        grid_sum::<K, _>(ns.len(), p.m, cfg.schedule, |idx| f(p, &point(p, &ns, idx)))
    })
}

#[allow(clippy::too_many_arguments)]
pub(super) fn eval(
    a: f64,
    b: f64,
    c: f64,
    g: f64,
    m: usize,
    j: usize,
    kappa: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let p = Params {
        a,
        b,
        c,
        g,
        m,
        j,
        kappa,
    };
    check(&p, cfg)?;
    let (v, e, converged, level) = moments::<1>(&p, cfg, |_, pt| [pt.log_g.exp()]);
    let pre = factorial(m) * kappa.abs().powf(scale_exponent(a, c, g, j));
    Ok(Estimate {
        value: pre * v[0],
        error: pre * e[0],
        converged,
        level,
    })
}

/// `d^n/dκ^n I_j` for `n = 0..=3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub values: [f64; 4],
    pub errors: [f64; 4],
    pub converged: bool,
}

/// `d^n/dκ^n |κ|^e` for `n = 0..=3`.
fn power_derivs(kappa: f64, e: f64) -> [f64; 4] {
    let p0 = kappa.abs().powf(e);
    [
        p0,
        e * p0 / kappa,
        e * (e - 1.0) * p0 / (kappa * kappa),
        e * (e - 1.0) * (e - 2.0) * p0 / (kappa * kappa * kappa),
    ]
}

fn leibniz(p: &[f64; 4], h: &[f64; 4]) -> [f64; 4] {
    [
        p[0] * h[0],
        p[1] * h[0] + p[0] * h[1],
        p[2] * h[0] + 2.0 * p[1] * h[1] + p[0] * h[2],
        p[3] * h[0] + 3.0 * p[2] * h[1] + 3.0 * p[1] * h[2] + p[0] * h[3],
    ]
}

#[allow(clippy::too_many_arguments)]
pub(super) fn derivatives(
    a: f64,
    b: f64,
    c: f64,
    g: f64,
    m: usize,
    j: usize,
    kappa: f64,
    cfg: &QuadratureConfig,
) -> Result<Derivatives> {
    let p = Params {
        a,
        b,
        c,
        g,
        m,
        j,
        kappa,
    };
    check(&p, cfg)?;
    let (h, herr, converged, _) = moments::<4>(&p, cfg, |p, pt| {
        let gv = pt.log_g.exp();
        let [d1, d2, d3] = log_derivs(p, pt);
        [
            gv,
            d1 * gv,
            (d2 + d1 * d1) * gv,
            (d3 + 3.0 * d1 * d2 + d1 * d1 * d1) * gv,
        ]
    });
    let pw = power_derivs(kappa, scale_exponent(a, c, g, j));
    let mf = factorial(m);
    let values = leibniz(&pw, &h).map(|x| mf * x);
    let abs_pw = pw.map(f64::abs);
    let errors = leibniz(&abs_pw, &herr).map(|x| mf * x);
    Ok(Derivatives {
        values,
        errors,
        converged,
    })
}

/// `⟨φ̃_i⟩` and `d/dκ ⟨φ̃_i⟩` on the cycle `I_j`, `i = 0..=m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairings {
    pub values: Vec<f64>,
    pub derivs: Vec<f64>,
    pub errors: Vec<f64>,
    pub converged: bool,
}

/// `(ln|·|, sign, d ln|·|/dκ)` for each variable.
type FactorLogs = [(f64, f64, f64); MAX_VARS];

/// Per-variable factors `1/t` and `1/(t−1)`.
fn form_factors(p: &Params, pt: &Point) -> (FactorLogs, FactorLogs) {
    let mut inv = [(0.0, 1.0, 0.0); MAX_VARS];
    let mut m1 = [(0.0, 1.0, 0.0); MAX_VARS];
    let lk = p.kappa.abs().ln();
    for k in 0..pt.near.n {
        let ls = pt.near.ls[k];
        let v = ls.exp();
        // t = κs
        inv[k] = (-lk - ls, p.kappa.signum(), -1.0 / p.kappa);
        m1[k] = (-(-p.kappa * v).ln_1p(), -1.0, v / (1.0 - p.kappa * v));
    }
    for k in 0..pt.far.n {
        // t = 1/u
        let (ls, lom) = (pt.far.ls[k], pt.far.lom[k]);
        inv[pt.near.n + k] = (ls, 1.0, 0.0);
        m1[pt.near.n + k] = (ls - lom, 1.0, 0.0);
    }
    (inv, m1)
}

#[allow(clippy::too_many_arguments)]
pub(super) fn pairings(
    a: f64,
    b: f64,
    c: f64,
    g: f64,
    m: usize,
    j: usize,
    kappa: f64,
    cfg: &QuadratureConfig,
) -> Result<Pairings> {
    if !(0.0 < kappa && kappa < 1.0) {
        return Err(Error::InvalidInput(format!(
            "pairings are evaluated for 0 < z < 1; got {kappa}"
        )));
    }
    let p = Params {
        a,
        b,
        c,
        g,
        m,
        j,
        kappa,
    };
    if p.j > p.m || p.m > MAX_VARS {
        return Err(Error::InvalidInput(format!("cycle index {j} with m = {m}")));
    }
    // the forms add a pole of order one at 0 and 1 and one order of decay at ∞
    let exps = PointExponents {
        at_zero: a - 1.0,
        at_one: b - 1.0,
        at_z: c,
        at_inf: p.far_exponent() + 1.0,
    };
    check_convergence(exps, g, kappa, [0, j, 0, m - j], cfg.margin)?;
    let (mom, errs, converged, _) = moments::<8>(&p, cfg, |p, pt| {
        let d1 = log_derivs(p, pt)[0];
        let (inv, m1) = form_factors(p, pt);
        let mut out = [0.0; 8];
        for mask in 0u32..(1 << p.m) {
            let i = mask.count_ones() as usize;
            let mut l = pt.log_g;
            let mut sgn = 1.0;
            let mut ld = d1;
            for k in 0..p.m {
                let f = if mask & (1 << k) != 0 { inv[k] } else { m1[k] };
                l += f.0;
                sgn *= f.1;
                ld += f.2;
            }
            let v = sgn * l.exp();
            out[2 * i] += v;
            out[2 * i + 1] += v * ld;
        }
        out
    });
    let e = scale_exponent(a, c, g, j);
    let pre = factorial(m) * kappa.powf(e);
    let mut values = Vec::with_capacity(m + 1);
    let mut derivs = Vec::with_capacity(m + 1);
    let mut errors = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let sym = factorial(i) * factorial(m - i);
        values.push(pre * sym * mom[2 * i]);
        derivs.push(pre * sym * (e / kappa * mom[2 * i] + mom[2 * i + 1]));
        errors.push(pre * sym * errs[2 * i].max(errs[2 * i + 1]));
    }
    Ok(Pairings {
        values,
        derivs,
        errors,
        converged,
    })
}
