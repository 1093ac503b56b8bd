//! Direct integration over any occupancy of the four intervals cut out by `0, 1, z`.
//!
//! Each interval's variables are ordered and mapped onto a simplex. Bounded intervals
//! use `t = L + (R−L)s`; half-lines use `t = P ± (1−s)/s`. Every distance `|t−p|`
//! and `|t_k−t_l|` is assembled in log space from exact sums of positive pieces,
//! so no cancellation occurs near the endpoints.

use super::simplex::{logaddexp, logsumexp, Simplex, MAX_VARS};
use super::tanh_sinh::{grid_sum, nodes, Node};
use super::{
    check_convergence, factorial, refine, require_real, sorted_points, Estimate, PointExponents,
    QuadratureConfig,
};
use crate::error::{Error, Result};
use crate::qkernel::ExponentChart;

#[derive(Debug, Clone, Copy)]
enum Interval {
    Left(f64),
    Finite(f64, f64),
    Right(f64),
}

impl Interval {
    fn left(&self) -> f64 {
        match *self {
            Interval::Left(_) => f64::NEG_INFINITY,
            Interval::Finite(l, _) => l,
            Interval::Right(p) => p,
        }
    }

    fn right(&self) -> f64 {
        match *self {
            Interval::Left(p) => p,
            Interval::Finite(_, r) => r,
            Interval::Right(_) => f64::INFINITY,
        }
    }
}

/// Per-variable log distances to the interval ends, plus the group's log Jacobian
/// and intra-group pair logs.
struct Group {
    n: usize,
    ldl: [f64; MAX_VARS],
    ldr: [f64; MAX_VARS],
    log_jac: f64,
    pair_sum: f64,
}

fn group(iv: Interval, ns: &[Node], idx: &[usize], g: f64) -> Group {
    let s = Simplex::new(ns, idx);
    let mut out = Group {
        n: s.n,
        ldl: [f64::INFINITY; MAX_VARS],
        ldr: [f64::INFINITY; MAX_VARS],
        log_jac: s.log_weight,
        pair_sum: 0.0,
    };
    match iv {
        Interval::Finite(l, r) => {
            let lw = (r - l).ln();
            out.log_jac += s.n as f64 * lw;
            for k in 0..s.n {
                out.ldl[k] = lw + s.ls[k];
                out.ldr[k] = lw + s.lom[k];
                for q in 0..k {
                    out.pair_sum += g * (lw + s.ldiff(q, k));
                }
            }
        }
        Interval::Left(_) | Interval::Right(_) => {
            for k in 0..s.n {
                let d = s.lom[k] - s.ls[k];
                if matches!(iv, Interval::Right(_)) {
                    out.ldl[k] = d;
                } else {
                    out.ldr[k] = d;
                }
                out.log_jac -= 2.0 * s.ls[k];
                for q in 0..k {
                    out.pair_sum += g * (s.ldiff(q, k) - s.ls[k] - s.ls[q]);
                }
            }
        }
    }
    out
}

fn ln_gap(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `ln|t − q|` for a variable of `iv` with end distances `(ldl, ldr)`.
fn ln_dist(iv: Interval, ldl: f64, ldr: f64, q: f64) -> f64 {
    if q >= iv.right() {
        logaddexp(ln_gap(q - iv.right()), ldr)
    } else {
        logaddexp(ln_gap(iv.left() - q), ldl)
    }
}

/// `m!·∫` over the ordered chambers with `occupancy[r]` variables in the `r`-th interval.
pub fn eval_raw(
    chart: &ExponentChart,
    z: f64,
    occupancy: [usize; 4],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    let (a, b, c, g) = require_real(chart)?;
    let m = chart.m;
    if occupancy.iter().sum::<usize>() != m {
        return Err(Error::InvalidInput(format!(
            "occupancy {occupancy:?} does not sum to m = {m}"
        )));
    }
    let exps = PointExponents::of_chart(a, b, c, g, m);
    check_convergence(exps, g, z, occupancy, cfg.margin)?;
    let pts = sorted_points(z, exps)?;
    let ivs = [
        Interval::Left(pts[0].2),
        Interval::Finite(pts[0].2, pts[1].2),
        Interval::Finite(pts[1].2, pts[2].2),
        Interval::Right(pts[2].2),
    ];
    let singular = [(0.0, a), (1.0, b), (z, c)];
    let mut starts = [0usize; 5];
    for r in 0..4 {
        starts[r + 1] = starts[r] + occupancy[r];
    }

    let (v, e, converged, level) = refine::<1>(cfg, |level| {
        let ns = nodes(level);
        grid_sum::<1, _>(ns.len(), m, cfg.schedule, |idx| {
            let groups: [Group; 4] =
                std::array::from_fn(|r| group(ivs[r], &ns, &idx[starts[r]..starts[r + 1]], g));
            let mut l = 0.0;
            for (r, gr) in groups.iter().enumerate() {
                l += gr.log_jac + gr.pair_sum;
                for k in 0..gr.n {
                    for &(q, ex) in &singular {
                        l += ex * ln_dist(ivs[r], gr.ldl[k], gr.ldr[k], q);
                    }
                }
            }
            for ra in 0..4 {
                for rb in ra + 1..4 {
                    let gap = ln_gap(ivs[rb].left() - ivs[ra].right());
                    for ka in 0..groups[ra].n {
                        for kb in 0..groups[rb].n {
                            l += g * logsumexp(&[groups[ra].ldr[ka], gap, groups[rb].ldl[kb]]);
                        }
                    }
                }
            }
            [l.exp()]
        })
    });
    let mf = factorial(m);
    Ok(Estimate {
        value: mf * v[0],
        error: mf * e[0],
        converged,
        level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::selberg;
    use num_complex::Complex64;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn bounded_interval_matches_beta() {
        // m=1 on (0, z): z^(a+c+1)·B(a+1, c+1)·₂F₁, checked at b = 0 where ₂F₁ = 1
        let (a, c) = (-0.4, -0.3);
        let chart = ExponentChart::real(1, a, 0.0, c, 0.3).unwrap();
        let z = 0.3;
        let got = eval_raw(&chart, z, [0, 1, 0, 0], &cfg()).unwrap().value;
        let s = selberg(
            1,
            Complex64::new(a + 1.0, 0.0),
            Complex64::new(c + 1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap()
        .re;
        let want = z.powf(a + c + 1.0) * s;
        assert!((got / want - 1.0).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn half_line_matches_beta() {
        // ∫_1^∞ t^a (t−1)^b dt = B(b+1, −a−b−1) with c = 0
        let (a, b) = (-0.9, -0.4);
        let chart = ExponentChart::real(1, a, b, 0.0, 0.3).unwrap();
        let got = eval_raw(&chart, 0.5, [0, 0, 0, 1], &cfg()).unwrap().value;
        let want = selberg(
            1,
            Complex64::new(b + 1.0, 0.0),
            Complex64::new(-a - b - 1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
        .unwrap()
        .re;
        assert!((got / want - 1.0).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn left_half_line_mirrors_right() {
        // t ↦ 1 − t swaps (−∞, 0) and (1, ∞) together with a ↔ b
        let chart = ExponentChart::real(2, -0.3, -0.5, -0.4, 0.1).unwrap();
        let swapped = ExponentChart::real(2, -0.5, -0.3, -0.4, 0.1).unwrap();
        let x = eval_raw(&chart, 0.4, [2, 0, 0, 0], &cfg()).unwrap().value;
        let y = eval_raw(&swapped, 0.6, [0, 0, 0, 2], &cfg()).unwrap().value;
        assert!((x / y - 1.0).abs() < 1e-9, "{x} vs {y}");
    }

    #[test]
    fn bad_occupancy_rejected() {
        let chart = ExponentChart::real(2, -0.4, -0.4, -0.4, 0.1).unwrap();
        assert!(eval_raw(&chart, 0.5, [1, 0, 0, 0], &cfg()).is_err());
    }
}
