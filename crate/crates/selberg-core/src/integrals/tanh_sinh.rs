//! Tanh-sinh nodes on (0, 1) in log form and a deterministic tensor-grid reduction.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2};

use crate::sum::KahanSum;

/// Nodes whose distance to the nearer endpoint falls below `exp(LOG_CUTOFF)` are dropped.
pub const LOG_CUTOFF: f64 = -700.0;

/// One abscissa `x`, stored as `ln x`, `ln(1 − x)` and the log of its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub lx: f64,
    pub ly: f64,
    pub lw: f64,
}

fn node_at(t: f64, h: f64) -> Option<Node> {
    let u = FRAC_PI_2 * t.sinh();
    let au = u.abs();
    let tail = (-2.0 * au).exp();
    let lsmall = -2.0 * au - tail.ln_1p();
    if lsmall < LOG_CUTOFF {
        return None;
    }
    let lbig = (-lsmall.exp()).ln_1p();
    let (lx, ly) = if u >= 0.0 {
        (lbig, lsmall)
    } else {
        (lsmall, lbig)
    };
    let ln_cosh_u = au + tail.ln_1p() - LN_2;
    let lw = (h * FRAC_PI_4 * t.cosh()).ln() - 2.0 * ln_cosh_u;
    Some(Node { lx, ly, lw })
}

/// Nodes for step `h = 2^(−level)`, in increasing order of `x`.
pub fn nodes(level: u32) -> Vec<Node> {
    let h = (-(level as f64)).exp2();
    let mut right = Vec::new();
    let mut k = 1i64;
    while let Some(n) = node_at(k as f64 * h, h) {
        right.push(n);
        k += 1;
    }
    let mut out: Vec<Node> = right
        .iter()
        .rev()
        .map(|n| Node {
            lx: n.ly,
            ly: n.lx,
            lw: n.lw,
        })
        .collect();
    out.push(node_at(0.0, h).expect("centre node"));
    out.extend(right);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Outer grid slices on the rayon pool (sequential without the `parallel` feature).
    #[default]
    Parallel,
    Sequential,
}

fn slice_sum<const K: usize, F>(first: usize, n: usize, dim: usize, f: &F) -> [f64; K]
where
    F: Fn(&[usize]) -> [f64; K],
{
    let mut acc = [KahanSum::new(); K];
    let mut idx = vec![0usize; dim];
    idx[0] = first;
    loop {
        let v = f(&idx);
        for (a, x) in acc.iter_mut().zip(v) {
            a.add(x);
        }
        // odometer over axes 1..dim
        let mut ax = dim;
        loop {
            if ax == 1 {
                return acc.map(|a| a.value());
            }
            ax -= 1;
            idx[ax] += 1;
            if idx[ax] < n {
                break;
            }
            idx[ax] = 0;
        }
    }
}

/// `Σ f(idx)` over `idx ∈ {0..n}^dim`. Each outer index is summed as one slice and
/// the slices are combined in index order, so the result does not depend on the schedule.
pub fn grid_sum<const K: usize, F>(n: usize, dim: usize, schedule: Schedule, f: F) -> [f64; K]
where
    F: Fn(&[usize]) -> [f64; K] + Sync,
{
    assert!(dim >= 1, "grid dimension must be positive");
    let slices: Vec<[f64; K]> = match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .map(|i| slice_sum(i, n, dim, &f))
                .collect()
        }
        _ => (0..n).map(|i| slice_sum(i, n, dim, &f)).collect(),
    };
    let mut acc = [KahanSum::new(); K];
    for s in slices {
        for (a, x) in acc.iter_mut().zip(s) {
            a.add(x);
        }
    }
    acc.map(|a| a.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate_1d(level: u32, f: impl Fn(f64, f64) -> f64 + Sync) -> f64 {
        let ns = nodes(level);
        grid_sum::<1, _>(ns.len(), 1, Schedule::Sequential, |i| {
            let n = ns[i[0]];
            [f(n.lx, n.ly) * n.lw.exp()]
        })[0]
    }

    #[test]
    fn nodes_are_symmetric_and_ordered() {
        let ns = nodes(4);
        assert_eq!(ns.len() % 2, 1);
        for (a, b) in ns.iter().zip(ns.iter().rev()) {
            assert_eq!(a.lx, b.ly);
        }
        for w in ns.windows(2) {
            assert!(w[0].lx < w[1].lx);
        }
        assert!(ns[0].lx >= LOG_CUTOFF);
    }

    #[test]
    fn weights_sum_to_one() {
        let s = integrate_1d(4, |_, _| 1.0);
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity_beta() {
        // ∫ x^(−0.9) (1−x)^(−0.5) = B(0.1, 0.5)
        let exact = 11.323_086_975_215_8;
        let s = integrate_1d(5, |lx, ly| (-0.9 * lx - 0.5 * ly).exp());
        assert!((s / exact - 1.0).abs() < 1e-11, "{s}");
    }

    #[test]
    fn schedules_are_bitwise_identical() {
        let ns = nodes(3);
        let f = |i: &[usize]| [(ns[i[0]].lw + ns[i[1]].lw - 0.3 * ns[i[0]].lx).exp()];
        let a = grid_sum::<1, _>(ns.len(), 2, Schedule::Sequential, f);
        let b = grid_sum::<1, _>(ns.len(), 2, Schedule::Parallel, f);
        assert_eq!(a[0].to_bits(), b[0].to_bits());
    }
}
