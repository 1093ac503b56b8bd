//! Ordered simplex `0 < s_1 < … < s_n < 1` as a unit cube, by stick-breaking in log space:
//! `s_k = s_(k−1) + (1 − s_(k−1)) x_k`.

use super::tanh_sinh::Node;

pub const MAX_VARS: usize = 3;

#[derive(Debug, Clone, Copy)]
pub struct Simplex {
    pub n: usize,
    /// `ln` of the Jacobian times the tanh-sinh weights.
    pub log_weight: f64,
    pub ls: [f64; MAX_VARS],
    pub lom: [f64; MAX_VARS],
    lgap: [f64; MAX_VARS],
}

pub fn logsumexp(xs: &[f64]) -> f64 {
    let mx = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return mx;
    }
    mx + xs.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

pub fn logaddexp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

impl Simplex {
    pub fn new(nodes: &[Node], idx: &[usize]) -> Self {
        let n = idx.len();
        debug_assert!(n <= MAX_VARS);
        let mut s = Simplex {
            n,
            log_weight: 0.0,
            ls: [0.0; MAX_VARS],
            lom: [0.0; MAX_VARS],
            lgap: [0.0; MAX_VARS],
        };
        let mut lprev = 0.0;
        for (k, &i) in idx.iter().enumerate() {
            let node = nodes[i];
            s.log_weight += node.lw + lprev;
            s.lgap[k] = lprev + node.lx;
            lprev += node.ly;
            s.lom[k] = lprev;
        }
        for k in 0..n {
            s.ls[k] = logsumexp(&s.lgap[..=k]);
        }
        s
    }

    /// `ln(s_k − s_l)` for `l < k`.
    pub fn ldiff(&self, l: usize, k: usize) -> f64 {
        debug_assert!(l < k);
        logsumexp(&self.lgap[l + 1..=k])
    }
}
