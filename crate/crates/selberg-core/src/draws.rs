//! Seeded random inputs: generic exponent charts and admissible Watson, Sears and q-Racah parameter sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::qkernel::{e_half, genericity_check, resonance_distance, ExponentChart, C64};
use crate::qseries::{
    qracah_duality_condition, qracah_orthogonality_condition, sears_sides, watson_sides, QRacahSpec,
};

pub type DrawRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DrawRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real chart with `a, b, c ∈ (−0.9, 0.9)`, `g ∈ (0.05, 0.9)` that passes the genericity
/// test at tolerance `tol` and keeps its local exponent differences at least `resonance`
/// away from the integers.
pub fn generic_chart(rng: &mut DrawRng, m: usize, tol: f64, resonance: f64) -> ExponentChart {
    loop {
        let a = rng.gen_range(-0.9..0.9);
        let b = rng.gen_range(-0.9..0.9);
        let c = rng.gen_range(-0.9..0.9);
        let g = rng.gen_range(0.05..0.9);
        if let Ok(chart) = ExponentChart::real(m, a, b, c, g) {
            if genericity_check(&chart, tol).is_empty() && resonance_distance(&chart) >= resonance {
                return chart;
            }
        }
    }
}

fn unit(rng: &mut DrawRng) -> C64 {
    e_half(C64::new(rng.gen_range(-1.0..1.0), 0.0))
}

/// Both sides of one Watson transformation at unit-modulus parameters.
#[derive(Debug, Clone, Copy)]
pub struct SeriesDraw {
    pub n: usize,
    pub lhs: C64,
    pub rhs: C64,
}

impl SeriesDraw {
    /// `|lhs − rhs| / max(1, |lhs|)`.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.lhs.norm().max(1.0)
    }
}

/// Redraws until no denominator of either side vanishes.
fn admissible<F>(rng: &mut DrawRng, n_max: usize, mut sides: F) -> SeriesDraw
where
    F: FnMut(&mut DrawRng, usize, C64) -> crate::Result<(C64, C64)>,
{
    loop {
        let n = rng.gen_range(1..=n_max);
        let q = e_half(C64::new(rng.gen_range(0.05..0.9), 0.0));
        match sides(rng, n, q) {
            Ok((lhs, rhs)) => return SeriesDraw { n, lhs, rhs },
            Err(Error::VanishingFactor { .. }) => continue,
            Err(e) => panic!("unexpected rejection of a unit-modulus draw: {e}"),
        }
    }
}

pub fn watson_draw(rng: &mut DrawRng, n_max: usize) -> SeriesDraw {
    admissible(rng, n_max, |rng, n, q| {
        let [a, b, c, d, e] = std::array::from_fn(|_| unit(rng));
        watson_sides(a, b, c, d, e, n, q)
    })
}

/// Balanced draw: `b3 = q^(1−n) a1 a2 a3 / (b1 b2)`.
pub fn sears_draw(rng: &mut DrawRng, n_max: usize) -> SeriesDraw {
    admissible(rng, n_max, |rng, n, q| {
        let [a1, a2, a3, b1, b2] = std::array::from_fn(|_| unit(rng));
        let b3 = q.powi(1 - n as i32) * a1 * a2 * a3 / (b1 * b2);
        sears_sides(n, a1, a2, a3, b1, b2, b3, q)
    })
}

/// Which q-Racah identity a parameter set is drawn for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RacahCheck {
    Orthogonality,
    Duality,
}

impl RacahCheck {
    /// Largest admissible condition number. The residual/condition ratio stays below
    /// about `2e-13` for orthogonality and `4e-12` for duality, so these caps keep the
    /// roundoff at least five times under `1e-10`.
    pub fn condition_cap(self) -> f64 {
        match self {
            RacahCheck::Orthogonality => 100.0,
            RacahCheck::Duality => 10.0,
        }
    }

    fn condition(self, spec: &QRacahSpec) -> crate::Result<f64> {
        match self {
            RacahCheck::Orthogonality => qracah_orthogonality_condition(spec),
            RacahCheck::Duality => qracah_duality_condition(spec),
        }
    }
}

/// Unit-modulus `a, b, c` and `q = e(t)`, `t ∈ (0.05, 0.9)`, redrawn until every series
/// involved in `check` is defined and its condition number is under the cap. Generic
/// unit-circle draws routinely cancel by ten orders of magnitude inside a single `₄φ₃`,
/// which no f64 evaluation survives.
pub fn qracah_draw(rng: &mut DrawRng, n_max: usize, check: RacahCheck) -> QRacahSpec {
    loop {
        let spec = QRacahSpec {
            a: unit(rng),
            b: unit(rng),
            c: unit(rng),
            n_max,
            q: e_half(C64::new(rng.gen_range(0.05..0.9), 0.0)),
        };
        match check.condition(&spec) {
            Ok(k) if k <= check.condition_cap() => return spec,
            Ok(_) | Err(Error::VanishingFactor { .. }) | Err(Error::InvalidInput(_)) => {}
            Err(e) => panic!("unexpected rejection of a unit-modulus draw: {e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_charts() {
        let (mut x, mut y) = (rng(7), rng(7));
        for m in 1..=4 {
            assert_eq!(
                generic_chart(&mut x, m, 1e-9, 0.0),
                generic_chart(&mut y, m, 1e-9, 0.0)
            );
        }
    }

    #[test]
    fn resonance_margin_respected() {
        let mut r = rng(3);
        for m in 1..=4 {
            let chart = generic_chart(&mut r, m, 1e-9, 0.05);
            assert!(resonance_distance(&chart) >= 0.05);
        }
    }

    #[test]
    fn draws_satisfy_identities() {
        let mut r = rng(11);
        for _ in 0..20 {
            assert!(watson_draw(&mut r, 6).residual() < 1e-10);
            assert!(sears_draw(&mut r, 6).residual() < 1e-10);
        }
    }

    #[test]
    fn racah_draws_meet_the_cap() {
        let mut r = rng(5);
        for check in [RacahCheck::Orthogonality, RacahCheck::Duality] {
            let spec = qracah_draw(&mut r, 4, check);
            assert!(check.condition(&spec).unwrap() <= check.condition_cap());
        }
    }
}
