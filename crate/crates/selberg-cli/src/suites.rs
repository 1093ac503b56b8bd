//! The `verify` suites: each identity becomes one residual line with its configured threshold.

use selberg_core::config::Config;
use selberg_core::connection::{
    dtype_closed_col, dtype_closed_row, dtype_connection, dtype_symmetry_residual,
    inverse_identity_residual, inversion_orthogonality_residual, variant_spread, Pair, Variant,
};
use selberg_core::draws::{generic_chart, qracah_draw, rng, sears_draw, watson_draw, RacahCheck};
use selberg_core::hermitian::{
    connection_condition, diagonal_form, dtype_expansion_residual, dtype_invariance_residual,
    invariance_residual, monodromy, sample_f, weight_agreement, FormKind,
};
use selberg_core::integrals::{
    asymptotic_residual, connection_residual_numeric, ode_residual, ode_system_residual,
    reflection_residual, BasisTag, Reflection,
};
use selberg_core::qkernel::{e_half, Singularity};
use selberg_core::qseries::{qracah_duality_residual, qracah_orthogonality_residual, QRacahSpec};
use selberg_core::{Error, Result, C64};

use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Qseries,
    Connection,
    Quadrature,
    Hermitian,
    All,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Scope {
    pub m: Option<usize>,
    pub dtype_rho: Option<usize>,
}

impl Scope {
    fn ms(&self, all: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.m {
            Some(m) => all.filter(|&k| k == m).collect(),
            None => all.collect(),
        }
    }

    fn rhos(&self, all: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.dtype_rho {
            Some(r) => vec![r],
            None => all.collect(),
        }
    }
}

fn unit(x: f64) -> C64 {
    e_half(C64::new(x, 0.0))
}

fn worst<I: IntoIterator<Item = Result<f64>>>(xs: I) -> Result<f64> {
    xs.into_iter().try_fold(0.0f64, |acc, x| Ok(acc.max(x?)))
}

pub fn run(suite: Suite, cfg: &Config, scope: Scope, report: &mut Report) -> Result<()> {
    let suites: &[Suite] = match suite {
        Suite::All => &[
            Suite::Qseries,
            Suite::Connection,
            Suite::Quadrature,
            Suite::Hermitian,
        ],
        _ => std::slice::from_ref(&suite),
    };
    for s in suites {
        match s {
            Suite::Qseries => qseries(cfg, report)?,
            Suite::Connection => connection(cfg, scope, report)?,
            Suite::Quadrature => quadrature(cfg, scope, report)?,
            Suite::Hermitian => hermitian(cfg, scope, report)?,
            Suite::All => unreachable!(),
        }
    }
    Ok(())
}

fn qseries(cfg: &Config, report: &mut Report) -> Result<()> {
    let tol = cfg.threshold("racah_orthogonality")?;
    for n in 1..=8 {
        let spec = QRacahSpec {
            a: unit(0.76),
            b: unit(0.91),
            c: unit(0.61),
            n_max: n,
            q: unit(0.41),
        };
        report.check(
            &format!("qracah-orthogonality[N={n}]"),
            tol,
            qracah_orthogonality_residual(&spec),
        );
    }
    let draws = cfg.integer("qseries_draws")? as usize;
    let mut r = rng(cfg.integer("seed")?);
    let tol = cfg.threshold("qseries")?;
    let w = (0..draws).map(|_| watson_draw(&mut r, 6).residual());
    report.check("watson", tol, Ok(w.fold(0.0, f64::max)));
    let s = (0..draws).map(|_| sears_draw(&mut r, 6).residual());
    report.check("sears", tol, Ok(s.fold(0.0, f64::max)));
    let tol = cfg.threshold("racah_orthogonality")?;
    for (name, check) in [
        ("qracah-orthogonality-random", RacahCheck::Orthogonality),
        ("qracah-duality-random", RacahCheck::Duality),
    ] {
        let mut worst: f64 = 0.0;
        for i in 0..draws {
            let spec = qracah_draw(&mut r, 1 + i % 8, check);
            worst = worst.max(match check {
                RacahCheck::Orthogonality => qracah_orthogonality_residual(&spec)?,
                RacahCheck::Duality => qracah_duality_residual(&spec)?,
            });
        }
        report.check(name, tol, Ok(worst));
    }
    report.result("qseries_draws", draws);
    Ok(())
}

fn connection(cfg: &Config, scope: Scope, report: &mut Report) -> Result<()> {
    let ms = scope.ms(1..=6);
    if !ms.is_empty() {
        let mut r = rng(cfg.integer("seed")?);
        let count = cfg.integer("charts")? as usize;
        let charts: Vec<_> = (0..count)
            .map(|k| generic_chart(&mut r, ms[k % ms.len()], cfg.genericity_tol, 0.0))
            .collect();
        report.result("random_charts", charts.len());
        report.check(
            "variant-agreement",
            cfg.threshold("variant_agreement")?,
            worst(charts.iter().map(variant_spread)),
        );
        // the inversion residual is absolute, so it gets charts away from resonance
        let charts: Vec<_> = (0..count)
            .map(|k| {
                generic_chart(
                    &mut r,
                    ms[k % ms.len()],
                    cfg.genericity_tol,
                    cfg.resonance_margin,
                )
            })
            .collect();
        let inv = cfg.threshold("inversion")?;
        report.check(
            "inversion",
            inv,
            worst(
                charts
                    .iter()
                    .map(|c| inverse_identity_residual(c, Variant::SumA)),
            ),
        );
        report.check(
            "inversion-orthogonality",
            inv,
            worst(charts.iter().map(inversion_orthogonality_residual)),
        );
    }
    let sym = cfg.threshold("dtype_symmetry")?;
    let app = cfg.threshold("dtype_closed_form")?;
    for rho in scope.rhos(1..=4) {
        report.check(
            &format!("dtype-symmetry[rho={rho}]"),
            sym,
            dtype_symmetry_residual(rho).map(|(a, b)| a.max(b)),
        );
        report.check(
            &format!("closed-form[rho={rho}]"),
            app,
            dtype_closed_residual(rho),
        );
    }
    Ok(())
}

/// Closed-form rows `0, 1, 2, m−2, m−1, m` and columns `0, 1, m−1, m` against the matrix.
pub fn dtype_closed_residual(rho: usize) -> Result<f64> {
    let p = dtype_connection(rho)?.entries;
    let m = 2 * rho;
    let mut rows = vec![0, 1, m - 1, m];
    if m >= 4 {
        rows.extend([2, m - 2]);
    }
    let mut w: f64 = 0.0;
    for &i in &rows {
        for (j, v) in dtype_closed_row(rho, i)?.into_iter().enumerate() {
            w = w.max((p[(i, j)] - v).norm());
        }
    }
    for j in [0, 1, m - 1, m] {
        for (i, v) in dtype_closed_col(rho, j)?.into_iter().enumerate() {
            w = w.max((p[(i, j)] - v).norm());
        }
    }
    Ok(w)
}

fn quadrature(cfg: &Config, scope: Scope, report: &mut Report) -> Result<()> {
    let q = &cfg.quadrature;
    for m in scope.ms(1..=2) {
        let chart = cfg.chart(m)?;
        let sys = cfg.system_chart(m)?;
        let t = |name: &str| cfg.threshold(&format!("{name}_m{m}"));
        for z in cfg.points("connection")? {
            report.check(
                &format!("connection-numeric[m={m},pair=01,z={z}]"),
                t("connection")?,
                connection_residual_numeric(&chart, z, Pair::ZeroOne, q),
            );
        }
        for z in cfg.points("connection_inf")? {
            report.check(
                &format!("connection-numeric[m={m},pair=0inf,z={z}]"),
                t("connection")?,
                connection_residual_numeric(&chart, z, Pair::ZeroInf, q),
            );
        }
        let asym = cfg.threshold("asymptotic")?;
        for x in cfg.points("asymptotic")? {
            for (tag, dist, label) in [
                (BasisTag::I, x, "I"),
                (BasisTag::J, x, "J"),
                (BasisTag::K, 1.0 / x, "K"),
            ] {
                for j in 0..=m {
                    report.check(
                        &format!("asymptotic[m={m},{label}{j},x={dist}]"),
                        asym,
                        asymptotic_residual(j, &chart, tag, dist, q),
                    );
                }
            }
        }
        for z in cfg.points("reflection")? {
            report.check(
                &format!("reflection[m={m},z={z}]"),
                t("reflection")?,
                reflection_residual(&chart, z, Reflection::LeftRight, q),
            );
        }
        for z in cfg.points("inversion")? {
            report.check(
                &format!("reflection-inversion[m={m},z={z}]"),
                t("reflection")?,
                reflection_residual(&chart, z, Reflection::Inversion, q),
            );
        }
        for z in cfg.points("ode")? {
            report.check(
                &format!("ode[m={m},z={z}]"),
                t("ode")?,
                ode_residual(&chart, z, q),
            );
        }
        for z in cfg.points("system")? {
            report.check(
                &format!("system[m={m},z={z}]"),
                t("system")?,
                ode_system_residual(&sys, z, q),
            );
        }
    }
    Ok(())
}

fn hermitian(cfg: &Config, scope: Scope, report: &mut Report) -> Result<()> {
    let ms = scope.ms(1..=4);
    let mut r = rng(cfg.integer("seed")?.wrapping_add(1));
    let per_m = (cfg.integer("charts")? as usize / 4).max(1);
    let inv = cfg.threshold("invariance")?;
    let wt = cfg.threshold("weight_agreement")?;
    for &m in &ms {
        let charts: Vec<_> = (0..per_m)
            .map(|_| generic_chart(&mut r, m, cfg.genericity_tol, cfg.resonance_margin))
            .collect();
        let cond = worst(charts.iter().map(connection_condition));
        if let Ok(c) = cond {
            report.result(&format!("max_condition_number[m={m}]"), c);
        }
        report.check(
            &format!("invariance[m={m}]"),
            inv,
            worst(charts.iter().map(|c| {
                let form = diagonal_form(c)?;
                worst(
                    [Singularity::Zero, Singularity::One].map(|base| {
                        Ok(invariance_residual(&form, &monodromy(c, base)?)?.reported())
                    }),
                )
            })),
        );
        report.check(
            &format!("weight-agreement[m={m}]"),
            wt,
            worst(charts.iter().map(weight_agreement)),
        );
    }
    let dinv = cfg.threshold("dtype_invariance")?;
    let dexp = cfg.threshold("dtype_expansion")?;
    for rho in scope.rhos(1..=3) {
        for kind in [FormKind::DType, FormKind::DTypeEven] {
            let name = kind.name();
            let res = dtype_invariance_residual(rho, kind);
            report.check(
                &format!("subspace-leakage[{name},rho={rho}]"),
                dinv,
                res.clone().map(|x| x.0),
            );
            report.check(
                &format!("restricted-invariance[{name},rho={rho}]"),
                dinv,
                res.map(|x| x.1),
            );
            report.check(
                &format!("expansion[{name},rho={rho}]"),
                dexp,
                dtype_expansion_residual(rho, kind),
            );
        }
    }
    let imag = cfg.threshold("form_imaginary")?;
    for m in ms.into_iter().filter(|&m| m <= 2) {
        let chart = cfg.chart(m)?;
        let tol = cfg.threshold(&format!("form_m{m}"))?;
        let samples = diagonal_form(&chart)
            .and_then(|form| sample_f(&chart, &cfg.points("form")?, &form, &cfg.quadrature));
        match samples {
            Ok(samples) => {
                for s in samples {
                    report.check(
                        &format!("single-valued[m={m},z={}]", s.z),
                        tol,
                        Ok(s.relative_gap()),
                    );
                    report.check(
                        &format!("real-valued[m={m},z={}]", s.z),
                        imag,
                        Ok(s.imaginary_ratio()),
                    );
                }
            }
            Err(e) => {
                report.check(&format!("single-valued[m={m}]"), tol, Err(e));
            }
        }
    }
    Ok(())
}

/// Rejects `--m` / `--dtype-rho` values no suite can use.
pub fn validate(scope: Scope) -> Result<()> {
    if let Some(m) = scope.m {
        if !(1..=6).contains(&m) {
            return Err(Error::InvalidInput(format!("--m {m} outside 1..=6")));
        }
    }
    if scope.dtype_rho == Some(0) {
        return Err(Error::InvalidInput("--dtype-rho must be positive".into()));
    }
    Ok(())
}
