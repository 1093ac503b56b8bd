//! The `connect`, `verify` and `racah` commands, each producing a [`Report`].

use std::str::FromStr;

use clap::{Args, ValueEnum};
use selberg_core::config::Config;
use selberg_core::connection::{
    connect_01, connect_0inf, max_entry_diff, ConnectionMatrix, Genericity, Variant,
};
use selberg_core::qkernel::{dtype_chart, e_half, genericity_check, ExponentChart};
use selberg_core::qseries::{
    qracah_dual, qracah_duality_condition, qracah_norm, qracah_orthogonality_condition,
    qracah_orthogonality_residual, qracah_w, qracah_weight, QRacahSpec,
};
use selberg_core::{Error, Result, C64};

use crate::report::{complex_json, Report};
use crate::suites::{self, Scope, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairArg {
    /// `I_i = Σ p_ij J_j` on `0 < z < 1`.
    #[value(name = "01")]
    ZeroOne,
    /// `I_i = Σ p_ij K_j` on `z < 0`.
    #[value(name = "0inf")]
    ZeroInf,
}

#[derive(Debug, Clone, Args)]
pub struct ConnectArgs {
    #[arg(long, required_unless_present = "dtype_rho")]
    pub m: Option<usize>,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "dtype_rho"
    )]
    pub a: Option<f64>,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "dtype_rho"
    )]
    pub b: Option<f64>,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "dtype_rho"
    )]
    pub c: Option<f64>,
    #[arg(
        long,
        allow_hyphen_values = true,
        required_unless_present = "dtype_rho"
    )]
    pub g: Option<f64>,
    /// Use the chart `m = 2ρ, a = b = c = −ρ/(2ρ+1), g = 1/(2ρ+1)`.
    #[arg(long, conflicts_with_all = ["m", "a", "b", "c", "g"])]
    pub dtype_rho: Option<usize>,
    #[arg(long, value_enum, default_value = "01")]
    pub pair: PairArg,
    /// One of sum-a, sum-b, well-poised-8phi7, balanced-4phi3, balanced-4phi3-sears, q-racah.
    #[arg(long, default_value = "sum-a")]
    pub variant: String,
    /// Evaluate even when the chart fails the genericity test.
    #[arg(long)]
    pub allow_degenerate: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Restrict the m-indexed checks to this m.
    #[arg(long)]
    pub m: Option<usize>,
    /// Restrict the D-type checks to this ρ.
    #[arg(long)]
    pub dtype_rho: Option<usize>,
}

/// A complex literal: `x`, `x,y` (real, imaginary) or `e:t` for `exp(πi·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub C64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        };
        if let Some(t) = s.strip_prefix("e:") {
            return Ok(ComplexArg(e_half(C64::new(num(t)?, 0.0))));
        }
        match s.split_once(',') {
            Some((re, im)) => Ok(ComplexArg(C64::new(num(re)?, num(im)?))),
            None => Ok(ComplexArg(C64::new(num(s)?, 0.0))),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RacahArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub x: usize,
    /// `x`, `x,y` or `e:t` (unit circle).
    #[arg(long, allow_hyphen_values = true)]
    pub a: ComplexArg,
    #[arg(long, allow_hyphen_values = true)]
    pub b: ComplexArg,
    #[arg(long, allow_hyphen_values = true)]
    pub c: ComplexArg,
    /// Degree bound `N`.
    #[arg(long = "big-n")]
    pub big_n: usize,
    /// `q = exp(πi·g)`.
    #[arg(long, allow_hyphen_values = true)]
    pub g: f64,
    /// Add the orthogonality and duality residuals.
    #[arg(long)]
    pub check: bool,
}

fn connection_for(chart: &ExponentChart, pair: PairArg, v: Variant) -> Result<ConnectionMatrix> {
    match pair {
        PairArg::ZeroOne => connect_01(chart, v, Genericity::Allow),
        PairArg::ZeroInf => connect_0inf(chart, v, Genericity::Allow),
    }
}

pub fn connect(args: &ConnectArgs, cfg: &Config) -> Report {
    let mut report = Report::new("connect");
    let pair = match args.pair {
        PairArg::ZeroOne => "01",
        PairArg::ZeroInf => "0inf",
    };
    report.input("pair", pair);
    report.input("variant", &args.variant);
    report.input("allow_degenerate", args.allow_degenerate);
    if let Err(e) = connect_into(args, cfg, &mut report) {
        report.error("connect", &e);
    }
    report
}

fn connect_into(args: &ConnectArgs, cfg: &Config, report: &mut Report) -> Result<()> {
    let variant = Variant::parse(&args.variant).ok_or_else(|| {
        let names: Vec<_> = Variant::ALL.iter().map(|v| v.name()).collect();
        Error::InvalidInput(format!(
            "unknown variant '{}'; expected one of {}",
            args.variant,
            names.join(", ")
        ))
    })?;
    let (chart, degenerate_ok) = match args.dtype_rho {
        Some(rho) => {
            report.input("dtype_rho", rho);
            (dtype_chart(rho)?, true)
        }
        None => {
            let (m, a, b, c, g) = (
                args.m.unwrap_or_default(),
                args.a.unwrap_or_default(),
                args.b.unwrap_or_default(),
                args.c.unwrap_or_default(),
                args.g.unwrap_or_default(),
            );
            for (k, v) in [("a", a), ("b", b), ("c", c), ("g", g)] {
                report.input(k, v);
            }
            report.input("m", m);
            (ExponentChart::real(m, a, b, c, g)?, args.allow_degenerate)
        }
    };
    let violations = genericity_check(&chart, cfg.genericity_tol);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        if !degenerate_ok {
            return Err(Error::NonGeneric(format!(
                "{} (pass --allow-degenerate to evaluate anyway)",
                text.join("; ")
            )));
        }
        report.result("genericity_violations", text);
    }
    let primary = connection_for(&chart, args.pair, variant)?;
    report.matrix("matrix", &primary.entries);

    let mut spread: f64 = 0.0;
    let mut compared = Vec::new();
    for v in Variant::ALL {
        if v == variant {
            continue;
        }
        match connection_for(&chart, args.pair, v) {
            Ok(other) => {
                spread = spread.max(max_entry_diff(&primary.entries, &other.entries));
                compared.push(v.name());
            }
            // degenerate charts may put a removable zero in one formula's denominators
            Err(e) if degenerate_ok => {
                report.result(&format!("variant_unavailable.{}", v.name()), e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    report.result("variants_compared", compared);
    report.check(
        "cross-variant-max-deviation",
        cfg.threshold("variant_agreement")?,
        Ok(spread),
    );
    Ok(())
}

pub fn verify(args: &VerifyArgs, cfg: &Config) -> Report {
    let mut report = Report::new("verify");
    report.input("suite", format!("{:?}", args.suite).to_lowercase());
    report.input("m", args.m);
    report.input("dtype_rho", args.dtype_rho);
    for (k, v) in cfg.entries() {
        report.input(&format!("config.{k}"), v);
    }
    let scope = Scope {
        m: args.m,
        dtype_rho: args.dtype_rho,
    };
    if let Err(e) =
        suites::validate(scope).and_then(|_| suites::run(args.suite, cfg, scope, &mut report))
    {
        report.error("verify", &e);
    }
    report
}

pub fn racah(args: &RacahArgs, cfg: &Config) -> Report {
    let mut report = Report::new("racah");
    let spec = QRacahSpec {
        a: args.a.0,
        b: args.b.0,
        c: args.c.0,
        n_max: args.big_n,
        q: e_half(C64::new(args.g, 0.0)),
    };
    report.input("n", args.n);
    report.input("x", args.x);
    report.input("N", args.big_n);
    report.input("g", args.g);
    report.input("a", complex_json(spec.a));
    report.input("b", complex_json(spec.b));
    report.input("c", complex_json(spec.c));
    let run = |report: &mut Report| -> Result<()> {
        let w = qracah_w(args.n, args.x, &spec)?;
        report.result("W", complex_json(w));
        report.result("weight", complex_json(qracah_weight(args.x, &spec)?));
        report.result("norm", complex_json(qracah_norm(args.n, &spec)?));
        if args.check {
            let tol = cfg.threshold("racah_orthogonality")?;
            report.check("orthogonality", tol, qracah_orthogonality_residual(&spec));
            let dual = qracah_w(args.x, args.n, &qracah_dual(&spec)).map(|d| (d - w).norm());
            report.check("duality", tol, dual);
            report.result(
                "orthogonality_condition",
                qracah_orthogonality_condition(&spec)?,
            );
            report.result("duality_condition", qracah_duality_condition(&spec)?);
        }
        Ok(())
    };
    if let Err(e) = run(&mut report) {
        report.error("racah", &e);
    }
    report
}
