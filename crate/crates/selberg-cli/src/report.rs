//! Machine-readable command reports and the exit-code policy.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DMatrix;
use selberg_core::{Error, C64};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    VerificationFailed,
    NumericalFailure,
    InputRejected,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::VerificationFailed => 1,
            Outcome::InputRejected => 2,
            Outcome::NumericalFailure => 3,
        }
    }

    fn of_error(e: &Error) -> Self {
        if e.is_input_rejection() {
            Outcome::InputRejected
        } else {
            Outcome::NumericalFailure
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub name: String,
    /// `null` when the residual could not be computed.
    pub value: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub residuals: Vec<Residual>,
    pub errors: Vec<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(skip)]
    matrices: Vec<(String, DMatrix<C64>)>,
}

/// `[[re, im], …]` rows, row-major.
pub fn matrix_json(m: &DMatrix<C64>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            Value::Array(
                (0..m.ncols())
                    .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            residuals: Vec::new(),
            errors: Vec::new(),
            outcome: Outcome::Pass,
            timing_ms: None,
            matrices: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.to_string(), json!(v));
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.to_string(), json!(v));
    }

    pub fn matrix(&mut self, key: &str, m: &DMatrix<C64>) {
        self.results.insert(key.to_string(), matrix_json(m));
        self.matrices.push((key.to_string(), m.clone()));
    }

    fn escalate(&mut self, o: Outcome) {
        self.outcome = self.outcome.max(o);
    }

    /// Records an error that stopped part of the command.
    pub fn error(&mut self, context: &str, e: &Error) {
        self.errors.push(format!("{context}: {e}"));
        self.escalate(Outcome::of_error(e));
    }

    /// Records one residual against its threshold; a failed computation counts as a failed verdict.
    pub fn check(&mut self, name: &str, threshold: f64, value: selberg_core::Result<f64>) -> bool {
        let (value, error, pass) = match value {
            Ok(v) => (Some(v), None, v.is_finite() && v < threshold),
            Err(e) => {
                self.escalate(Outcome::of_error(&e));
                (None, Some(e.to_string()), false)
            }
        };
        if !pass {
            self.escalate(Outcome::VerificationFailed);
        }
        self.residuals.push(Residual {
            name: name.to_string(),
            value,
            threshold,
            pass,
            error,
        });
        pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Matrices in long form: `name,row,col,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["name", "row", "col", "re", "im"])?;
        for (name, m) in &self.matrices {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let z = m[(i, j)];
                    w.write_record([
                        name.clone(),
                        i.to_string(),
                        j.to_string(),
                        z.re.to_string(),
                        z.im.to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_escalates_to_worst() {
        let mut r = Report::new("t");
        assert!(r.check("ok", 1.0, Ok(0.5)));
        assert_eq!(r.outcome, Outcome::Pass);
        assert!(!r.check("bad", 1.0, Ok(2.0)));
        assert_eq!(r.outcome.exit_code(), 1);
        r.check(
            "diverged",
            1.0,
            Err(Error::Unconverged {
                value: 1.0,
                change: 0.1,
                tol: 1e-10,
            }),
        );
        assert_eq!(r.outcome.exit_code(), 3);
        r.error("input", &Error::InvalidInput("x".into()));
        assert_eq!(r.outcome.exit_code(), 2);
    }

    #[test]
    fn nan_residual_fails() {
        let mut r = Report::new("t");
        assert!(!r.check("nan", 1.0, Ok(f64::NAN)));
    }

    #[test]
    fn matrices_are_row_major_pairs() {
        let m = DMatrix::from_row_slice(1, 2, &[C64::new(1.0, 2.0), C64::new(3.0, 4.0)]);
        assert_eq!(matrix_json(&m), json!([[[1.0, 2.0], [3.0, 4.0]]]));
        let mut r = Report::new("t");
        r.matrix("p", &m);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "name,row,col,re,im\np,0,0,1,2\np,0,1,3,4\n");
    }
}
