//! Canonical JSON output: keys sorted, rationals as `"p/q"`, reals rounded
//! to 12 significant digits, and every report stamped with the tool
//! version and schema number.

use std::fmt::{Debug, Display};

use serde_json::{json, Map, Value};
use stochgamma_core::linalg::CMatrix;
use stochgamma_core::rational::{self, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA: u32 = 1;

/// Non-finite values become the strings `"inf"`, `"-inf"` and `"nan"`.
pub fn real(x: f64) -> Value {
    if x.is_nan() {
        return Value::from("nan");
    }
    if x.is_infinite() {
        return Value::from(if x > 0.0 { "inf" } else { "-inf" });
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // Avoid a distinct "-0.0" rendering.
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    Value::from(rounded)
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real(x)).collect())
}

pub fn rat(r: &Rational) -> Value {
    Value::from(rational::format_rational(r))
}

pub fn rats(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rat).collect())
}

pub fn rat_matrix(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| rats(r)).collect())
}

pub fn cmatrix(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!({"re": real(m[(i, j)].re), "im": real(m[(i, j)].im)})).collect()))
            .collect(),
    )
}

/// The variant name of an error, read off its `Debug` form.
pub fn variant_name(e: &impl Debug) -> String {
    let d = format!("{e:?}");
    d.split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

/// A domain error from one of the core modules.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub module: &'static str,
    pub name: String,
    pub message: String,
    pub detail: Value,
    pub usage: bool,
}

impl Failure {
    pub fn domain<E: Debug + Display>(module: &'static str, e: E) -> Self {
        Self { module, name: variant_name(&e), message: e.to_string(), detail: Value::from(format!("{e:?}")), usage: false }
    }

    pub fn usage(name: &str, message: impl Into<String>, detail: Value) -> Self {
        Self { module: "input", name: name.to_string(), message: message.into(), detail, usage: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.usage {
            2
        } else {
            1
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "module": self.module,
            "name": self.name,
            "message": self.message,
            "detail": self.detail,
        })
    }
}

pub fn envelope(command: &str, body: Result<&Value, &Failure>) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::from(command));
    m.insert("version".into(), Value::from(VERSION));
    m.insert("schema".into(), Value::from(SCHEMA));
    match body {
        Ok(v) => m.insert("result".into(), v.clone()),
        Err(f) => m.insert("error".into(), f.to_value()),
    };
    Value::Object(m)
}

/// Pretty-printed with a trailing newline. Key order is the sorted order of
/// `serde_json::Map`.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
