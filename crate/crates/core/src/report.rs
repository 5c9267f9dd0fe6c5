//! Machine-readable run reports emitted by the CLI.
//!
//! Reports serialize to JSON with floats rendered at 17 significant digits,
//! so reruns with identical parameters are byte-identical.

use serde::Serialize;
use serde_json::{Map, Value};

/// One CLI invocation's structured output.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub results: Value,
    pub wall_time_ms: u64,
    pub versions: Versions,
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub tool: String,
    /// Hash of the coefficient set in use (or of the default order).
    pub coefficients: String,
}

/// An f64 as a JSON number literal with 17 significant digits.
pub fn float_value(x: f64) -> Value {
    debug_assert!(x.is_finite(), "reports only carry finite values");
    let literal = format!("{x:.16e}");
    Value::Number(literal.parse().expect("fixed-format float literal parses"))
}

/// Convenience for building the parameters map.
pub fn param(map: &mut Map<String, Value>, key: &str, value: impl Into<Value>) {
    map.insert(key.to_string(), value.into());
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: Map::new(),
            results: Value::Null,
            wall_time_ms: 0,
            versions: Versions {
                tool: env!("CARGO_PKG_VERSION").to_string(),
                coefficients: String::new(),
            },
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
