//! JSON report written by `ellq-verify`.
//!
//! Everything except `timing` and the per-check `ms` fields is a function of the
//! parameters and the seed.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::numerics::Params;
use crate::suites::{CheckRecord, SuiteReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub total_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<'a> {
    pub schema_version: u32,
    pub suite: &'a str,
    pub params: &'a Params,
    pub n_override: Option<usize>,
    pub checks: &'a [CheckRecord],
    pub pass: bool,
    pub timing: Timing,
}

/// Milliseconds since the Unix epoch.
pub fn now_unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

impl<'a> Report<'a> {
    pub fn new(r: &'a SuiteReport, timing: Timing) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            suite: &r.suite,
            params: &r.params,
            n_override: r.n_override,
            checks: &r.checks,
            pass: r.pass,
            timing,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report types serialize infallibly")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let rec = CheckRecord {
            id: "a.b".into(),
            anchor: "x".into(),
            residual: None,
            tol: 1e-8,
            pass: false,
            ms: 3,
            error: Some("e".into()),
        };
        let sr = SuiteReport {
            suite: "theta".into(),
            params: Params::default(),
            n_override: None,
            checks: vec![rec],
            pass: false,
        };
        let v: serde_json::Value = serde_json::from_str(
            &Report::new(
                &sr,
                Timing {
                    started_unix_ms: 1,
                    total_ms: 2,
                },
            )
            .to_json(),
        )
        .unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["suite"], "theta");
        assert_eq!(v["params"]["p"], 0.31);
        assert!(v["checks"][0]["residual"].is_null());
        for key in ["id", "anchor", "residual", "tol", "pass", "ms"] {
            assert!(v["checks"][0].get(key).is_some(), "{key}");
        }
        assert_eq!(v["pass"], false);
        assert_eq!(v["timing"]["total_ms"], 2);
    }
}
