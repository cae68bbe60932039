use std::time::Instant;

use banlat::{Error, ErrorClass};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Value,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: String,
    pub verdict: Verdict,
    pub witnesses: Value,
    pub elapsed_ms: u64,
}

/// What a command hands back before timing and digests are attached.
pub struct Outcome {
    pub verdict: Verdict,
    pub witnesses: Value,
}

impl Outcome {
    pub fn pass(witnesses: Value) -> Self {
        Outcome {
            verdict: Verdict::Pass,
            witnesses,
        }
    }

    pub fn fail(witnesses: Value) -> Self {
        Outcome {
            verdict: Verdict::Fail,
            witnesses,
        }
    }

    pub fn value(witnesses: Value) -> Self {
        Outcome {
            verdict: Verdict::Value,
            witnesses,
        }
    }

    pub fn check(ok: bool, witnesses: Value) -> Self {
        if ok {
            Self::pass(witnesses)
        } else {
            Self::fail(witnesses)
        }
    }
}

/// SHA-256 over the argument vector and the input text, NUL-separated.
pub fn digest(args: &[String], input: &str) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    h.update(input.as_bytes());
    hex::encode(h.finalize())
}

pub fn finish(
    command: &str,
    inputs: String,
    started: Instant,
    result: Result<Outcome, Error>,
) -> (RunReport, i32) {
    let (verdict, witnesses, code) = match result {
        Ok(o) => (o.verdict, o.witnesses, 0),
        Err(e) => {
            let (class, code) = match e.class() {
                ErrorClass::Malformed => ("malformed", 1),
                ErrorClass::Precondition => ("precondition", 2),
                ErrorClass::Invariant => ("invariant", 3),
            };
            (
                Verdict::Error,
                json!({ "class": class, "error": e.to_string() }),
                code,
            )
        }
    };
    let report = RunReport {
        command: command.to_string(),
        inputs,
        verdict,
        witnesses,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    (report, code)
}

pub fn render_text(r: &RunReport) -> String {
    let verdict = serde_json::to_value(r.verdict)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    let mut out = format!("{}: {}\ninputs: {}\n", r.command, verdict, r.inputs);
    match &r.witnesses {
        Value::Object(map) => {
            for (k, v) in map {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        other => out.push_str(&format!("  {other}\n")),
    }
    out.push_str(&format!("elapsed: {} ms\n", r.elapsed_ms));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_separates_arguments() {
        let a = digest(&["ab".into(), "c".into()], "");
        let b = digest(&["a".into(), "bc".into()], "");
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let t = Instant::now();
        assert_eq!(
            finish("x", String::new(), t, Err(Error::Malformed("m".into()))).1,
            1
        );
        assert_eq!(finish("x", String::new(), t, Err(Error::NoLift)).1, 2);
        assert_eq!(
            finish(
                "x",
                String::new(),
                t,
                Err(Error::StageOverflow {
                    needed: 3,
                    depth: 1
                })
            )
            .1,
            2
        );
        assert_eq!(
            finish("x", String::new(), t, Err(Error::LemmaViolated("l".into()))).1,
            3
        );
        let (r, code) = finish("x", String::new(), t, Ok(Outcome::fail(json!({}))));
        assert_eq!((r.verdict, code), (Verdict::Fail, 0));
    }

    #[test]
    fn report_round_trips() {
        let (r, _) = finish(
            "ring regular",
            "d".into(),
            Instant::now(),
            Ok(Outcome::pass(json!({"k": [1, 2]}))),
        );
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), r);
        assert!(render_text(&r).starts_with("ring regular: pass"));
    }
}
