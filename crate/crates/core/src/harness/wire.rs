//! Wire format for providers living outside the process.
//!
//! A request is one JSON object per call:
//!
//! ```text
//! {"op":"add","args":[{"kind":"interval","text":"[0x1p+0, 0x1p+1]"}, ...]}
//! ```
//!
//! and the reply lists result values and raised signals:
//!
//! ```text
//! {"values":[{"kind":"interval","text":"[0x1p+0, 0x1.8p+1]"}],"signals":[]}
//! ```
//!
//! Intervals travel as canonical hexadecimal literals and numbers as
//! hexadecimal strings (`nan`, `infinity` and `-infinity` included), so
//! every value crosses the boundary exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decorations::{DecoratedInterval, Decoration};
use crate::fpkernel::{f64_to_hex, Dir};
use crate::interval::{interval_to_text, parse_number, text_to_interval, Signal};
use crate::ops::Op;

use super::provider::{Outcome, Reference, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WireValue {
    Interval { text: String },
    Decorated { text: String, dec: String },
    Number { hex: String },
    Boolean { value: bool },
    Text { value: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub op: String,
    pub args: Vec<WireValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reply {
    pub values: Vec<WireValue>,
    pub signals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("malformed message: {0}")]
    Json(String),
    #[error("bad value: {0}")]
    Value(String),
}

fn to_wire(v: &Value) -> WireValue {
    match v {
        Value::Interval(x) => WireValue::Interval { text: interval_to_text(x) },
        Value::Decorated(d) => WireValue::Decorated { text: interval_to_text(&d.interval()), dec: d.dec().name().into() },
        Value::Number(x) => WireValue::Number { hex: f64_to_hex(*x) },
        Value::Boolean(b) => WireValue::Boolean { value: *b },
        Value::Text(s) => WireValue::Text { value: s.clone() },
    }
}

fn from_wire(w: &WireValue) -> Result<Value, WireError> {
    let bad = |s: &str| WireError::Value(s.to_string());
    Ok(match w {
        WireValue::Interval { text } => Value::Interval(text_to_interval(text).map_err(|_| bad(text))?),
        WireValue::Decorated { text, dec } => {
            let x = text_to_interval(text).map_err(|_| bad(text))?;
            let d = Decoration::from_name(dec).ok_or_else(|| bad(dec))?;
            Value::Decorated(DecoratedInterval::new(x, d).map_err(|_| bad(text))?)
        }
        WireValue::Number { hex } => {
            Value::Number(if hex == "nan" { f64::NAN } else { parse_number(hex, Dir::Down).map_err(|_| bad(hex))? })
        }
        WireValue::Boolean { value } => Value::Boolean(*value),
        WireValue::Text { value } => Value::Text(value.clone()),
    })
}

pub fn encode_request(op: Op, args: &[Value]) -> String {
    let r = Request { op: op.name().into(), args: args.iter().map(to_wire).collect() };
    serde_json::to_string(&r).expect("serializable")
}

pub fn decode_request(text: &str) -> Result<(Op, Vec<Value>), WireError> {
    let r: Request = serde_json::from_str(text).map_err(|e| WireError::Json(e.to_string()))?;
    let op = Op::from_name(&r.op).ok_or_else(|| WireError::Value(r.op.clone()))?;
    Ok((op, r.args.iter().map(from_wire).collect::<Result<_, _>>()?))
}

pub fn encode_reply(o: &Outcome) -> String {
    let r = Reply { values: o.values.iter().map(to_wire).collect(), signals: o.signals.iter().map(|s| s.name().into()).collect() };
    serde_json::to_string(&r).expect("serializable")
}

pub fn decode_reply(text: &str) -> Result<Outcome, WireError> {
    let r: Reply = serde_json::from_str(text).map_err(|e| WireError::Json(e.to_string()))?;
    let values = r.values.iter().map(from_wire).collect::<Result<_, _>>()?;
    let signals = r.signals.iter().map(|s| Signal::from_name(s).ok_or_else(|| WireError::Value(s.clone()))).collect::<Result<_, _>>()?;
    Ok(Outcome { values, signals })
}

/// An endpoint answering requests with the reference engine.
pub fn reference_endpoint(request: &str) -> String {
    match decode_request(request) {
        Ok((op, args)) => encode_reply(&Reference::evaluate_op(op, &args)),
        Err(e) => encode_reply(&Outcome { values: vec![Value::Text(e.to_string())], signals: Vec::new() }),
    }
}
