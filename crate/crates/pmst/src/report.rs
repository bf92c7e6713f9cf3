// Copyright 2026 The pmst Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! JSON encodings shared by the report commands. Rationals are `"num/den"`
//! strings; see `docs/report-schema.json`.

use pmst_core::checker::{TypeError, Typing};
use pmst_core::dynamics::TransitionLabel;
use pmst_core::prob::{rational_to_f64, render, Rational};
use pmst_core::syntax::print_local;
use pmst_core::{Interval, Prob};
use serde_json::{json, Map, Value};

pub fn rational(r: &Rational) -> Value {
    Value::String(render(r))
}

pub fn prob(p: &Prob) -> Value {
    rational(p.as_rational())
}

pub fn interval(d: &Interval) -> Value {
    json!([prob(d.lower()), prob(d.upper())])
}

pub fn label(l: &TransitionLabel) -> Value {
    match l {
        TransitionLabel::Comm { from, to, label } => json!({ "kind": "comm", "from": from, "to": to, "label": label }),
        TransitionLabel::Eps => json!({ "kind": "eps" }),
    }
}

pub fn typing(d: &Typing) -> Value {
    Value::Object(d.iter().map(|(c, t)| (c.to_string(), Value::String(print_local(t)))).collect::<Map<_, _>>())
}

pub fn type_error(e: &TypeError) -> Value {
    json!({ "kind": e.kind.name(), "message": e.kind.to_string(), "rules": e.rules })
}

/// `num/den (≈decimal)` for text reports.
pub fn approx(r: &Rational) -> String {
    format!("{} (~{:.4})", render(r), rational_to_f64(r))
}
