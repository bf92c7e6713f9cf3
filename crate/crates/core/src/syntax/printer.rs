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

use alloc::string::String;
use core::fmt::Write;

use crate::ast::{Annotation, Channel, Process, Term, Value};
use crate::prob::Prob;
use crate::typesys::{GlobalType, Interval, Local, LocalType};

/// `n` for integers, `n/d` otherwise.
pub fn prob_text(p: &Prob) -> String {
    if *p.denom() == 1u32.into() {
        alloc::format!("{}", p.numer())
    } else {
        alloc::format!("{}/{}", p.numer(), p.denom())
    }
}

pub fn interval_text(d: &Interval) -> String {
    if d.lower() == d.upper() {
        prob_text(d.lower())
    } else {
        alloc::format!("[{},{}]", prob_text(d.lower()), prob_text(d.upper()))
    }
}

fn channel(out: &mut String, c: &Channel) {
    match c {
        Channel::Var(x) => out.push_str(x),
        Channel::Role { session, role } => {
            let _ = write!(out, "{session}[{role}]");
        }
    }
}

fn string_literal(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(&mut out, t);
    out
}

fn term(out: &mut String, t: &Term) {
    match t {
        Term::Chan(c) => channel(out, c),
        Term::Val(Value::Session(s)) => out.push_str(s),
        Term::Val(Value::Bool(b)) => out.push_str(if *b { "true" } else { "false" }),
        Term::Val(Value::Int(n)) => {
            let _ = write!(out, "{n}");
        }
        Term::Val(Value::Str(s)) => string_literal(out, s),
    }
}

/// Single-line rendering that re-parses to a structurally equal process.
pub fn print_process(p: &Process) -> String {
    let mut out = String::new();
    process(&mut out, p, false);
    out
}

fn process(out: &mut String, p: &Process, atom: bool) {
    match p {
        Process::Nil => out.push('0'),
        Process::Par(l, r) => {
            if atom {
                out.push('(');
            }
            process(out, l, matches!(**l, Process::Par(..)));
            out.push_str(" | ");
            process(out, r, false);
            if atom {
                out.push(')');
            }
        }
        Process::Select { chan, partner, branches } => {
            channel(out, chan);
            let _ = write!(out, "[{partner}](+){{ ");
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: {}(", prob_text(&b.prob), b.label);
                term(out, &b.payload);
                out.push_str("). ");
                process(out, &b.cont, false);
            }
            out.push_str(" }");
        }
        Process::Branch { chan, partner, arms } => {
            channel(out, chan);
            let _ = write!(out, "[{partner}]&{{ ");
            for (i, a) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}({}). ", a.label, a.binder);
                process(out, &a.cont, false);
            }
            out.push_str(" }");
        }
        Process::Restrict { session, annotation, body } => {
            let _ = write!(out, "new {session}");
            match annotation {
                Some(Annotation::Global(g)) => {
                    let _ = write!(out, " : < {} >", print_global(g));
                }
                Some(Annotation::Path(path)) => {
                    out.push_str(" : ");
                    string_literal(out, path);
                }
                None => {}
            }
            out.push_str(" . ");
            process(out, body, true);
        }
        Process::Def { name, params, body, scope } => {
            let _ = write!(out, "def {name}({}) = ", params.join(", "));
            process(out, body, false);
            out.push_str(" in ");
            process(out, scope, true);
        }
        Process::Call { name, args } => {
            let _ = write!(out, "{name}(");
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                term(out, a);
            }
            out.push(')');
        }
    }
}

pub fn print_global(g: &GlobalType) -> String {
    let mut out = String::new();
    global(&mut out, g);
    out
}

fn global(out: &mut String, g: &GlobalType) {
    match g {
        GlobalType::End => out.push_str("end"),
        GlobalType::Var(t) => out.push_str(t),
        GlobalType::Rec { var, body } => {
            let _ = write!(out, "rec {var} . ");
            global(out, body);
        }
        GlobalType::Interaction { from, to, branches } => {
            let _ = write!(out, "{from} -> {to} {{ ");
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}: {}({}). ", interval_text(&b.delta), b.label, b.sort);
                global(out, &b.cont);
            }
            out.push_str(" }");
        }
    }
}

pub fn print_local(t: &LocalType) -> String {
    let mut out = String::new();
    local(&mut out, t, &mut |out, d| out.push_str(&interval_text(d)));
    out
}

/// Renders an erased local type; selection arms carry no interval.
pub fn print_erased(t: &Local<()>) -> String {
    let mut out = String::new();
    local(&mut out, t, &mut |_, _| {});
    out
}

fn local<A>(out: &mut String, t: &Local<A>, annot: &mut dyn FnMut(&mut String, &A)) {
    match t {
        Local::End => out.push_str("end"),
        Local::Var(v) => out.push_str(v),
        Local::Rec { var, body } => {
            let _ = write!(out, "rec {var} . ");
            local(out, body, annot);
        }
        Local::Select { partner, arms } => {
            let _ = write!(out, "{partner} (+) {{ ");
            for (i, a) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let before = out.len();
                annot(out, &a.annot);
                if out.len() > before {
                    out.push_str(": ");
                }
                let _ = write!(out, "!{}({}). ", a.label, a.sort);
                local(out, &a.cont, annot);
            }
            out.push_str(" }");
        }
        Local::Branch { partner, arms } => {
            let _ = write!(out, "{partner} & {{ ");
            for (i, a) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "?{}({}). ", a.label, a.sort);
                local(out, &a.cont, annot);
            }
            out.push_str(" }");
        }
    }
}
