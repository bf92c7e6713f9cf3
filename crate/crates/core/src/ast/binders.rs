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

//! Free and declared names.
//!
//! Binding structure: `new s . P` binds `s` in `P`; a branch arm `l(x). P`
//! binds `x` in `P`; `def X(x~) = P in Q` binds `x~` in `P` and `X` in both
//! `P` and `Q`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Channel, Process, Term, Value};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BinderReport {
    /// fc: free channels (channel variables and `s[r]` with `s` free).
    pub free_channels: BTreeSet<Channel>,
    /// fv: free variables.
    pub free_vars: BTreeSet<String>,
    /// fpv: process variables occurring free.
    pub free_proc_vars: BTreeSet<String>,
    /// dpv: process variables declared anywhere in the term.
    pub declared_proc_vars: BTreeSet<String>,
}

enum Occ<'a> {
    Chan(&'a Channel),
    Session(&'a str),
    ProcVar(&'a str),
}

#[derive(Default)]
struct Scope<'a> {
    names: Vec<&'a str>,
    proc_vars: Vec<&'a str>,
}

impl<'a> Scope<'a> {
    fn bound(&self, n: &str) -> bool {
        self.names.contains(&n)
    }
}

fn visit_free<'a>(p: &'a Process, scope: &mut Scope<'a>, f: &mut dyn FnMut(Occ<'a>)) {
    let chan = |c: &'a Channel, scope: &Scope<'a>, f: &mut dyn FnMut(Occ<'a>)| {
        if !scope.bound(c.name()) {
            f(Occ::Chan(c));
        }
    };
    let term = |t: &'a Term, scope: &Scope<'a>, f: &mut dyn FnMut(Occ<'a>)| match t {
        Term::Chan(c) => {
            if !scope.bound(c.name()) {
                f(Occ::Chan(c));
            }
        }
        Term::Val(Value::Session(s)) => {
            if !scope.bound(s) {
                f(Occ::Session(s));
            }
        }
        Term::Val(_) => {}
    };
    match p {
        Process::Nil => {}
        Process::Par(l, r) => {
            visit_free(l, scope, f);
            visit_free(r, scope, f);
        }
        Process::Select { chan: c, branches, .. } => {
            chan(c, scope, f);
            for b in branches {
                term(&b.payload, scope, f);
                visit_free(&b.cont, scope, f);
            }
        }
        Process::Branch { chan: c, arms, .. } => {
            chan(c, scope, f);
            for a in arms {
                scope.names.push(&a.binder);
                visit_free(&a.cont, scope, f);
                scope.names.pop();
            }
        }
        Process::Restrict { session, body, .. } => {
            scope.names.push(session);
            visit_free(body, scope, f);
            scope.names.pop();
        }
        Process::Def { name, params, body, scope: sc } => {
            scope.proc_vars.push(name);
            let depth = scope.names.len();
            scope.names.extend(params.iter().map(String::as_str));
            visit_free(body, scope, f);
            scope.names.truncate(depth);
            visit_free(sc, scope, f);
            scope.proc_vars.pop();
        }
        Process::Call { name, args } => {
            if !scope.proc_vars.iter().any(|b| b == name) {
                f(Occ::ProcVar(name));
            }
            for a in args {
                term(a, scope, f);
            }
        }
    }
}

impl Process {
    pub fn binder_report(&self) -> BinderReport {
        let mut report = BinderReport::default();
        visit_free(self, &mut Scope::default(), &mut |occ| match occ {
            Occ::Chan(c) => {
                if let Channel::Var(x) = c {
                    report.free_vars.insert(x.clone());
                }
                report.free_channels.insert(c.clone());
            }
            Occ::Session(_) => {}
            Occ::ProcVar(x) => {
                report.free_proc_vars.insert(x.to_string());
            }
        });
        report.declared_proc_vars = self.declared_proc_vars();
        report
    }

    /// Every free name occurrence: channel variables, session names of free
    /// `s[r]` channels and session-name values.
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        visit_free(self, &mut Scope::default(), &mut |occ| match occ {
            Occ::Chan(c) => {
                out.insert(c.name().to_string());
            }
            Occ::Session(s) => {
                out.insert(s.to_string());
            }
            Occ::ProcVar(_) => {}
        });
        out
    }

    pub fn free_channels(&self) -> BTreeSet<Channel> {
        let mut out = BTreeSet::new();
        visit_free(self, &mut Scope::default(), &mut |occ| {
            if let Occ::Chan(c) = occ {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn free_proc_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        visit_free(self, &mut Scope::default(), &mut |occ| {
            if let Occ::ProcVar(x) = occ {
                out.insert(x.to_string());
            }
        });
        out
    }

    pub fn declared_proc_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |p| {
            if let Process::Def { name, .. } = p {
                out.insert(name.clone());
            }
        });
        out
    }

    /// All names appearing anywhere in the term, bound or free, including
    /// process variables. Used to pick fresh names.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let term = |t: &Term, out: &mut BTreeSet<String>| match t {
            Term::Chan(c) => {
                out.insert(c.name().to_string());
            }
            Term::Val(Value::Session(s)) => {
                out.insert(s.clone());
            }
            Term::Val(_) => {}
        };
        self.walk(&mut |p| match p {
            Process::Select { chan, branches, .. } => {
                out.insert(chan.name().to_string());
                for b in branches {
                    term(&b.payload, &mut out);
                }
            }
            Process::Branch { chan, arms, .. } => {
                out.insert(chan.name().to_string());
                out.extend(arms.iter().map(|a| a.binder.clone()));
            }
            Process::Restrict { session, .. } => {
                out.insert(session.clone());
            }
            Process::Def { name, params, .. } => {
                out.insert(name.clone());
                out.extend(params.iter().cloned());
            }
            Process::Call { name, args } => {
                out.insert(name.clone());
                for a in args {
                    term(a, &mut out);
                }
            }
            Process::Nil | Process::Par(..) => {}
        });
        out
    }
}

/// A name derived from `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = stem.strip_suffix('_').unwrap_or(stem);
    let stem = if stem.is_empty() { "n" } else { stem };
    (1..)
        .map(|k| format!("{stem}_{k}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded supply")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    #[test]
    fn nil_has_empty_report() {
        assert_eq!(Process::Nil.binder_report(), BinderReport::default());
    }

    #[test]
    fn branch_binder_is_not_free() {
        let p = parse_process("s[rA][rB]&{ l(x). 0 }").unwrap();
        let r = p.binder_report();
        assert_eq!(r.free_channels, BTreeSet::from([Channel::role("s", "rA")]));
        assert!(r.free_vars.is_empty());
    }

    #[test]
    fn definitions_declare_and_bind() {
        let p = parse_process("def X(y) = y[rB](+){ 1: l(\"v\"). X(y) } in X(s[rA])").unwrap();
        let r = p.binder_report();
        assert!(r.declared_proc_vars.contains("X"));
        assert!(r.free_proc_vars.is_empty());
        assert_eq!(r.free_channels, BTreeSet::from([Channel::role("s", "rA")]));
        assert!(r.free_vars.is_empty());
    }

    #[test]
    fn restriction_binds_session() {
        let p = parse_process("new s . s[rA][rB]&{ l(x). 0 } | t[rB][rA]&{ l(x). 0 }").unwrap();
        assert_eq!(p.free_channels(), BTreeSet::from([Channel::role("t", "rB")]));
        assert_eq!(p.free_names(), BTreeSet::from(["t".to_string()]));
    }

    #[test]
    fn free_call_is_free_proc_var() {
        let p = parse_process("Y(3) | def X() = 0 in X()").unwrap();
        assert_eq!(p.free_proc_vars(), BTreeSet::from(["Y".to_string()]));
    }

    #[test]
    fn fresh_names_avoid() {
        let avoid = BTreeSet::from(["x".to_string(), "x_1".to_string()]);
        assert_eq!(fresh_name("x", &avoid), "x_2");
        assert_eq!(fresh_name("y", &avoid), "y");
    }
}
