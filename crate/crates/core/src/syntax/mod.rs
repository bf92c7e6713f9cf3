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

//! Concrete syntax: lexer, parser and printer for processes, global types
//! and local types.
//!
//! In payload and argument positions a bare identifier denotes the
//! innermost binder of that name: a branch or parameter variable, or a
//! restricted session name. Unbound identifiers are string values.

mod lexer;
mod parser;
mod printer;

use alloc::string::String;

use crate::ast::Process;
use crate::typesys::{GlobalType, LocalType};
use parser::Parser;

pub use printer::{interval_text, print_erased, print_global, print_local, print_process, print_term, prob_text};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: duplicate label `{label}`")]
    DuplicateLabel { label: String, line: usize, col: usize },
    #[error("{line}:{col}: empty choice")]
    EmptyChoice { line: usize, col: usize },
    #[error("{line}:{col}: unbound type variable `{var}`")]
    UnboundTypeVar { var: String, line: usize, col: usize },
    #[error("{line}:{col}: unguarded recursion on `{var}`")]
    UnguardedRecursion { var: String, line: usize, col: usize },
    #[error("{line}:{col}: bad interval: {detail}")]
    BadInterval { line: usize, col: usize, detail: String },
    #[error("{line}:{col}: bad probability: {detail}")]
    BadProbability { line: usize, col: usize, detail: String },
    #[error("{line}:{col}: role `{role}` communicates with itself")]
    SelfCommunication { role: String, line: usize, col: usize },
}

impl ParseError {
    pub(crate) fn syntax(line: usize, col: usize, expected: &str) -> Self {
        ParseError::Syntax {
            line,
            col,
            expected: expected.into(),
            found: "an invalid character".into(),
        }
    }

    /// `(line, col)` of the diagnostic.
    pub fn location(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::DuplicateLabel { line, col, .. }
            | ParseError::EmptyChoice { line, col }
            | ParseError::UnboundTypeVar { line, col, .. }
            | ParseError::UnguardedRecursion { line, col, .. }
            | ParseError::BadInterval { line, col, .. }
            | ParseError::BadProbability { line, col, .. }
            | ParseError::SelfCommunication { line, col, .. } => (*line, *col),
        }
    }
}

pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(src)?;
    let proc = p.process()?;
    p.finish()?;
    Ok(proc)
}

pub fn parse_global_type(src: &str) -> Result<GlobalType, ParseError> {
    let mut p = Parser::new(src)?;
    let g = p.global_closed()?;
    p.finish()?;
    Ok(g)
}

pub fn parse_local_type(src: &str) -> Result<LocalType, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.local_closed()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{struct_equal, Channel, SelectBranch, Term, Value};
    use crate::prob::Prob;
    use crate::typesys::{GlobalBranch, Interval, Sort};
    use alloc::vec;

    #[test]
    fn nil() {
        assert_eq!(parse_process("0"), Ok(Process::Nil));
        assert_eq!(print_process(&Process::Nil), "0");
    }

    #[test]
    fn selection_with_exact_probabilities() {
        let p = parse_process("s[rA][rB](+){ 0.6: yes(ok). 0 , 0.4: no(ok). 0 }").unwrap();
        let branch = |p: (u64, u64), l: &str| SelectBranch {
            prob: Prob::new(p.0, p.1).unwrap(),
            label: l.into(),
            payload: Term::Val(Value::Str("ok".into())),
            cont: Process::Nil,
        };
        assert_eq!(
            p,
            Process::Select {
                chan: Channel::role("s", "rA"),
                partner: "rB".into(),
                branches: vec![branch((3, 5), "yes"), branch((2, 5), "no")],
            }
        );
    }

    #[test]
    fn duplicate_and_empty() {
        assert!(matches!(
            parse_process("s[rA][rB](+){ 0.6: yes(ok). 0 , 0.4: yes(ok). 0 }"),
            Err(ParseError::DuplicateLabel { label, .. }) if label == "yes"
        ));
        assert!(matches!(parse_process("s[rA][rB]&{ }"), Err(ParseError::EmptyChoice { .. })));
    }

    #[test]
    fn syntax_error_location() {
        let e = parse_process("0 |\n  )").unwrap_err();
        assert_eq!(e.location(), (2, 3));
    }

    #[test]
    fn identifiers_resolve_by_scope() {
        let p = parse_process("new s . s[rA][rB](+){ 1: l(s). 0 }").unwrap();
        let Process::Restrict { body, .. } = p else { panic!() };
        let Process::Select { branches, .. } = *body else { panic!() };
        assert_eq!(branches[0].payload, Term::Val(Value::Session("s".into())));
        let p = parse_process("s[rA][rB]&{ l(x). X(x, y, -3, true) }").unwrap();
        let Process::Branch { arms, .. } = p else { panic!() };
        let Process::Call { args, .. } = &arms[0].cont else { panic!() };
        assert_eq!(
            args,
            &vec![Term::var("x"), Term::str("y"), Term::int(-3), Term::Val(Value::Bool(true))]
        );
    }

    #[test]
    fn precedence() {
        let p = parse_process("new s . 0 | 0").unwrap();
        assert!(matches!(p, Process::Par(..)));
        let p = parse_process("def X(y) = 0 | 0 in X(v) | 0").unwrap();
        let Process::Par(l, _) = p else { panic!() };
        let Process::Def { body, .. } = *l else { panic!() };
        assert!(matches!(*body, Process::Par(..)));
    }

    #[test]
    fn global_types() {
        assert_eq!(parse_global_type("end"), Ok(GlobalType::End));
        let g = parse_global_type("rB -> rA { [0,1]: talk(string). end , [0,0.1]: quit(string). end }").unwrap();
        let b = |lo: &str, hi: &str, l: &str| GlobalBranch {
            delta: Interval::parse(lo, hi).unwrap(),
            label: l.into(),
            sort: Sort::Str,
            cont: GlobalType::End,
        };
        assert_eq!(
            g,
            GlobalType::Interaction {
                from: "rB".into(),
                to: "rA".into(),
                branches: vec![b("0", "1", "talk"), b("0", "1/10", "quit")],
            }
        );
        assert_eq!(print_global(&GlobalType::End), "end");
    }

    #[test]
    fn global_type_errors() {
        assert!(matches!(parse_global_type("rec t . t"), Err(ParseError::UnguardedRecursion { .. })));
        assert!(matches!(parse_global_type("rec t . rec u . t"), Err(ParseError::UnguardedRecursion { .. })));
        assert!(matches!(parse_global_type("t"), Err(ParseError::UnboundTypeVar { .. })));
        assert!(matches!(
            parse_global_type("a -> b { [0.5,0.4]: l(nat). end }"),
            Err(ParseError::BadInterval { .. })
        ));
        assert!(matches!(
            parse_global_type("a -> b { [0,3/2]: l(nat). end }"),
            Err(ParseError::BadInterval { .. })
        ));
        assert!(matches!(
            parse_global_type("a -> a { 1: l(nat). end }"),
            Err(ParseError::SelfCommunication { .. })
        ));
    }

    #[test]
    fn round_trips() {
        for src in [
            "new s : < rA -> rB { [0,1]: l(nat). end } > . (s[rA][rB](+){ 1: l(3). 0 } | s[rB][rA]&{ l(x). 0 })",
            "def X(y, n) = y[rB](+){ 1/2: a(n). X(y, n), 1/2: b(\"q\\\"\"). 0 } in new s : \"g.gty\" . X(s[rA], 4)",
            "(0 | 0) | 0",
            "new s . new t . s[a][b]&{ l(x). x[c][d]&{ m(z). 0 } }",
        ] {
            let p = parse_process(src).unwrap();
            let printed = print_process(&p);
            let q = parse_process(&printed).unwrap();
            assert!(struct_equal(&p, &q), "{src} -> {printed}");
            assert_eq!(p, q);
        }
        for src in [
            "rec t . rA -> rB { [0,1]: a(nat). t, 1/3: b(bool). end }",
            "rA -> rB { 1: a(int). rB -> rC { [1/10,9/10]: c(string). end } }",
        ] {
            let g = parse_global_type(src).unwrap();
            assert_eq!(parse_global_type(&print_global(&g)), Ok(g));
        }
        let t = parse_local_type("rec t . rB & { ?a(nat). rB (+) { [0,1]: !b(nat). t, 1: !c(nat). end } }").unwrap();
        assert_eq!(parse_local_type(&print_local(&t)), Ok(t.clone()));
        assert_eq!(print_erased(&t.erase()), "rec t . rB & { ?a(nat). rB (+) { !b(nat). t, !c(nat). end } }");
    }
}
