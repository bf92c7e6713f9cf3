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

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::lexer::{lex, Spanned, Tok};
use super::ParseError;
use crate::ast::{first_duplicate, Annotation, BranchArm, Channel, Process, SelectBranch, Term, Value};
use crate::prob::Prob;
use crate::typesys::{GlobalBranch, GlobalType, Interval, Local, LocalType, ReceiveArm, SelectArm, Sort};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Binder {
    Var,
    Session,
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<(String, Binder)>,
    tvars: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

const KEYWORDS: &[&str] = &["new", "def", "in", "rec", "end", "true", "false"];

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            scope: Vec::new(),
            tvars: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.advance();
            Ok(())
        } else {
            self.fail(&alloc::format!("`{kw}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        self.expect(Tok::Eof, "end of input")
    }

    // ---- processes ----

    pub(crate) fn process(&mut self) -> PResult<Process> {
        let mut items = alloc::vec![self.atom()?];
        while *self.peek() == Tok::Bar {
            self.advance();
            items.push(self.atom()?);
        }
        Ok(Process::par_all(items))
    }

    fn atom(&mut self) -> PResult<Process> {
        match self.peek().clone() {
            Tok::Num(n) if n == "0" => {
                self.advance();
                Ok(Process::Nil)
            }
            Tok::LParen => {
                self.advance();
                let p = self.process()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(kw) if kw == "new" => self.restriction(),
            Tok::Ident(kw) if kw == "def" => self.definition(),
            Tok::Ident(_) => {
                let (line, col) = self.here();
                let name = self.ident("a channel or process variable")?;
                match self.peek() {
                    Tok::LParen => {
                        self.advance();
                        let args = self.terms(Tok::RParen)?;
                        Ok(Process::Call { name, args })
                    }
                    Tok::LBrack => {
                        self.advance();
                        let first = self.ident("a role")?;
                        self.expect(Tok::RBrack, "`]`")?;
                        let (chan, partner) = if *self.peek() == Tok::LBrack {
                            self.advance();
                            let partner = self.ident("a role")?;
                            self.expect(Tok::RBrack, "`]`")?;
                            (Channel::role(name, first), partner)
                        } else {
                            (Channel::Var(name), first)
                        };
                        self.choice(chan, partner, line, col)
                    }
                    _ => self.fail("`(` or `[`"),
                }
            }
            _ => self.fail("a process"),
        }
    }

    fn restriction(&mut self) -> PResult<Process> {
        self.keyword("new")?;
        let session = self.ident("a session name")?;
        let annotation = if *self.peek() == Tok::Colon {
            self.advance();
            Some(match self.peek().clone() {
                Tok::Str(path) => {
                    self.advance();
                    Annotation::Path(path)
                }
                Tok::Lt => {
                    self.advance();
                    let g = self.global_closed()?;
                    self.expect(Tok::Gt, "`>`")?;
                    Annotation::Global(g)
                }
                _ => return self.fail("a quoted path or `<` global type `>`"),
            })
        } else {
            None
        };
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push((session.clone(), Binder::Session));
        let body = self.atom();
        self.scope.pop();
        Ok(Process::Restrict {
            session,
            annotation,
            body: Box::new(body?),
        })
    }

    fn definition(&mut self) -> PResult<Process> {
        self.keyword("def")?;
        let name = self.ident("a process variable")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            params.push(self.ident("a parameter")?);
            while *self.peek() == Tok::Comma {
                self.advance();
                params.push(self.ident("a parameter")?);
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Eq, "`=`")?;
        let mark = self.scope.len();
        self.scope.extend(params.iter().map(|p| (p.clone(), Binder::Var)));
        let body = self.process();
        self.scope.truncate(mark);
        let body = body?;
        self.keyword("in")?;
        let scope = self.atom()?;
        Ok(Process::def(name, params, body, scope))
    }

    fn choice(&mut self, chan: Channel, partner: String, line: usize, col: usize) -> PResult<Process> {
        match self.peek() {
            Tok::Oplus => {
                self.advance();
                let branches = self.braced(|p| p.select_branch())?;
                if branches.is_empty() {
                    return Err(ParseError::EmptyChoice { line, col });
                }
                let labels: Vec<&str> = branches.iter().map(|b| b.label.as_str()).collect();
                if let Some(l) = first_duplicate(&labels) {
                    return Err(ParseError::DuplicateLabel { label: l.into(), line, col });
                }
                Ok(Process::Select { chan, partner, branches })
            }
            Tok::Amp => {
                self.advance();
                let arms = self.braced(|p| p.branch_arm())?;
                if arms.is_empty() {
                    return Err(ParseError::EmptyChoice { line, col });
                }
                let labels: Vec<&str> = arms.iter().map(|a| a.label.as_str()).collect();
                if let Some(l) = first_duplicate(&labels) {
                    return Err(ParseError::DuplicateLabel { label: l.into(), line, col });
                }
                Ok(Process::Branch { chan, partner, arms })
            }
            _ => self.fail("`(+)` or `&`"),
        }
    }

    fn braced<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RBrace {
            out.push(item(self)?);
            while *self.peek() == Tok::Comma {
                self.advance();
                out.push(item(self)?);
            }
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        Ok(out)
    }

    fn select_branch(&mut self) -> PResult<SelectBranch> {
        let prob = self.prob()?;
        self.expect(Tok::Colon, "`:`")?;
        let label = self.ident("a label")?;
        self.expect(Tok::LParen, "`(`")?;
        let payload = self.term()?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Dot, "`.`")?;
        let cont = self.process()?;
        Ok(SelectBranch { prob, label, payload, cont })
    }

    fn branch_arm(&mut self) -> PResult<BranchArm> {
        let label = self.ident("a label")?;
        self.expect(Tok::LParen, "`(`")?;
        let binder = self.ident("a variable")?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push((binder.clone(), Binder::Var));
        let cont = self.process();
        self.scope.pop();
        Ok(BranchArm { label, binder, cont: cont? })
    }

    fn prob(&mut self) -> PResult<Prob> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Prob::parse(&n).map_err(|e| ParseError::BadProbability {
                    line,
                    col,
                    detail: e.to_string(),
                })
            }
            _ => self.fail("a probability"),
        }
    }

    fn terms(&mut self, close: Tok) -> PResult<Vec<Term>> {
        let mut out = Vec::new();
        if *self.peek() != close {
            out.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.advance();
                out.push(self.term()?);
            }
        }
        self.expect(close, "`,` or `)`")?;
        Ok(out)
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(n) => self.integer(&n, false),
            Tok::Minus => {
                self.advance();
                match self.peek().clone() {
                    Tok::Num(n) => self.integer(&n, true),
                    _ => self.fail("an integer"),
                }
            }
            Tok::Str(s) => {
                self.advance();
                Ok(Term::Val(Value::Str(s)))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.advance();
                Ok(Term::Val(Value::Bool(s == "true")))
            }
            Tok::Ident(_) => {
                let name = self.ident("a value")?;
                if *self.peek() == Tok::LBrack {
                    self.advance();
                    let role = self.ident("a role")?;
                    self.expect(Tok::RBrack, "`]`")?;
                    return Ok(Term::Chan(Channel::role(name, role)));
                }
                Ok(match self.scope.iter().rev().find(|(n, _)| *n == name) {
                    Some((_, Binder::Var)) => Term::Chan(Channel::Var(name)),
                    Some((_, Binder::Session)) => Term::Val(Value::Session(name)),
                    None => Term::Val(Value::Str(name)),
                })
            }
            _ => self.fail("a value"),
        }
    }

    fn integer(&mut self, text: &str, negative: bool) -> PResult<Term> {
        let (line, col) = self.here();
        let parsed: Option<i64> = if text.bytes().all(|b| b.is_ascii_digit()) {
            let src = if negative { alloc::format!("-{text}") } else { text.to_string() };
            src.parse().ok()
        } else {
            None
        };
        match parsed {
            Some(n) => {
                self.advance();
                Ok(Term::Val(Value::Int(n)))
            }
            None => Err(ParseError::Syntax {
                line,
                col,
                expected: "an integer".into(),
                found: alloc::format!("number `{text}`"),
            }),
        }
    }

    // ---- types ----

    fn interval(&mut self) -> PResult<Interval> {
        let (line, col) = self.here();
        let bad = |detail: String| ParseError::BadInterval { line, col, detail };
        match self.peek().clone() {
            Tok::LBrack => {
                self.advance();
                let lo = self.num_text()?;
                self.expect(Tok::Comma, "`,`")?;
                let hi = self.num_text()?;
                self.expect(Tok::RBrack, "`]`")?;
                Interval::parse(&lo, &hi).map_err(|e| bad(e.to_string()))
            }
            Tok::Num(n) => {
                self.advance();
                Prob::parse(&n).map(Interval::point).map_err(|e| bad(e.to_string()))
            }
            _ => self.fail("an interval"),
        }
    }

    fn num_text(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.advance();
                Ok(n)
            }
            _ => self.fail("a number"),
        }
    }

    fn sort(&mut self) -> PResult<Sort> {
        match self.peek() {
            Tok::Ident(s) => match Sort::from_keyword(s) {
                Some(sort) => {
                    self.advance();
                    Ok(sort)
                }
                None => self.fail("a sort (nat, int, bool, string)"),
            },
            _ => self.fail("a sort (nat, int, bool, string)"),
        }
    }

    fn label_sort(&mut self) -> PResult<(String, Sort)> {
        let label = self.ident("a label")?;
        self.expect(Tok::LParen, "`(`")?;
        let sort = self.sort()?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Dot, "`.`")?;
        Ok((label, sort))
    }

    fn type_var(&mut self) -> PResult<String> {
        let (line, col) = self.here();
        let t = self.ident("a type")?;
        if !self.tvars.contains(&t) {
            return Err(ParseError::UnboundTypeVar { var: t, line, col });
        }
        Ok(t)
    }

    fn check_labels(labels: Vec<&str>, line: usize, col: usize) -> PResult<()> {
        if labels.is_empty() {
            return Err(ParseError::EmptyChoice { line, col });
        }
        match first_duplicate(&labels) {
            Some(l) => Err(ParseError::DuplicateLabel { label: l.into(), line, col }),
            None => Ok(()),
        }
    }

    pub(crate) fn global_closed(&mut self) -> PResult<GlobalType> {
        let saved = core::mem::take(&mut self.tvars);
        let g = self.global();
        self.tvars = saved;
        g
    }

    fn global(&mut self) -> PResult<GlobalType> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let g = self.global()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(g)
            }
            Tok::Ident(kw) if kw == "end" => {
                self.advance();
                Ok(GlobalType::End)
            }
            Tok::Ident(kw) if kw == "rec" => {
                self.advance();
                let var = self.ident("a type variable")?;
                self.expect(Tok::Dot, "`.`")?;
                self.tvars.push(var.clone());
                let body = self.global();
                self.tvars.pop();
                let body = body?;
                if body.unguarded().contains(&var) {
                    return Err(ParseError::UnguardedRecursion { var, line, col });
                }
                Ok(GlobalType::Rec { var, body: Box::new(body) })
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::Arrow => {
                let from = self.ident("a role")?;
                self.advance();
                let to = self.ident("a role")?;
                if from == to {
                    return Err(ParseError::SelfCommunication { role: from, line, col });
                }
                let branches = self.braced(|p| {
                    let delta = p.interval()?;
                    p.expect(Tok::Colon, "`:`")?;
                    let (label, sort) = p.label_sort()?;
                    let cont = p.global()?;
                    Ok(GlobalBranch { delta, label, sort, cont })
                })?;
                Self::check_labels(branches.iter().map(|b| b.label.as_str()).collect(), line, col)?;
                Ok(GlobalType::Interaction { from, to, branches })
            }
            Tok::Ident(_) => Ok(GlobalType::Var(self.type_var()?)),
            _ => self.fail("a global type"),
        }
    }

    pub(crate) fn local_closed(&mut self) -> PResult<LocalType> {
        let saved = core::mem::take(&mut self.tvars);
        let t = self.local();
        self.tvars = saved;
        t
    }

    fn local(&mut self) -> PResult<LocalType> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let t = self.local()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(kw) if kw == "end" => {
                self.advance();
                Ok(Local::End)
            }
            Tok::Ident(kw) if kw == "rec" => {
                self.advance();
                let var = self.ident("a type variable")?;
                self.expect(Tok::Dot, "`.`")?;
                self.tvars.push(var.clone());
                let body = self.local();
                self.tvars.pop();
                let body = body?;
                if body.unguarded().contains(&var) {
                    return Err(ParseError::UnguardedRecursion { var, line, col });
                }
                Ok(Local::Rec { var, body: Box::new(body) })
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::Oplus => {
                let partner = self.ident("a role")?;
                self.advance();
                let arms = self.braced(|p| {
                    let annot = p.interval()?;
                    p.expect(Tok::Colon, "`:`")?;
                    p.expect(Tok::Bang, "`!`")?;
                    let (label, sort) = p.label_sort()?;
                    let cont = p.local()?;
                    Ok(SelectArm { annot, label, sort, cont })
                })?;
                Self::check_labels(arms.iter().map(|a| a.label.as_str()).collect(), line, col)?;
                Ok(Local::Select { partner, arms })
            }
            Tok::Ident(_) if *self.peek_at(1) == Tok::Amp => {
                let partner = self.ident("a role")?;
                self.advance();
                let arms = self.braced(|p| {
                    p.expect(Tok::Quest, "`?`")?;
                    let (label, sort) = p.label_sort()?;
                    let cont = p.local()?;
                    Ok(ReceiveArm { label, sort, cont })
                })?;
                Self::check_labels(arms.iter().map(|a| a.label.as_str()).collect(), line, col)?;
                Ok(Local::Branch { partner, arms })
            }
            Tok::Ident(_) => Ok(Local::Var(self.type_var()?)),
            _ => self.fail("a local type"),
        }
    }
}
