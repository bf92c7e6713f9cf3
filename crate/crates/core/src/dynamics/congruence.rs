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

//! Structural congruence normal forms.
//!
//! A normal form is a block: restrictions outermost, then definitions, then
//! a parallel composition of prefixed processes and calls. Unused
//! restrictions and definitions are dropped, bound names are replaced by
//! level names, and the order of binders and parallel components is the
//! least one (by the derived term ordering) among the orders the
//! congruence permits.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ast::alpha::{canonical_annotation, LevelEnv, Prefixes};
use crate::ast::{fresh_name, struct_equal, Annotation, BranchArm, Process, SelectBranch};

/// Upper bound on the number of binder orders tried per block.
const ORDER_CAP: usize = 120;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DefItem {
    pub name: String,
    pub params: Vec<String>,
    pub body: Process,
}

/// A process split into its top-level restrictions, definitions (outermost
/// first) and parallel components.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Block {
    pub restrictions: Vec<(String, Option<Annotation>)>,
    pub defs: Vec<DefItem>,
    pub atoms: Vec<Process>,
}

impl Block {
    /// Peels a process already in block shape.
    pub(crate) fn of(p: &Process) -> Block {
        let mut b = Block::default();
        let mut cur = p;
        while let Process::Restrict { session, annotation, body } = cur {
            b.restrictions.push((session.clone(), annotation.clone()));
            cur = body;
        }
        while let Process::Def { name, params, body, scope } = cur {
            b.defs.push(DefItem {
                name: name.clone(),
                params: params.clone(),
                body: (**body).clone(),
            });
            cur = scope;
        }
        par_components(cur, &mut b.atoms);
        b
    }

    pub(crate) fn build(self) -> Process {
        let mut p = Process::par_all(self.atoms);
        for d in self.defs.into_iter().rev() {
            p = Process::def(d.name, d.params, d.body, p);
        }
        for (session, annotation) in self.restrictions.into_iter().rev() {
            p = Process::Restrict {
                session,
                annotation,
                body: Box::new(p),
            };
        }
        p
    }

    fn flatten(&mut self, p: Process, avoid: &mut BTreeSet<String>) {
        match p {
            Process::Nil => {}
            Process::Par(l, r) => {
                self.flatten(*l, avoid);
                self.flatten(*r, avoid);
            }
            Process::Restrict { session, annotation, body } => {
                let fresh = fresh_name(&session, avoid);
                avoid.insert(fresh.clone());
                let body = body.rename_name(&session, &fresh);
                self.restrictions.push((fresh, annotation));
                self.flatten(body, avoid);
            }
            Process::Def { name, params, body, scope } => {
                let fresh = fresh_name(&name, avoid);
                avoid.insert(fresh.clone());
                self.defs.push(DefItem {
                    name: fresh.clone(),
                    params,
                    body: body.rename_proc_var(&name, &fresh),
                });
                self.flatten(scope.rename_proc_var(&name, &fresh), avoid);
            }
            atom => self.atoms.push(atom),
        }
    }

    /// Drops definitions not reachable from the components and restrictions
    /// whose name no longer occurs.
    fn collect_garbage(&mut self) {
        let mut live: BTreeSet<String> = BTreeSet::new();
        let mut todo: Vec<String> = self.atoms.iter().flat_map(Process::free_proc_vars).collect();
        while let Some(x) = todo.pop() {
            if !live.insert(x.clone()) {
                continue;
            }
            if let Some(d) = self.defs.iter().find(|d| d.name == x) {
                todo.extend(d.body.free_proc_vars());
            }
        }
        self.defs.retain(|d| live.contains(&d.name));
        let mut names: BTreeSet<String> = self.atoms.iter().flat_map(Process::free_names).collect();
        for d in &self.defs {
            names.extend(def_body_free_names(d));
        }
        self.restrictions.retain(|(s, _)| names.contains(s));
    }
}

pub(crate) fn def_body_free_names(d: &DefItem) -> BTreeSet<String> {
    Process::def(d.name.clone(), d.params.clone(), d.body.clone(), Process::Nil).free_names()
}

fn par_components(p: &Process, out: &mut Vec<Process>) {
    match p {
        Process::Par(l, r) => {
            par_components(l, out);
            par_components(r, out);
        }
        Process::Nil => {}
        other => out.push(other.clone()),
    }
}

/// Hoists binders, removes garbage, and recurses into continuations and
/// definition bodies. Names are not yet canonical.
fn structure(p: &Process) -> Process {
    let mut avoid = p.all_names();
    let mut block = Block::default();
    block.flatten(p.clone(), &mut avoid);
    for d in &mut block.defs {
        d.body = structure(&d.body);
    }
    for a in &mut block.atoms {
        *a = structure_atom(a);
    }
    block.collect_garbage();
    block.build()
}

fn structure_atom(a: &Process) -> Process {
    match a {
        Process::Select { chan, partner, branches } => Process::Select {
            chan: chan.clone(),
            partner: partner.clone(),
            branches: branches
                .iter()
                .map(|b| SelectBranch {
                    cont: structure(&b.cont),
                    ..b.clone()
                })
                .collect(),
        },
        Process::Branch { chan, partner, arms } => Process::Branch {
            chan: chan.clone(),
            partner: partner.clone(),
            arms: arms
                .iter()
                .map(|a| BranchArm {
                    cont: structure(&a.cont),
                    ..a.clone()
                })
                .collect(),
        },
        other => other.clone(),
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if out.len() >= ORDER_CAP {
            return;
        }
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Orders of `defs` in which every definition comes after the definitions
/// its body calls.
fn def_orders(defs: &[DefItem]) -> Vec<Vec<usize>> {
    let deps: Vec<Vec<usize>> = defs
        .iter()
        .map(|d| {
            let fpv = d.body.free_proc_vars();
            defs.iter()
                .enumerate()
                .filter(|(_, e)| e.name != d.name && fpv.contains(&e.name))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    fn go(deps: &[Vec<usize>], prefix: &mut Vec<usize>, placed: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if out.len() >= ORDER_CAP {
            return;
        }
        if prefix.len() == placed.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..placed.len() {
            if !placed[i] && deps[i].iter().all(|&j| placed[j]) {
                placed[i] = true;
                prefix.push(i);
                go(deps, prefix, placed, out);
                prefix.pop();
                placed[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&deps, &mut Vec::new(), &mut vec![false; defs.len()], &mut out);
    out
}

fn canon(p: &Process, env: &mut LevelEnv) -> Process {
    let block = Block::of(p);
    let r_orders = permutations(block.restrictions.len());
    let d_orders = def_orders(&block.defs);
    let mut best: Option<Process> = None;
    'outer: for (ri, ro) in r_orders.iter().enumerate() {
        for (di, dord) in d_orders.iter().enumerate() {
            if ri * d_orders.len() + di >= ORDER_CAP {
                break 'outer;
            }
            let m = env.mark();
            let restrictions = ro
                .iter()
                .map(|&i| {
                    let (s, a) = &block.restrictions[i];
                    (env.bind_session(s), canonical_annotation(a))
                })
                .collect();
            let mut defs = Vec::with_capacity(dord.len());
            for &i in dord {
                let d = &block.defs[i];
                let name = env.bind_proc_var(&d.name);
                let inner = env.mark();
                let params = d.params.iter().map(|x| env.bind_var(x)).collect();
                let body = canon(&d.body, env);
                env.restore(inner);
                defs.push(DefItem { name, params, body });
            }
            let mut atoms: Vec<Process> = block.atoms.iter().map(|a| canon_atom(a, env)).collect();
            atoms.sort();
            env.restore(m);
            let candidate = Block {
                restrictions,
                defs,
                atoms,
            }
            .build();
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap_or(Process::Nil)
}

fn canon_atom(a: &Process, env: &mut LevelEnv) -> Process {
    match a {
        Process::Select { chan, partner, branches } => {
            let mut branches: Vec<SelectBranch> = branches
                .iter()
                .map(|b| SelectBranch {
                    prob: b.prob.clone(),
                    label: b.label.clone(),
                    payload: env.term(&b.payload),
                    cont: canon(&b.cont, env),
                })
                .collect();
            branches.sort_by(|a, b| a.label.cmp(&b.label));
            Process::Select {
                chan: env.channel(chan),
                partner: partner.clone(),
                branches,
            }
        }
        Process::Branch { chan, partner, arms } => {
            let mut arms: Vec<BranchArm> = arms
                .iter()
                .map(|a| {
                    let m = env.mark();
                    let binder = env.bind_var(&a.binder);
                    let cont = canon(&a.cont, env);
                    env.restore(m);
                    BranchArm {
                        label: a.label.clone(),
                        binder,
                        cont,
                    }
                })
                .collect();
            arms.sort_by(|a, b| a.label.cmp(&b.label));
            Process::Branch {
                chan: env.channel(chan),
                partner: partner.clone(),
                arms,
            }
        }
        Process::Call { name, args } => Process::Call {
            name: env.proc_var(name),
            args: args.iter().map(|t| env.term(t)).collect(),
        },
        other => canon(other, env),
    }
}

/// Canonical representative of the structural congruence class of `p`.
pub fn normal_form(p: &Process) -> Process {
    let mut env = LevelEnv::new(Prefixes::for_term(p));
    canon(&structure(p), &mut env)
}

/// `true` iff `p` and `q` have structurally equal normal forms.
pub fn congruent(p: &Process, q: &Process) -> bool {
    struct_equal(&normal_form(p), &normal_form(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn nf(s: &str) -> Process {
        normal_form(&parse_process(s).unwrap())
    }

    fn cong(a: &str, b: &str) -> bool {
        congruent(&parse_process(a).unwrap(), &parse_process(b).unwrap())
    }

    const P: &str = "s[a][b](+){ 1: l(1). 0 }";
    const Q: &str = "s[b][a]&{ l(x). 0 }";
    const R: &str = "t[c][d]&{ m(y). Y(y) }";

    #[test]
    fn unit_laws() {
        assert_eq!(nf("0 | 0"), Process::Nil);
        assert_eq!(nf("new s . (0 | 0)"), Process::Nil);
        assert_eq!(nf("def X() = 0 in 0"), Process::Nil);
    }

    #[test]
    fn commutativity_and_associativity() {
        assert!(cong(&alloc::format!("{P} | {Q}"), &alloc::format!("{Q} | {P}")));
        assert!(cong(
            &alloc::format!("({P} | {Q}) | {R}"),
            &alloc::format!("{P} | ({Q} | {R})")
        ));
        assert!(!cong(P, Q));
    }

    #[test]
    fn scope_extrusion() {
        assert!(cong(
            "new u . u[a][b](+){ 1: l(1). 0 } | t[b][a]&{ l(x). 0 }",
            "new u . (u[a][b](+){ 1: l(1). 0 } | t[b][a]&{ l(x). 0 })"
        ));
        // Extrusion over a process using the same name must rename.
        assert!(!cong(
            "new s . s[a][b](+){ 1: l(1). 0 } | s[b][a]&{ l(x). 0 }",
            "new s . (s[a][b](+){ 1: l(1). 0 } | s[b][a]&{ l(x). 0 })"
        ));
    }

    #[test]
    fn restriction_swap_and_garbage() {
        assert!(cong(
            "new s . new t . (s[a][b]&{ l(x). 0 } | t[a][b](+){ 1: l(1). 0 })",
            "new t . new s . (s[a][b]&{ l(x). 0 } | t[a][b](+){ 1: l(1). 0 })"
        ));
        assert!(cong("new s . X(1)", "X(1)"));
        assert!(!cong("new s . X(s)", "X(s)"));
    }

    #[test]
    fn definitions() {
        assert!(cong("def X(y) = 0 in (X(1) | Z())", "(def X(y) = 0 in X(1)) | Z()"));
        assert!(cong(
            "def X() = 0 in def Y() = 0 in (X() | Y())",
            "def Y() = 0 in def X() = 0 in (X() | Y())"
        ));
        assert!(cong("def X() = 0 in new s . X()", "new s . def X() = 0 in X()"));
        assert!(cong("def X() = 0 in Y()", "Y()"));
    }

    #[test]
    fn idempotent_and_inside_prefixes() {
        for src in [
            "new s . def X(y) = y[b](+){ 1: l(1). X(y) } in (X(s[a]) | s[b][a]&{ l(z). (0 | 0) })",
            "s[a][b]&{ l(x). (new t . 0 | 0) }",
        ] {
            let once = nf(src);
            assert_eq!(normal_form(&once), once, "{src}");
        }
        assert_eq!(nf("s[a][b]&{ l(x). (new t . 0 | 0) }"), nf("s[a][b]&{ l(x). 0 }"));
    }
}
