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

//! The `pmst` command line. Exit status 0 means every verdict passed, 1
//! that some verdict failed, 2 a usage, IO or parse error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pmst_core::analysis::{enumerate_paths, reach, simulate, SimulationConfig, DEFAULT_EXPLOSION_CAP};
use pmst_core::checker::{check_against, open_restrictions, type_check, CheckMode, Sorting, Typing};
use pmst_core::dynamics::{disabled_redexes, enabled_steps, next_proc, normal_form};
use pmst_core::prob::{render, Rational};
use pmst_core::syntax::{interval_text, print_global, print_local, print_process};
use pmst_core::typesys::{project, well_formed};
use pmst_core::{Annotation, Channel, GlobalType, Process};
use serde_json::{json, Value};

use crate::load::{load_global, load_local, load_process, load_system, LoadError};
use crate::report;
use crate::verify::{verify_corpus, VerifyConfig};

/// Name of the random generator used by `simulate`, for reimplementations.
pub const GENERATOR: &str = "ChaCha8, seeded with the run seed, stream = trial index";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Selections must offer exactly the labels of the type.
    Strict,
    /// Selections may omit labels whose interval contains 0.
    Subset,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => CheckMode::Strict,
            Mode::Subset => CheckMode::Subset,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pmst", version, about = "Probabilistic multiparty session types: checking and analysis")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Most states or paths an analysis may visit.
    #[arg(long, env = "PMST_EXPLOSION_CAP", default_value_t = DEFAULT_EXPLOSION_CAP, global = true)]
    pub explosion_cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a `.mps`, `.gty` or `.lty` file and print it back.
    Parse {
        file: PathBuf,
        /// Print the congruence normal form of a process.
        #[arg(long)]
        normal_form: bool,
    },
    /// Check that a global type projects and has reachable interval sets.
    Wf { file: PathBuf },
    /// Project a global type onto a role, or onto every role.
    Project {
        file: PathBuf,
        #[arg(long)]
        role: Option<String>,
    },
    /// Type-check a system against its restriction annotations.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Subset)]
        mode: Mode,
        /// Type of a free endpoint, as `s[r]=FILE.lty`. Repeatable.
        #[arg(long = "typing", value_name = "CHAN=FILE")]
        typing: Vec<String>,
    },
    /// List the enabled steps of a system with their probabilities.
    Step { file: PathBuf },
    /// Distribution over states after k steps, and its total mass.
    Reach {
        file: PathBuf,
        #[arg(short = 'k', long = "steps", value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Evolution paths up to a depth.
    Paths {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// Seeded Monte Carlo runs with a frequency audit.
    Simulate {
        file: PathBuf,
        #[arg(short = 'n', long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        /// Global type for the interval audit; defaults to the system's first annotation.
        #[arg(long)]
        global: Option<PathBuf>,
    },
    /// Run every property harness over the embedded fixture corpus.
    Verify {
        #[arg(long, value_enum, default_value_t = Mode::Subset)]
        mode: Mode,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 64)]
        bound: usize,
        #[arg(short = 'k', long = "steps", default_value_t = 6)]
        k: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Wf { .. } => "wf",
            Command::Project { .. } => "project",
            Command::Check { .. } => "check",
            Command::Step { .. } => "step",
            Command::Reach { .. } => "reach",
            Command::Paths { .. } => "paths",
            Command::Simulate { .. } => "simulate",
            Command::Verify { .. } => "verify",
        }
    }
}

/// A rendered verdict.
struct Report {
    ok: bool,
    text: String,
    json: Value,
}

impl Report {
    fn failed(message: String) -> Report {
        Report {
            ok: false,
            text: format!("error: {message}\n"),
            json: json!({ "error": message }),
        }
    }
}

/// Runs the command line `argv`, without the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = std::iter::once(OsString::from("pmst")).chain(argv.into_iter().map(Into::into));
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
        }
    };
    execute(&cfg, out, err)
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let report = match dispatch(cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "pmst {}: {e}", cfg.command.name());
            return 2;
        }
    };
    let written = match cfg.format {
        Format::Text => out.write_all(report.text.as_bytes()),
        Format::Json => {
            let mut json = json!({ "command": cfg.command.name(), "ok": report.ok });
            if let (Value::Object(dst), Value::Object(src)) = (&mut json, report.json) {
                dst.extend(src);
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&json).expect("serializable"))
        }
    };
    if written.is_err() {
        return 2;
    }
    if report.ok {
        0
    } else {
        1
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Report, LoadError> {
    let cap = cfg.explosion_cap;
    Ok(match &cfg.command {
        Command::Parse { file, normal_form } => parse(file, *normal_form)?,
        Command::Wf { file } => wf(&load_global(file)?),
        Command::Project { file, role } => project_cmd(&load_global(file)?, role.as_deref()),
        Command::Check { file, mode, typing } => check(&load_system(file)?, (*mode).into(), &parse_typing(typing)?),
        Command::Step { file } => step(&load_system(file)?),
        Command::Reach { file, k } => reach_cmd(&load_system(file)?, *k as usize, cap),
        Command::Paths { file, depth } => paths(&load_system(file)?, *depth as usize, cap),
        Command::Simulate { file, trials, seed, max_steps, global } => {
            let p = load_system(file)?;
            let global = match global {
                Some(g) => Some(load_global(g)?),
                None => first_annotation(&p),
            };
            let config = SimulationConfig { trials: *trials, seed: *seed, max_steps: *max_steps, cap, global };
            simulate_cmd(&p, &config)
        }
        Command::Verify { mode, depth, bound, k } => verify(&VerifyConfig {
            mode: (*mode).into(),
            depth: *depth,
            bound: *bound,
            k: *k,
            cap,
        }),
    })
}

fn parse(file: &Path, nf: bool) -> Result<Report, LoadError> {
    let (kind, text) = match file.extension().and_then(|e| e.to_str()) {
        Some("gty") => ("global", print_global(&load_global(file)?)),
        Some("lty") => ("local", print_local(&load_local(file)?)),
        _ => {
            let p = load_process(file)?;
            ("process", print_process(&if nf { normal_form(&p) } else { p }))
        }
    };
    Ok(Report {
        ok: true,
        text: format!("{text}\n"),
        json: json!({ "kind": kind, "text": text }),
    })
}

fn projections(g: &GlobalType, roles: &BTreeSet<String>) -> (bool, String, Value) {
    let mut ok = true;
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    for r in roles {
        match project(g, r) {
            Ok(t) => {
                let _ = writeln!(text, "  {r}: {}", print_local(&t));
                json.insert(r.clone(), json!({ "ok": true, "type": print_local(&t) }));
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(text, "  {r}: undefined: {e}");
                json.insert(r.clone(), json!({ "ok": false, "error": e.to_string() }));
            }
        }
    }
    (ok, text, Value::Object(json))
}

fn wf(g: &GlobalType) -> Report {
    let r = well_formed(g);
    let (_, proj_text, proj_json) = projections(g, &g.roles());
    let mut text = format!("projections:\n{proj_text}");
    if let Some(e) = &r.term_error {
        let _ = writeln!(text, "term error: {e}");
    }
    let mut sets = Vec::new();
    for i in &r.bad_interval_sets {
        let at = if i.path.is_empty() { "the outermost interaction".to_string() } else { format!("after {}", i.path.join(".")) };
        let deltas: Vec<String> = i.labels.iter().zip(&i.deltas).map(|(l, d)| format!("{l}: {}", interval_text(d))).collect();
        let _ = writeln!(
            text,
            "interval set at {at}, {} -> {} {{{}}}: {}, not reachable",
            i.from,
            i.to,
            deltas.join(", "),
            if i.proper { "proper" } else { "not proper" }
        );
        sets.push(json!({
            "path": i.path,
            "from": i.from,
            "to": i.to,
            "branches": i.labels.iter().zip(&i.deltas).map(|(l, d)| json!({ "label": l, "delta": report::interval(d) })).collect::<Vec<_>>(),
            "proper": i.proper,
            "reachable": i.reachable,
        }));
    }
    let _ = writeln!(text, "{}", if r.ok { "well-formed" } else { "not well-formed" });
    Report {
        ok: r.ok,
        text,
        json: json!({
            "term_error": r.term_error.as_ref().map(ToString::to_string),
            "projections": proj_json,
            "unreachable_interval_sets": sets,
        }),
    }
}

fn project_cmd(g: &GlobalType, role: Option<&str>) -> Report {
    let roles = match role {
        Some(r) => BTreeSet::from([r.to_string()]),
        None => g.roles(),
    };
    let (ok, text, json) = projections(g, &roles);
    Report { ok, text, json: json!({ "projections": json }) }
}

fn parse_typing(entries: &[String]) -> Result<Typing, LoadError> {
    let usage = |e: &str| LoadError::Io {
        path: e.into(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "expected s[r]=FILE"),
    };
    let mut delta = Typing::new();
    for e in entries {
        let (chan, file) = e.split_once('=').ok_or_else(|| usage(e))?;
        let (session, role) = chan
            .strip_suffix(']')
            .and_then(|c| c.split_once('['))
            .filter(|(s, r)| !s.is_empty() && !r.is_empty())
            .ok_or_else(|| usage(e))?;
        delta.insert(Channel::role(session, role), load_local(Path::new(file))?).map_err(|_| usage(e))?;
    }
    Ok(delta)
}

fn check(p: &Process, mode: CheckMode, delta: &Typing) -> Report {
    let mode_name = if mode == CheckMode::Strict { "strict" } else { "subset" };
    let verdict = if delta.is_empty() {
        type_check(&Sorting::new(), p, mode).map(|_| ())
    } else {
        check_against(&Sorting::new(), p, delta, mode)
    };
    let opened = verdict.and_then(|()| open_restrictions(p, delta));
    match opened {
        Ok((_, sessions)) => {
            let mut text = format!("well typed ({mode_name} mode)\ntyping: {delta}\nendpoints:\n");
            for (c, t) in sessions.iter() {
                let _ = writeln!(text, "  {c}: {}", print_local(t));
            }
            Report {
                ok: true,
                text,
                json: json!({ "mode": mode_name, "typing": report::typing(delta), "endpoints": report::typing(&sessions) }),
            }
        }
        Err(e) => Report {
            ok: false,
            text: format!("type error ({mode_name} mode): {e}\n"),
            json: json!({ "mode": mode_name, "error": report::type_error(&e) }),
        },
    }
}

fn step(p: &Process) -> Report {
    let state = normal_form(p);
    let steps = match enabled_steps(&state) {
        Ok(s) => s,
        Err(e) => return Report::failed(e.to_string()),
    };
    let m = next_proc(&state);
    let disabled: Vec<String> = disabled_redexes(&state).iter().map(ToString::to_string).collect();
    let mut text = format!("nextProc = {m}\n");
    for s in &steps {
        let _ = writeln!(text, "{}  {}  -> {}", s.label, report::approx(s.prob.as_rational()), print_process(&s.target));
    }
    for d in &disabled {
        let _ = writeln!(text, "disabled: {d}");
    }
    if steps.is_empty() {
        text.push_str("no enabled step\n");
    }
    Report {
        ok: true,
        text,
        json: json!({
            "next_proc": m,
            "steps": steps.iter().map(|s| json!({
                "label": report::label(&s.label),
                "prob": report::prob(&s.prob),
                "target": print_process(&s.target),
            })).collect::<Vec<_>>(),
            "disabled": disabled,
        }),
    }
}

fn reach_cmd(p: &Process, k: usize, cap: usize) -> Report {
    let entries = match reach(p, k, cap) {
        Ok(e) => e,
        Err(e) => return Report::failed(e.to_string()),
    };
    let total: Option<Rational> = (!entries.is_empty()).then(|| pmst_core::prob::sum(entries.iter().map(|e| &e.mass)));
    let ok = total.as_ref().is_none_or(|t| *t == Rational::from_integer(1u32.into()));
    let mut text = String::new();
    for e in &entries {
        let absorbed = if e.absorbed { "  [stuck]" } else { "" };
        let _ = writeln!(text, "{}{absorbed}  {}", report::approx(e.mass.as_rational()), print_process(&e.state));
    }
    match &total {
        Some(t) => {
            let _ = writeln!(text, "total: {}", render(t));
        }
        None => text.push_str("total: not computed (no state is reachable in k steps)\n"),
    }
    Report {
        ok,
        text,
        json: json!({
            "k": k,
            "entries": entries.iter().map(|e| json!({
                "state": print_process(&e.state),
                "mass": report::prob(&e.mass),
                "absorbed": e.absorbed,
            })).collect::<Vec<_>>(),
            "total": total.as_ref().map(report::rational),
        }),
    }
}

fn paths(p: &Process, depth: usize, cap: usize) -> Report {
    let paths = match enumerate_paths(p, depth, cap) {
        Ok(x) => x,
        Err(e) => return Report::failed(e.to_string()),
    };
    let mut text = String::new();
    for path in &paths {
        let labels: Vec<String> = path.steps.iter().map(|s| s.label.to_string()).collect();
        let _ = writeln!(
            text,
            "{}  {}  -> {}",
            report::approx(path.prob().as_rational()),
            if labels.is_empty() { "(empty)".to_string() } else { labels.join(" ") },
            print_process(path.last())
        );
    }
    Report {
        ok: true,
        text,
        json: json!({
            "depth": depth,
            "paths": paths.iter().map(|path| json!({
                "prob": report::prob(&path.prob()),
                "labels": path.steps.iter().map(|s| report::label(&s.label)).collect::<Vec<_>>(),
                "final": print_process(path.last()),
            })).collect::<Vec<_>>(),
        }),
    }
}

fn first_annotation(p: &Process) -> Option<GlobalType> {
    match p {
        Process::Restrict { annotation: Some(Annotation::Global(g)), .. } => Some(g.clone()),
        Process::Restrict { body, .. } => first_annotation(body),
        Process::Par(a, b) => first_annotation(a).or_else(|| first_annotation(b)),
        Process::Def { body, scope, .. } => first_annotation(scope).or_else(|| first_annotation(body)),
        _ => None,
    }
}

fn simulate_cmd(p: &Process, config: &SimulationConfig) -> Report {
    let r = match simulate(p, config) {
        Ok(r) => r,
        Err(e) => return Report::failed(e.to_string()),
    };
    let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };
    let mut text = format!("trials {}, seed {}, generator {GENERATOR}\nfirst step:\n", r.trials, r.seed);
    for a in &r.first_step {
        let _ = writeln!(
            text,
            "  {}  declared {}  empirical {:.4}  margin {:.4}  {}",
            a.label,
            report::approx(a.declared.as_rational()),
            a.empirical,
            a.margin,
            verdict(a.pass)
        );
    }
    if !r.interval_audit.is_empty() {
        text.push_str("first communication against declared intervals:\n");
    }
    for a in &r.interval_audit {
        let _ = writeln!(
            text,
            "  {}  interval {}  empirical {:.4} of {}  margin {:.4}  {}",
            a.label,
            interval_text(&a.delta), a.empirical, a.samples, a.margin, verdict(a.pass)
        );
    }
    let _ = writeln!(text, "reached 0: {}, cut off: {}", r.reached_nil, r.truncated);
    Report {
        ok: r.all_pass(),
        text,
        json: json!({
            "trials": r.trials,
            "seed": r.seed,
            "generator": GENERATOR,
            "first_step": r.first_step.iter().map(|a| json!({
                "label": report::label(&a.label),
                "declared": report::prob(&a.declared),
                "empirical": a.empirical,
                "margin": a.margin,
                "pass": a.pass,
            })).collect::<Vec<_>>(),
            "interval_audit": r.interval_audit.iter().map(|a| json!({
                "label": report::label(&a.label),
                "delta": report::interval(&a.delta),
                "samples": a.samples,
                "empirical": a.empirical,
                "margin": a.margin,
                "pass": a.pass,
            })).collect::<Vec<_>>(),
            "label_counts": r.label_counts.iter().map(|((depth, l), c)| json!({
                "depth": depth,
                "label": report::label(l),
                "count": c,
            })).collect::<Vec<_>>(),
            "reached_nil": r.reached_nil,
            "truncated": r.truncated,
        }),
    }
}

fn verify(cfg: &VerifyConfig) -> Report {
    let outcomes = verify_corpus(cfg);
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(text, "{} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    Report {
        ok: outcomes.iter().all(|o| o.pass),
        text,
        json: json!({
            "checks": outcomes.iter().map(|o| json!({ "name": o.name, "pass": o.pass, "detail": o.detail })).collect::<Vec<_>>(),
        }),
    }
}
