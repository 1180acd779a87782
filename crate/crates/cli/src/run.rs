use std::io::{self, Write};
use std::path::Path;

use hc_core::diag::Diagnostic;
use hc_core::elab::{load_program, load_theory, CommandKind};
use hc_core::equations::{decide_eq, normalize, print_term, NormConfig, Oracle, Outcome};
use hc_core::semantics::lint::lint_table;
use hc_core::semantics::{model_lint, FinRel, FiniteModel, LintReport, Semantics};
use hc_core::syntax::{MixedContext, Term, Type};
use hc_core::syntaxgen::{round_trip_check, syntax_gen, Caps, GenError, RoundTripOutcome};
use hc_core::typing::TypeEnv;

use crate::model::{load_model, CliModel, LoadedModel};
use crate::{Cli, Command, Format, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError {
            code: EXIT_FAIL,
            message: e.to_string(),
        }
    }
}

/// Worst result seen so far; failure outranks inconclusive.
#[derive(Default)]
struct Status {
    failed: bool,
    unknown: bool,
}

impl Status {
    fn code(&self) -> u8 {
        if self.failed {
            EXIT_FAIL
        } else if self.unknown {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        }
    }
}

struct Report<'w> {
    out: &'w mut dyn Write,
    format: Format,
}

impl Report<'_> {
    /// A text line, or a tab-separated record in `lines` mode.
    fn record(&mut self, text: &str, fields: &[&str]) -> io::Result<()> {
        match self.format {
            Format::Text => writeln!(self.out, "{text}"),
            Format::Lines => {
                let clean: Vec<String> = fields
                    .iter()
                    .map(|f| f.replace(['\t', '\n'], " "))
                    .collect();
                writeln!(self.out, "{}", clean.join("\t"))
            }
        }
    }

    /// Extra detail shown only in text mode.
    fn detail(&mut self, text: &str) -> io::Result<()> {
        match self.format {
            Format::Text => writeln!(self.out, "  {text}"),
            Format::Lines => Ok(()),
        }
    }
}

fn show_diag(d: &Diagnostic) -> String {
    let mut s = String::new();
    if let Some(r) = &d.rule {
        s.push_str(&format!("[{r}] "));
    }
    s.push_str(&d.message);
    s
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    for t in &cli.theory {
        load_theory(t).map_err(|e| CliError::usage(format!("theory `{t}`: {}", e.message)))?;
    }
    let caps = match &cli.caps {
        Some(c) => c.parse::<Caps>().map_err(CliError::usage)?,
        None => Caps::default(),
    };
    let model = cli
        .model
        .as_deref()
        .map(load_model)
        .transpose()
        .map_err(CliError::usage)?;
    let mut report = Report {
        out,
        format: cli.format,
    };

    match &cli.command {
        Command::Check { file }
        | Command::Norm { file }
        | Command::Eq { file }
        | Command::Interp { file } => {
            let text = read(file)?;
            let model = match (&cli.command, model) {
                (Command::Interp { .. }, None) => Some(default_model()),
                (_, m) => m,
            };
            match model {
                None => run_file::<FinRel>(cli, &mut report, &text, None),
                Some(LoadedModel::FinRel(m)) => run_file(cli, &mut report, &text, Some(&m)),
                Some(LoadedModel::Table { model, shape }) => {
                    if !shape.is_empty() {
                        return Err(CliError::usage(format!(
                            "ill-formed model: {}",
                            shape.join("; ")
                        )));
                    }
                    run_file(cli, &mut report, &text, Some(&model))
                }
            }
        }
        Command::Lint => {
            let lint = match model.unwrap_or_else(default_model) {
                LoadedModel::FinRel(m) => model_lint(&m),
                LoadedModel::Table { model, .. } => lint_table(&model),
            };
            print_lint(&mut report, &lint)?;
            Ok(if lint.passed() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Syntaxgen { output } => match model.unwrap_or_else(default_model) {
            LoadedModel::FinRel(m) => syntaxgen(&mut report, &m, &caps, output.as_deref()),
            LoadedModel::Table { model, .. } => {
                syntaxgen(&mut report, &model, &caps, output.as_deref())
            }
        },
        Command::Roundtrip => match model.unwrap_or_else(default_model) {
            LoadedModel::FinRel(m) => roundtrip(&mut report, &m, &caps),
            LoadedModel::Table { model, .. } => roundtrip(&mut report, &model, &caps),
        },
    }
}

fn default_model() -> LoadedModel {
    LoadedModel::FinRel(FinRel::new(2).expect("bundled cap"))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn run_file<S: CliModel>(
    cli: &Cli,
    report: &mut Report,
    text: &str,
    model: Option<&S>,
) -> Result<u8, CliError> {
    let theories: Vec<&str> = cli.theory.iter().map(String::as_str).collect();
    let (theory, commands) = match load_program(text, &theories, cli.cartesian_core) {
        Err(parse) => return Err(CliError::usage(format!("parse error: {parse}"))),
        Ok(Err(decl)) => {
            let line = decl.span.map(|s| s.line.to_string()).unwrap_or_default();
            report.record(
                &format!("declaration rejected: {decl}"),
                &["decl", &line, "error", &show_diag(&decl)],
            )?;
            return Ok(EXIT_FAIL);
        }
        Ok(Ok(loaded)) => loaded,
    };
    let env = TypeEnv::new(&theory, cli.cartesian_core);
    let finite = match model {
        Some(m) => {
            let interp = m.interpretation(&theory).map_err(|e| {
                CliError::usage(format!("model does not interpret the theory: {e}"))
            })?;
            Some((
                FiniteModel {
                    core: m.clone(),
                    faithful: m.faithful(),
                },
                interp,
            ))
        }
        None => None,
    };
    let semantics = finite
        .as_ref()
        .map(|(fm, interp)| Semantics::new(fm, interp, &env));
    let cfg = NormConfig {
        max_steps: cli.max_steps,
    };
    let mut status = Status::default();

    for cmd in &commands {
        let line = cmd.span.line.to_string();
        let kind = match &cmd.kind {
            Ok(k) => k,
            Err(d) => {
                report.record(
                    &format!("line {line}: error {}", show_diag(d)),
                    &["command", &line, "error", &show_diag(d)],
                )?;
                status.failed = true;
                continue;
            }
        };
        match &cli.command {
            Command::Check { .. } => check(report, &env, kind, &line, &mut status)?,
            Command::Norm { .. } => norm(report, &env, kind, &line, &cfg, cli.trace, &mut status)?,
            Command::Eq { .. } => {
                let oracle = semantics.as_ref().map(|s| s as &dyn Oracle);
                eq(report, &env, kind, &line, &cfg, oracle, &mut status)?
            }
            Command::Interp { .. } => {
                let sem = semantics.as_ref().expect("interp always has a model");
                interp(report, &env, sem, kind, &line, &mut status)?
            }
            _ => unreachable!("file commands only"),
        }
    }
    Ok(status.code())
}

fn typed(env: &TypeEnv, kind: &CommandKind) -> Result<Type, Diagnostic> {
    match kind {
        CommandKind::Check {
            ctx,
            term,
            expected,
        } => env.check_term(ctx, term, expected.as_ref()),
        CommandKind::Norm { ctx, term } => env.check_term(ctx, term, None),
        CommandKind::Eq {
            ctx,
            lhs,
            rhs,
            expected,
        } => {
            let ty = env.check_term(ctx, lhs, expected.as_ref())?;
            env.check_term(ctx, rhs, Some(&ty))
        }
    }
}

fn type_error(
    report: &mut Report,
    cmd: &str,
    line: &str,
    d: &Diagnostic,
    status: &mut Status,
) -> io::Result<()> {
    status.failed = true;
    report.record(
        &format!("line {line}: type error {}", show_diag(d)),
        &[cmd, line, "error", &show_diag(d)],
    )
}

fn check(
    report: &mut Report,
    env: &TypeEnv,
    kind: &CommandKind,
    line: &str,
    status: &mut Status,
) -> io::Result<()> {
    match typed(env, kind) {
        Ok(ty) => report.record(
            &format!("line {line}: {ty}"),
            &["check", line, "ok", &ty.to_string()],
        ),
        Err(d) => type_error(report, "check", line, &d, status),
    }
}

fn subject(kind: &CommandKind) -> Option<(&MixedContext, &Term)> {
    match kind {
        CommandKind::Check { ctx, term, .. } | CommandKind::Norm { ctx, term } => Some((ctx, term)),
        CommandKind::Eq { .. } => None,
    }
}

fn norm(
    report: &mut Report,
    env: &TypeEnv,
    kind: &CommandKind,
    line: &str,
    cfg: &NormConfig,
    trace: bool,
    status: &mut Status,
) -> io::Result<()> {
    let Some((ctx, term)) = subject(kind) else {
        return Ok(());
    };
    if let Err(d) = typed(env, kind) {
        return type_error(report, "norm", line, &d, status);
    }
    let (steps, result) = match normalize(env, ctx, term, cfg) {
        Ok(n) => (n.steps, Ok(n.term)),
        Err(e) => (e.steps.clone(), Err(e)),
    };
    if trace {
        for s in &steps {
            report.record(
                &s.to_string(),
                &[
                    "step",
                    line,
                    s.rule,
                    &print_term(&s.before),
                    &print_term(&s.after),
                ],
            )?;
        }
    }
    match result {
        Ok(t) => {
            let nf = print_term(&t);
            report.record(
                &format!("line {line}: {nf}"),
                &["norm", line, "ok", &steps.len().to_string(), &nf],
            )
        }
        Err(e) => {
            status.unknown = true;
            let partial = print_term(&e.partial);
            report.record(
                &format!("line {line}: {e}; reached {partial}"),
                &["norm", line, "budget", &e.max_steps.to_string(), &partial],
            )
        }
    }
}

fn eq(
    report: &mut Report,
    env: &TypeEnv,
    kind: &CommandKind,
    line: &str,
    cfg: &NormConfig,
    oracle: Option<&dyn Oracle>,
    status: &mut Status,
) -> io::Result<()> {
    let CommandKind::Eq { ctx, lhs, rhs, .. } = kind else {
        return Ok(());
    };
    let ty = match typed(env, kind) {
        Ok(ty) => ty,
        Err(d) => return type_error(report, "eq", line, &d, status),
    };
    let v = decide_eq(env, ctx, lhs, rhs, &ty, oracle, cfg);
    match v.outcome {
        Outcome::Equal => {}
        Outcome::Unequal => status.failed = true,
        Outcome::Unknown => status.unknown = true,
    }
    let witness = v.witness.clone().unwrap_or_default();
    let note = v.note.clone().unwrap_or_default();
    report.record(
        &format!("line {line}: {v}"),
        &[
            "eq",
            line,
            &v.outcome.to_string(),
            &v.method.to_string(),
            &witness,
            &note,
        ],
    )?;
    if let Some((a, b)) = &v.normal_forms {
        report.detail(&format!("left  ~> {}", print_term(a)))?;
        report.detail(&format!("right ~> {}", print_term(b)))?;
    }
    Ok(())
}

fn interp<S: CliModel>(
    report: &mut Report,
    env: &TypeEnv,
    sem: &Semantics<'_, '_, S>,
    kind: &CommandKind,
    line: &str,
    status: &mut Status,
) -> io::Result<()> {
    let Some((ctx, term)) = subject(kind) else {
        return Ok(());
    };
    let ty = match typed(env, kind) {
        Ok(ty) => ty,
        Err(d) => return type_error(report, "interp", line, &d, status),
    };
    let rows: Result<Vec<(String, String)>, _> = match (term, &ty) {
        (Term::Host(t), Type::Host(hty)) => sem.interpret_host(&ctx.host, t).map(|rows| {
            rows.into_iter()
                .map(|(point, v)| (sem.show_point(&ctx.host, &point), sem.show(hty, &v)))
                .collect()
        }),
        (Term::Core(f), _) => sem.interpret_core(ctx, f).map(|rows| {
            rows.into_iter()
                .map(|(point, a)| {
                    (
                        sem.show_point(&ctx.host, &point),
                        sem.model.mor_label(&a.dom, &a.cod, &a.mor),
                    )
                })
                .collect()
        }),
        _ => unreachable!("terms check at their own level"),
    };
    match rows {
        Ok(rows) => {
            report.record(
                &format!("line {line}: {ty}"),
                &["interp", line, "type", &ty.to_string()],
            )?;
            for (point, value) in rows {
                let shown = if point.is_empty() {
                    value.clone()
                } else {
                    format!("{point}: {value}")
                };
                report.record(
                    &format!("  {shown}"),
                    &["interp", line, "row", &point, &value],
                )?;
            }
            Ok(())
        }
        Err(e) => {
            status.unknown = true;
            report.record(
                &format!("line {line}: cannot interpret: {e}"),
                &["interp", line, "unsupported", &e.to_string()],
            )
        }
    }
}

fn print_lint(report: &mut Report, lint: &LintReport) -> io::Result<()> {
    match report.format {
        Format::Text => write!(report.out, "{lint}"),
        Format::Lines => {
            for r in &lint.results {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                report.record(
                    "",
                    &[
                        "lint",
                        r.check,
                        verdict,
                        &r.cases.to_string(),
                        r.counterexample.as_deref().unwrap_or(""),
                    ],
                )?;
            }
            Ok(())
        }
    }
}

fn gen_error(e: GenError) -> Result<u8, CliError> {
    let code = match e {
        GenError::NotLinted(_) => EXIT_FAIL,
        GenError::CapExceeded { .. } => EXIT_INCONCLUSIVE,
    };
    Err(CliError {
        code,
        message: e.to_string(),
    })
}

fn syntaxgen<S: CliModel>(
    report: &mut Report,
    model: &S,
    caps: &Caps,
    output: Option<&Path>,
) -> Result<u8, CliError> {
    let generated = match syntax_gen(model, caps) {
        Ok(g) => g,
        Err(e) => return gen_error(e),
    };
    let source = generated.to_source();
    match output {
        Some(path) => {
            std::fs::write(path, &source)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            let n = generated.theory.core_consts.len() + generated.theory.host_consts.len();
            report.record(
                &format!(
                    "wrote {} ({} constants, {} equalities)",
                    path.display(),
                    n,
                    generated.equalities().len()
                ),
                &[
                    "syntaxgen",
                    &path.display().to_string(),
                    &n.to_string(),
                    &generated.equalities().len().to_string(),
                ],
            )?;
        }
        None => write!(report.out, "{source}")?,
    }
    Ok(EXIT_OK)
}

fn roundtrip<S: CliModel>(report: &mut Report, model: &S, caps: &Caps) -> Result<u8, CliError> {
    let r = match round_trip_check(model, caps) {
        Ok(r) => r,
        Err(e) => return gen_error(e),
    };
    match report.format {
        Format::Text => writeln!(report.out, "{r}")?,
        Format::Lines => {
            for h in &r.homs {
                let mark = if h.bijective { "ok" } else { "mismatch" };
                report.record(
                    "",
                    &[
                        "hom",
                        &h.dom,
                        &h.cod,
                        &h.model.to_string(),
                        &h.syntactic.to_string(),
                        mark,
                    ],
                )?;
            }
            for m in &r.composition_mismatches {
                report.record("", &["composition", m])?;
            }
            let verdict = format!("{:?}", r.outcome).to_lowercase();
            report.record("", &["roundtrip", &verdict, &r.unknown.to_string()])?;
        }
    }
    Ok(match r.outcome {
        RoundTripOutcome::Holds => EXIT_OK,
        RoundTripOutcome::Fails => EXIT_FAIL,
        RoundTripOutcome::Inconclusive => EXIT_INCONCLUSIVE,
    })
}
