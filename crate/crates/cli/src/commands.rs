//! The CLI verbs as plain functions returning an exit code and the text to print.

use isodiff_core::completion::{
    complete, e_compatibility_failures, CompletionError, CompletionOptions, Mode,
};
use isodiff_core::field::{FieldContext, Role};
use isodiff_core::gauge::{generate, GaugeOptions};
use isodiff_core::integrability::{check_all, check_base, check_parameter, ConditionReport};
use isodiff_core::parse::parse_expr;

use crate::report::{CheckReport, CompleteReport, FamilyLine};
use crate::system_file::{parse_system, write_system, SystemFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONDITION_FAILURE: i32 = 1;
pub const EXIT_NO_COMPLETION: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn render<T: serde::Serialize>(value: &T, fmt: ReportFormat, text: impl FnOnce(&mut String)) -> String {
    match fmt {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut s = String::new();
            text(&mut s);
            s
        }
    }
}

fn load(src: &str) -> Result<SystemFile, Outcome> {
    parse_system(src).map_err(Outcome::input_error)
}

fn family_lines(ctx: &FieldContext) -> Result<Vec<FamilyLine>, Outcome> {
    let sigma: Vec<String> = ctx.sigma().iter().map(|&id| ctx.op(id).name.clone()).collect();
    let mut out = Vec::new();
    for fam in ctx.families() {
        let bad = e_compatibility_failures(ctx, &fam.e).map_err(Outcome::input_error)?;
        let label = fam.names.join(" ");
        for u in 0..fam.e.len() {
            for v in u + 1..fam.e.len() {
                out.push(FamilyLine {
                    family: label.clone(),
                    u: sigma[u].clone(),
                    v: sigma[v].clone(),
                    passed: !bad.contains(&(u, v)),
                });
            }
        }
    }
    Ok(out)
}

fn conditions(file: &SystemFile) -> Result<ConditionReport, Outcome> {
    let spec = &file.spec;
    let mut report = check_base(spec).map_err(Outcome::input_error)?;
    if !spec.c.is_empty() {
        report.extend(check_parameter(spec, &spec.c).map_err(Outcome::input_error)?);
    }
    Ok(report)
}

fn finish_check(report: CheckReport, fmt: ReportFormat) -> Outcome {
    let code = if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_CONDITION_FAILURE
    };
    Outcome {
        code,
        stdout: render(&report, fmt, |s| report.render_text(s)),
        stderr: String::new(),
    }
}

/// Base conditions, plus parameter conditions when `C` blocks are present.
pub fn cmd_check(src: &str, fmt: ReportFormat) -> Outcome {
    let file = match load(src) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let report = match conditions(&file) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let ctx = &file.spec.ctx;
    finish_check(CheckReport::new(ctx, &report, !file.spec.c.is_empty(), Vec::new()), fmt)
}

/// Full verdict of a system with parameter matrices, including the compatibility of
/// every declared family of adjoined indeterminates.
pub fn cmd_verify(src: &str, fmt: ReportFormat) -> Outcome {
    let file = match load(src) {
        Ok(f) => f,
        Err(o) => return o,
    };
    if file.spec.c.is_empty() {
        return Outcome::input_error("verify needs `C` blocks for every sigma operator");
    }
    let report = match conditions(&file) {
        Ok(r) => r,
        Err(o) => return o,
    };
    let families = match family_lines(&file.spec.ctx) {
        Ok(f) => f,
        Err(o) => return o,
    };
    finish_check(CheckReport::new(&file.spec.ctx, &report, true, families), fmt)
}

#[derive(Debug, Clone, Default)]
pub struct CompleteArgs {
    pub numerator_degree: Option<u32>,
    pub denominator: Option<String>,
    pub shift_bound: Option<u32>,
    pub mode: Mode,
    pub ground_degree: Option<u32>,
}

pub struct CompleteOutcome {
    pub outcome: Outcome,
    /// The completed system file, when completion succeeded.
    pub system: Option<String>,
}

pub fn cmd_complete(src: &str, args: &CompleteArgs, fmt: ReportFormat) -> CompleteOutcome {
    let fail = |outcome| CompleteOutcome { outcome, system: None };
    let file = match load(src) {
        Ok(f) => f,
        Err(o) => return fail(o),
    };
    let spec = &file.spec;
    let ctx = &spec.ctx;
    if spec.c.is_empty() {
        return fail(Outcome::input_error("complete needs `C` blocks for every sigma operator"));
    }
    let mut opts = CompletionOptions {
        numerator_degree: args.numerator_degree,
        mode: args.mode,
        ..Default::default()
    };
    if let Some(b) = args.shift_bound {
        opts.shift_bound = b;
    }
    if let Some(g) = args.ground_degree {
        opts.ground_degree = g;
    }
    if let Some(den) = &args.denominator {
        let f = match parse_expr(den, ctx) {
            Ok(f) => f,
            Err(e) => return fail(Outcome::input_error(format!("--den: {e}"))),
        };
        if !f.is_polynomial() || f.is_zero() {
            return fail(Outcome::input_error("--den must be a nonzero polynomial"));
        }
        opts.denominator = Some(f.num().clone());
    }
    let order: Vec<String> = ctx.sigma().iter().map(|&id| ctx.op(id).name.clone()).collect();

    let (code, report) = match complete(spec, &opts) {
        Ok(res) => {
            let completed = res.spec(spec);
            let system = write_system(&completed, Some("completed parameter matrices"));
            let families = match family_lines(&res.ctx) {
                Ok(f) => f,
                Err(o) => return fail(o),
            };
            let verification = CheckReport::new(&res.ctx, &res.report, true, families);
            let code = if verification.all_passed() {
                EXIT_OK
            } else {
                EXIT_CONDITION_FAILURE
            };
            (code, CompleteReport::completed(&res, verification, system))
        }
        Err(CompletionError::NoCompletion { sigma, tried }) => {
            let mut r = CompleteReport::failure(
                "no-completion",
                order,
                format!("no completion found with the given ansatz at parameter {sigma}"),
            );
            r.tried = tried;
            (EXIT_NO_COMPLETION, r)
        }
        Err(CompletionError::Precondition(hyp)) => {
            let mut r = CompleteReport::failure(
                "precondition-failed",
                order,
                "the system does not satisfy the hypotheses of completion".into(),
            );
            r.verification = Some(CheckReport::new(ctx, &hyp, true, Vec::new()));
            (EXIT_CONDITION_FAILURE, r)
        }
        Err(CompletionError::Consistency(m)) => (
            EXIT_CONDITION_FAILURE,
            CompleteReport::failure("inconsistent", order, m),
        ),
        Err(e) => return fail(Outcome::input_error(e)),
    };
    let stdout = render(&report, fmt, |s| report.render_text(s));
    CompleteOutcome {
        outcome: Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        system: report.system.clone(),
    }
}

#[derive(Debug, Clone)]
pub struct GaugeArgs {
    pub n: usize,
    /// `name:role` pairs, comma-separated.
    pub vars: String,
    pub seed: u64,
    pub degree: u32,
}

pub fn parse_gauge_vars(s: &str) -> Result<Vec<(String, Role)>, String> {
    s.split(',')
        .map(|item| {
            let (name, role) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| format!("expected NAME:ROLE, got `{item}`"))?;
            let role = match role {
                "phi" => Role::Phi,
                "sigma" => Role::Sigma,
                "delta" => Role::Delta,
                other => return Err(format!("unknown role `{other}`")),
            };
            Ok((name.to_string(), role))
        })
        .collect()
}

pub fn cmd_gauge_gen(args: &GaugeArgs) -> Outcome {
    let vars = match parse_gauge_vars(&args.vars) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(e),
    };
    if args.n == 0 {
        return Outcome::input_error("--n must be at least 1");
    }
    let opts = GaugeOptions {
        n: args.n,
        vars,
        degree: args.degree,
        seed: args.seed,
    };
    match generate(&opts) {
        Ok(g) => Outcome {
            code: EXIT_OK,
            stdout: write_system(&g.spec, Some(&format!("gauge system, seed {}", args.seed))),
            stderr: String::new(),
        },
        Err(e) => Outcome::input_error(e),
    }
}

/// Full verdict of an already loaded system; used by tests.
pub fn verdict(file: &SystemFile) -> bool {
    !file.spec.c.is_empty()
        && check_all(&file.spec, &file.spec.c)
            .map(|r| r.all_passed())
            .unwrap_or(false)
}
