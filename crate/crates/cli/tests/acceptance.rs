//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its criterion and then
//! asserts it. Runtimes are part of the criteria, so the tests take a shared lock and
//! time themselves one at a time.
//!
//! Run with `cargo test -p isodiff-cli --test acceptance`.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use isodiff_cli::commands::{
    cmd_check, cmd_complete, cmd_verify, CompleteArgs, ReportFormat, EXIT_NO_COMPLETION, EXIT_OK,
};
use isodiff_cli::system_file::{parse_system, write_system};
use isodiff_core::arith::{rat, Monomial, Poly, RatFunc, Var};
use isodiff_core::completion::{
    complete, e_compatibility_failures, transport_map, CompletionOptions, Mode, StepMode,
};
use isodiff_core::field::{FieldContext, OpKind, OpRef, OperatorSpec, Role};
use isodiff_core::gauge::{generate, GaugeOptions};
use isodiff_core::integrability::{check_all, check_base, check_parameter, ConditionId, SystemSpec};
use isodiff_core::matrix::Mat;
use isodiff_core::parse::{format_expr, parse_expr};
use isodiff_core::solver::{coords_in_basis, ZSystem};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

static SERIAL: Mutex<()> = Mutex::new(());

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn hyper() -> SystemSpec {
    parse_system(&fixture("hypergeometric.dds")).unwrap().spec
}

fn e(ctx: &FieldContext, s: &str) -> RatFunc {
    parse_expr(s, ctx).unwrap()
}

/// Prints the verdict line, then fails the test if the criterion failed.
fn verdict(id: u32, what: &str, ok: Result<(), String>, elapsed: Duration, limit: Duration) {
    let ok = ok.and_then(|()| {
        if elapsed <= limit {
            Ok(())
        } else {
            Err(format!("took {elapsed:.2?}, limit {limit:?}"))
        }
    });
    let line = match &ok {
        Ok(()) => format!("PASS criterion {id}: {what} ({elapsed:.2?})\n"),
        Err(why) => format!("FAIL criterion {id}: {what} ({elapsed:.2?}): {why}\n"),
    };
    // Written past the test harness capture so the verdicts show in every run.
    let _ = std::io::stdout().write_all(line.as_bytes());
    if let Err(why) = ok {
        panic!("criterion {id} failed: {why}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run<F: FnOnce() -> Result<(), String>>(id: u32, what: &str, limit_secs: u64, f: F) {
    let _guard = SERIAL.lock().unwrap_or_else(|p| p.into_inner());
    let start = Instant::now();
    let ok = f();
    verdict(id, what, ok, start.elapsed(), Duration::from_secs(limit_secs));
}

#[test]
fn criterion_1_sigma_phi_condition_holds_for_all_three() {
    run(1, "sigma-phi condition passes for all three parameter matrices", 5, || {
        let spec = hyper();
        let report = check_parameter(&spec, &spec.c).map_err(|e| e.to_string())?;
        let phq = spec.ctx.op_by_name("phq").unwrap();
        for name in ["sa", "sb", "sc"] {
            let s = spec.ctx.op_by_name(name).unwrap();
            let r = report
                .find(ConditionId::SigmaPhi, s, phq)
                .ok_or_else(|| format!("no sigma-phi result for {name}"))?;
            ensure(r.passed, || format!("sigma-phi fails for {name}"))?;
        }
        Ok(())
    });
}

#[test]
fn criterion_2_sigma_sigma_holds_only_for_first_pair() {
    run(2, "sigma-sigma passes for (sa, sb) and fails for pairs with sc", 5, || {
        let spec = hyper();
        let report = check_parameter(&spec, &spec.c).map_err(|e| e.to_string())?;
        let op = |n| spec.ctx.op_by_name(n).unwrap();
        let expect = [("sa", "sb", true), ("sa", "sc", false), ("sb", "sc", false)];
        for (i, j, want) in expect {
            let r = report
                .find(ConditionId::SigmaSigma, op(i), op(j))
                .ok_or_else(|| format!("no sigma-sigma result for ({i}, {j})"))?;
            ensure(r.passed == want, || format!("({i}, {j}) passed = {}, expected {want}", r.passed))?;
        }
        ensure(report.of(ConditionId::SigmaSigma).count() == 3, || "expected three pairs".into())
    });
}

#[test]
fn criterion_3_completion_end_to_end() {
    run(3, "complete: shortcut then ground with d = 1; completed and printed D3 both verify", 60, || {
        let src = fixture("hypergeometric.dds");
        let out = cmd_complete(&src, &CompleteArgs::default(), ReportFormat::Json);
        ensure(out.outcome.code == EXIT_OK, || format!("exit {}: {}", out.outcome.code, out.outcome.stderr))?;
        let json: Value = serde_json::from_str(&out.outcome.stdout).map_err(|e| e.to_string())?;
        ensure(json["status"] == "completed", || format!("status {}", json["status"]))?;
        let steps = json["steps"].as_array().ok_or("no steps")?;
        ensure(steps.len() == 2, || format!("{} steps", steps.len()))?;
        ensure(steps[0]["sigma"] == "sb" && steps[0]["mode"] == "shortcut", || {
            format!("step 2 was {}", steps[0]["mode"])
        })?;
        ensure(steps[1]["sigma"] == "sc" && steps[1]["mode"] == "ground", || {
            format!("step 3 was {}", steps[1]["mode"])
        })?;
        ensure(steps[1]["dimension"] == 1, || format!("dimension {}", steps[1]["dimension"]))?;
        ensure(json["verification"]["verdict"] == "isomonodromic", || "completed system rejected".into())?;

        let completed = out.system.ok_or("no completed system")?;
        let v = cmd_verify(&completed, ReportFormat::Text);
        ensure(v.code == EXIT_OK, || format!("verify of completed system: {}", v.stdout))?;

        let printed = cmd_check(&fixture("hypergeometric_d3.dds"), ReportFormat::Json);
        ensure(printed.code == EXIT_OK, || format!("printed D3 rejected: {}", printed.stdout))?;
        let pj: Value = serde_json::from_str(&printed.stdout).map_err(|e| e.to_string())?;
        ensure(pj["verdict"] == "isomonodromic", || format!("printed D3 verdict {}", pj["verdict"]))?;

        // The completed D3 differs from the printed one by a constant in q only.
        let done = parse_system(&completed).map_err(|e| e.to_string())?.spec;
        let printed_d3 = parse_system(&fixture("hypergeometric_d3.dds")).map_err(|e| e.to_string())?.spec;
        let ratio = done.c[2].get(0, 1).div(printed_d3.c[2].get(0, 1)).map_err(|e| e.to_string())?;
        let q = done.ctx.resolve("q").unwrap();
        ensure(ratio.vars().iter().all(|&v| v == q), || {
            format!("D3 ratio {} is not a function of q", format_expr(&ratio, &done.ctx))
        })?;
        ensure(
            done.c[2] == printed_d3.c[2].scale(&ratio),
            || "D3 is not a scalar multiple of the printed D3".into(),
        )?;

        // Same path through the binary.
        let dir = std::env::temp_dir().join(format!("isodiff-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let input = dir.join("hyper.dds");
        let output = dir.join("completed.dds");
        std::fs::write(&input, &src).map_err(|e| e.to_string())?;
        let status = Command::new(env!("CARGO_BIN_EXE_isodiff"))
            .args(["complete", input.to_str().unwrap(), "-o", output.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.code() == Some(EXIT_OK), || format!("binary complete: {:?}", status.status))?;
        let check = Command::new(env!("CARGO_BIN_EXE_isodiff"))
            .args(["verify", output.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        let _ = std::fs::remove_dir_all(&dir);
        ensure(check.status.code() == Some(EXIT_OK), || {
            format!("binary verify: {}", String::from_utf8_lossy(&check.stdout))
        })
    });
}

#[test]
fn criterion_4_ground_solution_recurrences() {
    run(4, "step-3 scalar solves sa(y)/y = (a-c)/(qa-c) and sb(y)/y = (b-c)/(qb-c)", 10, || {
        let spec = hyper();
        let res = complete(&spec, &CompletionOptions::default()).map_err(|e| e.to_string())?;
        let step = res.steps.last().ok_or("no steps")?;
        ensure(step.mode == StepMode::Ground, || format!("step 3 mode {:?}", step.mode))?;
        let ctx = &res.ctx;
        // Z = y I; y is its coordinate relative to the identity.
        let y = step.z.get(0, 0).clone();
        ensure(step.z == Mat::scalar(2, &y), || "Z is not scalar".into())?;
        for (op, ratio) in [("sa", "(a-c)/(q*a-c)"), ("sb", "(b-c)/(q*b-c)")] {
            let id = ctx.op_by_name(op).unwrap();
            let shifted = ctx.apply(id.into(), &y).map_err(|e| e.to_string())?;
            let got = shifted.div(&y).map_err(|e| e.to_string())?;
            ensure(got == e(ctx, ratio), || {
                format!("{op}(y)/y = {}", format_expr(&got, ctx))
            })?;
        }
        let q = ctx.resolve("q").unwrap();
        let quotient = y.div(&e(ctx, "1/((a-c)*(b-c))")).map_err(|e| e.to_string())?;
        ensure(quotient.vars().iter().all(|&v| v == q), || {
            format!("y / (1/((a-c)(b-c))) = {}", format_expr(&quotient, ctx))
        })
    });
}

/// Operator layouts for the gauge suites; each mixes roles and, through the seed,
/// shift, q-dilation, derivation and Euler operators.
fn layouts() -> Vec<Vec<(String, Role)>> {
    let v = |items: &[(&str, Role)]| items.iter().map(|(n, r)| (n.to_string(), *r)).collect();
    vec![
        v(&[("x", Role::Phi), ("t", Role::Delta), ("a", Role::Sigma), ("b", Role::Sigma)]),
        v(&[("x", Role::Phi), ("a", Role::Sigma), ("b", Role::Sigma), ("c", Role::Sigma)]),
        v(&[("x", Role::Phi), ("y", Role::Phi), ("a", Role::Sigma)]),
        v(&[("x", Role::Phi), ("t", Role::Delta), ("s", Role::Delta), ("a", Role::Sigma), ("b", Role::Sigma)]),
    ]
}

fn gauge_options(index: u64) -> GaugeOptions {
    let layouts = layouts();
    GaugeOptions {
        n: 1 + (index % 3) as usize,
        vars: layouts[(index / 3) as usize % layouts.len()].clone(),
        degree: 2,
        seed: 1000 + index,
    }
}

#[test]
fn criterion_5_gauge_systems_pass_and_complete_by_shortcut() {
    run(5, "60 gauge systems pass base and parameter checks and complete unchanged", 300, || {
        let mut kinds = [false; 4];
        for index in 0..60 {
            let opts = gauge_options(index);
            let g = generate(&opts).map_err(|e| e.to_string())?;
            let spec = &g.spec;
            for op in spec.ctx.operators() {
                let slot = match op.kind {
                    OpKind::Shift { .. } => 0,
                    OpKind::QDilate { .. } => 1,
                    OpKind::Derivation { .. } => 2,
                    OpKind::Euler { .. } => 3,
                };
                kinds[slot] = true;
            }
            let tag = || format!("seed {} n {}", opts.seed, opts.n);
            let base = check_base(spec).map_err(|e| e.to_string())?;
            ensure(base.all_passed(), || format!("base fails for {}", tag()))?;
            let par = check_parameter(spec, &spec.c).map_err(|e| e.to_string())?;
            ensure(par.all_passed(), || format!("parameter fails for {}", tag()))?;

            let src = write_system(spec, None);
            let out = cmd_complete(&src, &CompleteArgs::default(), ReportFormat::Json);
            ensure(out.outcome.code == EXIT_OK, || format!("complete exit {} for {}", out.outcome.code, tag()))?;
            let json: Value = serde_json::from_str(&out.outcome.stdout).map_err(|e| e.to_string())?;
            let steps = json["steps"].as_array().ok_or("no steps")?;
            ensure(steps.iter().all(|s| s["mode"] == "shortcut"), || format!("non-shortcut step for {}", tag()))?;
            let back = parse_system(&out.system.ok_or("no system")?).map_err(|e| e.to_string())?.spec;
            ensure(back.c == spec.c, || format!("matrices changed for {}", tag()))?;
        }
        ensure(kinds.iter().all(|&k| k), || format!("operator kinds covered: {kinds:?}"))
    });
}

/// A nonzero bump for mutation `t`: a constant or a multiple of one variable.
fn bump(ctx: &FieldContext, t: u64) -> RatFunc {
    let c = (t % 3) as i64 + 1;
    let vars = ctx.base_var_count() as u64;
    if t.is_multiple_of(2) {
        RatFunc::from_int(c)
    } else {
        let v = Var(((t / 2) % vars) as u32);
        RatFunc::var(v).scale(&rat(c))
    }
}

#[test]
fn criterion_6_mutations_are_detected() {
    run(6, "at least 95% of 60 single-entry mutations fail some condition", 300, || {
        let (mut tried, mut caught) = (0usize, 0usize);
        let mut missed = Vec::new();
        for t in 0..60u64 {
            let g = generate(&gauge_options(t)).map_err(|e| e.to_string())?;
            let mut spec = g.spec.clone();
            let n = spec.n;
            let groups = [spec.a.len(), spec.b.len(), spec.c.len()];
            let live: Vec<usize> = (0..3).filter(|&k| groups[k] > 0).collect();
            let group = live[(t as usize) % live.len()];
            let which = (t as usize / 3) % groups[group];
            let entry = (t as usize / 7) % (n * n);
            let delta = bump(&spec.ctx, t);
            if delta.is_zero() {
                continue;
            }
            let m = match group {
                0 => &mut spec.a[which],
                1 => &mut spec.b[which],
                _ => &mut spec.c[which],
            };
            let (r, c) = (entry / n, entry % n);
            let v = m.get(r, c).add(&delta);
            m.set(r, c, v);
            tried += 1;
            let report = check_all(&spec, &spec.c).map_err(|e| e.to_string())?;
            if report.all_passed() {
                missed.push(t);
            } else {
                caught += 1;
            }
        }
        ensure(tried >= 50, || format!("only {tried} mutations"))?;
        ensure(caught * 100 >= tried * 95, || {
            format!("{caught} of {tried} detected; missed {missed:?}")
        })?;
        let _ = std::io::stdout().write_all(format!("  {caught} of {tried} mutations detected\n").as_bytes());
        Ok(())
    });
}

#[test]
fn criterion_7_step_three_internal_consistency() {
    run(7, "step 3: H_i in V, transport maps preserve V, coordinate matrices compatible, det witness", 60, || {
        let spec = hyper();
        let res = complete(&spec, &CompletionOptions::default()).map_err(|e| e.to_string())?;
        let ctx = &res.ctx;
        let step = res.steps.last().ok_or("no steps")?;
        let k = step.k;
        let sys = ZSystem::new(&spec, k).map_err(|e| e.to_string())?;
        for (t, b) in step.basis.iter().enumerate() {
            ensure(sys.is_solution(ctx, b).map_err(|e| e.to_string())?, || {
                format!("basis element {} does not solve the transport system", t + 1)
            })?;
        }
        for (i, h) in step.h.iter().enumerate() {
            ensure(coords_in_basis(ctx, h, &step.basis).is_some(), || format!("H_{} not in V", i + 1))?;
            for (t, b) in step.basis.iter().enumerate() {
                let image = transport_map(ctx, &res.d[i], h, i, k, b).map_err(|e| e.to_string())?;
                ensure(coords_in_basis(ctx, &image, &step.basis).is_some(), || {
                    format!("M_{} sends basis element {} outside V", i + 1, t + 1)
                })?;
            }
        }
        let bad = e_compatibility_failures(ctx, &step.e).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || format!("incompatible coordinate matrices {bad:?}"))?;

        let opts = CompletionOptions { mode: Mode::Symbolic, ..Default::default() };
        let sym = complete(&spec, &opts).map_err(|e| e.to_string())?;
        let s = sym.steps.last().ok_or("no steps")?;
        ensure(s.mode == StepMode::Symbolic, || format!("symbolic mode gave {:?}", s.mode))?;
        let witness = s.det_witness.clone().ok_or("no det witness")?;
        let det_h1 = s.h[0].det().map_err(|e| e.to_string())?;
        ensure(witness == det_h1, || "det witness differs from det H_1".into())?;
        ensure(!det_h1.is_zero(), || "det H_1 is zero".into())?;
        ensure(sym.report.all_passed(), || "symbolic completion does not verify".into())
    });
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..=5), 0..4).prop_map(|terms| {
        Poly::from_terms(
            terms
                .into_iter()
                .map(|(e, c)| (Monomial::from_exponents(e), rat(c))),
        )
    })
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(), poly().prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn prop_ctx() -> FieldContext {
    let vars = ["x", "y", "q"].map(String::from).to_vec();
    FieldContext::new(
        vars,
        vec![
            OperatorSpec::new("s", Role::Phi, OpKind::Shift { var: Var(0), step: rat(1) }),
            OperatorSpec::new("p", Role::Sigma, OpKind::QDilate { var: Var(1), factor: Var(2) }),
            OperatorSpec::new("d", Role::Delta, OpKind::Derivation { var: Var(0) }),
            OperatorSpec::new("t", Role::Delta, OpKind::Euler { var: Var(1) }),
        ],
    )
    .unwrap()
}

#[test]
fn criterion_8_property_suites() {
    const CASES: u32 = 1000;
    run(8, "field axioms, Leibniz, homomorphism, inverse operators, round-trip; 1000 cases each", 120, || {
        let ctx = prop_ctx();
        let runner = || TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
        let triple = (ratfunc(), ratfunc(), ratfunc());

        runner()
            .run(&triple, |(f, g, h)| {
                prop_assert_eq!(f.add(&g), g.add(&f));
                prop_assert_eq!(f.mul(&g), g.mul(&f));
                prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
                prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
                prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
                prop_assert_eq!(f.add(&RatFunc::zero()), f.clone());
                prop_assert_eq!(f.mul(&RatFunc::one()), f.clone());
                prop_assert!(f.add(&f.neg()).is_zero());
                if !f.is_zero() {
                    prop_assert!(f.mul(&f.inv().unwrap()).is_one());
                }
                Ok(())
            })
            .map_err(|e| format!("field axioms: {e}"))?;

        runner()
            .run(&(ratfunc(), ratfunc()), |(f, g)| {
                for name in ["d", "t"] {
                    let op: OpRef = ctx.op_by_name(name).unwrap().into();
                    let lhs = ctx.apply(op, &f.mul(&g)).unwrap();
                    let rhs = ctx.apply(op, &f).unwrap().mul(&g).add(&f.mul(&ctx.apply(op, &g).unwrap()));
                    prop_assert_eq!(lhs, rhs);
                    let sum = ctx.apply(op, &f.add(&g)).unwrap();
                    prop_assert_eq!(sum, ctx.apply(op, &f).unwrap().add(&ctx.apply(op, &g).unwrap()));
                }
                Ok(())
            })
            .map_err(|e| format!("Leibniz: {e}"))?;

        runner()
            .run(&(ratfunc(), ratfunc()), |(f, g)| {
                for name in ["s", "p"] {
                    let op: OpRef = ctx.op_by_name(name).unwrap().into();
                    let ap = |h: &RatFunc| ctx.apply(op, h).unwrap();
                    prop_assert_eq!(ap(&f.mul(&g)), ap(&f).mul(&ap(&g)));
                    prop_assert_eq!(ap(&f.add(&g)), ap(&f).add(&ap(&g)));
                    prop_assert!(ap(&RatFunc::one()).is_one());
                }
                Ok(())
            })
            .map_err(|e| format!("homomorphism: {e}"))?;

        runner()
            .run(&ratfunc(), |f| {
                for name in ["s", "p"] {
                    let id = ctx.op_by_name(name).unwrap();
                    let there = ctx.apply(OpRef::forward(id), &f).unwrap();
                    prop_assert_eq!(ctx.apply(OpRef::inverse(id), &there).unwrap(), f.clone());
                    let back = ctx.apply(OpRef::inverse(id), &f).unwrap();
                    prop_assert_eq!(ctx.apply(OpRef::forward(id), &back).unwrap(), f.clone());
                }
                Ok(())
            })
            .map_err(|e| format!("inverse operators: {e}"))?;

        runner()
            .run(&ratfunc(), |f| {
                let text = format_expr(&f, &ctx);
                prop_assert_eq!(parse_expr(&text, &ctx).unwrap(), f);
                Ok(())
            })
            .map_err(|e| format!("round-trip: {e}"))?;
        Ok(())
    });
}

#[test]
fn permuted_parameter_order_still_completes() {
    // Declaring sc first changes which pairs need work; the result must still verify.
    let src = fixture("hypergeometric.dds");
    let mut lines: Vec<&str> = src.lines().collect();
    let sc = lines.iter().position(|l| l.starts_with("operator sc")).unwrap();
    let sa = lines.iter().position(|l| l.starts_with("operator sa")).unwrap();
    let moved = lines.remove(sc);
    lines.insert(sa, moved);
    let permuted = lines.join("\n");
    let out = cmd_complete(&permuted, &CompleteArgs::default(), ReportFormat::Json);
    assert_eq!(out.outcome.code, EXIT_OK, "{}", out.outcome.stdout);
    let json: Value = serde_json::from_str(&out.outcome.stdout).unwrap();
    assert_eq!(json["order"], serde_json::json!(["sc", "sa", "sb"]));
    assert_eq!(cmd_verify(&out.system.unwrap(), ReportFormat::Text).code, EXIT_OK);
}

#[test]
fn zero_numerator_degree_reports_no_completion() {
    let args = CompleteArgs {
        numerator_degree: Some(0),
        mode: Mode::Symbolic,
        ..Default::default()
    };
    let out = cmd_complete(&fixture("hypergeometric.dds"), &args, ReportFormat::Json);
    assert_eq!(out.outcome.code, EXIT_NO_COMPLETION);
    let json: Value = serde_json::from_str(&out.outcome.stdout).unwrap();
    assert_eq!(json["status"], "no-completion");
    assert!(!json["tried"].as_array().unwrap().is_empty());
    assert!(out.system.is_none());
}

#[test]
fn text_and_json_reports_state_the_same_facts() {
    let src = fixture("hypergeometric.dds");
    let text = cmd_check(&src, ReportFormat::Text);
    let json = cmd_check(&src, ReportFormat::Json);
    assert_eq!(text.code, json.code);
    let v: Value = serde_json::from_str(&json.stdout).unwrap();
    let first = text.stdout.lines().next().unwrap();
    assert_eq!(
        first,
        format!("verdict: {} ({} passed, {} failed)", v["verdict"].as_str().unwrap(), v["passed"], v["failed"])
    );
    let lines: Vec<&str> = text.stdout.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    let conds = v["conditions"].as_array().unwrap();
    assert_eq!(lines.len(), conds.len());
    for (line, c) in lines.iter().zip(conds) {
        let word = if c["passed"].as_bool().unwrap() { "PASS" } else { "FAIL" };
        let head = format!(
            "{word} {} ({}, {})",
            c["condition"].as_str().unwrap(),
            c["i"].as_str().unwrap(),
            c["j"].as_str().unwrap()
        );
        assert!(line.starts_with(&head), "{line} vs {head}");
    }
}
