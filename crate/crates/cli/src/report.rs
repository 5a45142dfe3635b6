//! Report structures. Text and JSON are rendered from the same values, so both state
//! the same facts.

use std::fmt::Write as _;

use isodiff_core::completion::{CompletionResult, StepReport};
use isodiff_core::field::FieldContext;
use isodiff_core::integrability::ConditionReport;
use isodiff_core::matrix::Mat;
use isodiff_core::parse::format_expr;
use isodiff_core::solver::AnsatzSummary;
use serde::Serialize;

pub type Grid = Vec<Vec<String>>;

pub fn grid(ctx: &FieldContext, m: &Mat) -> Grid {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|f| format_expr(f, ctx)).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionLine {
    pub condition: &'static str,
    pub formula: &'static str,
    pub i: String,
    pub j: String,
    pub passed: bool,
    pub residual: Option<Grid>,
}

/// Compatibility of one adjoined family's actions.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyLine {
    pub family: String,
    pub u: String,
    pub v: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub verdict: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub conditions: Vec<ConditionLine>,
    pub families: Vec<FamilyLine>,
}

impl CheckReport {
    pub fn new(ctx: &FieldContext, report: &ConditionReport, with_parameters: bool, families: Vec<FamilyLine>) -> Self {
        let conditions: Vec<ConditionLine> = report
            .results
            .iter()
            .map(|r| ConditionLine {
                condition: r.condition.as_str(),
                formula: r.condition.formula(),
                i: ctx.op(r.i).name.clone(),
                j: ctx.op(r.j).name.clone(),
                passed: r.passed,
                residual: r.residual.as_ref().map(|m| grid(ctx, m)),
            })
            .collect();
        let failed = conditions.iter().filter(|c| !c.passed).count()
            + families.iter().filter(|f| !f.passed).count();
        let passed = conditions.len() + families.len() - failed;
        let verdict = match (with_parameters, failed == 0) {
            (true, true) => "isomonodromic",
            (true, false) => "not-isomonodromic",
            (false, true) => "base-integrable",
            (false, false) => "base-not-integrable",
        };
        CheckReport {
            verdict,
            passed,
            failed,
            conditions,
            families,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn render_text(&self, out: &mut String) {
        let _ = writeln!(out, "verdict: {} ({} passed, {} failed)", self.verdict, self.passed, self.failed);
        for c in &self.conditions {
            let _ = writeln!(
                out,
                "{} {} ({}, {}): {}",
                pass_word(c.passed),
                c.condition,
                c.i,
                c.j,
                c.formula
            );
            if let Some(r) = &c.residual {
                out.push_str("  residual:\n");
                render_grid(out, r, "    ");
            }
        }
        for f in &self.families {
            let _ = writeln!(
                out,
                "{} family-compatibility {} ({}, {})",
                pass_word(f.passed),
                f.family,
                f.u,
                f.v
            );
        }
    }
}

fn pass_word(p: bool) -> &'static str {
    if p {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_grid(out: &mut String, g: &Grid, indent: &str) {
    for row in g {
        let _ = writeln!(out, "{indent}[{}]", row.join(", "));
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedMatrix {
    pub op: String,
    pub matrix: Grid,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepLine {
    pub sigma: String,
    pub mode: &'static str,
    pub dimension: Option<usize>,
    pub ansatz: Option<AnsatzSummary>,
    pub h: Vec<NamedMatrix>,
    pub basis: Vec<Grid>,
    pub e: Vec<NamedMatrix>,
    pub coordinates: Vec<String>,
    pub z: Grid,
    pub adjoined: Vec<String>,
    pub det_witness: Option<String>,
}

impl StepLine {
    fn new(ctx: &FieldContext, sigma_names: &[String], s: &StepReport) -> Self {
        let named = |ms: &[Mat]| {
            ms.iter()
                .enumerate()
                .map(|(i, m)| NamedMatrix {
                    op: sigma_names[i].clone(),
                    matrix: grid(ctx, m),
                })
                .collect()
        };
        let shortcut = s.mode == isodiff_core::completion::StepMode::Shortcut;
        StepLine {
            sigma: s.sigma.clone(),
            mode: s.mode.as_str(),
            dimension: (!shortcut).then(|| s.dimension()),
            ansatz: s.ansatz.clone(),
            h: named(&s.h),
            basis: s.basis.iter().map(|m| grid(ctx, m)).collect(),
            e: named(&s.e),
            coordinates: s.y.iter().map(|f| format_expr(f, ctx)).collect(),
            z: grid(ctx, &s.z),
            adjoined: s.adjoined.clone(),
            det_witness: s.det_witness.as_ref().map(|f| format_expr(f, ctx)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionFamily {
    pub sigma: String,
    pub names: Vec<String>,
    pub actions: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompleteReport {
    /// `completed`, `no-completion` or `precondition-failed`.
    pub status: &'static str,
    pub order: Vec<String>,
    pub message: Option<String>,
    pub tried: Vec<AnsatzSummary>,
    pub steps: Vec<StepLine>,
    pub extension: Vec<ExtensionFamily>,
    pub d: Vec<NamedMatrix>,
    pub verification: Option<CheckReport>,
    pub system: Option<String>,
}

impl CompleteReport {
    pub fn failure(status: &'static str, order: Vec<String>, message: String) -> Self {
        CompleteReport {
            status,
            order,
            message: Some(message),
            tried: Vec::new(),
            steps: Vec::new(),
            extension: Vec::new(),
            d: Vec::new(),
            verification: None,
            system: None,
        }
    }

    pub fn completed(res: &CompletionResult, verification: CheckReport, system: String) -> Self {
        let ctx = &res.ctx;
        let order: Vec<String> = ctx.sigma().iter().map(|&id| ctx.op(id).name.clone()).collect();
        let extension = ctx
            .families()
            .into_iter()
            .map(|f| ExtensionFamily {
                sigma: order[f.step].clone(),
                names: f.names.clone(),
                actions: f
                    .e
                    .iter()
                    .enumerate()
                    .map(|(i, m)| NamedMatrix {
                        op: order[i].clone(),
                        matrix: grid(ctx, m),
                    })
                    .collect(),
            })
            .collect();
        CompleteReport {
            status: "completed",
            message: None,
            tried: Vec::new(),
            steps: res.steps.iter().map(|s| StepLine::new(ctx, &order, s)).collect(),
            extension,
            d: res
                .d
                .iter()
                .zip(&order)
                .map(|(m, op)| NamedMatrix {
                    op: op.clone(),
                    matrix: grid(ctx, m),
                })
                .collect(),
            order,
            verification: Some(verification),
            system: Some(system),
        }
    }

    pub fn render_text(&self, out: &mut String) {
        let _ = writeln!(out, "status: {}", self.status);
        let _ = writeln!(out, "parameter order: {}", self.order.join(", "));
        if let Some(m) = &self.message {
            let _ = writeln!(out, "message: {m}");
        }
        for t in &self.tried {
            let _ = writeln!(out, "tried ansatz: {}", ansatz_text(t));
        }
        for s in &self.steps {
            let _ = writeln!(out, "step {}: {}", s.sigma, s.mode);
            if let Some(d) = s.dimension {
                let _ = writeln!(out, "  dimension: {d}");
            }
            if let Some(a) = &s.ansatz {
                let _ = writeln!(out, "  ansatz: {}", ansatz_text(a));
            }
            for h in &s.h {
                let _ = writeln!(out, "  H for {}:", h.op);
                render_grid(out, &h.matrix, "    ");
            }
            for (t, b) in s.basis.iter().enumerate() {
                let _ = writeln!(out, "  basis {}:", t + 1);
                render_grid(out, b, "    ");
            }
            for e in &s.e {
                let _ = writeln!(out, "  E for {}:", e.op);
                render_grid(out, &e.matrix, "    ");
            }
            if !s.coordinates.is_empty() {
                let _ = writeln!(out, "  coordinates: [{}]", s.coordinates.join(", "));
            }
            out.push_str("  Z:\n");
            render_grid(out, &s.z, "    ");
            if !s.adjoined.is_empty() {
                let _ = writeln!(out, "  adjoined: {}", s.adjoined.join(", "));
            }
            if let Some(w) = &s.det_witness {
                let _ = writeln!(out, "  det Z at (1, 0, ..): {w}");
            }
        }
        for f in &self.extension {
            let _ = writeln!(out, "extension at {}: {}", f.sigma, f.names.join(", "));
            for a in &f.actions {
                let _ = writeln!(out, "  action of {}:", a.op);
                render_grid(out, &a.matrix, "    ");
            }
        }
        for d in &self.d {
            let _ = writeln!(out, "D for {}:", d.op);
            render_grid(out, &d.matrix, "  ");
        }
        if let Some(v) = &self.verification {
            out.push_str("verification:\n");
            v.render_text(out);
        }
        if let Some(s) = &self.system {
            out.push_str("completed system:\n");
            out.push_str(s);
        }
    }
}

fn ansatz_text(a: &AnsatzSummary) -> String {
    // Escalated denominators get long; the JSON report keeps them whole.
    let den = if a.denominator.chars().count() > 72 {
        let head: String = a.denominator.chars().take(60).collect();
        format!("{head} ... ({} chars)", a.denominator.chars().count())
    } else {
        a.denominator.clone()
    };
    let mut s = format!("denominator {den}, numerator degree {}", a.numerator_degree);
    if let Some(b) = a.shift_bound {
        let _ = write!(s, ", shift {b}");
    }
    s
}
