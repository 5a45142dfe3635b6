//! Text format for systems.
//!
//! ```text
//! isodiff-system v1
//! variables q x a
//! operator phq phi qdilate x q
//! operator sa sigma shift a 1
//! dimension 2
//! A phq
//! 0, 1
//! -1, x
//! end
//! C sa
//! ...
//! end
//! ```
//!
//! Matrix rows are comma-separated expressions. Adjoined indeterminates are declared
//! by `family SIGMA NAME...` followed by one `E OP` block per earlier parameter; they
//! must precede any block that uses them. `#` starts a comment.

use std::fmt::Write as _;

use isodiff_core::arith::{Rational, Var};
use isodiff_core::field::{FieldContext, OpKind, OperatorSpec, Role};
use isodiff_core::integrability::SystemSpec;
use isodiff_core::matrix::Mat;
use isodiff_core::parse::{format_expr, parse_expr};

pub const HEADER: &str = "isodiff-system v1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FileError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError {
        line,
        message: message.into(),
    })
}

/// A loaded system; `spec.c` is empty when the file has no `C` blocks.
#[derive(Debug, Clone)]
pub struct SystemFile {
    pub spec: SystemSpec,
}

struct RawBlock {
    kind: String,
    op: String,
    line: usize,
    rows: Vec<(usize, String)>,
}

struct RawFamily {
    sigma: String,
    names: Vec<String>,
    line: usize,
    actions: Vec<RawBlock>,
}

enum Item {
    Block(RawBlock),
    Family(RawFamily),
}

fn parse_op(line: usize, words: &[&str], vars: &[String]) -> Result<OperatorSpec, FileError> {
    let var_of = |name: &str| -> Result<Var, FileError> {
        match vars.iter().position(|v| v == name) {
            Some(i) => Ok(Var(i as u32)),
            None => err(line, format!("unknown variable `{name}`")),
        }
    };
    let (name, role, kind, var) = match words {
        [name, role, kind, var, ..] => (*name, *role, *kind, var_of(var)?),
        _ => return err(line, "expected `operator NAME ROLE KIND VAR [FACTOR|STEP]`"),
    };
    let role = match role {
        "phi" => Role::Phi,
        "sigma" => Role::Sigma,
        "delta" => Role::Delta,
        other => return err(line, format!("unknown role `{other}`")),
    };
    let extra = words.get(4).copied();
    let arity = |want: usize| {
        if words.len() != want {
            err(line, format!("operator kind `{kind}` takes {} argument(s)", want - 3))
        } else {
            Ok(())
        }
    };
    let kind = match kind {
        "shift" => {
            arity(5)?;
            let step: Rational = extra
                .unwrap()
                .parse()
                .or_else(|_| err(line, "shift step must be a rational literal"))?;
            OpKind::Shift { var, step }
        }
        "qdilate" => {
            arity(5)?;
            OpKind::QDilate {
                var,
                factor: var_of(extra.unwrap())?,
            }
        }
        "derivation" => {
            arity(4)?;
            OpKind::Derivation { var }
        }
        "euler" => {
            arity(4)?;
            OpKind::Euler { var }
        }
        other => return err(line, format!("unknown operator kind `{other}`")),
    };
    Ok(OperatorSpec::new(name, role, kind))
}

fn parse_matrix(ctx: &FieldContext, n: usize, block: &RawBlock) -> Result<Mat, FileError> {
    if block.rows.len() != n {
        return err(
            block.line,
            format!("{} {} has {} rows, expected {n}", block.kind, block.op, block.rows.len()),
        );
    }
    let mut rows = Vec::with_capacity(n);
    for (line, text) in &block.rows {
        let mut row = Vec::with_capacity(n);
        for cell in text.split(',') {
            let f = parse_expr(cell.trim(), ctx).or_else(|e| err(*line, format!("{e} in `{}`", cell.trim())))?;
            row.push(f);
        }
        if row.len() != n {
            return err(*line, format!("row has {} entries, expected {n}", row.len()));
        }
        rows.push(row);
    }
    Mat::from_rows(rows).or_else(|e| err(block.line, e.to_string()))
}

/// Parses a system file.
pub fn parse_system(src: &str) -> Result<SystemFile, FileError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((i, l)) => return err(i, format!("expected header `{HEADER}`, found `{l}`")),
        None => return err(1, "empty file"),
    }

    let mut vars: Option<Vec<String>> = None;
    let mut ops: Vec<OperatorSpec> = Vec::new();
    let mut n: Option<usize> = None;
    let mut items: Vec<Item> = Vec::new();

    while let Some((line, text)) = lines.next() {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words[0] {
            "variables" => {
                if vars.is_some() {
                    return err(line, "duplicate `variables` line");
                }
                vars = Some(words[1..].iter().map(|s| s.to_string()).collect());
            }
            "operator" => {
                let Some(v) = &vars else {
                    return err(line, "`operator` before `variables`");
                };
                ops.push(parse_op(line, &words[1..], v)?);
            }
            "dimension" => {
                let d = words
                    .get(1)
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&d| d > 0 && words.len() == 2);
                match d {
                    Some(d) if n.is_none() => n = Some(d),
                    Some(_) => return err(line, "duplicate `dimension` line"),
                    None => return err(line, "expected `dimension N` with N >= 1"),
                }
            }
            "family" => {
                if words.len() < 3 {
                    return err(line, "expected `family SIGMA NAME...`");
                }
                items.push(Item::Family(RawFamily {
                    sigma: words[1].to_string(),
                    names: words[2..].iter().map(|s| s.to_string()).collect(),
                    line,
                    actions: Vec::new(),
                }));
            }
            kind @ ("A" | "B" | "C" | "E") => {
                if words.len() != 2 {
                    return err(line, format!("expected `{kind} OPERATOR`"));
                }
                let mut rows = Vec::new();
                loop {
                    match lines.next() {
                        Some((_, "end")) => break,
                        Some((l, t)) => rows.push((l, t.to_string())),
                        None => return err(line, format!("block `{kind} {}` is not closed", words[1])),
                    }
                }
                let block = RawBlock {
                    kind: kind.to_string(),
                    op: words[1].to_string(),
                    line,
                    rows,
                };
                if kind == "E" {
                    match items.last_mut() {
                        Some(Item::Family(f)) => f.actions.push(block),
                        _ => return err(line, "`E` block outside a family"),
                    }
                } else {
                    items.push(Item::Block(block));
                }
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }

    let Some(vars) = vars else {
        return err(1, "missing `variables` line");
    };
    let Some(n) = n else {
        return err(1, "missing `dimension` line");
    };
    let mut ctx = FieldContext::new(vars, ops).or_else(|e| err(1, e.to_string()))?;
    let violations = ctx.validate_commutation();
    if let Some(v) = violations.first() {
        return err(
            1,
            format!("operators `{}` and `{}` do not commute on `{}`", v.first, v.second, v.variable),
        );
    }

    let phi = ctx.phi().to_vec();
    let delta = ctx.delta().to_vec();
    let sigma = ctx.sigma().to_vec();
    let mut a: Vec<Option<Mat>> = vec![None; phi.len()];
    let mut b: Vec<Option<Mat>> = vec![None; delta.len()];
    let mut c: Vec<Option<Mat>> = vec![None; sigma.len()];

    for item in &items {
        match item {
            Item::Family(f) => {
                let Some(step) = ctx.op_by_name(&f.sigma).and_then(|id| ctx.sigma_position(id)) else {
                    return err(f.line, format!("`{}` is not a sigma operator", f.sigma));
                };
                if f.actions.len() != step {
                    return err(
                        f.line,
                        format!("family at `{}` needs {step} `E` block(s), found {}", f.sigma, f.actions.len()),
                    );
                }
                let d = f.names.len();
                let mut e = Vec::with_capacity(step);
                for (i, block) in f.actions.iter().enumerate() {
                    let expected = &ctx.op(sigma[i]).name;
                    if &block.op != expected {
                        return err(block.line, format!("expected `E {expected}`"));
                    }
                    e.push(parse_matrix(&ctx, d, block)?);
                }
                let (next, members) = ctx.adjoin_family(step, e).or_else(|e| err(f.line, e.to_string()))?;
                let got: Vec<String> = members.iter().map(|&v| next.var_name(v)).collect();
                if got != f.names {
                    return err(
                        f.line,
                        format!("family names must be `{}`", got.join(" ")),
                    );
                }
                ctx = next;
            }
            Item::Block(block) => {
                let Some(id) = ctx.op_by_name(&block.op) else {
                    return err(block.line, format!("unknown operator `{}`", block.op));
                };
                let (slot, ids) = match block.kind.as_str() {
                    "A" => (&mut a, &phi),
                    "B" => (&mut b, &delta),
                    _ => (&mut c, &sigma),
                };
                let Some(pos) = ids.iter().position(|&x| x == id) else {
                    return err(
                        block.line,
                        format!("`{}` block needs a {} operator", block.kind, role_for(&block.kind)),
                    );
                };
                if slot[pos].is_some() {
                    return err(block.line, format!("duplicate block `{} {}`", block.kind, block.op));
                }
                slot[pos] = Some(parse_matrix(&ctx, n, block)?);
            }
        }
    }

    let collect = |what: &str, v: Vec<Option<Mat>>, ids: &[isodiff_core::field::OpId]| {
        v.into_iter()
            .zip(ids)
            .map(|(m, id)| m.ok_or_else(|| format!("missing `{what} {}` block", ctx.op(*id).name)))
            .collect::<Result<Vec<_>, _>>()
    };
    let a = collect("A", a, &phi).or_else(|m| err(1, m))?;
    let b = collect("B", b, &delta).or_else(|m| err(1, m))?;
    let c = if c.iter().all(Option::is_none) {
        Vec::new()
    } else {
        collect("C", c, &sigma).or_else(|m| err(1, m))?
    };
    let spec = SystemSpec::new(ctx, n, a, b, c).or_else(|e| err(1, e.to_string()))?;
    Ok(SystemFile { spec })
}

fn role_for(kind: &str) -> &'static str {
    match kind {
        "A" => "phi",
        "B" => "delta",
        _ => "sigma",
    }
}

fn write_matrix(out: &mut String, ctx: &FieldContext, kind: &str, op: &str, m: &Mat) {
    let _ = writeln!(out, "{kind} {op}");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|f| format_expr(f, ctx)).collect();
        let _ = writeln!(out, "{}", row.join(", "));
    }
    out.push_str("end\n");
}

/// Serializes a system, with its adjoined families, so that `parse_system` reads it back.
pub fn write_system(spec: &SystemSpec, comment: Option<&str>) -> String {
    let ctx = &spec.ctx;
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "variables {}", ctx.base_vars().join(" "));
    for op in ctx.operators() {
        let name = |v: Var| ctx.var_name(v);
        let kind = match &op.kind {
            OpKind::Shift { var, step } => format!("shift {} {step}", name(*var)),
            OpKind::QDilate { var, factor } => format!("qdilate {} {}", name(*var), name(*factor)),
            OpKind::Derivation { var } => format!("derivation {}", name(*var)),
            OpKind::Euler { var } => format!("euler {}", name(*var)),
        };
        let _ = writeln!(out, "operator {} {} {kind}", op.name, op.role);
    }
    let _ = writeln!(out, "dimension {}", spec.n);
    let sigma = ctx.sigma();
    for fam in ctx.families() {
        let _ = writeln!(out, "family {} {}", ctx.op(sigma[fam.step]).name, fam.names.join(" "));
        for (i, e) in fam.e.iter().enumerate() {
            write_matrix(&mut out, ctx, "E", &ctx.op(sigma[i]).name, e);
        }
    }
    for (id, m) in ctx.phi().iter().zip(&spec.a) {
        write_matrix(&mut out, ctx, "A", &ctx.op(*id).name, m);
    }
    for (id, m) in ctx.delta().iter().zip(&spec.b) {
        write_matrix(&mut out, ctx, "B", &ctx.op(*id).name, m);
    }
    for (id, m) in sigma.iter().zip(&spec.c) {
        write_matrix(&mut out, ctx, "C", &ctx.op(*id).name, m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "isodiff-system v1
# shift in x, parameter a
variables x a
operator s phi shift x 1
operator sa sigma shift a 1/2
dimension 1
A s
x + a
end
C sa
1
end
";

    #[test]
    fn round_trip() {
        let f = parse_system(SMALL).unwrap();
        assert_eq!(f.spec.n, 1);
        assert_eq!(f.spec.c.len(), 1);
        let text = write_system(&f.spec, None);
        let g = parse_system(&text).unwrap();
        assert_eq!(g.spec.a, f.spec.a);
        assert_eq!(write_system(&g.spec, None), text);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = SMALL.replace("x + a", "x + + ");
        let e = parse_system(&bad).unwrap_err();
        assert_eq!(e.line, 8);
        let e = parse_system(&SMALL.replace("isodiff-system v1", "v0")).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_system(&SMALL.replace("A s", "A sa")).unwrap_err();
        assert!(e.message.contains("phi"));
        let e = parse_system(&SMALL.replace("operator sa sigma shift a 1/2", "operator sa sigma derivation a")).unwrap_err();
        assert!(e.message.contains("sa"), "{e}");
    }

    #[test]
    fn missing_parameter_blocks_mean_base_only() {
        let text = SMALL.replace("C sa\n1\nend\n", "");
        assert!(parse_system(&text).unwrap().spec.c.is_empty());
    }
}
