//! Shared fixtures for unit tests.

use crate::arith::{RatFunc, Var};
use crate::field::{FieldContext, OpKind, OperatorSpec, Role};
use crate::matrix::Mat;
use crate::parse::parse_expr;

/// `Q(q, x, a, b, c)` with `x -> qx` as the base operator and q-dilations of `a, b, c`
/// as parameters.
pub fn hypergeometric_ctx() -> FieldContext {
    let vars = ["q", "x", "a", "b", "c"].map(String::from).to_vec();
    let v = |i: u32| Var(i);
    let ops = vec![
        OperatorSpec::new("phq", Role::Phi, OpKind::QDilate { var: v(1), factor: v(0) }),
        OperatorSpec::new("sa", Role::Sigma, OpKind::QDilate { var: v(2), factor: v(0) }),
        OperatorSpec::new("sb", Role::Sigma, OpKind::QDilate { var: v(3), factor: v(0) }),
        OperatorSpec::new("sc", Role::Sigma, OpKind::QDilate { var: v(4), factor: v(0) }),
    ];
    FieldContext::new(vars, ops).unwrap()
}

pub fn e(ctx: &FieldContext, s: &str) -> RatFunc {
    parse_expr(s, ctx).unwrap()
}

pub fn mat(ctx: &FieldContext, rows: &[&[&str]]) -> Mat {
    Mat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| e(ctx, s)).collect())
            .collect(),
    )
    .unwrap()
}

/// Companion matrix of the basic hypergeometric q-difference equation.
pub fn companion(ctx: &FieldContext) -> Mat {
    let p = "((a+b)*x - (1+c/q))/(a*b*x - c/q)";
    let q = "-(x-1)/(a*b*x - c/q)";
    mat(ctx, &[&["0", "1"], &[q, p]])
}

pub fn c1(ctx: &FieldContext) -> Mat {
    mat(
        ctx,
        &[
            &["1", "-a"],
            &["a*q*(x-1)/(a*b*q*x-c)", "(a*q*(1-a*x)+c*(a-1))/(a*b*q*x-c)"],
        ],
    )
}

pub fn c2(ctx: &FieldContext) -> Mat {
    mat(
        ctx,
        &[
            &["1", "-b"],
            &["b*q*(x-1)/(a*b*q*x-c)", "(b*q*(1-b*x)+c*(b-1))/(a*b*q*x-c)"],
        ],
    )
}

pub fn c3(ctx: &FieldContext) -> Mat {
    mat(
        ctx,
        &[
            &["(x*(c*(a+b)-a*b)-c^2)/(c*x)", "(c-a*b*x)/x"],
            &["(x-1)/x", "(c-a*b*x)/(c*x)"],
        ],
    )
}

pub fn d3(ctx: &FieldContext) -> Mat {
    c3(ctx).scale(&e(ctx, "1/((a-c)*(b-c))"))
}
