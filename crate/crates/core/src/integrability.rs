//! Integrability conditions of a parameterized difference-differential system.
//!
//! Base system: `φ_j(Y) = A_j Y` for Φ and `∂_i Y = B_i Y` for Δ. Parameter matrices:
//! `σ_i(Y) = C_i Y` for Σ. Every condition is an exact matrix identity; a report records
//! the residual `lhs - rhs` of each one that fails.

use std::fmt;

use serde::Serialize;

use crate::field::{FieldContext, FieldError, OpId, OpRef};
use crate::matrix::{Mat, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("expected {expected} {what} matrices, got {got}")]
    WrongCount {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} is {rows}x{cols}, expected {n}x{n}")]
    Dimension {
        what: String,
        rows: usize,
        cols: usize,
        n: usize,
    },
    #[error("{0} is not invertible")]
    Singular(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A base system with optional candidate parameter matrices.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub ctx: FieldContext,
    pub n: usize,
    /// One per Φ operator, in declaration order.
    pub a: Vec<Mat>,
    /// One per Δ operator.
    pub b: Vec<Mat>,
    /// Empty, or one per Σ operator.
    pub c: Vec<Mat>,
}

impl SystemSpec {
    /// Checks counts, shapes and invertibility of every `A_j` and `C_i`.
    pub fn new(
        ctx: FieldContext,
        n: usize,
        a: Vec<Mat>,
        b: Vec<Mat>,
        c: Vec<Mat>,
    ) -> Result<Self, SpecError> {
        let counts = [
            ("A", ctx.phi().len(), a.len()),
            ("B", ctx.delta().len(), b.len()),
        ];
        for (what, expected, got) in counts {
            if expected != got {
                return Err(SpecError::WrongCount { what, expected, got });
            }
        }
        if !c.is_empty() && c.len() != ctx.sigma().len() {
            return Err(SpecError::WrongCount {
                what: "C",
                expected: ctx.sigma().len(),
                got: c.len(),
            });
        }
        let spec = SystemSpec { ctx, n, a, b, c };
        let groups: [(&str, &[OpId], &[Mat], bool); 3] = [
            ("A", spec.ctx.phi(), &spec.a, true),
            ("B", spec.ctx.delta(), &spec.b, false),
            ("C", spec.ctx.sigma(), &spec.c, true),
        ];
        for (what, ids, mats, invertible) in groups {
            for (id, m) in ids.iter().zip(mats) {
                let label = format!("{what}[{}]", spec.ctx.op(*id).name);
                spec.check_shape(&label, m)?;
                if invertible && !m.is_invertible() {
                    return Err(SpecError::Singular(label));
                }
            }
        }
        Ok(spec)
    }

    fn check_shape(&self, what: &str, m: &Mat) -> Result<(), SpecError> {
        if m.rows() != self.n || m.cols() != self.n {
            return Err(SpecError::Dimension {
                what: what.to_string(),
                rows: m.rows(),
                cols: m.cols(),
                n: self.n,
            });
        }
        Ok(())
    }

    /// Validates a list of parameter matrices against this system's shapes.
    pub fn check_parameters(&self, d: &[Mat]) -> Result<(), SpecError> {
        if d.len() != self.ctx.sigma().len() {
            return Err(SpecError::WrongCount {
                what: "parameter",
                expected: self.ctx.sigma().len(),
                got: d.len(),
            });
        }
        for (id, m) in self.ctx.sigma().iter().zip(d) {
            let label = format!("D[{}]", self.ctx.op(*id).name);
            self.check_shape(&label, m)?;
            if !m.is_invertible() {
                return Err(SpecError::Singular(label));
            }
        }
        Ok(())
    }

    /// The same system over another (typically extended) context.
    pub fn with_context(&self, ctx: FieldContext) -> SystemSpec {
        SystemSpec {
            ctx,
            ..self.clone()
        }
    }
}

/// Which family of identities a check belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionId {
    /// `φ_j(A_i) A_j = φ_i(A_j) A_i`
    PhiPhi,
    /// `φ_j(B_i) A_j = ∂_i(A_j) + A_j B_i`
    PhiDelta,
    /// `∂_j(B_i) - ∂_i(B_j) = [B_j, B_i]`
    DeltaDelta,
    /// `φ_j(C_i) A_j = σ_i(A_j) C_i`
    SigmaPhi,
    /// `σ_j(B_i) C_j = ∂_i(C_j) + C_j B_i`
    SigmaDelta,
    /// `σ_j(C_i) C_j = σ_i(C_j) C_i`
    SigmaSigma,
}

impl ConditionId {
    pub const ALL: [ConditionId; 6] = [
        ConditionId::PhiPhi,
        ConditionId::PhiDelta,
        ConditionId::DeltaDelta,
        ConditionId::SigmaPhi,
        ConditionId::SigmaDelta,
        ConditionId::SigmaSigma,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::PhiPhi => "phi-phi",
            ConditionId::PhiDelta => "phi-delta",
            ConditionId::DeltaDelta => "delta-delta",
            ConditionId::SigmaPhi => "sigma-phi",
            ConditionId::SigmaDelta => "sigma-delta",
            ConditionId::SigmaSigma => "sigma-sigma",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            ConditionId::PhiPhi => "phi_j(A_i) A_j = phi_i(A_j) A_i",
            ConditionId::PhiDelta => "phi_j(B_i) A_j = d_i(A_j) + A_j B_i",
            ConditionId::DeltaDelta => "d_j(B_i) - d_i(B_j) = [B_j, B_i]",
            ConditionId::SigmaPhi => "phi_j(C_i) A_j = sigma_i(A_j) C_i",
            ConditionId::SigmaDelta => "sigma_j(B_i) C_j = d_i(C_j) + C_j B_i",
            ConditionId::SigmaSigma => "sigma_j(C_i) C_j = sigma_i(C_j) C_i",
        }
    }

    pub fn is_base(self) -> bool {
        matches!(
            self,
            ConditionId::PhiPhi | ConditionId::PhiDelta | ConditionId::DeltaDelta
        )
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub condition: ConditionId,
    /// Operators in the `(i, j)` roles of the formula.
    pub i: OpId,
    pub j: OpId,
    pub passed: bool,
    /// `lhs - rhs`, present only on failure.
    pub residual: Option<Mat>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionReport {
    pub results: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn of(&self, c: ConditionId) -> impl Iterator<Item = &ConditionResult> {
        self.results.iter().filter(move |r| r.condition == c)
    }

    /// Result for a specific pair, if it was evaluated.
    pub fn find(&self, c: ConditionId, i: OpId, j: OpId) -> Option<&ConditionResult> {
        self.results
            .iter()
            .find(|r| r.condition == c && r.i == i && r.j == j)
    }

    pub fn extend(&mut self, other: ConditionReport) {
        self.results.extend(other.results);
    }

    fn push(&mut self, condition: ConditionId, i: OpId, j: OpId, residual: Mat) {
        let passed = residual.is_zero();
        self.results.push(ConditionResult {
            condition,
            i,
            j,
            passed,
            residual: (!passed).then_some(residual),
        });
    }
}

fn ap(ctx: &FieldContext, op: OpId, m: &Mat) -> Result<Mat, FieldError> {
    ctx.apply_mat(OpRef::forward(op), m)
}

/// Residual of `φ_j(A_i) A_j = φ_i(A_j) A_i`.
pub fn phi_phi_residual(
    ctx: &FieldContext,
    (i, ai): (OpId, &Mat),
    (j, aj): (OpId, &Mat),
) -> Result<Mat, FieldError> {
    let lhs = ap(ctx, j, ai)?.mul(aj)?;
    let rhs = ap(ctx, i, aj)?.mul(ai)?;
    Ok(lhs.sub(&rhs)?)
}

/// Residual of `φ_j(B_i) A_j = ∂_i(A_j) + A_j B_i`.
pub fn phi_delta_residual(
    ctx: &FieldContext,
    (i, bi): (OpId, &Mat),
    (j, aj): (OpId, &Mat),
) -> Result<Mat, FieldError> {
    let lhs = ap(ctx, j, bi)?.mul(aj)?;
    let rhs = ap(ctx, i, aj)?.add(&aj.mul(bi)?)?;
    Ok(lhs.sub(&rhs)?)
}

/// Residual of `∂_j(B_i) - ∂_i(B_j) = [B_j, B_i]`.
pub fn delta_delta_residual(
    ctx: &FieldContext,
    (i, bi): (OpId, &Mat),
    (j, bj): (OpId, &Mat),
) -> Result<Mat, FieldError> {
    let lhs = ap(ctx, j, bi)?.sub(&ap(ctx, i, bj)?)?;
    Ok(lhs.sub(&bj.commutator(bi)?)?)
}

/// Residual of `φ_j(C_i) A_j = σ_i(A_j) C_i`.
pub fn sigma_phi_residual(
    ctx: &FieldContext,
    (i, ci): (OpId, &Mat),
    (j, aj): (OpId, &Mat),
) -> Result<Mat, FieldError> {
    let lhs = ap(ctx, j, ci)?.mul(aj)?;
    let rhs = ap(ctx, i, aj)?.mul(ci)?;
    Ok(lhs.sub(&rhs)?)
}

/// Residual of `σ_j(B_i) C_j = ∂_i(C_j) + C_j B_i`.
pub fn sigma_delta_residual(
    ctx: &FieldContext,
    (i, bi): (OpId, &Mat),
    (j, cj): (OpId, &Mat),
) -> Result<Mat, FieldError> {
    let lhs = ap(ctx, j, bi)?.mul(cj)?;
    let rhs = ap(ctx, i, cj)?.add(&cj.mul(bi)?)?;
    Ok(lhs.sub(&rhs)?)
}

/// Residual of `σ_j(C_i) C_j = σ_i(C_j) C_i`.
pub fn sigma_sigma_residual(
    ctx: &FieldContext,
    (i, ci): (OpId, &Mat),
    (j, cj): (OpId, &Mat),
) -> Result<Mat, FieldError> {
    phi_phi_residual(ctx, (i, ci), (j, cj))
}

fn indexed<'a>(ids: &'a [OpId], mats: &'a [Mat]) -> Vec<(OpId, &'a Mat)> {
    ids.iter().copied().zip(mats).collect()
}

/// Evaluates the base-system families over all index pairs.
pub fn check_base(spec: &SystemSpec) -> Result<ConditionReport, FieldError> {
    let ctx = &spec.ctx;
    let a = indexed(ctx.phi(), &spec.a);
    let b = indexed(ctx.delta(), &spec.b);
    let mut report = ConditionReport::default();
    for (x, &ai) in a.iter().enumerate() {
        for &aj in &a[x..] {
            report.push(ConditionId::PhiPhi, ai.0, aj.0, phi_phi_residual(ctx, ai, aj)?);
        }
    }
    for &bi in &b {
        for &aj in &a {
            report.push(ConditionId::PhiDelta, bi.0, aj.0, phi_delta_residual(ctx, bi, aj)?);
        }
    }
    for (x, &bi) in b.iter().enumerate() {
        for &bj in &b[x + 1..] {
            report.push(
                ConditionId::DeltaDelta,
                bi.0,
                bj.0,
                delta_delta_residual(ctx, bi, bj)?,
            );
        }
    }
    Ok(report)
}

/// Evaluates the parameter families for matrices `d` (one per Σ operator): all Σ×Φ and
/// Δ×Σ pairs, and Σ pairs `i < j`.
pub fn check_parameter(spec: &SystemSpec, d: &[Mat]) -> Result<ConditionReport, FieldError> {
    let ctx = &spec.ctx;
    let a = indexed(ctx.phi(), &spec.a);
    let b = indexed(ctx.delta(), &spec.b);
    let c = indexed(ctx.sigma(), d);
    let mut report = ConditionReport::default();
    report.extend(check_sigma_phi_delta(ctx, &a, &b, &c)?);
    for (x, &ci) in c.iter().enumerate() {
        for &cj in &c[x + 1..] {
            report.push(
                ConditionId::SigmaSigma,
                ci.0,
                cj.0,
                sigma_sigma_residual(ctx, ci, cj)?,
            );
        }
    }
    Ok(report)
}

fn check_sigma_phi_delta(
    ctx: &FieldContext,
    a: &[(OpId, &Mat)],
    b: &[(OpId, &Mat)],
    c: &[(OpId, &Mat)],
) -> Result<ConditionReport, FieldError> {
    let mut report = ConditionReport::default();
    for &ci in c {
        for &aj in a {
            report.push(ConditionId::SigmaPhi, ci.0, aj.0, sigma_phi_residual(ctx, ci, aj)?);
        }
    }
    for &bi in b {
        for &cj in c {
            report.push(
                ConditionId::SigmaDelta,
                bi.0,
                cj.0,
                sigma_delta_residual(ctx, bi, cj)?,
            );
        }
    }
    Ok(report)
}

/// Only the Σ×Φ and Δ×Σ families, for a prefix of the Σ operators.
pub fn check_compatibility(
    spec: &SystemSpec,
    d: &[Mat],
) -> Result<ConditionReport, FieldError> {
    let ctx = &spec.ctx;
    let a = indexed(ctx.phi(), &spec.a);
    let b = indexed(ctx.delta(), &spec.b);
    let c = indexed(&ctx.sigma()[..d.len()], d);
    check_sigma_phi_delta(ctx, &a, &b, &c)
}

/// Base and parameter checks together; `all_passed` is the isomonodromy verdict.
pub fn check_all(spec: &SystemSpec, d: &[Mat]) -> Result<ConditionReport, FieldError> {
    let mut r = check_base(spec)?;
    r.extend(check_parameter(spec, d)?);
    Ok(r)
}
