//! Constructive completion of parameter matrices.
//!
//! Given `C_1..C_r` satisfying the Σ×Φ and Δ×Σ conditions, builds `D_1..D_r` that also
//! satisfy `σ_j(D_i) D_j = σ_i(D_j) D_i`, one parameter at a time: `D_1 = C_1` and
//! `D_k = Z C_k` where `Z` solves the transport system of step `k` together with
//!
//! ```text
//! σ_i(Z) = σ_k(D_i) Z σ_k(D_i)^{-1} σ_i(H_i),   H_i = σ_i^{-1}(σ_k(D_i) C_k D_i^{-1} σ_i(C_k)^{-1})
//! ```
//!
//! for every earlier parameter `i`. On the solution space `V` with basis `v_1 = H_1, ..`
//! the last equation becomes `σ_i(y) = E_i y` for the coordinates `y` of `Z`, which is
//! solved either inside the parameter field or by adjoining indeterminates.

use serde::Serialize;

use crate::arith::{poly_lcm, Monomial, Poly, RatFunc, Var};
use crate::field::{FieldContext, FieldError, OpRef};
use crate::integrability::{
    check_all, check_base, check_compatibility, check_parameter, sigma_sigma_residual,
    ConditionReport, SpecError, SystemSpec,
};
use crate::matrix::{Mat, MatrixError};
use crate::solver::{
    coords_in_basis, monomials_up_to, moving_part, template_kernel, with_leading, AnsatzSpec,
    AnsatzSummary, SolutionSpace, SolverError, ZSystem,
};

#[derive(Debug, Clone, thiserror::Error)]
pub enum CompletionError {
    #[error("completion needs at least one parameter operator with its matrix")]
    NoParameters,
    #[error("hypotheses fail: {} condition(s) do not hold", .0.failures().count())]
    Precondition(ConditionReport),
    #[error("no completion found with the given ansatz at parameter {sigma}")]
    NoCompletion {
        sigma: String,
        tried: Vec<AnsatzSummary>,
    },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl From<crate::arith::ArithError> for CompletionError {
    fn from(e: crate::arith::ArithError) -> Self {
        CompletionError::Matrix(e.into())
    }
}

type Result<T> = std::result::Result<T, CompletionError>;

/// How the coordinate system `σ_i(y) = E_i y` is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Ground search first, indeterminates if it finds nothing.
    #[default]
    Auto,
    /// Ground search only; falls back to indeterminates only when every solution found
    /// gives a singular `Z`.
    Ground,
    Symbolic,
}

/// What a step actually did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    /// `C_k` already satisfied every condition against the accepted matrices.
    Shortcut,
    /// Coordinates found in the parameter field.
    Ground,
    /// Coordinates are newly adjoined indeterminates.
    Symbolic,
}

impl StepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StepMode::Shortcut => "shortcut",
            StepMode::Ground => "ground",
            StepMode::Symbolic => "symbolic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompletionOptions {
    /// Fixed ansatz denominator; when absent the default guess is escalated.
    pub denominator: Option<Poly>,
    /// Numerator degree bound; defaults to the denominator's degree plus two.
    pub numerator_degree: Option<u32>,
    pub shift_bound: u32,
    pub mode: Mode,
    /// Numerator degree bound of the ground search.
    pub ground_degree: u32,
}

impl Default for CompletionOptions {
    fn default() -> Self {
        CompletionOptions {
            denominator: None,
            numerator_degree: None,
            shift_bound: 2,
            mode: Mode::Auto,
            ground_degree: 4,
        }
    }
}

/// Everything computed at one step `k >= 2`.
#[derive(Debug, Clone)]
pub struct StepReport {
    /// Σ position (0-based) and operator name.
    pub k: usize,
    pub sigma: String,
    pub mode: StepMode,
    pub ansatz: Option<AnsatzSummary>,
    /// `H_i` for every earlier parameter.
    pub h: Vec<Mat>,
    /// Basis of `V`, led by `H_1`.
    pub basis: Vec<Mat>,
    pub e: Vec<Mat>,
    /// Coordinates of `Z` in the basis.
    pub y: Vec<RatFunc>,
    pub z: Mat,
    /// Names of indeterminates adjoined at this step.
    pub adjoined: Vec<String>,
    /// `det Z` at `x_1 = 1`, `x_s = 0` (symbolic steps only); equals `det H_1`.
    pub det_witness: Option<RatFunc>,
}

impl StepReport {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub d: Vec<Mat>,
    /// Context of the final matrices, carrying any adjoined indeterminates.
    pub ctx: FieldContext,
    /// One per parameter after the first, in declaration order.
    pub steps: Vec<StepReport>,
    /// Full verification of the completed system.
    pub report: ConditionReport,
}

impl CompletionResult {
    pub fn spec(&self, original: &SystemSpec) -> SystemSpec {
        SystemSpec {
            c: self.d.clone(),
            ..original.with_context(self.ctx.clone())
        }
    }
}

fn sigma_ref(ctx: &FieldContext, i: usize) -> crate::field::OpId {
    ctx.sigma()[i]
}

/// `H_i = σ_i^{-1}(σ_k(D_i) C_k D_i^{-1} σ_i(C_k)^{-1})`.
pub fn compute_h(ctx: &FieldContext, d_i: &Mat, c_k: &Mat, i: usize, k: usize) -> Result<Mat> {
    let (si, sk) = (sigma_ref(ctx, i), sigma_ref(ctx, k));
    let inner = Mat::product(&[
        &ctx.apply_mat(sk.into(), d_i)?,
        c_k,
        &d_i.inv()?,
        &ctx.apply_mat(si.into(), c_k)?.inv()?,
    ])?;
    Ok(ctx.apply_mat(OpRef::inverse(si), &inner)?)
}

/// `M_i(v) = σ_i^{-1}(σ_k(D_i) v σ_k(D_i)^{-1}) H_i`.
pub fn transport_map(
    ctx: &FieldContext,
    d_i: &Mat,
    h_i: &Mat,
    i: usize,
    k: usize,
    v: &Mat,
) -> Result<Mat> {
    let (si, sk) = (sigma_ref(ctx, i), sigma_ref(ctx, k));
    let skd = ctx.apply_mat(sk.into(), d_i)?;
    let conj = Mat::product(&[&skd, v, &skd.inv()?])?;
    Ok(ctx.apply_mat(OpRef::inverse(si), &conj)?.mul(h_i)?)
}

/// Coordinates of `M_i` on the basis: column `t` holds the coordinates of `M_i(v_t)`.
/// Fails if some image leaves `V`.
pub fn transport_matrix(
    ctx: &FieldContext,
    d_i: &Mat,
    h_i: &Mat,
    i: usize,
    k: usize,
    space: &SolutionSpace,
) -> Result<Mat> {
    let dim = space.dim();
    let mut m = Mat::zeros(dim, dim);
    for (t, v) in space.basis.iter().enumerate() {
        let image = transport_map(ctx, d_i, h_i, i, k, v)?;
        let coords = coords_in_basis(ctx, &image, &space.basis).ok_or_else(|| {
            CompletionError::Consistency(format!(
                "transport map {} sends basis element {} outside the solution space",
                i + 1,
                t + 1
            ))
        })?;
        for (s, c) in coords.into_iter().enumerate() {
            m.set(s, t, c);
        }
    }
    Ok(m)
}

/// Pairs `(u, v)`, `u < v`, where `σ_u(E_v) E_u = σ_v(E_u) E_v` fails.
pub fn e_compatibility_failures(ctx: &FieldContext, e: &[Mat]) -> Result<Vec<(usize, usize)>> {
    let mut bad = Vec::new();
    for u in 0..e.len() {
        for v in u + 1..e.len() {
            let r = sigma_sigma_residual(
                ctx,
                (sigma_ref(ctx, u), &e[u]),
                (sigma_ref(ctx, v), &e[v]),
            )?;
            if !r.is_zero() {
                bad.push((u, v));
            }
        }
    }
    Ok(bad)
}

/// `E_i = σ_i(M_i)` in the basis of `V`, for each earlier parameter; each checked
/// invertible and pairwise compatible.
pub fn compute_e(
    ctx: &FieldContext,
    d: &[Mat],
    h: &[Mat],
    k: usize,
    space: &SolutionSpace,
) -> Result<Vec<Mat>> {
    let mut e = Vec::with_capacity(k);
    for i in 0..k {
        let m = transport_matrix(ctx, &d[i], &h[i], i, k, space)?;
        let ei = ctx.apply_mat(sigma_ref(ctx, i).into(), &m)?;
        if !ei.is_invertible() {
            return Err(CompletionError::Consistency(format!(
                "coordinate matrix {} is singular",
                i + 1
            )));
        }
        e.push(ei);
    }
    if let Some((u, v)) = e_compatibility_failures(ctx, &e)?.first() {
        return Err(CompletionError::Consistency(format!(
            "coordinate matrices {} and {} are not compatible",
            u + 1,
            v + 1
        )));
    }
    Ok(e)
}

/// Base parameters moved by some `σ_i`, `i < k`.
fn active_parameters(ctx: &FieldContext, k: usize) -> Result<Vec<Var>> {
    let mut out = Vec::new();
    for v in ctx.parameter_vars() {
        let x = RatFunc::var(v);
        for i in 0..k {
            if ctx.apply(sigma_ref(ctx, i).into(), &x)? != x {
                out.push(v);
                break;
            }
        }
    }
    Ok(out)
}

fn ground_denominator(
    ctx: &FieldContext,
    e: &[Mat],
    active: &dyn Fn(Var) -> bool,
    shift: u32,
) -> Result<Poly> {
    let mut factors: Vec<Poly> = Vec::new();
    let mut note = |p: &Poly| {
        let m = moving_part(p, active);
        if !m.is_constant() && !factors.contains(&m) {
            factors.push(m);
        }
    };
    for m in e {
        for x in m.entries() {
            note(x.num());
            note(x.den());
        }
        let det = m.det()?;
        note(det.num());
        note(det.den());
    }
    let mut all = factors.clone();
    for i in 0..e.len() {
        for f in &factors {
            for s in 1..=shift as i32 {
                for sign in [1, -1] {
                    let img = ctx.apply_pow(sigma_ref(ctx, i), sign * s, &RatFunc::from(f.clone()))?;
                    let m = moving_part(img.num(), active);
                    if !m.is_constant() && !all.contains(&m) {
                        all.push(m);
                    }
                }
            }
        }
    }
    Ok(all.iter().fold(Poly::one(), |acc, f| poly_lcm(&acc, f)))
}

fn e_residual(ctx: &FieldContext, e: &[Mat], y: &[RatFunc]) -> Result<Vec<RatFunc>> {
    let mut out = Vec::new();
    for (i, ei) in e.iter().enumerate() {
        let si = sigma_ref(ctx, i);
        for (s, row) in (0..ei.rows()).map(|s| (s, ei.row(s))) {
            let lhs = ctx.apply(si.into(), &y[s])?;
            let rhs = row
                .iter()
                .zip(y)
                .fold(RatFunc::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
            out.push(lhs.sub(&rhs));
        }
    }
    Ok(out)
}

/// Scales `y` so the first nonzero entry has numerator and denominator with leading
/// coefficient 1 in the active variables.
fn normalize_ground(y: &[RatFunc], active: &dyn Fn(Var) -> bool) -> Result<Vec<RatFunc>> {
    let Some(first) = y.iter().find(|v| !v.is_zero()) else {
        return Ok(y.to_vec());
    };
    let lead = |p: &Poly| {
        p.coefficients_over(active)
            .into_iter()
            .next_back()
            .map(|(_, c)| c)
            .unwrap_or_else(Poly::one)
    };
    let scale = RatFunc::from(lead(first.den())).div(&RatFunc::from(lead(first.num())))?;
    Ok(y.iter().map(|v| v.mul(&scale)).collect())
}

/// Ground search: candidates `y` with entries rational in the parameters moved by
/// `σ_1..σ_{k-1}`, coefficients in the remaining parameters. Returns the candidates
/// (each verified) and the ansatz that produced them; empty if none was found.
pub fn solve_e_ground(
    ctx: &FieldContext,
    e: &[Mat],
    opts: &CompletionOptions,
) -> Result<(Vec<Vec<RatFunc>>, Option<AnsatzSummary>)> {
    if ctx.adjoined_count() > 0 || e.is_empty() {
        return Ok((Vec::new(), None));
    }
    let dim = e[0].rows();
    let active_vars = active_parameters(ctx, e.len())?;
    let active = |v: Var| active_vars.contains(&v);
    let monos: Vec<Monomial> = monomials_up_to(&active_vars, opts.ground_degree);
    let mut last_den = None;
    for shift in 0..=opts.shift_bound {
        let den = ground_denominator(ctx, e, &active, shift)?;
        if last_den.as_ref() == Some(&den) {
            continue;
        }
        last_den = Some(den.clone());
        let denf = RatFunc::from(den.clone());
        let mut templates = Vec::with_capacity(dim * monos.len());
        let mut images = Vec::with_capacity(templates.capacity());
        for m in &monos {
            let scalar = RatFunc::from(Poly::term(m.clone(), crate::arith::rat(1))).div(&denf)?;
            for s in 0..dim {
                let mut y = vec![RatFunc::zero(); dim];
                y[s] = scalar.clone();
                images.push(e_residual(ctx, e, &y)?);
                templates.push(y);
            }
        }
        let kernel = template_kernel(&images, &active);
        if kernel.is_empty() {
            continue;
        }
        let assemble = |coeffs: &[RatFunc]| {
            let mut y = vec![RatFunc::zero(); dim];
            for (c, t) in coeffs.iter().zip(&templates) {
                if !c.is_zero() {
                    for (ys, ts) in y.iter_mut().zip(t) {
                        *ys = ys.add(&ts.mul(c));
                    }
                }
            }
            y
        };
        let mut candidates: Vec<Vec<RatFunc>> = kernel.iter().map(|c| assemble(c)).collect();
        if candidates.len() > 1 {
            let sum: Vec<RatFunc> = (0..templates.len())
                .map(|l| kernel.iter().fold(RatFunc::zero(), |acc, c| acc.add(&c[l])))
                .collect();
            candidates.push(assemble(&sum));
        }
        let mut out = Vec::new();
        for y in candidates {
            let y = normalize_ground(&y, &active)?;
            if !e_residual(ctx, e, &y)?.iter().all(RatFunc::is_zero) {
                return Err(CompletionError::Consistency(
                    "ground coordinates do not solve the coordinate system".into(),
                ));
            }
            out.push(y);
        }
        let summary = AnsatzSummary {
            denominator: crate::parse::format_poly_with(&den, &|v| ctx.var_name(v)),
            numerator_degree: opts.ground_degree,
            shift_bound: Some(shift),
        };
        return Ok((out, Some(summary)));
    }
    Ok((Vec::new(), None))
}

/// `Z = Σ y_s v_s`.
pub fn combine(basis: &[Mat], y: &[RatFunc]) -> Result<Mat> {
    let n = basis[0].rows();
    let mut z = Mat::zeros(n, n);
    for (v, c) in basis.iter().zip(y) {
        if !c.is_zero() {
            z = z.add(&v.scale(c))?;
        }
    }
    Ok(z)
}

/// `det Z` with `x_1 = 1` and every other adjoined coordinate zero.
pub fn det_witness(z: &Mat, vars: &[Var]) -> Result<RatFunc> {
    let det = z.det()?;
    let image = |v: Var| {
        vars.iter()
            .position(|&x| x == v)
            .map(|s| if s == 0 { RatFunc::one() } else { RatFunc::zero() })
    };
    Ok(det.substitute(&image)?)
}

struct Accepted {
    space: SolutionSpace,
    summary: AnsatzSummary,
}

fn candidate_ansatze(
    sys: &ZSystem,
    ctx: &FieldContext,
    opts: &CompletionOptions,
) -> Result<Vec<(AnsatzSpec, Option<u32>)>> {
    let mut out: Vec<(AnsatzSpec, Option<u32>)> = Vec::new();
    let numdeg = |den: &Poly| {
        opts.numerator_degree
            .unwrap_or_else(|| den.degree_over(|v| ctx.is_principal(v)) + 2)
    };
    if let Some(den) = &opts.denominator {
        out.push((
            AnsatzSpec {
                denominator: den.clone(),
                numerator_degree: numdeg(den),
            },
            None,
        ));
        return Ok(out);
    }
    for s in 0..=opts.shift_bound {
        let den = sys.default_denominator(ctx, s)?;
        if out.iter().any(|(a, _)| a.denominator == den) {
            continue;
        }
        let numerator_degree = numdeg(&den);
        out.push((
            AnsatzSpec {
                denominator: den,
                numerator_degree,
            },
            Some(s),
        ));
    }
    Ok(out)
}

/// Solves the transport system under escalating ansatz choices, accepting the first
/// space that contains every `H_i` and is invariant under every `M_i`.
fn find_space(
    spec: &SystemSpec,
    d: &[Mat],
    h: &[Mat],
    k: usize,
    opts: &CompletionOptions,
) -> Result<Accepted> {
    let ctx = &spec.ctx;
    let sys = ZSystem::new(spec, k)?;
    for (i, hi) in h.iter().enumerate() {
        if !sys.is_solution(ctx, hi)? {
            return Err(CompletionError::Consistency(format!(
                "H_{} does not solve the transport system",
                i + 1
            )));
        }
    }
    let mut tried = Vec::new();
    for (ansatz, shift) in candidate_ansatze(&sys, ctx, opts)? {
        let summary = AnsatzSummary {
            denominator: crate::parse::format_poly_with(&ansatz.denominator, &|v| ctx.var_name(v)),
            numerator_degree: ansatz.numerator_degree,
            shift_bound: shift,
        };
        tried.push(summary.clone());
        let space = sys.solve(ctx, spec.n, &ansatz)?;
        if space.dim() == 0 {
            continue;
        }
        let Some(space) = with_leading(ctx, &space, &h[0]) else {
            continue;
        };
        if h.iter().any(|hi| coords_in_basis(ctx, hi, &space.basis).is_none()) {
            continue;
        }
        let invariant = (0..k).all(|i| transport_matrix(ctx, &d[i], &h[i], i, k, &space).is_ok());
        if invariant {
            return Ok(Accepted { space, summary });
        }
    }
    Err(CompletionError::NoCompletion {
        sigma: ctx.op(sigma_ref(ctx, k)).name.clone(),
        tried,
    })
}

/// Runs the full completion. Parameters are processed in declaration order.
pub fn complete(spec: &SystemSpec, opts: &CompletionOptions) -> Result<CompletionResult> {
    let r = spec.ctx.sigma().len();
    if r == 0 || spec.c.len() != r {
        return Err(CompletionError::NoParameters);
    }
    let mut hyp = check_base(spec)?;
    hyp.extend(check_compatibility(spec, &spec.c)?);
    if !hyp.all_passed() {
        return Err(CompletionError::Precondition(hyp));
    }
    let n = spec.n;
    let mut ctx = spec.ctx.clone();
    let mut d = vec![spec.c[0].clone()];
    let mut steps = Vec::new();
    for k in 1..r {
        let c_k = &spec.c[k];
        let sigma = ctx.op(sigma_ref(&ctx, k)).name.clone();
        let mut shortcut = true;
        for (i, d_i) in d.iter().enumerate() {
            let res = sigma_sigma_residual(&ctx, (sigma_ref(&ctx, i), d_i), (sigma_ref(&ctx, k), c_k))?;
            if !res.is_zero() {
                shortcut = false;
                break;
            }
        }
        let step = if shortcut {
            StepReport {
                k,
                sigma,
                mode: StepMode::Shortcut,
                ansatz: None,
                h: Vec::new(),
                basis: Vec::new(),
                e: Vec::new(),
                y: Vec::new(),
                z: Mat::identity(n),
                adjoined: Vec::new(),
                det_witness: None,
            }
        } else {
            let (step, next) = run_step(&spec.with_context(ctx.clone()), &d, c_k, k, opts)?;
            ctx = next;
            step
        };
        d.push(step.z.mul(c_k)?);
        steps.push(step);
        let cur = spec.with_context(ctx.clone());
        let post = check_parameter(&cur, &d)?;
        if !post.all_passed() {
            return Err(CompletionError::Consistency(format!(
                "conditions fail after completing parameter {}",
                k + 1
            )));
        }
        if ctx.adjoined_count() > k * n * n {
            return Err(CompletionError::Consistency(
                "adjoined more indeterminates than the step budget allows".into(),
            ));
        }
    }
    let final_spec = SystemSpec {
        c: d.clone(),
        ..spec.with_context(ctx.clone())
    };
    let report = check_all(&final_spec, &d)?;
    if !report.all_passed() {
        return Err(CompletionError::Consistency(
            "completed system fails verification".into(),
        ));
    }
    Ok(CompletionResult {
        d,
        ctx,
        steps,
        report,
    })
}

fn run_step(
    spec: &SystemSpec,
    d: &[Mat],
    c_k: &Mat,
    k: usize,
    opts: &CompletionOptions,
) -> Result<(StepReport, FieldContext)> {
    let ctx = &spec.ctx;
    let sigma = ctx.op(sigma_ref(ctx, k)).name.clone();
    let h = (0..k)
        .map(|i| compute_h(ctx, &d[i], c_k, i, k))
        .collect::<Result<Vec<_>>>()?;
    let accepted = find_space(spec, d, &h, k, opts)?;
    let space = accepted.space;
    let e = compute_e(ctx, d, &h, k, &space)?;

    let base = |mode, y: Vec<RatFunc>, z: Mat| StepReport {
        k,
        sigma: sigma.clone(),
        mode,
        ansatz: Some(accepted.summary.clone()),
        h: h.clone(),
        basis: space.basis.clone(),
        e: e.clone(),
        y,
        z,
        adjoined: Vec::new(),
        det_witness: None,
    };

    if opts.mode != Mode::Symbolic {
        let (candidates, _) = solve_e_ground(ctx, &e, opts)?;
        let found_any = !candidates.is_empty();
        for y in candidates {
            let z = combine(&space.basis, &y)?;
            if z.is_invertible() {
                return Ok((base(StepMode::Ground, y, z), ctx.clone()));
            }
        }
        if opts.mode == Mode::Ground && !found_any {
            return Err(CompletionError::NoCompletion {
                sigma,
                tried: vec![accepted.summary],
            });
        }
    }

    let (ext, vars) = ctx.adjoin_family(k, e.clone())?;
    let y: Vec<RatFunc> = vars.iter().map(|&v| RatFunc::var(v)).collect();
    let z = combine(&space.basis, &y)?;
    let witness = det_witness(&z, &vars)?;
    if witness.is_zero() || witness != h[0].det()? {
        return Err(CompletionError::Consistency(
            "determinant witness differs from det H_1".into(),
        ));
    }
    let mut step = base(StepMode::Symbolic, y, z);
    step.adjoined = vars.iter().map(|&v| ext.var_name(v)).collect();
    step.det_witness = Some(witness);
    Ok((step, ext))
}
