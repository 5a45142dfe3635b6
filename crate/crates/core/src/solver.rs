//! Constant-coefficient matrix solutions of the gauge-transport system
//!
//! ```text
//! φ_i(Z) = σ_k(A_i) Z σ_k(A_i)^{-1}      for every Φ operator
//! ∂_i(Z) = [σ_k(B_i), Z]                 for every Δ operator
//! ```
//!
//! found by a polynomial ansatz `Z = N / den` with unknown coefficients that are
//! constants for Φ and Δ.

use serde::Serialize;

use crate::arith::{poly_gcd, poly_lcm, Monomial, Poly, RatFunc, Var};
use crate::field::{FieldContext, FieldError, OpId, OpRef};
use crate::integrability::SystemSpec;
use crate::linalg::{common_denominator, nullspace, solve_columns};
use crate::matrix::{Mat, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("solution space is empty with the given ansatz")]
    EmptySpace,
    #[error("ansatz denominator is zero")]
    ZeroDenominator,
    #[error("basis element fails the system: {0}")]
    Verification(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An explicit ansatz: entries are `numerator / denominator` with numerators of total
/// degree at most `numerator_degree` in the moving variables. The denominator is a
/// polynomial in the moving variables whose coefficients may involve constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub denominator: Poly,
    pub numerator_degree: u32,
}

/// Basis of the solution space over the constants.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    pub n: usize,
    pub basis: Vec<Mat>,
    pub ansatz: AnsatzSpec,
}

impl SolutionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Serializable summary of the ansatz used in a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnsatzSummary {
    pub denominator: String,
    pub numerator_degree: u32,
    pub shift_bound: Option<u32>,
}

/// Monomials of total degree `<= deg` in `vars`, ascending.
pub fn monomials_up_to(vars: &[Var], deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for &v in vars {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=deg.saturating_sub(m.degree()) {
                next.push(m.mul(&Monomial::var_pow(v, e)));
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Kernel of a linear map known by its values on templates.
///
/// `images[l]` lists the equations' values on template `l`; the unknown coefficients are
/// constants, i.e. free of every variable selected by `moving`, so each equation splits
/// into one row per monomial in the moving variables.
pub(crate) fn template_kernel(
    images: &[Vec<RatFunc>],
    moving: &dyn Fn(Var) -> bool,
) -> Vec<Vec<RatFunc>> {
    let l = images.len();
    if l == 0 {
        return Vec::new();
    }
    let neq = images[0].len();
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    for e in 0..neq {
        let column: Vec<RatFunc> = images.iter().map(|img| img[e].clone()).collect();
        if column.iter().all(RatFunc::is_zero) {
            continue;
        }
        let (nums, _) = common_denominator(&column);
        let split: Vec<_> = nums.iter().map(|p| p.coefficients_over(moving)).collect();
        let mut keys: Vec<&Monomial> = split.iter().flat_map(|m| m.keys()).collect();
        keys.sort();
        keys.dedup();
        for key in keys {
            rows.push(
                split
                    .iter()
                    .map(|m| m.get(key).cloned().unwrap_or_else(Poly::zero))
                    .collect(),
            );
        }
    }
    nullspace(rows, l)
}

/// The shifted coefficient matrices of one step's transport system.
#[derive(Debug, Clone)]
pub struct ZSystem {
    /// `(φ_i, σ_k(A_i))`
    pub phi: Vec<(OpId, Mat)>,
    /// `(∂_i, σ_k(B_i))`
    pub delta: Vec<(OpId, Mat)>,
}

impl ZSystem {
    /// Builds the system for Σ position `k`.
    pub fn new(spec: &SystemSpec, k: usize) -> Result<Self, FieldError> {
        let ctx = &spec.ctx;
        let sk = OpRef::forward(ctx.sigma()[k]);
        let phi = ctx
            .phi()
            .iter()
            .zip(&spec.a)
            .map(|(&id, a)| Ok((id, ctx.apply_mat(sk, a)?)))
            .collect::<Result<_, FieldError>>()?;
        let delta = ctx
            .delta()
            .iter()
            .zip(&spec.b)
            .map(|(&id, b)| Ok((id, ctx.apply_mat(sk, b)?)))
            .collect::<Result<_, FieldError>>()?;
        Ok(ZSystem { phi, delta })
    }

    /// `φ_i(Z) S_i - S_i Z` for each Φ operator, then `∂_i(Z) - [S_i, Z]` for each Δ.
    pub fn residuals(&self, ctx: &FieldContext, z: &Mat) -> Result<Vec<Mat>, SolverError> {
        let mut out = Vec::with_capacity(self.phi.len() + self.delta.len());
        for (id, s) in &self.phi {
            let pz = ctx.apply_mat(OpRef::forward(*id), z)?;
            out.push(pz.mul(s)?.sub(&s.mul(z)?)?);
        }
        for (id, s) in &self.delta {
            let dz = ctx.apply_mat(OpRef::forward(*id), z)?;
            out.push(dz.sub(&s.commutator(z)?)?);
        }
        Ok(out)
    }

    pub fn is_solution(&self, ctx: &FieldContext, z: &Mat) -> Result<bool, SolverError> {
        Ok(self.residuals(ctx, z)?.iter().all(Mat::is_zero))
    }

    /// Default universal-denominator guess: squarefree principal parts of the
    /// denominators and determinant factors of the shifted coefficient matrices (and
    /// their inverses), together with their images under `φ_j^e` for `|e| <= shift`.
    pub fn default_denominator(&self, ctx: &FieldContext, shift: u32) -> Result<Poly, SolverError> {
        let principal = |v: Var| ctx.is_principal(v);
        let mut factors: Vec<Poly> = Vec::new();
        let mut note = |p: &Poly| {
            let m = moving_part(p, &principal);
            if !m.is_constant() && !factors.contains(&m) {
                factors.push(m);
            }
        };
        for (_, s) in &self.phi {
            for e in s.entries() {
                note(e.den());
            }
            let det = s.det()?;
            note(det.num());
            note(det.den());
        }
        for (_, s) in &self.delta {
            for e in s.entries() {
                note(e.den());
            }
        }
        let mut all = factors.clone();
        for &id in ctx.phi() {
            for f in &factors {
                for e in 1..=shift as i32 {
                    for sign in [1, -1] {
                        let img = ctx.apply_pow(id, sign * e, &RatFunc::from(f.clone()))?;
                        let m = moving_part(img.num(), &principal);
                        if !m.is_constant() && !all.contains(&m) {
                            all.push(m);
                        }
                    }
                }
            }
        }
        Ok(all.iter().fold(Poly::one(), |acc, f| poly_lcm(&acc, f)))
    }

    /// Solves under a fixed ansatz. Every returned basis element is re-verified.
    pub fn solve(&self, ctx: &FieldContext, n: usize, ansatz: &AnsatzSpec) -> Result<SolutionSpace, SolverError> {
        if ansatz.denominator.is_zero() {
            return Err(SolverError::ZeroDenominator);
        }
        let principal = ctx.principal_vars();
        let monos = monomials_up_to(&principal, ansatz.numerator_degree);
        let den = RatFunc::from(ansatz.denominator.clone());
        let mut templates = Vec::with_capacity(n * n * monos.len());
        let mut images = Vec::with_capacity(templates.capacity());
        for m in &monos {
            let scalar = RatFunc::from(Poly::term(m.clone(), crate::arith::rat(1)))
                .div(&den)
                .map_err(MatrixError::from)?;
            for r in 0..n {
                for c in 0..n {
                    let mut t = Mat::zeros(n, n);
                    t.set(r, c, scalar.clone());
                    let res = self.residuals(ctx, &t)?;
                    images.push(res.iter().flat_map(|m| m.entries().to_vec()).collect());
                    templates.push(t);
                }
            }
        }
        let kernel = template_kernel(&images, &|v| ctx.is_principal(v));
        let mut basis = Vec::with_capacity(kernel.len());
        for coeffs in kernel {
            let mut z = Mat::zeros(n, n);
            for (u, t) in coeffs.iter().zip(&templates) {
                if !u.is_zero() {
                    z = z.add(&t.scale(u))?;
                }
            }
            if !self.is_solution(ctx, &z)? {
                return Err(SolverError::Verification(
                    "kernel vector does not solve the system".into(),
                ));
            }
            basis.push(z);
        }
        Ok(SolutionSpace {
            n,
            basis,
            ansatz: ansatz.clone(),
        })
    }
}

/// The factor of `p` that involves the moving variables, made squarefree and monic.
pub(crate) fn moving_part(p: &Poly, moving: &dyn Fn(Var) -> bool) -> Poly {
    if p.is_zero() {
        return Poly::one();
    }
    let groups = p.coefficients_over(moving);
    let mut content = Poly::zero();
    for c in groups.values() {
        content = poly_gcd(&content, c);
        if content.is_one() {
            break;
        }
    }
    let mut m = p.div_exact(&content).expect("content divides");
    for v in m.vars() {
        if !moving(v) {
            continue;
        }
        let g = poly_gcd(&m, &m.derivative(v));
        if !g.is_constant() {
            m = m.div_exact(&g).expect("gcd divides");
        }
    }
    m.monic()
}

/// Solves `Z = N / den` for the transport system at Σ position `k`.
pub fn solve_z_system(spec: &SystemSpec, k: usize, ansatz: &AnsatzSpec) -> Result<SolutionSpace, SolverError> {
    let sys = ZSystem::new(spec, k)?;
    let space = sys.solve(&spec.ctx, spec.n, ansatz)?;
    if space.basis.is_empty() {
        return Err(SolverError::EmptySpace);
    }
    Ok(space)
}

/// Coordinates of `m` in the basis, which must be constants; `None` if `m` is not in
/// the constant span.
pub fn coords_in_basis(ctx: &FieldContext, m: &Mat, basis: &[Mat]) -> Option<Vec<RatFunc>> {
    if basis.is_empty() {
        return m.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<RatFunc>> = basis.iter().map(Mat::vectorize).collect();
    let x = solve_columns(&cols, &m.vectorize())?;
    let constant = x
        .iter()
        .all(|c| c.vars().iter().all(|&v| !ctx.is_principal(v)));
    constant.then_some(x)
}

/// Reorders the basis so `first` leads, replacing one element it depends on.
pub fn with_leading(ctx: &FieldContext, space: &SolutionSpace, first: &Mat) -> Option<SolutionSpace> {
    let coords = coords_in_basis(ctx, first, &space.basis)?;
    let t = coords.iter().position(|c| !c.is_zero())?;
    let mut basis = vec![first.clone()];
    basis.extend(
        space
            .basis
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != t)
            .map(|(_, v)| v.clone()),
    );
    Some(SolutionSpace {
        n: space.n,
        basis,
        ansatz: space.ansatz.clone(),
    })
}
